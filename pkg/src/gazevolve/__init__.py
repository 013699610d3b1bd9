"""Gaze-driven interactive evolution of colors.

A color-genome GA whose per-individual fitness is estimated implicitly
from where (and how long) the user looks, runnable headlessly against a
simulated user or live against a human through a WebSocket client.
"""

from .config import EngineConfig, config_from_dict, load_config, save_config
from .evolution import (
    ConfigError,
    DimensionMismatchError,
    GaConfig,
    Population,
    crossover,
    evolve_step,
    init_population,
    mutate,
    select_parent,
    select_parent_tournament,
)
from .fitness import EstimatedFitness, FitnessWeights, normalized_fitness, weighted_fitness
from .gaze import (
    FatigueSignal,
    GazeSample,
    OutOfBoundsError,
    Rect,
    UnsortedStreamError,
    ZoneLayout,
    ZoneStats,
    aggregate,
    default_layout,
    fatigue_check,
    zone_at,
)
from .genome import (
    METRICS,
    FdcReport,
    Genome,
    RgbColor,
    UndefinedCorrelationError,
    brightness,
    decode_color,
    fdc,
    fdc_closed_form_m1,
    hamming_to_white,
    min_channel,
    random_genome,
    whiteness,
)
from .runner import (
    GenerationSummary,
    LogIntegrityError,
    RunReport,
    replay,
    run_headless,
    summarize_log,
)
from .session import (
    GenerationRecord,
    Phase,
    PhaseError,
    SessionLogWriter,
    SessionState,
    confirm_presentation,
    create_session,
    handle_message,
    present_message,
)
from .simuser import UserModel, simulate_choice, simulate_gaze

__version__ = "0.1.0"
