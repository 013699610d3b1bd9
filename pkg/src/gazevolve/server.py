"""WebSocket front-end: one session per connection.

Each connection gets its own independent session, seeded from the base
seed plus a connection counter so concurrent clients evolve different
populations deterministically.  A connection's messages are handled by
its own reader loop, which serializes them in arrival order -- the
single-writer rule each session requires.

The server speaks exactly the session wire protocol; it adds nothing.
On connect it sends the generation-0 presentation; thereafter it relays
inbound messages into the session and writes every outbound message
back, confirming each presentation once it has been sent.  With a log
directory configured, every connection writes a replayable session log.
"""

from __future__ import annotations

import itertools
import json
import threading
from pathlib import Path
from typing import Optional

from websockets.sync.server import serve as ws_serve

from .config import EngineConfig
from .session import (
    Phase,
    SessionLogWriter,
    config_record,
    confirm_presentation,
    create_session,
    fatigue_record,
    handle_message,
    present_message,
)


def _dumps(msg: dict) -> str:
    return json.dumps(msg, sort_keys=True, separators=(",", ":"))


class SessionServer:
    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = 0,
        seed: int = 0,
        config: Optional[EngineConfig] = None,
        log_dir: Optional[str | Path] = None,
    ):
        self.host = host
        self.seed = seed
        self.config = config if config is not None else EngineConfig()
        self.log_dir = Path(log_dir) if log_dir is not None else None
        self._counter = itertools.count()
        self._server = ws_serve(self._handle_connection, host, port)
        self._thread: Optional[threading.Thread] = None

    @property
    def port(self) -> int:
        return self._server.socket.getsockname()[1]

    def _handle_connection(self, connection) -> None:
        index = next(self._counter)
        state = create_session(
            self.config.ga,
            seed=self.seed + index,
            fatigue_threshold=self.config.fatigue_threshold,
        )
        writer = None
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            writer = SessionLogWriter(self.log_dir / f"session-{index:03d}.jsonl")
        try:
            if writer:
                writer.write(config_record(state))
            initial = present_message(state)
            connection.send(_dumps(initial))
            if writer:
                writer.write(initial)
            for raw in connection:
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError as exc:
                    connection.send(
                        _dumps({"type": "error", "code": "parse_error", "detail": exc.msg})
                    )
                    continue
                outbound = handle_message(state, msg)
                accepted = not any(out["type"] == "error" for out in outbound)
                if writer and accepted:
                    writer.write(msg)
                for out in outbound:
                    connection.send(_dumps(out))
                    if writer and accepted and out["type"] in ("fitness", "present"):
                        writer.write(out)
                        if out["type"] == "fitness":
                            record = state.history[-1]
                            if record.fatigue is not None:
                                writer.write(fatigue_record(record.generation, record.fatigue))
                    if out["type"] == "present":
                        confirm_presentation(state)
                if state.phase is Phase.ENDED:
                    break
        finally:
            if writer:
                writer.close()

    def start(self) -> None:
        """Serve in a background thread (tests, embedding)."""
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def stop(self) -> None:
        self._server.shutdown()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
