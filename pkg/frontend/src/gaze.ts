/**
 * Pointer-as-gaze capture: samples the latest pointer position at a
 * fixed cadence and emits gaze messages with monotone timestamps.
 *
 * Sampling is gated on the collecting flag so nothing is ever emitted
 * between sending "done" and receiving the next presentation.  When the
 * transport is down, samples are buffered for up to five seconds and
 * then dropped oldest-first; the buffer drains on reconnect.
 */

import { GazeMessage, buildGaze } from "./protocol.js";

export interface SamplerOptions {
  /** Sampling cadence; 60 Hz matches common tracker hardware. */
  hz?: number;
  /** Seconds of samples retained while the transport is down. */
  bufferSeconds?: number;
  /** Millisecond clock; injectable for tests. */
  now?: () => number;
  schedule?: (callback: () => void, intervalMs: number) => unknown;
  cancel?: (handle: unknown) => void;
}

/** Transport hook: return false to signal the sample could not be sent. */
export type SendGaze = (msg: GazeMessage) => boolean;

interface ChainHandle {
  stop(): void;
}

/**
 * Self-correcting interval: each callback is scheduled against the ideal
 * timeline, so timer jitter does not erode the average sampling rate the
 * way a plain setInterval does.
 */
function driftlessInterval(callback: () => void, intervalMs: number): ChainHandle {
  let stopped = false;
  let next = Date.now() + intervalMs;
  let timer: ReturnType<typeof setTimeout>;
  const loop = () => {
    if (stopped) return;
    callback();
    next += intervalMs;
    timer = setTimeout(loop, Math.max(0, next - Date.now()));
  };
  timer = setTimeout(loop, intervalMs);
  return {
    stop() {
      stopped = true;
      clearTimeout(timer);
    },
  };
}

export class PointerSampler {
  readonly hz: number;
  private readonly bufferLimit: number;
  private readonly now: () => number;
  private readonly schedule: (callback: () => void, intervalMs: number) => unknown;
  private readonly cancel: (handle: unknown) => void;
  private readonly send: SendGaze;

  private handle: unknown = null;
  private collecting = false;
  private position: { x: number; y: number } | null = null;
  private epoch: number | null = null;
  private lastT = -1;
  private buffer: GazeMessage[] = [];

  constructor(send: SendGaze, options: SamplerOptions = {}) {
    this.send = send;
    this.hz = options.hz ?? 60;
    this.bufferLimit = Math.ceil((options.bufferSeconds ?? 5) * this.hz);
    this.now = options.now ?? (() => Date.now());
    this.schedule = options.schedule ?? ((cb, ms) => driftlessInterval(cb, ms));
    this.cancel = options.cancel ?? ((h) => (h as ChainHandle).stop());
  }

  start(): void {
    if (this.handle !== null) return;
    this.handle = this.schedule(() => this.tick(), 1000 / this.hz);
  }

  stop(): void {
    if (this.handle !== null) {
      this.cancel(this.handle);
      this.handle = null;
    }
  }

  setCollecting(on: boolean): void {
    this.collecting = on;
  }

  get isCollecting(): boolean {
    return this.collecting;
  }

  get bufferedCount(): number {
    return this.buffer.length;
  }

  /** Latest pointer position in normalized [0,1]^2 viewport coordinates. */
  pointerMoved(x: number, y: number): void {
    if (x < 0 || x > 1 || y < 0 || y > 1) {
      this.position = null; // outside the viewport: emit nothing
      return;
    }
    this.position = { x, y };
  }

  pointerLeft(): void {
    this.position = null;
  }

  /** One sampling step; exposed for tests driving a fake clock. */
  tick(): void {
    if (!this.collecting || this.position === null) return;
    if (this.epoch === null) this.epoch = this.now();
    let t = Math.round(this.now() - this.epoch);
    if (t <= this.lastT) t = this.lastT + 1; // keep timestamps strictly increasing
    this.lastT = t;
    const msg = buildGaze(t, this.position.x, this.position.y);
    this.dispatch(msg);
  }

  private dispatch(msg: GazeMessage): void {
    if (this.send(msg)) return;
    this.buffer.push(msg);
    while (this.buffer.length > this.bufferLimit) {
      this.buffer.shift(); // transport down too long: drop oldest first
    }
  }

  /** Drain buffered samples after the transport comes back. */
  flushBuffer(): void {
    while (this.buffer.length > 0) {
      const msg = this.buffer[0]!;
      if (!this.send(msg)) return; // still down; keep the rest
      this.buffer.shift();
    }
  }
}
