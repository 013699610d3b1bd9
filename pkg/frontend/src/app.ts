/**
 * Browser app: renders the swatch grid, streams pointer-as-gaze samples,
 * and relays the user's choice and done/end signals to the engine.
 */

import { PointerSampler } from "./gaze.js";
import { Rect, zoneRects } from "./layout.js";
import {
  Individual,
  ServerMessage,
  buildChoose,
  buildDone,
  buildEnd,
  parseServerMessage,
} from "./protocol.js";

export interface AppOptions {
  serverUrl: string;
  hz?: number;
  root?: HTMLElement;
  socketFactory?: (url: string) => WebSocket;
}

type ClientPhase = "connecting" | "collecting" | "waiting" | "ended";

export class App {
  private readonly options: AppOptions;
  private socket: WebSocket | null = null;
  private sampler: PointerSampler;
  private phase: ClientPhase = "connecting";
  private generation = 0;
  private chosenZone: number | null = null;

  private stage!: HTMLElement;
  private swatches: HTMLElement[] = [];
  private statusEl!: HTMLElement;
  private generationEl!: HTMLElement;
  private bannerEl!: HTMLElement;

  constructor(options: AppOptions) {
    this.options = options;
    this.sampler = new PointerSampler((msg) => this.trySend(msg), { hz: options.hz ?? 60 });
    this.buildDom(options.root ?? document.body);
  }

  start(): void {
    const factory = this.options.socketFactory ?? ((url: string) => new WebSocket(url));
    const socket = factory(this.options.serverUrl);
    this.socket = socket;
    socket.addEventListener("open", () => {
      this.setStatus("connected");
      this.sampler.flushBuffer();
    });
    socket.addEventListener("close", () => this.setStatus("disconnected"));
    socket.addEventListener("message", (event) => this.onMessage(String(event.data)));
    this.sampler.start();
  }

  private trySend(msg: object): boolean {
    if (this.socket === null || this.socket.readyState !== WebSocket.OPEN) return false;
    this.socket.send(JSON.stringify(msg));
    return true;
  }

  private onMessage(raw: string): void {
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(raw);
    } catch (err) {
      this.showBanner(`bad message from engine: ${(err as Error).message}`, "error");
      return;
    }
    switch (msg.type) {
      case "present":
        this.renderPresentation(msg.generation, msg.individuals);
        break;
      case "fitness":
        this.setStatus(
          `generation ${msg.generation} scored` +
            (msg.chosen !== null ? ` (your pick: zone ${msg.chosen})` : "")
        );
        break;
      case "fatigue_warning":
        this.showBanner(
          "You look tired — a short pause might help. " +
            `(attention at ${Math.round(100 * Math.min(msg.transition_ratio, msg.dwell_ratio))}% of recent levels)`,
          "warning"
        );
        break;
      case "error":
        this.showBanner(`${msg.code}: ${msg.detail}`, "error");
        break;
    }
  }

  private renderPresentation(generation: number, individuals: Individual[]): void {
    this.generation = generation;
    this.generationEl.textContent = `generation ${generation}`;
    this.chosenZone = null;
    for (const ind of individuals) {
      const el = this.swatches[ind.zone - 1]!;
      el.style.background = `rgb(${ind.rgb[0]}, ${ind.rgb[1]}, ${ind.rgb[2]})`;
      el.classList.remove("chosen");
    }
    this.phase = "collecting";
    this.sampler.setCollecting(true);
    this.setStatus("watch the colors, click a favourite if you like, then press done");
  }

  private onSwatchClick(zone: number): void {
    if (this.phase !== "collecting") {
      this.hint("choices only count while colors are shown");
      return;
    }
    if (this.trySend(buildChoose(zone))) {
      this.chosenZone = zone;
      this.swatches.forEach((el, i) => el.classList.toggle("chosen", i === zone - 1));
    }
  }

  private onDone(): void {
    if (this.phase !== "collecting") {
      this.hint("nothing to finish right now");
      return;
    }
    this.sampler.setCollecting(false);
    this.phase = "waiting";
    this.trySend(buildDone());
  }

  private onEnd(): void {
    if (this.phase === "ended") return;
    this.sampler.setCollecting(false);
    this.sampler.stop();
    this.trySend(buildEnd());
    this.phase = "ended";
    this.setStatus(`session ended after ${this.generation} generations — thanks!`);
  }

  // ---- DOM ----

  private buildDom(root: HTMLElement): void {
    root.innerHTML = "";
    const bar = document.createElement("div");
    bar.className = "bar";
    this.generationEl = document.createElement("span");
    this.generationEl.textContent = "generation 0";
    this.statusEl = document.createElement("span");
    this.statusEl.className = "status";
    this.statusEl.textContent = "connecting…";
    const doneButton = document.createElement("button");
    doneButton.textContent = "done";
    doneButton.addEventListener("click", () => this.onDone());
    const endButton = document.createElement("button");
    endButton.textContent = "end session";
    endButton.addEventListener("click", () => this.onEnd());
    bar.append(this.generationEl, doneButton, endButton, this.statusEl);

    this.bannerEl = document.createElement("div");
    this.bannerEl.className = "banner hidden";
    this.bannerEl.addEventListener("click", () => this.bannerEl.classList.add("hidden"));

    this.stage = document.createElement("div");
    this.stage.className = "stage";
    for (const [i, rect] of zoneRects().entries()) {
      const swatch = document.createElement("div");
      swatch.className = "swatch";
      this.placeSwatch(swatch, rect);
      swatch.addEventListener("click", () => this.onSwatchClick(i + 1));
      this.stage.appendChild(swatch);
      this.swatches.push(swatch);
    }

    this.stage.addEventListener("pointermove", (event) => {
      const box = this.stage.getBoundingClientRect();
      const x = (event.clientX - box.left) / box.width;
      const y = (event.clientY - box.top) / box.height;
      this.sampler.pointerMoved(x, y);
    });
    this.stage.addEventListener("pointerleave", () => this.sampler.pointerLeft());

    root.append(bar, this.bannerEl, this.stage);
  }

  private placeSwatch(el: HTMLElement, rect: Rect): void {
    el.style.position = "absolute";
    el.style.left = `${100 * rect.x0}%`;
    el.style.top = `${100 * rect.y0}%`;
    el.style.width = `${100 * (rect.x1 - rect.x0)}%`;
    el.style.height = `${100 * (rect.y1 - rect.y0)}%`;
  }

  private setStatus(text: string): void {
    this.statusEl.textContent = text;
  }

  private hint(text: string): void {
    this.setStatus(text);
    setTimeout(() => this.setStatus(""), 1500);
  }

  private showBanner(text: string, kind: "warning" | "error"): void {
    this.bannerEl.textContent = `${text} (click to dismiss)`;
    this.bannerEl.className = `banner ${kind}`;
  }
}
