/**
 * Protocol round trips against a real local engine: spawns the Python
 * server, streams sampler-produced gaze over a WebSocket, and checks
 * rate, ordering, and round-trip latency.
 */

import assert from "node:assert/strict";
import { ChildProcess, spawn } from "node:child_process";
import net from "node:net";
import { after, before, test } from "node:test";
import WebSocket from "ws";

import { PointerSampler } from "../src/gaze.js";
import { zoneRects } from "../src/layout.js";
import {
  ServerMessage,
  buildChoose,
  buildDone,
  buildEnd,
  parseServerMessage,
} from "../src/protocol.js";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = net.createServer();
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      const port = address.port;
      srv.close(() => resolve(port));
    });
  });
}

function connectWithRetry(url: string, timeoutMs = 15000): Promise<WebSocket> {
  const deadline = Date.now() + timeoutMs;
  return new Promise((resolve, reject) => {
    const attempt = () => {
      const ws = new WebSocket(url);
      ws.once("open", () => resolve(ws));
      ws.once("error", () => {
        ws.close();
        if (Date.now() > deadline) reject(new Error(`engine not reachable at ${url}`));
        else setTimeout(attempt, 150);
      });
    };
    attempt();
  });
}

/** Collects parsed server messages and hands them out asynchronously. */
class Inbox {
  private queue: ServerMessage[] = [];
  private waiters: ((msg: ServerMessage) => void)[] = [];
  readonly errors: ServerMessage[] = [];

  push(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg.type === "error") this.errors.push(msg);
    const waiter = this.waiters.shift();
    if (waiter) waiter(msg);
    else this.queue.push(msg);
  }

  next(timeoutMs = 5000): Promise<ServerMessage> {
    const queued = this.queue.shift();
    if (queued) return Promise.resolve(queued);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("timed out waiting for engine")), timeoutMs);
      this.waiters.push((msg) => {
        clearTimeout(timer);
        resolve(msg);
      });
    });
  }
}

let engine: ChildProcess;
let ws: WebSocket;
let inbox: Inbox;

before(async () => {
  const port = await freePort();
  engine = spawn("python3", ["-m", "gazevolve", "serve", "--port", String(port), "--seed", "7"], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  engine.stderr?.on("data", (chunk) => process.stderr.write(`[engine] ${chunk}`));
  ws = await connectWithRetry(`ws://127.0.0.1:${port}`);
  inbox = new Inbox();
  ws.on("message", (data) => inbox.push(String(data)));
});

after(() => {
  ws?.close();
  engine?.kill();
});

test("engine presents generation 0 on connect", async () => {
  const msg = await inbox.next();
  assert.equal(msg.type, "present");
  if (msg.type === "present") {
    assert.equal(msg.generation, 0);
    assert.equal(msg.individuals.length, 8);
  }
});

test("scripted pointer path streams gaze at 60 +- 5 Hz with monotone timestamps", async () => {
  const sent: number[] = [];
  const sampler = new PointerSampler((msg) => {
    if (ws.readyState !== WebSocket.OPEN) return false;
    ws.send(JSON.stringify(msg));
    sent.push(msg.t_ms);
    return true;
  });

  const zone1 = zoneRects()[0]!;
  sampler.pointerMoved((zone1.x0 + zone1.x1) / 2, (zone1.y0 + zone1.y1) / 2);
  sampler.setCollecting(true);
  sampler.start();
  await new Promise((resolve) => setTimeout(resolve, 1100));
  sampler.setCollecting(false);
  sampler.stop();

  assert.ok(sent.length >= 55, `only ${sent.length} samples in ~1.1s`);
  for (let i = 1; i < sent.length; i++) {
    assert.ok(sent[i]! > sent[i - 1]!, "timestamps must be strictly increasing");
  }
  const spanSeconds = (sent[sent.length - 1]! - sent[0]!) / 1000;
  const rate = (sent.length - 1) / spanSeconds;
  assert.ok(rate >= 55 && rate <= 65, `sampling rate ${rate.toFixed(1)} Hz outside 60 +- 5`);
  assert.equal(inbox.errors.length, 0, `engine rejected gaze: ${JSON.stringify(inbox.errors)}`);
});

test("click -> choose and done -> present(generation+1) complete in under 200 ms", async () => {
  ws.send(JSON.stringify(buildChoose(1)));
  const started = performance.now();
  ws.send(JSON.stringify(buildDone()));
  const fitness = await inbox.next(2000);
  assert.equal(fitness.type, "fitness");
  if (fitness.type === "fitness") {
    assert.equal(fitness.generation, 0);
    assert.equal(fitness.chosen, 1);
    // zone 1 had all the attention and the click: cube root of 1 is 1
    assert.ok(Math.abs(fitness.values[0]! - 1.0) < 1e-9);
  }
  const present = await inbox.next(2000);
  const elapsed = performance.now() - started;
  assert.equal(present.type, "present");
  if (present.type === "present") assert.equal(present.generation, 1);
  assert.ok(elapsed < 200, `round trip took ${elapsed.toFixed(1)} ms`);
  assert.equal(inbox.errors.length, 0);
});

test("end closes the session cleanly", async () => {
  const closed = new Promise<void>((resolve) => ws.once("close", () => resolve()));
  ws.send(JSON.stringify(buildEnd()));
  await closed;
  assert.equal(inbox.errors.length, 0);
});
