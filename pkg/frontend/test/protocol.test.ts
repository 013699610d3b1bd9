import assert from "node:assert/strict";
import { test } from "node:test";

import {
  ProtocolFormatError,
  buildChoose,
  buildDone,
  buildEnd,
  buildGaze,
  parseServerMessage,
} from "../src/protocol.js";

function presentPayload(count = 8): object {
  const individuals = [];
  for (let zone = 1; zone <= count; zone++) {
    individuals.push({ zone, rgb: [zone * 10, 0, 255 - zone * 10], genome: "10".repeat(12) });
  }
  return { type: "present", generation: 3, individuals };
}

test("parses a presentation", () => {
  const msg = parseServerMessage(JSON.stringify(presentPayload()));
  assert.equal(msg.type, "present");
  if (msg.type === "present") {
    assert.equal(msg.generation, 3);
    assert.equal(msg.individuals.length, 8);
    assert.deepEqual(msg.individuals[0]!.rgb, [10, 0, 245]);
  }
});

test("rejects a presentation with seven individuals", () => {
  assert.throws(() => parseServerMessage(JSON.stringify(presentPayload(7))), ProtocolFormatError);
});

test("rejects duplicate zones", () => {
  const payload = presentPayload() as { individuals: { zone: number }[] };
  payload.individuals[1]!.zone = 1;
  assert.throws(() => parseServerMessage(JSON.stringify(payload)), ProtocolFormatError);
});

test("rejects a malformed genome", () => {
  const payload = presentPayload() as { individuals: { genome: string }[] };
  payload.individuals[0]!.genome = "about-24-chars-of-junk!!";
  assert.throws(() => parseServerMessage(JSON.stringify(payload)), ProtocolFormatError);
});

test("parses fitness with and without a choice", () => {
  const base = { type: "fitness", generation: 1, values: new Array(8).fill(0.125) };
  const withChoice = parseServerMessage(JSON.stringify({ ...base, chosen: 5 }));
  assert.equal(withChoice.type, "fitness");
  if (withChoice.type === "fitness") assert.equal(withChoice.chosen, 5);
  const noChoice = parseServerMessage(JSON.stringify({ ...base, chosen: null }));
  if (noChoice.type === "fitness") assert.equal(noChoice.chosen, null);
});

test("parses fatigue warnings and errors", () => {
  const warning = parseServerMessage(
    JSON.stringify({ type: "fatigue_warning", transition_ratio: 0.4, dwell_ratio: 1.0 })
  );
  assert.equal(warning.type, "fatigue_warning");
  const error = parseServerMessage(
    JSON.stringify({ type: "error", code: "protocol_error", detail: "nope" })
  );
  assert.equal(error.type, "error");
});

test("rejects junk", () => {
  assert.throws(() => parseServerMessage("{nope"), ProtocolFormatError);
  assert.throws(() => parseServerMessage(JSON.stringify({ type: "launch" })), ProtocolFormatError);
  assert.throws(() => parseServerMessage(JSON.stringify([1, 2])), ProtocolFormatError);
});

test("builders produce exactly the wire shapes", () => {
  assert.deepEqual(buildGaze(120, 0.25, 0.75), {
    type: "gaze",
    t_ms: 120,
    x: 0.25,
    y: 0.75,
    pupil_mm: null,
  });
  assert.deepEqual(buildChoose(5), { type: "choose", zone: 5 });
  assert.deepEqual(buildDone(), { type: "done" });
  assert.deepEqual(buildEnd(), { type: "end" });
  assert.throws(() => buildChoose(9), ProtocolFormatError);
});
