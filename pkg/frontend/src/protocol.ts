/**
 * Wire protocol shared with the engine: typed messages, strict parsing
 * of server messages, and builders for the client side.
 */

import { ZONE_COUNT } from "./layout.js";

export interface Individual {
  zone: number;
  rgb: [number, number, number];
  genome: string;
}

export interface PresentMessage {
  type: "present";
  generation: number;
  individuals: Individual[];
}

export interface FitnessMessage {
  type: "fitness";
  generation: number;
  values: number[];
  chosen: number | null;
}

export interface FatigueWarning {
  type: "fatigue_warning";
  transition_ratio: number;
  dwell_ratio: number;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  detail: string;
}

export type ServerMessage = PresentMessage | FitnessMessage | FatigueWarning | ErrorMessage;

export interface GazeMessage {
  type: "gaze";
  t_ms: number;
  x: number;
  y: number;
  pupil_mm: number | null;
}

export class ProtocolFormatError extends Error {}

function fail(detail: string): never {
  throw new ProtocolFormatError(detail);
}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function checkIndividual(value: unknown, index: number): Individual {
  const ind = value as Record<string, unknown>;
  if (typeof ind !== "object" || ind === null) fail(`individual ${index} is not an object`);
  const zone = ind.zone;
  if (!Number.isInteger(zone) || (zone as number) < 1 || (zone as number) > ZONE_COUNT) {
    fail(`individual ${index}: zone must be 1..${ZONE_COUNT}`);
  }
  const rgb = ind.rgb;
  if (
    !Array.isArray(rgb) ||
    rgb.length !== 3 ||
    !rgb.every((c) => Number.isInteger(c) && c >= 0 && c <= 255)
  ) {
    fail(`individual ${index}: rgb must be three integers in 0..255`);
  }
  const genome = ind.genome;
  if (typeof genome !== "string" || !/^[01]{24}$/.test(genome)) {
    fail(`individual ${index}: genome must be a 24-char bitstring`);
  }
  return { zone: zone as number, rgb: rgb as [number, number, number], genome };
}

export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    fail("not valid JSON");
  }
  const msg = data as Record<string, unknown>;
  if (typeof msg !== "object" || msg === null || typeof msg.type !== "string") {
    fail("message must be an object with a string 'type'");
  }
  switch (msg.type) {
    case "present": {
      if (!Number.isInteger(msg.generation)) fail("present: generation must be an integer");
      if (!Array.isArray(msg.individuals) || msg.individuals.length !== ZONE_COUNT) {
        fail(`present: expected exactly ${ZONE_COUNT} individuals`);
      }
      const individuals = msg.individuals.map(checkIndividual);
      const zones = new Set(individuals.map((i) => i.zone));
      if (zones.size !== ZONE_COUNT) fail("present: duplicate zone assignment");
      return { type: "present", generation: msg.generation as number, individuals };
    }
    case "fitness": {
      if (!Number.isInteger(msg.generation)) fail("fitness: generation must be an integer");
      if (!Array.isArray(msg.values) || msg.values.length !== ZONE_COUNT || !msg.values.every(isFiniteNumber)) {
        fail(`fitness: expected ${ZONE_COUNT} numeric values`);
      }
      const chosen = msg.chosen ?? null;
      if (chosen !== null && !Number.isInteger(chosen)) fail("fitness: chosen must be a zone or null");
      return {
        type: "fitness",
        generation: msg.generation as number,
        values: msg.values as number[],
        chosen: chosen as number | null,
      };
    }
    case "fatigue_warning": {
      if (!isFiniteNumber(msg.transition_ratio) || !isFiniteNumber(msg.dwell_ratio)) {
        fail("fatigue_warning: ratios must be numbers");
      }
      return {
        type: "fatigue_warning",
        transition_ratio: msg.transition_ratio,
        dwell_ratio: msg.dwell_ratio,
      };
    }
    case "error": {
      return {
        type: "error",
        code: String(msg.code ?? "unknown"),
        detail: String(msg.detail ?? ""),
      };
    }
    default:
      fail(`unknown server message type '${msg.type}'`);
  }
}

export function buildGaze(t_ms: number, x: number, y: number): GazeMessage {
  return { type: "gaze", t_ms, x, y, pupil_mm: null };
}

export function buildChoose(zone: number): { type: "choose"; zone: number } {
  if (!Number.isInteger(zone) || zone < 1 || zone > ZONE_COUNT) {
    throw new ProtocolFormatError(`zone must be 1..${ZONE_COUNT}`);
  }
  return { type: "choose", zone };
}

export function buildDone(): { type: "done" } {
  return { type: "done" };
}

export function buildEnd(): { type: "end" } {
  return { type: "end" };
}
