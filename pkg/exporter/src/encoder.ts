import * as fs from "node:fs";

import { DataError } from "./errors";
import { hashVector } from "./hash";

/**
 * Word-vector sentence encoder loaded from a JSON model file:
 * {"name": string, "dim": int, "max_tokens": int,
 *  "vectors": {token: [dim floats], ...}}.
 *
 * A text encodes as the mean of its known token vectors after lowercasing
 * and whitespace tokenization. Input is truncated to max_tokens tokens
 * before lookup; texts with no vocabulary overlap fall back to the
 * deterministic hash embedding so every record is populated.
 */
export class ModelEncoder {
  readonly name: string;
  readonly dim: number;
  readonly maxTokens: number;
  private readonly vectors: Map<string, Float32Array>;

  constructor(name: string, dim: number, maxTokens: number, vectors: Map<string, Float32Array>) {
    this.name = name;
    this.dim = dim;
    this.maxTokens = maxTokens;
    this.vectors = vectors;
  }

  get truncation(): string {
    return "head " + this.maxTokens + " tokens";
  }

  encode(text: string): Float32Array {
    const tokens = tokenize(text).slice(0, this.maxTokens);
    const acc = new Float64Array(this.dim);
    let known = 0;
    for (const token of tokens) {
      const vec = this.vectors.get(token);
      if (vec === undefined) {
        continue;
      }
      for (let i = 0; i < this.dim; i++) {
        acc[i] += vec[i];
      }
      known += 1;
    }
    if (known === 0) {
      return hashVector(text, this.dim);
    }
    const out = new Float32Array(this.dim);
    for (let i = 0; i < this.dim; i++) {
      out[i] = acc[i] / known;
    }
    return out;
  }
}

export function tokenize(text: string): string[] {
  return text.toLowerCase().split(/\s+/).filter((t) => t.length > 0);
}

export function loadModel(path: string): ModelEncoder {
  let raw: string;
  try {
    raw = fs.readFileSync(path, "utf-8");
  } catch (err) {
    throw new DataError("cannot read model " + path + ": " + (err as Error).message);
  }
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch (err) {
    throw new DataError(path + ": model is not valid JSON: " + (err as Error).message);
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new DataError(path + ": model is not a JSON object");
  }
  const o = obj as Record<string, unknown>;
  const name = o["name"];
  const dim = o["dim"];
  const maxTokens = o["max_tokens"];
  const table = o["vectors"];
  if (typeof name !== "string" || name.length === 0) {
    throw new DataError(path + ": model needs a name");
  }
  if (typeof dim !== "number" || !Number.isInteger(dim) || dim < 1) {
    throw new DataError(path + ": model dim must be a positive integer");
  }
  if (typeof maxTokens !== "number" || !Number.isInteger(maxTokens) || maxTokens < 1) {
    throw new DataError(path + ": model max_tokens must be a positive integer");
  }
  if (typeof table !== "object" || table === null || Array.isArray(table)) {
    throw new DataError(path + ": model vectors must be an object");
  }
  const vectors = new Map<string, Float32Array>();
  for (const [token, value] of Object.entries(table as Record<string, unknown>)) {
    if (!Array.isArray(value) || value.length !== dim ||
        value.some((x) => typeof x !== "number" || !Number.isFinite(x))) {
      throw new DataError(path + ": vector for token " + JSON.stringify(token) +
        " must be " + dim + " finite numbers");
    }
    vectors.set(token, Float32Array.from(value as number[]));
  }
  return new ModelEncoder(name, dim, maxTokens, vectors);
}
