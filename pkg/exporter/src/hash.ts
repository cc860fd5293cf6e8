/**
 * Deterministic pseudo-embeddings derived from SHA-256 digests.
 *
 * Every step is exact or correctly rounded in IEEE-754 float64, so any
 * runtime that follows the same recipe produces bit-identical vectors:
 * digest of utf8(text) + big-endian uint32 block counter, eight big-endian
 * words per digest mapped to [-1, 1), a sequential float64 sum of squares,
 * and a final float32 cast. The norm loop must stay sequential; pairwise
 * summation would round differently.
 */

import { createHash } from "node:crypto";

const WORD_SCALE = 2 ** 32;

export function hashVector(text: string, dim: number): Float32Array {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new Error("dim must be positive");
  }
  const payload = Buffer.from(text, "utf-8");
  const comps: number[] = [];
  let block = 0;
  while (comps.length < dim) {
    const counter = Buffer.alloc(4);
    counter.writeUInt32BE(block, 0);
    const digest = createHash("sha256").update(payload).update(counter).digest();
    for (let i = 0; i < 8 && comps.length < dim; i++) {
      const word = digest.readUInt32BE(i * 4);
      comps.push((word / WORD_SCALE) * 2 - 1);
    }
    block += 1;
  }
  let sumsq = 0;
  for (const c of comps) {
    sumsq += c * c;
  }
  if (sumsq === 0) {
    comps[0] = 1;
    sumsq = 1;
  }
  const norm = Math.sqrt(sumsq);
  const out = new Float32Array(dim);
  for (let i = 0; i < dim; i++) {
    out[i] = comps[i] / norm;
  }
  return out;
}

/** Cosine similarity in float64, clamped to [-1, 1]. */
export function cosine(a: Float32Array, b: Float32Array): number {
  if (a.length !== b.length) {
    throw new Error("vectors have different lengths");
  }
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na === 0 || nb === 0) {
    return 0;
  }
  return Math.max(-1, Math.min(1, dot / Math.sqrt(na * nb)));
}
