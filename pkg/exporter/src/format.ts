/**
 * Binary embedding file writer and reader.
 *
 * Layout: 8 magic bytes "CCAEMB1\0", uint32 LE dim, uint64 LE record
 * count; each record is the 64-bit FNV-1a key hash followed by dim
 * little-endian float32 values. All multi-byte fields are little-endian
 * regardless of platform. The checksum is SHA-256 over every byte after
 * the fixed header.
 */

import * as fs from "node:fs";
import { createHash } from "node:crypto";

import { DataError } from "./errors";
import { recordKey } from "./fnv";

export const MAGIC = Buffer.from("CCAEMB1\0", "latin1");
export const HEADER_SIZE = 20;

export interface EmbeddingRecord {
  docId: string;
  index: number;
  vector: Float32Array;
}

export interface WriteResult {
  dim: number;
  count: number;
  checksum: string;
}

export function writeEmbeddings(
  path: string,
  dim: number,
  records: Iterable<EmbeddingRecord>,
  sidecarPath?: string,
): WriteResult {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new DataError("dim must be a positive integer");
  }
  const digest = createHash("sha256");
  const sidecarLines: string[] = [];
  const fd = fs.openSync(path, "w");
  let count = 0;
  try {
    const header = Buffer.alloc(HEADER_SIZE);
    MAGIC.copy(header, 0);
    header.writeUInt32LE(dim, 8);
    fs.writeSync(fd, header);
    let offset = HEADER_SIZE;
    const rec = Buffer.alloc(8 + 4 * dim);
    for (const { docId, index, vector } of records) {
      if (vector.length !== dim) {
        throw new DataError(
          "vector for " + docId + "[" + index + "] has length " +
          vector.length + ", want " + dim,
        );
      }
      rec.writeBigUInt64LE(recordKey(docId, index), 0);
      for (let i = 0; i < dim; i++) {
        rec.writeFloatLE(vector[i], 8 + 4 * i);
      }
      fs.writeSync(fd, rec);
      digest.update(rec);
      if (sidecarPath !== undefined) {
        sidecarLines.push(JSON.stringify({ doc_id: docId, index, offset }));
      }
      offset += rec.length;
      count += 1;
    }
    const countBuf = Buffer.alloc(8);
    countBuf.writeBigUInt64LE(BigInt(count), 0);
    fs.writeSync(fd, countBuf, 0, 8, 12);
  } finally {
    fs.closeSync(fd);
  }
  if (sidecarPath !== undefined) {
    fs.writeFileSync(sidecarPath, sidecarLines.map((l) => l + "\n").join(""));
  }
  return { dim, count, checksum: digest.digest("hex") };
}

export interface ReadResult {
  dim: number;
  count: number;
  checksum: string;
  records: Array<{ key: bigint; vector: Float32Array }>;
}

export function readEmbeddings(path: string): ReadResult {
  const buf = fs.readFileSync(path);
  if (buf.length < HEADER_SIZE) {
    throw new DataError("truncated header");
  }
  if (!buf.subarray(0, 8).equals(MAGIC)) {
    throw new DataError("bad magic bytes");
  }
  const dim = buf.readUInt32LE(8);
  if (dim === 0) {
    throw new DataError("zero dimension in header");
  }
  const count = Number(buf.readBigUInt64LE(12));
  const recSize = 8 + 4 * dim;
  if (buf.length !== HEADER_SIZE + count * recSize) {
    throw new DataError(
      "file size " + buf.length + " does not match " + count +
      " records of dim " + dim,
    );
  }
  const records: Array<{ key: bigint; vector: Float32Array }> = [];
  for (let r = 0; r < count; r++) {
    const off = HEADER_SIZE + r * recSize;
    const key = buf.readBigUInt64LE(off);
    const vector = new Float32Array(dim);
    for (let i = 0; i < dim; i++) {
      vector[i] = buf.readFloatLE(off + 8 + 4 * i);
    }
    records.push({ key, vector });
  }
  const checksum = createHash("sha256").update(buf.subarray(HEADER_SIZE)).digest("hex");
  return { dim, count, checksum, records };
}
