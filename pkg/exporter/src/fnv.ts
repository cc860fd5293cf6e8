const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const MASK64 = 0xffffffffffffffffn;

export const WHOLE_DOC_INDEX = -1;

export function fnv1a64(data: Uint8Array): bigint {
  let h = FNV_OFFSET;
  for (const b of data) {
    h ^= BigInt(b);
    h = (h * FNV_PRIME) & MASK64;
  }
  return h;
}

/**
 * 64-bit key hash for one record: FNV-1a over
 * utf8(docId) + "\t" + little-endian int64 index. Index -1 marks the
 * whole-document vector.
 */
export function recordKey(docId: string, index: number): bigint {
  const id = Buffer.from(docId, "utf-8");
  const buf = Buffer.alloc(id.length + 9);
  id.copy(buf, 0);
  buf[id.length] = 0x09;
  buf.writeBigInt64LE(BigInt(index), id.length + 1);
  return fnv1a64(buf);
}
