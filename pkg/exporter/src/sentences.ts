import * as fs from "node:fs";

import { DataError } from "./errors";

export interface SentenceRecord {
  docId: string;
  index: number;
  text: string;
  tokens: number;
}

function asRecord(obj: unknown, where: string): SentenceRecord {
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new DataError(where + ": record is not an object");
  }
  const o = obj as Record<string, unknown>;
  const docId = o["doc_id"];
  const index = o["index"];
  const text = o["text"];
  const tokens = o["tokens"];
  if (typeof docId !== "string" || docId.length === 0) {
    throw new DataError(where + ": bad doc_id");
  }
  if (typeof index !== "number" || !Number.isInteger(index)) {
    throw new DataError(where + ": bad index");
  }
  if (typeof text !== "string") {
    throw new DataError(where + ": bad text");
  }
  if (typeof tokens !== "number" || !Number.isInteger(tokens)) {
    throw new DataError(where + ": bad tokens");
  }
  return { docId, index, text, tokens };
}

export function readSentences(path: string): SentenceRecord[] {
  let raw: string;
  try {
    raw = fs.readFileSync(path, "utf-8");
  } catch (err) {
    throw new DataError("cannot read " + path + ": " + (err as Error).message);
  }
  const records: SentenceRecord[] = [];
  const lines = raw.split("\n");
  for (let ln = 0; ln < lines.length; ln++) {
    const line = lines[ln].trim();
    if (line === "") {
      continue;
    }
    const where = path + ":" + (ln + 1);
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new DataError(where + ": bad JSON: " + (err as Error).message);
    }
    records.push(asRecord(obj, where));
  }
  return records;
}

export interface DocumentGroup {
  docId: string;
  sentences: SentenceRecord[];
}

/**
 * Group sentences by document in first-seen order. Indices within a
 * document must be contiguous from zero; the sentences are returned
 * sorted by index.
 */
export function groupByDocument(records: SentenceRecord[]): DocumentGroup[] {
  const order: string[] = [];
  const byDoc = new Map<string, SentenceRecord[]>();
  for (const rec of records) {
    let bucket = byDoc.get(rec.docId);
    if (bucket === undefined) {
      bucket = [];
      byDoc.set(rec.docId, bucket);
      order.push(rec.docId);
    }
    bucket.push(rec);
  }
  const groups: DocumentGroup[] = [];
  for (const docId of order) {
    const sentences = byDoc.get(docId) as SentenceRecord[];
    sentences.sort((a, b) => a.index - b.index);
    for (let i = 0; i < sentences.length; i++) {
      if (sentences[i].index !== i) {
        throw new DataError("sentence indices for " + docId + " are not contiguous");
      }
    }
    groups.push({ docId, sentences });
  }
  return groups;
}

/** Canonical full text for whole-document vectors. */
export function wholeDocumentText(sentences: SentenceRecord[]): string {
  return sentences.map((s) => s.text).join("\n");
}
