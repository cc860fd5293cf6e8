import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { loadModel, tokenize } from "../src/encoder";
import { DataError, UsageError } from "../src/errors";
import { runExport } from "../src/export";
import { recordKey, WHOLE_DOC_INDEX } from "../src/fnv";
import { readEmbeddings } from "../src/format";
import { hashVector } from "../src/hash";

let dir: string;

beforeEach(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "embexp-"));
});

afterEach(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

function writeJsonl(name: string, rows: object[]): string {
  const p = path.join(dir, name);
  fs.writeFileSync(p, rows.map((r) => JSON.stringify(r) + "\n").join(""));
  return p;
}

function sentenceRows(): object[] {
  return [
    { doc_id: "a", index: 0, text: "first sentence", tokens: 2 },
    { doc_id: "a", index: 1, text: "second sentence", tokens: 2 },
    { doc_id: "b", index: 0, text: "lonely", tokens: 1 },
  ];
}

describe("runExport hash mode", () => {
  it("emits sentence records then a whole-document record per doc", () => {
    const inPath = writeJsonl("s.jsonl", sentenceRows());
    const out = path.join(dir, "e.bin");
    const manifest = runExport({
      inPath, mode: "hash", dim: 16, outPath: out,
      manifestPath: path.join(dir, "m.json"),
      sidecarPath: path.join(dir, "side.jsonl"),
    });

    const back = readEmbeddings(out);
    expect(back.dim).toBe(16);
    expect(back.count).toBe(5);
    const wantKeys = [
      recordKey("a", 0), recordKey("a", 1), recordKey("a", WHOLE_DOC_INDEX),
      recordKey("b", 0), recordKey("b", WHOLE_DOC_INDEX),
    ];
    expect(back.records.map((r) => r.key)).toEqual(wantKeys);

    const wantVectors = [
      hashVector("first sentence", 16),
      hashVector("second sentence", 16),
      hashVector("first sentence\nsecond sentence", 16),
      hashVector("lonely", 16),
      hashVector("lonely", 16),
    ];
    back.records.forEach((rec, i) => {
      expect(Array.from(rec.vector)).toEqual(Array.from(wantVectors[i]));
    });

    expect(manifest.encoder).toBe("hash-sha256");
    expect(manifest.truncation).toBe("none");
    expect(manifest.count).toBe(5);
    expect(manifest.checksum).toBe(back.checksum);
    const onDisk = JSON.parse(fs.readFileSync(path.join(dir, "m.json"), "utf-8"));
    expect(onDisk).toEqual(manifest);
  });

  it("orders documents by first appearance and sentences by index", () => {
    const inPath = writeJsonl("s.jsonl", [
      { doc_id: "x", index: 1, text: "x one", tokens: 2 },
      { doc_id: "y", index: 0, text: "y zero", tokens: 2 },
      { doc_id: "x", index: 0, text: "x zero", tokens: 2 },
    ]);
    const out = path.join(dir, "e.bin");
    runExport({ inPath, mode: "hash", dim: 8, outPath: out });
    const keys = readEmbeddings(out).records.map((r) => r.key);
    expect(keys).toEqual([
      recordKey("x", 0), recordKey("x", 1), recordKey("x", WHOLE_DOC_INDEX),
      recordKey("y", 0), recordKey("y", WHOLE_DOC_INDEX),
    ]);
  });

  it("rejects gaps and duplicates in sentence indices", () => {
    const gap = writeJsonl("gap.jsonl", [
      { doc_id: "d", index: 0, text: "a", tokens: 1 },
      { doc_id: "d", index: 2, text: "b", tokens: 1 },
    ]);
    expect(() => runExport({ inPath: gap, mode: "hash", dim: 8, outPath: path.join(dir, "g.bin") }))
      .toThrow(/not contiguous/);
    const dup = writeJsonl("dup.jsonl", [
      { doc_id: "d", index: 0, text: "a", tokens: 1 },
      { doc_id: "d", index: 0, text: "b", tokens: 1 },
    ]);
    expect(() => runExport({ inPath: dup, mode: "hash", dim: 8, outPath: path.join(dir, "d.bin") }))
      .toThrow(/not contiguous/);
  });

  it("surfaces unreadable input and bad records as data errors", () => {
    expect(() => runExport({
      inPath: path.join(dir, "missing.jsonl"), mode: "hash", dim: 8,
      outPath: path.join(dir, "e.bin"),
    })).toThrow(DataError);

    const bad = path.join(dir, "bad.jsonl");
    fs.writeFileSync(bad, '{"doc_id": "a", "index": 0, "text": "ok", "tokens": 1}\nnot json\n');
    expect(() => runExport({ inPath: bad, mode: "hash", dim: 8, outPath: path.join(dir, "e.bin") }))
      .toThrow(/bad JSON/);

    const incomplete = writeJsonl("inc.jsonl", [{ doc_id: "a", index: 0, tokens: 1 }]);
    expect(() => runExport({ inPath: incomplete, mode: "hash", dim: 8, outPath: path.join(dir, "e.bin") }))
      .toThrow(/bad text/);
  });

  it("leaves no partial artifacts behind on failure", () => {
    const gap = writeJsonl("gap.jsonl", [
      { doc_id: "d", index: 1, text: "a", tokens: 1 },
    ]);
    const out = path.join(dir, "stays.bin");
    expect(() => runExport({ inPath: gap, mode: "hash", dim: 8, outPath: out })).toThrow();
    expect(fs.readdirSync(dir).filter((n) => n.includes(".tmp."))).toEqual([]);
    expect(fs.existsSync(out)).toBe(false);
  });
});

function writeModel(name: string, body: object): string {
  const p = path.join(dir, name);
  fs.writeFileSync(p, JSON.stringify(body));
  return p;
}

const MODEL = {
  name: "toy-word-avg/1.0",
  dim: 4,
  max_tokens: 3,
  vectors: {
    hello: [1, 0, 0, 0],
    world: [0, 1, 0, 0],
    bonjour: [0, 0, 2, 0],
  },
};

describe("model encoder", () => {
  it("tokenizes by lowercased whitespace split", () => {
    expect(tokenize("Hello  WORLD\n bonjour")).toEqual(["hello", "world", "bonjour"]);
    expect(tokenize("   ")).toEqual([]);
  });

  it("averages known token vectors", () => {
    const model = loadModel(writeModel("m.json", MODEL));
    expect(Array.from(model.encode("Hello WORLD"))).toEqual([0.5, 0.5, 0, 0]);
    expect(Array.from(model.encode("hello oov world"))).toEqual([0.5, 0.5, 0, 0]);
  });

  it("truncates input to max_tokens before lookup", () => {
    const model = loadModel(writeModel("m.json", MODEL));
    // Only the first three tokens survive, so bonjour never contributes.
    const vec = model.encode("hello world hello world bonjour");
    expect(Array.from(vec)).toEqual([Math.fround(2 / 3), Math.fround(1 / 3), 0, 0]);
    expect(model.truncation).toBe("head 3 tokens");
  });

  it("falls back to the hash embedding with no vocabulary overlap", () => {
    const model = loadModel(writeModel("m.json", MODEL));
    expect(Array.from(model.encode("zzz qqq"))).toEqual(Array.from(hashVector("zzz qqq", 4)));
  });

  it("rejects malformed model files", () => {
    expect(() => loadModel(path.join(dir, "nope.json"))).toThrow(/cannot read model/);
    expect(() => loadModel(writeModel("j.json", { ...MODEL, dim: 0 }))).toThrow(/dim/);
    expect(() => loadModel(writeModel("k.json", { ...MODEL, vectors: { a: [1] } })))
      .toThrow(/4 finite numbers/);
    const garbled = path.join(dir, "g.json");
    fs.writeFileSync(garbled, "{nope");
    expect(() => loadModel(garbled)).toThrow(/not valid JSON/);
  });
});

describe("runExport model mode", () => {
  it("encodes sentences and whole documents with the model", () => {
    const inPath = writeJsonl("s.jsonl", [
      { doc_id: "a", index: 0, text: "hello", tokens: 1 },
      { doc_id: "a", index: 1, text: "world", tokens: 1 },
    ]);
    const out = path.join(dir, "e.bin");
    const manifest = runExport({
      inPath, mode: "model", dim: 4, outPath: out,
      modelPath: writeModel("m.json", MODEL),
    });
    expect(manifest.encoder).toBe("toy-word-avg/1.0");
    expect(manifest.truncation).toBe("head 3 tokens");

    const back = readEmbeddings(out);
    expect(Array.from(back.records[0].vector)).toEqual([1, 0, 0, 0]);
    expect(Array.from(back.records[1].vector)).toEqual([0, 1, 0, 0]);
    // Whole doc "hello\nworld" splits into both tokens.
    expect(Array.from(back.records[2].vector)).toEqual([0.5, 0.5, 0, 0]);
  });

  it("rejects a model whose dim differs from the requested dim", () => {
    const inPath = writeJsonl("s.jsonl", sentenceRows());
    expect(() => runExport({
      inPath, mode: "model", dim: 8, outPath: path.join(dir, "e.bin"),
      modelPath: writeModel("m.json", MODEL),
    })).toThrow(/does not match requested dim/);
  });

  it("requires a model path", () => {
    const inPath = writeJsonl("s.jsonl", sentenceRows());
    expect(() => runExport({ inPath, mode: "model", dim: 4, outPath: path.join(dir, "e.bin") }))
      .toThrow(UsageError);
  });
});
