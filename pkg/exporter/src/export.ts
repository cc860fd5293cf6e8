import * as fs from "node:fs";

import { loadModel } from "./encoder";
import { DataError, UsageError } from "./errors";
import { EmbeddingRecord, writeEmbeddings } from "./format";
import { WHOLE_DOC_INDEX } from "./fnv";
import { hashVector } from "./hash";
import { groupByDocument, readSentences, wholeDocumentText } from "./sentences";

export type ExportMode = "model" | "hash";

export interface ExportOptions {
  inPath: string;
  mode: ExportMode;
  dim: number;
  outPath: string;
  manifestPath?: string;
  sidecarPath?: string;
  modelPath?: string;
}

export interface ExportManifest {
  encoder: string;
  dim: number;
  truncation: string;
  count: number;
  checksum: string;
}

function buildEncoder(opts: ExportOptions): {
  encode: (text: string) => Float32Array;
  encoderName: string;
  truncation: string;
} {
  if (opts.mode === "hash") {
    return {
      encode: (text) => hashVector(text, opts.dim),
      encoderName: "hash-sha256",
      truncation: "none",
    };
  }
  if (opts.modelPath === undefined) {
    throw new UsageError("mode model requires --model");
  }
  const model = loadModel(opts.modelPath);
  if (model.dim !== opts.dim) {
    throw new DataError(
      "model dim " + model.dim + " does not match requested dim " + opts.dim,
    );
  }
  return {
    encode: (text) => model.encode(text),
    encoderName: model.name,
    truncation: model.truncation,
  };
}

/**
 * Encode every sentence and every whole document from the sentences JSONL
 * and write them as one binary embedding file. Documents keep first-seen
 * order; each document emits its sentence records by index, then the
 * whole-document record under index -1. Outputs are written to temporary
 * files and renamed so a failed run never leaves partial artifacts.
 */
export function runExport(opts: ExportOptions): ExportManifest {
  if (!Number.isInteger(opts.dim) || opts.dim < 1) {
    throw new UsageError("dim must be a positive integer");
  }
  const { encode, encoderName, truncation } = buildEncoder(opts);
  const groups = groupByDocument(readSentences(opts.inPath));

  function* records(): Generator<EmbeddingRecord> {
    for (const group of groups) {
      for (const rec of group.sentences) {
        yield { docId: group.docId, index: rec.index, vector: encode(rec.text) };
      }
      yield {
        docId: group.docId,
        index: WHOLE_DOC_INDEX,
        vector: encode(wholeDocumentText(group.sentences)),
      };
    }
  }

  const tmpOut = opts.outPath + ".tmp." + process.pid;
  const tmpSidecar = opts.sidecarPath !== undefined
    ? opts.sidecarPath + ".tmp." + process.pid
    : undefined;
  let info;
  try {
    info = writeEmbeddings(tmpOut, opts.dim, records(), tmpSidecar);
  } catch (err) {
    fs.rmSync(tmpOut, { force: true });
    if (tmpSidecar !== undefined) {
      fs.rmSync(tmpSidecar, { force: true });
    }
    throw err;
  }
  fs.renameSync(tmpOut, opts.outPath);
  if (tmpSidecar !== undefined && opts.sidecarPath !== undefined) {
    fs.renameSync(tmpSidecar, opts.sidecarPath);
  }
  const manifest: ExportManifest = {
    encoder: encoderName,
    dim: info.dim,
    truncation,
    count: info.count,
    checksum: info.checksum,
  };
  if (opts.manifestPath !== undefined) {
    const tmpManifest = opts.manifestPath + ".tmp." + process.pid;
    fs.writeFileSync(tmpManifest, JSON.stringify(manifest) + "\n");
    fs.renameSync(tmpManifest, opts.manifestPath);
  }
  return manifest;
}
