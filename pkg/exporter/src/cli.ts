#!/usr/bin/env node
import { parseArgs } from "node:util";

import { DataError, UsageError } from "./errors";
import { ExportMode, runExport } from "./export";

export const VERSION = "0.1.0";

const USAGE = [
  "usage: embed-exporter export --in sentences.jsonl --mode {model,hash} --dim N",
  "                             --out emb.bin [--model model.json]",
  "                             [--sidecar sidecar.jsonl] [--manifest manifest.json]",
].join("\n");

function fail(message: string): number {
  process.stderr.write("embed-exporter: error: " + message + "\n" + USAGE + "\n");
  return 1;
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        mode: { type: "string" },
        dim: { type: "string" },
        out: { type: "string" },
        model: { type: "string" },
        sidecar: { type: "string" },
        manifest: { type: "string" },
        help: { type: "boolean", short: "h" },
        version: { type: "boolean" },
      },
      allowPositionals: true,
    });
  } catch (err) {
    return fail((err as Error).message);
  }
  const { values, positionals } = parsed;
  if (values.version) {
    process.stdout.write("embed-exporter " + VERSION + " (format CCAEMB1)\n");
    return 0;
  }
  if (values.help) {
    process.stdout.write(USAGE + "\n");
    return 0;
  }
  if (positionals.length !== 1 || positionals[0] !== "export") {
    return fail("expected the export command");
  }
  for (const flag of ["in", "mode", "dim", "out"] as const) {
    if (values[flag] === undefined) {
      return fail("missing required --" + flag);
    }
  }
  if (values.mode !== "model" && values.mode !== "hash") {
    return fail("mode must be model or hash, got " + JSON.stringify(values.mode));
  }
  const dim = Number(values.dim);
  if (!Number.isInteger(dim) || dim < 1) {
    return fail("dim must be a positive integer, got " + JSON.stringify(values.dim));
  }
  if (values.mode === "model" && values.model === undefined) {
    return fail("mode model requires --model");
  }
  try {
    const manifest = runExport({
      inPath: values.in as string,
      mode: values.mode as ExportMode,
      dim,
      outPath: values.out as string,
      manifestPath: values.manifest,
      sidecarPath: values.sidecar,
      modelPath: values.model,
    });
    process.stdout.write(JSON.stringify(manifest) + "\n");
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      return fail(err.message);
    }
    if (err instanceof DataError) {
      process.stderr.write("embed-exporter: error: " + err.message + "\n");
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
