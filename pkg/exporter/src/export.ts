/**
 * Turn a validated backend dump into a fixture file the core loads,
 * with an embedded provenance manifest.  Serialization is exact and
 * deterministic (sorted keys), so re-exporting the same dump is
 * byte-identical.
 */

import * as fs from "fs";

import { BackendDump, BackendDumpT, FixtureDoc, FixtureDocT } from "./schema";
import { checkKappaAdditivity, checkRadialContracts } from "./checks";

export interface ExportOptions {
  kappaSamples?: number;
  radialDepth?: number;
  /** Override the timestamp (tests want byte-determinism). */
  exportedAt?: string;
}

export function loadDump(path: string): BackendDumpT {
  const raw = JSON.parse(fs.readFileSync(path, "utf8"));
  const parsed = BackendDump.safeParse(raw);
  if (!parsed.success) {
    const lines = parsed.error.issues
      .map((i) => `  ${i.path.join(".") || "(root)"}: ${i.message}`)
      .join("\n");
    throw new Error(`backend dump failed validation:\n${lines}`);
  }
  return parsed.data;
}

export function buildFixture(
  dump: BackendDumpT,
  opts: ExportOptions = {},
): FixtureDocT {
  const kappaSamples = opts.kappaSamples ?? 100;
  const radialDepth = opts.radialDepth ?? 2;
  checkKappaAdditivity(dump, kappaSamples);
  checkRadialContracts(dump, radialDepth);

  const doc: FixtureDocT = {
    schema_version: 1,
    p: dump.p,
    m_max: dump.m_max,
    field: dump.field ?? null,
    beta: dump.beta ?? null,
    ainvs: dump.ainvs ?? null,
    expected: dump.expected ?? null,
    generators: dump.generators,
    psi_u: dump.psi_u ?? null,
    radials: dump.radials,
    kappa_atoms: dump.kappa_atoms,
    kappa_table: null,
    manifest: {
      schema: 1,
      curve_label: dump.curve_label,
      backend: dump.backend,
      backend_version: dump.backend_version,
      seed: dump.seed ?? null,
      exported_at: opts.exportedAt ?? new Date().toISOString(),
      checks: { kappa_products: kappaSamples, radial_depth: radialDepth },
    },
  };
  // re-validate what we are about to write
  return FixtureDoc.parse(doc);
}

function sortedReplacer(_key: string, value: unknown): unknown {
  if (value && typeof value === "object" && !Array.isArray(value)) {
    return Object.fromEntries(
      Object.entries(value as Record<string, unknown>).sort(([a], [b]) =>
        a < b ? -1 : a > b ? 1 : 0,
      ),
    );
  }
  return value;
}

export function writeFixture(doc: FixtureDocT, path: string): void {
  fs.writeFileSync(path, JSON.stringify(doc, sortedReplacer, 1) + "\n");
}
