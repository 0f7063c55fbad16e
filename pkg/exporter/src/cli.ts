#!/usr/bin/env ts-node
/**
 * Exporter CLI.
 *
 *   ts-node src/cli.ts export --dump <backend dump> --out <fixture> [--verify]
 *
 * --verify round-trips the written file through the core's check-fixture
 * subcommand; backend/core failures are surfaced verbatim with a stage tag.
 */

import { spawnSync } from "child_process";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { buildFixture, loadDump, writeFixture } from "./export";

function verifyWithCore(path: string): void {
  const run = spawnSync("plectic", ["check-fixture", "--fixture", path], {
    encoding: "utf8",
  });
  if (run.error) {
    throw new Error(`[stage core-verify] ${run.error.message}`);
  }
  if (run.status !== 0) {
    throw new Error(
      `[stage core-verify] check-fixture exited ${run.status}:\n` +
        `${run.stdout}${run.stderr}`.trim(),
    );
  }
  process.stdout.write(run.stdout);
}

yargs(hideBin(process.argv))
  .command(
    "export",
    "validate a backend dump and write a core-loadable fixture",
    (y) =>
      y
        .option("dump", { type: "string", demandOption: true })
        .option("out", { type: "string", demandOption: true })
        .option("kappa-samples", { type: "number", default: 100 })
        .option("radial-depth", { type: "number", default: 2 })
        .option("verify", { type: "boolean", default: false }),
    (argv) => {
      let dump;
      try {
        dump = loadDump(argv.dump);
      } catch (err) {
        console.error(`[stage dump-validate] ${(err as Error).message}`);
        process.exit(2);
      }
      let doc;
      try {
        doc = buildFixture(dump, {
          kappaSamples: argv["kappa-samples"],
          radialDepth: argv["radial-depth"],
        });
      } catch (err) {
        console.error(`[stage contract-check] ${(err as Error).message}`);
        process.exit(3);
      }
      writeFixture(doc, argv.out);
      console.log(
        `wrote ${argv.out}: ${doc.generators.length} generators, ` +
          `p=${doc.p} m_max=${doc.m_max} (${doc.manifest.curve_label})`,
      );
      if (argv.verify) {
        try {
          verifyWithCore(argv.out);
        } catch (err) {
          console.error((err as Error).message);
          process.exit(4);
        }
      }
    },
  )
  .demandCommand(1)
  .strict()
  .parse();
