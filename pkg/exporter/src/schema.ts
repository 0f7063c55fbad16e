/**
 * zod schemas for the two boundary documents: the raw backend dump (what a
 * computer-algebra run hands over) and the fixture file the core loads.
 * Matrix entries are exact [numerator, denominator] integer pairs; no
 * floating point is accepted anywhere.
 */

import { z } from "zod";

const intLike = z.number().int();

export const RatPair = z
  .tuple([intLike, intLike])
  .refine(([, d]) => d !== 0, { message: "zero denominator" });

export const MatJson = z.tuple([
  z.tuple([RatPair, RatPair]),
  z.tuple([RatPair, RatPair]),
]);

export const WordJson = z.array(z.tuple([z.string(), intLike]));

export const ElemJson = z.object({
  m1: MatJson,
  m2: MatJson,
  word: WordJson.nullish(),
});
export type ElemJsonT = z.infer<typeof ElemJson>;

export const GeneratorJson = ElemJson.extend({
  id: z.string().min(1),
  kappa: intLike.nullish(),
});

export const RadialsJson = z.object({
  tree1_edges: z.record(ElemJson),
  tree1_vertices: z.record(ElemJson),
  tree2_edges: z.record(ElemJson),
  tree2_vertices: z.record(ElemJson),
});

const rationalString = z.string().regex(/^-?\d+(\/\d+)?$/);

const curveFields = {
  field: z.object({ D: intLike.positive() }).nullish(),
  beta: z.tuple([rationalString, rationalString]).nullish(),
  ainvs: z.array(z.tuple([rationalString, rationalString])).length(5).nullish(),
  expected: z.record(z.string()).nullish(),
};

/** Raw backend output: group data plus provenance, no schema_version. */
export const BackendDump = z.object({
  backend: z.string().min(1),
  backend_version: z.string(),
  curve_label: z.string().min(1),
  seed: intLike.nullish(),
  p: intLike.refine((p) => p >= 2, { message: "p must be a prime >= 2" }),
  m_max: intLike.positive(),
  generators: z.array(GeneratorJson).min(1),
  psi_u: ElemJson.nullish(),
  radials: RadialsJson,
  kappa_atoms: z.record(intLike),
  kappa_products: z
    .array(z.object({ left: z.string(), right: z.string(), value: intLike }))
    .nullish(),
  ...curveFields,
});
export type BackendDumpT = z.infer<typeof BackendDump>;

export const Manifest = z.object({
  schema: z.literal(1),
  curve_label: z.string(),
  backend: z.string(),
  backend_version: z.string(),
  seed: intLike.nullish(),
  exported_at: z.string(),
  checks: z.object({
    kappa_products: intLike.nonnegative(),
    radial_depth: intLike.nonnegative(),
  }),
});

/** The document the core's loader accepts (schema_version 1). */
export const FixtureDoc = z.object({
  schema_version: z.literal(1),
  p: intLike,
  m_max: intLike,
  generators: z.array(GeneratorJson),
  psi_u: ElemJson.nullish(),
  radials: RadialsJson,
  kappa_atoms: z.record(intLike).nullish(),
  kappa_table: z.array(z.tuple([z.string(), intLike])).nullish(),
  manifest: Manifest,
  ...curveFields,
});
export type FixtureDocT = z.infer<typeof FixtureDoc>;
