/**
 * Pre-write contract checks: kappa additivity on sampled products and the
 * radial transport contracts at small depth.  A dump that fails any of
 * these would load into the core but produce garbage invariants, so the
 * exporter refuses to write it.
 */

import { BackendDumpT, ElemJsonT } from "./schema";
import { valP } from "./rational";
import {
  act,
  actVertexKey,
  baseEdge,
  edgeFromId,
  idDepth,
  matDet,
  matFromJson,
  projInv,
  vertexKeyFromId,
} from "./tree";

type Word = [string, number][];

/** Deterministic PRNG so check failures reproduce (mulberry32). */
export function rng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function kappaOfWord(
  word: Word,
  atoms: Record<string, number>,
): number {
  let total = 0;
  for (const [atom, sign] of word) {
    const v = atoms[atom];
    if (v === undefined) {
      throw new Error(`word references unknown kappa atom ${JSON.stringify(atom)}`);
    }
    total += sign * v;
  }
  return total;
}

function wordOf(elem: ElemJsonT, what: string): Word {
  if (elem.word === undefined || elem.word === null) {
    throw new Error(`${what} carries no word; kappa cannot be checked`);
  }
  return elem.word as Word;
}

/**
 * Spot-check that the emitted kappa data is additive: kappa of a random
 * product of generators equals the sum of the factors' kappas, and any
 * precomputed product values in the dump agree with the atom table.
 */
export function checkKappaAdditivity(dump: BackendDumpT, samples = 100): void {
  const atoms = dump.kappa_atoms;
  const byId = new Map(dump.generators.map((g) => [g.id, g]));

  for (const g of dump.generators) {
    const w = wordOf(g, `generator ${g.id}`);
    const fromWord = kappaOfWord(w, atoms);
    if (g.kappa !== undefined && g.kappa !== null && g.kappa !== fromWord) {
      throw new Error(
        `generator ${g.id}: stored kappa ${g.kappa} != word sum ${fromWord}`,
      );
    }
  }

  const rand = rng(dump.seed ?? 1);
  const gens = dump.generators;
  for (let i = 0; i < samples; i++) {
    const g = gens[Math.floor(rand() * gens.length)];
    const h = gens[Math.floor(rand() * gens.length)];
    const gw = wordOf(g, `generator ${g.id}`);
    const hw = wordOf(h, `generator ${h.id}`);
    const product: Word = [...gw, ...hw];
    const lhs = kappaOfWord(product, atoms);
    const rhs = kappaOfWord(gw, atoms) + kappaOfWord(hw, atoms);
    if (lhs !== rhs) {
      throw new Error(
        `kappa not additive on ${g.id}*${h.id}: ${lhs} != ${rhs}`,
      );
    }
  }

  for (const entry of dump.kappa_products ?? []) {
    const left = byId.get(entry.left);
    const right = byId.get(entry.right);
    if (!left || !right) {
      throw new Error(
        `kappa_products references unknown generator ` +
          `${JSON.stringify(!left ? entry.left : entry.right)}`,
      );
    }
    const got =
      kappaOfWord(wordOf(left, entry.left), atoms) +
      kappaOfWord(wordOf(right, entry.right), atoms);
    if (got !== entry.value) {
      throw new Error(
        `kappa_products ${entry.left}*${entry.right}: ` +
          `backend says ${entry.value}, atom table gives ${got}`,
      );
    }
  }
}

/**
 * Radial transport contracts, mirroring the core's validate():
 *   - gamma_e^{-1} carries the base edge to the indexed edge (tree-1 via
 *     m1, tree-2 via m2), gamma_v^{-1} carries the parity base variant to
 *     the indexed vertex;
 *   - tree-2 radials stabilize the tree-1 base edge through m1;
 *   - every matrix has even determinant valuation.
 * Transport is checked for entries of depth <= maxDepth, determinant
 * parity everywhere.
 */
export function checkRadialContracts(dump: BackendDumpT, maxDepth = 2): void {
  const p = dump.p;
  const e0 = baseEdge(p);

  const checkDet = (elem: ElemJsonT, label: string) => {
    for (const side of ["m1", "m2"] as const) {
      const m = matFromJson(elem[side]);
      const det = matDet(m);
      if (det.isZero()) {
        throw new Error(`radial contract violated at ${label}: singular ${side}`);
      }
      if (((valP(det, p) % 2) + 2) % 2 !== 0) {
        throw new Error(
          `radial contract violated at ${label}: ` +
            `odd determinant valuation in ${side}`,
        );
      }
    }
  };

  const checkStabilizer = (elem: ElemJsonT, label: string) => {
    const image = act(matFromJson(elem.m1), e0);
    if (!image.eq(e0)) {
      throw new Error(
        `radial contract violated at ${label}: ` +
          `does not stabilize the tree-1 base edge`,
      );
    }
  };

  const edgeSections: [string, Record<string, ElemJsonT>, "m1" | "m2"][] = [
    ["tree1_edges", dump.radials.tree1_edges, "m1"],
    ["tree2_edges", dump.radials.tree2_edges, "m2"],
  ];
  for (const [name, table, side] of edgeSections) {
    for (const [ident, elem] of Object.entries(table)) {
      const label = `${name}[${ident}]`;
      checkDet(elem, label);
      if (side === "m2") checkStabilizer(elem, label);
      const target = edgeFromId(p, ident);
      if (target.level() > maxDepth) continue;
      const g = projInv(matFromJson(elem[side]));
      const image = act(g, e0);
      if (!image.eq(target)) {
        throw new Error(
          `radial contract violated at ${label}: inverse carries the base ` +
            `edge to ${image.key()}, expected ${target.key()}`,
        );
      }
    }
  }

  const vertexSections: [string, Record<string, ElemJsonT>, "m1" | "m2"][] = [
    ["tree1_vertices", dump.radials.tree1_vertices, "m1"],
    ["tree2_vertices", dump.radials.tree2_vertices, "m2"],
  ];
  for (const [name, table, side] of vertexSections) {
    for (const [ident, elem] of Object.entries(table)) {
      const label = `${name}[${ident}]`;
      checkDet(elem, label);
      if (side === "m2") checkStabilizer(elem, label);
      const depth = idDepth(ident);
      if (depth > maxDepth) continue;
      const target = vertexKeyFromId(p, ident);
      // base variant: the base vertex for even targets, the far end of
      // the base edge for odd ones
      const variant = depth % 2 === 0 ? "0:0" : "1:0";
      const g = projInv(matFromJson(elem[side]));
      const image = actVertexKey(g, p, variant);
      if (image !== target) {
        throw new Error(
          `radial contract violated at ${label}: inverse carries the base ` +
            `variant to ${image}, expected ${target}`,
        );
      }
    }
  }
}
