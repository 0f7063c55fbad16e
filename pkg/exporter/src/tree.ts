/**
 * Just enough of the Bruhat-Tits tree (ball model) to check radial
 * contracts at small depth: edge/vertex ids, the Moebius action on edges,
 * and exact canonical reduction.  Mirrors the core's conventions: kind "A"
 * is the ball B(a, k), kind "B" its complement; base edge A(0, 1); ids are
 * "level:digits" with a "~" prefix for inward edges, vertices are "base"
 * or the id of the incoming outward edge.
 */

import { Frac, ONE, ZERO, reduceMod, valP } from "./rational";

export type Mat = [[Frac, Frac], [Frac, Frac]];

export function matFromJson(j: [string | number, string | number][][]): Mat {
  return [
    [Frac.fromPair(j[0][0] as [number, number]), Frac.fromPair(j[0][1] as [number, number])],
    [Frac.fromPair(j[1][0] as [number, number]), Frac.fromPair(j[1][1] as [number, number])],
  ];
}

export function matMul(m1: Mat, m2: Mat): Mat {
  const [[a, b], [c, d]] = m1;
  const [[e, f], [g, h]] = m2;
  return [
    [a.mul(e).add(b.mul(g)), a.mul(f).add(b.mul(h))],
    [c.mul(e).add(d.mul(g)), c.mul(f).add(d.mul(h))],
  ];
}

export function matDet(m: Mat): Frac {
  return m[0][0].mul(m[1][1]).sub(m[0][1].mul(m[1][0]));
}

/** Inverse up to scalar (adjugate); enough for the projective action. */
export function projInv(m: Mat): Mat {
  return [
    [m[1][1], m[0][1].neg()],
    [m[1][0].neg(), m[0][0]],
  ];
}

/** Equality up to a nonzero scalar (projective equality). */
export function matProjEq(m: Mat, n: Mat): boolean {
  const ms = [m[0][0], m[0][1], m[1][0], m[1][1]];
  const ns = [n[0][0], n[0][1], n[1][0], n[1][1]];
  let pivot = -1;
  for (let i = 0; i < 4; i++) {
    if (!ms[i].isZero()) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) return false;
  if (ns[pivot].isZero()) return false;
  for (let i = 0; i < 4; i++) {
    if (!ms[pivot].mul(ns[i]).eq(ns[pivot].mul(ms[i]))) return false;
  }
  return true;
}

function fracPow(p: number, k: number): Frac {
  const bp = BigInt(p);
  let out = 1n;
  for (let i = 0; i < Math.abs(k); i++) out *= bp;
  return k >= 0 ? new Frac(out) : new Frac(1n, out);
}

export class Edge {
  readonly p: number;
  readonly kind: "A" | "B";
  readonly a: Frac;
  readonly k: number;

  constructor(p: number, kind: "A" | "B", a: Frac, k: number) {
    this.p = p;
    this.kind = kind;
    this.k = k;
    this.a = reduceMod(a, p, k);
  }

  key(): string {
    return `${this.kind}:${this.k}:${this.a.toString()}`;
  }

  opposite(): Edge {
    return new Edge(this.p, this.kind === "A" ? "B" : "A", this.a, this.k);
  }

  /** Distance of the far endpoint of the edge from the base vertex. */
  level(): number {
    const vk = this.kind === "A" ? this.k : this.k - 1;
    return vertexDistance(this.p, this.a, vk);
  }

  sourceDistance(): number {
    const vk = this.kind === "A" ? this.k - 1 : this.k;
    return vertexDistance(this.p, this.a, vk);
  }

  isOutward(): boolean {
    return this.level() === this.sourceDistance() + 1;
  }

  ballMatrix(): Mat {
    if (this.kind === "A") {
      return [
        [fracPow(this.p, this.k - 1), this.a],
        [ZERO, ONE],
      ];
    }
    return [
      [this.a, fracPow(this.p, this.k)],
      [ONE, ZERO],
    ];
  }

  outwardChildren(): Edge[] {
    const out: Edge[] = [];
    if (this.kind === "A") {
      for (let c = 0; c < this.p; c++) {
        out.push(
          new Edge(this.p, "A",
            this.a.add(fracPow(this.p, this.k).mul(new Frac(BigInt(c)))),
            this.k + 1),
        );
      }
      return out;
    }
    out.push(new Edge(this.p, "B", this.a, this.k - 1));
    for (let c = 1; c < this.p; c++) {
      out.push(
        new Edge(this.p, "A",
          this.a.add(fracPow(this.p, this.k - 1).mul(new Frac(BigInt(c)))),
          this.k),
      );
    }
    return out;
  }

  eq(o: Edge): boolean {
    return this.p === o.p && this.key() === o.key();
  }
}

function vertexDistance(p: number, a: Frac, k: number): number {
  const v = valP(a, p);
  const vEff = v === Infinity ? k : v;
  return k - 2 * Math.min(0, k, vEff);
}

export function baseEdge(p: number): Edge {
  return new Edge(p, "A", ZERO, 1);
}

export function outwardLevelOne(p: number): Edge[] {
  const out: Edge[] = [];
  for (let c = 0; c < p; c++) out.push(new Edge(p, "A", new Frac(BigInt(c)), 1));
  out.push(new Edge(p, "B", ZERO, 0));
  return out;
}

/** Image of an oriented edge under the Moebius action of g (exact). */
export function act(g: Mat, e: Edge): Edge {
  const p = e.p;
  let w = matMul(g, e.ballMatrix());
  let det = matDet(w);
  let vC = valP(w[1][0], p);
  let vD = valP(w[1][1], p);
  if (vD > vC) {
    // pole inside pZ_p: the image is a complement; classify through the
    // image of the complementary disc
    const h0: Mat = [
      [ZERO, new Frac(BigInt(p))],
      [ONE, ZERO],
    ];
    w = matMul(w, h0);
    det = matDet(w);
    vD = valP(w[1][1], p);
    const a = w[0][1].div(w[1][1]);
    const k = valP(det, p) + 1 - 2 * vD;
    return new Edge(p, "B", a, k);
  }
  const a = w[0][1].div(w[1][1]);
  const k = valP(det, p) + 1 - 2 * vD;
  return new Edge(p, "A", a, k);
}

/** Parse "level:digits" (optionally "~"-prefixed) back to an edge. */
export function edgeFromId(p: number, ident: string): Edge {
  if (ident.startsWith("~")) return edgeFromId(p, ident.slice(1)).opposite();
  const [lvlS, digits] = ident.split(":");
  if (digits === undefined || digits.length === 0) {
    throw new Error(`corrupt edge id ${JSON.stringify(ident)}`);
  }
  let e = outwardLevelOne(p)[Number(digits[0])];
  if (e === undefined) throw new Error(`corrupt edge id ${JSON.stringify(ident)}`);
  for (const d of digits.slice(1)) {
    const child = e.outwardChildren()[Number(d)];
    if (child === undefined) {
      throw new Error(`corrupt edge id ${JSON.stringify(ident)}`);
    }
    e = child;
  }
  if (e.level() !== Number(lvlS)) {
    throw new Error(`corrupt edge id ${JSON.stringify(ident)}`);
  }
  return e;
}

/** Canonical key of the target vertex of an edge (disc B(a, k)). */
export function targetVertexKey(e: Edge): string {
  const k = e.kind === "A" ? e.k : e.k - 1;
  return `${k}:${reduceMod(e.a, e.p, k).toString()}`;
}

export function vertexKeyFromId(p: number, ident: string): string {
  if (ident === "base") return "0:0";
  return targetVertexKey(edgeFromId(p, ident));
}

/** Induced action on vertices, as canonical keys. */
export function actVertexKey(g: Mat, p: number, vertexKey: string): string {
  const idx = vertexKey.indexOf(":");
  const k = Number(vertexKey.slice(0, idx));
  const aStr = vertexKey.slice(idx + 1);
  const [n, d] = aStr.includes("/") ? aStr.split("/") : [aStr, "1"];
  const a = new Frac(BigInt(n), BigInt(d));
  return targetVertexKey(act(g, new Edge(p, "A", a, k)));
}

/** Depth of the object a radial id indexes (edge level; 0 for "base").
 * An inward edge "~L:..." has its far endpoint one step closer. */
export function idDepth(ident: string): number {
  if (ident === "base") return 0;
  if (ident.startsWith("~")) return Number(ident.slice(1).split(":")[0]) - 1;
  return Number(ident.split(":")[0]);
}
