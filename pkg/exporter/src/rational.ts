/**
 * Exact rational arithmetic over bigint, just enough for the tree action.
 * No floating point anywhere: the boundary format is exact and so are the
 * contract checks.
 */

export class Frac {
  readonly n: bigint;
  readonly d: bigint;

  constructor(n: bigint, d: bigint = 1n) {
    if (d === 0n) throw new Error("zero denominator");
    if (d < 0n) {
      n = -n;
      d = -d;
    }
    const g = gcd(n < 0n ? -n : n, d);
    this.n = g === 0n ? 0n : n / g;
    this.d = g === 0n ? 1n : d / g;
  }

  static fromPair(pair: [number | string, number | string]): Frac {
    return new Frac(BigInt(pair[0]), BigInt(pair[1]));
  }

  isZero(): boolean {
    return this.n === 0n;
  }

  add(o: Frac): Frac {
    return new Frac(this.n * o.d + o.n * this.d, this.d * o.d);
  }

  sub(o: Frac): Frac {
    return new Frac(this.n * o.d - o.n * this.d, this.d * o.d);
  }

  mul(o: Frac): Frac {
    return new Frac(this.n * o.n, this.d * o.d);
  }

  div(o: Frac): Frac {
    if (o.n === 0n) throw new Error("division by zero");
    return new Frac(this.n * o.d, this.d * o.n);
  }

  neg(): Frac {
    return new Frac(-this.n, this.d);
  }

  eq(o: Frac): boolean {
    return this.n === o.n && this.d === o.d;
  }

  toString(): string {
    return this.d === 1n ? this.n.toString() : `${this.n}/${this.d}`;
  }
}

export const ZERO = new Frac(0n);
export const ONE = new Frac(1n);

export function gcd(a: bigint, b: bigint): bigint {
  while (b !== 0n) [a, b] = [b, a % b];
  return a < 0n ? -a : a;
}

function bigintValP(x: bigint, p: bigint): number {
  let v = 0;
  while (x % p === 0n) {
    x /= p;
    v += 1;
  }
  return v;
}

/** p-adic valuation of a nonzero rational; Infinity for zero. */
export function valP(x: Frac, p: number): number {
  if (x.n === 0n) return Infinity;
  const bp = BigInt(p);
  return bigintValP(x.n < 0n ? -x.n : x.n, bp) - bigintValP(x.d, bp);
}

function modInverse(a: bigint, m: bigint): bigint {
  let [old_r, r] = [((a % m) + m) % m, m];
  let [old_s, s] = [1n, 0n];
  while (r !== 0n) {
    const q = old_r / r;
    [old_r, r] = [r, old_r - q * r];
    [old_s, s] = [s, old_s - q * s];
  }
  if (old_r !== 1n) throw new Error("not invertible");
  return ((old_s % m) + m) % m;
}

function pow(base: bigint, e: number): bigint {
  let out = 1n;
  for (let i = 0; i < e; i++) out *= base;
  return out;
}

/**
 * Canonical representative of a rational modulo p^k: keep only the digits
 * at positions v(a) .. k-1.  Mirrors the core's tree-layer reduction.
 */
export function reduceMod(a: Frac, p: number, k: number): Frac {
  if (a.n === 0n) return ZERO;
  const v = valP(a, p);
  if (v >= k) return ZERO;
  const bp = BigInt(p);
  const m = pow(bp, k - v);
  // u = a / p^v as a p-unit
  let un = a.n < 0n ? -a.n : a.n;
  let ud = a.d;
  const sign = a.n < 0n ? -1n : 1n;
  if (v >= 0) un /= pow(bp, v);
  else ud /= pow(bp, -v);
  const r = (((sign * un) % m + m) % m) * modInverse(ud % m, m) % m;
  const pv =
    v >= 0 ? new Frac(pow(bp, v)) : new Frac(1n, pow(bp, -v));
  return new Frac(r).mul(pv);
}
