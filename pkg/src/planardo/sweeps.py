"""Sweep engine cross-validating closed-form criteria against oracles.

A sweep walks a family's coefficient grid (exhaustively, or sampled through a
fixed linear-congruential generator), evaluates the closed-form criterion and
one or two planarity oracles on every pair, and assembles a report whose CSV
rendering is byte-identical for a given spec regardless of worker count.  The
oracle route is the generic Gram-determinant test (or the brute-force
difference-map scan), never the family formula itself, so agreement between
the two columns is evidence, not circularity.

Row ordering is lexicographic in the generator exponents of (a, b); sampled
rows appear in draw order.  Elements print as g^k.  Timing lives in a
separate execution block excluded from the determinism contract.
"""

from __future__ import annotations

import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import criteria as _cr
from .dopoly import DOPoly, is_planar_bruteforce, is_planar_quadform, \
    parse_do_terms, planar_mask_for_pairs
from .fields import build_field

FAMILIES = ("cubic1", "cubic2", "quartic", "monomial", "custom")
ORACLES = ("quadform", "bruteforce", "both")
MISMATCH_LIST_CAP = 1000

_MMIX_MUL = 6364136223846793005
_MMIX_ADD = 1442695040888963407
_MASK64 = (1 << 64) - 1


class Lcg:
    """Deterministic 64-bit linear-congruential generator (MMIX constants)."""

    def __init__(self, seed):
        self.state = int(seed) & _MASK64

    def next_below(self, modulus):
        self.state = (self.state * _MMIX_MUL + _MMIX_ADD) & _MASK64
        return (self.state >> 33) % modulus


@dataclass
class SweepSpec:
    family: str
    p: int
    m: int = 1
    n: int = 3
    mode: str = "exhaustive"
    count: int = 0
    seed: int = 0
    oracle: str = "quadform"
    workers: int = 1
    full_oracle: bool = False
    counts_only: bool = False
    poly: str | None = None

    def validate(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.oracle not in ORACLES:
            raise ValueError(f"unknown oracle {self.oracle!r}")
        if self.mode not in ("exhaustive", "sample"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "sample" and self.count < 1:
            raise ValueError("sample mode needs count >= 1")
        if self.family == "custom" and not self.poly:
            raise ValueError("custom family needs a polynomial template")
        if self.family in ("cubic1", "cubic2") and self.n != 3:
            raise ValueError(f"{self.family} needs n=3")
        if self.family == "quartic" and self.n != 4:
            raise ValueError("quartic needs n=4")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def as_dict(self):
        return {
            "family": self.family, "p": self.p, "m": self.m, "n": self.n,
            "mode": self.mode, "count": self.count, "seed": self.seed,
            "oracle": self.oracle, "workers": self.workers,
            "full_oracle": self.full_oracle, "counts_only": self.counts_only,
            "poly": self.poly,
        }


@dataclass
class SweepReport:
    kind: str
    spec: dict
    fingerprint: dict
    columns: tuple[str, ...]
    rows: list[tuple[str, ...]] | None
    counts: dict
    branch_histogram: dict
    mismatches: list
    mismatches_truncated: bool
    planar_outside_criterion: list
    oracle_disagreements: list
    execution: dict

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "spec": self.spec,
            "fingerprint": self.fingerprint,
            "columns": list(self.columns),
            "counts": self.counts,
            "branch_histogram": self.branch_histogram,
            "mismatches": self.mismatches,
            "mismatches_truncated": self.mismatches_truncated,
            "planar_outside_criterion": self.planar_outside_criterion,
            "oracle_disagreements": self.oracle_disagreements,
            "rows": None if self.rows is None else [list(r) for r in self.rows],
            "execution": self.execution,
        }


# -- worker pool plumbing (fork + initializer keeps payload off the wire) --

_POOL = {}


def _pool_init(p, m, n, template, a_codes, b_codes, oracles):
    _POOL["ctx"] = build_field(p, m, n)
    _POOL["template"] = template
    _POOL["A"] = a_codes
    _POOL["B"] = b_codes
    _POOL["oracles"] = oracles


def _pool_task(span):
    s, e = span
    out = _span_results(_POOL["ctx"], _POOL["template"], _POOL["A"],
                        _POOL["B"], _POOL["oracles"], s, e)
    return s, out


def _pair_poly(ctx, template, ac, bc):
    terms = {}
    for i, j, src in template:
        code = {"a": ac, "b": bc}.get(src, src)
        terms[(i, j)] = ctx.add(terms.get((i, j), 0), int(code))
    return DOPoly.from_terms(ctx, terms)


def _span_results(ctx, template, A, B, oracles, s, e):
    out = {}
    if "quadform" in oracles:
        out["quadform"] = planar_mask_for_pairs(ctx, template, A[s:e], B[s:e])
    if "bruteforce" in oracles:
        res = np.empty(e - s, dtype=bool)
        for t in range(s, e):
            f = _pair_poly(ctx, template, int(A[t]), int(B[t]))
            res[t - s] = is_planar_bruteforce(f).planar
        out["bruteforce"] = res
    return out


def _run_oracles(ctx, spec, template, A, B):
    """Oracle masks over the (sub)set of pairs handed in; merged in index
    order so the result is independent of worker scheduling."""
    oracles = ("quadform", "bruteforce") if spec.oracle == "both" else (spec.oracle,)
    npairs = len(A)
    if spec.workers <= 1 or npairs < 2 * spec.workers:
        return oracles, _span_results(ctx, template, A, B, oracles, 0, npairs)
    chunk = min(max(64, -(-npairs // (spec.workers * 4))), 65536)
    spans = [(s, min(s + chunk, npairs)) for s in range(0, npairs, chunk)]
    parts = {}
    mp = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(
            max_workers=spec.workers, mp_context=mp, initializer=_pool_init,
            initargs=(spec.p, spec.m, spec.n, template, A, B, oracles)) as pool:
        for s, out in pool.map(_pool_task, spans):
            parts[s] = out
    merged = {}
    for name in oracles:
        merged[name] = np.concatenate([parts[s][name] for s, _ in spans])
    return oracles, merged


# -- grids --

def _pair_grid(ctx, spec):
    nu = ctx.size - 1
    if spec.mode == "exhaustive":
        ea = np.repeat(np.arange(nu, dtype=np.int64), nu)
        eb = np.tile(np.arange(nu, dtype=np.int64), nu)
    else:
        rng = Lcg(spec.seed)
        ea = np.empty(spec.count, dtype=np.int64)
        eb = np.empty(spec.count, dtype=np.int64)
        for t in range(spec.count):
            ea[t] = rng.next_below(nu)
            eb[t] = rng.next_below(nu)
    exp = ctx.unit_exp_codes()
    return ea, eb, exp[ea], exp[eb]


def _resolve_template(ctx, spec):
    if spec.family == "custom":
        return tuple(parse_do_terms(ctx, spec.poly, placeholders=("a", "b")))
    _, rows = _cr.FAMILY_TEMPLATES[spec.family]
    return rows


def _criterion_masks(ctx, spec, A, B):
    """(satisfied, branch tag list, per-branch masks) or None for custom."""
    if spec.family == "cubic1":
        sat, m1, m2 = _cr.cubic1_masks(ctx, A, B)
        return sat, (_cr.CUBIC1_BRANCH1, _cr.CUBIC1_BRANCH2), (m1, m2)
    if spec.family == "cubic2":
        sat, m1, m2 = _cr.cubic2_masks(ctx, A, B)
        return sat, (_cr.CUBIC2_BRANCH1, _cr.CUBIC2_BRANCH2), (m1, m2)
    if spec.family == "quartic":
        sat, c1, c2, _theta = _cr.quartic_masks(ctx, A, B)
        return sat, (_cr.QUARTIC_BRANCH1, _cr.QUARTIC_BRANCH2), (c1, c2)
    return None


def _branch_strings(tags, branch_masks, npairs):
    out = np.full(npairs, "-", dtype=object)
    for tag, mask in zip(tags, branch_masks):
        for k in np.flatnonzero(np.asarray(mask)):
            out[k] = tag if out[k] == "-" else out[k] + ";" + tag
    return out


def _fingerprint_comment(fp):
    mod = str(fp["modulus"]).replace(" ", "")
    gen = str(fp["generator"]).replace(" ", "")
    return (f"# fingerprint p={fp['p']} m={fp['m']} n={fp['n']} "
            f"modulus={mod} generator={gen} encoding={fp['encoding']}")


COLUMNS = ("family", "p", "m", "n", "a", "b", "criterion", "branch", "oracle", "agree")
PROPAB_COLUMNS = ("family", "p", "m", "n", "a", "b", "r", "criterion", "branch", "oracle", "agree")


def run_sweep(spec):
    spec.validate()
    t0 = time.perf_counter()
    ctx = build_field(spec.p, spec.m, spec.n)
    if spec.family == "monomial":
        return _run_monomial_sweep(spec, ctx, t0)

    template = _resolve_template(ctx, spec)
    ea, eb, A, B = _pair_grid(ctx, spec)
    npairs = len(A)

    crit = _criterion_masks(ctx, spec, A, B)
    if crit is None:
        sat = None
        branch_col = np.full(npairs, "-", dtype=object)
        hist = {}
    else:
        sat, tags, branch_masks = crit
        sat = np.asarray(sat)
        branch_col = _branch_strings(tags, branch_masks, npairs)
        hist = {tag: int(np.asarray(m).sum()) for tag, m in zip(tags, branch_masks)}

    # planarity column: 1 planar, 0 non-planar, -1 oracle skipped
    planar = np.full(npairs, -1, dtype=np.int8)
    bforce = None
    if spec.family == "quartic" and not spec.full_oracle and sat is not None:
        targets = np.flatnonzero(sat)
    else:
        targets = np.arange(npairs)
    if len(targets):
        oracles, masks = _run_oracles(ctx, spec, template, A[targets], B[targets])
        primary = masks["quadform"] if "quadform" in masks else masks["bruteforce"]
        planar[targets] = primary.astype(np.int8)
        if spec.oracle == "both":
            bforce = np.full(npairs, -1, dtype=np.int8)
            bforce[targets] = masks["bruteforce"].astype(np.int8)

    # agreement: iff families demand equality; sufficiency families only
    # forbid satisfied & non-planar
    iff = spec.family in ("cubic1", "cubic2")
    if sat is None:
        mism = np.zeros(npairs, dtype=bool)
    elif iff:
        mism = sat != (planar == 1)
    else:
        mism = sat & (planar == 0)

    disagreements = []
    if bforce is not None:
        for k in np.flatnonzero((bforce >= 0) & (bforce != planar)):
            disagreements.append({
                "a": f"g^{int(ea[k])}", "b": f"g^{int(eb[k])}",
                "quadform": _oracle_str(int(planar[k])),
                "bruteforce": _oracle_str(int(bforce[k])),
            })

    outside = []
    if spec.family == "quartic" and spec.full_oracle and sat is not None:
        for k in np.flatnonzero((planar == 1) & ~sat):
            if len(outside) >= MISMATCH_LIST_CAP:
                break
            outside.append({"a": f"g^{int(ea[k])}", "b": f"g^{int(eb[k])}"})

    mismatches = []
    for k in np.flatnonzero(mism):
        if len(mismatches) >= MISMATCH_LIST_CAP:
            break
        mismatches.append({
            "a": f"g^{int(ea[k])}", "b": f"g^{int(eb[k])}",
            "criterion": _crit_str(sat, k), "oracle": _oracle_str(int(planar[k])),
        })

    counts = {
        "pairs": npairs,
        "criterion_satisfied": None if sat is None else int(sat.sum()),
        "oracle_planar": int((planar == 1).sum()),
        "oracle_skipped": int((planar == -1).sum()),
        "agreements": npairs - int(mism.sum()),
        "mismatches": int(mism.sum()),
    }
    if spec.oracle == "both":
        counts["oracle_disagreements"] = len(disagreements)
    if spec.family == "quartic" and spec.full_oracle:
        counts["planar_outside_criterion"] = int(((planar == 1) & ~sat).sum())

    rows = None
    if not spec.counts_only:
        rows = []
        fam, ps, ms, ns = spec.family, str(spec.p), str(spec.m), str(spec.n)
        for k in range(npairs):
            rows.append((
                fam, ps, ms, ns, f"g^{int(ea[k])}", f"g^{int(eb[k])}",
                _crit_str(sat, k), str(branch_col[k]),
                _oracle_str(int(planar[k])),
                "-" if sat is None else ("no" if mism[k] else "yes"),
            ))

    execution = _execution_block(t0, npairs, spec.workers)
    return SweepReport(
        kind="sweep", spec=spec.as_dict(), fingerprint=ctx.fingerprint(),
        columns=COLUMNS, rows=rows, counts=counts, branch_histogram=hist,
        mismatches=mismatches,
        mismatches_truncated=len(mismatches) < int(mism.sum()),
        planar_outside_criterion=outside, oracle_disagreements=disagreements,
        execution=execution)


def _crit_str(sat, k):
    if sat is None:
        return "-"
    return "satisfied" if sat[k] else "unsatisfied"


def _oracle_str(v):
    return {1: "planar", 0: "non-planar", -1: "-"}[int(v)]


def _execution_block(t0, items, workers):
    dt = time.perf_counter() - t0
    return {
        "wall_clock_seconds": round(dt, 3),
        "items_per_second": round(items / dt, 1) if dt > 0 else None,
        "workers": workers,
    }


def _run_monomial_sweep(spec, ctx, t0):
    """Exhaustive walk of x^(q^k+1) for k in 0..n-1 (tiny by nature)."""
    rows = []
    hist = {}
    mismatches = []
    sat_n = planar_n = mism_n = 0
    use_brute = spec.oracle == "bruteforce"
    disagreements = []
    for k in range(ctx.n):
        f = DOPoly.from_terms(ctx, {(k, 0): 1})
        crit = _cr.monomial_planar_criterion(k, ctx.n)
        v_quad = is_planar_quadform(f).planar
        v = v_quad
        if use_brute or spec.oracle == "both":
            v_brute = is_planar_bruteforce(f).planar
            if use_brute:
                v = v_brute
            elif v_brute != v_quad:
                disagreements.append({"a": str(k), "b": "-",
                                      "quadform": _oracle_str(int(v_quad)),
                                      "bruteforce": _oracle_str(int(v_brute))})
        mism = crit and not v
        sat_n += crit
        planar_n += v
        mism_n += mism
        if mism:
            mismatches.append({"a": str(k), "b": "-",
                               "criterion": "satisfied", "oracle": _oracle_str(int(v))})
        rows.append((spec.family, str(spec.p), str(spec.m), str(spec.n),
                     str(k), "-", "satisfied" if crit else "unsatisfied", "-",
                     _oracle_str(int(v)), "no" if mism else "yes"))
    counts = {
        "pairs": ctx.n,
        "criterion_satisfied": sat_n,
        "oracle_planar": planar_n,
        "oracle_skipped": 0,
        "agreements": ctx.n - mism_n,
        "mismatches": mism_n,
    }
    if spec.oracle == "both":
        counts["oracle_disagreements"] = len(disagreements)
    return SweepReport(
        kind="sweep", spec=spec.as_dict(), fingerprint=ctx.fingerprint(),
        columns=COLUMNS, rows=None if spec.counts_only else rows,
        counts=counts, branch_histogram=hist, mismatches=mismatches,
        mismatches_truncated=False, planar_outside_criterion=[],
        oracle_disagreements=disagreements,
        execution=_execution_block(t0, ctx.n, spec.workers))


# -- no-root statement sweep: triples (A, B, r) over F_{q^3} --

def run_propab_sweep(spec):
    """Cross-validate the closed-form no-root test against the unit scan for
    Tr(A x^(q-1) + B x^(1-q)) + r, over triples (A, B, r)."""
    spec.validate()
    if spec.n != 3:
        raise ValueError("the no-root statement lives over n=3")
    t0 = time.perf_counter()
    ctx = build_field(spec.p, spec.m, 3)
    nu = ctx.size - 1
    q = ctx.q
    exp = ctx.unit_exp_codes()
    r_codes = np.concatenate(([0], ctx.subfield_units(q))).astype(np.int64)

    if spec.mode == "exhaustive":
        ea = np.repeat(np.arange(nu, dtype=np.int64), nu * q)
        eb = np.tile(np.repeat(np.arange(nu, dtype=np.int64), q), nu)
        ri = np.tile(np.arange(q, dtype=np.int64), nu * nu)
    else:
        rng = Lcg(spec.seed)
        ea = np.empty(spec.count, dtype=np.int64)
        eb = np.empty(spec.count, dtype=np.int64)
        ri = np.empty(spec.count, dtype=np.int64)
        for t in range(spec.count):
            ea[t] = rng.next_below(nu)
            eb[t] = rng.next_below(nu)
            ri[t] = rng.next_below(q)
    A, B, R = exp[ea], exp[eb], r_codes[ri]
    ntrip = len(A)

    # closed form: r != 0 and r*A*B == N(A) + N(B)
    s_norm = ctx.add(ctx.norm_to(A), ctx.norm_to(B))
    crit = (R != 0) & np.asarray(ctx.mul(R, ctx.mul(A, B)) == s_norm)

    # scan: no unit x has Tr(A x^(q-1) + B x^(1-q)) == -r
    P = ctx.pow_int(exp, q - 1)
    Pi = ctx.pow_int(exp, 1 - q)
    scan = np.empty(ntrip, dtype=bool)
    neg_r = np.asarray(ctx.neg(R), dtype=np.int64)
    block = max(1, (1 << 21) // nu)
    for s in range(0, ntrip, block):
        e = min(s + block, ntrip)
        V = ctx.trace_to(ctx.add(ctx.mul(A[s:e, None], P[None, :]),
                                 ctx.mul(B[s:e, None], Pi[None, :])))
        scan[s:e] = ~np.any(V == neg_r[s:e, None], axis=1)

    mism = crit != scan
    r_strs = ["0"] + [f"g^{ctx.dlog(int(c))}" for c in r_codes[1:]]
    mismatches = []
    for k in np.flatnonzero(mism):
        if len(mismatches) >= MISMATCH_LIST_CAP:
            break
        mismatches.append({"a": f"g^{int(ea[k])}", "b": f"g^{int(eb[k])}",
                           "r": r_strs[int(ri[k])],
                           "criterion": "no-root" if crit[k] else "has-root",
                           "oracle": "no-root" if scan[k] else "has-root"})
    counts = {
        "triples": ntrip,
        "criterion_no_root": int(crit.sum()),
        "scan_no_root": int(scan.sum()),
        "agreements": ntrip - int(mism.sum()),
        "mismatches": int(mism.sum()),
    }
    rows = None
    if not spec.counts_only:
        rows = []
        ps, ms = str(spec.p), str(spec.m)
        for k in range(ntrip):
            rows.append((
                "prop-ab", ps, ms, "3", f"g^{int(ea[k])}", f"g^{int(eb[k])}",
                r_strs[int(ri[k])],
                "no-root" if crit[k] else "has-root", "-",
                "no-root" if scan[k] else "has-root",
                "no" if mism[k] else "yes",
            ))
    return SweepReport(
        kind="prop-ab", spec=spec.as_dict(), fingerprint=ctx.fingerprint(),
        columns=PROPAB_COLUMNS, rows=rows, counts=counts, branch_histogram={},
        mismatches=mismatches,
        mismatches_truncated=len(mismatches) < int(mism.sum()),
        planar_outside_criterion=[], oracle_disagreements=[],
        execution=_execution_block(t0, ntrip, 1))


# -- report rendering --

def emit_csv(report):
    lines = [",".join(report.columns)]
    if report.rows is not None:
        for row in report.rows:
            lines.append(",".join(row))
    summary = " ".join(f"{k}={v}" for k, v in report.counts.items() if v is not None)
    lines.append(f"# summary {summary}")
    lines.append(_fingerprint_comment(report.fingerprint))
    return "\n".join(lines) + "\n"


def emit_json(report):
    import json
    return json.dumps(report.to_json_dict(), indent=2) + "\n"
