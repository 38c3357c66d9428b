"""Hypothesis-filtered verification sweeps.

Each named check enumerates its instances up to a bound, evaluates the
prediction and the independent oracle for every instance, and emits one
record per instance.  Evaluation functions are module-level and operate on
plain tuples so sweeps can run in a process pool; instance order is
deterministic either way.  An instance whose hypotheses fail is skipped
(record None), never silently weakened.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from math import gcd, prod

from .arith import (
    DomainError,
    is_squarefree,
    prime_divisors,
    primes_in_v,
    sqrt_2adic,
    sqrt_mod,
    v_symbol,
)
from .apps import (
    candm_check,
    candp_check,
    kuroda_example_check,
    norm_sign_predict,
    positive_norm_square_check,
    theorem_sq_check,
    unit_family,
)
from .f2graph import (
    AuxiliaryPrimeNotFound,
    boundary_space,
    build_graph,
    cycle_space,
    edge,
    triangle_decompose,
    verify_duality,
)
from .invariants import general_invariant, scholz2_predict, scholz_predict, triangle_invariant
from .mquad import UndecidedError
from .pell import check_unit_congruences, fundamental_unit, unit_symbol

TRIANGLE_AUX_BOUND = 20000

CHECK_DEFAULT_BOUNDS = {
    "scholz": 300,
    "scholz2": 100,
    "duality": 10,
    "triangles": 10,
    "thm-sq": 100,
    "pos-norm": 500,
    "lemma-e": 1000,
    "candm": 60,
    "candp": 600,
    "norm-sign": 5000,
    "kuroda": 60,
}


@dataclass(frozen=True)
class SweepConfig:
    """Settings for one verification run."""

    checks: tuple[str, ...]
    bound: int | None = None
    samples: int = 200
    cache_path: str | None = None
    precision_start: int = 64
    output_format: str = "human"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.bound is not None and self.bound < 2:
            raise DomainError("bound must be at least 2")
        if self.precision_start < 64:
            raise DomainError("starting precision must be at least 64 bits")
        if self.output_format not in ("human", "json-lines", "csv"):
            raise DomainError(f"unknown output format {self.output_format!r}")
        for name in self.checks:
            if name not in CHECK_DEFAULT_BOUNDS:
                raise DomainError(f"unknown check {name!r}; choose from "
                                  f"{', '.join(sorted(CHECK_DEFAULT_BOUNDS))}")
        if self.samples < 1:
            raise DomainError("samples must be positive")
        if self.jobs < 1:
            raise DomainError("jobs must be positive")

    def bound_for(self, check: str) -> int:
        return self.bound if self.bound is not None else CHECK_DEFAULT_BOUNDS[check]


@dataclass(frozen=True)
class SweepRecord:
    """One instance outcome: what was predicted, what the oracle said."""

    check: str
    instance: str
    predicted: str
    oracle: str
    verdict: str

    def __post_init__(self):
        assert self.verdict in ("pass", "fail", "undecided")


def _squarefrees(lo: int, hi: int) -> list[int]:
    return [m for m in range(lo, hi + 1) if is_squarefree(m)]


def _v_supported(m: int) -> bool:
    return all(p % 4 != 3 for p in prime_divisors(m))


def _first_v_primes(n: int) -> list[int]:
    bound = 64
    while True:
        ps = primes_in_v(bound)
        if len(ps) >= n:
            return ps[:n]
        bound *= 2


def _both_root_symbols(m: int, p: int, cache) -> tuple[int, int]:
    """unit symbol evaluated at both modular square roots of m."""
    if p == 2:
        r = sqrt_2adic(m, 4)
        other = (16 - r) % 16
    else:
        r = sqrt_mod(m, p)
        other = p - r
    return (unit_symbol(m, p, root=r, cache=cache),
            unit_symbol(m, p, root=other, cache=cache))


# --- scholz -----------------------------------------------------------------

def _enum_scholz(config: SweepConfig) -> list[tuple]:
    ps = primes_in_v(config.bound_for("scholz"))
    out = []
    for p, q in combinations(ps, 2):
        if v_symbol(p, q) == 1:
            out.append((p, q))
            out.append((q, p))
    return out


def _eval_scholz(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    p, q = args
    if q == 2 and p % 8 != 1:
        return None  # the unit symbol at 2 needs m = 1 mod 8
    predicted = scholz_predict(p, q)
    s1, s2 = _both_root_symbols(p, q, cache)
    if s1 == s2:
        oracle, verdict = f"{s1:+d}", "pass" if s1 == predicted else "fail"
    else:
        oracle, verdict = f"{s1:+d}!={s2:+d}", "fail"
    return SweepRecord("scholz", f"eps_{p}|{q}", f"{predicted:+d}", oracle, verdict)


# --- scholz2 ----------------------------------------------------------------

def _enum_scholz2(config: SweepConfig) -> list[tuple]:
    ps = primes_in_v(config.bound_for("scholz2"))
    out = []
    for p, q, r in combinations(ps, 3):
        if v_symbol(p, q) == v_symbol(q, r) == v_symbol(r, p) == -1:
            out.extend([(p, q, r), (p, r, q), (q, r, p)])
    return out


def _eval_scholz2(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    a, b, c = args
    m = a * b
    if c == 2 and m % 8 != 1:
        return None
    predicted = scholz2_predict(a, b, c)
    s1, s2 = _both_root_symbols(m, c, cache)
    if s1 == s2:
        oracle, verdict = f"{s1:+d}", "pass" if s1 == predicted else "fail"
    else:
        oracle, verdict = f"{s1:+d}!={s2:+d}", "fail"
    return SweepRecord("scholz2", f"eps_{m}|{c}", f"{predicted:+d}", oracle, verdict)


# --- duality ----------------------------------------------------------------

def _enum_duality(config: SweepConfig) -> list[tuple]:
    return [(config.seed, i) for i in range(config.samples)]


def _eval_duality(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    seed, i = args
    rng = random.Random(f"duality:{seed}:{i}")
    nv = rng.randint(1, config.bound_for("duality"))
    vertices = list(range(1, nv + 1))
    edges = [e for e in combinations(vertices, 2) if rng.getrandbits(1)]
    b = len(boundary_space(vertices, edges))
    c = len(cycle_space(vertices, edges))
    ok = verify_duality(vertices, edges)
    oracle = f"ranks {b}+{c} of {len(edges)}" + ("" if ok else ", not orthogonal")
    return SweepRecord("duality", f"graph_{i:03d}", "annihilators", oracle,
                       "pass" if ok and b + c == len(edges) else "fail")


# --- triangles --------------------------------------------------------------

def _enum_triangles(config: SweepConfig) -> list[tuple]:
    vs = _first_v_primes(config.bound_for("triangles"))
    graph = build_graph(vs)
    non = graph.edges_N
    out = []
    for k in range(3, 7):
        for subset in combinations(vs, k):
            rest = subset[1:]
            for perm in permutations(rest):
                if perm[0] > perm[-1]:
                    continue  # each cycle once per direction
                order = (subset[0],) + perm
                if all(edge(order[i], order[(i + 1) % k]) in non
                       for i in range(k)):
                    out.append(order)
    return out


def _eval_triangles(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    order = args
    k = len(order)
    cycle = [edge(order[i], order[(i + 1) % k]) for i in range(k)]
    instance = "-".join(map(str, order))
    base = general_invariant(cycle).value

    def decomposition_sum(exclude=()):
        triangles = triangle_decompose(cycle, TRIANGLE_AUX_BOUND, exclude=exclude)
        total = 0
        aux = None
        for tri in triangles:
            vertices = sorted({x for e in tri for x in e})
            total ^= triangle_invariant(*vertices)
            extra = set(vertices) - set(order)
            if extra:
                (aux,) = extra
        return total, aux

    try:
        s1, aux1 = decomposition_sum()
        if k > 3:
            s2, _ = decomposition_sum(exclude=(aux1,))
        else:
            s2 = s1
    except AuxiliaryPrimeNotFound:
        return SweepRecord("triangles", instance, f"{base}",
                           "aux prime search bound exceeded", "undecided")
    verdict = "pass" if base == s1 == s2 else "fail"
    return SweepRecord("triangles", instance, f"{base}", f"{s1}|{s2}", verdict)


# --- thm-sq -----------------------------------------------------------------

def _enum_thm_sq(config: SweepConfig) -> list[tuple]:
    bound = config.bound_for("thm-sq")
    ms = [m for m in _squarefrees(2, bound) if _v_supported(m)]
    return [(m1, m2) for i, m1 in enumerate(ms)
            for m2 in ms[i + 1:] if gcd(m1, m2) == 1]


def _eval_thm_sq(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    m1, m2 = args
    family = unit_family((m1, m2, m1 * m2), cache=cache)
    if any(n != -1 for n in family.norms):
        return None
    try:
        res = theorem_sq_check(family, cache=cache,
                               start_bits=config.precision_start)
    except UndecidedError:
        return SweepRecord("thm-sq", f"{m1},{m2}", "square",
                           "precision ceiling", "undecided")
    return SweepRecord("thm-sq", f"{m1},{m2}", "square",
                       "square" if res.ok else "not-square",
                       "pass" if res.ok else "fail")


# --- pos-norm ---------------------------------------------------------------

def _enum_pos_norm(config: SweepConfig) -> list[tuple]:
    return [(m,) for m in _squarefrees(3, config.bound_for("pos-norm"))]


def _eval_pos_norm(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    (m,) = args
    if fundamental_unit(m, cache=cache).norm != 1:
        return None
    try:
        res = positive_norm_square_check(m, cache=cache,
                                         start_bits=config.precision_start)
    except UndecidedError:
        return SweepRecord("pos-norm", f"eps_{m}", "square",
                           "precision ceiling", "undecided")
    return SweepRecord("pos-norm", f"eps_{m}", "square",
                       "square" if res.ok else "not-square",
                       "pass" if res.ok else "fail")


# --- lemma-e ----------------------------------------------------------------

def _enum_lemma_e(config: SweepConfig) -> list[tuple]:
    return [(m,) for m in _squarefrees(3, config.bound_for("lemma-e"))
            if m % 2 == 1]


def _eval_lemma_e(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    (m,) = args
    if fundamental_unit(m, cache=cache).norm != -1:
        return None
    report = check_unit_congruences(m, cache=cache)
    if report.all_ok:
        return SweepRecord("lemma-e", f"eps_{m}", "congruent", "congruent", "pass")
    return SweepRecord("lemma-e", f"eps_{m}", "congruent",
                       ",".join(report.failed_claims()), "fail")


# --- candm ------------------------------------------------------------------

def _enum_candm(config: SweepConfig) -> list[tuple]:
    ps = primes_in_v(config.bound_for("candm"))
    return [t for t in combinations(ps, 3)
            if v_symbol(t[0], t[1]) == v_symbol(t[1], t[2])
            == v_symbol(t[2], t[0]) == -1]


def _eval_candm(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    p, q, r = args
    res = candm_check(((p, q), (q, r), (r, p)), {p, q, r}, cache=cache,
                      start_bits=config.precision_start)
    predicted = "square" if res.invariant.value == 0 else "nonsquare"
    oracle = "square" if res.d == 1 else f"nonsquare(d={res.d})"
    return SweepRecord("candm", f"{p},{q},{r}", predicted, oracle,
                       "pass" if res.consistent else "fail")


# --- candp ------------------------------------------------------------------

def _enum_candp(config: SweepConfig) -> list[tuple]:
    bound = config.bound_for("candp")
    out = []
    for s in _squarefrees(2, bound):
        ps = prime_divisors(s)
        mprimes = [p for p in ps if p % 4 == 1]
        for bits in range(1 << len(mprimes)):
            m = prod(p for i, p in enumerate(mprimes) if bits >> i & 1)
            out.append((m, s // m))
    return out


def _eval_candp(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    m, n = args
    if fundamental_unit(m * n, cache=cache).norm != 1:
        return None
    res = candp_check(m, n, cache=cache, start_bits=config.precision_start)
    oracle = f"|{{{','.join(map(str, res.intersection))}}}|={len(res.intersection)}"
    return SweepRecord("candp", f"m={m},n={n}", "even", f"d={res.d},{oracle}",
                       "pass" if res.parity_even else "fail")


# --- norm-sign --------------------------------------------------------------

def _enum_norm_sign(config: SweepConfig) -> list[tuple]:
    bound = config.bound_for("norm-sign")
    out = []
    for s in _squarefrees(2, bound):
        if not _v_supported(s):
            continue
        ps = prime_divisors(s)
        for bits in range(1, (1 << len(ps)) - 1):
            m = prod(p for i, p in enumerate(ps) if bits >> i & 1)
            n = s // m
            if m < n:
                out.append((m, n))
    return out


def _eval_norm_sign(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    m, n = args
    if norm_sign_predict(m, n) is None:
        return None
    norm = fundamental_unit(m * n, cache=cache).norm
    return SweepRecord("norm-sign", f"m={m},n={n}", "+1", f"{norm:+d}",
                       "pass" if norm == 1 else "fail")


# --- kuroda -----------------------------------------------------------------

def _enum_kuroda(config: SweepConfig) -> list[tuple]:
    ps = primes_in_v(config.bound_for("kuroda"))
    out = []
    for p, q, r in permutations(ps, 3):
        if v_symbol(p, q) == 1 and v_symbol(q, r) == -1:
            out.append((p, q, r))
    return out


def _eval_kuroda(args: tuple, config: SweepConfig, cache) -> SweepRecord | None:
    p, q, r = args
    try:
        res = kuroda_example_check(p, q, r, cache=cache,
                                   start_bits=config.precision_start)
    except UndecidedError:
        return SweepRecord("kuroda", f"{p},{q},{r}", "Q", "precision ceiling",
                           "undecided")
    return SweepRecord("kuroda", f"{p},{q},{r}", f"Q={res.formula_value}",
                       f"Q={res.computed.value}",
                       "pass" if res.consistent else "fail")


CHECKS = {
    "scholz": (_enum_scholz, _eval_scholz),
    "scholz2": (_enum_scholz2, _eval_scholz2),
    "duality": (_enum_duality, _eval_duality),
    "triangles": (_enum_triangles, _eval_triangles),
    "thm-sq": (_enum_thm_sq, _eval_thm_sq),
    "pos-norm": (_enum_pos_norm, _eval_pos_norm),
    "lemma-e": (_enum_lemma_e, _eval_lemma_e),
    "candm": (_enum_candm, _eval_candm),
    "candp": (_enum_candp, _eval_candp),
    "norm-sign": (_enum_norm_sign, _eval_norm_sign),
    "kuroda": (_enum_kuroda, _eval_kuroda),
}


def _pool_eval(payload):
    name, args, config = payload
    return CHECKS[name][1](args, config, None)


def run_check(name: str, config: SweepConfig, cache=None) -> list[SweepRecord]:
    """All records for one check, in deterministic instance order."""
    if name not in CHECKS:
        raise DomainError(f"unknown check {name!r}")
    enum, evaluate = CHECKS[name]
    instances = enum(config)
    if config.jobs > 1 and len(instances) > 1:
        payloads = [(name, args, config) for args in instances]
        chunk = max(1, len(payloads) // (config.jobs * 8))
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_pool_eval, payloads, chunksize=chunk))
    else:
        results = [evaluate(args, config, cache) for args in instances]
    return [r for r in results if r is not None]


def summarize(records) -> dict[str, int]:
    counts = {"pass": 0, "fail": 0, "undecided": 0}
    for r in records:
        counts[r.verdict] += 1
    return counts
