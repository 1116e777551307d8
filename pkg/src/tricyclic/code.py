"""The ternary cyclic code, its codewords, and full weight enumeration.

Codewords are indexed by coefficient triples (alpha, beta, gamma) in F_q^3:

    c_i = Tr(alpha pi^{2i} + beta pi^{(p+1)i} + gamma pi^{(p^2+1)i}),
    i = 0 .. q-2.

The weight of a codeword ties back to the exponential sums through

    w = p^{m-1}(p-1) - R/p,   R = sum over s in F_p* of S(s alpha, s beta, s gamma),

so the full distribution can be enumerated either by tallying trace values
per triple ("direct", O(q) per triple) or by classifying the attached
quadratic form ("rank", O(m^3) per triple).  Both count triples (sum q^3).
For m >= 6 the triple-to-codeword map is a bijection; below that it has a
constant fiber, and collapse_to_codewords divides it out.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BudgetExceededError,
    ConfigurationError,
    InternalInconsistencyError,
    InvalidDistributionError,
)
from .expsum import EisensteinInteger, r_sum
from .gf import FieldContext, FieldElement

DEFAULT_BUDGET = 10**10

ProgressFn = Callable[[str], None]

# classification census results are deterministic per field; memoized so a
# verify run that needs several moments does not redo the q^3 scan
_CENSUS_CACHE: dict[tuple[int, int, tuple[int, ...]], dict[tuple[int, int], int]] = {}


@dataclass(frozen=True)
class CycloCoset:
    """Cyclotomic coset of s modulo p^m - 1: {s, sp, sp^2, ...}."""

    s: int
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def cyclotomic_coset(s: int, p: int, m: int) -> CycloCoset:
    n = p**m - 1
    s %= n
    seen = []
    cur = s
    while cur not in seen:
        seen.append(cur)
        cur = cur * p % n
    return CycloCoset(s, tuple(sorted(seen)))


def code_dimension(p: int, m: int) -> int:
    """Dimension of the code: size of the union of the three nonzero cosets.

    The cosets of 2, p+1, p^2+1 can merge for small m (at m=2 the cosets of 2
    and p^2+1 coincide), so the union, not the sum of sizes, is what counts.
    """
    union: set[int] = set()
    for s in (2, p + 1, p * p + 1):
        union.update(cyclotomic_coset(s, p, m).elements)
    return len(union)


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.symbols)


def codeword(
    ctx: FieldContext,
    alpha: FieldElement | int,
    beta: FieldElement | int,
    gamma: FieldElement | int,
) -> Codeword:
    a = ctx.element(alpha)
    b = ctx.element(beta)
    g = ctx.element(gamma)
    p = ctx.p
    e1, e2, e3 = 2, p + 1, p * p + 1
    syms = []
    for i in range(ctx.q - 1):
        x1 = ctx.primitive_power(e1 * i % (ctx.q - 1))
        x2 = ctx.primitive_power(e2 * i % (ctx.q - 1))
        x3 = ctx.primitive_power(e3 * i % (ctx.q - 1))
        syms.append(ctx.trace(a * x1 + b * x2 + g * x3))
    return Codeword(tuple(syms))


def weight_direct(cw: Codeword) -> int:
    return sum(1 for v in cw.symbols if v)


def weight_via_expsum(
    ctx: FieldContext,
    alpha: FieldElement | int,
    beta: FieldElement | int,
    gamma: FieldElement | int,
) -> int:
    """w = p^{m-1}(p-1) - R/p; R is always divisible by p."""
    p, m = ctx.p, ctx.m
    R = r_sum(ctx, alpha, beta, gamma)
    if R % p:
        raise InternalInconsistencyError(f"R-sum {R} not divisible by p={p}")
    return p ** (m - 1) * (p - 1) - R // p


@dataclass(frozen=True)
class WeightDistribution:
    """counts[w] = number of codewords of weight w; length l = q - 1."""

    l: int
    counts: tuple[tuple[int, int], ...]  # sorted (weight, count) pairs

    def __post_init__(self) -> None:
        prev = -1
        for w, c in self.counts:
            if not 0 <= w <= self.l:
                raise InvalidDistributionError(f"weight {w} outside [0, {self.l}]")
            if c < 0:
                raise InvalidDistributionError(f"negative count at weight {w}")
            if w <= prev:
                raise InvalidDistributionError("weights not strictly increasing")
            prev = w

    @staticmethod
    def from_dict(l: int, counts: dict[int, int]) -> "WeightDistribution":
        items = tuple(sorted((w, c) for w, c in counts.items() if c))
        return WeightDistribution(l, items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def to_json(self) -> str:
        return json.dumps(
            {"l": self.l, "counts": {str(w): str(c) for w, c in self.counts}},
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "WeightDistribution":
        data = json.loads(text)
        counts = {int(w): int(c) for w, c in data["counts"].items()}
        return WeightDistribution.from_dict(int(data["l"]), counts)

    def to_csv(self) -> str:
        lines = ["weight,count"]
        lines += [f"{w},{c}" for w, c in self.counts]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- enumeration


def _checkpoint_path(checkpoint_dir: str, p: int, m: int, method: str) -> str:
    return os.path.join(checkpoint_dir, f"weights-p{p}-m{m}-{method}.checkpoint.json")


def _chunk_width(q: int) -> int:
    # about 2^24 triples per kernel call / checkpoint
    return max(1, 2**24 // (q * q))


def classification_census(
    ctx: FieldContext,
    budget: int = DEFAULT_BUDGET,
    parallelism: int = 1,
    checkpoint_dir: str | None = None,
    progress: ProgressFn | None = None,
) -> dict[tuple[int, int], int]:
    """Count of nonzero triples per (eps, j) bucket, by exhaustive rank
    classification of all q^3 quadratic forms.

    j = m - rank; the all-zero triple is excluded.  Degenerate nonzero triples
    whose form is identically zero (possible below m=6) land in (+1, m).
    """
    if ctx.p != 3:
        raise ConfigurationError("classification census is a p=3 computation")
    if ctx.m % 2:
        raise ConfigurationError("classification families are defined for even m")
    q, m = ctx.q, ctx.m
    required = q**3
    if required > budget:
        raise BudgetExceededError(required, budget, "rank classification census")
    cache_key = (ctx.p, m, ctx.modulus)
    cached = _CENSUS_CACHE.get(cache_key)
    if cached is not None:
        return dict(cached)
    from . import _kernels

    _kernels.set_parallelism(parallelism)
    AH, BH, CH = _kernels.gram_tables(ctx)
    nb = 2 * (m + 1)
    buckets = np.zeros(nb, dtype=np.int64)
    start = 0
    ckpt = None
    if checkpoint_dir is not None:
        ckpt = _checkpoint_path(checkpoint_dir, ctx.p, m, "rank")
        state = _load_checkpoint(ckpt, ctx, "rank", nb)
        if state is not None:
            start, saved = state
            buckets = saved
            if progress:
                progress(f"resuming census at alpha index {start}/{q}")
    width = _chunk_width(q)
    for lo in range(start, q, width):
        hi = min(q, lo + width)
        buckets = buckets + _kernels.census_range(lo, hi, q, m, AH, BH, CH)
        if ckpt is not None:
            _save_checkpoint(ckpt, ctx, "rank", hi, buckets)
        if progress:
            progress(f"census {hi}/{q} alpha values")
    if ckpt is not None and os.path.exists(ckpt):
        os.unlink(ckpt)
    total = int(buckets.sum())
    if total != q**3:
        raise InternalInconsistencyError(f"census covered {total} of {q**3} triples")
    buckets[2 * m] -= 1  # the all-zero triple sits in the rank-0 bucket
    out: dict[tuple[int, int], int] = {}
    for j in range(m + 1):
        for s_i, eps in enumerate((1, -1)):
            c = int(buckets[2 * j + s_i])
            if c:
                out[(eps, j)] = c
    _CENSUS_CACHE[cache_key] = dict(out)
    return out


def _census_weight_counts(census: dict[tuple[int, int], int], p: int, m: int) -> dict[int, int]:
    """Triple-level weight histogram from an (eps, j) census."""
    counts: dict[int, int] = {0: 1}  # zero triple
    base = (p - 1) * p ** (m - 1)
    for (eps, j), c in census.items():
        if j % 2:
            w = base
        else:
            w = base - eps * (p - 1) * p ** ((m + j) // 2 - 1)
        counts[w] = counts.get(w, 0) + c
    return counts


def enumerate_distribution(
    ctx: FieldContext,
    method: str = "rank",
    budget: int = DEFAULT_BUDGET,
    parallelism: int = 1,
    checkpoint_dir: str | None = None,
    progress: ProgressFn | None = None,
) -> WeightDistribution:
    """Full weight distribution of the code (codeword counts, weight 0 included).

    Counts are per coefficient triple (they sum to q^3), with the zero
    triple contributing the single count at weight 0 for m >= 6.  Method
    "rank" classifies the quadratic form of each triple (O(q^3 m^3) total);
    "direct" tallies trace values per triple (O(q^4)).  Both are exhaustive
    and exact; they must agree.
    """
    p, q, m = ctx.p, ctx.q, ctx.m
    if method == "rank":
        census = classification_census(
            ctx, budget=budget, parallelism=parallelism,
            checkpoint_dir=checkpoint_dir, progress=progress,
        )
        triple_counts = _census_weight_counts(census, p, m)
    elif method == "direct":
        if p != 3:
            raise ConfigurationError("direct tally is a p=3 computation")
        required = q**4
        if required > budget:
            raise BudgetExceededError(required, budget, "direct trace tally enumeration")
        from . import _kernels

        _kernels.set_parallelism(parallelism)
        TRP, P2, P4, P10 = _kernels.tally_tables(ctx)
        hist = np.zeros(q + 1, dtype=np.int64)
        start = 0
        ckpt = None
        if checkpoint_dir is not None:
            ckpt = _checkpoint_path(checkpoint_dir, p, m, "direct")
            state = _load_checkpoint(ckpt, ctx, "direct", q + 1)
            if state is not None:
                start, hist = state
                if progress:
                    progress(f"resuming direct tally at alpha index {start}/{q}")
        width = _chunk_width(q)
        for lo in range(start, q, width):
            hi = min(q, lo + width)
            hist = hist + _kernels.weight_hist_range(lo, hi, q, m, TRP, P2, P4, P10)
            if ckpt is not None:
                _save_checkpoint(ckpt, ctx, "direct", hi, hist)
            if progress:
                progress(f"direct tally {hi}/{q} alpha values")
        if ckpt is not None and os.path.exists(ckpt):
            os.unlink(ckpt)
        if int(hist.sum()) != q**3:
            raise InternalInconsistencyError("direct tally lost triples")
        triple_counts = {w: int(c) for w, c in enumerate(hist) if c}
    else:
        raise ConfigurationError(f"unknown method {method!r} (expected rank or direct)")

    dist = WeightDistribution.from_dict(q - 1, triple_counts)
    if dist.total != q**3:
        raise InternalInconsistencyError("distribution does not cover all triples")
    return dist


def collapse_to_codewords(dist: WeightDistribution, p: int, m: int) -> WeightDistribution:
    """Convert triple-level counts to codeword counts.

    The triple-to-codeword map is linear with constant fiber size
    q^3 / p^k (27 at m=2, 9 at m=4, 1 from m=6 on); every count must divide
    exactly.
    """
    q = p**m
    k_dim = code_dimension(p, m)
    fiber = q**3 // p**k_dim
    counts: dict[int, int] = {}
    for w, c in dist.counts:
        if c % fiber:
            raise InternalInconsistencyError(
                f"triple count {c} at weight {w} not divisible by fiber size {fiber}"
            )
        counts[w] = c // fiber
    return WeightDistribution.from_dict(dist.l, counts)


def moment_bruteforce(
    ctx: FieldContext,
    k: int,
    budget: int = DEFAULT_BUDGET,
    parallelism: int = 1,
) -> EisensteinInteger:
    """Sum of S(alpha, beta, gamma)^k over all q^3 triples, exactly.

    For m <= 4 the sums are tallied per triple; for larger m the census
    route (classify, then sum family values) is used, which is equally exact.
    """
    if not 1 <= k <= 6:
        raise ConfigurationError("moments implemented for k in 1..6")
    if ctx.p != 3:
        raise ConfigurationError("moments are a p=3 computation")
    q, m = ctx.q, ctx.m
    if m <= 4:
        required = q**4
        if required > budget:
            raise BudgetExceededError(required, budget, "moment tally")
        from . import _kernels

        _kernels.set_parallelism(parallelism)
        TRP, P2, P4, P10 = _kernels.tally_tables(ctx)
        comp = _kernels.moment_components(q, m, TRP, P2, P4, P10)
        return EisensteinInteger(int(comp[k, 0]), int(comp[k, 1]))
    if m % 2:
        raise ConfigurationError("census moments need even m")
    census = classification_census(ctx, budget=budget, parallelism=parallelism)
    from .expsum import KIND_EVEN, KIND_ODD, KIND_ZERO, ExpSumClass

    total = EisensteinInteger(3**m, 0) ** k  # the all-zero triple
    for (eps, j), c in census.items():
        if j == m:
            fam = ExpSumClass(KIND_ZERO, 1, 0, m)
        elif j % 2 == 0:
            fam = ExpSumClass(KIND_EVEN, eps, m - j, j)
        else:
            fam = ExpSumClass(KIND_ODD, eps, m - j, j)
        total = total + c * (fam.sum_value(ctx.p) ** k)
    return total


def _generator_rref(ctx: FieldContext) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of the 3m-row trace generator matrix.

    Rows are the codewords of the basis triples (pi^d in one slot, zero in
    the others).  Returns (reduced rows, pivot columns); the pivot count is
    the code dimension.
    """
    p, q, m = ctx.p, ctx.q, ctx.m
    l = q - 1
    M: list[list[int]] = []
    for which in range(3):
        for d in range(m):
            coeffs: list[int] = [0, 0, 0]
            coeffs[which] = ctx.primitive_power(d).to_int()
            M.append(list(codeword(ctx, *coeffs).symbols))
    pivots: list[int] = []
    rr = 0
    for col in range(l):
        piv = next((k for k in range(rr, len(M)) if M[k][col] % p), None)
        if piv is None:
            continue
        M[rr], M[piv] = M[piv], M[rr]
        inv = pow(M[rr][col], p - 2, p)
        M[rr] = [(v * inv) % p for v in M[rr]]
        for k in range(len(M)):
            if k != rr and M[k][col] % p:
                c = M[k][col] % p
                M[k] = [(v - c * w) % p for v, w in zip(M[k], M[rr])]
        pivots.append(col)
        rr += 1
    return M, pivots


def generator_rank(ctx: FieldContext) -> int:
    """Rank of the trace generator matrix, independent of the coset count."""
    return len(_generator_rref(ctx)[1])


def dual_distribution_bruteforce(ctx: FieldContext, max_dual_dim: int = 12) -> WeightDistribution:
    """Weight distribution of the dual code by enumerating it outright.

    Only an oracle for tiny parameters: the dual has p^(l - k) words (243 at
    m=2), enumerated from a nullspace basis of the generator matrix.
    """
    p, q, m = ctx.p, ctx.q, ctx.m
    l = q - 1
    M, pivots = _generator_rref(ctx)
    k_dim = len(pivots)
    if k_dim != code_dimension(p, m):
        raise InternalInconsistencyError("generator rank disagrees with coset dimension")
    dual_dim = l - k_dim
    if dual_dim > max_dual_dim:
        raise BudgetExceededError(
            p**dual_dim, p**max_dual_dim, "dual code enumeration"
        )
    free = [c for c in range(l) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * l
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-M[r][fc]) % p
        basis.append(np.array(vec, dtype=np.int64))

    counts: dict[int, int] = {}
    total = p**dual_dim
    word = np.zeros(l, dtype=np.int64)
    for idx in range(total):
        rem = idx
        word[:] = 0
        for vec in basis:
            d = rem % p
            rem //= p
            if d:
                word += d * vec
        w = int(np.count_nonzero(word % p))
        counts[w] = counts.get(w, 0) + 1
    return WeightDistribution.from_dict(l, counts)


# ---------------------------------------------------------------- checkpoints


def _save_checkpoint(path: str, ctx: FieldContext, method: str, next_a: int, arr: np.ndarray) -> None:
    payload = {
        "p": ctx.p,
        "m": ctx.m,
        "modulus": list(ctx.modulus),
        "method": method,
        "next_a": next_a,
        "data": [int(v) for v in arr],
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def _load_checkpoint(
    path: str, ctx: FieldContext, method: str, size: int
) -> tuple[int, np.ndarray] | None:
    if not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if (
        payload.get("p") != ctx.p
        or payload.get("m") != ctx.m
        or payload.get("method") != method
        or payload.get("modulus") != list(ctx.modulus)
        or len(payload.get("data", ())) != size
    ):
        raise ConfigurationError(f"checkpoint {path} does not match this run")
    return int(payload["next_a"]), np.array(payload["data"], dtype=np.int64)
