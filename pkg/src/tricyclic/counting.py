"""Solution counting for the diagonal power-sum systems and variety tables.

Every system here has the shape

    sum_i sign_i * x_i^e  (+ const) = 0   for e in {2, p+1, p^2+1}

over F_q, differing only in arity, signs, and the affine constant.  The
moment systems (all signs +) give the power moments of the exponential sums;
the mixed-sign systems count low-weight dual codewords by their support
coordinates.  Brute force packs field elements digit-wise in base 8 so three
running equation prefixes stay exact in int64, and resolves the innermost
variable by binary search over its precomputed value keys.

The three variety tables are block lists of polynomial constraints whose
solution unions must reproduce three of the brute-force counts; the blocks
are kept verbatim as strings so `dump-tables` can show exactly what is being
enumerated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import BudgetExceededError, ConfigurationError, InternalInconsistencyError
from .gf import FieldContext, FieldElement

DEFAULT_BUDGET = 10**10

_PACK_SHIFT = 21  # 8^7 = 2^21: packed base-8 digit vectors fit for m <= 7
_KERNEL_MAX_Q = 3**7


class SystemId(str, Enum):
    SYS2_HOM = "SYS2_HOM"
    SYS3_AFF = "SYS3_AFF"
    SYS3_HOM = "SYS3_HOM"
    SYS4_AFF = "SYS4_AFF"
    SYS4_HOM = "SYS4_HOM"
    SYS5_HOM = "SYS5_HOM"
    SYS6_HOM = "SYS6_HOM"
    DUAL_W3_SAME = "DUAL_W3_SAME"
    DUAL_W3_MIX = "DUAL_W3_MIX"
    DUAL_W4_PAIR = "DUAL_W4_PAIR"
    DUAL_W4_ONEFLIP = "DUAL_W4_ONEFLIP"
    DUAL_W4_TWOFLIP = "DUAL_W4_TWOFLIP"


class TableId(str, Enum):
    TABLE_I = "TABLE_I"
    TABLE_II = "TABLE_II"
    TABLE_III = "TABLE_III"


@dataclass(frozen=True)
class SystemDef:
    """Signs per variable plus the affine constant added to every equation."""

    signs: tuple[int, ...]
    const: int

    @property
    def nvars(self) -> int:
        return len(self.signs)


SYSTEM_DEFS: dict[SystemId, SystemDef] = {
    SystemId.SYS2_HOM: SystemDef((1, 1), 0),
    SystemId.SYS3_AFF: SystemDef((1, 1), 1),
    SystemId.SYS3_HOM: SystemDef((1, 1, 1), 0),
    SystemId.SYS4_AFF: SystemDef((1, 1, 1), 1),
    SystemId.SYS4_HOM: SystemDef((1, 1, 1, 1), 0),
    SystemId.SYS5_HOM: SystemDef((1, 1, 1, 1, 1), 0),
    SystemId.SYS6_HOM: SystemDef((1, 1, 1, 1, 1, 1), 0),
    SystemId.DUAL_W3_SAME: SystemDef((1, 1), 1),
    SystemId.DUAL_W3_MIX: SystemDef((1, -1), 1),
    SystemId.DUAL_W4_PAIR: SystemDef((1, 1, -1), 0),
    SystemId.DUAL_W4_ONEFLIP: SystemDef((1, 1, 1, -1), 0),
    SystemId.DUAL_W4_TWOFLIP: SystemDef((1, 1, -1, -1), 0),
}

# Which full system each variety table must reproduce.
TABLE_SYSTEM: dict[TableId, SystemId] = {
    TableId.TABLE_I: SystemId.SYS5_HOM,
    TableId.TABLE_II: SystemId.DUAL_W4_ONEFLIP,
    TableId.TABLE_III: SystemId.DUAL_W4_TWOFLIP,
}


@dataclass(frozen=True)
class SolutionCount:
    system_id: str
    m: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 0:
            raise InternalInconsistencyError("negative solution count")


# ---------------------------------------------------------------- variety tables
#
# Block strings kept in source verbatim; each block is one irreducible
# component, solutions of the table = union over blocks.

_TABLE_I_VARS = ("x", "y", "z", "w", "u")

TABLE_I_BLOCKS: tuple[tuple[str, ...], ...] = (
    ("x^2", "y - w - u", "z - w + u"),
    ("x^2", "y - w - u", "z + w - u"),
    ("x^2", "y - w + u", "z - w - u"),
    ("x^2", "y - w + u", "z + w + u"),
    ("x^2", "y + w - u", "z - w - u"),
    ("x^2", "y + w - u", "z + w + u"),
    ("x^2", "y + w + u", "z - w + u"),
    ("x^2", "y + w + u", "z + w - u"),
    ("y^2", "x - w - u", "z - w + u"),
    ("y^2", "x - w - u", "z + w - u"),
    ("y^2", "x - w + u", "z - w - u"),
    ("y^2", "x - w + u", "z + w + u"),
    ("y^2", "x + w - u", "z - w - u"),
    ("y^2", "x + w - u", "z + w + u"),
    ("y^2", "x + w + u", "z - w + u"),
    ("y^2", "x + w + u", "z + w - u"),
    ("z^2", "x - w - u", "y - w + u"),
    ("z^2", "x - w - u", "y + w - u"),
    ("z^2", "x - w + u", "y - w - u"),
    ("z^2", "x - w + u", "y + w + u"),
    ("z^2", "x + w - u", "y - w - u"),
    ("z^2", "x + w - u", "y + w + u"),
    ("z^2", "x + w + u", "y - w + u"),
    ("z^2", "x + w + u", "y + w - u"),
    ("w^2", "x - z - u", "y - z + u"),
    ("w^2", "x - z - u", "y + z - u"),
    ("w^2", "x - z + u", "y - z - u"),
    ("w^2", "x - z + u", "y + z + u"),
    ("w^2", "x + z - u", "y - z - u"),
    ("w^2", "x + z - u", "y + z + u"),
    ("w^2", "x + z + u", "y - z + u"),
    ("w^2", "x + z + u", "y + z - u"),
    ("u^2", "x - z - w", "y - z + w"),
    ("u^2", "x - z - w", "y + z - w"),
    ("u^2", "x - z + w", "y - z - w"),
    ("u^2", "x - z + w", "y + z + w"),
    ("u^2", "x + z - w", "y - z - w"),
    ("u^2", "x + z - w", "y + z + w"),
    ("u^2", "x + z + w", "y - z + w"),
    ("u^2", "x + z + w", "y + z - w"),
)

_TABLE_II_VARS = ("x", "y", "z", "w")

TABLE_II_BLOCKS: tuple[tuple[str, ...], ...] = (
    ("y^4", "x^2 + y^2", "z - w"),
    ("y^4", "x^2 + y^2", "z + w"),
    ("z^4", "x^2 + z^2", "y - w"),
    ("z^4", "x^2 + z^2", "y + w"),
    ("z^4", "y^2 + z^2", "x - w"),
    ("z^4", "y^2 + z^2", "x + w"),
    ("w^4", "y^2 - y*z + z^2 + w^2", "x - y + z"),
    ("w^4", "y^2 - y*z + z^2 + w^2", "x + y - z"),
    ("w^4", "y^2 + y*z + z^2 + w^2", "x - y - z"),
    ("w^4", "y^2 + y*z + z^2 + w^2", "x + y + z"),
)

_TABLE_III_VARS = ("x", "y", "z", "w")

TABLE_III_BLOCKS: tuple[tuple[str, ...], ...] = (
    ("x - z", "y - w"),
    ("x - z", "y + w"),
    ("x + z", "y - w"),
    ("x + z", "y + w"),
    ("x - w", "y - z"),
    ("x - w", "y + z"),
    ("x + w", "y - z"),
    ("x + w", "y + z"),
)

VARIETY_TABLES: dict[TableId, tuple[tuple[str, ...], tuple[tuple[str, ...], ...]]] = {
    TableId.TABLE_I: (_TABLE_I_VARS, TABLE_I_BLOCKS),
    TableId.TABLE_II: (_TABLE_II_VARS, TABLE_II_BLOCKS),
    TableId.TABLE_III: (_TABLE_III_VARS, TABLE_III_BLOCKS),
}


def _parse_poly(poly: str, names: tuple[str, ...]) -> tuple[str, object]:
    """Parse a block polynomial into ("pow", var) / ("lin", row) / ("quad", Q).

    Grammar is exactly what the tables use: signed sums of terms, each term a
    variable, a squared/quarted variable, or a product of two variables.
    """
    s = poly.replace(" ", "")
    terms: list[tuple[int, str]] = []
    sign = 1
    cur = ""
    for ch in s:
        if ch in "+-":
            if cur:
                terms.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
        else:
            cur += ch
    if cur:
        terms.append((sign, cur))
    if not terms:
        raise ConfigurationError(f"empty polynomial {poly!r}")

    parsed: list[tuple[int, tuple[int, int] | int, int]] = []  # (sign, vars, degree)
    for sg, term in terms:
        if "^" in term:
            var, exp = term.split("^")
            i = names.index(var)
            parsed.append((sg, (i, i), int(exp)))
        elif "*" in term:
            va, vb = term.split("*")
            parsed.append((sg, (names.index(va), names.index(vb)), 2))
        elif len(term) == 1:
            parsed.append((sg, names.index(term), 1))
        else:
            raise ConfigurationError(f"cannot parse term {term!r} in {poly!r}")

    degrees = {d for _, _, d in parsed}
    if degrees == {1}:
        row = [0] * len(names)
        for sg, i, _ in parsed:
            row[i] += sg
        return "lin", tuple(v % 3 for v in row)
    if len(parsed) == 1:
        sg, (i, _), d = parsed[0]
        if d in (2, 4):
            return "pow", i
        raise ConfigurationError(f"unexpected monomial degree in {poly!r}")
    n = len(names)
    Q = [[0] * n for _ in range(n)]
    for sg, ij, d in parsed:
        if d != 2:
            raise ConfigurationError(f"mixed degrees in {poly!r}")
        i, k = ij
        if i == k:
            Q[i][i] = (Q[i][i] + sg) % 3
        else:
            # cross term contributes to both symmetric slots; x Q x^T counts twice
            half = (sg * 2) % 3  # inverse of 2 mod 3 is 2
            Q[i][k] = (Q[i][k] + half) % 3
            Q[k][i] = (Q[k][i] + half) % 3
    return "quad", tuple(tuple(r) for r in Q)


def _block_linear_rows(block: tuple[str, ...], names: tuple[str, ...]) -> list[tuple[int, ...]]:
    """Reduce a block to linear rows over F_3 (valid because every quadratic
    constraint collapses to a squared linear form once the power-constrained
    variables are zero)."""
    n = len(names)
    rows: list[list[int]] = []
    zeros: set[int] = set()
    quads = []
    for poly in block:
        kind, data = _parse_poly(poly, names)
        if kind == "pow":
            zeros.add(data)
        elif kind == "lin":
            rows.append(list(data))
        else:
            quads.append([list(r) for r in data])
    for i in zeros:
        row = [0] * n
        row[i] = 1
        rows.append(row)
    for Q in quads:
        for i in zeros:
            for k in range(n):
                Q[i][k] = 0
                Q[k][i] = 0
        nz = [i for i in range(n) if any(Q[i])]
        if not nz:
            continue
        # rank must be 1 (Q = c f^T f): normalize a nonzero row as the
        # functional f and check every row is a multiple of it
        f = list(Q[nz[0]])
        lead_pos = next(k for k in range(n) if f[k])
        inv = f[lead_pos]  # 1 and 2 are self-inverse mod 3
        fn = [(v * inv) % 3 for v in f]
        for i in range(n):
            scale = (Q[i][lead_pos] * fn[lead_pos]) % 3
            if any((Q[i][k] - scale * fn[k]) % 3 for k in range(n)):
                raise InternalInconsistencyError(
                    "quadratic block constraint does not collapse to a square"
                )
        rows.append(fn)
    return [tuple(r) for r in rows]


def _nullspace_f3(rows: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Basis of the solution space of rows * x = 0 over F_3."""
    M = [list(r) for r in rows]
    pivots: list[int] = []
    rr = 0
    for col in range(n):
        piv = next((k for k in range(rr, len(M)) if M[k][col] % 3), None)
        if piv is None:
            continue
        M[rr], M[piv] = M[piv], M[rr]
        inv = M[rr][col] % 3  # 1 or 2, self-inverse
        M[rr] = [(v * inv) % 3 for v in M[rr]]
        for k in range(len(M)):
            if k != rr and M[k][col] % 3:
                c = M[k][col] % 3
                M[k] = [(v - c * w) % 3 for v, w in zip(M[k], M[rr])]
        pivots.append(col)
        rr += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * n
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-M[r][fc]) % 3
        basis.append(tuple(vec))
    return basis


def _rank_f3(rows: list[tuple[int, ...]], n: int) -> int:
    return n - len(_nullspace_f3(rows, n))


def _system_tables(
    ctx: FieldContext, sdef: SystemDef
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Packed per-variable value tables and key/count arrays for the kernel."""
    p, m, q = ctx.p, ctx.m, ctx.q
    exps = (2, p + 1, p * p + 1)
    digits_w = 8 ** np.arange(m, dtype=np.int64)

    def pack8(codes: np.ndarray) -> np.ndarray:
        out = np.zeros(codes.shape, dtype=np.int64)
        rem = codes.astype(np.int64)
        for d in range(m):
            out += (rem % 3) * digits_w[d]
            rem //= 3
        return out

    n = sdef.nvars
    TT = np.zeros((3, n, q), dtype=np.int64)
    for e_i, e in enumerate(exps):
        pm = ctx.power_map(e).astype(np.int64)
        neg = ctx.neg_map().astype(np.int64)
        for v in range(n):
            codes = pm if sdef.signs[v] > 0 else neg[pm]
            TT[e_i, v] = pack8(codes)

    cpack = pack8(np.array([ctx.scalar(sdef.const).to_int()], dtype=np.int64))[0]
    C0 = np.array([cpack, cpack, cpack], dtype=np.int64)

    size8 = 8**m
    vals = np.arange(size8, dtype=np.int64)
    red = np.zeros(size8, dtype=np.int64)
    neg8 = np.zeros(size8, dtype=np.int64)
    rem = vals.copy()
    for d in range(m):
        dig = rem % 8
        red += (dig % 3) * digits_w[d]
        neg8 += ((3 - dig % 3) % 3) * digits_w[d]
        rem //= 8
    last = TT[:, n - 1, :]
    K = last[0] | (last[1] << _PACK_SHIFT) | (last[2] << (2 * _PACK_SHIFT))
    keys, cnts = np.unique(K, return_counts=True)
    return TT, C0, red, neg8, keys.astype(np.int64), cnts.astype(np.int64)


def count_bruteforce(
    system_id: SystemId | str,
    ctx: FieldContext,
    budget: int = DEFAULT_BUDGET,
    parallelism: int = 1,
) -> SolutionCount:
    """Exact count of solutions in F_q^n by exhaustive enumeration."""
    system_id = SystemId(system_id)
    sdef = SYSTEM_DEFS[system_id]
    n = sdef.nvars
    q = ctx.q
    required = q**n
    if required > budget:
        raise BudgetExceededError(required, budget, f"brute-force count of {system_id.value}")
    if q > _KERNEL_MAX_Q:
        raise ConfigurationError(
            f"brute-force packing supports m <= 7 (q <= {_KERNEL_MAX_Q}); got q={q}"
        )
    from . import _kernels

    _kernels.set_parallelism(parallelism)
    TT, C0, red, neg8, keys, cnts = _system_tables(ctx, sdef)
    total = 0
    chunk = max(1, min(q, int(2**24 // max(1, q ** (n - 2))) if n >= 2 else q))
    for lo in range(0, q, chunk):
        hi = min(q, lo + chunk)
        part = int(_kernels.count_tuples(n, q, lo, hi, TT, C0, red, neg8, keys, cnts))
        if part < 0:
            raise InternalInconsistencyError(f"unsupported arity {n}")
        total += part
    return SolutionCount(system_id.value, ctx.m, total)


def closed_form_count(system_id: SystemId | str, p: int, m: int) -> SolutionCount:
    """Counts known in closed form; everything else raises."""
    system_id = SystemId(system_id)
    q = p**m
    if system_id == SystemId.SYS2_HOM:
        if p % 4 != 3:
            raise ConfigurationError("two-square count needs p = 3 mod 4")
        return SolutionCount(system_id.value, m, 1)
    if system_id == SystemId.SYS3_AFF:
        return SolutionCount(system_id.value, m, p + 1)
    if system_id == SystemId.SYS3_HOM:
        return SolutionCount(system_id.value, m, (p + 1) * (q - 1) + 1)
    if system_id == SystemId.SYS4_AFF:
        if p != 3:
            raise ConfigurationError("four-variable affine count is a p=3 result")
        return SolutionCount(system_id.value, m, 4 * (2 * q - 3))
    if system_id == SystemId.SYS4_HOM:
        if p != 3:
            raise ConfigurationError("fourth-moment count is a p=3 result")
        return SolutionCount(system_id.value, m, 8 * (q - 1) ** 2 + 1)
    if system_id == SystemId.SYS5_HOM:
        if p != 3:
            raise ConfigurationError("fifth-moment count is a p=3 result")
        return SolutionCount(system_id.value, m, 5 * (q - 1) * (8 * q - 2 * p - 10) + 1)
    raise ConfigurationError(f"no closed form for {system_id.value}")


def variety_count(
    table_id: TableId | str,
    ctx: FieldContext,
    budget: int = DEFAULT_BUDGET,
) -> SolutionCount:
    """Size of the union of the block solution sets of one variety table.

    Each block reduces to F_3-linear constraints whose solutions form an
    F_q-subspace.  Small unions are enumerated into a deduplicating set; when
    the enumeration would be large the union size comes from
    inclusion-exclusion over block subsets (intersections are subspaces, so
    each term is q^nullity), which is exact and equivalent.
    """
    table_id = TableId(table_id)
    names, blocks = VARIETY_TABLES[table_id]
    n = len(names)
    q = ctx.q
    block_rows = [_block_linear_rows(b, names) for b in blocks]
    dims = [n - _rank_f3(rows, n) for rows in block_rows]
    work = sum(q**d for d in dims)
    if work > budget:
        raise BudgetExceededError(work, budget, f"variety enumeration of {table_id.value}")

    if work <= 3 * 10**7:
        total = _variety_count_dedup(ctx, block_rows, n)
    elif len(blocks) <= 16:
        total = _variety_count_inclusion_exclusion(ctx, block_rows, n)
    else:
        raise ConfigurationError(
            f"{table_id.value} too large to deduplicate at q={q} "
            "and has too many blocks for inclusion-exclusion"
        )
    return SolutionCount(table_id.value, ctx.m, total)


def _variety_count_dedup(ctx: FieldContext, block_rows: list[list[tuple[int, ...]]], n: int) -> int:
    q, m = ctx.q, ctx.m
    codes = np.arange(q, dtype=np.int64)
    digits = np.empty((q, m), dtype=np.int64)
    rem = codes.copy()
    for d in range(m):
        digits[:, d] = rem % 3
        rem //= 3
    pow3 = 3 ** np.arange(m, dtype=np.int64)
    packs: list[np.ndarray] = []
    qpow = q ** np.arange(n, dtype=np.int64)
    for rows in block_rows:
        basis = _nullspace_f3(rows, n)
        d = len(basis)
        if d == 0:
            packs.append(np.zeros(1, dtype=np.int64))
            continue
        grids = np.indices((q,) * d).reshape(d, -1)  # coefficient codes
        coeff_digits = digits[grids]  # (d, N, m)
        tuple_codes = np.zeros((grids.shape[1], n), dtype=np.int64)
        for var in range(n):
            acc = np.zeros((grids.shape[1], m), dtype=np.int64)
            for k, vec in enumerate(basis):
                if vec[var]:
                    acc += vec[var] * coeff_digits[k]
            tuple_codes[:, var] = (acc % 3) @ pow3
        packs.append(tuple_codes @ qpow)
    return int(np.unique(np.concatenate(packs)).size)


def _variety_count_inclusion_exclusion(
    ctx: FieldContext, block_rows: list[list[tuple[int, ...]]], n: int
) -> int:
    q = ctx.q
    nb = len(block_rows)
    total = 0
    for r in range(1, nb + 1):
        for subset in itertools.combinations(range(nb), r):
            stacked: list[tuple[int, ...]] = []
            for b in subset:
                stacked.extend(block_rows[b])
            dim = n - _rank_f3(stacked, n)
            total += (-1) ** (r + 1) * q**dim
    return total


def circle_solutions(
    ctx2: FieldContext, a: FieldElement
) -> Iterator[tuple[FieldElement, FieldElement]]:
    """All q^2 - 1 solutions of x^2 + y^2 = a over the quadratic extension.

    Parametrized by theta over the nonzero elements: with s^2 = a and
    t^2 = -1, x = (theta + 1/theta) * s / 2 and y = (theta - 1/theta) * s*t / 2.
    Solutions for distinct theta are distinct.
    """
    a = ctx2.element(a)
    if a.is_zero:
        raise ConfigurationError("circle parametrization needs a nonzero right side")
    Q = ctx2.q
    if Q % 4 != 1:
        raise ConfigurationError("need -1 to be a square: q^2 = 1 mod 4")
    L = ctx2.log(a)
    if L % 2:
        raise InternalInconsistencyError("right side is a non-square in the extension")
    s = ctx2.primitive_power(L // 2)
    t = ctx2.primitive_power((Q - 1) // 4)
    inv2 = ctx2.scalar(pow(2, ctx2.p - 2, ctx2.p))
    st = s * t
    for i in range(Q - 1):
        theta = ctx2.primitive_power(i)
        theta_inv = ctx2.primitive_power((Q - 1 - i) % (Q - 1))
        x = inv2 * s * (theta + theta_inv)
        y = inv2 * st * (theta - theta_inv)
        yield x, y
