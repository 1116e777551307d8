"""Exact arithmetic in F_{p^m} and its quadratic extension.

Field elements are dense coefficient vectors over F_p in the polynomial basis
1, x, ..., x^{m-1} modulo a fixed monic primitive polynomial whose residue
class of x is itself a primitive element pi.  An element also has an integer
code sum(c_i * p^i), which indexes the cached tables:

    exp[i]    code of pi^i, i in [0, q-1)
    log[code] discrete log of a nonzero code
    trace[code], power maps code -> code of x^e

All arithmetic is exact integer arithmetic; nothing in this package ever
touches floating point.

The modulus table below was produced by a direct search: for each m the
lexicographically smallest monic polynomial of degree m over F_3 that is
irreducible (gcd with x^{3^k} - x trivial for k <= m/2) and whose residue x
has multiplicative order exactly 3^m - 1 (checked against every prime factor).
Both properties are re-verified on every context construction, so a corrupted
table entry cannot survive import.
"""

from __future__ import annotations

import functools
import os
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigurationError, IntegrityError, InternalInconsistencyError

# Coefficients low-to-high; last coefficient (monic) included.
# For m=1 the table holds x+1, making pi = -1 = 2, the generator of F_3*.
PRIMITIVE_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 1): (1, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 2, 1, 1),
    (3, 4): (2, 0, 0, 1, 1),
    (3, 5): (1, 0, 0, 0, 2, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (3, 7): (1, 2, 1, 0, 0, 0, 0, 1),
    (3, 8): (2, 0, 0, 0, 0, 1, 0, 0, 1),
    (3, 9): (1, 0, 1, 2, 0, 0, 0, 0, 0, 1),
    (3, 10): (2, 0, 2, 1, 1, 0, 0, 0, 0, 0, 1),
    (3, 11): (1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 12): (2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1),
}

MODULUS_TABLE_ENV = "TRICYCLIC_MODULUS_TABLE"

MAX_M = 12


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _load_modulus_override(p: int, m: int) -> tuple[int, ...] | None:
    """First degree-m polynomial from the override file, if the env var is set.

    File format: one polynomial per line, coefficients low-to-high, whitespace
    separated; blank lines and #-comments ignored.
    """
    path = os.environ.get(MODULUS_TABLE_ENV)
    if not path:
        return None
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read modulus table {path!r}: {exc}") from exc
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        coeffs = tuple(int(t) % p for t in line.split())
        if len(coeffs) == m + 1:
            return coeffs
    return None


class FieldElement:
    """Immutable element of a FieldContext, held as a coefficient tuple."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: "FieldContext", coeffs: tuple[int, ...]):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _check(self, other: "FieldElement") -> None:
        if self.ctx is not other.ctx:
            raise ValueError("elements from different field contexts")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.ctx.p
        return FieldElement(
            self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        p = self.ctx.p
        return FieldElement(
            self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "FieldElement":
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.ctx._mul(self, other)

    def __pow__(self, e: int) -> "FieldElement":
        return self.ctx._pow(self, e)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_int(self) -> int:
        """Integer code sum(c_i * p^i)."""
        c = 0
        for a in reversed(self.coeffs):
            c = c * self.ctx.p + a
        return c

    def __repr__(self) -> str:
        return f"FieldElement({self.to_int()} in F_{self.ctx.q})"


class FieldContext:
    """The field F_{p^m} with a fixed primitive modulus and pi = residue of x.

    Immutable after construction; tables are built lazily and cached, and the
    object is safe to share across threads (table construction is idempotent).
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int] | None = None):
        if m < 1 or m > MAX_M:
            raise ConfigurationError(f"m={m} outside the supported range 1..{MAX_M}")
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ConfigurationError(f"p={p} is not prime")
        if modulus is None:
            modulus = _load_modulus_override(p, m)
        if modulus is None:
            try:
                modulus = PRIMITIVE_POLYS[(p, m)]
            except KeyError:
                raise ConfigurationError(f"no modulus on file for (p={p}, m={m})")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise IntegrityError(f"modulus {modulus} is not monic of degree {m}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        self._mul_cache: dict | None = None
        self._verify_modulus()
        if m == 1:
            pi_coeffs = ((-modulus[0]) % p,)
        else:
            pi_coeffs = tuple(1 if i == 1 else 0 for i in range(m))
        self.pi = FieldElement(self, pi_coeffs)
        self._build_exp_log()
        self._np_tables: dict = {}

    # -- construction-time checks ------------------------------------------

    def _verify_modulus(self) -> None:
        p, m, f = self.p, self.m, self.modulus

        def polmod(a, b):
            a = list(a)
            while len(a) >= len(b) and any(a):
                while a and a[-1] % p == 0:
                    a.pop()
                if len(a) < len(b):
                    break
                d = len(a) - len(b)
                c = a[-1] % p
                for i, y in enumerate(b):
                    a[i + d] = (a[i + d] - c * y) % p
                a.pop()
            return tuple(a)

        def polmulmod(a, b):
            out = [0] * (len(a) + len(b) - 1) if a and b else []
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return polmod([v % p for v in out], f)

        def polpowmod(base, e):
            r = (1,)
            base = polmod(list(base), f)
            while e:
                if e & 1:
                    r = polmulmod(r, base)
                base = polmulmod(base, base)
                e >>= 1
            return r

        def norm(a):
            a = list(a)
            while a and a[-1] % p == 0:
                a.pop()
            return tuple(v % p for v in a)

        def polgcd(a, b):
            a, b = norm(a), norm(b)
            while b:
                # a mod b
                a = list(a)
                binv = pow(b[-1], p - 2, p)
                while len(a) >= len(b):
                    d = len(a) - len(b)
                    c = (a[-1] * binv) % p
                    for i, y in enumerate(b):
                        a[i + d] = (a[i + d] - c * y) % p
                    a.pop()
                    while a and a[-1] % p == 0:
                        a.pop()
                a, b = b, norm(a)
            return a

        x = (0, 1)
        for k in range(1, m // 2 + 1):
            xq = polpowmod(x, p**k)
            diff = norm([(xq[i] if i < len(xq) else 0) - (x[i] if i < len(x) else 0) for i in range(max(len(xq), 2))])
            if len(polgcd(f, diff)) > 1:
                raise IntegrityError(f"modulus {f} is reducible over F_{p}")
        if m > 1 and polpowmod(x, p**m) != x:
            raise IntegrityError(f"modulus {f} is reducible over F_{p}")
        # multiplicative order of the residue of x must be exactly q-1
        pi = x if m > 1 else ((-f[0]) % p,)
        for r in _prime_factors(self.q - 1):
            if polpowmod(pi, (self.q - 1) // r) == (1,):
                raise IntegrityError(
                    f"residue of x has order dividing (q-1)/{r}; modulus {f} is not primitive"
                )

    def _build_exp_log(self) -> None:
        p, m, q = self.p, self.m, self.q
        mod = self.modulus
        pi = list(self.pi.coeffs)
        exp = [0] * (q - 1)
        cur = [0] * m
        cur[0] = 1
        for i in range(q - 1):
            c = 0
            for a in reversed(cur):
                c = c * p + a
            exp[i] = c
            # cur *= pi, reduced
            prod = [0] * (2 * m - 1) if m > 1 else [0]
            for ii, a in enumerate(cur):
                if a:
                    for jj, b in enumerate(pi):
                        prod[ii + jj] += a * b
            for d in range(len(prod) - 1, m - 1, -1):
                cdig = prod[d] % p
                if cdig:
                    for k in range(m):
                        prod[d - m + k] -= cdig * mod[k]
                prod[d] = 0
            cur = [v % p for v in prod[:m]]
        if len(set(exp)) != q - 1:
            raise IntegrityError("pi powers do not enumerate the nonzero elements")
        self._exp = exp
        log = [-1] * q
        for i, c in enumerate(exp):
            log[c] = i
        self._log = log

    # -- element plumbing ---------------------------------------------------

    def element(self, value: int | Iterable[int] | FieldElement) -> FieldElement:
        """Coerce an integer code, a coefficient sequence, or an element."""
        if isinstance(value, FieldElement):
            if value.ctx is not self:
                raise ValueError("element belongs to a different context")
            return value
        if isinstance(value, (int, np.integer)):
            c = int(value)
            if not 0 <= c < self.q:
                raise ValueError(f"code {c} outside [0, {self.q})")
            coeffs = []
            for _ in range(self.m):
                coeffs.append(c % self.p)
                c //= self.p
            return FieldElement(self, tuple(coeffs))
        coeffs = tuple(int(v) % self.p for v in value)
        if len(coeffs) != self.m:
            raise ValueError(f"need {self.m} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.m)

    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.m - 1))

    def scalar(self, c: int) -> FieldElement:
        return FieldElement(self, (c % self.p,) + (0,) * (self.m - 1))

    def elements(self) -> Iterator[FieldElement]:
        """All q elements in integer-code order."""
        for c in range(self.q):
            yield self.element(c)

    def _mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        ca, cb = a.to_int(), b.to_int()
        if ca == 0 or cb == 0:
            return self.zero()
        i = (self._log[ca] + self._log[cb]) % (self.q - 1)
        return self.element(self._exp[i])

    def _pow(self, a: FieldElement, e: int) -> FieldElement:
        c = a.to_int()
        if c == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return self.one() if e == 0 else self.zero()
        i = (self._log[c] * e) % (self.q - 1)
        return self.element(self._exp[i])

    def inverse(self, a: FieldElement) -> FieldElement:
        return self._pow(a, -1)

    def trace(self, x: FieldElement | int) -> int:
        """Tr(x) = sum of x^{p^k}, k < m; lands in the prime field."""
        x = self.element(x)
        acc = x
        frob = x
        for _ in range(self.m - 1):
            frob = self._pow(frob, self.p)
            acc = acc + frob
        if any(acc.coeffs[1:]):
            raise InternalInconsistencyError(f"trace of {x!r} not in F_{self.p}")
        return acc.coeffs[0]

    def primitive_power(self, i: int) -> FieldElement:
        return self.element(self._exp[i % (self.q - 1)])

    def log(self, x: FieldElement | int) -> int:
        c = x.to_int() if isinstance(x, FieldElement) else int(x)
        if c == 0:
            raise ZeroDivisionError("log of zero")
        return self._log[c]

    # -- cached numpy tables consumed by the enumeration kernels ------------

    def exp_table(self) -> np.ndarray:
        """int64[q-1], exp_table[i] = code of pi^i."""
        t = self._np_tables.get("exp")
        if t is None:
            t = np.array(self._exp, dtype=np.int64)
            self._np_tables["exp"] = t
        return t

    def log_table(self) -> np.ndarray:
        """int64[q], log of each nonzero code, -1 at index 0."""
        t = self._np_tables.get("log")
        if t is None:
            t = np.array(self._log, dtype=np.int64)
            self._np_tables["log"] = t
        return t

    def power_map(self, e: int) -> np.ndarray:
        """int64[q], code -> code of x^e (0 -> 0)."""
        key = ("pow", e)
        t = self._np_tables.get(key)
        if t is None:
            exp = self.exp_table()
            log = self.log_table()
            t = np.zeros(self.q, dtype=np.int64)
            nz = np.arange(1, self.q)
            t[nz] = exp[(log[nz] * e) % (self.q - 1)]
            self._np_tables[key] = t
        return t

    def trace_table(self) -> np.ndarray:
        """int8[q], code -> Tr(x)."""
        t = self._np_tables.get("trace")
        if t is None:
            # Tr(pi^i) once around the cycle, then scatter by code.
            t = np.zeros(self.q, dtype=np.int8)
            for i in range(self.q - 1):
                t[self._exp[i]] = self.trace(self.element(self._exp[i]))
            self._np_tables["trace"] = t
        return t

    def neg_map(self) -> np.ndarray:
        """int64[q], code -> code of -x."""
        t = self._np_tables.get("neg")
        if t is None:
            digits = _code_digits(self.q, self.m, self.p)
            t = _digits_code((-digits) % self.p, self.p)
            self._np_tables["neg"] = t
        return t

    def trace_product_table(self) -> np.ndarray:
        """int8[q, q], [u, v] -> Tr(u*v). Dense; only built for q <= 6561."""
        t = self._np_tables.get("trp")
        if t is None:
            if self.q > 6561:
                raise ConfigurationError(f"trace-product table too large for q={self.q}")
            trl = self.trace_table()[self.exp_table()]  # Tr(pi^k), k < q-1
            trl2 = np.concatenate([trl, trl])  # avoid mod in the index sum
            log = self.log_table()
            t = np.zeros((self.q, self.q), dtype=np.int8)
            nz = np.arange(1, self.q)
            t[1:, 1:] = trl2[log[nz][:, None] + log[nz][None, :]]
            self._np_tables["trp"] = t
        return t

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, m={self.m}, modulus={self.modulus})"


def _code_digits(q: int, m: int, p: int) -> np.ndarray:
    codes = np.arange(q, dtype=np.int64)
    digits = np.zeros((q, m), dtype=np.int64)
    for k in range(m):
        digits[:, k] = codes % p
        codes = codes // p
    return digits


def _digits_code(digits: np.ndarray, p: int) -> np.ndarray:
    m = digits.shape[1]
    out = np.zeros(digits.shape[0], dtype=np.int64)
    for k in reversed(range(m)):
        out = out * p + digits[:, k]
    return out


@functools.lru_cache(maxsize=None)
def _cached_context(p: int, m: int, modulus: tuple[int, ...] | None) -> FieldContext:
    return FieldContext(p, m, modulus)


def field_context(p: int, m: int, modulus: Sequence[int] | None = None) -> FieldContext:
    """Shared, cached context for (p, m); a custom modulus gets its own cache slot."""
    key = tuple(modulus) if modulus is not None else None
    if key is None and os.environ.get(MODULUS_TABLE_ENV):
        # Overrides must not be masked by a previously cached default context.
        override = _load_modulus_override(p, m)
        if override is not None:
            key = override
    return _cached_context(p, m, key)


def trace(ctx: FieldContext, x: FieldElement | int) -> int:
    return ctx.trace(x)


def primitive_power(ctx: FieldContext, i: int) -> FieldElement:
    return ctx.primitive_power(i)


def quadratic_extension(ctx: FieldContext):
    """F_{q^2} together with the embedding F_q -> F_{q^2}.

    The embedding sends pi to a root of ctx.modulus inside the extension
    (found among the subfield elements Pi^{k(Q-1)/(q-1)}), then extends by
    polynomial evaluation, which makes it a field homomorphism by construction.
    """
    if 2 * ctx.m > MAX_M:
        raise ConfigurationError(f"no modulus on file for degree {2 * ctx.m}")
    ext = field_context(ctx.p, 2 * ctx.m)
    step = (ext.q - 1) // (ctx.q - 1)
    root = None
    for k in range(ctx.q - 1):
        g = ext.primitive_power(k * step)
        acc = ext.zero()
        for c in reversed(ctx.modulus):
            acc = acc * g + ext.scalar(c)
        if acc.is_zero:
            root = g
            break
    if root is None:
        raise InternalInconsistencyError("modulus has no root in the extension")

    def embed(x: FieldElement) -> FieldElement:
        x = ctx.element(x)
        acc = ext.zero()
        for c in reversed(x.coeffs):
            acc = acc * root + ext.scalar(c)
        return acc

    return ext, embed
