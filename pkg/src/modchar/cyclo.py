"""Exact cyclotomic-integer arithmetic, Galois actions, and Brauer lifts.

A Cyclotomic is stored in the power basis of the n-th cyclotomic field with
rational coefficients, reduced modulo the n-th cyclotomic polynomial and
normalized to the minimal conductor, so equality is plain coefficient
equality.  Brauer lifting sends the Conway generator w of GF(q) to the root
of unity exp(2 pi i / (q-1)) in the compatible way: w^m -> zeta_{q-1}^m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import NonUnitGaloisExponent, PRegularViolation
from .gfla import (
    FieldSpec,
    FqMatrix,
    char_poly,
    factorize,
    field_make,
    irreducible_factors,
    mat_mul,
)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the n-th cyclotomic polynomial."""
    # x^n - 1 divided by the product of Phi_d for proper divisors d
    num = [0] * (n + 1)
    num[0] = -1
    num[n] = 1
    for d in range(1, n):
        if n % d:
            continue
        den = list(cyclotomic_polynomial(d))
        num = _exact_int_div(num, den)
    return tuple(num)


def _exact_int_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[i] = q
        if q:
            for j, dc in enumerate(den):
                num[i + j] -= q * dc
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _reduce_mod_phi(n: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    """Reduce an exponent list in zeta_n to the power basis mod Phi_n."""
    phi = list(cyclotomic_polynomial(n))
    deg = len(phi) - 1
    cs = list(coeffs)
    if len(cs) > n:
        folded = [Fraction(0)] * n
        for i, c in enumerate(cs):
            folded[i % n] += c
        cs = folded
    for i in range(len(cs) - 1, deg - 1, -1):
        c = cs[i]
        if c:
            cs[i] = Fraction(0)
            for j in range(deg):
                cs[i - deg + j] -= c * phi[j]
    cs = cs[:deg]
    while len(cs) < deg:
        cs.append(Fraction(0))
    return tuple(cs)


class Cyclotomic:
    """An exact element of Q(zeta_n), canonical minimal-conductor form."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs, _normalized=False):
        if _normalized:
            self.n = n
            self.coeffs = tuple(coeffs)
            return
        cs = [Fraction(c) for c in coeffs]
        n, cs = _normalize(n, cs)
        self.n = n
        self.coeffs = tuple(cs)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero() -> "Cyclotomic":
        return Cyclotomic(1, [Fraction(0)], _normalized=True)

    @staticmethod
    def one() -> "Cyclotomic":
        return Cyclotomic(1, [Fraction(1)], _normalized=True)

    @staticmethod
    def from_rational(x) -> "Cyclotomic":
        return Cyclotomic(1, [Fraction(x)], _normalized=True)

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Cyclotomic":
        k %= n
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[k] = Fraction(1)
        return Cyclotomic(n, coeffs)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return self.n == 1

    def as_fraction(self) -> Fraction:
        if self.n != 1:
            raise ValueError(f"{self} is irrational")
        return self.coeffs[0]

    def is_integer(self) -> bool:
        return self.n == 1 and self.coeffs[0].denominator == 1

    def as_int(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return f.numerator

    # -- arithmetic -----------------------------------------------------------

    def _lift_to(self, n: int) -> list[Fraction]:
        """Coefficients as an exponent list for zeta_n (n multiple of self.n)."""
        stride = n // self.n
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[(i * stride) % n] += c
        return out

    def __add__(self, other) -> "Cyclotomic":
        other = _coerce(other)
        n = self.n * other.n // gcd(self.n, other.n)
        a = self._lift_to(n)
        b = other._lift_to(n)
        return Cyclotomic(n, [x + y for x, y in zip(a, b)])

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.n, [-c for c in self.coeffs], _normalized=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return (-self) + _coerce(other)

    def __mul__(self, other) -> "Cyclotomic":
        other = _coerce(other)
        n = self.n * other.n // gcd(self.n, other.n)
        a = self._lift_to(n)
        b = other._lift_to(n)
        out = [Fraction(0)] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[(i + j) % n] += ai * bj
        return Cyclotomic(n, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via the multiplication matrix over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return Cyclotomic.from_rational(1 / self.coeffs[0])
        phi = euler_phi(self.n)
        cols = []
        basis = [Cyclotomic.zeta(self.n, i) for i in range(phi)]
        for bvec in basis:
            prod = self * bvec
            col = prod._lift_coeffs_for(self.n, phi)
            cols.append(col)
        mat = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        rhs = [Fraction(1)] + [Fraction(0)] * (phi - 1)
        sol = _solve_fraction(mat, rhs)
        if sol is None:
            raise ZeroDivisionError("not invertible")
        return Cyclotomic(self.n, sol)

    def _lift_coeffs_for(self, n: int, phi: int) -> list[Fraction]:
        if self.n == n:
            out = list(self.coeffs)
        else:
            out = list(_reduce_mod_phi(n, self._lift_to(n)))
        while len(out) < phi:
            out.append(Fraction(0))
        return out

    def galois(self, a: int) -> "Cyclotomic":
        """The automorphism zeta_n -> zeta_n^a; a must be a unit mod n."""
        if gcd(a, self.n) != 1:
            raise NonUnitGaloisExponent(f"{a} is not a unit modulo {self.n}")
        out = [Fraction(0)] * self.n
        for i, c in enumerate(self.coeffs):
            out[(i * a) % self.n] += c
        return Cyclotomic(self.n, out)

    def conj(self) -> "Cyclotomic":
        return self.galois(-1 % self.n) if self.n > 1 else self

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self):
        return format_cyclotomic(self)


def _coerce(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.from_rational(x)
    raise TypeError(f"cannot coerce {x!r} to Cyclotomic")


def _normalize(n: int, coeffs: list[Fraction]) -> tuple[int, list[Fraction]]:
    cs = list(_reduce_mod_phi(n, coeffs))
    # strip even conductor congruent to 2 mod 4: Q(zeta_{2m}) = Q(zeta_m), m odd
    changed = True
    while changed:
        changed = False
        if n % 2 == 0 and (n // 2) % 2 == 1 and n > 2:
            m = n // 2
            # zeta_n = -zeta_m^((m+1)//2)
            out = [Fraction(0)] * m
            for i, c in enumerate(cs):
                if c:
                    k = (i * ((m + 1) // 2)) % m
                    out[k] += c if i % 2 == 0 else -c
            n, cs = m, list(_reduce_mod_phi(m, out))
            changed = True
            continue
        for p in sorted(factorize(n)):
            m = n // p
            desc = _try_descend(n, cs, m)
            if desc is not None:
                n, cs = m, desc
                changed = True
                break
    return n, cs


def _try_descend(n: int, cs: list[Fraction], m: int) -> list[Fraction] | None:
    """Express the element in Q(zeta_m) if it lies there (m | n)."""
    if n == m:
        return None
    # invariance under Gal(Q(zeta_n)/Q(zeta_m)) = {a mod n : a = 1 mod m}
    val = Cyclotomic(n, cs, _normalized=True)
    for a in range(1, n):
        if gcd(a, n) != 1 or a % m != 1 % m or a == 1:
            continue
        out = [Fraction(0)] * n
        for i, c in enumerate(cs):
            out[(i * a) % n] += c
        if tuple(_reduce_mod_phi(n, out)) != tuple(cs):
            return None
    # solve for coefficients over the zeta_m power basis
    phi_n = euler_phi(n)
    phi_m = euler_phi(m)
    stride = n // m
    cols = []
    for j in range(phi_m):
        e = [Fraction(0)] * ((j * stride) + 1)
        e[j * stride] = Fraction(1)
        cols.append(list(_reduce_mod_phi(n, e)))
    mat = [[cols[j][i] for j in range(phi_m)] for i in range(phi_n)]
    sol = _solve_fraction_rect(mat, list(cs))
    return sol


def _solve_fraction(mat, rhs):
    """Solve a square rational system; None if singular."""
    n = len(mat)
    A = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    r = 0
    piv_cols = []
    for c in range(n):
        pr = None
        for i in range(r, n):
            if A[i][c] != 0:
                pr = i
                break
        if pr is None:
            return None
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    return [A[i][n] for i in range(n)]


def _solve_fraction_rect(mat, rhs):
    """Solve an overdetermined rational system exactly; None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    A = [mat[i][:] + [rhs[i]] for i in range(rows)]
    r = 0
    pivots = []
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if A[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if A[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = A[i][cols]
    # verify columns without pivots are genuinely free-zero for uniqueness
    return sol


def cyc_arith(a: Cyclotomic, b: Cyclotomic | None, kind: str, sigma: int | None = None):
    """Dispatch: add | mul | conj | galois(sigma)."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "conj":
        return a.conj()
    if kind == "galois":
        return a.galois(sigma)
    raise ValueError(f"unknown kind {kind!r}")


# -- text form ---------------------------------------------------------------


def format_cyclotomic(v: Cyclotomic) -> str:
    if v.n == 1:
        f = v.coeffs[0]
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    parts = ",".join(
        str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        for c in v.coeffs
    )
    return f"cyc({v.n})[{parts}]"


def parse_cyclotomic(s: str) -> Cyclotomic:
    s = s.strip()
    if not s.startswith("cyc("):
        return Cyclotomic.from_rational(Fraction(s))
    close = s.index(")")
    n = int(s[4:close])
    body = s[close + 1 :]
    assert body.startswith("[") and body.endswith("]")
    coeffs = [Fraction(t) for t in body[1:-1].split(",")] if body != "[]" else []
    return Cyclotomic(n, coeffs)


# -- ATLAS-style names for the quadratic irrationalities ----------------------


def atlas_b(n: int) -> Cyclotomic:
    """b_n = (-1 + sqrt(n*)) / 2 with n* = n for n = 1 mod 4, else -n."""
    total = Cyclotomic.zero()
    for r in range(1, n):
        if gcd(r, n) == 1 and pow(r, (n - 1) // 2, n) == 1:
            total = total + Cyclotomic.zeta(n, r)
    return total


def atlas_i(n: int) -> Cyclotomic:
    """i_n = sqrt(-n)."""
    return gauss_sqrt(-n)


def gauss_sqrt(d: int) -> Cyclotomic:
    """sqrt(d) for a squarefree integer d, via Gauss sums."""
    if d == 1:
        return Cyclotomic.one()
    if d < 0:
        return Cyclotomic.zeta(4) * gauss_sqrt(-d)
    out = Cyclotomic.one()
    for p, e in sorted(factorize(d).items()):
        assert e == 1, "squarefree only"
        out = out * _sqrt_prime(p)
    return out


def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return Cyclotomic.zeta(8) + Cyclotomic.zeta(8, 7)
    g = Cyclotomic.zero()
    for r in range(1, p):
        leg = pow(r, (p - 1) // 2, p)
        term = Cyclotomic.zeta(p, r)
        g = g + (term if leg == 1 else -term)
    # Gauss: g = sqrt(p) for p = 1 mod 4 and i*sqrt(p)... normalize
    if p % 4 == 1:
        return g
    return g * Cyclotomic.zeta(4, 3)  # g = i sqrt(p); divide by i


def atlas_name(v: Cyclotomic) -> str | None:
    """Pretty ATLAS name (b_n or i_n) for the supported quadratic cases."""
    if v.n == 1:
        return None
    n = v.n
    if n % 2 == 1 and n > 1:
        if v == atlas_b(n):
            return f"b{n}"
        if v == Cyclotomic.from_rational(-1) - atlas_b(n):
            return f"b{n}*"
    for m in range(1, 61):
        if any(e > 1 for e in factorize(m).values()):
            continue
        im = atlas_i(m)
        if v == im:
            return f"i{m}"
        if v == -im:
            return f"-i{m}"
    return None


# ---------------------------------------------------------------------------
# Brauer lifts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BrauerLift:
    """Multiplicative lift GF(q)* -> mu_{q-1}: w^m -> zeta_{q-1}^m."""

    field: FieldSpec

    def lift(self, value: int) -> Cyclotomic:
        if value == 0:
            raise ZeroDivisionError("0 has no Brauer lift")
        m = int(self.field._log[value])
        return Cyclotomic.zeta(self.field.q - 1, m)

    def table(self) -> dict[int, Cyclotomic]:
        return {
            int(v): self.lift(int(v))
            for v in self.field._exp[: self.field.q - 1]
        }


def matrix_order(m: FqMatrix, bound: int = 10**6) -> int:
    ident = FqMatrix.identity(m.field, m.rows)
    cur = m
    for k in range(1, bound + 1):
        if cur == ident:
            return k
        cur = mat_mul(cur, m)
    raise PRegularViolation("matrix order exceeds the search bound")


def brauer_char_value(repm, element, lift: BrauerLift | None = None) -> Cyclotomic:
    """Lift the eigenvalues of the representing matrix of a p-regular element.

    `element` is the representing FqMatrix itself (callers with group words
    evaluate them first).  The matrix order must be coprime to p; the
    eigenvalues are extracted over the smallest extension GF(p^m) containing
    them and lifted compatibly, so the result is independent of the choice.
    """
    from .gfla import FqPolynomial

    mat = element
    F = mat.field
    p = F.p
    order = matrix_order(mat)
    if order % p == 0:
        raise PRegularViolation(f"element order {order} divisible by {p}")
    # minimal extension with order | p^m - 1 and containing GF(q)
    m = F.k
    while (p**m - 1) % order:
        m += F.k
    ext = field_make(p, m)
    emb = F.embed_into(ext)
    cp = char_poly(mat)
    ext_coeffs = emb[cp.coeffs]
    cpx = FqPolynomial(ext, ext_coeffs)
    lifted = Cyclotomic.zero()
    lift_ext = BrauerLift(ext)
    for factor, mult in irreducible_factors(cpx, seed=1):
        assert factor.degree == 1, "eigenvalue outside the chosen extension"
        root = int(ext.neg(np.int64(int(factor.coeffs[0]))))
        if root == 0:
            raise PRegularViolation("singular representing matrix")
        lifted = lifted + mult * lift_ext.lift(root)
    return lifted
