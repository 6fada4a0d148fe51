"""Exact arithmetic in small finite fields GF(p^k) and dense linear algebra over them.

Elements are packed integers: the element sum(a_i * w^i) is stored as
sum(a_i * p^i), where w is the canonical generator (a root of the Conway
polynomial of GF(p^k)).  All bulk operations work on numpy int64 arrays of
packed values, so matrix arithmetic stays vectorized; multiplication goes
through discrete-log tables, addition through base-p digit tables.  Every
operation is deterministic, so downstream results are bit-reproducible.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    CompositeCharacteristic,
    FieldTooLarge,
    FieldMismatch,
    NotSquare,
    ShapeMismatch,
)

FIELD_CEILING = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale inputs only)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Conway polynomials
#
# Computed from the definition: the minimal monic primitive polynomial of
# degree k over GF(p) compatible with the Conway polynomials of all proper
# subfields, minimality taken in the standard alternating-sign lexicographic
# order.  Results are cached in memory and, when possible, in a small JSON
# file so repeated runs skip the search.
# ---------------------------------------------------------------------------

_conway_mem: dict[tuple[int, int], tuple[int, ...]] = {}


def _cache_path() -> str | None:
    override = os.environ.get("MODCHAR_CONWAY_CACHE")
    if override:
        return override
    home = os.environ.get("HOME")
    if not home:
        return None
    return os.path.join(home, ".cache", "modchar", "conway.json")


def _load_disk_cache() -> None:
    path = _cache_path()
    if not path or not os.path.exists(path):
        return
    try:
        with open(path) as fh:
            data = json.load(fh)
        for key, coeffs in data.items():
            p, k = key.split(",")
            _conway_mem[(int(p), int(k))] = tuple(int(c) for c in coeffs)
    except (OSError, ValueError):
        pass


def _store_disk_cache() -> None:
    path = _cache_path()
    if not path:
        return
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = {f"{p},{k}": list(c) for (p, k), c in _conway_mem.items()}
        with open(path, "w") as fh:
            json.dump(data, fh, sort_keys=True)
    except OSError:
        pass


_load_disk_cache()


def _pol_mulmod(a, b, f, p):
    """Product of coefficient tuples a*b reduced mod the monic poly f, over GF(p)."""
    k = len(f) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, k - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(k):
                res[i - k + j] = (res[i - k + j] - c * f[j]) % p
    while len(res) > k:
        res.pop()
    while len(res) < k:
        res.append(0)
    return tuple(res)


def _pol_powmod(a, e, f, p):
    k = len(f) - 1
    res = tuple([1] + [0] * (k - 1))
    base = a
    while e:
        if e & 1:
            res = _pol_mulmod(res, base, f, p)
        base = _pol_mulmod(base, base, f, p)
        e >>= 1
    return res


def _x_mod(f, p):
    k = len(f) - 1
    if k == 1:
        return ((-f[0]) % p,)
    return tuple(1 if i == 1 else 0 for i in range(k))


def _is_one(a) -> bool:
    return a[0] == 1 and all(c == 0 for c in a[1:])


def _is_irreducible(f, p) -> bool:
    """Rabin test: x^(p^k) = x mod f and gcd degree conditions via powers."""
    k = len(f) - 1
    x = _x_mod(f, p)
    xq = _pol_powmod(x, p**k, f, p)
    if xq != x:
        return False
    for r in factorize(k):
        xe = _pol_powmod(x, p ** (k // r), f, p)
        # gcd(x^(p^(k/r)) - x, f) must be 1; since f could only share an
        # irreducible factor of degree dividing k/r, it suffices that the
        # difference is nonzero and, if it has an inverse mod f, coprime.
        diff = tuple((a - b) % p for a, b in zip(xe, x))
        if all(c == 0 for c in diff):
            return False
        if not _pol_is_unit(diff, p, f):
            return False
    return True


def _pol_is_unit(a, p, f) -> bool:
    """True when gcd(a, f) = 1, computed by the Euclidean algorithm."""
    A = [c % p for c in f]
    B = list(a)
    while any(B):
        while A and A[-1] == 0:
            A.pop()
        while B and B[-1] == 0:
            B.pop()
        if not B:
            break
        if len(A) < len(B):
            A, B = B, A
            continue
        inv = pow(B[-1], p - 2, p)
        shift = len(A) - len(B)
        c = A[-1] * inv % p
        for i, bc in enumerate(B):
            A[i + shift] = (A[i + shift] - c * bc) % p
    while A and A[-1] == 0:
        A.pop()
    return len(A) == 1


def _is_primitive(f, p) -> bool:
    k = len(f) - 1
    q1 = p**k - 1
    x = _x_mod(f, p)
    for r in factorize(q1):
        if _is_one(_pol_powmod(x, q1 // r, f, p)):
            return False
    return True


def _is_compatible(f, p, k) -> bool:
    q1 = p**k - 1
    x = _x_mod(f, p)
    for d in range(1, k):
        if k % d:
            continue
        sub = conway_polynomial(p, d)
        y = _pol_powmod(x, q1 // (p**d - 1), f, p)
        acc = tuple([sub[0] % p] + [0] * (k - 1))
        ypow = tuple([1] + [0] * (k - 1))
        for c in sub[1:]:
            ypow = _pol_mulmod(ypow, y, f, p)
            if c:
                acc = tuple((ai + c * yi) % p for ai, yi in zip(acc, ypow))
        if any(acc):
            return False
    return True


def conway_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Coefficients (ascending, length k+1) of the Conway polynomial of GF(p^k)."""
    key = (p, k)
    if key in _conway_mem:
        return _conway_mem[key]
    # candidates ordered by the tuple (c_{k-1},...,c_0) with
    # f(x) = x^k - c_{k-1} x^(k-1) + c_{k-2} x^(k-2) - ...
    found = None
    for idx in range(p**k):
        # idx in base p, most significant digit first, is (c_{k-1}, ..., c_0)
        cvals = []
        t = idx
        for _ in range(k):
            cvals.append(t % p)
            t //= p
        cvals.reverse()
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        for j in range(k):
            sign = -1 if ((k - j) % 2) else 1
            coeffs[j] = (sign * cvals[k - 1 - j]) % p
        f = tuple(coeffs)
        if f[0] == 0:  # root 0 is never a unit, let alone primitive
            continue
        if not _is_irreducible(f, p):
            continue
        if not _is_primitive(f, p):
            continue
        if not _is_compatible(f, p, k):
            continue
        found = f
        break
    if found is None:
        raise FieldTooLarge(f"no Conway polynomial found for GF({p}^{k})")
    _conway_mem[key] = found
    _store_disk_cache()
    return found


# ---------------------------------------------------------------------------
# FieldSpec
# ---------------------------------------------------------------------------

ZECH_ZERO = -1  # sentinel: log of 0 in the Zech table


class FieldSpec:
    """A small finite field GF(p^k) with its arithmetic tables.

    Immutable; construct via field_make().  Tables:
      exp[i]  packed value of w^i for 0 <= i <= 2(q-2)
      log[v]  discrete log of the packed value v (log[0] is a dummy 0)
      zech[m] log(1 + w^m), or ZECH_ZERO when 1 + w^m = 0
      dig[v]  base-p digit vector of v
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise CompositeCharacteristic(f"{p} is not prime")
        q = p**k
        if k < 1 or q > FIELD_CEILING:
            raise FieldTooLarge(f"GF({p}^{k}) exceeds the ceiling {FIELD_CEILING}")
        self.p = p
        self.k = k
        self.q = q
        self.conway = conway_polynomial(p, k)
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        v = np.arange(q, dtype=np.int64)
        dig = np.empty((q, k), dtype=np.int64)
        t = v.copy()
        for i in range(k):
            dig[:, i] = t % p
            t //= p
        self._dig = dig
        self._pow = p ** np.arange(k, dtype=np.int64)
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        cur = [0] * k
        cur[0] = 1
        con = self.conway
        for i in range(q - 1):
            exp[i] = sum(c * int(pp) for c, pp in zip(cur, self._pow))
            # multiply by x and reduce by the Conway polynomial
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                for j in range(k):
                    cur[j] = (cur[j] - carry * con[j]) % p
        exp[q - 1 :] = exp[: q - 1]
        self._exp = exp
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1, dtype=np.int64)
        self._log = log
        # Zech logarithms: zech[m] = log(1 + w^m)
        ones = self.add(np.int64(1), exp[: q - 1])
        zech = np.where(ones == 0, np.int64(ZECH_ZERO), log[ones])
        self.zech = zech
        self.omega = int(exp[1]) if q > 2 else 1
        self.neg_one = int(self.neg(np.int64(1)))

    # -- elementwise packed arithmetic (numpy arrays or scalars) ------------

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        d = (self._dig[a] + self._dig[b]) % self.p
        return d @ self._pow

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        d = (-self._dig[a]) % self.p
        return d @ self._pow

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        res = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), np.int64(0), res)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in GF(q)")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def zech_add(self, a, b):
        """Addition through the Zech-logarithm table (reference path for tests)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        q1 = self.q - 1
        la, lb = self._log[a], self._log[b]
        m = (lb - la) % q1
        z = self.zech[m]
        res = self._exp[(la + z) % q1]
        res = np.where(z == ZECH_ZERO, np.int64(0), res)
        res = np.where(a == 0, b, res)
        res = np.where(b == 0, a, res)
        return res

    def pow_el(self, a: int, e: int) -> int:
        a = int(a)
        if a == 0:
            return 0 if e else 1
        return int(self._exp[(int(self._log[a]) * (e % (self.q - 1))) % (self.q - 1)])

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        q1 = self.q - 1
        la = int(self._log[a])
        return q1 // _gcd(la, q1) if la else 1

    def embed_into(self, other: "FieldSpec"):
        """Packed-value map GF(q) -> GF(q^t) along the Conway-compatible embedding."""
        if other.p != self.p or other.k % self.k:
            raise FieldMismatch("no embedding between these fields")
        stride = (other.q - 1) // (self.q - 1)
        table = np.zeros(self.q, dtype=np.int64)
        table[self._exp[: self.q - 1]] = other._exp[
            (self._log[self._exp[: self.q - 1]] * stride) % (other.q - 1)
        ]
        return table

    # -- matrix multiply kernel ---------------------------------------------

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if A.shape[-1] != B.shape[0]:
            raise ShapeMismatch(f"matmul {A.shape} x {B.shape}")
        p, k = self.p, self.k
        if k == 1:
            return (A @ B) % p
        DA = np.moveaxis(self._dig[A], -1, 0)  # (k, n, m)
        DB = np.moveaxis(self._dig[B], -1, 0)
        planes = [None] * (2 * k - 1)
        for d in range(k):
            for e in range(k):
                P = DA[d] @ DB[e]
                s = d + e
                planes[s] = P if planes[s] is None else planes[s] + P
        red = self._dig[self._exp[: 2 * k - 1]]  # (2k-1, k) digits of w^s
        out_digits = np.zeros(A.shape[:-1] + B.shape[1:] + (k,), dtype=np.int64)
        for s in range(2 * k - 1):
            Ps = planes[s] % p
            for f in range(k):
                if red[s, f]:
                    out_digits[..., f] += red[s, f] * Ps
        return (out_digits % p) @ self._pow

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


_field_mem: dict[tuple[int, int], FieldSpec] = {}


def field_make(p: int, k: int = 1) -> FieldSpec:
    """The field GF(p^k) with its Conway polynomial; cached per (p, k)."""
    key = (p, k)
    if key not in _field_mem:
        _field_mem[key] = FieldSpec(p, k)
    return _field_mem[key]


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class FqMatrix:
    """An immutable dense matrix of packed GF(q) values."""

    __slots__ = ("field", "arr")

    def __init__(self, field: FieldSpec, arr):
        a = np.array(arr, dtype=np.int64)
        if a.ndim != 2:
            raise ShapeMismatch("matrix data must be 2-dimensional")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise ShapeMismatch("entry out of range for the field")
        a.flags.writeable = False
        self.field = field
        self.arr = a

    # construction helpers
    @staticmethod
    def zeros(field, rows, cols):
        return FqMatrix(field, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(field, n):
        return FqMatrix(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self):
        return self.arr.shape[0]

    @property
    def cols(self):
        return self.arr.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and self.arr.shape == other.arr.shape
            and bool(np.array_equal(self.arr, other.arr))
        )

    def __hash__(self):
        return hash((self.field, self.arr.shape, self.arr.tobytes()))

    def key(self) -> bytes:
        return self.arr.tobytes()

    def __repr__(self):
        return f"FqMatrix({self.field}, {self.rows}x{self.cols})"

    def transpose(self):
        return FqMatrix(self.field, self.arr.T.copy())

    def is_zero(self):
        return not self.arr.any()

    def stack(self, other: "FqMatrix") -> "FqMatrix":
        if self.field != other.field or self.cols != other.cols:
            raise ShapeMismatch("stack needs equal widths over one field")
        return FqMatrix(self.field, np.vstack([self.arr, other.arr]))

    def take_rows(self, idx) -> "FqMatrix":
        return FqMatrix(self.field, self.arr[list(idx), :])

    def take_cols(self, idx) -> "FqMatrix":
        return FqMatrix(self.field, self.arr[:, list(idx)])


def mat_add(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if a.field != b.field:
        raise FieldMismatch("add over different fields")
    if a.arr.shape != b.arr.shape:
        raise ShapeMismatch(f"add {a.arr.shape} + {b.arr.shape}")
    return FqMatrix(a.field, a.field.add(a.arr, b.arr))


def mat_mul(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if a.field != b.field:
        raise FieldMismatch("mul over different fields")
    if a.cols != b.rows:
        raise ShapeMismatch(f"mul {a.arr.shape} x {b.arr.shape}")
    return FqMatrix(a.field, a.field.matmul(a.arr, b.arr))


def mat_kron(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if a.field != b.field:
        raise FieldMismatch("kron over different fields")
    F = a.field
    if F.k == 1:
        return FqMatrix(F, np.kron(a.arr, b.arr) % F.p)
    la, lb = F._log[a.arr], F._log[b.arr]
    res = F._exp[np.add.outer(la, lb).transpose(0, 2, 1, 3)]
    mask = np.multiply.outer(a.arr != 0, b.arr != 0).transpose(0, 2, 1, 3)
    res = np.where(mask, res, np.int64(0))
    return FqMatrix(F, res.reshape(a.rows * b.rows, a.cols * b.cols))


def mat_arith(a: FqMatrix, b: FqMatrix, kind: str) -> FqMatrix:
    if kind == "add":
        return mat_add(a, b)
    if kind == "mul":
        return mat_mul(a, b)
    if kind == "kron":
        return mat_kron(a, b)
    raise ValueError(f"unknown kind {kind!r}")


def mat_scale(a: FqMatrix, c: int) -> FqMatrix:
    return FqMatrix(a.field, a.field.mul(a.arr, np.int64(c)))


@dataclass(frozen=True)
class EchelonForm:
    rank: int
    pivots: tuple[int, ...]
    matrix: FqMatrix


def echelonize(m: FqMatrix) -> EchelonForm:
    """Reduced row echelon form with the first-nonzero-column/topmost-row pivot rule."""
    F = m.field
    A = m.arr.copy()
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = F.inv(A[r, c])
        A[r] = F.mul(A[r], inv)
        col = A[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            factors = F.neg(col[mask])
            A[mask] = F.add(A[mask], F.mul(factors[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return EchelonForm(r, tuple(pivots), FqMatrix(F, A))


def rank(m: FqMatrix) -> int:
    return echelonize(m).rank


def row_space(m: FqMatrix) -> FqMatrix:
    """Canonical (RREF, zero rows dropped) basis of the row space."""
    ech = echelonize(m)
    return FqMatrix(m.field, ech.matrix.arr[: ech.rank].copy())


def nullspace(m: FqMatrix) -> FqMatrix:
    """Canonical row basis of {v : m . v^T = 0}."""
    F = m.field
    ech = echelonize(m)
    R = ech.matrix.arr
    piv = list(ech.pivots)
    free = [c for c in range(m.cols) if c not in ech.pivots]
    out = np.zeros((len(free), m.cols), dtype=np.int64)
    for row, j in enumerate(free):
        out[row, j] = 1
        vals = F.neg(R[: ech.rank, j])
        out[row, piv] = vals
    basis = FqMatrix(F, out)
    return row_space(basis) if len(free) else FqMatrix.zeros(F, 0, m.cols)


def solve_right(a: FqMatrix, b: FqMatrix):
    """X with a.X = b, or None.  a must have full column rank for uniqueness."""
    F = a.field
    aug = FqMatrix(F, np.hstack([a.arr, b.arr]))
    ech = echelonize(aug)
    R = ech.matrix.arr
    n = a.cols
    for c in ech.pivots:
        if c >= n:
            return None
    X = np.zeros((n, b.cols), dtype=np.int64)
    for i, c in enumerate(ech.pivots):
        X[c] = R[i, n:]
    return FqMatrix(F, X)


def inverse(m: FqMatrix) -> FqMatrix:
    if m.rows != m.cols:
        raise NotSquare("inverse of a non-square matrix")
    X = solve_right(m, FqMatrix.identity(m.field, m.rows))
    if X is None:
        raise ShapeMismatch("matrix is singular")
    return X


# ---------------------------------------------------------------------------
# Incremental echelon workspace (spin-up, Krylov, reductions)
# ---------------------------------------------------------------------------


class WorkBasis:
    """A growing RREF basis supporting reduce/insert on row vectors."""

    def __init__(self, field: FieldSpec, width: int):
        self.field = field
        self.width = width
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        F = self.field
        v = v.copy()
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = F.add(v, F.mul(F.neg(c), row))
        return v

    def insert(self, v: np.ndarray) -> bool:
        """Reduce v and insert the remainder; True when the basis grew."""
        F = self.field
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = F.mul(F.inv(v[pc]), v)
        for i in range(len(self.rows)):
            c = self.rows[i][pc]
            if c:
                self.rows[i] = F.add(self.rows[i], F.mul(F.neg(c), v))
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < pc:
            pos += 1
        self.rows.insert(pos, v)
        self.pivots.insert(pos, pc)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def matrix(self) -> FqMatrix:
        if not self.rows:
            return FqMatrix.zeros(self.field, 0, self.width)
        return FqMatrix(self.field, np.array(self.rows, dtype=np.int64))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class FqPolynomial:
    """Dense polynomial over GF(q), coefficients ascending, canonical form."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        c = np.array(coeffs, dtype=np.int64)
        n = c.size
        while n > 0 and c[n - 1] == 0:
            n -= 1
        c = c[:n].copy()
        c.flags.writeable = False
        self.field = field
        self.coeffs = c

    @staticmethod
    def zero(field):
        return FqPolynomial(field, [])

    @staticmethod
    def one(field):
        return FqPolynomial(field, [1])

    @staticmethod
    def x(field):
        return FqPolynomial(field, [0, 1])

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1  # -1 for the zero polynomial

    def is_zero(self):
        return self.coeffs.size == 0

    def __eq__(self, other):
        return (
            isinstance(other, FqPolynomial)
            and self.field == other.field
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.field, self.coeffs.tobytes()))

    def __repr__(self):
        return f"FqPolynomial({self.field}, {list(self.coeffs)})"

    def key(self):
        return (self.degree, tuple(int(c) for c in self.coeffs))

    def add(self, other):
        F = self.field
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=np.int64)
        b = np.zeros(n, dtype=np.int64)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return FqPolynomial(F, F.add(a, b))

    def neg(self):
        return FqPolynomial(self.field, self.field.neg(self.coeffs))

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        F = self.field
        if self.is_zero() or other.is_zero():
            return FqPolynomial.zero(F)
        n = self.coeffs.size + other.coeffs.size - 1
        out = np.zeros(n, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if c:
                prod = F.mul(np.int64(c), other.coeffs)
                out[i : i + other.coeffs.size] = F.add(
                    out[i : i + other.coeffs.size], prod
                )
        return FqPolynomial(F, out)

    def scale(self, c):
        return FqPolynomial(self.field, self.field.mul(self.coeffs, np.int64(c)))

    def monic(self):
        if self.is_zero():
            return self
        lead = int(self.coeffs[-1])
        if lead == 1:
            return self
        return self.scale(int(self.field.inv(lead)))

    def divmod(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = self.coeffs.copy()
        d = other.coeffs
        dn = d.size
        if r.size < dn:
            return FqPolynomial.zero(F), FqPolynomial(F, r)
        qcoeffs = np.zeros(r.size - dn + 1, dtype=np.int64)
        lead_inv = F.inv(d[-1])
        for i in range(r.size - dn, -1, -1):
            c = r[i + dn - 1]
            if c:
                fac = int(F.mul(np.int64(c), lead_inv))
                qcoeffs[i] = fac
                r[i : i + dn] = F.add(r[i : i + dn], F.neg(F.mul(np.int64(fac), d)))
        return FqPolynomial(F, qcoeffs), FqPolynomial(F, r)

    def mod(self, other):
        return self.divmod(other)[1]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.mod(b)
        return a.monic()

    def lcm(self, other):
        if self.is_zero() or other.is_zero():
            return FqPolynomial.zero(self.field)
        g = self.gcd(other)
        return self.mul(other).divmod(g)[0].monic()

    def derivative(self):
        F = self.field
        if self.coeffs.size <= 1:
            return FqPolynomial.zero(F)
        idx = np.arange(1, self.coeffs.size, dtype=np.int64) % F.p
        # scalar multiples i * c_i: repeated addition realized via field mul by
        # the packed image of the integer i (an element of the prime field)
        out = F.mul(idx, self.coeffs[1:])
        return FqPolynomial(F, out)

    def eval_matrix(self, m: FqMatrix) -> FqMatrix:
        """Horner evaluation at a square matrix argument."""
        F = self.field
        n = m.rows
        if self.is_zero():
            return FqMatrix.zeros(F, n, n)
        acc = FqMatrix(F, F.mul(np.eye(n, dtype=np.int64), np.int64(int(self.coeffs[-1]))))
        for c in self.coeffs[-2::-1]:
            acc = mat_mul(acc, m)
            if c:
                diag = F.mul(np.eye(n, dtype=np.int64), np.int64(int(c)))
                acc = FqMatrix(F, F.add(acc.arr, diag))
        return acc

    def eval_scalar(self, x: int) -> int:
        F = self.field
        acc = np.int64(0)
        for c in self.coeffs[::-1]:
            acc = F.add(F.mul(acc, np.int64(x)), np.int64(int(c)))
        return int(acc)

    def frobenius_root(self):
        """For f with zero derivative, the g with g(x)^p = f(x): every p-th
        coefficient of f with the inverse Frobenius applied."""
        F = self.field
        p = F.p
        assert (self.coeffs.size - 1) % p == 0 or self.is_zero()
        picked = self.coeffs[::p]
        # coefficient a -> a^(p^(k-1)) is the inverse of Frobenius on GF(p^k)
        e = p ** (F.k - 1)
        out = np.array([F.pow_el(int(a), e) for a in picked], dtype=np.int64)
        return FqPolynomial(F, out)

    def format(self) -> str:
        return " ".join(str(int(c)) for c in self.coeffs)


# -- minimal / characteristic polynomials -----------------------------------


def min_poly(m: FqMatrix) -> FqPolynomial:
    """Minimal polynomial via Krylov iteration over the seeds e_0, e_1, ..."""
    if m.rows != m.cols:
        raise NotSquare("min_poly of a non-square matrix")
    F = m.field
    n = m.rows
    if n == 0:
        return FqPolynomial.one(F)
    result = FqPolynomial.one(F)
    seen = WorkBasis(F, n)
    for s in range(n):
        seed = np.zeros(n, dtype=np.int64)
        seed[s] = 1
        if seen.contains(seed):
            continue
        # local Krylov chain with augmented bookkeeping
        local = WorkBasis(F, n + n + 1)
        v = seed
        t = 0
        coeffs = None
        while True:
            aug = np.zeros(n + n + 1, dtype=np.int64)
            aug[:n] = v
            aug[n + t] = 1
            red = local.reduce(aug)
            if not red[:n].any():
                # dependency: red has bookkeeping of the reduction
                lead = red[n : n + t + 1]
                # normalize so the coefficient of x^t is 1
                c = F.inv(lead[t])
                lead = F.mul(np.int64(int(c)), lead)
                coeffs = lead
                break
            local.insert(aug)
            seen.insert(v)
            v = F.matmul(v[None, :], m.arr)[0]
            t += 1
        result = result.lcm(FqPolynomial(F, coeffs))
        if result.degree == n:
            break
    return result.monic()


def char_poly(m: FqMatrix) -> FqPolynomial:
    """Characteristic polynomial as the product of relative Krylov factors.

    Each standard seed outside the span of the previous Krylov chains
    contributes the minimal polynomial of its induced action on the quotient;
    the product over seeds is the characteristic polynomial.
    """
    if m.rows != m.cols:
        raise NotSquare("char_poly of a non-square matrix")
    F = m.field
    n = m.rows
    if n == 0:
        return FqPolynomial.one(F)
    result = FqPolynomial.one(F)
    glob = WorkBasis(F, n)
    covered = 0
    for s in range(n):
        if covered == n:
            break
        seed = np.zeros(n, dtype=np.int64)
        seed[s] = 1
        if glob.contains(seed):
            continue
        local = WorkBasis(F, 2 * n + 1)
        v = seed
        t = 0
        while True:
            vq = glob.reduce(v)
            aug = np.zeros(2 * n + 1, dtype=np.int64)
            aug[:n] = vq
            aug[n + t] = 1
            red = local.reduce(aug)
            if not red[:n].any():
                lead = red[n : n + t + 1].copy()
                c = F.inv(lead[t])
                lead = F.mul(np.int64(int(c)), lead)
                result = result.mul(FqPolynomial(F, lead))
                break
            local.insert(aug)
            covered += 1
            v = F.matmul(v[None, :], m.arr)[0]
            t += 1
        for row in local.rows:
            glob.insert(row[:n].copy())
    return result.monic()


# ---------------------------------------------------------------------------
# Factorization over GF(q) (deterministic: seeded equal-degree splitting)
# ---------------------------------------------------------------------------


def _pow_mod(base: FqPolynomial, e: int, mod: FqPolynomial) -> FqPolynomial:
    F = base.field
    result = FqPolynomial.one(F)
    b = base.mod(mod)
    while e:
        if e & 1:
            result = result.mul(b).mod(mod)
        b = b.mul(b).mod(mod)
        e >>= 1
    return result


def squarefree_parts(f: FqPolynomial) -> list[tuple[FqPolynomial, int]]:
    """(g, m) pairs with f = prod g^m, each g squarefree; standard char-p recursion."""
    F = f.field
    out: list[tuple[FqPolynomial, int]] = []
    f = f.monic()

    def rec(g: FqPolynomial, mult: int):
        if g.degree < 1:
            return
        d = g.derivative()
        if d.is_zero():
            rec(g.frobenius_root(), mult * F.p)
            return
        s = g.gcd(d)
        w = g.divmod(s)[0]
        i = 1
        while w.degree >= 1:
            y = w.gcd(s)
            part = w.divmod(y)[0]
            if part.degree >= 1:
                out.append((part.monic(), mult * i))
            w = y
            s = s.divmod(y)[0]
            i += 1
        if s.degree >= 1:
            rec(s, mult)

    rec(f, 1)
    return out


def _distinct_degree(f: FqPolynomial) -> list[tuple[FqPolynomial, int]]:
    F = f.field
    out = []
    x = FqPolynomial.x(F)
    h = x
    g = f
    d = 0
    while g.degree >= 1 and d < g.degree:
        d += 1
        h = _pow_mod(h, F.q, g)
        gd = h.sub(x).gcd(g)
        if gd.degree >= 1:
            out.append((gd, d))
            g = g.divmod(gd)[0]
            h = h.mod(g)
    if g.degree >= 1:
        out.append((g, g.degree))
    return out


def _equal_degree(f: FqPolynomial, d: int, rng) -> list[FqPolynomial]:
    F = f.field
    n = f.degree
    if n == d:
        return [f.monic()]
    while True:
        a = FqPolynomial(F, [rng.randrange(F.q) for _ in range(n)])
        if a.degree < 1:
            continue
        g = a.gcd(f)
        if 1 <= g.degree < n:
            split = g
        else:
            if F.p == 2:
                t = a
                acc = a
                for _ in range(d * F.k - 1):
                    t = t.mul(t).mod(f)
                    acc = acc.add(t)
                split = acc.gcd(f)
            else:
                e = (F.q**d - 1) // 2
                b = _pow_mod(a, e, f)
                split = b.sub(FqPolynomial.one(F)).gcd(f)
            if split.degree < 1 or split.degree == n:
                continue
        left = split.monic()
        right = f.divmod(left)[0].monic()
        return _equal_degree(left, d, rng) + _equal_degree(right, d, rng)


def irreducible_factors(f: FqPolynomial, seed: int = 1) -> list[tuple[FqPolynomial, int]]:
    """Monic irreducible factors with multiplicities, canonically sorted."""
    import random

    rng = random.Random(seed ^ 0x5EED)
    collected: dict[tuple, tuple[FqPolynomial, int]] = {}
    for g, mult in squarefree_parts(f):
        for part, d in _distinct_degree(g):
            for irr in _equal_degree(part, d, rng):
                k = irr.key()
                if k in collected:
                    collected[k] = (irr, collected[k][1] + mult)
                else:
                    collected[k] = (irr, mult)
    return [collected[k] for k in sorted(collected)]


def poly_roots(f: FqPolynomial, seed: int = 1) -> list[tuple[int, int]]:
    """Roots in the coefficient field with multiplicities, ascending."""
    out = []
    for g, m in irreducible_factors(f, seed):
        if g.degree == 1:
            root = int(g.field.neg(np.int64(int(g.coeffs[0]))))
            out.append((root, m))
    return sorted(out)
