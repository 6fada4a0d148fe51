"""Ordinary and Brauer character tables, blocks, basic sets, Clifford theory.

Tables for desk-scale groups are computed from first principles: the ordinary
table is the Brauer table at an auxiliary prime r with r = 1 mod exp(G) (so
reduction mod r is faithful on characters and the lifts are the ordinary
values); the p-modular table comes from chopping the regular module over
GF(p^2) and lifting eigenvalues.  No table database is consulted.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

import numpy as np

from . import grp as _grp
from . import rep as _rep
from .cyclo import Cyclotomic, cyclotomic_polynomial, euler_phi
from .errors import (
    ActionNotInvolution,
    FusionDegreeMismatch,
    FusionIncomplete,
    IdealChoiceFailure,
    MissingPrime,
    NonIntegral,
    NotExpandable,
    NotInSpan,
)
from .gfla import FqPolynomial, field_make, irreducible_factors, is_prime


@dataclass(frozen=True)
class ClassInfo:
    label: str
    size: int
    order: int
    p_regular: bool = True


@dataclass(frozen=True)
class Character:
    values: tuple[Cyclotomic, ...]
    kind: str = "ordinary"  # ordinary | brauer | projective | virtual
    label: str = ""

    @property
    def degree(self) -> Cyclotomic:
        return self.values[0]

    def degree_int(self) -> int:
        return self.degree.as_int()

    def __mul__(self, other: "Character") -> "Character":
        return Character(
            tuple(a * b for a, b in zip(self.values, other.values)),
            kind="virtual" if "virtual" in (self.kind, other.kind) else self.kind,
            label=f"{self.label}*{other.label}",
        )


@dataclass(frozen=True)
class CharTable:
    group_order: int
    classes: tuple[ClassInfo, ...]
    characters: tuple[Character, ...]
    p: int | None = None
    power_maps: dict[int, tuple[int, ...]] = field(default_factory=dict, compare=False)

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    def class_sizes(self):
        return [c.size for c in self.classes]

    def exponent_bound(self) -> int:
        e = 1
        for c in self.classes:
            e = e * c.order // gcd(e, c.order)
        return e


# ---------------------------------------------------------------------------
# Tables from permutation groups
# ---------------------------------------------------------------------------


def _auxiliary_prime(exponent: int, order: int) -> int:
    r = exponent + 1
    while True:
        if is_prime(r) and order % r:
            return r
        r += exponent


def _lift_table(g: _grp.PermGroup, classData, regular_factors, p=None):
    from .cyclo import brauer_char_value

    chars = []
    flags = classData.p_regular(p)
    keep = [i for i in range(classData.count) if flags[i]]
    for simple, _mult in regular_factors:
        vals = []
        for i in keep:
            m = _grp.element_matrix(g, simple, classData.reps[i])
            vals.append(brauer_char_value(simple, m))
        chars.append(Character(tuple(vals), "brauer" if p else "ordinary", simple.label))
    classes = tuple(
        ClassInfo(lbl, classData.sizes[i], classData.orders[i], True)
        for i, lbl in zip(keep, [classData.labels()[i] for i in keep])
    )
    one = Cyclotomic.one()

    def sort_key(i):
        ch = chars[i]
        is_trivial = all(v == one for v in ch.values)
        return (not is_trivial, ch.degree_int(), repr([v.coeffs for v in ch.values]))

    order = sorted(range(len(chars)), key=sort_key)
    chars = [chars[i] for i in order]
    simples = [regular_factors[i][0] for i in order]
    return classes, chars, simples


def ordinary_table(g: _grp.PermGroup, seed: int = 1) -> CharTable:
    """Ordinary character table computed via an auxiliary splitting prime."""
    cls = _grp.conjugacy_classes(g)
    exponent = g.exponent()
    r = _auxiliary_prime(exponent, g.order)
    F = field_make(r, 1)
    factors = _rep.chop(_grp.regular_rep(g, F), seed)
    classes, chars, _simples = _lift_table(g, cls, factors, p=None)
    table = CharTable(g.order, classes, tuple(chars), None, dict(cls.power_maps))
    _check_orthogonality(table)
    return table


def brauer_data(g: _grp.PermGroup, p: int, seed: int = 1):
    """(CharTable, simple modules) at p, aligned index by index.

    The simples come from chopping the regular module over GF(p^2); their
    Brauer characters are the lifted eigenvalue sums on p-regular classes.
    """
    cls = _grp.conjugacy_classes(g, p)
    F = field_make(p, 2)
    factors = _rep.chop(_grp.regular_rep(g, F), seed)
    classes, chars, simples = _lift_table(g, cls, factors, p=p)
    table = CharTable(g.order, classes, tuple(chars), p, dict(cls.power_maps))
    return table, tuple(simples)


def brauer_table(g: _grp.PermGroup, p: int, seed: int = 1) -> CharTable:
    """Irreducible Brauer characters at p from the regular module over GF(p^2)."""
    return brauer_data(g, p, seed)[0]


def _check_orthogonality(table: CharTable):
    n = len(table.characters)
    for i in range(n):
        for j in range(i, n):
            s = scalar(table, table.characters[i], table.characters[j])
            expected = Fraction(1) if i == j else Fraction(0)
            assert s == expected, f"orthogonality fails at ({i},{j}): {s}"


# ---------------------------------------------------------------------------
# Elementary operations
# ---------------------------------------------------------------------------


def restrict_p_regular(table: CharTable, chi: Character, p: int) -> tuple[CharTable, Character]:
    """Restriction chi' to the p-regular classes; returns the restricted table
    context and the restricted character."""
    if p is None:
        raise MissingPrime("a prime is required")
    keep = [i for i, c in enumerate(table.classes) if c.order % p != 0]
    classes = tuple(table.classes[i] for i in keep)
    sub = CharTable(table.group_order, classes, (), p, {})
    chi_p = Character(tuple(chi.values[i] for i in keep), "brauer", chi.label + "'")
    return sub, chi_p


def restrict_table(table: CharTable, p: int) -> CharTable:
    keep = [i for i, c in enumerate(table.classes) if c.order % p != 0]
    classes = tuple(table.classes[i] for i in keep)
    chars = tuple(
        Character(tuple(ch.values[i] for i in keep), "brauer", ch.label + "'")
        for ch in table.characters
    )
    return CharTable(table.group_order, classes, chars, p, {})


def scalar(table: CharTable, a: Character, b: Character) -> Fraction:
    """(1/|G|) sum over classes of |C| a(C) conj(b(C)); exact rational."""
    total = Cyclotomic.zero()
    for ci, cls in enumerate(table.classes):
        total = total + Fraction(cls.size) * a.values[ci] * b.values[ci].conj()
    total = Fraction(1, table.group_order) * total
    if not total.is_rational():
        raise NonIntegral(f"scalar product irrational: {total}")
    return total.as_fraction()


def product(a: Character, b: Character) -> Character:
    return a * b


def induce(
    sub_table: CharTable,
    chi: Character,
    big_table: CharTable,
    fusion: tuple[int, ...],
) -> Character:
    """Induction along a class fusion map (subgroup class -> ambient class)."""
    if len(fusion) != sub_table.nclasses:
        raise FusionIncomplete("fusion map must cover every subgroup class")
    index = big_table.group_order // sub_table.group_order
    vals = []
    for gi, gcls in enumerate(big_table.classes):
        acc = Cyclotomic.zero()
        for si, scls in enumerate(sub_table.classes):
            if fusion[si] != gi:
                continue
            acc = acc + Fraction(scls.size) * chi.values[si]
        # Ind(chi)(g) = (|G| / (|H| |g^G|)) * sum over fused classes |c| chi(c)
        acc = Fraction(big_table.group_order, sub_table.group_order * gcls.size) * acc
        vals.append(acc)
    return Character(tuple(vals), "ordinary", f"ind({chi.label})")


def expand_in_irreducibles(table: CharTable, psi: Character) -> list[Fraction]:
    return [scalar(table, psi, chi) for chi in table.characters]


# ---------------------------------------------------------------------------
# Blocks, defects, heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockData:
    table: CharTable
    p: int
    blocks: tuple[tuple[int, ...], ...]  # character indices per block
    defects: tuple[int, ...]

    @property
    def nblocks(self) -> int:
        return len(self.blocks)

    def block_of(self, char_index: int) -> int:
        for bi, members in enumerate(self.blocks):
            if char_index in members:
                return bi
        raise KeyError(char_index)


def _nu(p: int, n: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def blocks(table: CharTable, p: int) -> BlockData:
    """Block distribution via central characters reduced mod a fixed maximal
    ideal over p (lexicographically least irreducible factor of Phi_e mod p)."""
    e = table.exponent_bound()
    Fp = field_make(p, 1)
    phi_e = cyclotomic_polynomial(e)
    phi_poly = FqPolynomial(Fp, [c % p for c in phi_e])
    factors = irreducible_factors(phi_poly, seed=1)
    if not factors:
        raise IdealChoiceFailure("cyclotomic polynomial has no factors")
    h = factors[0][0]  # canonical (sorted) least factor
    m = h.degree
    E = field_make(p, m) if m > 1 else Fp
    if m > 1:
        hx = FqPolynomial(E, Fp.embed_into(E)[h.coeffs])
    else:
        hx = h
    roots = [r for r, _ in _roots_in(hx)]
    if not roots:
        raise IdealChoiceFailure("no root of the chosen factor in its field")
    theta = min(roots)
    sigs = []
    for chi in table.characters:
        deg = chi.degree.as_fraction()
        sig = []
        for ci, cls in enumerate(table.classes):
            omega = (Fraction(cls.size) / deg) * chi.values[ci]
            sig.append(_reduce_mod_ideal(omega, e, theta, E, p))
        sigs.append(tuple(sig))
    groups: dict[tuple, list[int]] = {}
    for i, s in enumerate(sigs):
        groups.setdefault(s, []).append(i)
    blocks_list = sorted(groups.values(), key=lambda idxs: idxs[0])
    nu_g = _nu(p, table.group_order)
    defects = []
    for members in blocks_list:
        mindeg = min(_nu(p, table.characters[i].degree_int()) for i in members)
        defects.append(nu_g - mindeg)
    return BlockData(table, p, tuple(tuple(b) for b in blocks_list), tuple(defects))


def _roots_in(poly: FqPolynomial):
    out = []
    for g, mult in irreducible_factors(poly, seed=1):
        if g.degree == 1:
            root = int(g.field.neg(np.int64(int(g.coeffs[0]))))
            out.append((root, mult))
    return sorted(out)


def _reduce_mod_ideal(v: Cyclotomic, e: int, theta: int, E, p: int) -> int:
    """Image of an algebraic integer under zeta_e -> theta in GF(p^m)."""
    if e % v.n:
        raise IdealChoiceFailure("conductor does not divide the exponent")
    stride = e // v.n
    acc = np.int64(0)
    tpow = E.pow_el(theta, stride)
    for i, c in enumerate(v.coeffs):
        if c == 0:
            continue
        if c.denominator % p == 0:
            raise IdealChoiceFailure("denominator not invertible mod p")
        num = c.numerator % p
        den_inv = pow(c.denominator % p, p - 2, p) if c.denominator % p != 1 else 1
        scalar_int = (num * den_inv) % p
        term = E.mul(np.int64(scalar_int), np.int64(E.pow_el(tpow, i)))
        acc = E.add(acc, term)
    return int(acc)


def heights(block: BlockData, block_index: int) -> dict[int, int]:
    """Character index -> height inside the given block."""
    nu_g = _nu(block.p, block.table.group_order)
    d = block.defects[block_index]
    out = {}
    for i in block.blocks[block_index]:
        out[i] = _nu(block.p, block.table.characters[i].degree_int()) - (nu_g - d)
    return out


def block_project(
    table: CharTable, psi: Character, block: BlockData, block_index: int
) -> Character:
    """Keep only the ordinary-irreducible summands lying in the block."""
    coeffs = expand_in_irreducibles(table, psi)
    for c in coeffs:
        if c.denominator != 1:
            raise NotExpandable("character does not expand integrally")
    members = set(block.blocks[block_index])
    vals = [Cyclotomic.zero() for _ in table.classes]
    for i, c in enumerate(coeffs):
        if i in members and c:
            for ci in range(table.nclasses):
                vals[ci] = vals[ci] + c * table.characters[i].values[ci]
    return Character(tuple(vals), "projective" if psi.kind == "projective" else psi.kind,
                     psi.label + "|B")


# ---------------------------------------------------------------------------
# Basic sets / exact decomposition
# ---------------------------------------------------------------------------


def _values_to_rational_rows(chars: list[Character]) -> list[list[Fraction]]:
    """Flatten cyclotomic values into rational coordinate rows over a common
    conductor, one column group per class."""
    n_common = 1
    for ch in chars:
        for v in ch.values:
            n_common = n_common * v.n // gcd(n_common, v.n)
    width = euler_phi(n_common)
    rows = []
    for ch in chars:
        row: list[Fraction] = []
        for v in ch.values:
            from .cyclo import _reduce_mod_phi

            lifted = v._lift_to(n_common) if v.n != n_common else list(v.coeffs)
            coords = list(_reduce_mod_phi(n_common, lifted))
            row.extend(coords[:width] + [Fraction(0)] * (width - len(coords)))
        rows.append(row)
    return rows


def decompose_basic(basic: list[Character], theta: Character):
    """Exact integer coefficients of theta over the basic set; NonIntegral or
    NotInSpan on failure."""
    from .cyclo import _solve_fraction_rect

    rows = _values_to_rational_rows(list(basic) + [theta])
    mat = [[rows[j][i] for j in range(len(basic))] for i in range(len(rows[0]))]
    rhs = [rows[-1][i] for i in range(len(rows[0]))]
    sol = _solve_fraction_rect(mat, rhs)
    if sol is None:
        raise NotInSpan(f"{theta.label} is not in the span of the basic set")
    for c in sol:
        if c.denominator != 1:
            raise NonIntegral(f"non-integral coefficient {c}")
    return [c.numerator for c in sol]


# ---------------------------------------------------------------------------
# Index-2 Clifford theory on decomposition data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockDecomposition:
    """Decomposition-matrix data of one block: rows are ordinary characters,
    columns irreducible Brauer characters."""

    label: str
    p: int
    row_labels: tuple[str, ...]
    row_degrees: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
    col_degrees: tuple[int, ...] = ()
    basic_rows: tuple[int, ...] = ()

    @property
    def k(self):
        return len(self.row_labels)

    @property
    def l(self):
        return len(self.matrix[0]) if self.matrix else 0

    def row(self, i):
        return self.matrix[i]


@dataclass(frozen=True)
class CliffordResult:
    blocks: tuple[BlockDecomposition, ...]
    ambiguities: tuple[str, ...] = ()


def clifford_index2(
    g_block: BlockDecomposition,
    brauer_pairs: tuple[tuple[int, int], ...],
    ordinary_pairs: tuple[tuple[int, int], ...],
    row_plan: tuple[tuple[str, object], ...] | None = None,
    morita_split: bool = False,
) -> CliffordResult:
    """Decomposition data of the index-2 extension from that of the group.

    brauer_pairs: column index pairs swapped by the outer automorphism (the
    rest are invariant).  ordinary_pairs: row index pairs interchanged (the
    rest extend).  At p = 2 both extensions of an invariant character agree on
    the 2-regular classes, so invariant rows appear twice with equal entries
    and invariant columns once; a swapped pair of columns fuses into one
    induced column, a swapped pair of rows into one row equal to the sum.

    row_plan optionally prescribes the output row order as entries
    ("ext", row) twice per invariant row or ("fuse", (r1, r2)); by default all
    invariant rows come first (each doubled), then the fused pairs.

    morita_split handles the odd-p case in which the whole block is invariant
    and the extension splits into two blocks Morita equivalent to the input:
    the result then carries two copies of the input matrix.
    """
    for a, b in brauer_pairs:
        if a == b:
            raise ActionNotInvolution("column pair must have distinct members")
    for a, b in ordinary_pairs:
        if a == b:
            raise ActionNotInvolution("row pair must have distinct members")
        if g_block.row_degrees[a] != g_block.row_degrees[b]:
            raise FusionDegreeMismatch("swapped ordinary characters must share a degree")
    if morita_split:
        if brauer_pairs or ordinary_pairs:
            raise FusionDegreeMismatch("a Morita-split cover has no fused pairs")
        out = []
        for sign in "+-":
            out.append(replace(g_block, label=f"{g_block.label}{sign}"))
        return CliffordResult(tuple(out))

    # fused columns keep the position of their first member
    pair_of = {}
    for pr in brauer_pairs:
        pair_of[pr[0]] = pr
        pair_of[pr[1]] = pr
    col_order: list[tuple[str, object]] = []
    for j in range(g_block.l):
        if j in pair_of:
            pr = pair_of[j]
            if j == pr[0]:
                col_order.append(("pair", pr))
        else:
            col_order.append(("inv", j))
    swapped_rows = {a for a, b in ordinary_pairs} | {b for a, b in ordinary_pairs}
    if row_plan is None:
        row_plan = tuple(
            ("ext", i) for i in range(g_block.k) if i not in swapped_rows for _ in (0, 1)
        ) + tuple(("fuse", pr) for pr in ordinary_pairs)

    new_rows = []
    new_labels = []
    new_degrees = []
    for kind, payload in row_plan:
        if kind == "ext":
            i = payload
            row = []
            for ck, cp in col_order:
                if ck == "inv":
                    row.append(g_block.matrix[i][cp])
                else:
                    a, b = cp
                    if g_block.matrix[i][a] != g_block.matrix[i][b]:
                        raise FusionDegreeMismatch(
                            f"invariant row {i} differs on the swapped column pair {cp}"
                        )
                    row.append(g_block.matrix[i][a])
            new_rows.append(tuple(row))
            new_labels.append(g_block.row_labels[i])
            new_degrees.append(g_block.row_degrees[i])
        elif kind == "fuse":
            r1, r2 = payload
            row = []
            for ck, cp in col_order:
                if ck == "inv":
                    row.append(g_block.matrix[r1][cp] + g_block.matrix[r2][cp])
                else:
                    a, b = cp
                    row.append(g_block.matrix[r1][a] + g_block.matrix[r2][a])
            new_rows.append(tuple(row))
            new_labels.append(f"{g_block.row_labels[r1]}+{g_block.row_labels[r2]}")
            new_degrees.append(g_block.row_degrees[r1] + g_block.row_degrees[r2])
        else:
            raise ValueError(f"unknown row plan entry {kind!r}")
    col_degs = []
    if g_block.col_degrees:
        for ck, cp in col_order:
            if ck == "inv":
                col_degs.append(g_block.col_degrees[cp])
            else:
                a, b = cp
                col_degs.append(g_block.col_degrees[a] + g_block.col_degrees[b])
    result = BlockDecomposition(
        label=f"{g_block.label}.2",
        p=g_block.p,
        row_labels=tuple(new_labels),
        row_degrees=tuple(new_degrees),
        matrix=tuple(new_rows),
        col_degrees=tuple(col_degs),
    )
    return CliffordResult((result,))
