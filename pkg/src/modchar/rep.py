"""Modules over a matrix algebra given by generators.

A Representation acts on row vectors: v -> v.g for each generator matrix g.
Submodules are given by canonical RREF row bases.  Homomorphisms a -> b are
matrices H with a_g . H = H . b_g for every generator, applied as v -> v.H,
so the image of H is its row space.

Chopping follows MeatAxe practice: a seeded deterministic stream of algebra
words, null spaces of irreducible factors of their characteristic
polynomials, and Norton's irreducibility test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    FieldMismatch,
    GeneratorCountMismatch,
    IncompleteSimplesList,
    NotInvariant,
    ShapeMismatch,
    SingularGenerator,
    Undecided,
    ZeroModule,
)
from .gfla import (
    FieldSpec,
    FqMatrix,
    FqPolynomial,
    WorkBasis,
    echelonize,
    inverse,
    irreducible_factors,
    mat_kron,
    mat_mul,
    nullspace,
    row_space,
)

WORD_BUDGET = 200
WORD_ESCALATIONS = 3


@dataclass(frozen=True)
class Representation:
    field: FieldSpec
    dim: int
    gens: tuple[FqMatrix, ...]
    label: str = ""

    def __post_init__(self):
        for g in self.gens:
            if g.field != self.field:
                raise FieldMismatch("generator over the wrong field")
            if g.rows != self.dim or g.cols != self.dim:
                raise ShapeMismatch("generator is not dim x dim")

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def relabel(self, label: str) -> "Representation":
        return Representation(self.field, self.dim, self.gens, label)


@dataclass(frozen=True)
class AlgebraWord:
    """Sum of coefficient-weighted products of generator indices."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]  # (packed coeff, gen indices)
    seed: int = 0

    def evaluate(self, rep: Representation) -> FqMatrix:
        F = rep.field
        acc = np.zeros((rep.dim, rep.dim), dtype=np.int64)
        for coeff, idxs in self.terms:
            cur = np.eye(rep.dim, dtype=np.int64)
            for i in idxs:
                if i >= rep.ngens:
                    raise GeneratorCountMismatch("word index out of range")
                cur = F.matmul(cur, rep.gens[i].arr)
            acc = F.add(acc, F.mul(np.int64(coeff % F.q), cur))
        return FqMatrix(F, acc)

    def describe(self) -> str:
        parts = []
        for coeff, idxs in self.terms:
            prod = "*".join(f"g{i}" for i in idxs) if idxs else "1"
            parts.append(f"{coeff}.{prod}")
        return " + ".join(parts)


def word_stream(ngens: int, p: int, seed: int, max_len: int = 12):
    """Deterministic stream: generators and short products first, then seeded
    pseudo-random sums of products with prime-field coefficients."""
    for i in range(ngens):
        yield AlgebraWord(((1, (i,)),), seed)
    for i in range(ngens):
        for j in range(ngens):
            yield AlgebraWord(((1, (i, j)),), seed)
    for i in range(ngens):
        for j in range(ngens):
            if i != j:
                yield AlgebraWord(((1, (i,)), (1, (j,))), seed)
    rng = random.Random(seed)
    length = 3
    while True:
        nterms = rng.randint(1, 3)
        terms = []
        for _ in range(nterms):
            tlen = rng.randint(1, length)
            idxs = tuple(rng.randrange(ngens) for _ in range(tlen))
            coeff = rng.randrange(1, p)
            terms.append((coeff, idxs))
        yield AlgebraWord(tuple(terms), seed)
        length = min(length + 1, max_len)


# ---------------------------------------------------------------------------
# spin / split
# ---------------------------------------------------------------------------


def spin(rep: Representation, seeds: FqMatrix) -> FqMatrix:
    """Canonical basis of the smallest invariant subspace containing the seeds.

    Queued vectors are the raw ones whose insertion grew the span; spinning
    them instead of the normalized basis rows closes the same subspace.
    """
    if seeds.cols != rep.dim:
        raise ShapeMismatch("seed width differs from the module dimension")
    F = rep.field
    basis = WorkBasis(F, rep.dim)
    queue = []
    for row in seeds.arr:
        if basis.insert(row.copy()):
            queue.append(row.copy())
    while queue:
        v = queue.pop(0)
        for g in rep.gens:
            w = F.matmul(v[None, :], g.arr)[0]
            if basis.insert(w):
                queue.append(w)
    return basis.matrix()


def split(rep: Representation, sub: FqMatrix):
    """(subRep, quotRep) for an invariant subspace given by RREF basis rows."""
    F = rep.field
    ech = echelonize(sub)
    U = ech.matrix.arr[: ech.rank]
    piv = list(ech.pivots)
    comp = [j for j in range(rep.dim) if j not in ech.pivots]
    sub_gens = []
    quot_gens = []
    for g in rep.gens:
        img = F.matmul(U, g.arr)
        coords = img[:, piv]
        back = F.matmul(coords, U)
        if not np.array_equal(back, img):
            raise NotInvariant("subspace is not invariant under the generators")
        sub_gens.append(FqMatrix(F, coords))
        # quotient on the canonical completion by the non-pivot unit vectors
        if comp:
            imgq = np.array([F.matmul(_unit(rep.dim, j)[None, :], g.arr)[0] for j in comp])
            corr = F.matmul(imgq[:, piv], U)
            red = F.add(imgq, F.neg(corr))
            quot_gens.append(FqMatrix(F, red[:, comp]))
        else:
            quot_gens.append(FqMatrix.zeros(F, 0, 0))
    sub_rep = Representation(F, ech.rank, tuple(sub_gens), rep.label + ".sub")
    quot_rep = Representation(F, len(comp), tuple(quot_gens), rep.label + ".quot")
    return sub_rep, quot_rep


def _unit(n, j):
    v = np.zeros(n, dtype=np.int64)
    v[j] = 1
    return v


# ---------------------------------------------------------------------------
# irreducibility (Norton's test) and chop
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IrreducibilityCertificate:
    word: AlgebraWord
    factor: FqPolynomial
    nullity: int


def _transpose_rep(rep: Representation) -> Representation:
    return Representation(
        rep.field, rep.dim, tuple(g.transpose() for g in rep.gens), rep.label + ".T"
    )


def is_irreducible(rep: Representation, seed: int = 1):
    """Norton's criterion over a seeded word stream.

    Returns (True, certificate) or (False, invariant basis).  Raises
    Undecided when the word budget is exhausted without a verdict.
    """
    if rep.dim == 0:
        raise ZeroModule("the zero module has no irreducibility verdict")
    F = rep.field
    if rep.dim == 1:
        return True, IrreducibilityCertificate(AlgebraWord(()), FqPolynomial.x(F), 1)
    rep_t = _transpose_rep(rep)
    stream = word_stream(rep.ngens, F.p, seed)
    budget = WORD_BUDGET * WORD_ESCALATIONS
    from .gfla import char_poly as _char_poly

    for _ in range(budget):
        word = next(stream)
        w = word.evaluate(rep)
        if w.is_zero():
            continue
        cp = _char_poly(w)
        for f, _mult in irreducible_factors(cp, seed):
            fw = f.eval_matrix(w)
            # kernel of the row action v -> v.f(w) is the left null space
            ker = nullspace(fw.transpose())
            nu = ker.rows
            if nu == 0:
                continue
            v = FqMatrix(F, ker.arr[:1])
            sub = spin(rep, v)
            if 0 < sub.rows < rep.dim:
                return False, sub
            if nu == f.degree:
                kert = nullspace(fw)
                vt = FqMatrix(F, kert.arr[:1])
                subt = spin(rep_t, vt)
                if subt.rows == rep.dim:
                    return True, IrreducibilityCertificate(word, f, nu)
                # annihilator of a proper transposed-invariant subspace is a
                # proper submodule of the original
                ann = nullspace(subt)
                return False, ann
            else:
                for i in range(1, nu):
                    v = FqMatrix(F, ker.arr[i : i + 1])
                    sub = spin(rep, v)
                    if 0 < sub.rows < rep.dim:
                        return False, sub
                # no verdict from this factor; try the next one
    raise Undecided(f"no verdict for {rep.label or 'module'} within the word budget")


def chop(rep: Representation, seed: int = 1) -> list[tuple[Representation, int]]:
    """Composition factors with multiplicities, canonically ordered by
    (dimension, discovery); factor labels are dim plus a letter."""
    factors: list[Representation] = []
    mults: list[int] = []

    def add(simple: Representation):
        for i, s in enumerate(factors):
            if s.dim == simple.dim and iso(s, simple, seed) is not None:
                mults[i] += 1
                return
        factors.append(simple)
        mults.append(1)

    def rec(r: Representation):
        if r.dim == 0:
            return
        verdict, witness = is_irreducible(r, seed)
        if verdict:
            add(r)
            return
        sub_rep, quot_rep = split(r, witness)
        rec(sub_rep)
        rec(quot_rep)

    rec(rep)
    order = sorted(range(len(factors)), key=lambda i: (factors[i].dim, i))
    out = []
    letters: dict[int, int] = {}
    for i in order:
        d = factors[i].dim
        c = letters.get(d, 0)
        letters[d] = c + 1
        out.append((factors[i].relabel(f"{d}{chr(ord('a') + c)}"), mults[i]))
    return out


# ---------------------------------------------------------------------------
# isomorphism (standard basis), dual, tensor, hom
# ---------------------------------------------------------------------------


def _standard_basis(rep: Representation, v: np.ndarray):
    """Spin v recording a deterministic schedule; returns (basis rows in
    discovery order, schedule) where schedule entries are (source, gen)."""
    F = rep.field
    rows = [v.copy()]
    schedule = []
    basis = WorkBasis(F, rep.dim)
    basis.insert(v.copy())
    i = 0
    while i < len(rows) and len(rows) < rep.dim:
        for gi, g in enumerate(rep.gens):
            w = F.matmul(rows[i][None, :], g.arr)[0]
            if basis.insert(w):
                rows.append(w)
                schedule.append((i, gi))
                if len(rows) == rep.dim:
                    break
        i += 1
    return rows, schedule


def iso(a: Representation, b: Representation, seed: int = 1):
    """An intertwiner H (a_g . H = H . b_g, invertible) or None.

    Both modules are expected simple (the standard-basis method); for
    non-simple inputs the answer may be Undecided.
    """
    if a.ngens != b.ngens:
        raise GeneratorCountMismatch("different generator counts")
    if a.field != b.field or a.dim != b.dim:
        return None
    if a.dim == 0:
        return FqMatrix.zeros(a.field, 0, 0)
    F = a.field
    from .gfla import char_poly as _char_poly

    stream = word_stream(a.ngens, F.p, seed)
    for _ in range(WORD_BUDGET):
        word = next(stream)
        wa = word.evaluate(a)
        cpa = _char_poly(wa)
        wb = word.evaluate(b)
        cpb = _char_poly(wb)
        if cpa != cpb:
            return None
        usable = None
        for f, _m in irreducible_factors(cpa, seed):
            fa = f.eval_matrix(wa)
            kera = nullspace(fa.transpose())
            if kera.rows == f.degree:
                usable = (f, kera)
                break
        if usable is None:
            continue
        f, kera = usable
        kerb = nullspace(f.eval_matrix(wb).transpose())
        if kerb.rows != kera.rows:
            return None
        va = kera.arr[0]
        rows_a, schedule = _standard_basis(a, va)
        if len(rows_a) < a.dim:
            continue  # v does not generate; only possible for non-simple input
        A = FqMatrix(F, np.array(rows_a))
        Ainv = inverse(A)
        # the matching seed is any projective point of ker_b, not just a
        # basis vector; enumerate them all (deg f is small)
        for vb in _projective_points(F, kerb.arr):
            rows_b = [vb.copy()]
            for src, gi in schedule:
                rows_b.append(F.matmul(rows_b[src][None, :], b.gens[gi].arr)[0])
            B = FqMatrix(F, np.array(rows_b))
            ech = echelonize(B)
            if ech.rank < b.dim:
                continue
            H = mat_mul(Ainv, B)
            if _intertwines(a, b, H):
                return H
        return None
    raise Undecided("no standard-basis word found")


def _projective_points(F, basis_rows):
    """All nonzero combinations of the rows, normalized so the first nonzero
    coefficient is 1, in deterministic lexicographic order."""
    import itertools

    d = len(basis_rows)
    for lead in range(d):
        tails = itertools.product(range(F.q), repeat=d - lead - 1)
        for tail in tails:
            coeffs = [0] * lead + [1] + list(tail)
            v = np.zeros(basis_rows.shape[1], dtype=np.int64)
            for c, row in zip(coeffs, basis_rows):
                if c:
                    v = F.add(v, F.mul(np.int64(c), row))
            yield v


def _intertwines(a, b, H):
    for ga, gb in zip(a.gens, b.gens):
        if mat_mul(ga, H) != mat_mul(H, gb):
            return False
    return True


def dual(rep: Representation) -> Representation:
    """Contragredient: g -> transpose of inverse of g."""
    gens = []
    for g in rep.gens:
        try:
            gi = inverse(g)
        except ShapeMismatch:
            raise SingularGenerator("generator has no inverse") from None
        gens.append(gi.transpose())
    return Representation(rep.field, rep.dim, tuple(gens), rep.label + "*")


def tensor(a: Representation, b: Representation) -> Representation:
    if a.field != b.field:
        raise FieldMismatch("tensor factors over different fields")
    if a.ngens != b.ngens:
        raise GeneratorCountMismatch("tensor factors with different generator counts")
    gens = tuple(mat_kron(ga, gb) for ga, gb in zip(a.gens, b.gens))
    label = f"{a.label or 'a'}(x){b.label or 'b'}"
    return Representation(a.field, a.dim * b.dim, gens, label)


def hom(a: Representation, b: Representation) -> list[FqMatrix]:
    """Basis of {H : a_g . H = H . b_g for all g}."""
    if a.field != b.field:
        raise FieldMismatch("hom over different fields")
    if a.ngens != b.ngens:
        raise GeneratorCountMismatch("hom with different generator counts")
    F = a.field
    na, nb = a.dim, b.dim
    if na == 0 or nb == 0:
        return []
    blocks = []
    eye_a = FqMatrix.identity(F, na)
    eye_b = FqMatrix.identity(F, nb)
    for ga, gb in zip(a.gens, b.gens):
        # row-major vec(H): vec(ga.H) = (ga (x) I) vec, vec(H.gb) = (I (x) gb^T) vec
        left = mat_kron(ga, eye_b)
        right = mat_kron(eye_a, gb.transpose())
        blocks.append(F.add(left.arr, F.neg(right.arr)))
    stacked = FqMatrix(F, np.vstack(blocks))
    ns = nullspace(stacked)
    return [FqMatrix(F, ns.arr[i].reshape(na, nb).copy()) for i in range(ns.rows)]


# ---------------------------------------------------------------------------
# socle series
# ---------------------------------------------------------------------------


def socle(rep: Representation, simples) -> tuple[FqMatrix, list[tuple[int, int]]]:
    """(basis of the socle, [(simple index, multiplicity)]).

    The multiplicity of S is dim Hom(S, V) / dim End(S); the endomorphism
    division matters for simples that are not absolutely irreducible.
    """
    F = rep.field
    basis = WorkBasis(F, rep.dim)
    counts = []
    for si, s in enumerate(simples):
        maps = hom(s, rep)
        if maps:
            end_dim = len(hom(s, s))
            assert len(maps) % end_dim == 0
            counts.append((si, len(maps) // end_dim))
        for H in maps:
            for row in H.arr:
                basis.insert(row.copy())
    return basis.matrix(), counts


def socle_series(rep: Representation, simples, seed: int = 1):
    """Ascending socle layers as multisets [(simple index, multiplicity)].

    The simples list must cover every composition factor; this is checked via
    chop so an incomplete list fails loudly.
    """
    for s, _m in chop(rep, seed):
        if all(iso(s, t, seed) is None for t in simples if t.dim == s.dim):
            raise IncompleteSimplesList(f"factor {s.label} missing from the simples list")
    layers = []
    current = rep
    total = 0
    while current.dim > 0:
        soc, counts = socle(current, simples)
        if soc.rows == 0:
            raise IncompleteSimplesList("no socle found; simples list incomplete")
        layers.append(counts)
        total += soc.rows
        _sub, current = split(current, soc)
    return layers


# ---------------------------------------------------------------------------
# composition series with adapted basis, generation check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompositionSeries:
    rep: Representation
    chain: tuple[FqMatrix, ...]  # strictly ascending invariant bases, last = full
    factors: tuple[Representation, ...]
    adapted_basis: FqMatrix
    adapted_inverse: FqMatrix = field(repr=False)
    block_sizes: tuple[int, ...] = ()

    def diagonal_blocks(self, m: FqMatrix) -> list[FqMatrix]:
        conj = mat_mul(mat_mul(self.adapted_basis, m), self.adapted_inverse)
        out = []
        at = 0
        for s in self.block_sizes:
            out.append(FqMatrix(self.rep.field, conj.arr[at : at + s, at : at + s].copy()))
            at += s
        return out

    def is_block_lower(self, m: FqMatrix) -> bool:
        conj = mat_mul(mat_mul(self.adapted_basis, m), self.adapted_inverse)
        at = 0
        for s in self.block_sizes:
            if conj.arr[at : at + s, at + s :].any():
                return False
            at += s
        return True


def composition_series(rep: Representation, seed: int = 1) -> CompositionSeries:
    """A composition series with a basis realizing block-lower-triangular form."""
    F = rep.field

    def find_chain(r: Representation) -> list[FqMatrix]:
        if r.dim == 0:
            return []
        verdict, witness = is_irreducible(r, seed)
        if verdict:
            return [FqMatrix.identity(F, r.dim)]
        sub_rep, _q = split(r, witness)
        U = row_space(witness)
        inner = find_chain(sub_rep)  # bases in sub coordinates
        chain = [FqMatrix(F, F.matmul(c.arr, U.arr)) for c in inner[:-1]]
        chain.append(U)
        # lift the quotient's chain through the canonical completion
        piv = list(echelonize(U).pivots)
        comp = [j for j in range(r.dim) if j not in piv]
        _s, quot_rep = split(r, U)
        outer = find_chain(quot_rep)
        for c in outer:
            lifted = np.zeros((c.rows, r.dim), dtype=np.int64)
            lifted[:, comp] = c.arr
            chain.append(row_space(FqMatrix(F, np.vstack([U.arr, lifted]))))
        return chain

    chain = find_chain(rep)
    rows = []
    prev = FqMatrix.zeros(F, 0, rep.dim)
    sizes = []
    for link in chain:
        wb = WorkBasis(F, rep.dim)
        for r in prev.arr:
            wb.insert(r.copy())
        new_rows = []
        for r in link.arr:
            if wb.insert(r.copy()):
                # keep the raw link row: it lies inside this chain term, which
                # is what makes the adapted matrix block-triangular
                new_rows.append(r.copy())
        sizes.append(len(new_rows))
        rows.extend(new_rows)
        prev = link
    A = FqMatrix(F, np.array(rows, dtype=np.int64))
    Ainv = inverse(A)
    series = CompositionSeries(rep, tuple(chain), (), A, Ainv, tuple(sizes))
    blocks = [series.diagonal_blocks(g) for g in rep.gens]
    factors = []
    for bi in range(len(sizes)):
        factors.append(
            Representation(F, sizes[bi], tuple(blocks[g][bi] for g in range(rep.ngens)))
        )
    return CompositionSeries(rep, tuple(chain), tuple(factors), A, Ainv, tuple(sizes))


def check_generation(series: CompositionSeries, extra, seed: int = 1):
    """(preserved, diag_isos_consistent) for extra algebra elements.

    preserved: every extra matrix stays block-lower-triangular in the adapted
    basis.  diag_isos_consistent: every intertwiner between isomorphic factors
    of the series still intertwines the extra matrices' diagonal blocks.
    """
    for m in extra:
        if m.rows != series.rep.dim or m.cols != series.rep.dim:
            raise ShapeMismatch("extra matrix of the wrong size")
    preserved = all(series.is_block_lower(m) for m in extra)
    pairs = []
    n = len(series.factors)
    for i in range(n):
        for j in range(i + 1, n):
            if series.factors[i].dim != series.factors[j].dim:
                continue
            T = iso(series.factors[i], series.factors[j], seed)
            if T is not None:
                pairs.append((i, j, T))
    consistent = True
    if preserved:
        for m in extra:
            blocks = series.diagonal_blocks(m)
            for i, j, T in pairs:
                if mat_mul(blocks[i], T) != mat_mul(T, blocks[j]):
                    consistent = False
                    break
            if not consistent:
                break
    else:
        consistent = False
    return preserved, consistent
