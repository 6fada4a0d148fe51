"""Decomposition-matrix engine: Gram equation, Fitting, refinement, atoms,
semidihedral analysis, verification."""

import dataclasses
from fractions import Fraction

import pytest

from modchar import dxm
from modchar.errors import (
    AllEliminated,
    Infeasible,
    NoConsistentSigns,
    NonIntegral,
    NonIntegralAtoms,
    SingularA,
)
from modchar.fixtures import load


# ---------------------------------------------------------------------------
# dtd_solve
# ---------------------------------------------------------------------------


def test_dtd_identity():
    sols = dxm.dtd_solve(dxm.CartanInstance(((1, 0), (0, 1)), 2))
    assert sols == [((1, 0), (0, 1))]


def test_dtd_two_unit_rows():
    sols = dxm.dtd_solve(dxm.CartanInstance(((2,),), 2))
    assert sols == [((1,), (1,))]


def test_dtd_endomorphism_cartan_unique():
    fx = load("hn_mod3_e_cartan")
    sols = dxm.dtd_solve(dxm.CartanInstance(fx.matrix, fx.meta_int("k")))
    assert len(sols) == 1
    expected = load("hn_mod3_e_dec").matrix
    assert sols[0] == tuple(sorted(expected, reverse=True))


def test_dtd_infeasible():
    with pytest.raises(Infeasible):
        dxm.dtd_solve(dxm.CartanInstance(((3,),), 1))  # 3 is not a square


def _state_with_basic(fixture_name):
    fx = load(fixture_name)
    cols = []
    for j, lbl in enumerate(fx.col_labels):
        if fx.indecomposable and j < len(fx.indecomposable) and fx.indecomposable[j]:
            flag = True
        else:
            flag = False
        cols.append(dxm.ProjectiveColumn(lbl, dxm._vec([r[j] for r in fx.matrix]), flag))
    bold = fx.basic_row_indices()
    return fx, dxm.DecompState(
        block_label=fx.name,
        row_labels=fx.row_labels,
        row_degrees=fx.row_degrees,
        brauer_basic=bold,
        proj_basic=tuple(cols),
    )


# ---------------------------------------------------------------------------
# fitting_match
# ---------------------------------------------------------------------------


def fitting_problem():
    fxa = load("hn_mod3_b1_proj_a")
    e = load("hn_mod3_e_dec")
    reg_mult = tuple(r[7] for r in fxa.matrix)  # the R column
    pins = ((0, 0), (6, 7))  # 3_1 <-> row 8, 3_2 <-> row 49
    return dxm.FittingProblem(e.matrix, e.row_degrees, reg_mult, pins)


def test_fitting_match_unique_survivor():
    fxa = load("hn_mod3_b1_proj_a")
    cols = [
        dxm.ProjectiveColumn(lbl, dxm._vec([r[j] for r in fxa.matrix]))
        for j, lbl in enumerate(fxa.col_labels[:7])
    ]
    state = dxm.DecompState(
        "b1", fxa.row_labels, fxa.row_degrees, fxa.basic_row_indices(), tuple(cols)
    )
    survivors = dxm.fitting_match(state, fitting_problem())
    assert len(survivors) == 1
    assignment, pim_cols = survivors[0]
    # the published matching
    expected_pairs = {0: "8", 1: "10", 2: "32", 3: "33", 4: "37", 5: "43", 6: "49", 7: "50"}
    assert {k: fxa.row_labels[v] for k, v in assignment.items()} == expected_pairs
    # implied projective indecomposables match the second basic set's columns
    fxb = load("hn_mod3_b1_proj_b")
    pim_positions = [j for j, f in enumerate(fxb.indecomposable) if f]
    for col, j in zip(pim_cols, pim_positions):
        assert tuple(int(x) for x in col) == tuple(r[j] for r in fxb.matrix)


def test_fitting_identity_matching():
    state = dxm.DecompState(
        "toy", ("a", "b"), (2, 3), (0, 1),
        (
            dxm.ProjectiveColumn("p1", dxm._vec((1, 0))),
            dxm.ProjectiveColumn("p2", dxm._vec((0, 1))),
        ),
    )
    prob = dxm.FittingProblem(((1, 0), (0, 1)), (5, 7), (5, 7))
    survivors = dxm.fitting_match(state, prob)
    assert len(survivors) == 1
    assert survivors[0][0] == {0: 0, 1: 1}


def test_fitting_rejects_half_integral():
    # basis column (2, 0): matching the unit E-column to it needs coefficient 1/2
    from modchar.errors import NoAdmissibleMatching

    state = dxm.DecompState(
        "toy", ("a", "b"), (2, 3), (0, 1),
        (
            dxm.ProjectiveColumn("p1", dxm._vec((2, 0))),
            dxm.ProjectiveColumn("p2", dxm._vec((0, 1))),
        ),
    )
    prob = dxm.FittingProblem(((1, 0), (0, 1)), (5, 7), (5, 7))
    with pytest.raises(NoAdmissibleMatching):
        dxm.fitting_match(state, prob)


# ---------------------------------------------------------------------------
# refinement / enumeration / elimination
# ---------------------------------------------------------------------------


def test_refine_by_relation_pipeline():
    fxb, state = _state_with_basic("hn_mod3_b1_proj_b")
    psi_prime = dxm._vec([r[7] for r in fxb.matrix])  # the X column
    state2 = dxm.refine_by_relation(
        dataclasses.replace(state, proj_basic=state.proj_basic[:7]), "X", psi_prime
    )
    fxc = load("hn_mod3_b1_proj_c")
    got = [tuple(int(x) for x in c.coeffs) for c in state2.proj_basic]
    want = [tuple(r[j] for r in fxc.matrix) for j in range(7)]
    assert got == want


def test_refine_noop_cases():
    _fx, state = _state_with_basic("hn_mod3_b1_proj_c")
    member = state.proj_basic[0].coeffs
    out = dxm.refine_by_relation(state, "member", member)
    assert out.proj_basic == state.proj_basic
    nonneg = dxm._vadd(state.proj_basic[0].coeffs, state.proj_basic[1].coeffs)
    out = dxm.refine_by_relation(state, "sum", nonneg)
    assert out.proj_basic == state.proj_basic


def test_refine_non_integral():
    _fx, state = _state_with_basic("hn_mod3_b1_proj_c")
    half = dxm._vscale(Fraction(1, 2), state.proj_basic[0].coeffs)
    with pytest.raises(NonIntegral):
        dxm.refine_by_relation(state, "half", half)


def test_enumerate_candidates_counts():
    _fx, state = _state_with_basic("hn_mod3_b1_proj_c")
    state = dxm.enumerate_candidates(state)
    assert len(state.candidates) == 44
    state = dxm.import_known_brauer(
        state, {0: 8910, 1: 16929, 2: 270864, 3: 1159191, 4: 1305072}
    )
    assert len(state.candidates) == 10
    state = dxm.eliminate_by_atom(state, 3362391, 6)
    assert len(state.candidates) == 1
    final = load("hn_mod3_b1")
    assert state.candidates[0] == final.matrix
    degs = dxm.candidate_brauer_degrees(state, state.candidates[0])
    assert [int(d) for d in degs] == list(final.col_degrees)


def test_enumerate_all_resolved():
    fx = load("hn_mod3_b1")
    cols = tuple(
        dxm.ProjectiveColumn(lbl, dxm._vec([r[j] for r in fx.matrix]), True)
        for j, lbl in enumerate(fx.col_labels)
    )
    state = dxm.DecompState(
        "final", fx.row_labels, fx.row_degrees, fx.basic_row_indices(), cols
    )
    state = dxm.enumerate_candidates(state)
    assert len(state.candidates) == 1


def test_eliminate_edge_cases():
    _fx, state = _state_with_basic("hn_mod3_b1_proj_c")
    state = dxm.enumerate_candidates(state)
    assert dxm.eliminate_by_atom(state, 0, 6).candidates == state.candidates
    with pytest.raises(AllEliminated):
        dxm.eliminate_by_atom(state, 10**9, 6)


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------


def test_atoms_identity():
    prob = dxm.AtomProblem(((1, 0), (0, 1)), (dxm._vec((1, 0)), dxm._vec((0, 1))))
    assert dxm.atoms(prob) == [(1, 0), (0, 1)]


def test_atoms_two_by_two():
    prob = dxm.AtomProblem(((1, 1), (0, 1)), (dxm._vec((1, 0)), dxm._vec((0, 1))))
    ats = dxm.atoms(prob)
    assert ats[0] == (1, 0)
    assert ats[1] == (-1, 1)


def test_atoms_fixture_degree():
    fx = load("hn_mod3_b1_atom")
    degs = [int(t) for t in fx.sections["basicdegrees"][0]]
    bvecs = []
    for payload in fx.sections["bvec"]:
        toks = list(payload)
        sep = toks.index(":")
        bvecs.append(dxm._vec([int(t) for t in toks[sep + 1 :]]))
    prob = dxm.AtomProblem(fx.matrix, tuple(bvecs))
    ats = dxm.atoms(prob)
    deg = sum(int(c) * d for c, d in zip(ats[2], degs))
    assert deg == 3362391


def test_atoms_errors():
    with pytest.raises(SingularA):
        dxm.atoms(dxm.AtomProblem(((1, 1), (1, 1)), (dxm._vec((1,)), dxm._vec((1,)))))
    with pytest.raises(NonIntegralAtoms):
        dxm.atoms(dxm.AtomProblem(((2,),), (dxm._vec((1,)),)))


# ---------------------------------------------------------------------------
# SD16
# ---------------------------------------------------------------------------


def sd16_instance():
    fx = load("hn_mod2_b1")
    p = fx.meta_int("p")
    nu_g = 0
    n = fx.meta_int("grouporder")
    while n % p == 0:
        n //= p
        nu_g += 1
    base = nu_g - fx.meta_int("defect")

    def height(d):
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        return v - base

    return dxm.SD16Instance(
        tuple((lbl, deg, height(deg)) for lbl, deg in zip(fx.row_labels, fx.row_degrees))
    )


def test_sd16_reproduces_published_matrix():
    res = dxm.sd16_analyze(sd16_instance())
    assert res.deltas == (1, -1, -1, 1)
    assert res.labeling == ("37", "17", "49", "45")
    assert res.basic_labels == ("17", "34", "44")
    fx = load("hn_mod2_b1")
    assert res.matrix == fx.matrix


def test_sd16_degree_relation():
    # first relation at the degree level
    assert 1575936 - 214016 == 1361920


def test_sd16_no_consistent_signs():
    bad = dxm.SD16Instance(
        (
            ("a", 2, 0), ("b", 4, 0), ("c", 8, 0), ("d", 16, 0),
            ("e", 5, 1), ("f", 5, 1), ("g", 5, 1), ("h", 9, 2),
        )
    )
    with pytest.raises(NoConsistentSigns):
        dxm.sd16_analyze(bad)


def test_sd16_height_pattern_enforced():
    with pytest.raises(NoConsistentSigns):
        dxm.SD16Instance(tuple(("x", 2, 0) for _ in range(8)))


# ---------------------------------------------------------------------------
# verify_matrix
# ---------------------------------------------------------------------------


def test_verify_matrix():
    D = ((1, 0), (0, 1), (1, 1))
    phis = [(Fraction(1), Fraction(1), Fraction(0)), (Fraction(2), Fraction(0), Fraction(1))]
    chis = [phis[0], phis[1], tuple(a + b for a, b in zip(phis[0], phis[1]))]
    assert dxm.verify_matrix(D, chis, phis)
    assert not dxm.verify_matrix(((1, 0), (0, -1), (1, 1)), chis, phis)
    bad_chis = list(chis)
    bad_chis[2] = phis[0]
    assert not dxm.verify_matrix(D, bad_chis, phis)


def test_verify_final_block_matrix():
    """Back-substitute the Brauer characters from the published matrix and
    check the defining identity chi' = sum d phi exactly."""
    fx = load("hn_mod3_b1")
    bold = fx.basic_row_indices()
    Db = [[fx.matrix[i][j] for j in range(fx.l)] for i in bold]
    Dbinv = dxm.invert_rational(Db)
    # chi'_bold = Db . phi, so phi_j = row j of Db^-1 over the bold basis
    phis = [tuple(Dbinv[j][i] for i in range(fx.l)) for j in range(fx.l)]
    chis = []
    for i in range(fx.k):
        acc = [Fraction(0)] * fx.l
        for j in range(fx.l):
            if fx.matrix[i][j]:
                acc = [x + fx.matrix[i][j] * y for x, y in zip(acc, phis[j])]
        chis.append(tuple(acc))
    assert dxm.verify_matrix(fx.matrix, chis, phis)
    # degrees via back substitution
    degs = [
        sum(Fraction(fx.row_degrees[bi]) * phis[j][t] for t, bi in enumerate(bold))
        for j in range(fx.l)
    ]
    assert [int(d) for d in degs] == list(fx.col_degrees)


# ---------------------------------------------------------------------------
# projectives from products (desk scale)
# ---------------------------------------------------------------------------


def test_projectives_from_products_s4_mod3():
    from modchar import ctab, grp

    g = grp.enumerate_group(
        [grp.perm_from_cycles(4, [(1, 2)]), grp.perm_from_cycles(4, [(1, 2, 3, 4)])]
    )
    table = ctab.ordinary_table(g)
    bd = ctab.blocks(table, 3)
    principal = bd.block_of(0)
    cols = dxm.projectives_from_products(table, bd, principal)
    # the products of the two defect-zero characters with everything give both
    # projective indecomposables of the principal block: 1+2 and sign+2
    got = sorted(tuple(int(x) for x in c.coeffs) for c in cols)
    assert got == [(0, 1, 1), (1, 0, 1)]
    # they really are projective: each vanishes on the 3-singular classes
    from modchar.cyclo import Cyclotomic

    cls = grp.conjugacy_classes(g, 3)
    members = bd.blocks[principal]
    for c in cols:
        for ci in range(table.nclasses):
            if cls.orders[ci] % 3 == 0:
                val = Cyclotomic.zero()
                for t, m in enumerate(members):
                    val = val + c.coeffs[t] * table.characters[m].values[ci]
                assert val.is_zero(), f"{c.name} does not vanish on a singular class"


def test_projectives_divisibility_reduction():
    from modchar import ctab, grp

    g = grp.enumerate_group(
        [grp.perm_from_cycles(4, [(1, 2)]), grp.perm_from_cycles(4, [(1, 2, 3, 4)])]
    )
    table = ctab.ordinary_table(g)
    bd = ctab.blocks(table, 3)
    principal = bd.block_of(0)
    # feed twice the sum of both projective indecomposables through the
    # induced-character entry point: the common factor 2 must be divided out
    base = dxm.projectives_from_products(table, bd, principal)
    members = bd.blocks[principal]
    target = [2 * (int(base[0].coeffs[t]) + int(base[1].coeffs[t])) for t in range(len(members))]
    vals = []
    from modchar.cyclo import Cyclotomic

    for ci in range(table.nclasses):
        acc = Cyclotomic.zero()
        for t, m in enumerate(members):
            acc = acc + target[t] * table.characters[m].values[ci]
        vals.append(acc)
    doubled = ctab.Character(tuple(vals), "projective", "2x")
    cols = dxm.projectives_from_products(table, bd, principal, extra_induced=[("2x", doubled)])
    named = {c.name: tuple(int(x) for x in c.coeffs) for c in cols}
    assert named["(2x)/2"] == tuple(x // 2 for x in target)


def test_defect_zero_character_is_its_own_projective():
    from modchar import ctab, grp

    g = grp.enumerate_group(
        [grp.perm_from_cycles(4, [(1, 2)]), grp.perm_from_cycles(4, [(1, 2, 3, 4)])]
    )
    table = ctab.ordinary_table(g)
    bd = ctab.blocks(table, 3)
    dz = next(bi for bi in range(bd.nblocks) if bd.defects[bi] == 0)
    cols = dxm.projectives_from_products(table, bd, dz)
    # the block has a single ordinary character and it appears as a projective
    assert any(tuple(int(x) for x in c.coeffs) == (1,) for c in cols)
