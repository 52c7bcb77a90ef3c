import math
from fractions import Fraction

import numpy as np
import pytest

from soqrs import (
    K_coeff,
    L_coeff,
    PrimedBasisUndefined,
    QParam,
    RepSpec,
    SpectralParam,
    build_degenerate,
    build_degenerate_primed,
    check_relations,
    check_star,
    primed_transform,
)
from oracles import cl_degenerate_noncompact

E = SpectralParam.exact
Q2 = QParam(2.0)


def test_K_coeff_values():
    assert K_coeff(0, 0, 3, QParam(1.0)) == pytest.approx(1 / math.sqrt(3), abs=1e-14)
    # lowering wall from m = 0: zero through the numerator, any rank, any q
    assert K_coeff(-1, 0, 3, Q2) == 0.0
    assert K_coeff(-1, 0, 4, Q2) == 0.0  # denominator [0] is never touched
    # direct numeric oracle for L_0 at s=4, q=2
    w = lambda b: (2 ** (b / 2) - 2 ** (-b / 2)) / (2 ** 0.5 - 2 ** -0.5)
    expected = math.sqrt(w(1) * w(2) / (w(4) * w(2)))
    assert L_coeff(0, 0, 4, Q2) == pytest.approx(expected, abs=1e-14)


def test_K_coeff_even_in_k():
    for m in range(0, 4):
        for k in range(-m, m + 1):
            assert K_coeff(m, k, 3, Q2) == pytest.approx(
                K_coeff(m, -k, 3, Q2), abs=1e-15)


def test_origin_column_single_entry():
    spec = RepSpec(3, 3, 0, E(Fraction(1, 2)), QParam(1.0), 2)
    rep = build_degenerate(spec)
    col = rep.noncompact.mat[:, 0]
    assert col.nnz == 1
    target = rep.space.basis[col.tocoo().row[0]]
    assert target.block == (1, 1)


def test_vanishing_coefficient_severs_block_edge():
    # [lambda + m + m'] = 0 on the (1,1) -> (2,2) transition at lambda = -2
    spec = RepSpec(3, 3, 0, E(-2), Q2, 8)
    rep = build_degenerate(spec)
    src = rep.space.block_slices[(1, 1)]
    dst = rep.space.block_slices[(2, 2)]
    sub = rep.noncompact.mat[dst, src]
    assert sub.nnz == 0
    # but the (2,2) -> (3,3) edge upward is also severed only where stated
    src2 = rep.space.block_slices[(2, 2)]
    dst2 = rep.space.block_slices[(3, 3)]
    assert rep.noncompact.mat[dst2, src2].nnz > 0


def test_lower_wall_is_exact():
    spec = RepSpec(3, 4, 1, E(Fraction(7, 10)), Q2, 6)
    rep = build_degenerate(spec)
    coo = rep.noncompact.mat.tocoo()
    for i, j in zip(coo.row, coo.col):
        src = rep.space.basis[j]
        tgt = rep.space.basis[i]
        if src.m == 0:
            assert tgt.m == 1  # no lowering ever produced
        if src.mp == 0:
            assert tgt.mp == 1


def test_sparsity_contract():
    spec = RepSpec(4, 4, 0, E(Fraction(37, 100)), Q2, 6)
    rep = build_degenerate(spec)
    for g in rep.generators:
        percol = np.diff(g.mat.tocsc().indptr)
        if g.i == 5:  # noncompact
            assert percol.max() <= 4
        else:
            assert percol.max() <= 2


@pytest.mark.parametrize("r,s,eps,q", [(3, 3, 1, 2.0), (4, 3, 0, 0.5)])
def test_relations_generic_lambda(r, s, eps, q):
    spec = RepSpec(r, s, eps, E(Fraction(7, 10)), QParam(q), 8)
    rep = build_degenerate(spec)
    report = check_relations(rep, depth=3, tol=1e-9)
    assert report.passed, report.worst_row()


def test_relations_complex_lambda():
    spec = RepSpec(4, 4, 0, E(3, 0, 1), Q2, 6)
    report = check_relations(build_degenerate(spec), depth=3, tol=1e-9)
    assert report.passed, report.max_residual


def test_relations_classical_q():
    spec = RepSpec(3, 3, 0, E(1, 0, 1), QParam(1.0), 6)
    report = check_relations(build_degenerate(spec), depth=3, tol=1e-10)
    assert report.passed, report.max_residual


def test_build_rejects_pi_over_h_at_classical_q():
    spec = RepSpec(3, 3, 0, E(1, 1), QParam(1.0), 6)
    with pytest.raises(ValueError):
        build_degenerate(spec)


def test_classical_entries_match_oracle():
    for lam_exact, lam_plain in [(E(Fraction(2, 5)), 0.4), (E(1, 0, 1), 1 + 1j)]:
        spec = RepSpec(3, 4, 0, lam_exact, QParam(1.0), 5)
        rep = build_degenerate(spec)
        patterns = [(p.left.entries, p.right.entries) for p in rep.space.basis]
        expected = cl_degenerate_noncompact(
            3, 4, 0, lam_plain, patterns, rep.space.top_ring)
        assert np.allclose(rep.noncompact.mat.toarray(), expected, atol=1e-12)


def test_near_classical_limit_degenerate():
    spec1 = RepSpec(3, 3, 0, E(Fraction(2, 5)), QParam(1.0), 6)
    spec2 = RepSpec(3, 3, 0, E(Fraction(2, 5)), QParam(1.0 + 1e-8), 6)
    for a, b in zip(build_degenerate(spec1).generators,
                    build_degenerate(spec2).generators):
        assert np.max(np.abs((a.mat - b.mat).toarray())) < 1e-6


# ---------------------------------------------------------------------------
# primed basis


def test_primed_transform_base_coefficient():
    spec = RepSpec(3, 3, 1, E(Fraction(2, 5)), Q2, 6)
    tr = primed_transform(spec)
    assert tr.coefficient(1, 0) == 1.0  # base block, empty products
    m0, i, fam = tr.block_indices(1, 0)
    assert (m0, i) == (0, 0)


def test_primed_transform_unit_modulus_on_principal_line():
    spec = RepSpec(4, 4, 0, E(3, 0, 1), Q2, 6)
    tr = primed_transform(spec)
    for block, c in tr.coefficients.items():
        assert abs(abs(c) - 1.0) < 1e-10, block


def test_primed_transform_undefined_at_resonance():
    spec = RepSpec(3, 3, 0, E(0), Q2, 4)
    with pytest.raises(PrimedBasisUndefined) as exc:
        primed_transform(spec)
    assert "lambda" in str(exc.value)


def test_primed_equals_conjugated_standard():
    spec = RepSpec(3, 3, 0, E(Fraction(2, 5)), Q2, 6)
    rep_std = build_degenerate(spec)
    rep_pr = build_degenerate_primed(spec)
    D = primed_transform(spec).diagonal(rep_std.space)
    A = rep_std.noncompact.mat.toarray()
    conj = np.diag(D) @ A @ np.diag(1.0 / D)
    assert np.max(np.abs(conj - rep_pr.noncompact.mat.toarray())) < 1e-9
    # compact generators are untouched by the block-scalar rescaling
    for gs, gp in zip(rep_std.generators, rep_pr.generators):
        if gs.i != 4:
            assert abs(gs.mat - gp.mat).max() < 1e-12


def test_primed_hermitian_on_principal_line():
    spec = RepSpec(4, 4, 0, E(3, 0, 2), Q2, 6)
    rep = build_degenerate_primed(spec)
    report = check_star(rep, tol=1e-9)
    assert report.passed, report.to_dict()


def test_primed_real_at_real_principal_lambda():
    spec = RepSpec(3, 3, 1, E(2), Q2, 6)
    rep = build_degenerate_primed(spec)
    A = rep.noncompact.mat.toarray()
    assert np.max(np.abs(A.imag)) < 1e-12


def test_primed_relations_hold():
    spec = RepSpec(3, 4, 1, E(Fraction(5, 4)), Q2, 8)
    report = check_relations(build_degenerate_primed(spec), depth=3, tol=1e-9)
    assert report.passed, report.max_residual


def test_primed_branch_signs_recorded():
    spec = RepSpec(3, 3, 0, E(Fraction(2, 5)), Q2, 6)
    rep = build_degenerate_primed(spec)
    signs = set(rep.branch_signs.values())
    assert signs <= {1, -1}
    assert -1 in signs  # lowering rows differ from the naive product branch


def test_repspec_validation():
    with pytest.raises(ValueError):
        RepSpec(2, 3, 0, E(1), Q2, 4)
    with pytest.raises(ValueError):
        RepSpec(3, 3, 2, E(1), Q2, 4)
    with pytest.raises(ValueError):
        RepSpec(3, 3, 0, E(1), Q2, -1)
