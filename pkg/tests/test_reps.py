import cmath

import numpy as np
import pytest

from qso_reps import (CLASSICAL, NONCLASSICAL, GeneratorMatrix, HalfInt,
                      IrrepLabel, QContext, build_all_generators,
                      build_generator, check_relations, coeff_classical,
                      coeff_nonclassical, composite_generator,
                      enumerate_patterns, q_bracket, q_bracket_plus, q_power)

H = HalfInt
CTX = QContext(1.3)


def lab(n, twice_weight, kind=CLASSICAL, eps=None):
    return IrrepLabel(n, kind, tuple(H(t) for t in twice_weight), eps)


def explicit_so3_raise(l, m, ctx):
    """d_m ([l-m][l+m+1])^(1/2) with d_m in product form."""
    dm = ((q_power(m, ctx) + q_power(-m, ctx))
          * (q_power(m + 1, ctx) + q_power(-m - 1, ctx))) ** -0.5
    return dm * cmath.sqrt(q_bracket(l - m, ctx) * q_bracket(l + m + 1, ctx))


def test_so3_raising_coefficient_matches_explicit_form():
    l = H(4)
    basis = enumerate_patterns(lab(3, (4,)))
    for xi in basis.patterns:
        m = xi.m12
        got = coeff_classical(xi, 1, 2, "A", CTX)
        assert got == pytest.approx(explicit_so3_raise(l, m, CTX), abs=1e-12)


def test_so3_boundary_raise_vanishes():
    basis = enumerate_patterns(lab(3, (2,)))
    top = basis.patterns[0]
    assert top.m12 == 1
    assert coeff_classical(top, 1, 2, "A", CTX) == 0


def test_so3_diagonal_eigenvalues():
    gen = build_generator(lab(3, (2,)), 1, CTX)
    expected = [1j * q_bracket(m, CTX) for m in (1, 0, -1)]
    assert np.allclose(np.diag(gen.mat), expected)
    assert np.allclose(gen.mat, np.diag(np.diag(gen.mat)))


def test_nonclassical_so3_matches_explicit_forms():
    label = lab(3, (5,), NONCLASSICAL, (1, -1))
    basis = enumerate_patterns(label)
    gen21 = build_generator(label, 1, CTX)
    for i, xi in enumerate(basis.patterns):
        assert gen21.mat[i, i] == pytest.approx(
            label.eps[0] * q_bracket_plus(xi.m12, CTX))
    gen32 = build_generator(label, 2, CTX)
    # weight-1/2 line carries the sign-bearing diagonal term
    idx = next(i for i, p in enumerate(basis.patterns) if p.m12 == H(1))
    expected = label.eps[1] * q_bracket_plus(H(1), CTX) * q_bracket(H(5) + H(1), CTX)
    assert gen32.mat[idx, idx] == pytest.approx(expected)
    # raising coefficient: d~_m ([l-m][l+m+1])^(1/2)
    xi = basis.patterns[idx]
    dm = ((q_power(H(1), CTX) - q_power(H(-1), CTX))
          * (q_power(H(3), CTX) - q_power(H(-3), CTX))) ** -0.5
    want = dm * cmath.sqrt(q_bracket(H(5) - H(1), CTX) * q_bracket(H(5) + H(3), CTX))
    assert coeff_nonclassical(xi, 1, 2, "A", CTX) == pytest.approx(want)


def test_nonclassical_matrices_are_real():
    label = lab(4, (3, 1), NONCLASSICAL, (1, -1, 1))
    for gen in build_all_generators(label, CTX):
        assert np.abs(gen.mat.imag).max() == 0.0


@pytest.mark.parametrize("label,q", [
    (lab(4, (2, 0)), 1.3),
    (lab(5, (4, 2)), 0.7),
    (lab(6, (2, 2, 0)), 1.3),
    (lab(3, (1,)), 0.7),
    (lab(4, (1, 1), NONCLASSICAL, (1, 1, 1)), 1.3),
    (lab(5, (3, 1), NONCLASSICAL, (1, -1, 1, -1)), 0.7),
])
def test_defining_relations(label, q):
    ctx = QContext(q)
    report = check_relations(build_all_generators(label, ctx), ctx)
    assert report.all_passed, report.failures()
    assert report.max_residual <= 1e-12 * (
        1.0 + max(e.scale for e in report.entries))


def test_far_commutators_exactly_zero_for_vector_label():
    mats = build_all_generators(lab(4, (2, 0)), CTX)
    far = [e for e in check_relations(mats, CTX).entries
           if e.relation.startswith("far")]
    assert far and all(e.residual == 0.0 for e in far)


def test_relation_check_negative_control():
    mats = build_all_generators(lab(4, (2, 0)), CTX)
    corrupted = mats[0].mat.copy()
    corrupted[0, 0] += 0.01
    bad = [GeneratorMatrix(mats[0].label, mats[0].gen, corrupted)] + mats[1:]
    assert not check_relations(bad, CTX).all_passed


def test_relation_check_rejects_mixed_dims():
    a = build_generator(lab(3, (2,)), 1, CTX)
    b = build_generator(lab(3, (4,)), 1, CTX)
    with pytest.raises(Exception):
        check_relations([a, b], CTX)


def test_composite_base_case():
    label = lab(4, (2, 0))
    base = build_all_generators(label, CTX)
    comp = composite_generator(label, 3, 2, "+", CTX, base)
    assert np.array_equal(comp.mat, base[1].mat)


def test_composite_recursion_vs_explicit_products():
    label = lab(3, (2,))
    base = build_all_generators(label, CTX)
    i21, i32 = base[0].mat, base[1].mat
    sq = CTX.q ** 0.5
    explicit_minus = (i21 @ i32) / sq - sq * (i32 @ i21)
    got = composite_generator(label, 3, 1, "-", CTX, base)
    assert np.allclose(got.mat, explicit_minus, atol=1e-14)
    explicit_plus = sq * (i21 @ i32) - (i32 @ i21) / sq
    assert np.allclose(composite_generator(label, 3, 1, "+", CTX, base).mat,
                       explicit_plus, atol=1e-14)


def test_composite_classical_limit_is_commutator():
    ctx = QContext(1.0 + 1e-6)
    label = lab(3, (2,))
    base = build_all_generators(label, ctx)
    comm = base[0].mat @ base[1].mat - base[1].mat @ base[0].mat
    comp = composite_generator(label, 3, 1, "+", ctx, base)
    assert np.abs(comp.mat - comm).max() <= 1e-4


def test_classical_spectrum_multiplicities():
    label = lab(5, (2, 2))
    basis = enumerate_patterns(label)
    gen = build_generator(label, 1, CTX)
    eigs = sorted(np.linalg.eigvals(gen.mat).imag)
    expected = sorted(q_bracket(p.m12, CTX) for p in basis.patterns)
    assert np.allclose(eigs, expected, atol=1e-9)


def test_nonclassical_spectrum():
    label = lab(4, (3, 1), NONCLASSICAL, (-1, 1, 1))
    basis = enumerate_patterns(label)
    gen = build_generator(label, 1, CTX)
    eigs = sorted(np.linalg.eigvals(gen.mat).real)
    expected = sorted(-q_bracket_plus(p.m12, CTX) for p in basis.patterns)
    assert np.allclose(eigs, expected, atol=1e-9)


def test_coefficients_invariant_under_q_inversion():
    inv = QContext(1.0 / 1.3)
    for label in (lab(5, (4, 2)), lab(4, (2, 2))):
        for k in range(1, label.n):
            a = build_generator(label, k, CTX).mat
            b = build_generator(label, k, inv).mat
            assert np.allclose(np.abs(a), np.abs(b), atol=1e-10)


def test_generator_index_validation():
    with pytest.raises(Exception):
        build_generator(lab(3, (2,)), 3, CTX)
    with pytest.raises(Exception):
        composite_generator(lab(3, (2,)), 2, 2, "+", CTX)
    with pytest.raises(Exception):
        composite_generator(lab(3, (2,)), 3, 1, "x", CTX)


def test_generator_matrix_structure():
    # even index: real antisymmetric; odd index: real antisymmetric
    # off-diagonal part plus purely imaginary diagonal
    label = lab(5, (4, 2))
    for k in range(1, 5):
        m = build_generator(label, k, CTX).mat
        off = m - np.diag(np.diag(m))
        assert np.abs(off.imag).max() == 0.0
        assert np.abs(off + off.T).max() <= 1e-12
        if k % 2 == 0:
            assert np.abs(np.diag(m)).max() == 0.0
        else:
            assert np.abs(np.diag(m).real).max() == 0.0


def test_sparse_json_export():
    gen = build_generator(lab(3, (2,)), 2, CTX)
    data = gen.to_jsonable()
    assert data["dim"] == 3
    assert data["gen"] == "I(3,2)"
    rebuilt = np.zeros((3, 3), dtype=complex)
    for r, c, re, im in data["triplets"]:
        rebuilt[r, c] = re + 1j * im
    assert np.array_equal(rebuilt, gen.mat)
    rows_cols = [(r, c) for r, c, _, _ in data["triplets"]]
    assert rows_cols == sorted(rows_cols)
