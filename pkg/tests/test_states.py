"""Two-path state algebra against explicit state-vector oracles."""

import numpy as np
import pytest

from qduality import (MarginalVector, concurrence, degree_of_coherence,
                      inner_product, make_two_path_state, predictability,
                      reduced_path_density, two_path_state_from_marginals,
                      visibility)

from helpers import joint_path_marginal_vector, partial_trace_path, random_marginal

ATOL = 1e-12


def test_inner_product_self_overlap():
    v = MarginalVector.normalized([0.3 + 0.1j, -0.2, 0.9j])
    assert inner_product(v, v) == pytest.approx(1.0 + 0.0j, abs=ATOL)


def test_inner_product_orthonormal_basis():
    e1 = MarginalVector.basis(2, 0)
    e2 = MarginalVector.basis(2, 1)
    assert inner_product(e1, e2) == 0


def test_inner_product_component_readoff():
    e1 = MarginalVector.basis(2, 0)
    b = MarginalVector(np.array([0.8, 0.6]))
    assert inner_product(e1, b) == pytest.approx(0.8 + 0.0j, abs=ATOL)


def test_inner_product_conjugate_symmetry():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = MarginalVector(random_marginal(rng, 4))
        b = MarginalVector(random_marginal(rng, 4))
        assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=ATOL)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        inner_product(MarginalVector.basis(2, 0), MarginalVector.basis(3, 0))


def test_marginal_vector_must_be_normalized():
    with pytest.raises(ValueError, match="norm"):
        MarginalVector(np.array([1.0, 1.0]))


def test_degree_of_coherence_limits():
    v = MarginalVector.normalized([1.0, 2.0j, -0.5])
    assert degree_of_coherence(v, v) == pytest.approx(1.0, abs=ATOL)
    e1 = MarginalVector.basis(2, 0)
    e2 = MarginalVector.basis(2, 1)
    assert degree_of_coherence(e1, e2) == 0.0


def test_degree_of_coherence_modulus_readoff():
    a = MarginalVector.basis(2, 0)
    b = MarginalVector(np.array([0.6, 0.8j]))
    assert degree_of_coherence(a, b) == pytest.approx(0.6, abs=ATOL)


def test_degree_of_coherence_range_random():
    rng = np.random.default_rng(7)
    for dim in (1, 2, 3, 8):
        for _ in range(20):
            a = MarginalVector(random_marginal(rng, dim))
            b = MarginalVector(random_marginal(rng, dim))
            assert 0.0 <= degree_of_coherence(a, b) <= 1.0


# -----------------------------
# Construction
# -----------------------------

def test_make_two_path_state_balanced():
    s = make_two_path_state(0.5, 1.0, 0.0, 0.0)
    assert s.c1 == pytest.approx(1 / np.sqrt(2), abs=ATOL)
    assert s.c2 == pytest.approx(1 / np.sqrt(2), abs=ATOL)
    assert s.gamma == pytest.approx(1.0, abs=ATOL)


def test_make_two_path_state_degenerate():
    s = make_two_path_state(1.0, 1.0)
    assert s.c2 == 0.0
    assert abs(s.c1) == pytest.approx(1.0, abs=ATOL)


def test_make_two_path_state_direct():
    s = make_two_path_state(0.8, 0.6)
    assert abs(s.c1) ** 2 == pytest.approx(0.8, abs=ATOL)
    assert abs(s.c2) ** 2 == pytest.approx(0.2, abs=ATOL)
    assert s.gamma == pytest.approx(0.6, abs=ATOL)


@pytest.mark.parametrize("p1,gamma", [(-0.1, 0.5), (1.1, 0.5), (0.5, -0.01), (0.5, 1.01)])
def test_make_two_path_state_rejects_out_of_range(p1, gamma):
    with pytest.raises(ValueError):
        make_two_path_state(p1, gamma)


# -----------------------------
# Reduced density matrix
# -----------------------------

def test_reduced_density_balanced_coherent():
    rho = reduced_path_density(make_two_path_state(0.5, 1.0))
    assert abs(rho.rho12) == pytest.approx(0.5, abs=ATOL)


def test_reduced_density_balanced_incoherent():
    rho = reduced_path_density(make_two_path_state(0.5, 0.0))
    assert rho.rho11 == pytest.approx(0.5, abs=ATOL)
    assert rho.rho22 == pytest.approx(0.5, abs=ATOL)
    assert abs(rho.rho12) == 0.0


def test_reduced_density_against_partial_trace_oracle():
    # overlap 0.6 realized by explicit 2-dim marginals, then traced out
    m1 = np.array([1.0, 0.0])
    m2 = np.array([0.6, 0.8])
    phi = 0.37
    s = two_path_state_from_marginals(0.8, MarginalVector(m1), MarginalVector(m2), phi)
    rho = reduced_path_density(s)
    assert abs(rho.rho12) == pytest.approx(np.sqrt(0.16) * 0.6, abs=ATOL)

    psi = joint_path_marginal_vector(s.c1, s.c2, m1, m2, phi)
    expected = partial_trace_path(psi, 2)
    np.testing.assert_allclose(rho.as_array(), expected, atol=ATOL)


def test_reduced_density_invariants_random():
    rng = np.random.default_rng(23)
    for dim in (1, 2, 3, 8):
        for _ in range(25):
            m1 = random_marginal(rng, dim)
            m2 = random_marginal(rng, dim)
            phi = rng.uniform(0, 2 * np.pi)
            s = two_path_state_from_marginals(rng.uniform(0, 1),
                                              MarginalVector(m1), MarginalVector(m2), phi)
            rho = reduced_path_density(s)
            assert rho.trace() == pytest.approx(1.0, abs=ATOL)
            assert rho.rho21 == np.conj(rho.rho12)
            eig = rho.eigenvalues()
            assert np.all(eig >= -ATOL)
            assert np.all(eig <= 1.0 + ATOL)
            psi = joint_path_marginal_vector(s.c1, s.c2, m1, m2, phi)
            np.testing.assert_allclose(rho.as_array(), partial_trace_path(psi, dim),
                                       atol=ATOL)


# -----------------------------
# Concurrence
# -----------------------------

def test_concurrence_extremes():
    assert concurrence(make_two_path_state(0.5, 0.0)) == pytest.approx(1.0, abs=ATOL)
    assert concurrence(make_two_path_state(0.3, 1.0)) == pytest.approx(0.0, abs=ATOL)


def test_concurrence_direct_value():
    # 2 * |c1 c2| * sqrt(1 - gamma^2) = 2 * 0.4 * 0.8
    s = make_two_path_state(0.8, 0.6)
    assert concurrence(s) == pytest.approx(0.64, abs=ATOL)
    rho = reduced_path_density(s)
    assert concurrence(s) == pytest.approx(2.0 * np.sqrt(rho.determinant()), abs=ATOL)


def test_concurrence_matches_determinant_oracle_random():
    # In one dimension every marginal pair is fully coherent, so C = 0
    # identically; there the sqrt sits on its branch point and amplifies
    # ~1e-17 determinant rounding to ~1e-8, for any implementation.  The
    # d = 1 draws therefore assert the identity in its squared (well-posed)
    # form plus a magnitude bound, while d >= 2 uses the literal comparison.
    rng = np.random.default_rng(5)
    for dim in (1, 2, 3, 8):
        for _ in range(50):
            m1 = MarginalVector(random_marginal(rng, dim))
            m2 = MarginalVector(random_marginal(rng, dim))
            s = two_path_state_from_marginals(rng.uniform(0, 1), m1, m2,
                                              rng.uniform(0, 2 * np.pi))
            det = max(0.0, reduced_path_density(s).determinant())
            c = concurrence(s)
            assert c * c == pytest.approx(4.0 * det, abs=ATOL)
            if dim == 1:
                assert c < 1e-7 and 2.0 * np.sqrt(det) < 1e-7
            else:
                assert c == pytest.approx(2.0 * np.sqrt(det), abs=ATOL)


def test_complete_complementarity_identity():
    # V^2 + D^2 + C^2 = 1 for every non-lossy state
    rng = np.random.default_rng(41)
    for _ in range(500):
        s = make_two_path_state(rng.uniform(0, 1), rng.uniform(0, 1),
                                rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi))
        total = visibility(s) ** 2 + predictability(s) ** 2 + concurrence(s) ** 2
        assert total == pytest.approx(1.0, abs=ATOL)
