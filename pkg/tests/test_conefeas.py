import numpy as np
import pytest
from numpy.testing import assert_allclose

from lyapstein import conefeas, groupinv, operators
from lyapstein.conefeas import ConeStatus, SubspaceSpec
from lyapstein.symspace import svec

from conftest import random_symmetric


def oracle_psd_nontrivial(mats, sweep_step=1e-3, band=0.0):
    """Brute-force PSD-triviality oracle for subspaces of dimension 1 or 2.

    Dimension 1: sign analysis of the spanning matrix's eigenvalues.
    Dimension 2: sweep the smallest eigenvalue of the unit circle of the
    span; nontrivial iff the sweep maximum clears ``band``.
    Returns (nontrivial, margin).
    """
    if len(mats) == 1:
        w = np.linalg.eigvalsh(mats[0])
        margin = max(-w[-1], w[0])  # >= 0 when one-signed
        nontrivial = w[0] >= band or w[-1] <= -band
        return nontrivial, abs(margin)
    thetas = np.arange(0.0, 2 * np.pi, sweep_step)
    stack = (np.cos(thetas)[:, None, None] * mats[0]
             + np.sin(thetas)[:, None, None] * mats[1])
    mins = np.linalg.eigvalsh(stack)[:, 0]
    peak = float(mins.max())
    return peak >= band, abs(peak)


class TestSubspaceSpec:
    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            SubspaceSpec("vec", 2, np.array([[1.0], [1.0]]))

    def test_rejects_unknown_ambient(self):
        with pytest.raises(ValueError):
            SubspaceSpec("cone", 2, np.zeros((2, 0)))

    def test_constructors_orthonormalize(self, rng):
        vs = [rng.standard_normal(4) for _ in range(2)]
        spec = conefeas.subspace_from_vectors(vs + [vs[0] + vs[1]], 4)
        assert spec.dim == 2  # dependent vector dropped


class TestOrthantIntersection:
    def test_trivial_with_certificate(self):
        spec = conefeas.subspace_from_vectors([np.array([1.0, -1.0])], 2)
        dec = conefeas.orthant_intersection(spec)
        assert dec.status is ConeStatus.TRIVIAL_CERTIFIED
        assert_allclose(dec.certificate / dec.certificate[0], [1.0, 1.0], atol=1e-9)

    def test_coordinate_axis_witness(self):
        spec = conefeas.subspace_from_vectors([np.array([1.0, 0.0])], 2)
        dec = conefeas.orthant_intersection(spec)
        assert dec.status is ConeStatus.NONTRIVIAL_WITNESS
        assert_allclose(dec.witness, [1.0, 0.0], atol=1e-9)

    def test_full_space_witness(self):
        spec = conefeas.subspace_from_vectors([np.eye(2)[0], np.eye(2)[1]], 2)
        assert conefeas.orthant_intersection(spec).status is ConeStatus.NONTRIVIAL_WITNESS

    def test_zero_subspace_trivial(self):
        spec = conefeas.subspace_from_vectors([], 3)
        dec = conefeas.orthant_intersection(spec)
        assert dec.status is ConeStatus.TRIVIAL_CERTIFIED
        assert np.all(dec.certificate >= 1.0 - 1e-9)

    def test_witness_invariants(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, n + 1))
            spec = conefeas.subspace_from_vectors(
                [rng.standard_normal(n) for _ in range(k)], n)
            dec = conefeas.orthant_intersection(spec)
            if dec.status is ConeStatus.NONTRIVIAL_WITNESS:
                y = dec.witness
                assert np.min(y) >= -1e-7
                assert_allclose(np.sum(y), 1.0, atol=1e-9)
                # inside the subspace
                proj = spec.basis @ (spec.basis.T @ y)
                assert np.linalg.norm(proj - y) <= 1e-7
            else:
                z = dec.certificate
                assert np.min(z) >= 1e-7
                assert np.linalg.norm(spec.basis.T @ z) <= 1e-7

    def test_matches_support_enumeration(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            k = int(rng.integers(1, n))
            spec = conefeas.subspace_from_vectors(
                [rng.standard_normal(n) for _ in range(k)], n)
            comp = conefeas._complement_basis(spec.basis, conefeas.DEFAULT_TOL)
            rays = groupinv.orthant_slice_extreme_rays(comp.T, n)
            dec = conefeas.orthant_intersection(spec)
            assert (dec.status is ConeStatus.NONTRIVIAL_WITNESS) == bool(rays)

    def test_scale_invariance(self, rng):
        vs = [rng.standard_normal(4) for _ in range(2)]
        spec1 = conefeas.subspace_from_vectors(vs, 4)
        spec2 = conefeas.subspace_from_vectors([7.3 * v for v in vs[::-1]], 4)
        s1 = conefeas.orthant_intersection(spec1).status
        s2 = conefeas.orthant_intersection(spec2).status
        assert s1 == s2


class TestPsdIntersection:
    def test_identity_span_witness(self):
        spec = conefeas.subspace_from_matrices([np.eye(2)], 2)
        dec = conefeas.psd_intersection(spec)
        assert dec.status is ConeStatus.NONTRIVIAL_WITNESS
        assert_allclose(dec.witness, np.eye(2) / 2, atol=1e-7)

    def test_trace_zero_span_certified(self):
        spec = conefeas.subspace_from_matrices(
            [np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]])], 2)
        dec = conefeas.psd_intersection(spec)
        assert dec.status is ConeStatus.TRIVIAL_CERTIFIED
        assert_allclose(dec.certificate, np.eye(2))

    def test_stein_square_range_certified(self):
        # range of the square of the Stein operator of the rotation
        # generator meets the cone only at zero
        op = operators.stein(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        m2 = op.mat @ op.mat
        from lyapstein.numkernel import range_basis
        spec = conefeas.subspace_from_coordinates(range_basis(m2), 2)
        dec = conefeas.psd_intersection(spec)
        assert dec.status is ConeStatus.TRIVIAL_CERTIFIED

    def test_witness_certificate_exclusive(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 4))
            dim = int(rng.integers(1, 3))
            spec = conefeas.subspace_from_matrices(
                [random_symmetric(rng, n) for _ in range(dim)], n)
            dec = conefeas.psd_intersection(spec)
            assert (dec.witness is None) or (dec.certificate is None)
            if dec.status is ConeStatus.NONTRIVIAL_WITNESS:
                assert dec.witness is not None and dec.certificate is None
            if dec.status is ConeStatus.TRIVIAL_CERTIFIED:
                assert dec.certificate is not None and dec.witness is None

    def test_matches_oracle_small(self, rng):
        undecided = 0
        for trial in range(60):
            n = 2 if trial % 2 == 0 else 3
            dim = 1 + trial % 2
            mats = [random_symmetric(rng, n) for _ in range(dim)]
            nontrivial, margin = oracle_psd_nontrivial(mats)
            if margin < 1e-5:
                continue  # borderline instance, oracle itself unreliable
            spec = conefeas.subspace_from_matrices(mats, n)
            dec = conefeas.psd_intersection(spec)
            if dec.status is ConeStatus.UNDECIDED:
                undecided += 1
                continue
            assert (dec.status is ConeStatus.NONTRIVIAL_WITNESS) == nontrivial
        assert undecided <= 3

    def test_scale_invariance(self, rng):
        mats = [random_symmetric(rng, 3) for _ in range(2)]
        spec1 = conefeas.subspace_from_matrices(mats, 3)
        spec2 = conefeas.subspace_from_matrices([5.0 * m for m in mats[::-1]], 3)
        assert conefeas.psd_intersection(spec1).status \
            == conefeas.psd_intersection(spec2).status

    def test_witness_invariants(self, rng):
        spec = conefeas.subspace_from_matrices(
            [np.eye(3), random_symmetric(rng, 3, 0.1)], 3)
        dec = conefeas.psd_intersection(spec)
        assert dec.status is ConeStatus.NONTRIVIAL_WITNESS
        w = dec.witness
        assert_allclose(np.trace(w), 1.0, atol=1e-9)
        assert np.linalg.eigvalsh(w)[0] >= -1e-7
        coords = svec(w)
        proj = spec.basis @ (spec.basis.T @ coords)
        assert np.linalg.norm(proj - coords) <= 1e-7
