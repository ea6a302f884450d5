"""Compiled and pure-Python kernels must agree to near machine precision."""

import numpy as np
import pytest

from nonherm._kernels import KERNEL_BACKEND, reference

try:
    from nonherm._kernels import _fast
except ImportError:
    _fast = None

needs_compiled = pytest.mark.skipif(_fast is None, reason="compiled kernels not built")


def test_backend_reported():
    assert KERNEL_BACKEND in ("compiled", "python")


class TestReferenceSelfConsistency:
    def test_block_is_unitary_corner(self):
        rng = np.random.default_rng(50)
        r = rng.uniform(0, 2 * np.pi, 24)
        v = reference.ansatz_unitary(r)
        np.testing.assert_allclose(reference.ansatz_block(r), v[::2, ::2], atol=0)

    def test_shift_arrays_match_direct_evaluation(self):
        rng = np.random.default_rng(51)
        r = rng.uniform(0, 2 * np.pi, 24)
        shift = 0.5 * np.pi
        base, plus, minus = reference.ansatz_block_shifts(r, shift)
        np.testing.assert_allclose(base, reference.ansatz_block(r), atol=0)
        for k in (0, 7, 23):
            rp = r.copy()
            rp[k] += shift
            np.testing.assert_allclose(plus[k], reference.ansatz_block(rp), atol=0)
            rm = r.copy()
            rm[k] -= shift
            np.testing.assert_allclose(minus[k], reference.ansatz_block(rm), atol=0)

    def test_trotter_run_zero_probability_sentinel(self):
        amp = np.array([0.0, 1.0], dtype=complex)
        final, per = reference.trotter_run(amp, 0.0, np.pi, 3, False, 1e-14)
        assert final is None and len(per) == 0


@needs_compiled
class TestCrossBackend:
    def test_ansatz_agreement(self):
        rng = np.random.default_rng(52)
        for _ in range(25):
            r = rng.uniform(-4 * np.pi, 4 * np.pi, 24)
            assert np.max(np.abs(reference.ansatz_unitary(r) - _fast.ansatz_unitary(r))) < 1e-13
            assert np.max(np.abs(reference.ansatz_block(r) - _fast.ansatz_block(r))) < 1e-13

    def test_shift_agreement(self):
        rng = np.random.default_rng(53)
        r = rng.uniform(0, 2 * np.pi, 24)
        ref = reference.ansatz_block_shifts(r, 0.5 * np.pi)
        fast = _fast.ansatz_block_shifts(r, 0.5 * np.pi)
        for a, b in zip(ref, fast):
            assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < 1e-13

    def test_trotter_agreement(self):
        rng = np.random.default_rng(54)
        for _ in range(10):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            for gaussian in (False, True):
                ref_amp, ref_per = reference.trotter_run(v, 0.013, 0.29, 400, gaussian, 1e-14)
                fast_amp, fast_per = _fast.trotter_run(v, 0.013, 0.29, 400, gaussian, 1e-14)
                assert np.max(np.abs(ref_amp - fast_amp)) < 1e-12
                assert np.max(np.abs(ref_per - fast_per)) < 1e-12

    def test_trotter_sentinel_agreement(self):
        amp = np.array([0.0, 1.0], dtype=complex)
        ref = reference.trotter_run(amp, 0.0, np.pi, 3, False, 1e-14)
        fast = _fast.trotter_run(amp, 0.0, np.pi, 3, False, 1e-14)
        assert ref[0] is None and fast[0] is None
        assert len(ref[1]) == len(fast[1]) == 0
