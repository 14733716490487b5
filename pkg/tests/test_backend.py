import subprocess
import sys

import numpy as np
import pytest

import matconc._py_kernels as py_kernels
from matconc import available_backends

compiled = pytest.importorskip(
    "matconc._kernels", reason="compiled kernel extension not built"
)

from helpers import random_complex, random_hermitian, rng_for


def _v0(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


class TestKernelAgreement:
    def test_chain_product(self):
        rng = rng_for(1)
        for n, d in ((1, 1), (7, 2), (50, 4), (200, 6)):
            xs = np.ascontiguousarray(
                np.stack([random_complex(rng, d) for _ in range(n)])
            )
            a = compiled.chain_product(xs, 1.0 / n)
            b = py_kernels.chain_product(xs, 1.0 / n)
            assert np.abs(a - b).max() < 1e-12

    def test_doob_increments(self):
        rng = rng_for(2)
        for n, d in ((1, 1), (10, 3), (80, 4)):
            xs = np.ascontiguousarray(
                np.stack([random_complex(rng, d, scale=0.5) for _ in range(n)])
            )
            mu = random_hermitian(rng, d, norm=0.4)
            a = compiled.doob_increments(xs, mu, 1.0 / n)
            b = py_kernels.doob_increments(xs, mu, 1.0 / n)
            assert np.abs(a - b).max() < 1e-12

    def test_spectral_norm(self):
        rng = rng_for(3)
        for d in (1, 2, 5, 16):
            m = np.ascontiguousarray(random_complex(rng, d))
            v0 = _v0(d, rng)
            va, ca = compiled.spectral_norm(m, v0, 10 * d, 1e-12, 1e-10)
            vb, cb = py_kernels.spectral_norm(m, v0, 10 * d, 1e-12, 1e-10)
            assert ca == cb
            if ca:
                assert va == pytest.approx(vb, rel=1e-12)

    def test_spectral_norms_stack(self):
        rng = rng_for(4)
        stack = np.ascontiguousarray(
            np.stack([random_complex(rng, 4) for _ in range(30)])
        )
        v0 = _v0(4, rng)
        va, ca = compiled.spectral_norms(stack, v0, 40, 1e-12, 1e-10)
        vb, cb = py_kernels.spectral_norms(stack, v0, 40, 1e-12, 1e-10)
        np.testing.assert_array_equal(ca, cb)
        np.testing.assert_allclose(va[ca], vb[cb], rtol=1e-12)


class TestBackendSelection:
    def test_both_backends_listed(self):
        assert available_backends() == ["compiled", "python"]

    @pytest.mark.parametrize("name", ["python", "compiled"])
    def test_env_override(self, name):
        code = (
            "import matconc; print(matconc.backend_name())"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"MATCONC_BACKEND": name, "PATH": "/usr/bin:/bin"},
        )
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == name

    def test_unknown_backend_rejected(self):
        from matconc import ConfigError
        from matconc._backend import _resolve

        with pytest.raises(ConfigError):
            _resolve("fortran")


class TestEndToEndAgreement:
    def test_deviation_agrees_across_backends(self):
        from matconc import RandomStream, hermitian_bounded, sample_stack
        from matconc._backend import set_backend
        from matconc.products import deviation

        dist = hermitian_bounded(4, 1.0)
        xs = sample_stack(dist, RandomStream(21, 0), 50)
        try:
            set_backend("compiled")
            a = deviation(xs, dist.mean())
            set_backend("python")
            b = deviation(xs, dist.mean())
        finally:
            set_backend("compiled")
        assert a == pytest.approx(b, rel=1e-11)
