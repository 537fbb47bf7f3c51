import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from orthopmat import kernels
from orthopmat.families import BESSEL_Y, LAGUERRE_L, Family, recurrence_arrays
from orthopmat.fields import Field

needs_ext = pytest.mark.skipif(not kernels.HAVE_EXTENSION, reason="compiled kernels not built")


@needs_ext
@pytest.mark.parametrize("fam", [Family.jacobi(2, 3), Family.gegenbauer(Fraction(1, 7)), LAGUERRE_L],
                         ids=str)
@pytest.mark.parametrize("n", [1, 2, 3, 50, 300])
def test_extension_matches_fallback(fam, n):
    a, b, g = recurrence_arrays(fam, n + 1)
    e_ext = kernels.eta_matrix(a, b, g, n + 1, backend="ext")
    e_py = kernels.eta_matrix(a, b, g, n + 1, backend="python")
    np.testing.assert_allclose(e_ext, e_py, rtol=1e-13, atol=1e-300)
    t_ext = kernels.theta_matrix(a, e_py, n, backend="ext")
    t_py = kernels.theta_matrix(a, e_py, n, backend="python")
    assert t_ext.shape == (n + 1, n)
    scale = np.maximum(np.abs(t_py).max(axis=0), 1e-300)
    assert np.max(np.abs(t_ext - t_py) / scale) <= 1e-13


def test_exact_arrays_use_fallback():
    a, b, g = recurrence_arrays(BESSEL_Y, 6, Field.EXACT)
    eta = kernels.eta_matrix(a, b, g, 6)
    assert eta.dtype == object and isinstance(eta[0, 1], Fraction)


def test_env_var_forces_pure_python():
    code = "from orthopmat import kernels; print(kernels.HAVE_EXTENSION)"
    env = dict(os.environ, ORTHOPMAT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"


def test_ext_backend_unavailable_raises(monkeypatch):
    monkeypatch.setattr(kernels, "_ext", None)
    a, b, g = recurrence_arrays(LAGUERRE_L, 4)
    with pytest.raises(RuntimeError):
        kernels.eta_matrix(a, b, g, 4, backend="ext")
    assert kernels.eta_matrix(a, b, g, 4).shape == (4, 4)
