import os
import subprocess
import sys

import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from k3pencils import kernels
from k3pencils.cyclofield import CycNum, from_array, to_array

DEG = kernels.DEGREE
coeff_arrays = lambda *shape: arrays(np.int64, shape + (DEG,), elements=st.integers(-50, 50))  # noqa: E731


@given(coeff_arrays(5), coeff_arrays(5))
def test_polymul_backends_agree(a, b):
    assert np.array_equal(kernels.polymul(a, b, backend="numpy"), kernels.polymul(a, b, backend="numba"))


@given(coeff_arrays(3), coeff_arrays(3))
def test_polymul_matches_cycnum(a, b):
    got = kernels.polymul(a, b)
    for i in range(3):
        want = CycNum(a[i]) * CycNum(b[i])
        assert list(got[i]) == list(want.coeffs)


@given(coeff_arrays(2, 4, 4), coeff_arrays(2, 4, 4))
def test_matmul_backends_agree(a, b):
    assert np.array_equal(kernels.matmul(a, b, backend="numpy"), kernels.matmul(a, b, backend="numba"))


@given(coeff_arrays(4, 4))
def test_proportional_rows_self(u):
    ok = kernels.proportional_rows(u, u)
    assert ok.all()
    assert np.array_equal(ok, kernels.proportional_rows(u, u, backend="numpy"))


def test_proportional_rows_detects_scaling():
    x = [CycNum((1, 2)), CycNum((0, 0, 3)), CycNum((5,)), CycNum((0, 1))]
    c = CycNum((2, -1, 0, 1))
    u, _ = to_array(x)
    v, _ = to_array([c * y for y in x])
    w, _ = to_array([x[1], x[0], x[2], x[3]])
    both = kernels.proportional_rows(np.stack([u, u]), np.stack([v, w]).astype(u.dtype))
    assert both.tolist() == [True, False]


def test_overflow_falls_back_to_objects():
    big = np.full((1, DEG), 2**40, dtype=np.int64)
    prod = kernels.polymul(big, big)
    assert prod.dtype == object
    assert from_array(prod)[0] == CycNum(big[0]) * CycNum(big[0])


def test_env_flag_selects_backend():
    code = "from k3pencils import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, K3PENCILS_KERNELS="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
