import os
import subprocess
import sys

import pytest
from hypothesis import given

from koszul import _pykernel, kernel
from koszul.geometry import cotangent_chart
from koszul.superalgebra import declare_chart

from strategies import operators, polynomials

try:
    from koszul import _ckernel
except ImportError:  # pragma: no cover - depends on the build
    _ckernel = None

needs_compiled = pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")

C = declare_chart([("x", 0), ("y", 0), ("t1", 1), ("t2", 1), ("t3", 1)])
K = cotangent_chart(declare_chart([("x", 0), ("t1", 1), ("t2", 1)]))


def _args(K):
    nc = K.nvars - len(K.momenta)
    odd_c = tuple(i for i in K.odd if i < nc)
    odd_m = tuple(i - nc for i in K.odd if i >= nc)
    pair = [0] * len(K.momenta)
    for c, m in K.pairing:
        pair[m - nc] = c
    return nc, odd_c, odd_m, tuple(pair), K.hbar_index


def test_backend_selection():
    assert kernel.BACKEND in ("python", "cython")
    if _ckernel is not None and os.environ.get("KOSZUL_PURE") not in ("1", "true", "yes"):
        assert kernel.BACKEND == "cython"


def test_pure_flag_forces_python_backend():
    env = dict(os.environ, KOSZUL_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from koszul import kernel; print(kernel.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_mono_mul_signs():
    odd = (0, 1)
    assert _pykernel.mono_mul((1, 0), (0, 1), odd) == (1, (1, 1))
    assert _pykernel.mono_mul((0, 1), (1, 0), odd) == (-1, (1, 1))
    assert _pykernel.mono_mul((1, 0), (1, 0), odd)[0] == 0


@needs_compiled
@given(polynomials(C, terms=6), polynomials(C, terms=6))
def test_poly_mul_parity(a, b):
    assert _ckernel.poly_mul(a.terms, b.terms, C.odd) == _pykernel.poly_mul(a.terms, b.terms, C.odd)


@needs_compiled
@given(polynomials(C, terms=6))
def test_left_derivative_parity(a):
    for i in range(C.nvars):
        assert _ckernel.left_derivative(a.terms, i, C.odd) == _pykernel.left_derivative(a.terms, i, C.odd)


@needs_compiled
@given(operators(K.base, terms=3, max_momenta=3), operators(K.base, terms=3, max_momenta=3))
def test_compose_parity(A, B):
    ck = _ckernel.OrderingKernel(*_args(K))
    pk = _pykernel.OrderingKernel(*_args(K))
    assert ck.compose(A.symbol.terms, B.symbol.terms) == pk.compose(A.symbol.terms, B.symbol.terms)
