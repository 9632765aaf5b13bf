import os
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from biregular import _kernels_py, kernels
from biregular.errors import BudgetExceeded
from biregular.generate import random_instance
from biregular.model import bracket_pair, compose_labels, uniform_matrix

try:
    from biregular import _ckernels
except ImportError:
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
    forced = bool(os.environ.get("BIREGULAR_PURE_PYTHON"))
    assert (kernels.BACKEND == "cython") == (_ckernels is not None and not forced)


@needs_c
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 10 ** 6))
def test_hall_scan_backends_agree(nl, nr, seed):
    rng = random.Random(seed)
    adj = [rng.getrandbits(nr) for _ in range(nl)]
    assert _ckernels.hall_scan(adj, nl) == _kernels_py.hall_scan(adj, nl)


@needs_c
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_involution_search_backends_agree(n, k, seed):
    g = random_instance(n, k, seed)
    a = _ckernels.involution_search(list(g.u), list(g.v), n, k, 0)
    b = _kernels_py.involution_search(list(g.u), list(g.v), n, k, 0)
    assert a == b
    assert bracket_pair(compose_labels(g.u, a), g.v, n, k) == uniform_matrix(n, k)


@pytest.mark.parametrize("impl", [_kernels_py, pytest.param(_ckernels, marks=needs_c)],
                         ids=["python", "cython"])
def test_involution_search_budget(impl):
    g = random_instance(4, 4, 1)
    with pytest.raises(BudgetExceeded):
        impl.involution_search(list(g.u), list(g.v), 4, 4, 3)


@pytest.mark.parametrize("impl", [_kernels_py, pytest.param(_ckernels, marks=needs_c)],
                         ids=["python", "cython"])
def test_involution_search_impossible(impl):
    # two edges both to girl 0 and boy 0: nothing can give girl 1 a ball
    assert impl.involution_search([0, 0], [0, 0], 2, 1, 0) is None


def test_oversized_inputs_fall_back():
    adj = [1 << 70, 1 << 70]
    assert kernels.hall_scan(adj, 2) == _kernels_py.hall_scan(adj, 2)
