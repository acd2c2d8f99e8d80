"""The compiled and pure-Python kernels must agree node for node."""

import random

import pytest

from icleak import _kernels
from icleak._kernels import _pure
from icleak.confusion import _adjacency_bitsets, build_confusion_graph
from icleak.fitting import _col_class, _kernel_args, pattern_from_instance
from icleak.instance import random_instance, random_split

ccore = pytest.importorskip("icleak._kernels._ccore")


def test_backend_selected():
    assert _kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("seed", range(6))
def test_fitting_search_backends_agree(seed):
    rng = random.Random(seed)
    for _ in range(40):
        q = rng.choice([2, 2, 3])
        n = rng.randint(1, 5)
        inst = random_instance(rng, n, rng.randint(0, 5), q)
        pat = pattern_from_instance(inst)
        if len(pat.free_cells) > (10 if q == 2 else 6):
            continue
        split = random_split(rng, n)
        base, per_row = _kernel_args(pat, pat.free_cells)
        for obj in (_pure.RANK, _pure.LEAKAGE, _pure.PARETO):
            for floor in (-1, 0, 1):
                args = (q, pat.rows, pat.cols, base, per_row, _col_class(pat, split), obj, floor)
                assert ccore.fitting_search(*args) == _pure.fitting_search(*args)


@pytest.mark.parametrize("seed", range(4))
def test_mis_backends_agree(seed):
    rng = random.Random(100 + seed)
    for _ in range(25):
        nv = rng.randint(0, 70)
        p = rng.random()
        adj = [0] * nv
        for a in range(nv):
            for b in range(a + 1, nv):
                if rng.random() < p:
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
        assert ccore.max_independent_set(nv, adj) == _pure.max_independent_set(nv, adj)


def test_mis_backends_agree_on_confusion_graphs():
    rng = random.Random(8)
    for _ in range(10):
        g = build_confusion_graph(random_instance(rng, 6, 6))
        adj = _adjacency_bitsets(g)
        assert ccore.max_independent_set(64, adj) == _pure.max_independent_set(64, adj)


def test_pure_fallback_selected_by_environment(monkeypatch):
    import importlib

    monkeypatch.setenv("ICLEAK_PURE", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.fitting_search is _pure.fitting_search
    finally:
        monkeypatch.delenv("ICLEAK_PURE")
        importlib.reload(_kernels)
