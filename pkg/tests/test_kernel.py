"""Parity between the compiled kernel and the pure-Python fallback, and
agreement of both with the recursive forcing evaluator."""

import random

import pytest

from conftest import random_formula, random_model

from veltman import _kernel_py
from veltman.formula import parse
from veltman.kernel import KERNEL_KIND, compile_formula
from veltman.model import forces

try:
    from veltman import _kernel

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def encode(model):
    worlds = model.frame.worlds
    n = len(worlds)
    idx = {w: i for i, w in enumerate(worlds)}
    R = [0] * n
    for x, y in model.frame.R:
        R[idx[x]] |= 1 << idx[y]
    S = [0] * (n * n)
    for w in worlds:
        for y, z in model.frame.s_pairs(w):
            S[idx[w] * n + idx[y]] |= 1 << idx[z]
    return n, R, S, idx


def var_masks_of(model, var_order, idx):
    masks = []
    for name in var_order:
        m = 0
        for w in model.valuation.get(name, ()):
            m |= 1 << idx[w]
        masks.append(m)
    return masks


def test_kernel_selected():
    assert KERNEL_KIND in ("compiled", "python")


def test_eval_masks_matches_forces():
    rng = random.Random(4)
    for _ in range(150):
        model = random_model(rng, 5)
        f = random_formula(rng, 3)
        ops, var_order = compile_formula(f)
        n, R, S, idx = encode(model)
        masks = var_masks_of(model, var_order, idx)
        got = _kernel_py.eval_masks(n, R, S, ops, masks)
        for w in model.frame.worlds:
            assert bool(got >> idx[w] & 1) == forces(model, w, f)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel unavailable")
def test_compiled_matches_pure_eval():
    rng = random.Random(5)
    for _ in range(200):
        model = random_model(rng, 5)
        f = random_formula(rng, 3)
        ops, var_order = compile_formula(f)
        n, R, S, idx = encode(model)
        masks = var_masks_of(model, var_order, idx)
        assert _kernel.eval_masks(n, R, S, ops, masks) == _kernel_py.eval_masks(
            n, R, S, ops, masks
        )


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel unavailable")
def test_compiled_matches_pure_sweep():
    rng = random.Random(6)
    for _ in range(60):
        model = random_model(rng, 4)
        f = random_formula(rng, 3)
        ops, var_order = compile_formula(f)
        if len(var_order) * len(model.frame.worlds) > 14:
            continue
        n, R, S, idx = encode(model)
        for mode in (True, False):
            a = _kernel.sweep(n, R, S, ops, len(var_order), mode)
            b = _kernel_py.sweep(n, R, S, ops, len(var_order), mode)
            assert a == b


def test_shared_subterms_compile_once():
    f = parse("p /\\ q -> p /\\ q")
    ops, _ = compile_formula(f)
    # the conjunction is emitted a single time
    assert len(ops) == len({tuple(op) for op in ops})


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel unavailable")
def test_compiled_capacity_guard():
    ops, _ = compile_formula(parse("p"))
    with pytest.raises(ValueError):
        _kernel.sweep(40, [0] * 40, [0] * 1600, ops, 2, True)


def test_single_world_sweep():
    ops, _ = compile_formula(parse("p"))
    val, w, steps = _kernel_py.sweep(1, [0], [0], ops, 1, True)
    assert (val, w) == (0, 0) and steps == 1
