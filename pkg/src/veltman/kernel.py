"""Kernel selection and formula compilation for the bounded-search sweep.

The compiled extension is preferred when importable; the pure-Python
fallback has identical semantics.  Set VELTMAN_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

from .formula import Bot, Box, Formula, Implies, Rhd, Var

if os.environ.get("VELTMAN_PURE_PYTHON"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

KERNEL_KIND = _impl.KIND


def compile_formula(f: Formula, var_order=None):
    """Flatten a formula into a kernel program with shared subterms.

    Returns (ops, var_order) where ops is a list of (opcode, a, b) and the
    last instruction computes f.
    """
    if var_order is None:
        names = set()
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Var):
                names.add(g.name)
            elif isinstance(g, Implies):
                stack.extend((g.left, g.right))
            elif isinstance(g, Box):
                stack.append(g.inner)
            elif isinstance(g, Rhd):
                stack.extend((g.left, g.right))
        var_order = sorted(names)
    vidx = {name: i for i, name in enumerate(var_order)}
    ops = []
    seen = {}

    def emit(g):
        if g in seen:
            return seen[g]
        if isinstance(g, Bot):
            ops.append((0, 0, 0))
        elif isinstance(g, Var):
            ops.append((1, vidx[g.name], 0))
        elif isinstance(g, Implies):
            a = emit(g.left)
            b = emit(g.right)
            ops.append((2, a, b))
        elif isinstance(g, Box):
            a = emit(g.inner)
            ops.append((3, a, 0))
        elif isinstance(g, Rhd):
            a = emit(g.left)
            b = emit(g.right)
            ops.append((4, a, b))
        else:
            raise TypeError(f"not a formula: {g!r}")
        seen[g] = len(ops) - 1
        return seen[g]

    root = emit(f)
    assert root == len(ops) - 1, "root must be the final instruction"
    return ops, list(var_order)


def compile_many(formulas, var_order):
    """One shared program computing several formulas; returns (ops, roots)
    with roots[i] the register holding formulas[i]."""
    ops = []
    seen = {}
    vidx = {name: i for i, name in enumerate(var_order)}

    def emit(g):
        if g in seen:
            return seen[g]
        if isinstance(g, Bot):
            ops.append((0, 0, 0))
        elif isinstance(g, Var):
            ops.append((1, vidx[g.name], 0))
        elif isinstance(g, Implies):
            a = emit(g.left)
            b = emit(g.right)
            ops.append((2, a, b))
        elif isinstance(g, Box):
            a = emit(g.inner)
            ops.append((3, a, 0))
        elif isinstance(g, Rhd):
            a = emit(g.left)
            b = emit(g.right)
            ops.append((4, a, b))
        else:
            raise TypeError(f"not a formula: {g!r}")
        seen[g] = len(ops) - 1
        return seen[g]

    roots = [emit(f) for f in formulas]
    return ops, roots


def sweep(n, R, S, ops, nvars, want_falsified):
    return _impl.sweep(n, R, S, ops, nvars, want_falsified)


def sweep_signatures(n, R, S, ops, nvars, roots):
    return _impl.sweep_signatures(n, R, S, ops, nvars, roots)


def eval_masks(n, R, S, ops, var_masks):
    return _impl.eval_masks(n, R, S, ops, var_masks)
