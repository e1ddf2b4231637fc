"""Finite labels standing in for maximal consistent sets.

A label is a set of formulas drawn from an ambient adequate set and
propositionally saturated over it: ``bot`` is never a member, and an
implication of the ambient set is a member exactly when its antecedent is
absent or its consequent present.  Var/Box/Rhd formulas act as atoms.

Membership of an arbitrary formula in the virtual MCS a label denotes is
three-valued: True/False when the label determines it (by lookup or by
boolean decomposition), None when the ambient set carries no information.
"""

from __future__ import annotations

from .formula import (
    BOT,
    Bot,
    Box,
    Formula,
    Implies,
    Rhd,
    Var,
    adequate_closure,
    formula_key,
    is_neg,
    single_negation,
)


def member(label: frozenset, f: Formula, ambient: frozenset):
    """Three-valued membership of f in the MCS denoted by label.

    The label must be a subset of ambient.  Returns True, False or None.
    """
    if f in label:
        return True
    if f in ambient:
        return False
    if isinstance(f, Bot):
        return False
    if isinstance(f, Implies):
        a = member(label, f.left, ambient)
        b = member(label, f.right, ambient)
        if a is False or b is True:
            return True
        if a is True and b is False:
            return False
        return None
    return None


def holds(label, f, ambient) -> bool:
    """Membership with unknown collapsed to False (a label only witnesses
    what it determines)."""
    return member(label, f, ambient) is True


def is_saturated(label, ambient) -> bool:
    """Propositional saturation of label over ambient.

    Assumes ambient is closed under subformulas, so implication parts are
    decided by lookup.
    """
    if not label <= ambient:
        return False

    def val(x):
        return x != BOT and x in label

    for f in ambient:
        if isinstance(f, Implies):
            if (f in label) != ((not val(f.left)) or val(f.right)):
                return False
        elif isinstance(f, Bot) and f in label:
            return False
    return True


def atoms_of(ambient):
    """Var/Box/Rhd members of the ambient set, in print order."""
    return sorted(
        (f for f in ambient if isinstance(f, (Var, Box, Rhd))), key=formula_key
    )


def _impl_depth(f):
    if isinstance(f, Implies):
        return 1 + max(_impl_depth(f.left), _impl_depth(f.right))
    return 0


def saturate(ambient, atom_decisions) -> frozenset:
    """The unique saturated label over ambient extending a decision on atoms.

    atom_decisions maps each ambient atom to a bool.
    """
    label = {a for a in atoms_of(ambient) if atom_decisions[a]}

    def val(x):
        return x != BOT and x in label

    rest = sorted(
        (f for f in ambient if isinstance(f, Implies)), key=_impl_depth
    )
    for f in rest:
        if (not val(f.left)) or val(f.right):
            label.add(f)
    return frozenset(label)


def saturated_labels(ambient):
    """All saturated labels over ambient, in a canonical order.

    Labels are generated by sweeping truth assignments to the ambient atoms
    as an ascending bit counter (bit i = i-th atom in print order).
    """
    ambient = frozenset(ambient)
    atoms = atoms_of(ambient)
    for bits in range(1 << len(atoms)):
        yield saturate(ambient, {a: bool(bits >> i & 1) for i, a in enumerate(atoms)})


# ---------------------------------------------------------------------------
# Relations between labels (finite restrictions of the MCS relations)
# ---------------------------------------------------------------------------

def box_formulas(ambient):
    return [f for f in ambient if isinstance(f, Box)]


def label_prec(lower, upper, ambient) -> bool:
    """Successor relation: every box formula in the lower label puts its
    inner formula and itself in the upper label."""
    for f in box_formulas(ambient):
        if f in lower:
            if not holds(upper, f.inner, ambient) or f not in upper:
                return False
    return True


def label_crit(lower, upper, c: Formula, ambient) -> bool:
    """C-critical successor relation.

    ``A |> C`` in the lower label puts ``~A`` and ``[]~A`` in the upper;
    the C |> C instance contributes ``~C`` and ``[]~C`` directly.  Critical
    successors are successors, so the plain successor relation is included.
    For C = bot this is exactly the successor relation.
    """
    if not label_prec(lower, upper, ambient):
        return False
    if c == BOT:
        return True
    for f in lower:
        if isinstance(f, Rhd) and f.right == c:
            if not holds(upper, Implies(f.left, BOT), ambient):
                return False
            if not holds(upper, Box(single_negation(f.left)), ambient):
                return False
    if not holds(upper, Implies(c, BOT), ambient):
        return False
    if not holds(upper, Box(single_negation(c)), ambient):
        return False
    return True


def box_subset(lower, upper, ambient) -> bool:
    """Box-inclusion: every ambient box formula in lower is in upper."""
    for f in box_formulas(ambient):
        if f in lower and f not in upper:
            return False
    return True


def box_proper_subset(lower, upper, adequate_set, ambient) -> bool:
    """Box-inclusion plus a strict box gain inside the adequate set."""
    if not box_subset(lower, upper, ambient):
        return False
    for f in adequate_set:
        if isinstance(f, Box) and f in upper and f not in lower:
            return True
    return False


def plainly_inconsistent(label, ambient) -> bool:
    """Cheap sound unsatisfiability filters, applied before the bounded
    model search.  Both rules are immediate from the forcing clauses:

    - ``~(A |> B)`` together with ``[]~A``: with no R-successor forcing A
      the negated obligation is vacuously false.
    - ``A |> B`` with ``<>A`` and ``[]~B``: the forced S-witness for B is
      itself an R-successor.
    """
    for f in ambient:
        if not isinstance(f, Rhd):
            continue
        m = member(label, f, ambient)
        if m is None:
            continue
        box_not_a = member(label, Box(single_negation(f.left)), ambient)
        if m is False and box_not_a is True:
            return True
        if m is True and box_not_a is False:
            if member(label, Box(single_negation(f.right)), ambient) is True:
                return True
    return False


def extend_ambient(adequate_set) -> frozenset:
    """Ambient set for label search: the adequate set plus the box forms
    the existence arguments need (``[]~X`` for the sides of its |> formulas
    and for the single negations of its box formulas), closed again."""
    adequate_set = adequate_closure(adequate_set)
    extra = set()
    for f in adequate_set:
        if isinstance(f, Rhd):
            extra.add(Box(single_negation(f.left)))
            extra.add(Box(single_negation(f.right)))
        elif isinstance(f, Box):
            extra.add(Box(single_negation(f.inner)))
    return adequate_closure(set(adequate_set) | extra)


def box_gain_pool(adequate_set) -> frozenset:
    """The finite pool of box formulas that must strictly grow along R."""
    pool = {Box(single_negation(f)) for f in adequate_set}
    pool |= {f for f in adequate_set if isinstance(f, Box)}
    return frozenset(pool)
