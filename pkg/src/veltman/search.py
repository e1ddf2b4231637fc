"""Bounded exhaustive semantics: frame enumeration, countermodel search,
satisfiability, and the per-class soundness battery.

Enumeration is canonical and deterministic: accessibility relations are
generated as strict partial orders in ascending bitmask order, then the
admissible S families per world in ascending bitmask order.  The first
countermodel is therefore stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from . import kernel
from .formula import SCHEMAS, Formula, conj, formula_key, parse
from .model import Frame, Model, forces


class FrameClass(Enum):
    IL = "il"
    ILM0 = "ilm0"
    ILW = "ilw"
    ILWstar = "ilwstar"

    @classmethod
    def from_string(cls, s):
        key = s.strip().lower().replace("*", "star").replace("-", "")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown frame class {s!r}")


@dataclass
class SearchVerdict:
    kind: str  # "countermodel" or "no-counterexample"
    model: Model = None
    world: str = None
    bound: int = 0
    frames_examined: int = 0
    steps: int = 0
    note: str = ""

    @property
    def found(self):
        return self.kind == "countermodel"


# ---------------------------------------------------------------------------
# Enumeration of frames, bitmask encoded
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _strict_orders(n):
    """All transitive irreflexive relations on n points, as successor-mask
    tuples, in ascending order.  Transitive and irreflexive already implies
    acyclic.  Practical up to n = 5; cached per n."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in range(1 << len(pairs)):
        R = [0] * n
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                R[i] |= 1 << j
        ok = True
        for i in range(n):
            m = R[i]
            while m:
                j = (m & -m).bit_length() - 1
                if R[j] & ~R[i]:
                    ok = False
                    break
                m &= m - 1
            if not ok:
                break
        if ok:
            out.append(tuple(R))
    return sorted(out)


@lru_cache(maxsize=None)
def _s_options(sub_mask, base_key, n):
    """Admissible S_w relations for successor set sub_mask, given the forced
    base pairs, as (n*n)-bit masks in ascending order."""
    members = [y for y in range(n) if sub_mask >> y & 1]
    base = 0
    for y, z in base_key:
        base |= 1 << (y * n + z)
    free = [
        (y, z)
        for y in members
        for z in members
        if not base >> (y * n + z) & 1
    ]
    out = []
    for bits in range(1 << len(free)):
        rel = base
        for i, (y, z) in enumerate(free):
            if bits >> i & 1:
                rel |= 1 << (y * n + z)
        ok = True
        for y in members:
            ry = (rel >> (y * n)) & ((1 << n) - 1)
            m = ry
            while m:
                z = (m & -m).bit_length() - 1
                if (rel >> (z * n)) & ((1 << n) - 1) & ~ry:
                    ok = False
                    break
                m &= m - 1
            if not ok:
                break
        if ok:
            out.append(rel)
    return sorted(out)


def _class_ok(n, R, S, cls):
    if cls == FrameClass.IL:
        return True
    if cls in (FrameClass.ILM0, FrameClass.ILWstar):
        for w in range(n):
            for x in range(n):
                if not R[w] >> x & 1:
                    continue
                for y in range(n):
                    if not R[x] >> y & 1:
                        continue
                    for yp in range(n):
                        if not S[w * n + y] >> yp & 1:
                            continue
                        need = R[yp]  # every z with y'Rz must satisfy xRz
                        if need & ~R[x]:
                            return False
        if cls == FrameClass.ILM0:
            return True
    if cls in (FrameClass.ILW, FrameClass.ILWstar):
        full = (1 << n) - 1
        for w in range(n):
            # S_w ; R composition, then cycle check
            comp = [0] * n
            for y in range(n):
                m = S[w * n + y]
                acc = 0
                while m:
                    z = (m & -m).bit_length() - 1
                    acc |= R[z]
                    m &= m - 1
                comp[y] = acc & full
            # transitive closure of comp
            changed = True
            while changed:
                changed = False
                for y in range(n):
                    m = comp[y]
                    acc = m
                    while m:
                        z = (m & -m).bit_length() - 1
                        acc |= comp[z]
                        m &= m - 1
                    if acc != comp[y]:
                        comp[y] = acc
                        changed = True
            if any(comp[y] >> y & 1 for y in range(n)):
                return False
    return True


def _enum_encoded(n, cls: FrameClass):
    """Yield (R_masks, S_flat) encodings of all class-c frames on n worlds."""
    for R in _strict_orders(n):
        per_world = []
        for w in range(n):
            sub = R[w]
            base = []
            for y in range(n):
                if sub >> y & 1:
                    base.append((y, y))
                    m = R[y] & sub
                    while m:
                        z = (m & -m).bit_length() - 1
                        base.append((y, z))
                        m &= m - 1
            per_world.append(_s_options(sub, tuple(sorted(set(base))), n))
        idx = [0] * n
        while True:
            S = [0] * (n * n)
            for w in range(n):
                mask = per_world[w][idx[w]]
                for y in range(n):
                    row = (mask >> (y * n)) & ((1 << n) - 1)
                    S[w * n + y] = row
            if _class_ok(n, R, S, cls):
                yield R, S
            # odometer over the S choices
            k = n - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < len(per_world[k]):
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                break


def _decode(n, R, S) -> Frame:
    worlds = [str(i) for i in range(n)]
    rset = {
        (worlds[x], worlds[y]) for x in range(n) for y in range(n) if R[x] >> y & 1
    }
    sdict = {
        worlds[w]: {
            (worlds[y], worlds[z])
            for y in range(n)
            for z in range(n)
            if S[w * n + y] >> z & 1
        }
        for w in range(n)
    }
    return Frame(worlds, rset, sdict)


def enumerate_frames(n, cls: FrameClass = FrameClass.IL):
    """Stream every class-c frame on n index-labeled worlds, exactly once,
    in canonical order."""
    if n < 1:
        raise ValueError("need at least one world")
    for R, S in _enum_encoded(n, cls):
        yield _decode(n, R, S)


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

def _model_from_hit(n, R, S, var_order, val_counter) -> Model:
    frame = _decode(n, R, S)
    worlds = frame.worlds
    val = {}
    for i, name in enumerate(var_order):
        mask = (val_counter >> (i * n)) & ((1 << n) - 1)
        val[name] = frozenset(worlds[w] for w in range(n) if mask >> w & 1)
    return Model(frame, val)


def find_countermodel(f: Formula, cls: FrameClass, max_worlds: int) -> SearchVerdict:
    """First frame/valuation/world falsifying f in class cls, if any within
    the world bound.  Valuations range only over the variables of f; any hit
    is re-checked by the independent forcing evaluator before being returned.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    ops, var_order = kernel.compile_formula(f)
    frames = 0
    steps = 0
    for n in range(1, max_worlds + 1):
        for R, S in _enum_encoded(n, cls):
            frames += 1
            val, w, used = kernel.sweep(n, R, S, ops, len(var_order), True)
            steps += used
            if val is not None:
                model = _model_from_hit(n, R, S, var_order, val)
                world = model.frame.worlds[w]
                if forces(model, world, f):
                    raise AssertionError(
                        "kernel and forcing evaluator disagree; this is a bug"
                    )
                return SearchVerdict(
                    "countermodel",
                    model=model,
                    world=world,
                    bound=max_worlds,
                    frames_examined=frames,
                    steps=steps,
                )
    return SearchVerdict(
        "no-counterexample",
        bound=max_worlds,
        frames_examined=frames,
        steps=steps,
        note=_inconclusive_note(cls),
    )


def _inconclusive_note(cls):
    if cls in (FrameClass.ILM0, FrameClass.ILWstar):
        return (
            "bounded verdict only: the finite model property for this class "
            "is open, absence of a countermodel up to the bound proves nothing"
        )
    return "bounded verdict"


def satisfiable(gamma, cls: FrameClass, max_worlds: int) -> SearchVerdict:
    """Search for a class-c model and world forcing every formula in gamma."""
    gamma = sorted(gamma, key=formula_key)
    if not gamma:
        raise ValueError("empty formula set")
    f = conj(gamma)
    ops, var_order = kernel.compile_formula(f)
    frames = 0
    steps = 0
    for n in range(1, max_worlds + 1):
        for R, S in _enum_encoded(n, cls):
            frames += 1
            val, w, used = kernel.sweep(n, R, S, ops, len(var_order), False)
            steps += used
            if val is not None:
                model = _model_from_hit(n, R, S, var_order, val)
                world = model.frame.worlds[w]
                memo = {}
                if not all(forces(model, world, g, memo) for g in gamma):
                    raise AssertionError(
                        "kernel and forcing evaluator disagree; this is a bug"
                    )
                return SearchVerdict(
                    "countermodel",
                    model=model,
                    world=world,
                    bound=max_worlds,
                    frames_examined=frames,
                    steps=steps,
                    note="satisfying witness",
                )
    return SearchVerdict(
        "no-counterexample",
        bound=max_worlds,
        frames_examined=frames,
        steps=steps,
        note="presumed inconsistent at bound %d (bounded search only)" % max_worlds,
    )


_signature_cache = {}


def realizable_signatures(atoms, variables_order, cls: FrameClass, max_worlds: int):
    """Atom signatures realized at some world of some class-c frame within
    the bound.

    An atom signature is an integer whose i-th bit says whether atoms[i] is
    forced at the world.  For labels saturated over an ambient set whose
    atoms these are, bounded satisfiability of the whole label is exactly
    membership of its signature here, which turns the per-label model
    search of the construction oracle into one shared sweep per bound.
    """
    key = (tuple(atoms), tuple(variables_order), cls, max_worlds)
    if key in _signature_cache:
        return _signature_cache[key]
    ops, roots = kernel.compile_many(list(atoms), list(variables_order))
    out = set()
    for n in range(1, max_worlds + 1):
        for R, S in _enum_encoded(n, cls):
            out |= kernel.sweep_signatures(n, R, S, ops, len(variables_order), roots)
    got = frozenset(out)
    _signature_cache[key] = got
    return got


_sat_cache = {}


def satisfiable_cached(gamma, cls, max_worlds) -> bool:
    """Memoized bounded satisfiability, sweeping the bound incrementally;
    a witness at any smaller bound settles the question for all larger ones."""
    gamma = frozenset(gamma)
    for bound in range(1, max_worlds + 1):
        key = (gamma, cls, bound)
        if key in _sat_cache:
            if _sat_cache[key]:
                return True
            continue
        found = satisfiable(gamma, cls, bound).found
        _sat_cache[key] = found
        if found:
            return True
    return False


# ---------------------------------------------------------------------------
# Soundness battery
# ---------------------------------------------------------------------------

# Which schemata are expected sound per class (IL axioms always).
CLASS_SCHEMAS = {
    FrameClass.IL: ["L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5"],
    FrameClass.ILM0: ["L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5", "M0"],
    FrameClass.ILW: ["L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5", "W"],
    FrameClass.ILWstar: [
        "L1", "L2", "L3", "J1", "J2", "J3", "J4", "J5", "M0", "W", "W*", "M0*",
    ],
}

# Fixed instantiation battery; every assignment stays within three variables.
_BATTERY_RAW = [
    {"A": "p", "B": "q", "C": "r"},
    {"A": "p", "B": "p", "C": "p"},
    {"A": "q", "B": "p", "C": "p"},
    {"A": "~p", "B": "q /\\ r", "C": "p \\/ q"},
    {"A": "[]p", "B": "<>q", "C": "p -> r"},
]


def battery_assignments():
    return [
        {k: parse(v) for k, v in assignment.items()} for assignment in _BATTERY_RAW
    ]


@dataclass
class SoundnessReport:
    cls: FrameClass
    max_worlds: int
    results: list = field(default_factory=list)  # (schema, formula, verdict)

    @property
    def ok(self):
        return all(not v.found for (_, _, v) in self.results)

    def lines(self):
        out = []
        for name, f, verdict in self.results:
            status = "FAIL countermodel" if verdict.found else "ok"
            out.append(f"{name}: {status}  {f}")
        return out


def axiom_soundness_suite(cls: FrameClass, max_worlds: int) -> SoundnessReport:
    """Check every battery instance of every schema sound for cls."""
    report = SoundnessReport(cls, max_worlds)
    for name in CLASS_SCHEMAS[cls]:
        schema = SCHEMAS[name]
        for assignment in battery_assignments():
            inst = schema.instantiate(
                {k: assignment[k] for k in schema.placeholders}
            )
            verdict = find_countermodel(inst, cls, max_worlds)
            report.results.append((name, formula_key(inst), verdict))
    return report
