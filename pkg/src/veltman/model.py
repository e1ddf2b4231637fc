"""Finite Veltman frames and models: validation, forcing, submodels, I/O.

World ids are opaque strings; deterministic iteration is lexicographic.
Frames and models are treated as immutable once validated.  LabeledFrame
is the one mutable structure (closure and construction extend it); all
mutation goes through methods that bump a version counter so derived
relations can be cached safely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .formula import (
    BOT,
    Bot,
    Box,
    Formula,
    Implies,
    Rhd,
    Var,
    formula_key,
    parse,
    print_formula,
)


class UnknownWorldError(KeyError):
    pass


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: tuple
    detail: str = ""
    rank: int = 50  # report position; lower sorts first

    def __str__(self):
        w = ",".join(str(x) for x in self.witness)
        msg = f"{self.rule}({w})"
        if self.detail:
            msg += f": {self.detail}"
        return msg


class ValidationReport:
    """An ordered list of violations; empty means the property holds."""

    def __init__(self, violations=()):
        self.violations = sorted(
            violations, key=lambda v: (v.rank, v.rule, v.witness, v.detail)
        )

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.violations)

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)

    def merged(self, other) -> "ValidationReport":
        return ValidationReport(list(self.violations) + list(other.violations))


# ---------------------------------------------------------------------------
# Frames and models
# ---------------------------------------------------------------------------

def _norm_s(worlds, s):
    out = {w: frozenset(s.get(w, ())) for w in worlds}
    return out


@dataclass
class Frame:
    worlds: tuple
    R: frozenset
    S: dict  # world -> frozenset of (y, z) pairs

    def __init__(self, worlds, R=(), S=None):
        self.worlds = tuple(sorted(worlds))
        self.R = frozenset(tuple(p) for p in R)
        self.S = _norm_s(self.worlds, S or {})

    def successors(self, w):
        return sorted(y for (x, y) in self.R if x == w)

    def s_pairs(self, w):
        return self.S.get(w, frozenset())


@dataclass
class Model:
    frame: Frame
    valuation: dict  # variable name -> frozenset of worlds

    def __init__(self, frame, valuation=None):
        self.frame = frame
        val = {}
        for p, ws in (valuation or {}).items():
            val[p] = frozenset(ws)
        self.valuation = val

    def check(self):
        bad = []
        ws = set(self.frame.worlds)
        for p, seen in sorted(self.valuation.items()):
            for w in sorted(seen):
                if w not in ws:
                    bad.append(Violation("val-world", (p, w), "unknown world"))
        return ValidationReport(bad)


def has_cycle(worlds, pairs) -> tuple:
    """First world on a cycle of the transitive closure, or None."""
    succ = {w: set() for w in worlds}
    for x, y in pairs:
        succ[x].add(y)
    closure = {w: set(s) for w, s in succ.items()}
    changed = True
    while changed:
        changed = False
        for w in worlds:
            extra = set()
            for y in closure[w]:
                extra |= closure.get(y, set())
            if not extra <= closure[w]:
                closure[w] |= extra
                changed = True
    for w in sorted(worlds):
        if w in closure[w]:
            return w
    return None


def validate_frame(f: Frame) -> ValidationReport:
    """Check the six Veltman-frame clauses, reporting witnesses."""
    v = []
    ws = set(f.worlds)
    for x, y in sorted(f.R):
        if x not in ws or y not in ws:
            v.append(Violation("R-world", (x, y), "edge outside universe"))
    cyc = has_cycle(f.worlds, f.R)
    if cyc is not None:
        v.append(Violation("R-conversely-well-founded", (cyc,), "lies on an R-cycle"))
    rset = f.R
    for x, y in sorted(rset):
        for y2, z in sorted(rset):
            if y == y2 and (x, z) not in rset:
                v.append(Violation("R-transitive", (x, y, z)))
    for w in f.worlds:
        sw = f.s_pairs(w)
        for y, z in sorted(sw):
            if (w, y) not in rset:
                v.append(Violation("S-domain", (w, y, z), "yS_xz needs xRy"))
            if (w, z) not in rset:
                v.append(Violation("S-range", (w, y, z), "yS_xz needs xRz"))
        for x, y in sorted(rset):
            if x == w and (y, y) not in sw:
                v.append(Violation("S-reflexive", (w, y), "xRy needs yS_xy"))
        for x, y in sorted(rset):
            if x != w:
                continue
            for y2, z in sorted(rset):
                if y2 == y and (y, z) not in sw:
                    v.append(Violation("S-R-inclusion", (w, y, z), "xRyRz needs yS_xz"))
        for a, b in sorted(sw):
            for b2, c in sorted(sw):
                if b == b2 and (a, c) not in sw:
                    v.append(Violation("S-transitive", (w, a, b, c)))
    return ValidationReport(v)


# ---------------------------------------------------------------------------
# Forcing
# ---------------------------------------------------------------------------

def forces(m: Model, w: str, f: Formula, _memo=None) -> bool:
    """Forcing at a world, by the five clauses."""
    if w not in m.frame.worlds:
        raise UnknownWorldError(w)
    if _memo is None:
        _memo = {}
    key = (w, f)
    if key in _memo:
        return _memo[key]
    if isinstance(f, Bot):
        out = False
    elif isinstance(f, Var):
        out = w in m.valuation.get(f.name, frozenset())
    elif isinstance(f, Implies):
        out = (not forces(m, w, f.left, _memo)) or forces(m, w, f.right, _memo)
    elif isinstance(f, Box):
        out = all(
            forces(m, y, f.inner, _memo) for (x, y) in m.frame.R if x == w
        )
    elif isinstance(f, Rhd):
        sw = m.frame.s_pairs(w)
        out = True
        for x, u in m.frame.R:
            if x != w or not forces(m, u, f.left, _memo):
                continue
            if not any(
                forces(m, z, f.right, _memo) for (y, z) in sw if y == u
            ):
                out = False
                break
    else:
        raise TypeError(f"not a formula: {f!r}")
    _memo[key] = out
    return out


def valid_on_model(m: Model, f: Formula) -> bool:
    memo = {}
    return all(forces(m, w, f, memo) for w in m.frame.worlds)


def generated_submodel(m: Model, w: str) -> Model:
    """Restriction of the model to w and its R-successors."""
    if w not in m.frame.worlds:
        raise UnknownWorldError(w)
    keep = {w} | {y for (x, y) in m.frame.R if x == w}
    frame = Frame(
        sorted(keep),
        {(x, y) for (x, y) in m.frame.R if x in keep and y in keep},
        {
            x: {(y, z) for (y, z) in m.frame.s_pairs(x) if y in keep and z in keep}
            for x in keep
        },
    )
    val = {p: frozenset(ws & keep) for p, ws in m.valuation.items()}
    return Model(frame, val)


# ---------------------------------------------------------------------------
# Labeled frames
# ---------------------------------------------------------------------------

class LabeledFrame:
    """Frame skeleton plus world labels and optional R-edge formula labels.

    No Veltman clauses are assumed; quasi-frames live here too.
    """

    def __init__(self, worlds=(), R=(), S=None, nu_world=None, nu_edge=None):
        self.worlds = sorted(worlds)
        self.R = {tuple(p) for p in R}
        self.S = {w: set(map(tuple, (S or {}).get(w, ()))) for w in self.worlds}
        self.nu_world = {w: frozenset((nu_world or {}).get(w, ())) for w in self.worlds}
        self.nu_edge = dict(nu_edge or {})
        self._version = 0

    # -- mutation API: every change bumps the version ----------------------
    def bump(self):
        self._version += 1

    @property
    def version(self):
        return self._version

    def add_world(self, w, label=frozenset()):
        if w in self.nu_world:
            raise ValueError(f"world {w!r} already present")
        self.worlds = sorted(self.worlds + [w])
        self.S[w] = set()
        self.nu_world[w] = frozenset(label)
        self.bump()

    def add_r(self, x, y):
        self.R.add((x, y))
        self.bump()

    def add_s(self, w, y, z):
        self.S.setdefault(w, set()).add((y, z))
        self.bump()

    def set_world_label(self, w, label):
        self.nu_world[w] = frozenset(label)
        self.bump()

    def set_edge_label(self, x, y, f):
        if (x, y) not in self.R:
            raise ValueError(f"edge label on a non-R pair ({x!r},{y!r})")
        self.nu_edge[(x, y)] = f
        self.bump()

    # -- views --------------------------------------------------------------
    def skeleton(self) -> Frame:
        return Frame(self.worlds, self.R, self.S)

    def s_pairs(self, w):
        return self.S.get(w, set())

    def r_succ(self, w):
        return sorted(y for (x, y) in self.R if x == w)

    def edge_labels(self):
        """Distinct edge-label formulas in print order."""
        return sorted(set(self.nu_edge.values()), key=formula_key)

    def copy(self) -> "LabeledFrame":
        return LabeledFrame(self.worlds, self.R, self.S, self.nu_world, self.nu_edge)

    def extends(self, other) -> bool:
        """Extension in the restriction sense: relations and labels of the
        smaller frame are exactly the restriction of the larger one."""
        if not set(other.worlds) <= set(self.worlds):
            return False
        old = set(other.worlds)
        if {p for p in self.R if p[0] in old and p[1] in old} != set(other.R):
            return False
        for w in other.worlds:
            mine = {p for p in self.s_pairs(w) if p[0] in old and p[1] in old}
            if mine != set(other.s_pairs(w)):
                return False
        for w in other.worlds:
            if self.nu_world[w] != other.nu_world[w]:
                return False
        mine_e = {e: f for e, f in self.nu_edge.items() if e[0] in old and e[1] in old}
        return mine_e == dict(other.nu_edge)


def induced_model(lf: LabeledFrame) -> Model:
    """The model a labeled frame induces: x forces p iff p is in its label."""
    report = validate_frame(lf.skeleton())
    if not report.ok:
        raise ValueError(f"skeleton is not an IL-frame:\n{report}")
    val = {}
    for w in lf.worlds:
        for f in lf.nu_world[w]:
            if isinstance(f, Var):
                val.setdefault(f.name, set()).add(w)
    return Model(lf.skeleton(), {p: frozenset(ws) for p, ws in val.items()})


# ---------------------------------------------------------------------------
# JSON and DOT
# ---------------------------------------------------------------------------

def labeled_frame_to_dict(lf: LabeledFrame) -> dict:
    out = {
        "worlds": list(lf.worlds),
        "R": sorted([list(p) for p in lf.R]),
        "S": {w: sorted([list(p) for p in lf.s_pairs(w)]) for w in lf.worlds},
    }
    if any(lf.nu_world.values()):
        out["nu_world"] = {
            w: sorted(print_formula(f) for f in lf.nu_world[w]) for w in lf.worlds
        }
    if lf.nu_edge:
        out["nu_edge"] = sorted(
            [[x, y, print_formula(f)] for (x, y), f in lf.nu_edge.items()]
        )
    return out


def model_to_dict(m: Model) -> dict:
    return {
        "worlds": list(m.frame.worlds),
        "R": sorted([list(p) for p in m.frame.R]),
        "S": {w: sorted([list(p) for p in m.frame.s_pairs(w)]) for w in m.frame.worlds},
        "val": {p: sorted(ws) for p, ws in sorted(m.valuation.items()) if ws},
    }


def structure_from_dict(data: dict):
    """Parse the frame/model JSON document.

    Returns (Model, LabeledFrame); "val", "nu_world" and "nu_edge" are all
    optional and absent keys mean empty.
    """
    try:
        worlds = list(data["worlds"])
        R = [tuple(p) for p in data.get("R", [])]
        S = {w: [tuple(p) for p in pairs] for w, pairs in data.get("S", {}).items()}
        val = {p: list(ws) for p, ws in data.get("val", {}).items()}
        nu_world = {
            w: [parse(s) for s in fs] for w, fs in data.get("nu_world", {}).items()
        }
        nu_edge = {(x, y): parse(s) for x, y, s in data.get("nu_edge", [])}
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed structure document: {exc}") from exc
    known = set(worlds)
    for x, y in R:
        if x not in known or y not in known:
            raise ValueError(f"R edge ({x!r},{y!r}) mentions an unknown world")
    for w in list(S) + list(nu_world):
        if w not in known:
            raise ValueError(f"unknown world {w!r}")
    lf = LabeledFrame(worlds, R, S, nu_world, nu_edge)
    model = Model(Frame(worlds, R, S), {p: frozenset(ws) for p, ws in val.items()})
    return model, lf


def load_structure(path):
    with open(path, "r", encoding="utf-8") as fh:
        return structure_from_dict(json.load(fh))


def to_dot(m: Model = None, lf: LabeledFrame = None) -> str:
    """DOT export: solid arrows for R, dashed arrows labeled w for S_w."""
    if lf is None and m is None:
        raise ValueError("nothing to export")
    frame = lf.skeleton() if lf is not None else m.frame
    lines = ["digraph veltman {"]
    for w in frame.worlds:
        props = []
        if m is not None:
            props = sorted(p for p, ws in m.valuation.items() if w in ws)
        elif lf is not None:
            props = sorted(
                f.name for f in lf.nu_world[w] if isinstance(f, Var)
            )
        label = w if not props else f"{w}\\n{','.join(props)}"
        lines.append(f'  "{w}" [label="{label}"];')
    for x, y in sorted(frame.R):
        attrs = ""
        if lf is not None and (x, y) in lf.nu_edge:
            attrs = f' [label="{print_formula(lf.nu_edge[(x, y)])}"]'
        lines.append(f'  "{x}" -> "{y}"{attrs};')
    for w in frame.worlds:
        for y, z in sorted(frame.s_pairs(w)):
            lines.append(f'  "{y}" -> "{z}" [style=dashed, label="{w}"];')
    lines.append("}")
    return "\n".join(lines)
