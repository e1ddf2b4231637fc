"""Shared corpus builders: deterministic random structures used across the
suite and by the acceptance criteria."""

import random

import pytest

from veltman.formula import (
    BOT,
    Box,
    Implies,
    Neg,
    Rhd,
    Var,
    adequate_closure,
    formula_key,
    parse,
)
from veltman.labels import (
    atoms_of,
    box_gain_pool,
    extend_ambient,
    holds,
    label_crit,
    label_prec,
    saturate,
)
from veltman.model import Frame, LabeledFrame, Model
from veltman.relations import critical_cone

P, Q, R3 = Var("p"), Var("q"), Var("r")

CORPUS_SET = adequate_closure({parse("p |> q"), parse("[]p"), parse("[]q")})
CORPUS_AMBIENT = extend_ambient(CORPUS_SET)


def all_corpus_labels():
    from veltman.labels import saturated_labels

    return list(saturated_labels(CORPUS_AMBIENT))


_LABELS = None


def corpus_labels():
    global _LABELS
    if _LABELS is None:
        _LABELS = all_corpus_labels()
    return _LABELS


def random_strict_order(rng, n):
    """Random transitive irreflexive R over worlds named by index."""
    worlds = [str(i) for i in range(n)]
    order = list(worlds)
    rng.shuffle(order)
    rank = {w: i for i, w in enumerate(order)}
    edges = set()
    for x in worlds:
        for y in worlds:
            if rank[x] < rank[y] and rng.random() < 0.4:
                edges.add((x, y))
    changed = True
    while changed:
        changed = False
        new = {(x, z) for (x, y) in edges for (y2, z) in edges if y == y2}
        if not new <= edges:
            edges |= new
            changed = True
    return worlds, edges


def random_il_frame(rng, max_worlds=5) -> Frame:
    """Random frame satisfying all six Veltman clauses."""
    n = rng.randint(1, max_worlds)
    worlds, edges = random_strict_order(rng, n)
    S = {}
    for w in worlds:
        sub = [y for (x, y) in edges if x == w]
        pairs = {(y, y) for y in sub}
        pairs |= {(y, z) for y in sub for z in sub if (y, z) in edges}
        for y in sub:
            for z in sub:
                if rng.random() < 0.25:
                    pairs.add((y, z))
        changed = True
        while changed:
            changed = False
            new = {(a, c) for (a, b) in pairs for (b2, c) in pairs if b == b2}
            if not new <= pairs:
                pairs |= new
                changed = True
        S[w] = pairs
    return Frame(worlds, edges, S)


def random_model(rng, max_worlds=5) -> Model:
    frame = random_il_frame(rng, max_worlds)
    val = {}
    for name in ("p", "q", "r"):
        val[name] = frozenset(w for w in frame.worlds if rng.random() < 0.5)
    return Model(frame, val)


def random_labeled_structure(rng, max_worlds=5) -> LabeledFrame:
    """IL-frame skeleton with arbitrary saturated labels (no coherence)."""
    frame = random_il_frame(rng, max_worlds)
    labels = corpus_labels()
    nu = {w: rng.choice(labels) for w in frame.worlds}
    return LabeledFrame(frame.worlds, frame.R, frame.S, nu)


def random_formula(rng, depth=4):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([P, Q, R3, BOT])
    kind = rng.randrange(5)
    if kind == 0:
        return Implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    if kind == 1:
        return Box(random_formula(rng, depth - 1))
    if kind == 2:
        return Rhd(random_formula(rng, depth - 1), random_formula(rng, depth - 1))
    if kind == 3:
        return Neg(random_formula(rng, depth - 1))
    return rng.choice(
        [
            Implies(random_formula(rng, depth - 1), BOT),
            Box(random_formula(rng, depth - 1)),
        ]
    )


def _label_options(lf, y, want_gain, ambient):
    """Saturated labels admissible at world y given the labels already
    assigned below: successor coherence, cone criticality, and (optionally)
    a strict box gain over every R-predecessor."""
    pool = corpus_labels()
    preds = [x for (x, yy) in lf.R if yy == y and lf.nu_world.get(x)]
    cones = []
    for (x, _yy), f in lf.nu_edge.items():
        if lf.nu_world.get(x) and y in critical_cone(lf, x, f):
            cones.append((x, f))
    gains = sorted(box_gain_pool(CORPUS_SET), key=formula_key)
    out = []
    for cand in pool:
        if any(not label_prec(lf.nu_world[x], cand, ambient) for x in preds):
            continue
        if any(
            not label_crit(lf.nu_world[x], cand, f, ambient) for (x, f) in cones
        ):
            continue
        if want_gain and any(
            not any(
                holds(cand, g, ambient) and not holds(lf.nu_world[x], g, ambient)
                for g in gains
            )
            for x in preds
        ):
            continue
        out.append(cand)
    return out


def random_quasi_edges(rng, n, rate=0.45):
    """Random acyclic (not necessarily transitive) edge set; closure work
    for the worklist is real."""
    worlds = [str(i) for i in range(n)]
    order = list(worlds)
    rng.shuffle(order)
    rank = {w: i for i, w in enumerate(order)}
    edges = {
        (x, y)
        for x in worlds
        for y in worlds
        if rank[x] < rank[y] and rng.random() < rate
    }
    return worlds, edges


def _reachable(edges, x, y):
    todo, seen = [x], set()
    while todo:
        a = todo.pop()
        for (s, t) in edges:
            if s == a and t not in seen:
                if t == y:
                    return True
                seen.add(t)
                todo.append(t)
    return False


def random_quasi_frame(rng, max_worlds=5, with_gain=True, edge_label_rate=0.6):
    """Random quasi-frame: coherent labels along R and inside cones, sparse
    S over R-reachable pairs, at most one labeled edge per source.  Returns
    None on a dead end (caller retries)."""
    n = rng.randint(1, max_worlds)
    worlds, edges = random_quasi_edges(rng, n)
    S = {}
    for w in worlds:
        sub = [y for y in worlds if (w, y) in edges]
        pairs = set()
        for y in sub:
            for z in sub:
                if rng.random() < 0.3:
                    pairs.add((y, z))
        S[w] = pairs
    lf = LabeledFrame(worlds, edges, S)
    lf.nu_world = {w: None for w in worlds}
    for x in worlds:
        out_edges = sorted(y for (a, y) in edges if a == x)
        if out_edges and rng.random() < edge_label_rate:
            lf.nu_edge[(x, rng.choice(out_edges))] = rng.choice([P, Q])
    order = sorted(worlds, key=lambda w: (sum(1 for (a, b) in edges if b == w), w))
    for y in order:
        options = _label_options(lf, y, with_gain, CORPUS_AMBIENT)
        if not options:
            return None
        # bias towards box-light labels so gains stay available deeper down
        options.sort(key=lambda lab: (sum(1 for f in lab if isinstance(f, Box)),))
        lf.nu_world[y] = rng.choice(options[: max(4, len(options) // 3)])
    lf.nu_world = {w: frozenset(v) for w, v in lf.nu_world.items()}
    return LabeledFrame(lf.worlds, lf.R, lf.S, lf.nu_world, lf.nu_edge)


def quasi_corpus(seed=2024, count=100, max_worlds=5, require=None):
    """Deterministic corpus of random quasi-frames passing `require`."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > count * 400:
            raise RuntimeError("corpus generation starved")
        lf = random_quasi_frame(rng, max_worlds)
        if lf is None:
            continue
        if require is not None and not require(lf):
            continue
        out.append(lf)
    return out


def mk_label(decisions):
    """Saturated corpus label from a {formula-text: bool} atom decision."""
    decided = {}
    for atom in atoms_of(CORPUS_AMBIENT):
        decided[atom] = bool(decisions.get(formula_key(atom), False))
    return saturate(CORPUS_AMBIENT, decided)


@pytest.fixture(scope="session")
def il_quasi_corpus():
    from veltman.conditions import check_quasi_frame

    return quasi_corpus(seed=11, count=100, require=lambda lf: check_quasi_frame(lf).ok)


@pytest.fixture(scope="session")
def m0_quasi_corpus():
    from veltman.conditions import check_quasi_m0

    return quasi_corpus(
        seed=23, count=100, max_worlds=4, require=lambda lf: check_quasi_m0(lf).ok
    )
