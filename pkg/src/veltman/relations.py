"""Derived relations over (labeled) frames.

Everything here is a set-theoretic definition computed by naive saturation;
carriers are a handful of worlds, so determinism beats asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Formula, formula_key
from .labels import box_subset
from .model import LabeledFrame


class CarrierMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Rel:
    carrier: tuple
    pairs: frozenset

    def __init__(self, carrier, pairs=()):
        carrier = tuple(sorted(carrier))
        pairs = frozenset(tuple(p) for p in pairs)
        cs = set(carrier)
        if not all(x in cs and y in cs for x, y in pairs):
            raise CarrierMismatch("pairs leave the carrier")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "pairs", pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def succ(self, x):
        return sorted(y for (a, y) in self.pairs if a == x)


def _same_carrier(a: Rel, b: Rel):
    if a.carrier != b.carrier:
        raise CarrierMismatch(f"{a.carrier} vs {b.carrier}")


def trans_closure(r: Rel) -> Rel:
    pairs = set(r.pairs)
    changed = True
    while changed:
        changed = False
        new = {(x, z) for (x, y) in pairs for (y2, z) in pairs if y == y2}
        if not new <= pairs:
            pairs |= new
            changed = True
    return Rel(r.carrier, pairs)


def refl_trans_closure(r: Rel) -> Rel:
    t = trans_closure(r)
    return Rel(r.carrier, t.pairs | {(x, x) for x in r.carrier})


def compose(r: Rel, r2: Rel) -> Rel:
    _same_carrier(r, r2)
    return Rel(
        r.carrier, {(x, z) for (x, y) in r.pairs for (y2, z) in r2.pairs if y == y2}
    )


def union(r: Rel, r2: Rel) -> Rel:
    _same_carrier(r, r2)
    return Rel(r.carrier, r.pairs | r2.pairs)


def one_step(r: Rel) -> Rel:
    """T^1: pairs of T with no interpolant, xTy and no t with xTtTy."""
    out = set()
    for x, y in r.pairs:
        if not any((x, t) in r.pairs and (t, y) in r.pairs for t in r.carrier):
            out.add((x, y))
    return Rel(r.carrier, out)


def multi_step(r: Rel) -> Rel:
    """T^{>=2} = T minus T^1; together they partition T."""
    return Rel(r.carrier, r.pairs - one_step(r).pairs)


def is_conversely_well_founded(r: Rel) -> bool:
    return not any((x, x) in trans_closure(r).pairs for x in r.carrier)


# ---------------------------------------------------------------------------
# Frame-derived relations
# ---------------------------------------------------------------------------

def r_rel(lf: LabeledFrame) -> Rel:
    return Rel(lf.worlds, lf.R)


def s_rel(lf: LabeledFrame, w) -> Rel:
    return Rel(lf.worlds, lf.s_pairs(w))


def s_any_rel(lf: LabeledFrame) -> Rel:
    pairs = set()
    for w in lf.worlds:
        pairs |= set(lf.s_pairs(w))
    return Rel(lf.worlds, pairs)


def pure_s(lf: LabeledFrame, w) -> Rel:
    """S-breve_w: S_w transitions with no hidden R interleaving.

    x S-breve_w y iff xS_wy, x != y, and not x (S_w u R)*;R;(S_w u R)* y.
    """
    sw = s_rel(lf, w)
    mixed = refl_trans_closure(union(sw, r_rel(lf)))
    tainted = compose(compose(mixed, r_rel(lf)), mixed)
    return Rel(
        lf.worlds,
        {(x, y) for (x, y) in sw.pairs if x != y and (x, y) not in tainted.pairs},
    )


def compute_K(lf: LabeledFrame) -> Rel:
    """Least transitive extension of R closed under the rule

        wKx, xK^1y, y (S-breve_w)^tr y', y'K^1z  =>  xKz

    computed by saturation to a fixpoint.  The pure-S relations depend only
    on the frame, not on K, so only K^1 is recomputed per round.
    """
    spure = {w: trans_closure(pure_s(lf, w)).pairs for w in lf.worlds}
    k = set(trans_closure(r_rel(lf)).pairs)
    while True:
        k1 = one_step(Rel(lf.worlds, k)).pairs
        new = set()
        for w in lf.worlds:
            for x in lf.worlds:
                if (w, x) not in k:
                    continue
                for y in lf.worlds:
                    if (x, y) not in k1:
                        continue
                    for yp in lf.worlds:
                        if (y, yp) not in spure[w]:
                            continue
                        for z in lf.worlds:
                            if (yp, z) in k1 and (x, z) not in k:
                                new.add((x, z))
        if not new:
            return Rel(lf.worlds, k)
        k |= new
        k = set(trans_closure(Rel(lf.worlds, k)).pairs)


def _rule3_closed(pairs, worlds, spure) -> bool:
    rel = Rel(worlds, pairs)
    k1 = one_step(rel).pairs
    for w in worlds:
        for x in worlds:
            if (w, x) not in pairs:
                continue
            for y in worlds:
                if (x, y) not in k1:
                    continue
                for yp in worlds:
                    if (y, yp) not in spure[w]:
                        continue
                    for z in worlds:
                        if (yp, z) in k1 and (x, z) not in pairs:
                            return False
    return True


def _is_transitive(pairs) -> bool:
    return all(
        (x, z) in pairs for (x, y) in pairs for (y2, z) in pairs if y == y2
    )


def _transitive_closure_mask(rel, n, rowmask):
    rows = [(rel >> (k * n)) & rowmask for k in range(n)]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            m = rows[x]
            acc = m
            while m:
                y = (m & -m).bit_length() - 1
                acc |= rows[y]
                m &= m - 1
            if acc != rows[x]:
                rows[x] = acc
                changed = True
    out = 0
    for x in range(n):
        out |= rows[x] << (x * n)
    return out


def compute_K_oracle(lf: LabeledFrame, max_candidates=2_000_000) -> Rel:
    """Brute-force K: enumerate every relation containing R that has the
    three closure properties, and intersect them all.

    Candidates are the conversely well-founded case, i.e. transitive
    irreflexive supersets of the transitive closure of R (reflexive padding
    is excluded: a loop at y' erases the one-step fact y'K^1z, making
    arbitrarily bloated relations vacuously "closed" under the non-monotone
    third rule and the intersection degenerate).  The supersets are
    enumerated directly (decide each remaining pair in or out, propagating
    transitive closure and pruning when the closure resurrects an excluded
    pair or a loop), the third closure rule is checked on each, and the
    survivors are intersected.
    """
    worlds = lf.worlds
    n = len(worlds)
    idx = {w: i for i, w in enumerate(worlds)}
    rowmask = (1 << n) - 1
    spure = {w: trans_closure(pure_s(lf, w)).pairs for w in worlds}
    base = 0
    for x, y in trans_closure(r_rel(lf)).pairs:
        base |= 1 << (idx[x] * n + idx[y])
    diagonal = 0
    for x in range(n):
        diagonal |= 1 << (x * n + x)
    if base & diagonal:
        raise ValueError("R has a cycle; K is not conversely well-founded here")
    free = [
        1 << (x * n + y)
        for x in range(n)
        for y in range(n)
        if x != y and not base >> (x * n + y) & 1
    ]
    candidates = []

    def rec(i, rel, excluded):
        if len(candidates) > max_candidates:
            raise ValueError("oracle candidate budget exceeded")
        if i == len(free):
            candidates.append(rel)
            return
        bit = free[i]
        if rel & bit:
            rec(i + 1, rel, excluded)
            return
        rec(i + 1, rel, excluded | bit)
        closed = _transitive_closure_mask(rel | bit, n, rowmask)
        if not closed & (excluded | diagonal):
            rec(i + 1, closed, excluded)

    rec(0, base, 0)
    meet = None
    for rel in candidates:
        if meet is not None and meet & ~rel == 0:
            continue  # cannot shrink the intersection
        pairs = {
            (worlds[x], worlds[y])
            for x in range(n)
            for y in range(n)
            if rel >> (x * n + y) & 1
        }
        if not _rule3_closed(pairs, worlds, spure):
            continue
        meet = rel if meet is None else meet & rel
    if meet is None:
        raise ValueError("no closed relation found (cannot happen on finite carriers)")
    pairs = {
        (worlds[x], worlds[y])
        for x in range(n)
        for y in range(n)
        if meet >> (x * n + y) & 1
    }
    return Rel(worlds, pairs)


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

def _seed(lf, x, c):
    return {y for ((a, y), f) in lf.nu_edge.items() if a == x and f == c}


def _adjacency(*pair_sets):
    out = {}
    for pairs in pair_sets:
        for a, b in pairs:
            out.setdefault(a, set()).add(b)
    return out


def _reach(seed, adj):
    cone = set(seed)
    todo = list(seed)
    while todo:
        a = todo.pop()
        for b in adj.get(a, ()):
            if b not in cone:
                cone.add(b)
                todo.append(b)
    return frozenset(cone)


def critical_cone(lf: LabeledFrame, x, c: Formula) -> frozenset:
    """Least set seeded by the C-labeled edges out of x and closed under
    S_x- and R-successors."""
    return _reach(_seed(lf, x, c), _adjacency(lf.s_pairs(x), lf.R))


def generalized_cone(lf: LabeledFrame, x, c: Formula) -> frozenset:
    """Critical cone closed further under S_w-successors for arbitrary w."""
    adj = _adjacency(lf.R, *(lf.s_pairs(w) for w in lf.worlds))
    return _reach(critical_cone(lf, x, c), adj)


def n_cone(lf: LabeledFrame, w, c: Formula, K: Rel = None) -> frozenset:
    """Predicted critical cone: seeded like the critical cone, closed under
    K- and S_w-successors."""
    if K is None:
        K = compute_K(lf)
    return _reach(_seed(lf, w, c), _adjacency(K.pairs, lf.s_pairs(w)))


# ---------------------------------------------------------------------------
# The below orderings and the derived-relations cache
# ---------------------------------------------------------------------------

def below_rels(lf: LabeledFrame, K: Rel = None):
    """The pair (below1, below).

    x below1 y iff for some w, y': wKx, xK^1y', y' (S-breve_w)^tr y.
    below is the reflexive-transitive closure of below1 united with K.
    """
    if K is None:
        K = compute_K(lf)
    k1 = one_step(K).pairs
    below1 = set()
    for w in lf.worlds:
        sp = trans_closure(pure_s(lf, w)).pairs
        for x in lf.worlds:
            if (w, x) not in K.pairs:
                continue
            for yp in lf.worlds:
                if (x, yp) not in k1:
                    continue
                for y in lf.worlds:
                    if (yp, y) in sp:
                        below1.add((x, y))
    b1 = Rel(lf.worlds, below1)
    below = refl_trans_closure(union(b1, K))
    return b1, below


@dataclass
class DerivedRelations:
    K: Rel
    pureS: dict  # world -> Rel
    below1: Rel
    below: Rel

    def n_cone(self, lf, w, c):
        return n_cone(lf, w, c, self.K)


def derived(lf: LabeledFrame) -> DerivedRelations:
    """Compute (and cache per frame version) the derived relations."""
    cached = getattr(lf, "_derived_cache", None)
    if cached is not None and cached[0] == lf.version:
        return cached[1]
    K = compute_K(lf)
    pure = {w: pure_s(lf, w) for w in lf.worlds}
    b1, below = below_rels(lf, K)
    out = DerivedRelations(K, pure, b1, below)
    lf._derived_cache = (lf.version, out)
    return out


def box_max_of(labels, ambient):
    """The box-inclusion maximum of a list of labels, or None if absent."""
    for cand in labels:
        if all(box_subset(other, cand, ambient) for other in labels):
            return cand
    return None
