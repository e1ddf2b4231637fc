"""Imperfection elimination: closing quasi-frames to adequate frames.

Each step picks the least imperfection under a fixed deterministic order
(kind first, then the lexicographic world tuple) and adds the one pair its
case dictates; pairs are never removed, so the loop terminates.  The result
is independent of the order, which tests exercise with shuffled picks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conditions import (
    check_adequate,
    check_adequate_m0,
    check_adequate_wstar,
    check_quasi_frame,
    check_quasi_m0,
    check_quasi_wstar,
)
from .model import LabeledFrame, ValidationReport, Violation, validate_frame
from .relations import compute_K, critical_cone, generalized_cone, n_cone


class NotQuasiError(ValueError):
    def __init__(self, kind, report):
        super().__init__(f"input is not a {kind}:\n{report}")
        self.report = report


class ClosureBug(AssertionError):
    pass


# Imperfection kinds, in priority order.
MISSING_R_TRANS = 1      # aRbRc without aRc            -> add aRc
MISSING_S_REFL = 2       # aRb without bS_ab            -> add bS_ab
MISSING_S_TRANS = 3      # bS_a c S_a d without bS_ad   -> add bS_ad
MISSING_INCLUSION = 4    # aRbRc without bS_ac          -> add aRc and bS_ac
MISSING_M0 = 5           # wRaRbS_w b'Rc without aRc    -> add aRc


@dataclass(frozen=True)
class Imperfection:
    kind: int
    worlds: tuple

    def sort_key(self):
        return (self.kind, self.worlds)


def _imperfections(lf: LabeledFrame, with_m0: bool):
    """All current imperfections, in the canonical order."""
    out = []
    R = lf.R
    for a, b in R:
        for b2, c in R:
            if b2 != b:
                continue
            if (a, c) not in R:
                out.append(Imperfection(MISSING_R_TRANS, (a, b, c)))
            if (b, c) not in lf.s_pairs(a):
                out.append(Imperfection(MISSING_INCLUSION, (a, b, c)))
    for a, b in R:
        if (b, b) not in lf.s_pairs(a):
            out.append(Imperfection(MISSING_S_REFL, (a, b)))
    for a in lf.worlds:
        sa = lf.s_pairs(a)
        for b, c in sa:
            for c2, d in sa:
                if c2 == c and (b, d) not in sa:
                    out.append(Imperfection(MISSING_S_TRANS, (a, b, c, d)))
    if with_m0:
        for w, a in R:
            for a2, b in R:
                if a2 != a:
                    continue
                for b2, bp in lf.s_pairs(w):
                    if b2 != b:
                        continue
                    for bp2, c in R:
                        if bp2 == bp and (a, c) not in R:
                            out.append(Imperfection(MISSING_M0, (w, a, b, bp, c)))
    return sorted(out, key=Imperfection.sort_key)


def _apply(lf: LabeledFrame, imp: Imperfection):
    if imp.kind == MISSING_R_TRANS:
        a, b, c = imp.worlds
        lf.add_r(a, c)
    elif imp.kind == MISSING_S_REFL:
        a, b = imp.worlds
        lf.add_s(a, b, b)
    elif imp.kind == MISSING_S_TRANS:
        a, b, c, d = imp.worlds
        lf.add_s(a, b, d)
    elif imp.kind == MISSING_INCLUSION:
        a, b, c = imp.worlds
        if (a, c) not in lf.R:
            lf.add_r(a, c)
        lf.add_s(a, b, c)
    else:
        w, a, b, bp, c = imp.worlds
        lf.add_r(a, c)


def _run(lf: LabeledFrame, with_m0: bool, debug, recheck, rng):
    steps = 0
    limit = len(lf.worlds) ** 2 * (len(lf.worlds) + 2) + len(lf.worlds) ** 3 + 16
    while True:
        imps = _imperfections(lf, with_m0)
        if not imps:
            return lf
        imp = imps[0] if rng is None else rng.choice(imps)
        _apply(lf, imp)
        steps += 1
        if steps > limit:
            raise ClosureBug("closure failed to terminate within the pair budget")
        if debug and recheck is not None:
            rep = recheck(lf)
            if not rep.ok:
                raise ClosureBug(
                    f"step {steps} ({imp}) broke quasi-ness:\n{rep}"
                )


def il_close(g: LabeledFrame, debug=False, rng=None) -> LabeledFrame:
    """Minimal adequate extension of a quasi-frame (same carrier)."""
    rep = check_quasi_frame(g)
    if not rep.ok:
        raise NotQuasiError("quasi-frame", rep)
    out = _run(g.copy(), False, debug, check_quasi_frame, rng)
    final = check_adequate(out)
    if not final.ok:
        raise ClosureBug(f"closure output is not adequate:\n{final}")
    return out


def m0_close(g: LabeledFrame, debug=False, rng=None) -> LabeledFrame:
    """Extension of a quasi ILM0-frame to an adequate ILM0-frame; the K
    relation and the predicted cones stay fixed across the run."""
    rep = check_quasi_m0(g)
    if not rep.ok:
        raise NotQuasiError("quasi-ILM0-frame", rep)
    k_before = compute_K(g) if debug else None
    out = _run(g.copy(), True, debug, check_quasi_m0, rng)
    final = check_adequate_m0(out)
    if not final.ok:
        raise ClosureBug(f"closure output is not an adequate ILM0-frame:\n{final}")
    if debug and compute_K(out).pairs != k_before.pairs:
        raise ClosureBug("K changed across the ILM0 closure")
    return out


def wstar_close(g: LabeledFrame, adequate_set, debug=False, rng=None) -> LabeledFrame:
    """ILM0 closure run on a quasi ILW*-frame; the strict box-gain clause
    survives because K and the pure chains are invariant."""
    rep = check_quasi_wstar(g, adequate_set)
    if not rep.ok:
        raise NotQuasiError("quasi-ILW*-frame", rep)
    out = _run(g.copy(), True, debug, check_quasi_m0, rng)
    final = check_adequate_wstar(out, adequate_set)
    if not final.ok:
        raise ClosureBug(f"closure output is not an adequate ILW*-frame:\n{final}")
    return out


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------

def horn_close(g: LabeledFrame, with_m0=False) -> LabeledFrame:
    """Least model of the closure rules, by order-free simultaneous
    saturation.  The closure rules are definite Horn clauses over R- and
    S-facts, so this least model equals the intersection of all closed
    extensions on the same carrier; il_close must coincide with it.
    """
    lf = g.copy()
    changed = True
    while changed:
        changed = False
        addR = set()
        addS = set()
        R = lf.R
        for a, b in R:
            for b2, c in R:
                if b2 != b:
                    continue
                if (a, c) not in R:
                    addR.add((a, c))
                if (b, c) not in lf.s_pairs(a):
                    addS.add((a, b, c))
        for a, b in R:
            if (b, b) not in lf.s_pairs(a):
                addS.add((a, b, b))
        for a in lf.worlds:
            sa = lf.s_pairs(a)
            for b, c in sa:
                for c2, d in sa:
                    if c2 == c and (b, d) not in sa:
                        addS.add((a, b, d))
        if with_m0:
            for w, a in R:
                for a2, b in R:
                    if a2 != a:
                        continue
                    for b2, bp in lf.s_pairs(w):
                        if b2 != b:
                            continue
                        for bp2, c in R:
                            if bp2 == bp and (a, c) not in R:
                                addR.add((a, c))
        for a, c in addR:
            lf.add_r(a, c)
            changed = True
        for a, b, c in addS:
            lf.add_s(a, b, c)
            changed = True
    return lf


def intersection_oracle(g: LabeledFrame, max_free_bits=16) -> LabeledFrame:
    """Literal enumerate-and-intersect oracle for tiny inputs: intersect
    every adequate IL-frame on the same carrier extending g."""
    worlds = list(g.worlds)
    r_free = [
        (x, y)
        for x in worlds
        for y in worlds
        if x != y and (x, y) not in g.R
    ]
    s_free = [
        (w, y, z)
        for w in worlds
        for y in worlds
        for z in worlds
        if y != w and z != w and (y, z) not in g.s_pairs(w)
    ]
    bits = len(r_free) + len(s_free)
    if bits > max_free_bits:
        raise ValueError(f"{bits} free bits exceeds the oracle budget")
    meet_r = None
    meet_s = None
    for mask in range(1 << bits):
        cand = g.copy()
        for i, (x, y) in enumerate(r_free):
            if mask >> i & 1:
                cand.add_r(x, y)
        for j, (w, y, z) in enumerate(s_free):
            if mask >> (len(r_free) + j) & 1:
                cand.add_s(w, y, z)
        if not check_adequate(cand).ok:
            continue
        rset = frozenset(cand.R)
        sset = frozenset(
            (w, y, z) for w in worlds for (y, z) in cand.s_pairs(w)
        )
        meet_r = rset if meet_r is None else meet_r & rset
        meet_s = sset if meet_s is None else meet_s & sset
    if meet_r is None:
        raise ValueError("no adequate extension exists (input not quasi?)")
    out = g.copy()
    for x, y in sorted(meet_r - frozenset(g.R)):
        out.add_r(x, y)
    for w, y, z in sorted(meet_s):
        if (y, z) not in out.s_pairs(w):
            out.add_s(w, y, z)
    return out


def cones_snapshot(lf: LabeledFrame):
    """Critical and generalized cones for every (world, edge label) pair."""
    labels = lf.edge_labels()
    return {
        (x, f): (critical_cone(lf, x, f), generalized_cone(lf, x, f))
        for x in lf.worlds
        for f in labels
    }


def ncones_snapshot(lf: LabeledFrame):
    from .relations import compute_K

    K = compute_K(lf)
    labels = lf.edge_labels()
    return {
        (w, f): n_cone(lf, w, f, K) for w in lf.worlds for f in labels
    }
