import random

import pytest

from conftest import CORPUS_AMBIENT, quasi_corpus, random_quasi_frame

from veltman.conditions import check_quasi_m0
from veltman.formula import Var, parse
from veltman.labels import box_subset
from veltman.model import LabeledFrame
from veltman.relations import (
    CarrierMismatch,
    Rel,
    below_rels,
    compose,
    compute_K,
    compute_K_oracle,
    critical_cone,
    derived,
    generalized_cone,
    is_conversely_well_founded,
    multi_step,
    n_cone,
    one_step,
    pure_s,
    r_rel,
    refl_trans_closure,
    trans_closure,
    union,
)
from veltman.search import FrameClass, enumerate_frames

p, q = Var("p"), Var("q")

W3 = ("a", "b", "c")


def test_basic_ops():
    r = Rel(W3, {("a", "b"), ("b", "c")})
    assert trans_closure(r).pairs == {("a", "b"), ("b", "c"), ("a", "c")}
    assert refl_trans_closure(r).pairs == trans_closure(r).pairs | {
        ("a", "a"), ("b", "b"), ("c", "c")
    }
    chain = trans_closure(r)
    assert one_step(chain).pairs == {("a", "b"), ("b", "c")}
    assert multi_step(chain).pairs == {("a", "c")}
    # one_step and multi_step partition the relation
    assert one_step(chain).pairs | multi_step(chain).pairs == chain.pairs
    assert not one_step(chain).pairs & multi_step(chain).pairs
    assert compose(r, r).pairs == {("a", "c")}
    assert union(r, Rel(W3, {("c", "a")})).pairs == r.pairs | {("c", "a")}


def test_carrier_mismatch():
    with pytest.raises(CarrierMismatch):
        compose(Rel(W3, ()), Rel(("a",), ()))
    with pytest.raises(CarrierMismatch):
        Rel(("a",), {("a", "b")})


def test_pure_s_clauses():
    # reflexive pairs never appear
    lf = LabeledFrame(["w", "x"], R={("w", "x")}, S={"w": {("x", "x")}})
    assert pure_s(lf, "w").pairs == set()
    # an S step doubled by an R step is not pure
    lf2 = LabeledFrame(
        ["w", "x", "y"],
        R={("w", "x"), ("w", "y"), ("x", "y")},
        S={"w": {("x", "y")}},
    )
    assert pure_s(lf2, "w").pairs == set()
    # with no R interleaving the step is pure
    lf3 = LabeledFrame(["w", "x", "y"], R={("w", "x"), ("w", "y")}, S={"w": {("x", "y")}})
    assert pure_s(lf3, "w").pairs == {("x", "y")}


def test_k_empty_and_transitive():
    lf = LabeledFrame(["a", "b"])
    assert compute_K(lf).pairs == set()
    lf2 = LabeledFrame(["a", "b", "c"], R={("a", "b"), ("b", "c")})
    assert compute_K(lf2).pairs == {("a", "b"), ("b", "c"), ("a", "c")}


def k_rule_frame():
    """wRx, xRy, y pure-S_w y', y'Rz: the closure rule forces xKz."""
    return LabeledFrame(
        ["u", "w", "x", "y", "yp", "z"],
        R={("w", "x"), ("x", "y"), ("w", "y"), ("w", "yp"), ("yp", "z"), ("w", "z")},
        S={"w": {("y", "yp")}},
    )


def test_k_rule_fires():
    K = compute_K(k_rule_frame())
    assert ("x", "z") in K.pairs


def test_k_matches_oracle_on_handmade():
    for lf in (k_rule_frame(), LabeledFrame(["a"]), LabeledFrame(["a", "b"], R={("a", "b")})):
        assert compute_K(lf).pairs == compute_K_oracle(lf).pairs


def test_k_matches_oracle_on_corpus(il_quasi_corpus):
    for lf in il_quasi_corpus[:60]:
        assert compute_K(lf).pairs == compute_K_oracle(lf).pairs


def test_k_is_r_on_enumerated_ilm0_frames():
    for n in (2, 3):
        for frame in enumerate_frames(n, FrameClass.ILM0):
            lf = LabeledFrame(frame.worlds, frame.R, frame.S)
            assert compute_K(lf).pairs == set(frame.R)


def test_k_calculation_lemma(m0_quasi_corpus):
    """Any admissible T (R inside its transitive closure inside K, closed
    under the one-step rule) recovers K and bounds K^1."""
    for lf in m0_quasi_corpus[:40]:
        K = compute_K(lf)
        if not is_conversely_well_founded(K):
            continue
        for T in (r_rel(lf), K, one_step(K)):
            tc = trans_closure(T)
            if not (set(lf.R) <= tc.pairs <= K.pairs):
                continue
            if not _rule_closed_under(lf, T, tc):
                continue
            assert tc.pairs == K.pairs
            for pair in one_step(K).pairs:
                assert pair in T.pairs


def _rule_closed_under(lf, T, tc):
    t1 = one_step(T).pairs
    for w in lf.worlds:
        sp = trans_closure(pure_s(lf, w)).pairs
        for x in lf.worlds:
            if (w, x) not in tc.pairs:
                continue
            for y in lf.worlds:
                if (x, y) not in t1:
                    continue
                for ypp in lf.worlds:
                    if (y, ypp) not in sp:
                        continue
                    for z in lf.worlds:
                        if (ypp, z) in t1 and (x, z) not in tc.pairs:
                            return False
    return True


def test_k_stability_under_r_perturbation(m0_quasi_corpus):
    """Extending R inside K leaves K unchanged."""
    rng = random.Random(3)
    for lf in m0_quasi_corpus[:40]:
        K = compute_K(lf)
        extra = sorted(K.pairs - set(lf.R))
        if not extra:
            continue
        lf2 = lf.copy()
        for pair in extra:
            if rng.random() < 0.6:
                lf2.add_r(*pair)
        K2 = compute_K(lf2)
        # hypotheses of the stability lemma hold by construction
        assert set(lf2.R) <= K.pairs and set(lf.R) <= K2.pairs
        assert K2.pairs == K.pairs


def test_k_subframe_stability(m0_quasi_corpus):
    """Grafting fresh worlds with no edges back into the old part leaves
    K on the old part unchanged."""
    for lf in m0_quasi_corpus[:30]:
        big = lf.copy()
        fresh = "zz"
        big.add_world(fresh)
        anchor = lf.worlds[0]
        big.add_r(anchor, fresh)
        for x, y in lf.R:
            if y == anchor:
                big.add_r(x, fresh)
        old = set(lf.worlds)
        K_old = compute_K(lf)
        K_big = compute_K(big)
        restricted = {(x, y) for (x, y) in K_big.pairs if x in old and y in old}
        if set(lf.R) <= compute_K(lf).pairs:
            assert restricted == K_old.pairs


def test_k_step_decomposition(m0_quasi_corpus):
    """xKy implies some z with box-inclusion from x and x (R u S)* z R y."""
    for lf in m0_quasi_corpus[:40]:
        K = compute_K(lf)
        s_all = set()
        for w in lf.worlds:
            s_all |= set(lf.s_pairs(w))
        mixed = refl_trans_closure(Rel(tuple(lf.worlds), s_all | set(lf.R)))
        for x, y in sorted(K.pairs):
            assert any(
                box_subset(lf.nu_world[x], lf.nu_world[z], CORPUS_AMBIENT)
                and (x, z) in mixed.pairs
                and (z, y) in lf.R
                for z in lf.worlds
            ), (x, y)


def test_cones_empty_without_edge_labels():
    lf = LabeledFrame(["a", "b"], R={("a", "b")}, S={"a": {("b", "b")}})
    assert critical_cone(lf, "a", p) == frozenset()
    assert generalized_cone(lf, "a", p) == frozenset()
    assert n_cone(lf, "a", p) == frozenset()


def test_critical_cone_inside_generalized(il_quasi_corpus):
    for lf in il_quasi_corpus:
        for x in lf.worlds:
            for f in lf.edge_labels():
                assert critical_cone(lf, x, f) <= generalized_cone(lf, x, f)


def test_cone_monotone_in_edge_labels(il_quasi_corpus):
    for lf in il_quasi_corpus[:30]:
        succ = {y for (x, y) in lf.R}
        extra = [(x, y) for (x, y) in sorted(lf.R) if (x, y) not in lf.nu_edge]
        if not extra:
            continue
        before = {
            (x, f): critical_cone(lf, x, f)
            for x in lf.worlds
            for f in lf.edge_labels()
        }
        lf2 = lf.copy()
        lf2.set_edge_label(*extra[0], q)
        for (x, f), cone in before.items():
            assert cone <= critical_cone(lf2, x, f)


def test_below_rels_definitions():
    lf = k_rule_frame()
    b1, below = below_rels(lf)
    assert ("x", "yp") in b1.pairs
    # below is reflexive by definition
    for w in lf.worlds:
        assert (w, w) in below.pairs


def test_below_corollary(m0_quasi_corpus):
    """x below y and yKz gives xKz; and below implies box inclusion."""
    for lf in m0_quasi_corpus[:40]:
        rels = derived(lf)
        for x, y in sorted(rels.below.pairs):
            for y2, z in sorted(rels.K.pairs):
                if y2 == y:
                    assert (x, z) in rels.K.pairs
            assert box_subset(lf.nu_world[x], lf.nu_world[y], CORPUS_AMBIENT)


def test_derived_cache_invalidation():
    lf = k_rule_frame()
    d1 = derived(lf)
    assert derived(lf) is d1
    lf.add_s("w", "x", "y")
    d2 = derived(lf)
    assert d2 is not d1
