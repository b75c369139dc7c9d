import json

import pytest

import oracles
import sunadalab as sl
from sunadalab import gassmann as gs
from sunadalab.errors import BudgetExceededError, PreconditionError


def test_class_counts_sum_to_order(s4):
    for H in sl.all_subgroups(s4):
        counts = gs.class_intersection_counts(s4, H)
        assert sum(counts) == H.order
        assert counts[0] == 1  # the identity is in every subgroup


def test_class_counts_match_bruteforce(d4):
    elems = {e.images for e in d4.elements}
    for H in sl.all_subgroups(d4):
        sub = {p.images for p in H.permutations()}
        got = gs.class_intersection_counts(d4, H)
        assert got == oracles.class_counts(elems, sub)


def test_conjugate_subgroups_are_almost_conjugate(s4):
    a = sl.subgroup_generate(s4, [s4.index_of(sl.parse_cycles("(0 1)", 4))])
    b = sl.subgroup_generate(s4, [s4.index_of(sl.parse_cycles("(2 3)", 4))])
    assert sl.are_conjugate_subgroups(s4, a, b)
    assert gs.almost_conjugate(s4, a, b)


def test_classical_pair(aff8_triple):
    G, h1, h2 = aff8_triple
    assert gs.almost_conjugate(G, h1, h2)
    assert gs.representation_equivalent(G, h1, h2)
    assert not sl.are_conjugate_subgroups(G, h1, h2)


def test_both_routes_agree_on_s3_pairs(s3):
    subs = sl.all_subgroups(s3)
    for i, a in enumerate(subs):
        for b in subs[i + 1 :]:
            assert gs.almost_conjugate(s3, a, b) == gs.representation_equivalent(
                s3, a, b
            )


def test_k_equivalence_weakens(s3):
    A3 = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1 2)", 3))])
    T = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1)", 3))])
    triv = sl.subgroup_generate(s3, [])
    whole = sl.subgroup_from_indices(s3, range(6))
    # different coset representations, hence not equivalent at K = {e}
    assert not gs.k_equivalent(s3, A3, T, triv)
    assert gs.k_equivalent(s3, A3, T, triv) == gs.representation_equivalent(s3, A3, T)
    # at K = A3 they still differ through the sign character
    assert not gs.k_equivalent(s3, A3, T, A3)
    # at K = G only the trivial character is visible, where both contain it once
    assert gs.k_equivalent(s3, A3, T, whole)


def test_triple_report_schema(aff8_triple):
    G, h1, h2 = aff8_triple
    rep = gs.triple_report(G, h1, h2)
    d = rep.to_json_dict()
    assert set(d) == {
        "group_order",
        "subgroup_order",
        "class_counts_h1",
        "class_counts_h2",
        "almost_conjugate",
        "conjugate",
        "perm_char",
    }
    assert d["group_order"] == 32
    assert d["subgroup_order"] == 4
    assert d["class_counts_h1"] == d["class_counts_h2"]
    assert d["almost_conjugate"] is True
    assert d["conjugate"] is False
    assert d["perm_char"][0] == 8  # index of H in G
    assert json.dumps(d)  # JSON-serializable as is


def test_triple_report_rejects_unequal_orders(s3):
    A3 = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1 2)", 3))])
    T = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1)", 3))])
    with pytest.raises(PreconditionError):
        gs.triple_report(s3, A3, T)


def test_search_finds_the_16_pairs(aff8, aff8_triple):
    _, h1, h2 = aff8_triple
    pairs = gs.gassmann_search(aff8, 4)
    assert len(pairs) == 16
    keys = {frozenset((a.elements, b.elements)) for a, b in pairs}
    assert frozenset((h1.elements, h2.elements)) in keys
    for a, b in pairs:
        assert gs.almost_conjugate(aff8, a, b)
        assert not sl.are_conjugate_subgroups(aff8, a, b)


def test_search_s3_has_no_nonconjugate_pairs(s3):
    assert gs.gassmann_search(s3, 2) == []
    assert gs.gassmann_search(s3, 3) == []


def test_search_keeps_conjugate_pairs_on_request(s4):
    strict = gs.gassmann_search(s4, 2, require_nonconjugate=True)
    loose = gs.gassmann_search(s4, 2, require_nonconjugate=False)
    assert len(loose) > len(strict)
    assert set((a.elements, b.elements) for a, b in strict) <= set(
        (a.elements, b.elements) for a, b in loose
    )


def test_search_orbit_dedup(aff8):
    full = gs.gassmann_search(aff8, 4)
    deduped = gs.gassmann_search(aff8, 4, dedup_conjugate_orbits=True)
    assert 1 <= len(deduped) <= len(full)
    kept = set((a.elements, b.elements) for a, b in deduped)
    assert kept <= set((a.elements, b.elements) for a, b in full)
    # each dropped pair must be a simultaneous conjugate of a kept pair
    from sunadalab.permgrp import conjugate_subgroup

    for a, b in full:
        hit = False
        for g in range(aff8.order):
            ca = conjugate_subgroup(aff8, a, g).elements
            cb = conjugate_subgroup(aff8, b, g).elements
            if (ca, cb) in kept or (cb, ca) in kept:
                hit = True
                break
        assert hit


def test_search_budget(aff8):
    with pytest.raises(BudgetExceededError):
        gs.gassmann_search(aff8, 4, budget=3)


def test_induced_multiplicities_dimension(s4):
    ct = sl.character_table(s4)
    for H in sl.all_subgroups(s4):
        mult = gs.induced_multiplicities(s4, H, ct)
        dim = sum(m * d for m, d in zip(mult, ct.degrees))
        assert dim == s4.order // H.order
