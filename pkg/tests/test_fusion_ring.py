import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etale.catalogue import RING_NAMES, canonical_name, get_ring
from etale.fusion_ring import (FusionRing, automorphisms, characters, compose, cycle_notation,
                               fpdim, validate_ring)


@pytest.fixture(params=RING_NAMES)
def ring(request):
    return get_ring(request.param)


def mutated(ring, i, j, k, value):
    N = ring.N.copy()
    N[i, j, k] = value
    return FusionRing(ring.labels, N, ring.dual, ring.name)


def test_catalogue_rings_validate(ring):
    report = validate_ring(ring)
    assert report.ok, report.violations


def test_aliases():
    assert canonical_name("so52") == "so(5)_2"
    assert canonical_name("SU(3)_2") == "su(3)_2"
    with pytest.raises(KeyError):
        canonical_name("nosuchring")


def test_zeroed_entry_breaks_so52():
    ring = get_ring("so(5)_2")
    Y, X = ring.index("Y"), ring.index("X")
    report = validate_ring(mutated(ring, Y, Y, X, 0))
    assert not report.ok
    assert "associativity" in report.rules() or "frobenius_reciprocity" in report.rules()


@pytest.mark.parametrize("change,rule", [
    ((2, 2, 1, -1), "nonnegative"),
    ((2, 2, 1, 2), "multiplicity_free"),
    ((0, 2, 3, 1), "unit"),
])
def test_rule_witnesses(change, rule):
    ring = get_ring("so(5)_2")
    report = validate_ring(mutated(ring, *change))
    assert rule in report.rules()
    assert all(v.witness is not None for v in report.violations)


def test_commutativity_violation():
    ring = get_ring("Vec_Z6")
    N = ring.N.copy()
    N[1, 2], N[2, 1] = ring.N[1, 3], ring.N[2, 1]
    report = validate_ring(FusionRing(ring.labels, N, ring.dual))
    assert "commutativity" in report.rules()


def test_bad_dual():
    ring = get_ring("so(5)_2")
    report = validate_ring(FusionRing(ring.labels, ring.N, [0, 2, 1, 3, 4, 5]))
    assert not report.ok


def test_characters_are_ring_homomorphisms(ring):
    chars = characters(ring)
    assert len(chars) == ring.rank
    for ch in chars[:3]:
        for i in range(ring.rank):
            for j in range(ring.rank):
                rhs = sum((ch[k] * int(ring.N[i, j, k]) for k in range(ring.rank)), 0 * ch[0])
                assert ch[i] * ch[j] == rhs


def test_fpdims_match_perron_eigenvalues(ring):
    per, total = fpdim(ring)
    for i in range(ring.rank):
        lam = max(abs(np.linalg.eigvals(ring.N[i].astype(float))))
        assert abs(float(per[i]) - lam) < 1e-9
    assert abs(float(total) - sum(float(x) ** 2 for x in per)) < 1e-9


def test_automorphisms_form_a_group(ring):
    group = automorphisms(ring)
    gset = set(group)
    identity = tuple(range(ring.rank))
    assert identity in gset
    for p in group:
        assert all(ring.N[p[i], p[j], p[k]] == ring.N[i, j, k]
                   for i in range(ring.rank) for j in range(ring.rank) for k in range(ring.rank))
        inv = tuple(sorted(range(ring.rank), key=lambda i: p[i]))
        assert inv in gset
        for q in group:
            assert compose(p, q) in gset


def test_so52_automorphisms():
    ring = get_ring("so(5)_2")
    names = {cycle_notation(p, ring.labels) for p in automorphisms(ring)}
    assert "(Y Z)" in names and "(V W)" in names


def test_json_roundtrip(ring):
    again = FusionRing.from_dict(json.loads(ring.to_json()))
    assert again == ring and hash(again) == hash(ring)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(RING_NAMES), st.permutations(range(1, 6)))
def test_relabelled_ring_is_valid(name, rest):
    ring = get_ring(name)
    perm = (0,) + tuple(rest)
    other = ring.relabel(perm)
    assert validate_ring(other).ok
    assert other.fpdim_total() == ring.fpdim_total()
    for i in range(6):
        assert other.fpdims()[perm[i]] == ring.fpdims()[i]
