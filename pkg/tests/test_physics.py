import json
from fractions import Fraction as F

import numpy as np
import pytest

from etale.catalogue import RING_NAMES, SO52_NIMREP, get_ring, published_modular_data
from etale.condensation import condense, find_nimreps, make_nimrep
from etale.etale_classifier import make_candidate, parse_algebra
from etale.exactnum import Cyclo
from etale.physics import (BUNDLED_REALIZATIONS, gapped_phase_report, load_realization,
                           match_realization)

EXPECTED = {
    "M7_15_phi51.json": ("su(2)_5", 4, 1),
    "M7_13_phi12.json": ("psu(2)_11", 0, 0),
}

PAIRS = {
    "M7_15_phi51.json": [("1", "L_{1,1}"), ("X", "L_{1,6}"), ("Y", "L_{1,5}"),
                         ("Z", "L_{1,2}"), ("V", "L_{1,3}"), ("W", "L_{1,4}")],
    "M7_13_phi12.json": [("1", "L_{1,1}"), ("X", "L_{11,1}"), ("Y", "L_{3,1}"),
                         ("Z", "L_{9,1}"), ("V", "L_{5,1}"), ("W", "L_{7,1}")],
}


def independent_broken(mats):
    """Objects with some module not mapped to itself alone."""
    out = []
    for c, M in enumerate(mats):
        M = np.array(M)
        if not np.array_equal(M, np.eye(len(M), dtype=M.dtype)):
            out.append(c)
    return out


@pytest.mark.parametrize("name", RING_NAMES)
def test_trivial_algebra_phase(name):
    ring = get_ring(name)
    (rep,) = find_nimreps(ring, make_candidate(ring, (1, 0, 0, 0, 0, 0)), 6)
    rep_report = gapped_phase_report(rep, ring)
    assert rep_report.gsd == 6
    assert rep_report.ssb
    assert rep_report.broken_objects == [1, 2, 3, 4, 5]
    assert rep_report.broken_objects == independent_broken(rep.matrices)


def test_so52_phase_witnesses():
    ring = get_ring("so(5)_2")
    rep = make_nimrep([SO52_NIMREP[lab] for lab in ring.labels])
    report = gapped_phase_report(rep, ring)
    assert report.gsd == 6
    assert [ring.labels[c] for c in report.broken_objects] == ["Y", "Z", "V", "W"]
    for b in report.broken:
        row = np.array(SO52_NIMREP[ring.labels[b.obj]][b.module])
        assert tuple(row) == b.image
        assert not (row[b.module] == 1 and row.sum() == 1)


def test_so52_condensed_phase():
    md = published_modular_data("so(5)_2", 0)
    res = condense(md, parse_algebra(md.ring, "1+X"))
    report = gapped_phase_report(res.nimrep, md.ring)
    assert report.gsd == res.module_rank == 6
    assert report.broken_objects == independent_broken(res.nimrep.matrices)


@pytest.mark.parametrize("fname", BUNDLED_REALIZATIONS)
def test_bundled_realizations(fname):
    data = load_realization(name=fname)
    hit = match_realization(data.dims, data.h, source=data.source)
    assert (hit.ring, hit.character, hit.conformal) == EXPECTED[fname]
    assert hit.pairs(get_ring(hit.ring).labels, data.labels) == PAIRS[fname]


@pytest.mark.parametrize("fname", BUNDLED_REALIZATIONS)
def test_perturbed_realization_has_no_match(fname):
    data = load_realization(name=fname)
    h = list(data.h)
    h[2] += F(1, 100)
    assert match_realization(data.dims, h) is None
    d = list(data.dims)
    d[2] = d[2] + 1
    assert match_realization(d, data.h) is None


def test_match_is_order_independent():
    data = load_realization(name="M7_13_phi12.json")
    perm = [0, 3, 1, 5, 2, 4]
    hit = match_realization([data.dims[p] for p in perm], [data.h[p] for p in perm])
    assert hit.ring == "psu(2)_11"
    assert [perm[p] for p in hit.mapping] == [0, 1, 2, 3, 4, 5]


def test_load_realization_from_path(tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"source": "Ising", "dims": ["1", "1", "sqrt(2)"],
                                "h": ["0", "1/2", "1/16"]}))
    data = load_realization(path)
    assert data.labels == ("#1", "#2", "#3")
    assert data.dims[2] * data.dims[2] == 2
    assert match_realization(data.dims, data.h) is None


def test_length_mismatch():
    with pytest.raises(ValueError):
        match_realization([Cyclo.rational(1)], [0, 0])
