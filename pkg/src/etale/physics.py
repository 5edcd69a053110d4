"""Gapped-phase consequences of a module category and realization matching.

A B-symmetric gapped phase described by a module category M has one vacuum
per simple module, so GSD = rank(M).  An object c is spontaneously broken
when it moves some vacuum: c |> m is not isomorphic to m for some m.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .catalogue import RING_NAMES, get_ring, published_characters, published_conformal
from .condensation import NimRep
from .exactnum import Cyclo, parse_scalar
from .fusion_ring import FusionRing


@dataclass(frozen=True)
class BrokenObject:
    obj: int
    module: int          # a module moved by obj
    image: tuple[int, ...]


@dataclass(frozen=True)
class GappedPhaseReport:
    gsd: int
    broken: tuple[BrokenObject, ...]

    @property
    def module_rank(self) -> int:
        return self.gsd

    @property
    def broken_objects(self) -> list[int]:
        return [b.obj for b in self.broken]

    @property
    def ssb(self) -> bool:
        return bool(self.broken)


def gapped_phase_report(nimrep: NimRep, ring: FusionRing) -> GappedPhaseReport:
    """GSD and broken objects read off the NIM-rep rows."""
    n = nimrep.target_rank
    broken = []
    for c in range(ring.rank):
        M = nimrep.matrix(c)
        for m in range(n):
            row = M[m]
            if not (row[m] == 1 and row.sum() == 1):
                broken.append(BrokenObject(c, m, tuple(int(x) for x in row)))
                break
    return GappedPhaseReport(n, tuple(broken))


@dataclass(frozen=True)
class RealizationMatch:
    source: str
    ring: str
    character: int       # 0-based position in the published list
    conformal: int       # 0-based position in that character's list
    mapping: tuple[int, ...]   # mapping[j] = input position matched to object j

    def pairs(self, ring_labels: Sequence[str], input_labels: Sequence[str]) -> list[tuple[str, str]]:
        return [(ring_labels[j], input_labels[p]) for j, p in enumerate(self.mapping)]


def match_realization(dims: Sequence, hs: Sequence, pool: Iterable[str] | None = None,
                      source: str = "") -> RealizationMatch | None:
    """First (ring, character, conformal vector, bijection) matching d exactly
    and h mod 1, in catalogue order; None if nothing matches."""
    if len(dims) != len(hs):
        raise ValueError("dims and h lists differ in length")
    d_in = [Cyclo.coerce(x) if not isinstance(x, Cyclo) else x for x in dims]
    h_in = [Fraction(x) % 1 for x in hs]
    r = len(d_in)
    if r == 1:
        if d_in[0] == 1 and h_in[0] == 0:
            return RealizationMatch(source, "Vec", 0, 0, (0,))
        return None
    for name in (pool if pool is not None else RING_NAMES):
        ring = get_ring(name)
        if ring.rank != r:
            continue
        for ci, d in enumerate(published_characters(name)):
            for hi, h in enumerate(published_conformal(name)[ci]):
                hit = _bijection(d, [Fraction(x) % 1 for x in h], d_in, h_in)
                if hit is not None:
                    return RealizationMatch(source, name, ci, hi, hit)
    return None


def _bijection(d, h, d_in, h_in) -> tuple[int, ...] | None:
    r = len(d)
    options = [[p for p in range(r) if h_in[p] == h[j] and d_in[p] == d[j]] for j in range(r)]
    if any(not o for o in options):
        return None
    for choice in itertools.product(*options):
        if len(set(choice)) == r:
            return tuple(choice)
    return None


@dataclass(frozen=True)
class RealizationData:
    source: str
    labels: tuple[str, ...]
    dims: tuple[Cyclo, ...]
    h: tuple[Fraction, ...]


def load_realization(path=None, name: str | None = None) -> RealizationData:
    """Read a realization file from disk, or a bundled one by file name."""
    if name is not None:
        text = resources.files("etale").joinpath("data", "fixtures", name).read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    dims = tuple(parse_scalar(str(x)) for x in data["dims"])
    h = tuple(Fraction(str(x)) for x in data["h"])
    labels = tuple(data.get("labels") or [f"#{k + 1}" for k in range(len(dims))])
    return RealizationData(data.get("source", ""), labels, dims, h)


BUNDLED_REALIZATIONS = ("M7_15_phi51.json", "M7_13_phi12.json")
