"""The eight multiplicity-free rank-6 modular fusion rings and their published data.

Ring tensors ship as JSON files under ``data/rings``.  The quantum-dimension
solutions and conformal-dimension lists below are transcribed in the order
they are printed in the literature, so "5th character, 2nd conformal vector"
refers to the same datum here and there.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction as F
from functools import lru_cache
from importlib import resources

from .exactnum import Cyclo, sin_ratio, sqrt_int
from .fusion_ring import FusionRing

RING_NAMES = (
    "Vec_Z6", "Z2xIsing", "su(3)_2", "TriCritIsing",
    "su(2)_5", "so(5)_2", "Fibxpsu(2)_5", "psu(2)_11",
)

_FILES = {name: re.sub(r"[()]", "", name) + ".json" for name in RING_NAMES}

_ALIASES = {
    "vecz6": "Vec_Z6", "z6": "Vec_Z6",
    "z2xising": "Z2xIsing", "vecz2ising": "Z2xIsing", "z2ising": "Z2xIsing",
    "su32": "su(3)_2", "fibxvecz3": "su(3)_2",
    "tricritising": "TriCritIsing", "tricrit": "TriCritIsing",
    "su25": "su(2)_5", "vecz2xpsu25": "su(2)_5",
    "so52": "so(5)_2",
    "fibxpsu25": "Fibxpsu(2)_5", "fibpsu25": "Fibxpsu(2)_5",
    "psu211": "psu(2)_11",
}


def canonical_name(name: str) -> str:
    """Resolve a ring name or alias; raises KeyError for unknown names."""
    if name in _FILES:
        return name
    key = re.sub(r"[^a-z0-9]", "", name.lower())
    if key in _ALIASES:
        return _ALIASES[key]
    for n in RING_NAMES:
        if re.sub(r"[^a-z0-9]", "", n.lower()) == key:
            return n
    raise KeyError(f"unknown ring {name!r}; known: {', '.join(RING_NAMES)}")


@lru_cache(maxsize=None)
def get_ring(name: str) -> FusionRing:
    name = canonical_name(name)
    text = resources.files("etale").joinpath("data", "rings", _FILES[name]).read_text("utf-8")
    return FusionRing.from_dict(json.loads(text))


def catalogue() -> dict[str, FusionRing]:
    return {name: get_ring(name) for name in RING_NAMES}


# ---------------------------------------------------------------------------
# exact scalars used in the published tables

def _c(x) -> Cyclo:
    return Cyclo.coerce(x)


def _golden() -> Cyclo:
    return (1 + sqrt_int(5)) * F(1, 2)


def _s(a: int, n: int) -> Cyclo:
    """sin(a pi/n) / sin(pi/n)."""
    return sin_ratio(a, 1, n)


def _sc(a: int, n: int, b: int) -> Cyclo:
    """sin(a pi/n) / cos(b pi/(2n))."""
    return sin_ratio(2 * a, n - b, 2 * n)


def _vec(*xs) -> tuple[Cyclo, ...]:
    return (Cyclo.rational(1),) + tuple(_c(x) for x in xs)


def _h(*xs) -> tuple[F, ...]:
    return (F(0),) + tuple(F(x) % 1 for x in xs)


@lru_cache(maxsize=None)
def published_characters(name: str) -> tuple[tuple[Cyclo, ...], ...]:
    """Quantum-dimension solutions in printed order, unit entry included."""
    name = canonical_name(name)
    r2 = sqrt_int(2)
    zeta = _golden()
    zinv = zeta - 1
    if name == "Vec_Z6":
        return (_vec(-1, -1, -1, 1, 1), _vec(1, 1, 1, 1, 1))
    if name == "Z2xIsing":
        return (_vec(1, 1, 1, r2, r2), _vec(-1, -1, 1, r2, -r2),
                _vec(-1, -1, 1, -r2, r2), _vec(1, 1, 1, -r2, -r2))
    if name == "su(3)_2":
        return (_vec(1, 1, -zinv, -zinv, -zinv), _vec(1, 1, zeta, zeta, zeta))
    if name == "TriCritIsing":
        minus = (1 - sqrt_int(5)) * F(1, 2)
        w_minus = (sqrt_int(10) - r2) * F(1, 2)      # sqrt(3 - sqrt 5)
        w_plus = (sqrt_int(10) + r2) * F(1, 2)       # sqrt(3 + sqrt 5)
        return (_vec(1, r2, minus, minus, -w_minus), _vec(1, -r2, minus, minus, w_minus),
                _vec(1, r2, zeta, zeta, w_plus), _vec(1, -r2, zeta, zeta, -w_plus))
    if name == "su(2)_5":
        A = lambda k: _sc(k, 7, 1)
        B = lambda k: _sc(k, 7, 3)
        s = lambda k: _s(k, 7)
        return (_vec(-1, A(1), -A(1), -A(2), A(2)), _vec(1, A(1), A(1), -A(2), -A(2)),
                _vec(-1, -B(3), B(3), B(1), -B(1)), _vec(1, -B(3), -B(3), B(1), B(1)),
                _vec(-1, s(2), -s(2), s(3), -s(3)), _vec(1, s(2), s(2), s(3), s(3)))
    if name == "so(5)_2":
        r5 = sqrt_int(5)
        return (_vec(1, 2, 2, -r5, -r5), _vec(1, 2, 2, r5, r5))
    if name == "Fibxpsu(2)_5":
        A = lambda k: _sc(k, 7, 1)
        B = lambda k: _sc(k, 7, 3)
        s = lambda k: _s(k, 7)
        return (
            _vec(-zinv, A(1), -A(2), -zinv * A(1), zinv * A(2)),
            _vec(-zinv, -B(3), B(1), zinv * B(3), -zinv * B(1)),
            _vec(-zinv, s(5), s(3), -zinv * s(5), -zinv * s(3)),
            _vec(zeta, A(1), -A(2), zeta * A(1), -zeta * A(2)),
            _vec(zeta, -B(3), B(1), -zeta * B(3), zeta * B(1)),
            _vec(zeta, s(5), s(3), zeta * s(5), zeta * s(3)),
        )
    if name == "psu(2)_11":
        def row(b, signed):
            return _vec(*[(1 if k > 0 else -1) * _sc(abs(k), 13, b) for k in signed])
        return (
            row(1, (-1, -5, 2, 4, -3)),
            row(3, (3, -2, -6, -1, 4)),
            row(5, (-5, 1, 3, -6, 2)),
            row(7, (6, 4, 1, -2, -5)),
            row(9, (-4, 6, -5, 3, -1)),
            _vec(*[_s(k, 13) for k in (11, 3, 9, 5, 7)]),
        )
    raise KeyError(name)


def _hs(text: str) -> list[tuple[F, ...]]:
    """Parse 'a/b,c/d,...; ...' into conformal vectors."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append(_h(*[F(t) for t in chunk.split(",")]))
    return out


_Z6 = "1/4,7/12,7/12,1/3,1/3; 1/4,11/12,11/12,2/3,2/3; 3/4,1/12,1/12,1/3,1/3; 3/4,5/12,5/12,2/3,2/3"
_ISING8 = ("1/4,3/4,1/2,1/16,5/16; 1/4,3/4,1/2,1/16,13/16; 1/4,3/4,1/2,3/16,7/16; "
           "1/4,3/4,1/2,3/16,15/16; 1/4,3/4,1/2,5/16,9/16; 1/4,3/4,1/2,7/16,11/16; "
           "1/4,3/4,1/2,9/16,13/16; 1/4,3/4,1/2,11/16,15/16")
_ISING16 = _ISING8 + ("; 1/4,3/4,1/2,5/16,1/16; 1/4,3/4,1/2,13/16,1/16; 1/4,3/4,1/2,7/16,3/16; "
                      "1/4,3/4,1/2,15/16,3/16; 1/4,3/4,1/2,9/16,5/16; 1/4,3/4,1/2,11/16,7/16; "
                      "1/4,3/4,1/2,13/16,9/16; 1/4,3/4,1/2,15/16,11/16")
_SU32_A = "1/3,1/3,1/5,8/15,8/15; 1/3,1/3,4/5,2/15,2/15; 2/3,2/3,1/5,13/15,13/15; 2/3,2/3,4/5,7/15,7/15"
_SU32_B = "1/3,1/3,2/5,11/15,11/15; 1/3,1/3,3/5,14/15,14/15; 2/3,2/3,2/5,1/15,1/15; 2/3,2/3,3/5,4/15,4/15"
_TRI_PLUS = ("1/2,1/16,9/10,2/5,37/80; 1/2,1/16,1/10,3/5,53/80; 1/2,3/16,9/10,2/5,47/80; "
             "1/2,3/16,1/10,3/5,63/80; 1/2,5/16,9/10,2/5,57/80; 1/2,5/16,1/10,3/5,73/80; "
             "1/2,7/16,9/10,2/5,67/80; 1/2,7/16,1/10,3/5,3/80; 1/2,9/16,9/10,2/5,77/80; "
             "1/2,9/16,1/10,3/5,13/80; 1/2,11/16,9/10,2/5,7/80; 1/2,11/16,1/10,3/5,23/80; "
             "1/2,13/16,9/10,2/5,17/80; 1/2,13/16,1/10,3/5,33/80; 1/2,15/16,9/10,2/5,27/80; "
             "1/2,15/16,1/10,3/5,43/80")
_TRI_MINUS = ("1/2,1/16,7/10,1/5,21/80; 1/2,1/16,3/10,4/5,69/80; 1/2,3/16,7/10,1/5,31/80; "
              "1/2,3/16,3/10,4/5,79/80; 1/2,5/16,7/10,1/5,41/80; 1/2,5/16,3/10,4/5,9/80; "
              "1/2,7/16,7/10,1/5,51/80; 1/2,7/16,3/10,4/5,19/80; 1/2,9/16,7/10,1/5,61/80; "
              "1/2,9/16,3/10,4/5,29/80; 1/2,11/16,7/10,1/5,71/80; 1/2,11/16,3/10,4/5,39/80; "
              "1/2,13/16,7/10,1/5,1/80; 1/2,13/16,3/10,4/5,49/80; 1/2,15/16,7/10,1/5,11/80; "
              "1/2,15/16,3/10,4/5,59/80")
_SU25 = (
    "1/4,3/7,19/28,1/7,11/28; 1/4,4/7,23/28,6/7,3/28; 3/4,3/7,5/28,1/7,25/28; 3/4,4/7,9/28,6/7,17/28",
    "1/4,2/7,15/28,3/7,19/28; 1/4,5/7,27/28,4/7,23/28; 3/4,2/7,1/28,3/7,5/28; 3/4,5/7,13/28,4/7,9/28",
    "1/4,1/7,11/28,5/7,27/28; 1/4,6/7,3/28,2/7,15/28; 3/4,1/7,25/28,5/7,13/28; 3/4,6/7,17/28,2/7,1/28",
)
_SO52 = "0,1/5,4/5,0,1/2; 0,1/5,4/5,1/4,3/4; 0,2/5,3/5,0,1/2; 0,2/5,3/5,1/4,3/4"
_FIBPSU = (
    "1/5,3/7,1/7,22/35,12/35; 1/5,4/7,6/7,27/35,2/35; 4/5,3/7,1/7,8/35,33/35; 4/5,4/7,6/7,13/35,23/35",
    "1/5,2/7,3/7,17/35,22/35; 1/5,5/7,4/7,32/35,27/35; 4/5,2/7,3/7,3/35,8/35; 4/5,5/7,4/7,18/35,13/35",
    "1/5,1/7,5/7,12/35,32/35; 1/5,6/7,2/7,2/35,17/35; 4/5,1/7,5/7,33/35,18/35; 4/5,6/7,2/7,23/35,3/35",
    "2/5,3/7,1/7,29/35,19/35; 2/5,4/7,6/7,34/35,9/35; 3/5,3/7,1/7,1/35,26/35; 3/5,4/7,6/7,6/35,16/35",
    "2/5,2/7,3/7,24/35,29/35; 2/5,5/7,4/7,4/35,34/35; 3/5,2/7,3/7,31/35,1/35; 3/5,5/7,4/7,11/35,6/35",
    "2/5,1/7,5/7,19/35,4/35; 2/5,6/7,2/7,9/35,24/35; 3/5,1/7,5/7,26/35,11/35; 3/5,6/7,2/7,16/35,31/35",
)
_PSU211 = (
    "2/13,1/13,10/13,3/13,6/13; 11/13,12/13,3/13,10/13,7/13",
    "6/13,3/13,4/13,9/13,5/13; 7/13,10/13,9/13,4/13,8/13",
    "3/13,8/13,2/13,11/13,9/13; 10/13,5/13,11/13,2/13,4/13",
    "1/13,7/13,5/13,8/13,3/13; 12/13,6/13,8/13,5/13,10/13",
    "5/13,9/13,12/13,1/13,2/13; 8/13,4/13,1/13,12/13,11/13",
    "4/13,2/13,7/13,6/13,12/13; 9/13,11/13,6/13,7/13,1/13",
)


@lru_cache(maxsize=None)
def published_conformal(name: str) -> tuple[tuple[tuple[F, ...], ...], ...]:
    """Conformal-dimension lists, one list per published character."""
    name = canonical_name(name)
    if name == "Vec_Z6":
        per = [_Z6, _Z6]
    elif name == "Z2xIsing":
        per = [_ISING8, _ISING16, _ISING16, _ISING8]
    elif name == "su(3)_2":
        per = [_SU32_A, _SU32_B]
    elif name == "TriCritIsing":
        per = [_TRI_MINUS, _TRI_MINUS, _TRI_PLUS, _TRI_PLUS]
    elif name == "su(2)_5":
        per = [_SU25[0], _SU25[0], _SU25[1], _SU25[1], _SU25[2], _SU25[2]]
    elif name == "so(5)_2":
        per = [_SO52, _SO52]
    elif name == "Fibxpsu(2)_5":
        per = list(_FIBPSU)
    elif name == "psu(2)_11":
        per = list(_PSU211)
    else:
        raise KeyError(name)
    return tuple(tuple(_hs(t)) for t in per)


def published_mfcs(name: str) -> list[tuple[int, int, int]]:
    """Enumerate (character, conformal, sign) triples in printed order.

    Indices are 0-based; ``sign`` is +1 or -1 for the categorical dimension.
    This is the numbering used by ``--md`` on the command line.
    """
    out = []
    for ci, hs in enumerate(published_conformal(name)):
        for hi in range(len(hs)):
            for sgn in (1, -1):
                out.append((ci, hi, sgn))
    return out


def published_modular_data(name: str, index: int):
    """Modular data of the index-th (0-based) published MFC on a ring."""
    from .modular_data import build_modular_data
    name = canonical_name(name)
    mfcs = published_mfcs(name)
    if not 0 <= index < len(mfcs):
        raise IndexError(f"{name} has {len(mfcs)} published MFCs")
    ci, hi, sgn = mfcs[index]
    d = published_characters(name)[ci]
    h = published_conformal(name)[ci][hi]
    return build_modular_data(get_ring(name), d, h, sgn)



def modular_data_to_dict(md, ring_name: str | None = None) -> dict:
    """File form of modular data: ring name (or inline ring), d, h and dSign."""
    from .exactnum import format_scalar
    ring = ring_name if ring_name is not None else json.loads(md.ring.to_json())
    return {
        "ring": ring,
        "d": [format_scalar(x, approx=False) for x in md.d],
        "h": [str(x) for x in md.h],
        "dSign": md.sign,
    }


def modular_data_from_dict(data: dict):
    from .exactnum import parse_scalar
    from .modular_data import build_modular_data
    missing = {"ring", "d", "h"} - set(data)
    if missing:
        raise ValueError(f"modular data missing fields: {sorted(missing)}")
    ring = data["ring"]
    ring = get_ring(ring) if isinstance(ring, str) else FusionRing.from_dict(ring)
    d = [parse_scalar(str(x)) for x in data["d"]]
    h = [F(str(x)) for x in data["h"]]
    return build_modular_data(ring, d, h, int(data.get("dSign", 1)))


def load_modular_data(path):
    with open(path, encoding="utf-8") as fh:
        return modular_data_from_dict(json.load(fh))


# totals printed alongside each ring
PUBLISHED_MFC_COUNTS = {
    "Vec_Z6": (16, "2(quantum dimensions)x4(conformal dimensions)x2(categorical dimensions)=16"),
    "Z2xIsing": (96, "16+16+32+32=96"),
    "su(3)_2": (16, "2(quantum dimensions)x4(conformal dimensions)x2(categorical dimensions)=16"),
    "TriCritIsing": (128, "4(quantum dimensions)x16(conformal dimensions)x2(categorical dimensions)=128"),
    "su(2)_5": (48, "6(quantum dimensions)x4(conformal dimensions)x2(categorical dimensions)=48"),
    "so(5)_2": (16, "2(quantum dimensions)x4(conformal dimensions)x2(categorical dimensions)=16"),
    "Fibxpsu(2)_5": (48, "6(quantum dimensions)x4(conformal dimensions)x2(categorical dimensions)=48"),
    "psu(2)_11": (24, "6(quantum dimensions)x2(conformal dimensions)x2(categorical dimensions)=24"),
}

PUBLISHED_CANDIDATE_COUNTS = {
    "Vec_Z6": 6, "Z2xIsing": 6, "su(3)_2": 9, "TriCritIsing": 10,
    "su(2)_5": 12, "so(5)_2": 12, "Fibxpsu(2)_5": 94, "psu(2)_11": 14,
}

# candidate lists printed for each ring (n_X, n_Y, n_Z, n_V, n_W); the
# Fib x psu(2)_5 list is only given by its size
PUBLISHED_CANDIDATES = {
    "Vec_Z6": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
               (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)],
    "Z2xIsing": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                 (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)],
    "su(3)_2": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                (0, 0, 0, 1, 0), (0, 0, 0, 0, 1), (1, 1, 0, 0, 0), (2, 0, 0, 0, 0),
                (0, 2, 0, 0, 0)],
    "TriCritIsing": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                     (0, 0, 0, 1, 0), (0, 0, 0, 0, 1), (1, 1, 0, 0, 0), (1, 0, 1, 0, 0),
                     (1, 0, 0, 1, 0), (2, 0, 0, 0, 0)],
    "su(2)_5": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (2, 0, 0, 0, 0), (3, 0, 0, 0, 0),
                (1, 1, 0, 0, 0), (1, 0, 1, 0, 0), (1, 0, 0, 1, 0), (1, 0, 0, 0, 1),
                (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)],
    "so(5)_2": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (2, 0, 0, 0, 0), (3, 0, 0, 0, 0),
                (1, 1, 0, 0, 0), (1, 0, 1, 0, 0), (1, 0, 0, 1, 0), (1, 0, 0, 0, 1),
                (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)],
    "psu(2)_11": [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (2, 0, 0, 0, 0), (3, 0, 0, 0, 0),
                  (1, 1, 0, 0, 0), (1, 0, 1, 0, 0), (1, 0, 0, 1, 0), (1, 0, 0, 0, 1),
                  (0, 1, 0, 0, 0), (0, 2, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 1, 0, 0),
                  (0, 0, 0, 1, 1), (0, 0, 0, 0, 1)],
}

# nontrivial etale algebras found per ring, as multiplicity vectors
PUBLISHED_ETALE = {name: [(0, 0, 0, 0, 0)] for name in RING_NAMES}
PUBLISHED_ETALE["so(5)_2"] = [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0)]

# result tables: (A, B_A, rank(B_A), Lagrangian?) identical for every MFC on a ring
PUBLISHED_TABLES = {name: [("1", "B", 6, False)] for name in RING_NAMES}
PUBLISHED_TABLES["so(5)_2"] = [("1", "B", 6, False), ("1+X", "TY(Z/5Z)", 6, False)]

# completely anisotropic column of the overview table
PUBLISHED_ANISOTROPIC = {name: name != "so(5)_2" for name in RING_NAMES}

DEFAULT_DENOM_BOUNDS = {
    "Vec_Z6": 12, "Z2xIsing": 16, "su(3)_2": 15, "TriCritIsing": 80,
    "su(2)_5": 28, "so(5)_2": 20, "Fibxpsu(2)_5": 35, "psu(2)_11": 26,
}

# the six-dimensional module over so(5)_2 for A = 1+X, rows/cols m1..m6
SO52_NIMREP = {
    "1": [[1 if i == j else 0 for j in range(6)] for i in range(6)],
    "X": [[1 if i == j else 0 for j in range(6)] for i in range(6)],
    "Y": [[0, 0, 0, 1, 1, 0], [0, 0, 1, 0, 1, 0], [0, 1, 0, 1, 0, 0],
          [1, 0, 1, 0, 0, 0], [1, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 2]],
    "Z": [[0, 1, 1, 0, 0, 0], [1, 0, 0, 1, 0, 0], [1, 0, 0, 0, 1, 0],
          [0, 1, 0, 0, 1, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 0, 2]],
    "V": [[0, 0, 0, 0, 0, 1]] * 5 + [[1, 1, 1, 1, 1, 0]],
    "W": [[0, 0, 0, 0, 0, 1]] * 5 + [[1, 1, 1, 1, 1, 0]],
}
