"""Fusion rings: storage, validation, characters, FP dimensions, automorphisms."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
import sympy

from .errors import RepresentationError
from .exactnum import Cyclo, compare, recognize_algebraic_integer


class FusionRing:
    """Based ring with unit at index 0.

    ``N[i, j, k]`` is the multiplicity of ``b_k`` in ``b_i * b_j`` and
    ``dual[i]`` the index of the dual object.  Objects are addressed by
    0-based index internally; ``labels`` give their display names.
    """

    def __init__(self, labels: Sequence[str], N, dual: Sequence[int], name: str = ""):
        self.labels = tuple(str(s) for s in labels)
        self.N = np.array(N, dtype=np.int64)
        self.N.setflags(write=False)
        self.dual = tuple(int(x) for x in dual)
        self.name = name

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no object labelled {label!r} in {self.name or 'ring'}") from None

    def fusion_matrix(self, i: int) -> np.ndarray:
        """Matrix (N_i)_{jk} = N_{i,j}^k."""
        return self.N[i]

    def product(self, i: int, j: int) -> list[int]:
        return [k for k in range(self.rank) if self.N[i, j, k]]

    def product_str(self, i: int, j: int) -> str:
        parts = []
        for k in range(self.rank):
            m = int(self.N[i, j, k])
            if m:
                parts.append(self.labels[k] if m == 1 else f"{m}{self.labels[k]}")
        return "+".join(parts) if parts else "0"

    def is_invertible(self, i: int) -> bool:
        return int(self.N[i, self.dual[i]].sum()) == 1

    def relabel(self, perm: Sequence[int]) -> "FusionRing":
        """Ring whose object ``perm[i]`` is the old object ``i``."""
        r = self.rank
        inv = [0] * r
        for i, p in enumerate(perm):
            inv[p] = i
        N = self.N[np.ix_(inv, inv, inv)]
        labels = [self.labels[inv[p]] for p in range(r)]
        dual = [perm[self.dual[inv[p]]] for p in range(r)]
        return FusionRing(labels, N, dual, self.name)

    def __eq__(self, other):
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self.labels == other.labels and self.dual == other.dual
                and np.array_equal(self.N, other.N))

    def __hash__(self):
        return hash((self.labels, self.dual, self.N.tobytes()))

    def __repr__(self):
        return f"FusionRing({self.name or 'unnamed'}, rank={self.rank})"

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        return {"name": self.name, "labels": list(self.labels),
                "dual": list(self.dual), "N": self.N.tolist()}

    def to_json(self) -> str:
        rows = ",\n".join("    " + json.dumps(self.N[i].tolist()) for i in range(self.rank))
        return ('{\n'
                f'  "name": {json.dumps(self.name)},\n'
                f'  "labels": {json.dumps(list(self.labels))},\n'
                f'  "dual": {json.dumps(list(self.dual))},\n'
                f'  "N": [\n{rows}\n  ]\n'
                '}\n')

    @classmethod
    def from_dict(cls, data: dict) -> "FusionRing":
        missing = {"labels", "dual", "N"} - set(data)
        if missing:
            raise ValueError(f"ring data missing fields: {sorted(missing)}")
        return cls(data["labels"], data["N"], data["dual"], data.get("name", ""))

    @classmethod
    def load(cls, path) -> "FusionRing":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    # -- derived data -----------------------------------------------------
    @cached_property
    def characters(self) -> tuple[tuple[Cyclo, ...], ...]:
        return tuple(tuple(c) for c in _characters(self))

    @cached_property
    def _fp(self) -> tuple[tuple[Cyclo, ...], Cyclo]:
        return _fpdims(self)

    def fpdims(self) -> tuple[Cyclo, ...]:
        return self._fp[0]

    def fpdim_total(self) -> Cyclo:
        return self._fp[1]


# ---------------------------------------------------------------------------
# validation

@dataclass
class Violation:
    rule: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.rule} at {self.witness}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "pass"
        return "fail:\n" + "\n".join(f"  {v}" for v in self.violations)


def validate_ring(ring: FusionRing) -> ValidationReport:
    """Check every fusion-ring axiom, collecting all violations."""
    rep = ValidationReport()
    bad = rep.violations
    N = ring.N
    r = ring.rank
    if N.shape != (r, r, r):
        bad.append(Violation("shape", N.shape, f"expected {(r, r, r)}"))
        return rep
    if len(ring.dual) != r:
        bad.append(Violation("shape", (len(ring.dual),), "dual has wrong length"))
        return rep
    if len(set(ring.labels)) != r:
        bad.append(Violation("labels", ring.labels, "labels not distinct"))
    if (N < 0).any():
        i, j, k = map(int, np.argwhere(N < 0)[0])
        bad.append(Violation("nonnegative", (i, j, k)))
    if (N > 1).any():
        i, j, k = map(int, np.argwhere(N > 1)[0])
        bad.append(Violation("multiplicity_free", (i, j, k), f"N = {int(N[i, j, k])}"))
    eye = np.eye(r, dtype=N.dtype)
    for j in range(r):
        if not np.array_equal(N[0, j], eye[j]):
            bad.append(Violation("unit", (0, j)))
        if not np.array_equal(N[j, 0], eye[j]):
            bad.append(Violation("unit", (j, 0)))
    for i, j, k in np.argwhere(N != N.transpose(1, 0, 2)):
        if i < j:
            bad.append(Violation("commutativity", (int(i), int(j), int(k))))
    d = ring.dual
    if any(not 0 <= x < r for x in d):
        bad.append(Violation("involution", tuple(d), "dual index out of range"))
        return rep
    for i in range(r):
        if d[d[i]] != i:
            bad.append(Violation("involution", (i,)))
    if d[0] != 0:
        bad.append(Violation("dual_unit", (0,)))
    for i in range(r):
        for j in range(r):
            want = 1 if j == d[i] else 0
            if N[i, j, 0] != want:
                bad.append(Violation("duality", (i, j), f"N_ij^1 = {int(N[i, j, 0])}, expected {want}"))
    # associativity: sum_m N_ij^m N_mk^l == sum_m N_jk^m N_im^l
    left = np.einsum("ijm,mkl->ijkl", N, N)
    right = np.einsum("jkm,iml->ijkl", N, N)
    for i, j, k, l in np.argwhere(left != right)[:20]:
        bad.append(Violation("associativity", (int(i), int(j), int(k), int(l))))
    # Frobenius reciprocity N_ij^k = N_{i*,k}^j
    for i in range(r):
        for j in range(r):
            for k in range(r):
                if N[i, j, k] != N[d[i], k, j]:
                    bad.append(Violation("frobenius_reciprocity", (i, j, k)))
    return rep


# ---------------------------------------------------------------------------
# characters and FP dimensions

def _charpoly_factors(matrix: np.ndarray) -> list[list[int]]:
    """Irreducible integer factors of the characteristic polynomial."""
    x = sympy.Symbol("x")
    cp = sympy.Matrix(matrix.tolist()).charpoly(x).as_expr()
    out = []
    for fac, _ in sympy.factor_list(cp)[1]:
        coeffs = [int(c) for c in sympy.Poly(fac, x).all_coeffs()]
        if coeffs[0] < 0:
            coeffs = [-c for c in coeffs]
        out.append(coeffs)
    return out


def _closest_factor(factors: list[list[int]], value: complex) -> list[int]:
    def err(coeffs):
        scale = max(1.0, abs(value)) ** (len(coeffs) - 1)
        return abs(np.polyval(np.array(coeffs, dtype=complex), value)) / scale
    return min(factors, key=err)


def _characters(ring: FusionRing) -> list[list[Cyclo]]:
    r = ring.rank
    rng = np.random.default_rng(12345)
    weights = rng.integers(1, 1000, size=r).astype(float)
    M = np.tensordot(weights, ring.N.astype(float), axes=1)
    vals, vecs = np.linalg.eig(M)
    order = np.argsort(-np.abs(vals) + 1e-9 * np.angle(vals))
    chars = []
    factors = [None] + [_charpoly_factors(ring.N[i]) for i in range(1, r)]
    for col in order:
        v = vecs[:, col]
        v = v / v[0]
        row = []
        for i in range(r):
            if i == 0:
                row.append(Cyclo.rational(1))
                continue
            coeffs = _closest_factor(factors[i], v[i])
            row.append(recognize_algebraic_integer(complex(v[i]), coeffs))
        for i in range(r):
            for j in range(i, r):
                rhs = sum((row[k] * int(ring.N[i, j, k]) for k in range(r) if ring.N[i, j, k]),
                          Cyclo.rational(0))
                if row[i] * row[j] != rhs:
                    raise RepresentationError(
                        f"recognized character fails the fusion rule at ({i},{j})")
        chars.append(row)
    if len({tuple(c) for c in chars}) != r:
        raise RepresentationError("characters are not distinct; ring may not be semisimple")
    return chars


def _fpdims(ring: FusionRing) -> tuple[tuple[Cyclo, ...], Cyclo]:
    out = []
    for i in range(ring.rank):
        best = None
        for ch in ring.characters:
            x = ch[i]
            if not x.is_real():
                continue
            if best is None or compare(x, best) > 0:
                best = x
        out.append(best)
    total = sum((x * x for x in out), Cyclo.rational(0))
    return tuple(out), total


def characters(ring: FusionRing) -> list[tuple[Cyclo, ...]]:
    """All complex characters of a commutative fusion ring, exactly."""
    return list(ring.characters)


def fpdim(ring: FusionRing) -> tuple[tuple[Cyclo, ...], Cyclo]:
    """Per-object Frobenius-Perron dimensions and their squared sum."""
    return ring.fpdims(), ring.fpdim_total()


# ---------------------------------------------------------------------------
# automorphisms

def automorphisms(ring: FusionRing) -> list[tuple[int, ...]]:
    """All permutations p fixing the unit with N[p i, p j, p k] = N[i, j, k].

    Searched by backtracking; objects may only map to objects of equal
    FP dimension.  Returned sorted, identity first.
    """
    r = ring.rank
    fp = ring.fpdims()
    N = ring.N
    result = []
    perm = [-1] * r
    used = [False] * r
    perm[0] = 0
    used[0] = True

    def consistent(upto: int) -> bool:
        i = upto
        pi = perm[i]
        if perm[ring.dual[i]] not in (-1, ring.dual[pi]):
            return False
        for j in range(i + 1):
            for k in range(i + 1):
                pj, pk = perm[j], perm[k]
                if N[i, j, k] != N[pi, pj, pk] or N[j, i, k] != N[pj, pi, pk] \
                        or N[j, k, i] != N[pj, pk, pi]:
                    return False
        return True

    def extend(i: int):
        if i == r:
            result.append(tuple(perm))
            return
        for t in range(1, r):
            if used[t] or fp[t] != fp[i]:
                continue
            perm[i] = t
            used[t] = True
            if consistent(i):
                extend(i + 1)
            used[t] = False
            perm[i] = -1

    if r == 1:
        return [(0,)]
    extend(1)
    return sorted(result)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p o q)(i) = p[q[i]]."""
    return tuple(p[x] for x in q)


def cycle_notation(perm: Sequence[int], labels: Sequence[str]) -> str:
    seen, cycles = set(), []
    for s in range(len(perm)):
        if s in seen or perm[s] == s:
            seen.add(s)
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(labels[x])
            x = perm[x]
        cycles.append("(" + " ".join(cyc) + ")")
    return "".join(cycles) or "id"
