"""Connected etale algebra candidates and the filters that decide them.

A candidate is A = 1 + sum_j n_j b_j.  Since the local modules of a
connected etale algebra form a modular category of FP dimension
FPdim(B)/FPdim(A)^2 >= 1, candidates are bounded by FPdim(A)^2 <= FPdim(B).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .exactnum import Cyclo, compare
from .fusion_ring import FusionRing
from .modular_data import ModularData

TRIVIAL = "TrivialEtale"
CERTIFIED = "EtaleCertified"
RULED_OUT = "RuledOut"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class AlgebraCandidate:
    """Multiplicity vector over all simple objects; n[0] == 1."""
    n: tuple[int, ...]
    fpdim: Cyclo

    @property
    def support(self) -> list[int]:
        return [j for j, m in enumerate(self.n) if m]

    def is_trivial(self) -> bool:
        return not any(self.n[1:])

    def label(self, labels: Sequence[str]) -> str:
        parts = []
        for j, m in enumerate(self.n):
            if m:
                parts.append(labels[j] if m == 1 else f"{m}{labels[j]}")
        return "+".join(parts)


@dataclass
class RuleResult:
    passed: bool
    rule: str = ""
    witness: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.passed


@dataclass
class ClassificationVerdict:
    candidate: AlgebraCandidate
    status: str
    reasons: list[RuleResult] = field(default_factory=list)
    dyslectic_fpdim: Cyclo | None = None
    lagrangian: bool = False

    @property
    def is_etale(self) -> bool:
        return self.status in (TRIVIAL, CERTIFIED)


def make_candidate(ring: FusionRing, n: Sequence[int]) -> AlgebraCandidate:
    n = tuple(int(x) for x in n)
    if len(n) == ring.rank - 1:
        n = (1,) + n
    if len(n) != ring.rank or n[0] != 1 or min(n) < 0:
        raise ValueError("candidate needs n_1 = 1 and one natural per object")
    fp = ring.fpdims()
    total = sum((fp[j] * n[j] for j in range(ring.rank) if n[j]), Cyclo.rational(0))
    return AlgebraCandidate(n, total)


def parse_algebra(ring: FusionRing, text: str) -> AlgebraCandidate:
    """Parse '1+X', '1+2X+V' or a comma list of multiplicities."""
    text = text.replace(" ", "")
    if "," in text:
        return make_candidate(ring, [int(x) for x in text.split(",")])
    n = [0] * ring.rank
    for term in filter(None, text.split("+")):
        k = 0
        while k < len(term) and term[k].isdigit() and term[k:] not in ring.labels:
            k += 1
        mult = int(term[:k]) if k else 1
        n[ring.index(term[k:])] += mult
    if n[0] != 1:
        raise ValueError("algebra must contain the unit exactly once")
    return make_candidate(ring, n)


def _ring_of(obj) -> FusionRing:
    return obj.ring if isinstance(obj, ModularData) else obj


def enumerate_candidates(md) -> list[AlgebraCandidate]:
    """All n with n_1 = 1 and FPdim(A)^2 <= FPdim(B), lexicographic in n."""
    ring = _ring_of(md)
    r = ring.rank
    fp = ring.fpdims()
    bound = ring.fpdim_total()
    if compare(bound, 1) < 0:
        return [make_candidate(ring, [1] + [0] * (r - 1))]
    out = []
    n = [1] + [0] * (r - 1)

    def fits(total: Cyclo) -> bool:
        return compare(total * total, bound) <= 0

    def walk(j: int, total: Cyclo):
        if j == r:
            out.append(AlgebraCandidate(tuple(n), total))
            return
        m = 0
        while True:
            t = total + fp[j] * m
            if m and not fits(t):
                break
            n[j] = m
            walk(j + 1, t)
            m += 1
        n[j] = 0

    walk(1, Cyclo.rational(1))
    return sorted(out, key=lambda a: a.n)


def brute_force_candidates(ring: FusionRing, max_mult: int = 6) -> list[tuple[int, ...]]:
    """Every n with entries <= max_mult passing the bound, by direct testing."""
    fp = [float(x) for x in ring.fpdims()]
    total = float(ring.fpdim_total())
    fpx = ring.fpdims()
    exact_total = ring.fpdim_total()
    out = []
    for rest in itertools.product(range(max_mult + 1), repeat=ring.rank - 1):
        n = (1,) + rest
        s = sum(m * f for m, f in zip(n, fp))
        if s * s < total - 1e-9:
            out.append(n)
        elif s * s <= total + 1e-9:
            # too close for floats; decide exactly
            a = sum((fpx[j] * n[j] for j in range(ring.rank) if n[j]), Cyclo.rational(0))
            if compare(a * a, exact_total) <= 0:
                out.append(n)
    return sorted(out)


def check_commutativity_necessary(md: ModularData, A: AlgebraCandidate) -> RuleResult:
    """Double braiding on A must be trivial: twists vanish on the support and
    every fusion channel inside the support is monodromy-free."""
    ring = md.ring
    supp = A.support
    for j in supp:
        if j and md.h[j] != 0:
            return RuleResult(False, "nontrivial_twist", (j,),
                              f"h_{ring.labels[j]} = {md.h[j]}")
    for i in supp:
        for j in supp:
            for k in supp:
                if ring.N[i, j, k] and (md.h[k] - md.h[i] - md.h[j]) % 1 != 0:
                    return RuleResult(False, "monodromy_channel", (i, j, k),
                                      f"{ring.labels[i]}x{ring.labels[j]} -> {ring.labels[k]}")
    return RuleResult(True, "commutativity_necessary")


def dyslectic_dimension(ring: FusionRing, A: AlgebraCandidate) -> Cyclo:
    """FPdim(B)/FPdim(A)^2, the FP dimension the local modules must have."""
    return _dyslectic(ring, A.n)


@lru_cache(maxsize=4096)
def _dyslectic(ring: FusionRing, n: tuple[int, ...]) -> Cyclo:
    fp = make_candidate(ring, n).fpdim
    return ring.fpdim_total() / (fp * fp)


def check_dyslectic_realizability(md, A: AlgebraCandidate) -> RuleResult:
    """FPdim(B)/FPdim(A)^2 must be the FP dimension of some modular category."""
    ring = _ring_of(md)
    f = dyslectic_dimension(ring, A)
    if not f.is_algebraic_integer():
        return RuleResult(False, "not_algebraic_integer", (), f"FPdim(B_A^0) = {f}")
    if compare(f, 1) > 0 and compare(f, 2) < 0:
        return RuleResult(False, "between_one_and_two", (), f"FPdim(B_A^0) = {f}")
    return RuleResult(True, "dyslectic_realizable")


def check_simple_current_sufficiency(md: ModularData, A: AlgebraCandidate) -> RuleResult:
    """Certify A when it is a sum of distinct bosonic invertibles closed under fusion."""
    ring = md.ring
    supp = A.support
    for j in supp:
        if not j:
            continue
        if A.n[j] != 1:
            return RuleResult(False, "multiplicity", (j,))
        if not ring.is_invertible(j):
            return RuleResult(False, "not_invertible", (j,))
        if md.h[j] != 0:
            return RuleResult(False, "nontrivial_twist", (j,))
        if md.d[j] != 1:
            return RuleResult(False, "quantum_dimension", (j,), f"d = {md.d[j]}")
    s = set(supp)
    for i in supp:
        for j in supp:
            for k in ring.product(i, j):
                if k not in s:
                    return RuleResult(False, "not_closed", (i, j, k))
    return RuleResult(True, "simple_current_algebra")


def classify_candidate(md: ModularData, A: AlgebraCandidate) -> ClassificationVerdict:
    ring = md.ring
    f = dyslectic_dimension(ring, A)
    lag = f == 1
    if A.is_trivial():
        return ClassificationVerdict(A, TRIVIAL, [], f, lag)
    reasons = []
    for rule in (check_commutativity_necessary, check_dyslectic_realizability):
        res = rule(md, A)
        if not res:
            reasons.append(res)
    if reasons:
        return ClassificationVerdict(A, RULED_OUT, reasons, f, lag)
    suff = check_simple_current_sufficiency(md, A)
    status = CERTIFIED if suff else UNDETERMINED
    return ClassificationVerdict(A, status, [suff], f, lag)


def classify(md: ModularData) -> list[ClassificationVerdict]:
    """One verdict per candidate, in candidate order."""
    return [classify_candidate(md, A) for A in enumerate_candidates(md)]


def completely_anisotropic(verdicts: Sequence[ClassificationVerdict]) -> bool | None:
    """True/False when decided; None if some candidate stays undetermined."""
    if any(v.status == CERTIFIED for v in verdicts):
        return False
    if any(v.status == UNDETERMINED for v in verdicts):
        return None
    return True


def compare_with_published(found: Sequence[tuple[int, ...]], printed: Sequence[tuple[int, ...]]):
    """Rows only derived and rows only printed (both without the unit entry)."""
    f = {tuple(x) for x in found}
    p = {tuple(x) for x in printed}
    return sorted(f - p), sorted(p - f)
