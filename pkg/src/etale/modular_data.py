"""Modular data on a fusion ring: S-tilde, T, verification and enumeration.

The unnormalized S-matrix comes from the double-braiding trace

    S~_ij = sum_k N_ij^k  theta_k / (theta_i theta_j)  d_k,   theta = exp(2 pi i h).

Conformal dimensions are enumerated through the Verlinde picture: the
columns of S~ are d_j-scaled characters of the fusion ring, so candidate
S~ matrices come from bijections objects -> characters, and the twists are
then recovered from the balancing relation above.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
import sympy

from .errors import NotRootOfUnity, RepresentationError, SearchBudgetExceeded
from .exactnum import Cyclo, compare, recognize_algebraic_integer, root_of_unity, sqrt_int
from .fusion_ring import FusionRing, automorphisms

DEFAULT_NODE_BUDGET = 5_000_000
_TOL = 1e-7

Character = tuple  # tuple[Cyclo, ...] with entry 0 equal to 1


def _zero() -> Cyclo:
    return Cyclo.rational(0)


def twist(h: Fraction) -> Cyclo:
    h = Fraction(h) % 1
    return root_of_unity(h.numerator, h.denominator)


def _lcm_all(values) -> int:
    m = 1
    for v in values:
        m = m * v // math.gcd(m, v)
    return m


def _common(entries: Sequence[Cyclo]) -> list[Cyclo]:
    n = _lcm_all(x.n for x in entries)
    return [x.lift(n) for x in entries]


def mat_mul(A, B):
    r, m, c = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m) if A[i][k] and B[k][j]), _zero())
             for j in range(c)] for i in range(r)]


def det(M) -> Cyclo:
    """Exact determinant by Gaussian elimination over the cyclotomic field."""
    A = [list(row) for row in M]
    n = len(A)
    result = Cyclo.rational(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return _zero()
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            result = -result
        p = A[col][col]
        result = result * p
        pinv = p.inv()
        for r in range(col + 1, n):
            if A[r][col]:
                f = A[r][col] * pinv
                A[r] = [A[r][c] - f * A[col][c] if c >= col else A[r][c] for c in range(n)]
    return result


def is_singular(M) -> bool:
    """Exact singularity test; a nonzero determinant modulo a prime p = 1 mod n
    (zeta_n sent to an n-th root of unity in F_p) proves det != 0."""
    n = 1
    for row in M:
        for x in row:
            n = n * x.n // math.gcd(n, x.n)
    p, tried = 1 + n * ((1 << 30) // n + 1), 0
    while tried < 3:
        if sympy.isprime(p):
            tried += 1
            z = pow(sympy.primitive_root(p), (p - 1) // n, p)
            if _det_mod(M, z, n, p):
                return False
        p += n
    return det(M).is_zero()


def _det_mod(M, z: int, n: int, p: int) -> int:
    A = []
    for row in M:
        out = []
        for x in row:
            if x.den % p == 0:
                return 0
            w = pow(z, n // x.n, p)
            v = sum(c * pow(w, k, p) for k, c in enumerate(x.num) if c)
            out.append(v * pow(x.den, -1, p) % p)
        A.append(out)
    r = len(A)
    result = 1
    for col in range(r):
        piv = next((i for i in range(col, r) if A[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            result = -result
        result = result * A[col][col] % p
        inv = pow(A[col][col], -1, p)
        for i in range(col + 1, r):
            if A[i][col]:
                f = A[i][col] * inv % p
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[col])]
    return result % p


def as_root_of_unity(u: Cyclo) -> Fraction:
    """Return q with u == exp(2 pi i q), or raise NotRootOfUnity."""
    z = complex(u)
    if u.is_zero() or abs(abs(z) - 1) > 1e-9:
        raise NotRootOfUnity(f"|value| = {abs(z):.6g} is not 1")
    N = 2 * u.n
    k = round(np.angle(z) / (2 * np.pi) * N) % N
    if root_of_unity(k, N) != u:
        raise NotRootOfUnity("value is not a root of unity")
    return Fraction(k, N)


def _sqrt_exact(x: Cyclo) -> Cyclo | None:
    """Positive-real square root of a positive real cyclotomic value, if cyclotomic."""
    if x.is_rational():
        q = x.to_fraction()
        if q <= 0:
            return None
        return sqrt_int(q.numerator * q.denominator) * Fraction(1, q.denominator)
    t = sympy.Symbol("t")
    coeffs = _minpoly(x)
    poly = sympy.Poly(sum(c * t ** (2 * (len(coeffs) - 1 - i)) for i, c in enumerate(coeffs)), t)
    target = math.sqrt(float(x))
    for fac, _ in sympy.factor_list(poly.as_expr())[1]:
        fc = [int(c) for c in sympy.Poly(fac, t).all_coeffs()]
        if abs(np.polyval(fc, target)) > 1e-6 * max(1.0, target) ** len(fc):
            continue
        if fc[0] != 1 or len(fc) > 9:
            return None
        try:
            # search only over 1, 2 or 4 times the conductor
            c = x.canonical().n
            y = recognize_algebraic_integer(target, fc, moduli=[c, 2 * c, 4 * c])
        except RepresentationError:
            return None
        if y * y == x:
            return y
    return None


def _minpoly(x: Cyclo) -> list[int]:
    """Integer minimal polynomial of a cyclotomic algebraic integer (highest first)."""
    conj = {x.galois(a) for a in range(1, x.n) if math.gcd(a, x.n) == 1} if x.n > 2 else {x}
    roots = [complex(c) for c in conj]
    coeffs = np.real(np.poly(roots))
    ints = [int(round(c)) for c in coeffs]
    return ints


# ---------------------------------------------------------------------------

@dataclass
class ModularReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "pass" if self.ok else "fail: " + "; ".join(self.failures)


class ModularData:
    """Fusion ring plus quantum dimensions ``d``, conformal dimensions ``h``
    (mod 1, h[0] = 0) and the sign choosing D among the square roots of sum d^2."""

    def __init__(self, ring: FusionRing, d: Sequence, h: Sequence, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.ring = ring
        self.d = tuple(Cyclo.coerce(x) for x in d)
        self.h = tuple(Fraction(x) % 1 for x in h)
        if len(self.d) != ring.rank or len(self.h) != ring.rank:
            raise ValueError("d and h must have one entry per simple object")
        if self.h[0] != 0:
            raise ValueError("the unit must have h = 0")
        self.sign = sign

    def __repr__(self):
        return (f"ModularData({self.ring.name}, h=({', '.join(map(str, self.h))}),"
                f" sign={self.sign:+d})")

    @cached_property
    def theta(self) -> tuple[Cyclo, ...]:
        return tuple(twist(x) for x in self.h)

    @cached_property
    def S_tilde(self) -> list[list[Cyclo]]:
        r = self.ring.rank
        N = self.ring.N
        th = self.theta
        dth = [self.d[k] * th[k] for k in range(r)]
        inv_th = [t.conj() for t in th]
        S = [[None] * r for _ in range(r)]
        for i in range(r):
            for j in range(i, r):
                acc = sum((dth[k] * int(N[i, j, k]) for k in range(r) if N[i, j, k]), _zero())
                val = acc * inv_th[i] * inv_th[j]
                S[i][j] = S[j][i] = val
        return S

    @cached_property
    def global_dim_sq(self) -> Cyclo:
        return sum((x * x for x in self.d), _zero())

    @cached_property
    def gauss_sum(self) -> Cyclo:
        return sum((self.d[j] * self.d[j] * self.theta[j] for j in range(self.ring.rank)), _zero())

    @cached_property
    def _positive_D(self) -> Cyclo | None:
        D2 = self.global_dim_sq
        p = self.gauss_sum
        if not p.is_zero():
            try:
                q = as_root_of_unity(p * p / D2)
            except NotRootOfUnity:
                q = None
            if q is not None:
                for half in (q / 2, q / 2 + Fraction(1, 2)):
                    D = p * twist(-half)
                    if D.is_real() and D * D == D2 and compare(D, 0) > 0:
                        return D.canonical()
        return _sqrt_exact(D2)

    @property
    def D(self) -> Cyclo | None:
        D = self._positive_D
        return None if D is None else D * self.sign

    @cached_property
    def S(self) -> list[list[Cyclo]] | None:
        D = self.D
        if D is None:
            return None
        Dinv = D.inv()
        return [[x * Dinv for x in row] for row in self.S_tilde]

    @property
    def T(self) -> list[list[Cyclo]]:
        r = self.ring.rank
        return [[self.theta[i] if i == j else _zero() for j in range(r)] for i in range(r)]

    def relabel(self, perm: Sequence[int]) -> "ModularData":
        """Transport along a ring automorphism (object i becomes perm[i])."""
        r = self.ring.rank
        d = [None] * r
        h = [None] * r
        for i, p in enumerate(perm):
            d[p] = self.d[i]
            h[p] = self.h[i]
        return ModularData(self.ring, d, h, self.sign)


def build_modular_data(ring: FusionRing, d: Sequence, h: Sequence, sign: int = 1) -> ModularData:
    return ModularData(ring, d, h, sign)


def verify_modular(md: ModularData) -> ModularReport:
    """Exact checks on (d, h).

    (a) S~^2 = D^2 C, (b) det S~ != 0, (c) S~ real when every object is
    self-dual, (d) S~_(i,j*) = conj(S~_ij), (e) D^2 = sum d^2 with D
    cyclotomic, (f) second Frobenius-Schur indicators are +-1 on self-dual
    objects and 0 on the others.  (e) needs a square-root search, so it is
    only run once (a)-(d) hold.
    """
    rep = ModularReport()
    ring = md.ring
    r = ring.rank
    St = md.S_tilde
    D2 = md.global_dim_sq
    sq = mat_mul(St, St)
    for i in range(r):
        for j in range(r):
            want = D2 if ring.dual[i] == j else _zero()
            if sq[i][j] != want:
                rep.failures.append(f"S^2 != C at ({ring.labels[i]},{ring.labels[j]})")
                break
        else:
            continue
        break
    if is_singular(St):
        rep.failures.append("S~ is degenerate")
    if all(ring.dual[i] == i for i in range(r)):
        for i in range(r):
            bad = [j for j in range(i, r) if not St[i][j].is_real()]
            if bad:
                rep.failures.append(f"S~ not real at ({ring.labels[i]},{ring.labels[bad[0]]})")
                break
    for i in range(r):
        bad = [j for j in range(r) if St[i][ring.dual[j]] != St[i][j].conj()]
        if bad:
            rep.failures.append(f"S~_(i,j*) != conj(S~_ij) at ({ring.labels[i]},{ring.labels[bad[0]]})")
            break
    if not rep.failures:
        D = md.D
        if D is None:
            rep.failures.append("D is not in a cyclotomic field")
        elif D * D != D2:
            rep.failures.append("D^2 != sum d^2")
    nu = frobenius_schur_indicators(md)
    for k in range(r):
        allowed = (1, -1) if ring.dual[k] == k else (0,)
        if not any(nu[k] == a for a in allowed):
            rep.failures.append(f"Frobenius-Schur indicator of {ring.labels[k]} is {nu[k]}")
            break
    return rep


def frobenius_schur_indicators(md: ModularData) -> list[Cyclo]:
    """nu_2(b_k) = D^-2 sum_ij N_ij^k d_i d_j (theta_i / theta_j)^2."""
    ring = md.ring
    r = ring.rank
    th2 = [t * t for t in md.theta]
    inv2 = [t.conj() for t in th2]
    Dinv = md.global_dim_sq.inv()
    out = []
    for k in range(r):
        acc = _zero()
        for i in range(r):
            for j in range(r):
                if ring.N[i, j, k]:
                    acc = acc + md.d[i] * md.d[j] * th2[i] * inv2[j] * int(ring.N[i, j, k])
        out.append(acc * Dinv)
    return out


def central_charge(md: ModularData) -> Fraction:
    """c mod 8 from exp(2 pi i c/8) = (sum_j d_j^2 theta_j) / D."""
    D = md.D
    if D is None:
        raise NotRootOfUnity("D is not cyclotomic")
    q = as_root_of_unity(md.gauss_sum / D)
    return (8 * q) % 8


# ---------------------------------------------------------------------------
# characters

def solve_characters(ring: FusionRing) -> list[Character]:
    """Real characters with all values nonzero, normalized d_1 = 1."""
    out = []
    for ch in ring.characters:
        if all(x.is_real() and not x.is_zero() for x in ch):
            out.append(tuple(ch))
    out.sort(key=lambda ch: tuple(round(float(x), 9) for x in ch))
    return out


def character_stabilizer(ring: FusionRing, d: Sequence[Cyclo]) -> list[tuple[int, ...]]:
    out = []
    for g in automorphisms(ring):
        if all(d[g[i]] == d[i] for i in range(ring.rank)):
            out.append(g)
    return out


def _act(g: Sequence[int], h: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [None] * len(h)
    for i, p in enumerate(g):
        out[p] = h[i]
    return tuple(out)


def orbit_representative(h: Sequence[Fraction], group) -> tuple[Fraction, ...]:
    return min(_act(g, h) for g in group)


@lru_cache(maxsize=None)
def fraction_grid(bound: int) -> tuple[Fraction, ...]:
    return tuple(sorted({Fraction(p, q) for q in range(1, bound + 1) for p in range(q)}))


def _snap(z: complex, bound: int) -> Fraction | None:
    if abs(abs(z) - 1) > 1e-6:
        return None
    a = (np.angle(z) / (2 * np.pi)) % 1.0
    q = Fraction(a).limit_denominator(bound)
    if abs(float(q) - a) < 1e-7 or abs(abs(float(q) - a) - 1) < 1e-7:
        return q % 1
    return None


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, partial):
        self.used += 1
        if self.used > self.limit:
            raise SearchBudgetExceeded(f"search exceeded {self.limit} nodes", partial)


def _candidate_s_matrices(ring: FusionRing, d: Sequence[Cyclo], budget: _Budget, found):
    """Numeric S~ candidates M_ij = d_j chi_sigma(j)(b_i) for bijections sigma."""
    r = ring.rank
    chars = list(ring.characters)
    Cn = np.array([[complex(x) for x in ch] for ch in chars])
    dn = np.array([complex(x) for x in d])
    try:
        i0 = chars.index(tuple(d))
    except ValueError:
        raise ValueError("d is not a character of the ring") from None
    D2 = np.sum(dn * dn)
    Cmat = np.zeros((r, r))
    for i in range(r):
        Cmat[i, ring.dual[i]] = 1
    conj_of = [int(np.argmin(np.abs(Cn - np.conj(Cn[c])).sum(axis=1))) for c in range(r)]
    sigma = [-1] * r
    sigma[0] = i0
    used = {i0}
    M = np.zeros((r, r), dtype=complex)
    M[:, 0] = dn[0] * Cn[i0]
    out = []
    scale = max(1.0, float(np.max(np.abs(Cn))) * float(np.max(np.abs(dn))))

    def extend(j):
        budget.tick(found)
        if j == r:
            if np.allclose(M @ M, D2 * Cmat, atol=_TOL * scale * scale * r):
                out.append(M.copy())
            return
        for c in range(r):
            if c in used:
                continue
            M[:, j] = dn[j] * Cn[c]
            ok = all(abs(M[i, j] - M[j, i]) < _TOL * scale for i in range(j))
            jd = ring.dual[j]
            if ok and jd < j and sigma[jd] != conj_of[c]:
                ok = False
            if ok:
                sigma[j] = c
                used.add(c)
                extend(j + 1)
                used.discard(c)
                sigma[j] = -1
        M[:, j] = 0

    extend(1)
    return out


def _solve_twists(ring: FusionRing, d: Sequence[Cyclo], M: np.ndarray, bound: int,
                  budget: _Budget, found) -> list[tuple[Fraction, ...]]:
    """All twist vectors on the denominator grid balancing the numeric S~ = M."""
    r = ring.rank
    N = ring.N
    dn = np.array([complex(x) for x in d])
    cls = [min(i, ring.dual[i]) for i in range(r)]
    reps = sorted(set(cls) - {0})
    eqs = []
    for i in range(r):
        for j in range(i, r):
            ks = [k for k in range(r) if N[i, j, k]]
            involved = {cls[i], cls[j]} | {cls[k] for k in ks}
            eqs.append((i, j, ks, involved - {0}))
    grid = fraction_grid(bound)
    theta: dict[int, complex] = {0: 1.0 + 0j}
    hval: dict[int, Fraction] = {0: Fraction(0)}
    scale = max(1.0, float(np.max(np.abs(M))))
    results = []

    def residual(i, j, ks):
        th = lambda x: theta[cls[x]]
        lhs = th(i) * th(j) * M[i, j]
        rhs = sum(N[i, j, k] * dn[k] * th(k) for k in ks)
        return abs(lhs - rhs)

    def poly_in(x, i, j, ks):
        # coefficients c0 + c1 t + c2 t^2 of lhs - rhs with theta[x] = t
        c = np.zeros(3, dtype=complex)
        deg = (cls[i] == x) + (cls[j] == x)
        known = M[i, j]
        for y in (i, j):
            if cls[y] != x:
                known = known * theta[cls[y]]
        c[deg] += known
        for k in ks:
            if cls[k] == x:
                c[1] -= N[i, j, k] * dn[k]
            else:
                c[0] -= N[i, j, k] * dn[k] * theta[cls[k]]
        return c

    def consistent():
        for i, j, ks, inv in eqs:
            if inv <= theta.keys() and residual(i, j, ks) > _TOL * scale * 4:
                return False
        return True

    def assign(x, q):
        hval[x] = q
        theta[x] = np.exp(2j * np.pi * float(q))

    def unassign(x):
        del hval[x]
        del theta[x]

    def search():
        budget.tick(found + results)
        free = [x for x in reps if x not in theta]
        if not free:
            results.append(tuple(hval[cls[i]] for i in range(r)))
            return
        # look for an equation with a single unknown and a nontrivial polynomial
        for i, j, ks, inv in eqs:
            unknown = inv - theta.keys()
            if len(unknown) != 1:
                continue
            x = next(iter(unknown))
            c = poly_in(x, i, j, ks)
            if np.max(np.abs(c)) < _TOL * scale:
                continue
            coeffs = np.trim_zeros(c[::-1], "f")
            if len(coeffs) <= 1:
                return  # nonzero constant: inconsistent
            cands = set()
            for z in np.roots(coeffs):
                q = _snap(z, bound)
                if q is not None:
                    cands.add(q)
            for q in sorted(cands):
                assign(x, q)
                if consistent():
                    search()
                unassign(x)
            return
        x = free[0]
        for q in grid:
            assign(x, q)
            if consistent():
                search()
            unassign(x)

    search()
    return results


def _numeric_fs_ok(ring: FusionRing, d, h) -> bool:
    """Floating-point screen for the Frobenius-Schur condition (exact check follows)."""
    r = ring.rank
    dn = np.array([complex(x) for x in d])
    th2 = np.exp(4j * np.pi * np.array([float(x) for x in h]))
    D2 = np.sum(dn * dn)
    for k in range(r):
        nu = np.sum(ring.N[:, :, k] * np.outer(dn * th2, dn / th2)) / D2
        allowed = (1, -1) if ring.dual[k] == k else (0,)
        if min(abs(nu - a) for a in allowed) > 1e-6:
            return False
    return True


def enumerate_conformal(ring: FusionRing, d: Sequence[Cyclo], denom_bound: int,
                        node_budget: int = DEFAULT_NODE_BUDGET,
                        dedupe: bool = True) -> list[tuple[Fraction, ...]]:
    """Conformal-dimension vectors (with h_1 = 0) making (ring, d, h) modular.

    Only h_j with denominator <= ``denom_bound`` are considered.  Results are
    verified exactly and, if ``dedupe``, reduced to one representative per
    orbit of the automorphisms fixing ``d``; sorted lexicographically.
    """
    if denom_bound < 1:
        raise ValueError("denominator bound must be >= 1")
    d = tuple(Cyclo.coerce(x) for x in d)
    budget = _Budget(node_budget)
    raw: list[tuple[Fraction, ...]] = []
    for M in _candidate_s_matrices(ring, d, budget, raw):
        for h in _solve_twists(ring, d, M, denom_bound, budget, raw):
            if h not in raw:
                raw.append(h)
    verified = [h for h in raw if _numeric_fs_ok(ring, d, h)
                and verify_modular(ModularData(ring, d, h)).ok]
    if not dedupe:
        return sorted(set(verified))
    group = character_stabilizer(ring, d)
    return sorted({orbit_representative(h, group) for h in verified})


def brute_force_conformal(ring: FusionRing, d: Sequence[Cyclo], denom_bound: int,
                          node_budget: int = DEFAULT_NODE_BUDGET) -> list[tuple[Fraction, ...]]:
    """Independent enumeration by scanning the h grid object by object.

    A partial assignment is kept only if every S~ entry it determines,
    divided by d_j, is a value some character takes on b_i.  Complete
    assignments are checked exactly.  Returned as orbit representatives.
    """
    d = tuple(Cyclo.coerce(x) for x in d)
    r = ring.rank
    N = ring.N
    dn = np.array([complex(x) for x in d])
    values = [np.array([complex(ch[i]) for ch in ring.characters]) for i in range(r)]
    grid = fraction_grid(denom_bound)
    gz = np.exp(2j * np.pi * np.array([float(q) for q in grid]))
    h = [None] * r
    th = [None] * r
    h[0], th[0] = Fraction(0), 1.0 + 0j
    budget = _Budget(node_budget)
    found = []
    deps = {}
    for i in range(r):
        for j in range(r):
            deps[i, j] = max([i, j] + [k for k in range(r) if N[i, j, k]])
    entries_at = {m: [(i, j) for (i, j), top in deps.items() if top == m] for m in range(r)}

    def entry_ok(i, j):
        s = sum(N[i, j, k] * dn[k] * th[k] for k in range(r) if N[i, j, k])
        s = s / (th[i] * th[j])
        return np.min(np.abs(values[i] * dn[j] - s)) < 1e-7 * max(1.0, abs(s))

    def extend(m):
        budget.tick(found)
        if m == r:
            found.append(tuple(h))
            return
        dm = ring.dual[m]
        choices = range(len(grid)) if dm >= m else [grid.index(h[dm])]
        for g in choices:
            h[m], th[m] = grid[g], gz[g]
            if all(entry_ok(i, j) for i, j in entries_at[m]):
                extend(m + 1)
        h[m] = th[m] = None

    extend(1)
    verified = [x for x in found if _numeric_fs_ok(ring, d, x)
                and verify_modular(ModularData(ring, d, x)).ok]
    group = character_stabilizer(ring, d)
    return sorted({orbit_representative(x, group) for x in verified})


# ---------------------------------------------------------------------------
# counting

@dataclass
class MFCCount:
    total: int
    per_character: list[int]
    factorization: str


def count_mfcs(ring: FusionRing, denom_bound: int,
               node_budget: int = DEFAULT_NODE_BUDGET) -> MFCCount:
    """Number of (character, conformal-orbit, sign of D) triples."""
    chars = solve_characters(ring)
    per = [2 * len(enumerate_conformal(ring, d, denom_bound, node_budget)) for d in chars]
    total = sum(per)
    return MFCCount(total, per, factorization_string(per))


def factorization_string(per: Sequence[int]) -> str:
    total = sum(per)
    if per and len(set(per)) == 1 and per[0] % 2 == 0:
        return (f"{len(per)}(quantum dimensions)x{per[0] // 2}(conformal dimensions)"
                f"x2(categorical dimensions)={total}")
    return "+".join(str(p) for p in sorted(per)) + f"={total}"
