"""Anyon condensation by a connected etale algebra A.

Right A-modules m are described at the level of multiplicities:

* the free-module matrix W, with W[i][m] the multiplicity of m in
  F(b_i) = b_i (x) A.  By adjunction this is also the multiplicity of b_i
  in the underlying object of m, so the columns of W are the lifts;
* the NIM-rep n_i, with n_i[m][m'] the multiplicity of m' in b_i |> m.

W is pinned down by the Gram matrix Hom_A(F(b_i), F(b_j)) =
Hom(b_i, b_j (x) A), and each NIM-rep row solves W x = b_i (x) G(m).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InconsistentBranching, SearchBudgetExceeded
from .etale_classifier import AlgebraCandidate
from .exactnum import Cyclo
from .fusion_ring import FusionRing
from .modular_data import ModularData

DEFAULT_NIM_BUDGET = 2_000_000
_CANON_MAX_RANK = 8


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, partial):
        self.used += 1
        if self.used > self.limit:
            raise SearchBudgetExceeded(f"search exceeded {self.limit} nodes", list(partial))


@dataclass(frozen=True)
class NimRep:
    """Action matrices n_i (target_rank square) plus the free-module matrix."""
    matrices: tuple[tuple[tuple[int, ...], ...], ...]
    lifts: tuple[tuple[int, ...], ...]

    @property
    def target_rank(self) -> int:
        return len(self.matrices[0])

    def matrix(self, i: int) -> np.ndarray:
        return np.array(self.matrices[i], dtype=np.int64)

    def lift_of(self, m: int) -> list[int]:
        """Objects appearing in the underlying object of module m."""
        return [i for i, row in enumerate(self.lifts) if row[m]]


def _freeze(mats) -> tuple:
    return tuple(tuple(tuple(int(x) for x in row) for row in np.asarray(M)) for M in mats)


def make_nimrep(matrices: Sequence, lifts: Sequence | None = None) -> NimRep:
    mats = _freeze(matrices)
    if lifts is None:
        # F(b_i) = b_i |> m_1 when the first module is the algebra itself
        lifts = [M[0] for M in mats]
    return NimRep(mats, tuple(tuple(int(x) for x in row) for row in lifts))


def free_module_gram(ring: FusionRing, A: AlgebraCandidate) -> np.ndarray:
    """G[i][j] = dim Hom(b_i, b_j (x) A)."""
    a = np.array(A.n, dtype=np.int64)
    # N[j, k, i] summed against a_k
    return np.einsum("jki,k->ij", ring.N, a)


def _branchings(G: np.ndarray, cols: int, budget: _Budget):
    """Nonnegative integer W (r x cols) with W W^T = G, row 0 = e_0 and every
    column used; unused columns are interchangeable so new ones enter in order."""
    r = G.shape[0]
    if G[0, 0] != 1:
        return
    W = np.zeros((r, cols), dtype=np.int64)
    W[0, 0] = 1

    def rows(i: int, used: int):
        target_norm = int(G[i, i])
        targets = [int(G[i, j]) for j in range(i)]
        vec = [0] * cols

        def fill(c: int, norm_left: int, dots: list[int], new_cap: int):
            if norm_left == 0:
                if all(d == t for d, t in zip(dots, targets)):
                    yield list(vec)
                return
            if c == cols:
                return
            is_new = c >= used
            if is_new and c > used and vec[c - 1] == 0:
                return
            top = int(np.sqrt(norm_left))
            if is_new:
                top = min(top, new_cap)
            for v in range(top, -1, -1):
                nd = [d + v * int(W[j, c]) for j, d in enumerate(dots)]
                if any(d > t for d, t in zip(nd, targets)):
                    continue
                vec[c] = v
                yield from fill(c + 1, norm_left - v * v, nd, v if is_new else new_cap)
                vec[c] = 0

        yield from fill(0, target_norm, [0] * i, target_norm)

    def walk(i: int, used: int):
        budget.tick([])
        if i == r:
            if used == cols:
                yield W.copy()
            return
        if cols - used > sum(int(G[k, k]) for k in range(i, r)):
            return
        for vec in rows(i, used):
            W[i] = vec
            nu = max([used] + [c + 1 for c in range(cols) if vec[c]])
            yield from walk(i + 1, nu)
        W[i] = 0

    yield from walk(1, 1)


def _row_solutions(W: np.ndarray, target: np.ndarray) -> list[tuple[int, ...]]:
    """All x >= 0 integer with W x = target."""
    r, cols = W.shape
    out = []
    x = [0] * cols
    acc = np.zeros(r, dtype=np.int64)

    def rec(c: int):
        if c == cols:
            if np.array_equal(acc, target):
                out.append(tuple(x))
            return
        col = W[:, c]
        nz = col > 0
        top = int(min(target[nz] // col[nz])) if nz.any() else 0
        for v in range(top + 1):
            acc[:] += v * col
            if np.all(acc <= target):
                x[c] = v
                rec(c + 1)
            acc[:] -= v * col
            if np.any(acc + (v + 1) * col > target):
                break
        x[c] = 0

    rec(0)
    return out


def _indecomposable(mats: Sequence[np.ndarray]) -> bool:
    n = mats[0].shape[0]
    adj = np.zeros((n, n), dtype=bool)
    for M in mats:
        adj |= M > 0
    for start in range(n):
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in np.nonzero(adj[u])[0]:
                if int(v) not in seen:
                    seen.add(int(v))
                    stack.append(int(v))
        if len(seen) != n:
            return False
    return True


def _nim_actions(ring: FusionRing, W: np.ndarray, budget: _Budget):
    r, cols = W.shape
    N = ring.N
    options = {}
    for i in range(r):
        for m in range(cols):
            target = np.einsum("lk,l->k", N[i], W[:, m])
            opts = _row_solutions(W, target)
            if not opts:
                return
            options[i, m] = opts
    fp = [float(x) for x in ring.fpdims()]
    order = [0] + sorted(range(1, r), key=lambda i: (-fp[i], i))
    mats: list[np.ndarray | None] = [None] * r
    mats[0] = np.eye(cols, dtype=np.int64)
    if any(tuple(mats[0][m]) not in options[0, m] for m in range(cols)):
        return
    option_sets = {key: set(v) for key, v in options.items()}

    def products_ok() -> bool:
        for a in range(r):
            for b in range(r):
                if mats[a] is None or mats[b] is None:
                    continue
                sup = ring.product(a, b)
                if any(mats[c] is None for c in sup):
                    continue
                rhs = sum((int(N[a, b, c]) * mats[c] for c in sup), np.zeros((cols, cols), dtype=np.int64))
                if not np.array_equal(mats[a] @ mats[b], rhs):
                    return False
        return True

    def assign(pos: int):
        budget.tick([])
        if pos == len(order):
            yield [M.copy() for M in mats]
            return
        i = order[pos]
        if mats[i] is not None:
            yield from assign(pos + 1)
            return
        j = ring.dual[i]
        M = np.zeros((cols, cols), dtype=np.int64)

        def rows(m: int):
            if m == cols:
                if j != i:
                    T = M.T.copy()
                    if any(tuple(T[k]) not in option_sets[j, k] for k in range(cols)):
                        return
                    mats[j] = T
                mats[i] = M.copy()
                if products_ok():
                    yield from assign(pos + 1)
                mats[i] = None
                if j != i:
                    mats[j] = None
                return
            for row in options[i, m]:
                if j == i and any(row[k] != M[k, m] for k in range(m)):
                    continue
                M[m] = row
                yield from rows(m + 1)
            M[m] = 0

        yield from rows(0)

    yield from assign(1)


def _permute(mats, lifts, perm):
    """Module m becomes perm[m]."""
    cols = len(perm)
    inv = [0] * cols
    for a, p in enumerate(perm):
        inv[p] = a
    new_mats = [M[np.ix_(inv, inv)] for M in mats]
    new_lifts = lifts[:, inv]
    return new_mats, new_lifts


def canonical_nimrep(rep: NimRep) -> NimRep:
    """Lexicographically least relabelling of modules that keeps module 0."""
    mats = [rep.matrix(i) for i in range(len(rep.matrices))]
    lifts = np.array(rep.lifts, dtype=np.int64)
    cols = rep.target_rank
    if cols > _CANON_MAX_RANK:
        return rep
    best = None
    for rest in itertools.permutations(range(1, cols)):
        perm = (0,) + rest
        pm, pl = _permute(mats, lifts, perm)
        key = (_freeze(pm), tuple(map(tuple, pl.tolist())))
        if best is None or key < best:
            best = key
    return NimRep(best[0], best[1])


def find_nimreps(ring: FusionRing, A: AlgebraCandidate, target_rank: int,
                 node_budget: int = DEFAULT_NIM_BUDGET) -> list[NimRep]:
    """NIM-reps of the given rank compatible with the free-module functor of A."""
    if target_rank < 1:
        raise ValueError("target rank must be positive")
    budget = _Budget(node_budget)
    G = free_module_gram(ring, A)
    found = {}
    try:
        for W in _branchings(G, target_rank, budget):
            for mats in _nim_actions(ring, W, budget):
                if not _indecomposable(mats):
                    continue
                rep = canonical_nimrep(NimRep(_freeze(mats), tuple(map(tuple, W.tolist()))))
                found.setdefault(rep.matrices, rep)
    except SearchBudgetExceeded as exc:
        raise SearchBudgetExceeded(str(exc), sorted(found.values(), key=lambda x: x.matrices)) from None
    return sorted(found.values(), key=lambda x: (x.matrices, x.lifts))


def verify_nimrep(ring: FusionRing, rep: NimRep) -> list[str]:
    """Names of NIM-rep axioms that fail (empty when valid)."""
    bad = []
    mats = [rep.matrix(i) for i in range(ring.rank)]
    n = rep.target_rank
    if not np.array_equal(mats[0], np.eye(n, dtype=np.int64)):
        bad.append("unit")
    if any((M < 0).any() for M in mats):
        bad.append("nonnegative")
    for i in range(ring.rank):
        if not np.array_equal(mats[ring.dual[i]], mats[i].T):
            bad.append("duality")
            break
    for a in range(ring.rank):
        for b in range(ring.rank):
            rhs = sum(int(ring.N[a, b, c]) * mats[c] for c in range(ring.rank))
            if not np.array_equal(mats[a] @ mats[b], rhs):
                bad.append("representation")
                break
        else:
            continue
        break
    if not _indecomposable(mats):
        bad.append("indecomposable")
    return bad


# ---------------------------------------------------------------------------
# fusion of modules

def _module_fusion_rings(rep: NimRep, fp: Sequence[float], budget: _Budget):
    """Fusion rules N'_{m,m'}^{m''} of the module category.

    Constrained by F(b_i) (x) m' = b_i |> m', i.e. sum_m W[i][m] L_m = n_i,
    with L_m[m'][m''] = N'_{m,m'}^{m''}, and by FP dimensions."""
    W = np.array(rep.lifts, dtype=np.int64)
    r, n = W.shape
    mats = [rep.matrix(i) for i in range(r)]
    L = np.zeros((n, n, n), dtype=np.int64)
    for m in range(n):
        L[m, 0, m] = 1
    L[0] = np.eye(n, dtype=np.int64)

    def row_choices(mp: int):
        targets = np.array([mats[i][mp] for i in range(r)])
        acc = np.zeros_like(targets)
        rows = [None] * n
        rows[0] = np.eye(n, dtype=np.int64)[mp]
        acc += np.outer(W[:, 0], rows[0])

        def vecs(m: int):
            # vectors v with sum v fp = fp[m] fp[mp], bounded by the NIM-rep rows
            bound = np.full(n, 10 ** 6)
            for i in range(r):
                if W[i, m]:
                    bound = np.minimum(bound, (targets[i] - acc[i]) // W[i, m])
            goal = fp[m] * fp[mp]
            v = [0] * n

            def rec(c: int, left: float):
                if c == n:
                    if abs(left) < 1e-7:
                        yield np.array(v, dtype=np.int64)
                    return
                top = int(min(bound[c], (left + 1e-7) // fp[c]))
                for x in range(top, -1, -1):
                    v[c] = x
                    yield from rec(c + 1, left - x * fp[c])
                v[c] = 0

            yield from rec(0, goal)

        def rec_m(m: int):
            if m == n:
                if np.array_equal(acc, targets):
                    yield [row.copy() for row in rows]
                return
            for v in vecs(m):
                budget.tick([])
                acc[:] += np.outer(W[:, m], v)
                rows[m] = v
                yield from rec_m(m + 1)
                acc[:] -= np.outer(W[:, m], v)
            rows[m] = None

        yield from rec_m(1)

    def assoc_ok() -> bool:
        # (a b) x = a (b x) for left multiplication matrices L_a
        for a in range(n):
            for b in range(n):
                rhs = np.einsum("c,cxz->xz", L[a, b], L)
                if not np.array_equal(L[b] @ L[a], rhs):
                    return False
        return True

    def walk(mp: int):
        if mp == n:
            if assoc_ok() and _duals(L) is not None:
                yield L.copy()
            return
        for rows in row_choices(mp):
            for m in range(1, n):
                L[m, mp] = rows[m]
            yield from walk(mp + 1)
        L[1:, mp] = 0

    yield from walk(1)


def _duals(L: np.ndarray) -> list[int] | None:
    n = L.shape[0]
    dual = []
    for m in range(n):
        cands = [k for k in range(n) if L[m, k, 0] == 1 and L[k, m, 0] == 1]
        if len(cands) != 1 or int(L[m, :, 0].sum()) != 1:
            return None
        dual.append(cands[0])
    return dual


# ---------------------------------------------------------------------------
# recognition

def _cyclic_generator(ring: FusionRing, objs: Sequence[int]) -> int | None:
    objs = list(objs)
    n = len(objs)
    for g in objs:
        x, seen = 0, []
        for _ in range(n):
            x = ring.product(g, x)[0]
            seen.append(x)
        if sorted(seen) == sorted(objs):
            return g
    return None


def _power_index(ring: FusionRing, g: int, n: int) -> dict[int, int]:
    out, x = {0: 0}, 0
    for k in range(1, n):
        x = ring.product(g, x)[0]
        out[x] = k
    return out


def _quadratic_superscript(ring: FusionRing, g: int, n: int, twists) -> int | None:
    power = _power_index(ring, g, n)
    mod = n if n % 2 else 2 * n
    p = Fraction(twists[g]) * mod
    if p.denominator != 1:
        return None
    p = int(p) % mod
    for obj, k in power.items():
        if (Fraction(twists[obj]) - Fraction(p * k * k, mod)) % 1 != 0:
            return None
    units = [u for u in range(1, mod) if np.gcd(u, mod) == 1]
    return min((p * u * u) % mod for u in units)


UNRECOGNIZED = "Unrecognized"


def recognize_category(ring: FusionRing, twists: Sequence | None = None) -> str:
    """Match against Vec, Vec_{Z/n}, Fib, Ising and TY(Z/n) for n <= 6."""
    r = ring.rank
    if r == 1:
        return "Vec"
    inv = [i for i in range(r) if ring.is_invertible(i)]
    if len(inv) == r:
        if not all(len(ring.product(i, j)) == 1 for i in inv for j in inv):
            return UNRECOGNIZED
        if any(ring.product(i, j) != ring.product(j, i) for i in inv for j in inv):
            return UNRECOGNIZED
        g = _cyclic_generator(ring, inv)
        if g is None or r > 6:
            return UNRECOGNIZED
        base = f"Vec_{{Z/{r}Z}}"
        if twists is not None:
            p = _quadratic_superscript(ring, g, r, twists)
            if p is not None:
                return f"Vec^{p}_{{Z/{r}Z}}"
        return base
    non = [i for i in range(r) if i not in inv]
    if r == 2:
        t = non[0]
        if list(ring.N[t, t]) == [1, 1]:
            return "Fib"
        return UNRECOGNIZED
    if len(non) != 1:
        return UNRECOGNIZED
    m = non[0]
    n = len(inv)
    if n > 6 or _cyclic_generator(ring, inv) is None:
        return UNRECOGNIZED
    if any(ring.product(i, j) != ring.product(j, i) for i in inv for j in inv):
        return UNRECOGNIZED
    if not all(list(ring.N[g, m]) == list(np.eye(r, dtype=np.int64)[m]) for g in inv):
        return UNRECOGNIZED
    mm = ring.N[m, m]
    if not all(mm[g] == 1 for g in inv) or mm[m] != 0:
        return UNRECOGNIZED
    return "Ising" if n == 2 else f"TY(Z/{n}Z)"


# ---------------------------------------------------------------------------
# condensation

@dataclass(frozen=True)
class BranchingMap:
    """rows[a][m]: multiplicity of broken-phase sector m in the image of b_a."""
    rows: tuple[tuple[int, ...], ...]
    vacuum: int = 0


@dataclass
class CondensationResult:
    algebra: AlgebraCandidate
    branching: BranchingMap
    nimrep: NimRep
    module_ring: FusionRing
    module_dims: tuple[Cyclo, ...]
    module_fpdims: tuple[Cyclo, ...]
    unconfined: tuple[int, ...]
    module_twists: dict[int, Fraction]
    identified_BA: str
    identified_BA0: str
    fpdim_BA: Cyclo
    fpdim_BA0: Cyclo
    alternatives: int = 1
    nimrep_count: int = 1

    @property
    def module_rank(self) -> int:
        return self.nimrep.target_rank

    @property
    def confined(self) -> tuple[int, ...]:
        return tuple(m for m in range(self.module_rank) if m not in self.unconfined)

    def lifts(self, m: int) -> list[int]:
        return self.nimrep.lift_of(m)

    def local_ring(self) -> FusionRing:
        return _restrict(self.module_ring, self.unconfined)


def _restrict(ring: FusionRing, keep: Sequence[int]) -> FusionRing:
    keep = list(keep)
    pos = {m: a for a, m in enumerate(keep)}
    N = ring.N[np.ix_(keep, keep, keep)]
    dual = [pos[ring.dual[m]] for m in keep]
    return FusionRing([ring.labels[m] for m in keep], N, dual, ring.name + "^0")


def _sum(xs) -> Cyclo:
    return sum(xs, Cyclo.rational(0))


def condense(md: ModularData, A: AlgebraCandidate,
             node_budget: int = DEFAULT_NIM_BUDGET) -> CondensationResult:
    """Branching, NIM-rep, module fusion, confinement and identification for A."""
    ring = md.ring
    G = free_module_gram(ring, A)
    low = int(np.linalg.matrix_rank(G.astype(float)))
    high = int(np.trace(G))
    reps = []
    for cols in range(max(low, 1), high + 1):
        reps.extend(find_nimreps(ring, A, cols, node_budget))
    if not reps:
        raise InconsistentBranching("no NIM-rep compatible with the free-module branching")
    fpA = A.fpdim
    dA = _sum(md.d[k] * A.n[k] for k in range(ring.rank))
    fp = ring.fpdims()
    target_BA = ring.fpdim_total() / fpA
    target_BA0 = ring.fpdim_total() / (fpA * fpA)
    budget = _Budget(node_budget)
    solutions = []
    for rep in reps:
        W = rep.lifts
        n = rep.target_rank
        m_fp = tuple(_sum(fp[k] * W[k][m] for k in range(ring.rank)) / fpA for m in range(n))
        if _sum(x * x for x in m_fp) != target_BA:
            continue
        for L in _module_fusion_rings(rep, [float(x) for x in m_fp], budget):
            solutions.append((rep, L, m_fp))
    if not solutions:
        raise InconsistentBranching("no fusion rules on the modules reproduce the NIM-rep")
    branchings = {rep.lifts for rep, _, _ in solutions}
    if len(branchings) > 1:
        raise InconsistentBranching(f"{len(branchings)} inequivalent branchings fit the data")
    rep, L, m_fp = solutions[0]
    W = np.array(rep.lifts, dtype=np.int64)
    n = rep.target_rank
    labels = [f"m{m + 1}" for m in range(n)]
    module_ring = FusionRing(labels, L, _duals(L), "B_A")

    if [int(x) for x in W[:, 0]] != list(A.n):
        raise InconsistentBranching("vacuum column differs from the algebra")
    # exact dimension checks
    m_d = tuple(_sum(md.d[k] * int(W[k, m]) for k in range(ring.rank)) / dA for m in range(n))
    for a in range(ring.rank):
        if _sum(m_d[m] * int(W[a, m]) for m in range(n)) != md.d[a]:
            raise InconsistentBranching(f"quantum dimension of {ring.labels[a]} not preserved")
    for m in range(n):
        for mp in range(n):
            if _sum(m_fp[k] * int(L[m, mp, k]) for k in range(n)) != m_fp[m] * m_fp[mp]:
                raise InconsistentBranching("module fusion breaks FP dimensions")
    # restriction commutes with fusion
    for a in range(ring.rank):
        for b in range(ring.rank):
            lhs = np.einsum("m,p,mpk->k", W[a], W[b], L)
            rhs = np.einsum("c,ck->k", ring.N[a, b], W)
            if not np.array_equal(lhs, rhs):
                raise InconsistentBranching(
                    f"restriction does not commute with {ring.labels[a]} x {ring.labels[b]}")
    twists = {}
    unconfined = []
    for m in range(n):
        hs = {md.h[k] % 1 for k in range(ring.rank) if W[k, m]}
        if len(hs) == 1:
            unconfined.append(m)
            twists[m] = hs.pop()
    if 0 not in unconfined:
        raise InconsistentBranching("vacuum sector is confined")
    keep = set(unconfined)
    for a in unconfined:
        for b in unconfined:
            if any(L[a, b, k] and k not in keep for k in range(n)):
                raise InconsistentBranching("unconfined sectors not closed under fusion")
    fp_BA0 = _sum(m_fp[m] * m_fp[m] for m in unconfined)
    if fp_BA0 != target_BA0:
        raise InconsistentBranching(f"local modules have FPdim {fp_BA0}, expected {target_BA0}")
    local = _restrict(module_ring, unconfined)
    local_twists = [twists[m] for m in unconfined]
    return CondensationResult(
        algebra=A,
        branching=BranchingMap(tuple(map(tuple, W.tolist()))),
        nimrep=rep,
        module_ring=module_ring,
        module_dims=m_d,
        module_fpdims=m_fp,
        unconfined=tuple(unconfined),
        module_twists=twists,
        identified_BA=recognize_category(module_ring),
        identified_BA0=recognize_category(local, local_twists),
        fpdim_BA=_sum(x * x for x in m_fp),
        fpdim_BA0=fp_BA0,
        alternatives=len(solutions),
        nimrep_count=len(reps),
    )
