"""Exact arithmetic in cyclotomic fields.

Every scalar that shows up in modular data (quantum dimensions, twists,
S-matrix entries, Frobenius-Perron dimensions) lives in some cyclotomic
field Q(zeta_n).  A :class:`Cyclo` stores an element of Q(zeta_n) by its
coordinates in the power basis ``1, z, ..., z**(phi(n)-1)`` reduced modulo
the n-th cyclotomic polynomial, so equality within one modulus is a plain
coefficient comparison.  Mixed moduli are lifted to their lcm.

Ordering of real values is decided by certified interval embeddings
(:func:`embed`), refined up to a precision cap.
"""
from __future__ import annotations

import ast
import cmath
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import numpy as np
from mpmath import iv
from mpmath.libmp import to_rational

from .errors import DivisionByZero, PrecisionExhausted, RepresentationError

__all__ = [
    "Cyclo", "Interval", "ComplexInterval", "root_of_unity", "sin_ratio",
    "sqrt_int", "embed", "sign", "compare", "precision_cap", "parse_scalar",
    "format_scalar", "recognize_algebraic_integer", "totient",
]

DEFAULT_PRECISION_CAP = 512


def precision_cap() -> int:
    """Bits allowed for interval refinement (env ``ETALE_PRECISION_CAP``)."""
    try:
        return max(64, int(os.environ.get("ETALE_PRECISION_CAP", DEFAULT_PRECISION_CAP)))
    except ValueError:
        return DEFAULT_PRECISION_CAP


# ---------------------------------------------------------------------------
# elementary number theory

@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(num: list[int], den: Sequence[int]) -> list[int]:
    # den monic
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, v in enumerate(den):
                num[i - dd + j] -= c * v
    assert not any(num[:dd]), "inexact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows ``x**k mod Phi_n`` for ``0 <= k < n`` in the reduced basis."""
    phi = totient(n)
    cyc = cyclotomic_poly(n)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cyc[j]
    return tuple(rows)


def _reduce(n: int, vec: Iterable[int]) -> list[int]:
    """Reduce an exponent vector (exponents taken mod n) to the power basis."""
    phi = totient(n)
    tab = _power_table(n)
    out = [0] * phi
    for k, c in enumerate(vec):
        if not c:
            continue
        k %= n
        if k < phi:
            out[k] += c
        else:
            for t, v in enumerate(tab[k]):
                if v:
                    out[t] += c * v
    return out


@lru_cache(maxsize=None)
def _zeta_powers(n: int) -> np.ndarray:
    k = np.arange(totient(n))
    return np.exp(2j * np.pi * k / n)


def _convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of integer coefficient lists by Kronecker substitution."""
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    if not ma or not mb:
        return [0] * (len(a) + len(b) - 1)
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 2
    pa = sum(c << (bits * i) for i, c in enumerate(a))
    pb = sum(c << (bits * i) for i, c in enumerate(b))
    p = pa * pb
    mask, half = (1 << bits) - 1, 1 << (bits - 1)
    out = []
    for _ in range(len(a) + len(b) - 1):
        low = p & mask
        if low >= half:
            low -= 1 << bits
        out.append(low)
        p = (p - low) >> bits
    return out


# ---------------------------------------------------------------------------
# Galois norms

@lru_cache(maxsize=None)
def _unit_tower(n: int) -> tuple[tuple[int, int], ...]:
    """Generators g_k of (Z/n)^* with the order of g_k modulo <g_1..g_(k-1)>."""
    units = [a for a in range(1, n) if math.gcd(a, n) == 1]
    seen = {1}
    tower = []
    for g in units:
        if g in seen:
            continue
        order, p = 1, g
        while p not in seen:
            p = p * g % n
            order += 1
        grown = set(seen)
        p = 1
        for _ in range(order):
            grown |= {s * p % n for s in seen}
            p = p * g % n
        seen = grown
        tower.append((g, order))
    return tuple(tower)


def _conjugate_product(z: "Cyclo", g: int, order: int) -> "Cyclo":
    """prod_{1 <= i < order} sigma_g^i(z), by doubling."""
    n = z.n

    def prod(k: int) -> "Cyclo":
        # prod_{0 <= i < k} sigma_g^i(z)
        if k == 1:
            return z
        half = prod(k // 2)
        out = half * half.galois(pow(g, k // 2, n))
        if k % 2:
            out = out * z.galois(pow(g, k - 1, n))
        return out

    if order == 1:
        return Cyclo.rational(1)
    return prod(order - 1).galois(g)


# ---------------------------------------------------------------------------

class Cyclo:
    """Exact element of the cyclotomic field Q(zeta_n).

    The value is ``sum(num[k] * zeta_n**k) / den`` with ``0 <= k < phi(n)``;
    ``den > 0`` and ``gcd(num..., den) == 1``.  Instances are immutable.
    """

    __slots__ = ("n", "num", "den", "_canon")

    def __init__(self, n: int, num: Sequence[int], den: int = 1):
        if n < 1:
            raise ValueError("modulus must be positive")
        if len(num) != totient(n):
            raise ValueError(f"need {totient(n)} coordinates for modulus {n}")
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            g = math.gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.n = n
        self.num = tuple(int(c) for c in num)
        self.den = int(den)
        self._canon = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q) -> "Cyclo":
        q = Fraction(q)
        return cls(1, [q.numerator], q.denominator)

    @classmethod
    def from_exponents(cls, n: int, coeffs) -> "Cyclo":
        """Build ``sum(c * zeta_n**k)`` from a mapping or sequence ``k -> c``."""
        items = coeffs.items() if hasattr(coeffs, "items") else enumerate(coeffs)
        fr = [(k, Fraction(c)) for k, c in items if c]
        den = 1
        for _, c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        vec = [0] * n
        for k, c in fr:
            vec[k % n] += int(c * den)
        return cls(n, _reduce(n, vec), den)

    @staticmethod
    def coerce(x) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction, _RationalABC)):
            return Cyclo.rational(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Cyclo")

    # -- structure --------------------------------------------------------
    def lift(self, N: int) -> "Cyclo":
        if N == self.n:
            return self
        if N % self.n:
            raise ValueError(f"cannot lift modulus {self.n} to {N}")
        step = N // self.n
        vec = [0] * N
        for k, c in enumerate(self.num):
            if c:
                vec[k * step] += c
        return Cyclo(N, _reduce(N, vec), self.den)

    def _pair(self, other) -> tuple["Cyclo", "Cyclo"]:
        other = Cyclo.coerce(other)
        if self.n == other.n:
            return self, other
        N = self.n * other.n // math.gcd(self.n, other.n)
        return self.lift(N), other.lift(N)

    def canonical(self) -> "Cyclo":
        """Same value written over the smallest possible modulus."""
        if self._canon is not None:
            return self._canon
        x = self
        changed = True
        while changed and x.n > 1:
            changed = False
            for p in prime_factors(x.n):
                y = _descend(x, p)
                if y is not None:
                    x = y
                    changed = True
                    break
        self._canon = x
        return x

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def is_algebraic_integer(self) -> bool:
        # the power basis is an integral basis of Z[zeta_n]
        return self.den == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise RepresentationError("value is not rational")
        return Fraction(self.num[0], self.den)

    def galois(self, a: int) -> "Cyclo":
        """Image under zeta_n -> zeta_n**a (a coprime to n)."""
        if math.gcd(a, self.n) != 1:
            raise ValueError("Galois exponent must be a unit")
        vec = [0] * self.n
        for k, c in enumerate(self.num):
            if c:
                vec[(a * k) % self.n] += c
        return Cyclo(self.n, _reduce(self.n, vec), self.den)

    def conj(self) -> "Cyclo":
        return self.galois(-1 % self.n) if self.n > 2 else self

    def is_real(self) -> bool:
        return self == self.conj()

    def real_part(self) -> "Cyclo":
        return (self + self.conj()) * Fraction(1, 2)

    def inv(self) -> "Cyclo":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return Cyclo.rational(Fraction(self.den, self.num[0]))
        x = self.canonical()
        # Galois norm tower: x * y is rational, so 1/x = y / (x * y)
        z = Cyclo(x.n, list(x.num), 1)
        y = Cyclo.rational(1)
        for g, order in _unit_tower(x.n):
            rest = _conjugate_product(z, g, order)
            y = y * rest
            z = z * rest
        norm = z.to_fraction()
        if norm == 0:
            raise DivisionByZero("element is not invertible")
        return (y * Fraction(x.den) * (1 / norm)).lift(self.n)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        den = a.den * b.den // math.gcd(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return Cyclo(a.n, [x * fa + y * fb for x, y in zip(a.num, b.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.n, [-c for c in self.num], self.den)

    def __sub__(self, other):
        try:
            other = Cyclo.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Cyclo.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyclo(self.n, [c * q.numerator for c in self.num], self.den * q.denominator)
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        if a.is_rational():
            a, b = b, a
        if b.is_rational():
            return Cyclo(a.n, [c * b.num[0] for c in a.num], a.den * b.den)
        return Cyclo(a.n, _reduce(a.n, _convolve(a.num, b.num)), a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = Cyclo.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return Cyclo.coerce(other) * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        result = Cyclo.rational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        if self.n == other.n:
            return self.num == other.num and self.den == other.den
        a, b = self._pair(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        c = self.canonical()
        if c.n == 1:
            return hash(Fraction(c.num[0], c.den))
        return hash((c.n, c.num, c.den))

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __bool__(self):
        return not self.is_zero()

    # -- numerics ---------------------------------------------------------
    def __complex__(self):
        if self.n <= 2:
            return complex(self.num[0] / self.den)
        return complex(np.dot(np.array(self.num, dtype=float), _zeta_powers(self.n)) / self.den)

    def __float__(self):
        return complex(self).real

    def __repr__(self):
        return f"Cyclo({format_scalar(self, approx=False)!r})"

    def __str__(self):
        return format_scalar(self)


def _descend(x: Cyclo, p: int) -> Cyclo | None:
    """Write x over modulus n/p if it lies in that subfield, else None."""
    n = x.n
    m = n // p
    y = [0] * m
    if m % p == 0:
        for k, c in enumerate(x.num):
            if c and k % p == 0:
                y[k // p] += c
        scale = 1
    else:
        pinv = pow(p, -1, m) if m > 1 else 0
        minv = pow(m, -1, p)
        for k, c in enumerate(x.num):
            if c:
                u = (k * pinv) % m
                v = (k * minv) % p
                y[u] += c * ((p - 1) if v == 0 else -1)
        scale = p - 1
    cand = Cyclo(m, _reduce(m, y), x.den * scale)
    back = cand.lift(n)
    if back.num == x.num and back.den == x.den:
        return cand
    return None


# ---------------------------------------------------------------------------
# constructors for the scalars that appear in modular data

def root_of_unity(k: int, N: int) -> Cyclo:
    """exp(2 pi i k / N) as an exact element of Q(zeta_N)."""
    if N < 1:
        raise ValueError("N must be positive")
    return Cyclo(N, _reduce(N, [0] * (k % N) + [1]))


def sin_ratio(a: int, b: int, n: int) -> Cyclo:
    """sin(a pi / n) / sin(b pi / n), exact over modulus 2n."""
    if n < 1:
        raise ValueError("n must be positive")
    if b % n == 0:
        raise DivisionByZero(f"sin({b}pi/{n}) vanishes")
    num = root_of_unity(a, 2 * n) - root_of_unity(-a, 2 * n)
    den = root_of_unity(b, 2 * n) - root_of_unity(-b, 2 * n)
    return num / den


def _sqrt_prime(p: int) -> Cyclo:
    if p == 2:
        return root_of_unity(1, 8) + root_of_unity(7, 8)
    gauss = Cyclo.from_exponents(p, {k: (1 if pow(k, (p - 1) // 2, p) == 1 else -1)
                                     for k in range(1, p)})
    if p % 4 == 1:
        return gauss
    # gauss == i * sqrt(p)
    return gauss * root_of_unity(3, 4)


def sqrt_int(m: int) -> Cyclo:
    """Positive square root of a non-negative integer (i*sqrt(|m|) if m < 0)."""
    if m < 0:
        return sqrt_int(-m) * root_of_unity(1, 4)
    if m == 0:
        return Cyclo.rational(0)
    square, free = 1, 1
    for p in prime_factors(m):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        square *= p ** (e // 2)
        if e % 2:
            free *= p
    out = Cyclo.rational(square)
    for p in prime_factors(free):
        out = out * _sqrt_prime(p)
    return out


# ---------------------------------------------------------------------------
# certified embeddings

@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class ComplexInterval:
    re: Interval
    im: Interval


@lru_cache(maxsize=4096)
def _trig_bounds(n: int, k: int, wp: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    saved = iv.prec
    iv.prec = wp
    try:
        ang = 2 * iv.pi * k / n
        c = iv.cos(ang)
        s = iv.sin(ang)
    finally:
        iv.prec = saved
    cl, ch = (Fraction(*to_rational(e)) for e in c._mpi_)
    sl, sh = (Fraction(*to_rational(e)) for e in s._mpi_)
    return cl, ch, sl, sh


def _bracket(x: Cyclo, wp: int, imag: bool) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for k, c in enumerate(x.num):
        if not c:
            continue
        cl, ch, sl, sh = _trig_bounds(x.n, k, wp)
        a, b = (sl, sh) if imag else (cl, ch)
        if c > 0:
            lo += c * a
            hi += c * b
        else:
            lo += c * b
            hi += c * a
    return lo / x.den, hi / x.den


def _grid_interval(x: Cyclo, precision: int, imag: bool) -> Interval:
    part = ((x - x.conj()) * Fraction(1, 2) * root_of_unity(3, 4)) if imag else x.real_part()
    if part.is_rational():
        q = part.to_fraction()
        return Interval(q, q)
    scale = 1 << precision
    wp = precision + sum(abs(c) for c in x.num).bit_length() + 16
    cap = max(precision_cap(), precision) + 256
    while wp <= 4 * cap:
        lo, hi = _bracket(part, wp, False)
        k_lo = math.floor(lo * scale)
        k_hi = math.floor(hi * scale)
        if k_lo == k_hi:
            return Interval(Fraction(k_lo, scale), Fraction(k_lo + 1, scale))
        wp *= 2
    raise PrecisionExhausted("could not isolate value on the dyadic grid")


def embed(x, precision: int = 53):
    """Certified enclosure of x of width <= 2**-precision.

    Irrational real parts get the dyadic grid cell ``[k/2**p, (k+1)/2**p]``
    containing them, so enclosures at increasing precision nest.  Rational
    parts are returned exactly.  Non-real x yields a :class:`ComplexInterval`.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    x = Cyclo.coerce(x)
    re = _grid_interval(x, precision, False)
    if x.is_real():
        return re
    return ComplexInterval(re, _grid_interval(x, precision, True))


def sign(x) -> int:
    """Sign of a real Cyclo, decided exactly or by interval refinement."""
    x = Cyclo.coerce(x)
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.num[0] > 0 else -1
    if not x.is_real():
        raise ValueError("sign of a non-real value")
    # cheap float filter first; certified afterwards
    approx = float(x)
    p = 32
    cap = precision_cap()
    while p <= cap:
        box = embed(x, p)
        if box.lo >= 0:
            return 1
        if box.hi <= 0:
            return -1
        p *= 2
    raise PrecisionExhausted(f"cannot separate {approx!r} from 0 within {cap} bits")


def compare(a, b) -> int:
    """-1, 0, 1 as a <, ==, > b for real cyclotomic values."""
    a, b = Cyclo.coerce(a), Cyclo.coerce(b)
    return sign(a - b)


# ---------------------------------------------------------------------------
# textual syntax:  "E(5)+E(5)^4+1", "3/2*E(8)^3", "sqrt(5)"

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_scalar(text: str) -> Cyclo:
    """Parse the exact-scalar syntax used in all file formats."""
    src = text.strip().replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad scalar {text!r}") from exc
    return _eval(tree.body, text)


def _eval(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Cyclo.rational(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        left = _eval(node.left, text)
        if isinstance(node.op, ast.Pow):
            exp = _eval(node.right, text)
            if not exp.is_rational() or exp.to_fraction().denominator != 1:
                raise ValueError(f"non-integer exponent in {text!r}")
            return left ** int(exp.to_fraction())
        right = _eval(node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        return left / right
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in ("E", "sqrt") and len(node.args) == 1 and not node.keywords):
        arg = _eval(node.args[0], text)
        if not arg.is_rational() or arg.to_fraction().denominator != 1:
            raise ValueError(f"{node.func.id} needs an integer argument in {text!r}")
        k = int(arg.to_fraction())
        if node.func.id == "E":
            if k < 1:
                raise ValueError(f"E(n) needs n >= 1 in {text!r}")
            return root_of_unity(1, k)
        return sqrt_int(k)
    raise ValueError(f"unsupported syntax in scalar {text!r}")


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x, approx: bool = True) -> str:
    """E(n)-syntax for x, optionally followed by a 4-place decimal."""
    x = Cyclo.coerce(x).canonical()
    terms = []
    for k, c in enumerate(x.num):
        if not c:
            continue
        q = Fraction(c, x.den)
        if k == 0:
            terms.append(_fmt_fraction(q))
            continue
        base = f"E({x.n})" + (f"^{k}" if k > 1 else "")
        if q == 1:
            terms.append(base)
        elif q == -1:
            terms.append("-" + base)
        else:
            terms.append(f"{_fmt_fraction(q)}*{base}")
    body = "+".join(terms).replace("+-", "-") if terms else "0"
    if not approx or x.is_rational():
        return body
    z = complex(x)
    if x.is_real():
        return f"{body} (~{z.real:.4f})"
    return f"{body} (~{z.real:.4f}{z.imag:+.4f}i)"


# ---------------------------------------------------------------------------
# numeric -> exact recognition

@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(a for a in range(n) if math.gcd(a, n) == 1)


@lru_cache(maxsize=None)
def _subgroups(n: int) -> tuple[frozenset, ...]:
    units = _units(n)
    found = {frozenset(_cyclic(g, n)) for g in units}
    frontier = set(found)
    while frontier:
        new = set()
        for s in frontier:
            for t in list(found):
                j = frozenset((a * b) % n for a in s for b in t)
                j = _close(j, n)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))


def _cyclic(g: int, n: int) -> set:
    out, x = {1 % n}, g % n
    while x not in out:
        out.add(x)
        x = (x * g) % n
    return out


def _close(s: frozenset, n: int) -> frozenset:
    s = set(s)
    while True:
        extra = {(a * b) % n for a in s for b in s} - s
        if not extra:
            return frozenset(s)
        s |= extra


@lru_cache(maxsize=None)
def _basis_inverse(n: int) -> np.ndarray:
    units = _units(n)
    k = np.arange(totient(n))
    V = np.exp(2j * np.pi * np.outer(units, k) / n)
    return np.linalg.inv(V)


def _poly_eval(coeffs_desc: Sequence[int], x: Cyclo) -> Cyclo:
    acc = Cyclo.rational(0)
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def recognize_algebraic_integer(value: complex, minpoly: Sequence[int],
                                max_modulus: int = 420, tol: float = 1e-6,
                                moduli: Iterable[int] | None = None) -> Cyclo:
    """Exact cyclotomic integer equal to ``value``.

    ``minpoly`` is the monic integer minimal polynomial (highest degree first)
    of which ``value`` is a root.  For each candidate modulus n the Galois
    conjugates of the sought element must be the roots of ``minpoly``; every
    consistent assignment of roots to cosets of an index-m subgroup of
    (Z/n)^* is tried, the power-basis coordinates are solved numerically,
    rounded to integers and then checked exactly.  ``moduli`` restricts the
    search to the given field moduli instead of 3..max_modulus.
    """
    coeffs = [int(c) for c in minpoly]
    if coeffs[0] != 1:
        raise RepresentationError("minimal polynomial must be monic over Z")
    m = len(coeffs) - 1
    if m == 1:
        return Cyclo.rational(-coeffs[1])
    roots = np.roots(np.array(coeffs, dtype=float))
    i0 = int(np.argmin(np.abs(roots - value)))
    others = [r for i, r in enumerate(roots) if i != i0]
    sep = min(abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:])
    for n in (sorted(set(moduli)) if moduli is not None else range(3, max_modulus + 1)):
        if n < 3 or n % 4 == 2 or totient(n) % m:
            continue
        units = _units(n)
        Vinv = _basis_inverse(n)
        for H in _subgroups(n):
            if len(H) * m != len(units):
                continue
            cosets, index = [], {}
            for a in units:
                if a in index:
                    continue
                coset = frozenset((a * h) % n for h in H)
                for b in coset:
                    index[b] = len(cosets)
                cosets.append(coset)
            perms = list(permutations(others))
            R = np.empty((len(perms), len(units)), dtype=complex)
            for p_idx, perm in enumerate(perms):
                assign = (roots[i0],) + perm
                R[p_idx] = [assign[index[a]] for a in units]
            C = R @ Vinv.T
            err = np.max(np.abs(C - np.round(C.real)), axis=1)
            for p_idx in np.nonzero(err < tol)[0]:
                ints = [int(v) for v in np.round(C[p_idx].real)]
                cand = Cyclo(n, ints)
                if abs(complex(cand) - value) > sep / 4:
                    continue
                if _poly_eval(coeffs, cand).is_zero():
                    return cand.canonical()
    raise RepresentationError(f"{value!r} not found in cyclotomic fields up to modulus {max_modulus}")
