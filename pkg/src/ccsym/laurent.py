"""Sparse exact arithmetic for iterated Laurent polynomials and windowed series.

Elements live in ``A((t_1))...((t_n))`` for a coefficient ring ``A`` from
:mod:`ccsym.coeff`.  The multi-index order is lexicographic with ``t_n`` most
significant.  An element is either *exact* (a genuine Laurent polynomial,
complete knowledge) or *windowed*: its stored coefficients are certified
correct for every index ``tau <= hi`` componentwise, and its true support is
certified to lie above ``floor`` componentwise.  All operations propagate
these certificates, so a coefficient read off a windowed element is exact or
raises; there is no silent truncation error.

Infinite expansions (geometric inverses, log, exp, composition) are summed
with a budget derived from the nilpotency index of the coefficient ring and
the requested window.  Budgets exist only when every non-nilpotent monomial
of the expansion generator has componentwise-nonnegative exponent (the
"orthant" condition); generators with unit coefficients in mixed directions,
such as ``1 - t1^-1*t2``, have lex-shaped tails that no box window can
capture and are rejected with a stability error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeff import Coef, Ring
from .errors import (
    InternalConsistencyError,
    NotInvertibleError,
    NotSharpError,
    ParseError,
    RingMismatchError,
    StabilityExhaustedError,
    UnsupportedRingError,
    WindowExceededError,
)

_EXPANSION_SANITY = 20000


# -- multi-index order -------------------------------------------------------

def lex_key(l):
    """Sort key realizing the order: compare t_n first, then t_{n-1}, ..."""
    return tuple(reversed(l))


def lex_le(l, m):
    return lex_key(l) <= lex_key(m)


def lex_lt(l, m):
    return lex_key(l) < lex_key(m)


def lex_positive(l):
    return lex_key(l) > (0,) * len(l)


def lex_negative(l):
    return lex_key(l) < (0,) * len(l)


def _add_idx(l, m):
    return tuple(a + b for a, b in zip(l, m))


def _sub_idx(l, m):
    return tuple(a - b for a, b in zip(l, m))


def _min_idx(l, m):
    return tuple(min(a, b) for a, b in zip(l, m))


def _le_idx(l, m):
    return all(a <= b for a, b in zip(l, m))


@dataclass(frozen=True)
class Window:
    """A box ``[lo, hi]`` in Z^n; ``None`` in window positions means Exact."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi) or any(a > b for a, b in zip(self.lo, self.hi)):
            raise ParseError(f"bad window lo={self.lo} hi={self.hi}")

    @staticmethod
    def box(lo, hi):
        return Window(tuple(lo), tuple(hi))

    @staticmethod
    def cube(n, radius):
        return Window((-radius,) * n, (radius,) * n)

    def to_json(self):
        return {"lo": list(self.lo), "hi": list(self.hi)}


class LaurentElt:
    """A sparse iterated Laurent polynomial, exact or certified on a window."""

    __slots__ = ("ring", "n", "terms", "hi", "floor")

    def __init__(self, ring, n, terms, hi=None, floor=None):
        self.ring = ring
        self.n = n
        self.terms = terms
        self.hi = hi
        self.floor = floor

    # -- construction ---------------------------------------------------------

    @staticmethod
    def _make(ring, n, raw, hi=None, floor=None):
        terms = {}
        for l, c in raw.items():
            if not c:
                continue
            if hi is not None and not _le_idx(l, hi):
                continue
            terms[l] = c
        if hi is None:
            floor = None
        return LaurentElt(ring, n, terms, hi, floor)

    def is_exact(self):
        return self.hi is None

    def is_zero(self):
        return not self.terms and self.hi is None

    def __bool__(self):
        return bool(self.terms) or self.hi is not None

    def support_lo(self):
        it = iter(self.terms)
        first = next(it, None)
        if first is None:
            return None
        lo = first
        for l in it:
            lo = tuple(min(a, b) for a, b in zip(lo, l))
        return lo

    def support_hi(self):
        it = iter(self.terms)
        first = next(it, None)
        if first is None:
            return None
        hi = first
        for l in it:
            hi = tuple(max(a, b) for a, b in zip(hi, l))
        return hi

    def _floor(self):
        """Certified componentwise lower bound of the true support."""
        if self.hi is None:
            return self.support_lo()
        return self.floor

    # -- coefficient access ----------------------------------------------------

    def coefficient(self, l):
        l = tuple(l)
        if self.hi is not None and not _le_idx(l, self.hi):
            raise WindowExceededError(
                f"coefficient at {l} lies outside the certified region (hi={self.hi})")
        c = self.terms.get(l)
        return c if c is not None else self.ring.zero()

    def constant_coefficient(self):
        return self.coefficient((0,) * self.n)

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentElt):
            raise RingMismatchError(f"expected a series, got {other!r}")
        self.ring.compatible(other.ring)
        if self.n != other.n:
            raise RingMismatchError(f"variable count mismatch: {self.n} vs {other.n}")

    def _coerce(self, other):
        if isinstance(other, LaurentElt):
            self._check(other)
            return other
        if isinstance(other, Coef):
            self.ring.compatible(other.ring)
            return LaurentElt._make(self.ring, self.n, {(0,) * self.n: other})
        if isinstance(other, (int, Fraction)):
            return LaurentElt._make(self.ring, self.n,
                                    {(0,) * self.n: self.ring.from_scalar(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        raw = dict(self.terms)
        for l, c in other.terms.items():
            cur = raw.get(l)
            raw[l] = c if cur is None else cur + c
        hi = _combine_hi_add(self, other)
        floor = _combine_floor_add(self, other)
        return LaurentElt._make(self.ring, self.n, raw, hi, floor)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElt(self.ring, self.n, {l: -c for l, c in self.terms.items()},
                          self.hi, self.floor)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Coef, int, Fraction)):
            c = other if isinstance(other, Coef) else self.ring.from_scalar(other)
            if not c:
                return zero(self.ring, self.n)
            return LaurentElt._make(self.ring, self.n,
                                    {l: v * c for l, v in self.terms.items()},
                                    self.hi, self.floor)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if (self.is_exact() and not self.terms) or (other.is_exact() and not other.terms):
            return zero(self.ring, self.n)
        hi = _combine_hi_mul(self, other)
        fa, fb = self._floor(), other._floor()
        floor = None if (fa is None or fb is None or hi is None) else _add_idx(fa, fb)
        raw = _mul_terms(self.terms, other.terms, hi)
        return LaurentElt._make(self.ring, self.n, raw, hi, floor)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise NotInvertibleError("negative powers need an explicit invert(...)")
        acc = one(self.ring, self.n)
        for _ in range(k):
            acc = acc * self
        return acc

    def shift(self, l):
        """Multiply by the monomial t^l."""
        l = tuple(l)
        hi = None if self.hi is None else _add_idx(self.hi, l)
        floor = None if self.floor is None else _add_idx(self.floor, l)
        return LaurentElt(self.ring, self.n, {_add_idx(m, l): c for m, c in self.terms.items()},
                          hi, floor)

    def partial(self, i):
        """d/dt_i, 1-based."""
        e = tuple(1 if j == i - 1 else 0 for j in range(self.n))
        raw = {}
        for l, c in self.terms.items():
            if l[i - 1] == 0:
                continue
            raw[_sub_idx(l, e)] = c * l[i - 1]
        hi = None if self.hi is None else _sub_idx(self.hi, e)
        floor = None if self.floor is None else _sub_idx(self.floor, e)
        return LaurentElt._make(self.ring, self.n, raw, hi, floor)

    def map_coefficients(self, new_ring, fn):
        return LaurentElt(new_ring, self.n, {l: fn(c) for l, c in self.terms.items()},
                          self.hi, self.floor)

    # -- predicates ---------------------------------------------------------------

    def is_sharp_add(self):
        """Constant and lex-negative coefficients nilpotent; positive part free."""
        self._require_exact("sharp test")
        zero_idx = (0,) * self.n
        for l, c in self.terms.items():
            if (l == zero_idx or lex_negative(l)) and not c.is_nilpotent():
                return False
        return True

    def is_sharp_mult(self):
        return (self - one(self.ring, self.n)).is_sharp_add()

    def _require_exact(self, what):
        if self.hi is not None:
            raise InternalConsistencyError(f"{what} needs an exact element")

    # -- comparison / display --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Coef)):
            other = self._coerce(other)
        if not isinstance(other, LaurentElt):
            return NotImplemented
        return (self.ring == other.ring and self.n == other.n and self.terms == other.terms
                and self.hi == other.hi and self.floor == other.floor)

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for l in sorted(self.terms, key=lex_key):
                c = self.terms[l]
                mono = "*".join(f"t{j + 1}^{e}" for j, e in enumerate(l) if e)
                cs = str(c)
                if "+" in cs or " " in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}" if mono else cs)
            body = " + ".join(parts)
        if self.hi is not None:
            body += f" [hi={self.hi}]"
        return body

    __repr__ = __str__

    # -- serialization -------------------------------------------------------------

    def to_json(self):
        terms = [{"exp": list(l), "coef": str(self.terms[l])}
                 for l in sorted(self.terms, key=lex_key)]
        window = None
        if self.hi is not None:
            lo = self.floor if self.floor is not None else self.support_lo() or (0,) * self.n
            lo = _min_idx(lo, self.hi)
            window = {"lo": list(lo), "hi": list(self.hi)}
        return {"n": self.n, "terms": terms, "window": window}


def _combine_hi_add(a, b):
    if a.hi is None and b.hi is None:
        return None
    if a.hi is None:
        return b.hi
    if b.hi is None:
        return a.hi
    return _min_idx(a.hi, b.hi)


def _combine_floor_add(a, b):
    hi = _combine_hi_add(a, b)
    if hi is None:
        return None
    fa, fb = a._floor(), b._floor()
    if fa is None:
        return fb
    if fb is None:
        return fa
    return _min_idx(fa, fb)


def _combine_hi_mul(a, b):
    """Trust ceiling of a product: every contributing split must be covered."""
    if a.hi is None and b.hi is None:
        return None
    bounds = []
    if a.hi is not None:
        fb = b._floor()
        if fb is None:
            fb = (0,) * b.n
        bounds.append(_add_idx(a.hi, fb))
    if b.hi is not None:
        fa = a._floor()
        if fa is None:
            fa = (0,) * a.n
        bounds.append(_add_idx(b.hi, fa))
    hi = bounds[0]
    for other in bounds[1:]:
        hi = _min_idx(hi, other)
    return hi


def _mul_terms(a, b, hi):
    out = {}
    for la, ca in a.items():
        for lb, cb in b.items():
            l = _add_idx(la, lb)
            if hi is not None and not _le_idx(l, hi):
                continue
            c = ca * cb
            if not c:
                continue
            cur = out.get(l)
            out[l] = c if cur is None else cur + c
    return out


# -- constructors ---------------------------------------------------------------

def zero(ring, n):
    return LaurentElt(ring, n, {})


def one(ring, n):
    return LaurentElt(ring, n, {(0,) * n: ring.one()})


def monomial(ring, n, l, coef=1):
    c = coef if isinstance(coef, Coef) else ring.from_scalar(coef)
    return LaurentElt._make(ring, n, {tuple(l): c})


def t_var(ring, n, j):
    """The variable t_j, 1-based."""
    if not 1 <= j <= n:
        raise ParseError(f"t_{j} is not one of t_1..t_{n}")
    return monomial(ring, n, tuple(1 if i == j - 1 else 0 for i in range(n)))


def from_terms(ring, n, pairs, window=None):
    raw = {}
    for l, c in pairs:
        l = tuple(l)
        if len(l) != n:
            raise ParseError(f"index {l} does not have {n} entries")
        if not isinstance(c, Coef):
            c = ring.from_scalar(c)
        else:
            ring.compatible(c.ring)
        cur = raw.get(l)
        raw[l] = c if cur is None else cur + c
    if window is None:
        return LaurentElt._make(ring, n, raw)
    raw = {l: c for l, c in raw.items() if _le_idx(window.lo, l)}
    return LaurentElt._make(ring, n, raw, tuple(window.hi), tuple(window.lo))


def series_arith(op, f, g):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ParseError(f"unknown operation {op!r}")


# -- valuation and decomposition ---------------------------------------------------

def valuation(f: LaurentElt):
    """The lex-smallest index carrying an invertible coefficient.

    Exact invertible input required: every lex-smaller coefficient must be
    nilpotent.  This is the discrete component of the unit-group splitting.
    """
    f._require_exact("valuation")
    f.ring.requires_connected()
    if not f.terms:
        raise NotInvertibleError("the zero series is not invertible")
    for l in sorted(f.terms, key=lex_key):
        c = f.terms[l]
        if c.is_invertible():
            return l
        if not c.is_nilpotent():
            raise NotInvertibleError(
                f"coefficient {c} at {l} is neither invertible nor nilpotent")
    raise NotInvertibleError("no invertible coefficient; not a unit")


def neg_part(f: LaurentElt):
    return LaurentElt(f.ring, f.n,
                      {l: c for l, c in f.terms.items() if lex_negative(l)}, f.hi, f.floor)


def pos_part(f: LaurentElt):
    return LaurentElt(f.ring, f.n,
                      {l: c for l, c in f.terms.items() if lex_positive(l)}, f.hi, f.floor)


@dataclass
class UnitDecomposition:
    """f = t^nu * c * v_plus * v_minus, the canonical unit-group splitting."""

    nu: tuple
    c: Coef
    v_plus: LaurentElt
    v_minus: LaurentElt

    def product(self):
        out = (self.v_plus * self.v_minus) * self.c
        return out.shift(self.nu)

    def to_json(self):
        return {"nu": list(self.nu), "c": str(self.c),
                "v_plus": self.v_plus.to_json(), "v_minus": self.v_minus.to_json()}


def _invert_nil_unipotent(u: LaurentElt):
    """(1+u)^{-1} for u with all coefficients nilpotent; exact finite series."""
    ring = u.ring
    acc = one(ring, u.n)
    p = -u
    for _ in range(ring.nil_index + 1):
        if not p.terms:
            return acc
        acc = acc + p
        p = p * (-u)
    raise InternalConsistencyError("nilpotent geometric series failed to terminate")


def coarse_split(f: LaurentElt):
    """f = t^nu * c * S with c the leading coefficient and S sharp, constant 1.

    This split is total on exact invertible input and is what the symbol and
    inversion routines consume; the finer lex-positive/lex-negative splitting
    of S lives in :func:`decompose`.
    """
    nu = valuation(f)
    g = f.shift(tuple(-x for x in nu))
    c = g.constant_coefficient()
    return nu, c, g * c.inverse()


_DIVISION_CAP = 20000


def _divide_neg_defect(d: LaurentElt, q: LaurentElt):
    """Largest delta with strictly negative support and delta * nonneg(q) = d
    up to a lex-nonnegative remainder; lex-minimum elimination.

    Every step clears the current lex-minimal term of the remainder and only
    introduces lex-greater ones, so the minimum climbs strictly; a remainder
    that keeps climbing below zero past the step cap signals a lex-negative
    factor with no polynomial description.
    """
    ring, n = d.ring, d.n
    p_nonneg = q - neg_part(q)
    c_q = p_nonneg.constant_coefficient()
    inv_cq = c_q.inverse()
    delta = {}
    r = d
    for _ in range(_DIVISION_CAP):
        if not r.terms:
            break
        lam = min(r.terms, key=lex_key)
        if not lex_negative(lam):
            break
        coef = r.terms[lam] * inv_cq
        delta[lam] = coef
        r = r - monomial(ring, n, lam, coef) * p_nonneg
    else:
        raise StabilityExhaustedError(
            "the lex-negative unit factor admits no polynomial description")
    return LaurentElt._make(ring, n, delta)


def decompose(f: LaurentElt) -> UnitDecomposition:
    """Split an exact invertible series into monomial, constant and unipotent parts.

    The lex-negative factor is peeled by clearing the negative defect of
    ``S * v_minus^{-1}``, dividing it exactly by the nonnegative part; each
    pass pushes the defect twice as deep into the nilradical.  Inputs whose
    lex-negative factor is not a Laurent polynomial (possible once n >= 2)
    fail with a stability error rather than looping.
    """
    nu, c, s = coarse_split(f)
    ring = f.ring
    unit = one(ring, f.n)
    v_minus = unit
    inv_v_minus = unit
    for _ in range(ring.nil_index.bit_length() + 3):
        q = s * inv_v_minus
        d = neg_part(q)
        if not d.terms:
            break
        delta = _divide_neg_defect(d, q)
        v_minus = v_minus * (unit + delta)
        inv_v_minus = inv_v_minus * _invert_nil_unipotent(delta)
    else:
        raise InternalConsistencyError("lex-negative peeling did not terminate")
    c_extra = q.constant_coefficient()
    if not c_extra.is_invertible():
        raise InternalConsistencyError("constant of the nonnegative part is not a unit")
    v_plus = q * c_extra.inverse()
    return UnitDecomposition(nu, c * c_extra, v_plus, v_minus)


# -- certified series expansion ------------------------------------------------------

def _expand_series(g: LaurentElt, coeff_at, hi, max_degree=None):
    """Sum of ``coeff_at(i) * g^i`` for i >= 0, certified on ``{tau <= hi}``.

    Non-nilpotent monomials of ``g`` must be lex-positive and componentwise
    nonnegative; their count inside any window is then bounded, nilpotent
    factors are bounded by the ring's nil index, and the partial products are
    evaluated on a padded work box that provably loses nothing below the
    ceiling.  Returns an exact element whenever the series terminates by
    nilpotency alone.  A windowed generator is accepted when its support
    floor is componentwise nonnegative (no unknown term can then re-enter the
    certified box); the result's ceiling shrinks to the generator's.
    """
    ring = g.ring
    n = g.n
    if g.hi is not None:
        floor = g._floor() or (0,) * n
        if any(x < 0 for x in floor):
            raise StabilityExhaustedError(
                "cannot expand over a windowed generator with negative support floor")
        hi = g.hi if hi is None else tuple(min(a, b) for a, b in zip(hi, g.hi))
    a_budget = ring.nil_index - 1
    unit_idx = []
    nil_idx = []
    for l, c in g.terms.items():
        (nil_idx if c.is_nilpotent() else unit_idx).append(l)
    for l in unit_idx:
        if not lex_positive(l):
            raise InternalConsistencyError(
                f"expansion generator has a unit coefficient at non-positive index {l}")

    def scalar_at(i):
        c = coeff_at(i)
        return c if isinstance(c, Coef) else ring.from_scalar(c)

    if not unit_idx and g.hi is None:
        budget = a_budget
        if max_degree is not None and max_degree < budget:
            budget = max_degree
        acc = one(ring, n) * scalar_at(0)
        p = one(ring, n)
        for i in range(1, budget + 1):
            p = p * g
            if not p.terms:
                break
            acc = acc + p * scalar_at(i)
        else:
            p = p * g
            if p.terms:
                raise StabilityExhaustedError(
                    "series coefficients exhausted before the expansion terminated")
        return acc

    if any(x < 0 for l in unit_idx for x in l):
        raise StabilityExhaustedError(
            "expansion generator has a unit coefficient in a mixed lex direction; "
            "its tail cannot be captured by any box window")
    if hi is None:
        raise StabilityExhaustedError("infinite expansion requires a window")

    negnil = tuple(min((min(0, l[j]) for l in nil_idx), default=0) for j in range(n))
    posnil = tuple(max((max(0, l[j]) for l in nil_idx), default=0) for j in range(n))
    posu = tuple(max((l[j] for l in unit_idx), default=0) for j in range(n))
    b_budget = max(0, sum(hi) + a_budget * sum(-x for x in negnil))
    budget = b_budget + a_budget
    clipped = max_degree is not None and max_degree < budget
    if clipped:
        budget = max_degree
    work_hi = tuple(min(b_budget * posu[j] + a_budget * posnil[j],
                        hi[j] + a_budget * (-negnil[j])) for j in range(n))
    work_lo = tuple(a_budget * negnil[j] for j in range(n))
    if budget > _EXPANSION_SANITY:
        raise StabilityExhaustedError(f"expansion budget {budget} exceeds the sanity bound")

    acc = {(0,) * n: scalar_at(0)}
    p = {(0,) * n: ring.one()}
    for i in range(1, budget + 1):
        nxt = {}
        for la, ca in p.items():
            for lb, cb in g.terms.items():
                l = _add_idx(la, lb)
                if not all(work_lo[j] <= l[j] <= work_hi[j] for j in range(n)):
                    continue
                c = ca * cb
                if not c:
                    continue
                cur = nxt.get(l)
                nxt[l] = c if cur is None else cur + c
        p = {l: c for l, c in nxt.items() if c}
        if not p:
            break
        s = scalar_at(i)
        if s:
            for l, c in p.items():
                v = c * s
                if not v:
                    continue
                cur = acc.get(l)
                acc[l] = v if cur is None else cur + v
    if clipped and p:
        raise StabilityExhaustedError(
            "series coefficients exhausted before the expansion escaped the window")
    return LaurentElt._make(ring, n, acc, tuple(hi), work_lo)


def _geom(i):
    return 1 if i % 2 == 0 else -1


def invert(f: LaurentElt, window: Window = None) -> LaurentElt:
    """Inverse of an exact invertible series, exact where possible.

    The monomial and constant factors invert exactly; the sharp factor
    contributes a geometric series, which is itself exact whenever its
    generator is elementwise nilpotent and otherwise runs under the
    certified window protocol.
    """
    nu, c, s = coarse_split(f)
    ring, n = f.ring, f.n
    g = s - one(ring, n)
    if not g.terms:
        inv_s = one(ring, n)
    else:
        internal_hi = None
        if window is not None:
            internal_hi = tuple(window.hi[j] + nu[j] for j in range(n))
        inv_s = _expand_series(g, _geom, internal_hi)
    return (inv_s * c.inverse()).shift(tuple(-x for x in nu))


def is_sharp_add(f: LaurentElt) -> bool:
    """Constant and lex-negative coefficients nilpotent (exact input)."""
    return f.is_sharp_add()


def is_sharp_mult(f: LaurentElt) -> bool:
    """f = 1 + g with g additively sharp (exact input)."""
    return f.is_sharp_mult()


def _sharp_add_ok(g: LaurentElt):
    """Sharpness of the stored terms; exactness handled by the expansion."""
    zero_idx = (0,) * g.n
    for l, c in g.terms.items():
        if (l == zero_idx or lex_negative(l)) and not c.is_nilpotent():
            return False
    return True


def log_sharp(f: LaurentElt, window: Window = None) -> LaurentElt:
    if not f.ring.has_rationals():
        raise UnsupportedRingError("log needs rational coefficients")
    g = f - one(f.ring, f.n)
    if not _sharp_add_ok(g):
        raise NotSharpError(f"{f} is not multiplicatively sharp")
    return _expand_series(g, lambda i: Fraction((-1) ** (i + 1), i) if i else 0,
                          None if window is None else tuple(window.hi))


def exp_sharp(g: LaurentElt, window: Window = None) -> LaurentElt:
    if not g.ring.has_rationals():
        raise UnsupportedRingError("exp needs rational coefficients")
    if not _sharp_add_ok(g):
        raise NotSharpError(f"{g} is not additively sharp")
    fact = [Fraction(1)]

    def coeff(i):
        while len(fact) <= i:
            fact.append(fact[-1] / len(fact))
        return fact[i]

    return _expand_series(g, coeff, None if window is None else tuple(window.hi))


def compose_series(phi_coeffs, f: LaurentElt, window: Window = None) -> LaurentElt:
    """phi(f) for a univariate power series phi given by its coefficients."""
    if not _sharp_add_ok(f):
        raise NotSharpError(f"{f} is not additively sharp")
    coeffs = list(phi_coeffs)
    return _expand_series(f, lambda i: coeffs[i],
                          None if window is None else tuple(window.hi),
                          max_degree=len(coeffs) - 1)


# -- the stability protocol -----------------------------------------------------------

def _grow_hi(h):
    return h * 2 if h > 0 else 2


def _grow_lo(l):
    return l * 2 if l < 0 else -2


def default_window(n, target=None, radius=2):
    target = target or (0,) * n
    lo = tuple(min(-radius, t - 1) for t in target)
    hi = tuple(max(radius, t + 1) for t in target)
    return Window(lo, hi)


def stable_coefficient(build, target, initial_window: Window = None, max_doublings=6):
    """Evaluate ``build(window)`` on growing windows until the target
    coefficient is certified, or fail loudly.

    ``build`` is called with the current window and must return a
    :class:`LaurentElt`.  Because every windowed value carries its own
    exactness certificate, a returned coefficient is provably correct; inputs
    whose expansions cannot converge in any box raise immediately.
    """
    target = tuple(target)
    win = initial_window or default_window(len(target), target)
    last = None
    for _ in range(max_doublings + 1):
        try:
            return build(win).coefficient(target)
        except WindowExceededError as exc:
            last = exc
            win = Window(tuple(_grow_lo(x) for x in win.lo),
                         tuple(_grow_hi(x) for x in win.hi))
    raise StabilityExhaustedError(
        f"no window up to {win.hi} certified the coefficient at {target}"
        + (f" ({last.detail})" if last else ""))


# -- serialization ---------------------------------------------------------------------

def series_from_json(ring: Ring, doc) -> LaurentElt:
    try:
        n = int(doc["n"])
        pairs = [(tuple(int(x) for x in t["exp"]), ring.parse_coef(t["coef"]))
                 for t in doc.get("terms", [])]
        window = doc.get("window")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad series document: {exc}") from exc
    win = None
    if window is not None:
        win = Window(tuple(int(x) for x in window["lo"]), tuple(int(x) for x in window["hi"]))
    return from_terms(ring, n, pairs, win)
