"""Witt vectors over divisor-closed index sets and the generalized Witt pairing.

Coordinates live either in a coefficient ring (plain Witt vectors) or in a
ring of iterated Laurent series (the pairing's right argument).  Addition is
computed through ghost coordinates ``w(i) = sum_{d|i} d w_d^{i/d}``; the
inverse passage divides by the index and certifies integrality, which over an
integral base is the classical integrality of Witt addition made executable.

``witt_pair`` sends ``(f_1, ..., f_n | g]`` to the Witt vector over the
coefficient ring whose i-th ghost coordinate is
``res(g(i) dlog f_1 ^ ... ^ dlog f_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import Coef
from .errors import (
    InexactDivisionError,
    InternalConsistencyError,
    ParseError,
    UnsupportedRingError,
)
from .forms import DiffForm, dlog, wedge
from .laurent import LaurentElt, monomial, stable_coefficient, zero

__all__ = [
    "IndexSet", "WittVector", "GhostVector", "ghost", "ghost_to_coords",
    "witt_add", "witt_neg", "upsilon", "witt_pair", "project",
]


def _divisors(i):
    return [d for d in range(1, i + 1) if i % d == 0]


@dataclass(frozen=True)
class IndexSet:
    """A finite divisor-closed set of positive integers."""

    members: tuple

    def __post_init__(self):
        ms = self.members
        if ms != tuple(sorted(set(ms))) or any(i < 1 for i in ms):
            raise ParseError(f"bad index set {ms}")
        have = set(ms)
        for i in ms:
            for d in _divisors(i):
                if d not in have:
                    raise ParseError(f"{ms} is not divisor-closed: {d} | {i} is missing")

    @staticmethod
    def closure(seed):
        out = set()
        for i in seed:
            out.update(_divisors(i))
        return IndexSet(tuple(sorted(out)))

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, i):
        return i in self.members

    def __len__(self):
        return len(self.members)


@dataclass
class WittVector:
    S: IndexSet
    coords: dict

    def __post_init__(self):
        if set(self.coords) != set(self.S.members):
            raise ParseError("coordinates do not match the index set")

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.S == other.S and self.coords == other.coords


@dataclass
class GhostVector:
    S: IndexSet
    ghost: dict

    def __post_init__(self):
        if set(self.ghost) != set(self.S.members):
            raise ParseError("ghost coordinates do not match the index set")


def ghost(w: WittVector) -> GhostVector:
    out = {}
    for i in w.S:
        acc = None
        for d in _divisors(i):
            term = w.coords[d] ** (i // d) * d
            acc = term if acc is None else acc + term
        out[i] = acc
    return GhostVector(w.S, out)


def _divide(value, k):
    """value / k plus an integrality flag; Coef and series values."""
    if isinstance(value, Coef):
        return value.divide_by_int(k)
    if isinstance(value, LaurentElt):
        out = {}
        integral = True
        for l, c in value.terms.items():
            q, ok = c.divide_by_int(k)
            integral = integral and ok
            out[l] = q
        return LaurentElt._make(value.ring, value.n, out, value.hi, value.floor), integral
    raise ParseError(f"cannot divide {value!r}")


def ghost_to_coords(g: GhostVector):
    """Solve the triangular ghost system; returns (vector, all divisions integral).

    Over a base without rationals an inexact division raises; over the
    rationals the flag records whether the result needed new denominators.
    """
    coords = {}
    integral = True
    for i in sorted(g.S):
        acc = g.ghost[i]
        for d in _divisors(i):
            if d == i:
                continue
            acc = acc - coords[d] ** (i // d) * d
        coords[i], ok = _divide(acc, i)
        integral = integral and ok
    return WittVector(g.S, coords), integral


def witt_add(w: WittVector, v: WittVector) -> WittVector:
    if w.S != v.S:
        raise ParseError("index sets differ")
    ga, gb = ghost(w), ghost(v)
    total = GhostVector(w.S, {i: ga.ghost[i] + gb.ghost[i] for i in w.S})
    try:
        out, integral = ghost_to_coords(total)
    except InexactDivisionError as exc:
        raise InternalConsistencyError(
            f"Witt addition produced a non-integral coordinate: {exc.detail}") from exc
    if not integral:
        raise InternalConsistencyError("Witt addition produced a non-integral coordinate")
    return out


def witt_add_rational(w: WittVector, v: WittVector) -> WittVector:
    """Witt addition without the integrality assertion (rational coefficients)."""
    if w.S != v.S:
        raise ParseError("index sets differ")
    ga, gb = ghost(w), ghost(v)
    out, _ = ghost_to_coords(GhostVector(w.S, {i: ga.ghost[i] + gb.ghost[i] for i in w.S}))
    return out


def witt_neg(w: WittVector) -> WittVector:
    g = ghost(w)
    try:
        out, integral = ghost_to_coords(GhostVector(w.S, {i: -g.ghost[i] for i in w.S}))
    except InexactDivisionError as exc:
        raise InternalConsistencyError(
            f"Witt negation produced a non-integral coordinate: {exc.detail}") from exc
    if not integral:
        raise InternalConsistencyError("Witt negation produced a non-integral coordinate")
    return out


def project(w: WittVector, sub: IndexSet) -> WittVector:
    if any(i not in w.S for i in sub):
        raise ParseError(f"{sub.members} is not a subset of {w.S.members}")
    return WittVector(sub, {i: w.coords[i] for i in sub})


def upsilon(w: WittVector, degree_bound=None) -> LaurentElt:
    """The product embedding w -> prod (1 - w_i x^i) into 1 + x A[[x]].

    Coordinates must be ring elements; the result is a polynomial in one
    variable x, truncated to ``degree_bound`` when given.
    """
    sample = w.coords[min(w.S)] if len(w.S) else None
    if sample is None or not isinstance(sample, Coef):
        raise ParseError("upsilon needs ring-valued coordinates")
    ring = sample.ring
    out = monomial(ring, 1, (0,))
    for i in sorted(w.S):
        out = out * (monomial(ring, 1, (0,)) - monomial(ring, 1, (i,), w.coords[i]))
    if degree_bound is not None:
        terms = {l: c for l, c in out.terms.items() if l[0] <= degree_bound}
        out = LaurentElt._make(ring, 1, terms, (degree_bound,), (0,))
    return out


def witt_pair(fs, g: WittVector, max_doublings=6):
    """The pairing (f_1, ..., f_n | g] as a Witt vector over the coefficients.

    ``g`` has iterated-Laurent-series coordinates over the same ring as the
    ``f_i``.  Ghost coordinates of the result are residues; passage back to
    Witt coordinates must be integral over integral bases (lifting through
    the integers for modular ones), anything else is an internal fault.
    """
    fs = list(fs)
    if not fs:
        raise ParseError("the pairing needs at least one invertible series")
    ring, n = fs[0].ring, fs[0].n
    if len(fs) != n:
        raise ParseError(f"the pairing needs {n} series over {n} variables")
    if ring.base == "mod":
        lifted_ring, lift, drop = ring.integer_lift()
        fs_l = [f.map_coefficients(lifted_ring, lift) for f in fs]
        g_l = WittVector(g.S, {i: v.map_coefficients(lifted_ring, lift)
                               for i, v in g.coords.items()})
        out = witt_pair(fs_l, g_l, max_doublings)
        return WittVector(out.S, {i: drop(v) for i, v in out.coords.items()})

    gg = ghost(g)
    residues = {}
    for i in g.S:
        series = gg.ghost[i]

        def build(window, series=series):
            form = DiffForm.from_series(series)
            for f in fs:
                form = wedge(form, dlog(f, window))
            top = form.comps.get(tuple(range(1, n + 1)))
            return top if top is not None else zero(ring, n)

        residues[i] = stable_coefficient(build, (-1,) * n, max_doublings=max_doublings)
    try:
        out, integral = ghost_to_coords(GhostVector(g.S, residues))
    except InexactDivisionError as exc:
        raise InternalConsistencyError(
            f"Witt pairing produced a non-integral coordinate: {exc.detail}") from exc
    if ring.base != "Q" and not integral:
        raise InternalConsistencyError("Witt pairing produced a non-integral coordinate")
    return out
