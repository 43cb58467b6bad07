"""The universal power series behind the symbol, over generic coefficients.

``phi_coefficients`` instruments the symbol with one nilpotent generator
``x_{i,l}`` of order D+1 (total degree capped at D) per generic slot ``i``
and exponent ``l`` in a finite window, evaluates

    CC_n(1 + sum x_{1,l} t^l, ..., 1 + sum x_{p,l} t^l, t_{j_1}, ..., t_{j_q})

over the rationals, and reads off the resulting polynomial.  The
coefficients are integers and every monomial has weight zero (the weight of
``x_{i,l}`` being ``l``); both facts are checkable reports here and the
integrality is what makes ``evaluate_phi`` a valid route to the symbol over
bases without rationals: substituting nilpotent Laurent-polynomial
coefficients into the series needs no denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeff import RingSpec, ring_new
from .errors import InternalConsistencyError, NotSharpError, ParseError
from .laurent import Window, from_terms, one, t_var
from .symbol import cc

__all__ = [
    "PhiKey", "UniversalSeries", "phi_coefficients", "check_integrality",
    "check_weight_zero", "evaluate_phi",
]


@dataclass(frozen=True)
class PhiKey:
    """n and the strictly increasing tuple of variable-slot positions."""

    n: int
    js: tuple = ()

    def __post_init__(self):
        js = tuple(self.js)
        if list(js) != sorted(set(js)) or any(not 1 <= j <= self.n for j in js):
            raise ParseError(f"bad branch positions {js} for n={self.n}")
        if self.n < 1 or len(js) > self.n:
            raise ParseError(f"bad key n={self.n}, js={js}")

    @property
    def q(self):
        return len(self.js)

    @property
    def p(self):
        return self.n + 1 - self.q


@dataclass
class UniversalSeries:
    """Finitely many coefficients of the universal series.

    ``coeffs`` maps canonical monomials -- sorted tuples of
    ``((slot, exponent_vector), power)`` -- to exact rationals; the constant
    term is stored implicitly and equals one.
    """

    key: PhiKey
    degree: int
    window: Window
    coeffs: dict

    def coefficient(self, monomial):
        monomial = tuple(sorted(((i, tuple(l)), e) for (i, l), e in monomial))
        return self.coeffs.get(monomial, Fraction(0))

    def sorted_items(self):
        def order(item):
            mono, _ = item
            return (sum(e for _, e in mono), mono)
        return sorted(self.coeffs.items(), key=order)

    def to_json(self):
        out = []
        for mono, value in self.sorted_items():
            out.append({"monomial": [[i, list(l), e] for (i, l), e in mono],
                        "value": str(value)})
        return out


def _gen_name(i, l):
    return f"x{i}_" + "_".join(f"m{-v}" if v < 0 else str(v) for v in l)


def _phi_series(key: PhiKey, degree, pairs, window, max_doublings=6):
    """Instrumented evaluation over the slots in ``pairs`` (slot, exponent)."""
    pairs = sorted(pairs)
    ring = ring_new(RingSpec("Q",
                             nil=tuple((_gen_name(i, l), degree + 1) for i, l in pairs),
                             nil_total_cap=degree))
    n = key.n
    entries = []
    for i in range(1, key.p + 1):
        terms = [((0,) * n, ring.one())]
        terms += [(l, ring.gen(_gen_name(slot, l))) for slot, l in pairs if slot == i]
        entries.append(from_terms(ring, n, terms))
    entries += [t_var(ring, n, j) for j in key.js]
    value = cc(entries, max_doublings=max_doublings)

    by_gen = {idx: (i, l) for idx, (i, l) in enumerate(pairs)}
    coeffs = {}
    for exps, scalar in value.terms.items():
        if not any(exps):
            if scalar != 1:
                raise InternalConsistencyError(
                    f"universal series has constant term {scalar}, not 1")
            continue
        mono = tuple(sorted((by_gen[idx], e) for idx, e in enumerate(exps) if e))
        coeffs[mono] = Fraction(scalar)
    return UniversalSeries(key, degree, window, coeffs)


def phi_coefficients(key: PhiKey, degree: int, window: Window,
                     max_doublings=6) -> UniversalSeries:
    """All coefficients of total degree <= ``degree`` over the exponent box."""
    if degree < 1:
        raise ParseError("degree bound must be >= 1")
    if len(window.lo) != key.n:
        raise ParseError("window dimension does not match n")
    box = [()]
    for lo_j, hi_j in zip(window.lo, window.hi):
        box = [l + (v,) for l in box for v in range(lo_j, hi_j + 1)]
    pairs = [(i, l) for i in range(1, key.p + 1) for l in box]
    return _phi_series(key, degree, pairs, window, max_doublings)


def check_integrality(series: UniversalSeries):
    violations = [[mono, str(value)] for mono, value in series.sorted_items()
                  if value.denominator != 1]
    return {"integral": not violations, "violations": violations,
            "checked": len(series.coeffs)}


def _weight(mono, n):
    w = [0] * n
    for (_, l), e in mono:
        for j in range(n):
            w[j] += e * l[j]
    return tuple(w)


def check_weight_zero(series: UniversalSeries):
    n = series.key.n
    violations = [[mono, list(_weight(mono, n))] for mono, _ in series.sorted_items()
                  if any(_weight(mono, n))]
    return {"weight_zero": not violations, "violations": violations,
            "checked": len(series.coeffs)}


_PHI_CACHE = {}


def evaluate_phi(key: PhiKey, gs, max_doublings=6):
    """CC_n(1+g_1, ..., 1+g_p, t_{j_1}, ...) through the universal series.

    Every ``g_i`` must be an exact Laurent polynomial with nilpotent
    coefficients; the needed degree and exponent support are finite, the
    series coefficients are integers, and the value is exact over any base.
    """
    gs = list(gs)
    if len(gs) != key.p:
        raise ParseError(f"need {key.p} nilpotent series for this key")
    ring, n = gs[0].ring, gs[0].n
    if n != key.n:
        raise ParseError("variable count does not match the key")
    for g in gs:
        g._require_exact("universal-series evaluation")
        for l, c in g.terms.items():
            if not c.is_nilpotent():
                raise NotSharpError(f"coefficient {c} at {l} is not nilpotent")
    degree = max(1, ring.nil_index - 1)
    pairs = tuple(sorted((i + 1, l) for i, g in enumerate(gs) for l in g.terms))
    cache_key = (key, degree, pairs)
    if cache_key not in _PHI_CACHE:
        _PHI_CACHE[cache_key] = _phi_series(key, degree, pairs, None, max_doublings)
    series = _PHI_CACHE[cache_key]

    value = ring.one()
    for mono, coefficient in series.coeffs.items():
        if coefficient.denominator != 1:
            raise InternalConsistencyError(
                f"universal coefficient {coefficient} at {mono} is not integral")
        term = ring.from_scalar(int(coefficient))
        for (i, l), e in mono:
            term = term * gs[i - 1].terms.get(l, ring.zero()) ** e
            if not term:
                break
        value = value + term
    return value
