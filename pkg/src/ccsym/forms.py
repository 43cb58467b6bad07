"""Reduced differential forms over iterated Laurent series.

A degree-k form is a sparse map from strictly increasing index tuples
``(i_1 < ... < i_k)`` to series coefficients of ``dt_{i_1} ^ ... ^ dt_{i_k}``.
The module provides the de Rham differential, wedge products, ``dlog`` of an
invertible series, and the n-dimensional residue (the coefficient of
``t_1^-1 ... t_n^-1 dt_1 ^ ... ^ dt_n``).
"""

from __future__ import annotations

from .coeff import Ring
from .errors import ParseError, RingMismatchError
from .laurent import LaurentElt, Window, coarse_split, invert, monomial, series_from_json, zero


class DiffForm:
    __slots__ = ("ring", "n", "degree", "comps")

    def __init__(self, ring, n, degree, comps):
        self.ring = ring
        self.n = n
        self.degree = degree
        self.comps = comps

    @staticmethod
    def _make(ring, n, degree, raw):
        comps = {idx: g for idx, g in raw.items() if g.terms or g.hi is not None}
        return DiffForm(ring, n, degree, comps)

    @staticmethod
    def from_series(f: LaurentElt):
        return DiffForm._make(f.ring, f.n, 0, {(): f})

    @staticmethod
    def zero_form(ring, n, degree):
        return DiffForm(ring, n, degree, {})

    def component(self, idx):
        idx = tuple(idx)
        return self.comps.get(idx, zero(self.ring, self.n))

    def _check(self, other):
        self.ring.compatible(other.ring)
        if self.n != other.n:
            raise RingMismatchError("variable count mismatch")

    def __add__(self, other):
        self._check(other)
        if self.degree != other.degree:
            raise RingMismatchError("cannot add forms of different degree")
        raw = dict(self.comps)
        for idx, g in other.comps.items():
            raw[idx] = raw[idx] + g if idx in raw else g
        return DiffForm._make(self.ring, self.n, self.degree, raw)

    def __neg__(self):
        return DiffForm(self.ring, self.n, self.degree,
                        {idx: -g for idx, g in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        """Multiply by a series or coefficient (the module structure)."""
        return DiffForm._make(self.ring, self.n, self.degree,
                              {idx: g * f for idx, g in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (self.ring == other.ring and self.n == other.n
                and self.degree == other.degree and self.comps == other.comps)

    def __str__(self):
        if not self.comps:
            return "0"
        parts = []
        for idx in sorted(self.comps):
            basis = "^".join(f"dt{i}" for i in idx) or "1"
            parts.append(f"({self.comps[idx]}) {basis}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return {"degree": self.degree,
                "components": [{"dt": list(idx), "series": g.to_json()}
                               for idx, g in sorted(self.comps.items())]}


def _insert_sign(i, idx):
    """Position sign for dt_i ^ dt_idx; None when i already occurs."""
    if i in idx:
        return None, None
    pos = sum(1 for j in idx if j < i)
    merged = tuple(sorted(idx + (i,)))
    return (-1) ** pos, merged


def _merge_sign(a, b):
    """Shuffle sign merging two strictly increasing tuples; None on overlap."""
    if set(a) & set(b):
        return None, None
    sign = 0
    for x in a:
        sign += sum(1 for y in b if y < x)
    return (-1) ** sign, tuple(sorted(a + b))


def d(omega) -> DiffForm:
    """Exterior derivative; accepts a series (degree 0) or a form."""
    if isinstance(omega, LaurentElt):
        omega = DiffForm.from_series(omega)
    if omega.degree >= omega.n:
        raise ParseError(f"d on a degree-{omega.degree} form over {omega.n} variables")
    raw = {}
    for idx, g in omega.comps.items():
        for i in range(1, omega.n + 1):
            sign, merged = _insert_sign(i, idx)
            if sign is None:
                continue
            part = g.partial(i)
            if not part.terms and part.hi is None:
                continue
            term = part if sign == 1 else -part
            raw[merged] = raw[merged] + term if merged in raw else term
    return DiffForm._make(omega.ring, omega.n, omega.degree + 1, raw)


def wedge(w1, w2) -> DiffForm:
    if isinstance(w1, LaurentElt):
        w1 = DiffForm.from_series(w1)
    if isinstance(w2, LaurentElt):
        w2 = DiffForm.from_series(w2)
    w1._check(w2)
    if w1.degree + w2.degree > w1.n:
        raise ParseError("wedge degree exceeds the number of variables")
    raw = {}
    for ia, ga in w1.comps.items():
        for ib, gb in w2.comps.items():
            sign, merged = _merge_sign(ia, ib)
            if sign is None:
                continue
            g = ga * gb
            if sign == -1:
                g = -g
            raw[merged] = raw[merged] + g if merged in raw else g
    return DiffForm._make(w1.ring, w1.n, w1.degree + w2.degree, raw)


def dlog(f: LaurentElt, window: Window = None) -> DiffForm:
    """d(f)/f as a degree-1 form, computed factorwise on the unit splitting.

    The monomial factor contributes the exact ``nu_j dt_j / t_j``; the
    constant drops out; the sharp factor contributes ``d(S) * S^{-1}`` under
    the window protocol (exact when the inverse terminates by nilpotency).
    """
    nu, _, s = coarse_split(f)
    ring, n = f.ring, f.n
    out = DiffForm.zero_form(ring, n, 1)
    for j in range(1, n + 1):
        if nu[j - 1]:
            idx = tuple(-1 if i == j - 1 else 0 for i in range(n))
            out = out + DiffForm._make(
                ring, n, 1, {(j,): monomial(ring, n, idx, nu[j - 1])})
    if s.terms != {(0,) * n: ring.one()}:
        out = out + d(s).scale(invert(s, window))
    return out


def res(omega: DiffForm):
    """Residue of a top-degree form: the coefficient at (-1, ..., -1).

    On windowed components this reads a certified coefficient and raises a
    window error when the trust region does not cover the corner; callers
    drive it through the stability protocol.
    """
    if omega.degree != omega.n:
        raise ParseError(f"residue needs a degree-{omega.n} form, got degree {omega.degree}")
    top = omega.comps.get(tuple(range(1, omega.n + 1)))
    if top is None:
        return omega.ring.zero()
    return top.coefficient((-1,) * omega.n)


def form_from_json(ring: Ring, n: int, doc) -> DiffForm:
    try:
        degree = int(doc["degree"])
        comps = {}
        for item in doc.get("components", []):
            idx = tuple(int(i) for i in item["dt"])
            if list(idx) != sorted(set(idx)) or any(not 1 <= i <= n for i in idx):
                raise ParseError(f"bad basis tuple {idx}")
            if len(idx) != degree:
                raise ParseError(f"basis tuple {idx} does not match degree {degree}")
            comps[idx] = series_from_json(ring, item["series"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad form document: {exc}") from exc
    return DiffForm._make(ring, n, degree, comps)
