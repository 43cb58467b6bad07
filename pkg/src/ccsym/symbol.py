"""The explicit higher Contou-Carrere symbol and its relatives.

``cc`` evaluates the (n+1)-ary symbol on invertible iterated Laurent series
by splitting every slot through the unit-group decomposition and combining
three kinds of elementary values:

* all slots monomial: a sign ``(-1)^sgn(l_1,...,l_{n+1})``;
* one slot a constant unit ``c``, the rest monomial: ``c^det(nu(...))``;
* a sharp slot present: ``exp res(log(f) dlog(g_2) ^ ... ^ dlog(g_{n+1}))``,
  with the residue evaluated under the certified window protocol and checked
  nilpotent before exponentiating.

The sign map comes in the Vostokov--Fesenko determinant form and the
Khovanskii product form; the additive symbol is the determinant of the
valuation vectors; the tame symbol is the classical one-dimensional closed
form over a field.
"""

from __future__ import annotations

from .coeff import Coef
from .errors import (
    InternalConsistencyError,
    NotInvertibleError,
    ParseError,
    StabilityExhaustedError,
    UnsupportedRingError,
    WindowExceededError,
)
from .forms import DiffForm, d, dlog, res, wedge
from .laurent import (
    LaurentElt,
    Window,
    coarse_split,
    invert,
    log_sharp,
    monomial,
    one,
    stable_coefficient,
    valuation,
    zero,
)


# -- integer linear algebra ----------------------------------------------------

def det_int(vectors):
    """Exact determinant of a square integer matrix given as a list of vectors."""
    m = [list(v) for v in vectors]
    size = len(m)
    if any(len(r) != size for r in m):
        raise ParseError("determinant needs a square matrix")
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


def _check_sgn_args(vectors):
    vectors = [tuple(v) for v in vectors]
    n = len(vectors[0]) if vectors else 0
    if len(vectors) != n + 1 or any(len(v) != n for v in vectors):
        raise ParseError(f"sgn needs n+1 vectors in Z^n, got {vectors}")
    return vectors, n


def sgn_vf(*vectors):
    """Vostokov--Fesenko form: sum of determinants with a product column."""
    vectors, n = _check_sgn_args(vectors)
    total = 0
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            rest = [vectors[k] for k in range(n + 1) if k != i and k != j]
            prod_col = tuple(a * b for a, b in zip(vectors[i], vectors[j]))
            total += det_int(rest + [prod_col])
    return total % 2


def sgn_kh(*vectors):
    """Khovanskii form: dets with one vector omitted, summed and multiplied."""
    vectors, n = _check_sgn_args(vectors)
    dets = []
    for i in range(n + 1):
        dets.append(det_int([vectors[k] for k in range(n + 1) if k != i]) % 2)
    total = 1 + sum(dets)
    prod = 1
    for dt in dets:
        prod *= 1 + dt
    return (total + prod) % 2


# -- additive symbol --------------------------------------------------------------

def additive_symbol(entries):
    """det(nu(f_1), ..., nu(f_n)) for n invertible series in n variables."""
    entries = list(entries)
    if not entries:
        raise ParseError("additive symbol needs at least one series")
    n = entries[0].n
    if len(entries) != n:
        raise ParseError(f"additive symbol needs {n} series over {n} variables")
    return det_int([valuation(f) for f in entries])


def steinberg_det_check(entries):
    """For f_1 + f_2 = 1: the valuation determinant must vanish."""
    entries = list(entries)
    if len(entries) < 2:
        raise ParseError("need at least two series")
    s = entries[0] + entries[1]
    if s != one(s.ring, s.n):
        raise ParseError("precondition f_1 + f_2 = 1 fails")
    dt = additive_symbol(entries)
    return {"det": dt, "ok": dt == 0}


# -- the symbol -------------------------------------------------------------------

def _mu_form(ring, n, nu):
    """The exact 1-form sum_j nu_j dt_j / t_j of a monomial slot."""
    out = DiffForm.zero_form(ring, n, 1)
    comps = {}
    for j in range(1, n + 1):
        if nu[j - 1]:
            idx = tuple(-1 if i == j - 1 else 0 for i in range(n))
            comps[(j,)] = monomial(ring, n, idx, nu[j - 1])
    return DiffForm._make(ring, n, 1, comps) if comps else out


def _sharp_dlog(s, window):
    """dlog of a sharp slot: d(S) * S^{-1}."""
    return d(s).scale(invert(s, window))


def _initial_window(elts, n):
    depth = [1] * n
    height = [1] * n
    for f in elts:
        lo, hi = f.support_lo(), f.support_hi()
        if lo is None:
            continue
        for j in range(n):
            depth[j] += max(0, -lo[j])
            height[j] += max(0, hi[j])
    hi = tuple(max(d, h, 2) for d, h in zip(depth, height))
    return Window(tuple(-x for x in hi), hi)


def cc(entries, max_doublings=6, want_trace=False):
    """The multilinear antisymmetric symbol of n+1 invertible series.

    Requires rational coefficients whenever a sharp (exp-res) branch
    contributes; purely monomial/constant inputs evaluate over any base.
    """
    entries = list(entries)
    if not entries:
        raise ParseError("empty symbol tuple")
    ring, n = entries[0].ring, entries[0].n
    if len(entries) != n + 1:
        raise ParseError(f"the symbol over {n} variables takes {n + 1} series")
    for f in entries[1:]:
        entries[0]._check(f)
    splits = [coarse_split(f) for f in entries]
    nus = [nu for nu, _, _ in splits]
    trace = []
    value = ring.one()

    s = sgn_vf(*nus)
    if s:
        value = value * ring.from_scalar(-1)
    if any(any(v) for v in nus):
        trace.append(f"monomial: (-1)^{s}")

    for i, (_, c, _) in enumerate(splits):
        if c.is_one():
            continue
        dt = det_int([nus[j] for j in range(n + 1) if j != i])
        if dt == 0:
            continue
        exponent = dt if i % 2 == 0 else -dt
        value = value * c ** exponent
        trace.append(f"constant slot {i + 1}: ({c})^{exponent}")

    unit = {(0,) * n: ring.one()}
    sharp = {i: s_part for i, (_, _, s_part) in enumerate(splits)
             if s_part.terms != unit}
    subsets = []
    for mask in range(1, 1 << len(sharp)):
        idx = sorted(sharp)
        t_set = {idx[b] for b in range(len(idx)) if mask >> b & 1}
        if any(not any(nus[j]) for j in range(n + 1) if j not in t_set):
            continue
        subsets.append(t_set)
    if subsets:
        if not ring.has_rationals():
            raise UnsupportedRingError(
                "exp-res branch needs rational coefficients; over integral bases "
                "use the universal integral series (ccsym.universal.evaluate_phi)")
        total = _sharp_contribution(ring, n, nus, sharp, subsets,
                                    max_doublings, trace)
        if not total.is_nilpotent():
            raise InternalConsistencyError(
                f"residue {total} of the sharp branch is not nilpotent")
        value = value * total.exp()

    return (value, trace) if want_trace else value


def _sharp_contribution(ring, n, nus, sharp, subsets, max_doublings, trace):
    window = _initial_window(list(sharp.values()), n)
    for _ in range(max_doublings + 1):
        try:
            total = ring.zero()
            logs = {}
            omegas = {}
            for t_set in subsets:
                k = min(t_set)
                if k not in logs:
                    logs[k] = DiffForm.from_series(log_sharp(sharp[k], window))
                form = logs[k]
                for j in range(n + 1):
                    if j == k:
                        continue
                    if j in t_set:
                        if j not in omegas:
                            omegas[j] = _sharp_dlog(sharp[j], window)
                        form = wedge(form, omegas[j])
                    else:
                        form = wedge(form, _mu_form(ring, n, nus[j]))
                r = res(form)
                if r:
                    if not r.is_nilpotent():
                        raise InternalConsistencyError(
                            f"sharp-branch residue {r} is not nilpotent")
                    trace.append(f"sharp slots {sorted(x + 1 for x in t_set)}: "
                                 f"exp({'-' if k % 2 else ''}res) with res = {r}")
                total = total + (r if k % 2 == 0 else -r)
            return total
        except WindowExceededError:
            window = Window(tuple(x * 2 if x < 0 else -2 for x in window.lo),
                            tuple(x * 2 if x > 0 else 2 for x in window.hi))
    raise StabilityExhaustedError(
        f"symbol residues did not stabilize within {max_doublings} window doublings")


# -- tangent identities -------------------------------------------------------------

def _fresh_name(ring, base):
    name = base
    k = 0
    while name in ring.gens:
        k += 1
        name = f"{base}{k}"
    return name


def cc_eps_linearization(g: LaurentElt, entries, max_doublings=6):
    """Dual-path check of the first-order expansion in a square-zero variable.

    Left: the symbol of ``(1 + g*eps, f_1, ..., f_n)`` over the extended ring.
    Right: ``1 + res(g dlog f_1 ^ ... ^ dlog f_n) eps`` via the forms module.
    """
    entries = list(entries)
    ring, n = g.ring, g.n
    if len(entries) != n:
        raise ParseError(f"need {n} series besides g")
    name = _fresh_name(ring, "eps")
    ext, embed = ring.extended(((name, 2),))
    eps = ext.gen(name)
    g_e = g.map_coefficients(ext, embed)
    fs_e = [f.map_coefficients(ext, embed) for f in entries]
    lhs = cc([one(ext, n) + g_e * eps] + fs_e, max_doublings=max_doublings)

    def build(window):
        form = DiffForm.from_series(g)
        for f in entries:
            form = wedge(form, dlog(f, window))
        top = form.comps.get(tuple(range(1, n + 1)))
        return top if top is not None else zero(ring, n)

    r = stable_coefficient(build, (-1,) * n, _initial_window(entries, n), max_doublings)
    rhs = ext.one() + embed(r) * eps
    return {"lhs": lhs, "rhs": rhs, "residue": r, "ok": lhs == rhs}


def cc_eta_linearization(gs, max_doublings=6):
    """Dual-path check of the top-order expansion in a variable with eta^{n+2}=0.

    Left: the symbol of ``(1 + g_1 eta, ..., 1 + g_{n+1} eta)``.
    Right: ``1 + res(g_1 dg_2 ^ ... ^ dg_{n+1}) eta^{n+1}``, an exact residue.
    """
    gs = list(gs)
    ring, n = gs[0].ring, gs[0].n
    if len(gs) != n + 1:
        raise ParseError(f"need n+1 = {n + 1} series")
    name = _fresh_name(ring, "eta")
    ext, embed = ring.extended(((name, n + 2),))
    eta = ext.gen(name)
    lifted = [one(ext, n) + g.map_coefficients(ext, embed) * eta for g in gs]
    lhs = cc(lifted, max_doublings=max_doublings)
    form = DiffForm.from_series(gs[0])
    for g in gs[1:]:
        form = wedge(form, d(g))
    r = res(form)
    rhs = ext.one() + embed(r) * eta ** (n + 1)
    return {"lhs": lhs, "rhs": rhs, "residue": r, "ok": lhs == rhs}


# -- tame symbol -----------------------------------------------------------------------

def tame_symbol(f: LaurentElt, g: LaurentElt) -> Coef:
    """(-1)^{nu(f)nu(g)} (f^{nu(g)} / g^{nu(f)})(0) over a field, n = 1."""
    ring, n = f.ring, f.n
    if n != 1:
        raise ParseError("the tame symbol is one-dimensional")
    is_field = (ring.base == "Q" or (ring.base == "mod" and ring.mod_prime_power
                                     and ring.mod_prime_power[1] == 1))
    if not is_field or ring.gens:
        raise UnsupportedRingError("the tame symbol needs a field of coefficients")
    f._check(g)
    a = valuation(f)[0]
    b = valuation(g)[0]
    lead_f = f.terms[(a,)]
    lead_g = g.terms[(b,)]
    sign = ring.from_scalar(-1 if (a * b) % 2 else 1)
    return sign * lead_f ** b * lead_g ** (-a)


def verify_multilinear(ring=None, n=1, trials=20, seed=0):
    from .checks import suite_multilinear
    return suite_multilinear(ring, n, trials, seed)


def verify_antisymmetric(ring=None, n=1, trials=20, seed=0):
    from .checks import suite_antisymmetric
    return suite_antisymmetric(ring, n, trials, seed)


def verify_steinberg(ring=None, n=1, trials=20, seed=0):
    from .checks import suite_steinberg
    return suite_steinberg(ring, n, trials, seed)
