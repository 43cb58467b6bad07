import itertools
import random
from fractions import Fraction

import pytest

from ccsym.coeff import RingSpec, ring_new
from ccsym.errors import ParseError, UnsupportedRingError
from ccsym.forms import dlog, wedge
from ccsym.laurent import from_terms, monomial, one, t_var, valuation, zero
from ccsym.symbol import (
    additive_symbol,
    cc,
    cc_eps_linearization,
    cc_eta_linearization,
    det_int,
    sgn_kh,
    sgn_vf,
    steinberg_det_check,
    tame_symbol,
)
from ccsym.checks import random_invertible_series, random_laurent_poly


# -- sign map ----------------------------------------------------------------------

def test_sgn_examples():
    assert sgn_vf((1,), (1,)) == 1
    assert sgn_vf((0,), (5,)) == 0
    assert sgn_vf((1, 0), (1, 0), (0, 1)) == 1
    assert sgn_kh((1,), (1,)) == 1
    assert sgn_kh((0,), (0,)) == 0


def test_sgn_zero_slot_vanishes():
    rng = random.Random(31)
    for n in (1, 2):
        for _ in range(20):
            rest = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)]
            assert sgn_vf((0,) * n, *rest) == 0


def test_sgn_agreement_exhaustive_n1():
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert sgn_vf((a,), (b,)) == sgn_kh((a,), (b,))


def test_sgn_agreement_sampled_n2():
    rng = random.Random(32)
    for _ in range(500):
        tup = tuple(tuple(rng.randint(-2, 2) for _ in range(2)) for _ in range(3))
        assert sgn_vf(*tup) == sgn_kh(*tup)


def test_sgn_symmetric_and_repeat_rule():
    rng = random.Random(33)
    for n in (1, 2):
        for _ in range(60):
            tup = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n + 1)]
            base = sgn_vf(*tup)
            for i in range(n):
                swapped = list(tup)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                assert sgn_vf(*swapped) == base
    # sgn(l, l, r) = det(l, r) mod 2, exhaustively
    for l in range(-3, 4):
        assert sgn_vf((l,), (l,)) == l % 2
    for l in itertools.product(range(-2, 3), repeat=2):
        for r in itertools.product(range(-2, 3), repeat=2):
            assert sgn_vf(l, l, r) == det_int([l, r]) % 2


# -- additive symbol -----------------------------------------------------------------

def test_additive_symbol_examples(Q):
    for n in (1, 2, 3):
        assert additive_symbol([t_var(Q, n, j) for j in range(1, n + 1)]) == 1
    f0 = from_terms(Q, 2, [((0, 0), 1), ((1, 0), 2)])
    assert additive_symbol([f0, t_var(Q, 2, 2)]) == 0
    assert additive_symbol([monomial(Q, 1, (3,), 5)]) == 3


def test_steinberg_det_examples(Q):
    t1 = t_var(Q, 2, 1)
    rep = steinberg_det_check([t1, one(Q, 2) - t1])
    assert rep["ok"] and rep["det"] == 0
    half = monomial(Q, 2, (0, 0), Fraction(1, 2))
    assert steinberg_det_check([half, half])["ok"]
    tinv = monomial(Q, 2, (-1, 0))
    assert steinberg_det_check([tinv, one(Q, 2) - tinv])["ok"]
    with pytest.raises(ParseError):
        steinberg_det_check([t1, t1])


def test_steinberg_det_random(tower):
    rng = random.Random(34)
    from ccsym.errors import NotInvertibleError
    hits = 0
    while hits < 15:
        f = random_invertible_series(rng, tower, 2)
        comp = one(tower, 2) - f
        try:
            valuation(comp)
        except NotInvertibleError:
            continue
        hits += 1
        assert steinberg_det_check([f, comp])["ok"]


# -- the symbol: anchors and closed forms ----------------------------------------------

def test_cc_anchor_values(Q, Qe):
    t = t_var(Q, 1, 1)
    assert cc([t, t]) == Q.from_scalar(-1)
    for ring in (Q, Qe):
        for n in (1, 2, 3):
            ts = [t_var(ring, n, j) for j in range(1, n + 1)]
            for a in (ring.from_scalar(2), ring.from_scalar(-1)):
                assert cc([monomial(ring, n, (0,) * n, a)] + ts) == a
    e = Qe.gen("e")
    for n in (1, 2, 3):
        ts = [t_var(Qe, n, j) for j in range(1, n + 1)]
        assert cc([monomial(Qe, n, (0,) * n, Qe.one() + e)] + ts) == Qe.one() + e


def test_cc_closed_form_single(Quv):
    u, v = Quv.gen("u"), Quv.gen("v")
    f1 = from_terms(Quv, 1, [((0,), 1), ((1,), -u)])
    f2 = from_terms(Quv, 1, [((0,), 1), ((-1,), -v)])
    assert cc([f1, f2]) == Quv.one() - u * v
    f1 = from_terms(Quv, 1, [((0,), 1), ((2,), -(u * u))])
    f2 = from_terms(Quv, 1, [((0,), 1), ((-3,), -v)])
    assert cc([f1, f2]) == Quv.one() - u ** 6 * v ** 2


def test_cc_branch_overlap_consistency(Qe):
    # for f1 in 1 + Nil both the exp-res and the power formula apply and agree
    e = Qe.gen("e")
    c = Qe.one() + e
    t = t_var(Qe, 1, 1)
    by_power = c ** additive_symbol([t])
    by_res = (c.log() * Qe.one()).exp()  # res(log(c) dt/t) = log(c) * 1
    assert cc([monomial(Qe, 1, (0,), c), t]) == by_power == by_res


def test_cc_rejects_bad_input(Q, Z):
    t = t_var(Q, 1, 1)
    with pytest.raises(ParseError):
        cc([t])
    with pytest.raises(UnsupportedRingError):
        tz = t_var(Z, 1, 1)
        cc([one(Z, 1) + tz, tz])


def test_cc_over_integers_without_sharp_branch(Z):
    # constant/monomial branches need no rationals
    t = t_var(Z, 1, 1)
    assert cc([monomial(Z, 1, (0,), -1), t]) == Z.from_scalar(-1)
    assert cc([t, t]) == Z.from_scalar(-1)


# -- properties -----------------------------------------------------------------------

def test_cc_multilinear_antisymmetric_steinberg(tower):
    rng = random.Random(35)
    for n in (1, 2):
        for _ in range(8):
            f = random_invertible_series(rng, tower, n)
            g = random_invertible_series(rng, tower, n)
            rest = [random_invertible_series(rng, tower, n) for _ in range(n - 1)]
            assert cc([f * g, g] + rest) == cc([f, g] + rest) * cc([g, g] + rest)
            assert cc([f, g] + rest) * cc([g, f] + rest) == tower.one()
            assert cc([f, -f] + rest) == tower.one()


def test_residue_det_identity(tower):
    from ccsym.laurent import stable_coefficient
    rng = random.Random(36)
    for n in (1, 2):
        for _ in range(8):
            fs = [random_invertible_series(rng, tower, n) for _ in range(n)]
            dt = det_int([valuation(f) for f in fs])

            def build(w):
                form = dlog(fs[0], w)
                for f in fs[1:]:
                    form = wedge(form, dlog(f, w))
                top = form.comps.get(tuple(range(1, n + 1)))
                return top if top is not None else zero(tower, n)

            assert stable_coefficient(build, (-1,) * n) == tower.from_scalar(dt)


# -- tangent identities ------------------------------------------------------------------

def test_eps_linearization_examples(Q):
    t = t_var(Q, 1, 1)
    rep = cc_eps_linearization(one(Q, 1), [t])
    assert rep["ok"] and rep["residue"] == Q.one()
    rep = cc_eps_linearization(one(Q, 1), [one(Q, 1) + t])
    assert rep["ok"] and rep["residue"].is_zero()
    rep = cc_eps_linearization(monomial(Q, 1, (-1,)), [t])
    assert rep["ok"] and rep["residue"].is_zero()


def test_eps_linearization_random(tower):
    rng = random.Random(37)
    for n in (1, 2):
        for _ in range(6):
            g = random_laurent_poly(rng, tower, n)
            fs = [random_invertible_series(rng, tower, n) for _ in range(n)]
            assert cc_eps_linearization(g, fs)["ok"]


def test_eta_linearization_examples(Q):
    t = t_var(Q, 1, 1)
    rep = cc_eta_linearization([monomial(Q, 1, (-2,)), t])
    assert rep["ok"] and rep["residue"].is_zero()
    rep = cc_eta_linearization([monomial(Q, 1, (-1,)), t])
    assert rep["ok"] and rep["residue"] == Q.one()


def test_eta_linearization_random(tower):
    rng = random.Random(38)
    for n in (1, 2):
        for _ in range(6):
            gs = [random_laurent_poly(rng, tower, n) for _ in range(n + 1)]
            assert cc_eta_linearization(gs)["ok"]


# -- tame symbol -----------------------------------------------------------------------------

def test_tame_symbol_examples(Q):
    t = t_var(Q, 1, 1)
    assert tame_symbol(t, t) == Q.from_scalar(-1)
    assert tame_symbol(monomial(Q, 1, (0,), 5), t) == Q.from_scalar(5)
    assert tame_symbol(one(Q, 1) - t, t) == Q.one()
    f5 = ring_new(RingSpec(5))
    t5 = t_var(f5, 1, 1)
    assert tame_symbol(t5, t5) == f5.from_scalar(4)
    with pytest.raises(UnsupportedRingError):
        tame_symbol(t_var(ring_new(RingSpec(4)), 1, 1), t_var(ring_new(RingSpec(4)), 1, 1))


def test_tame_matches_cc_over_field(Q):
    rng = random.Random(39)
    for _ in range(20):
        f = random_invertible_series(rng, Q, 1)
        g = random_invertible_series(rng, Q, 1)
        assert tame_symbol(f, g) == cc([f, g])


def test_det_int_basics():
    assert det_int([(2,)]) == 2
    assert det_int([(1, 0), (0, 1)]) == 1
    assert det_int([(0, 1), (1, 0)]) == -1
    assert det_int([(1, 2, 3), (4, 5, 6), (7, 8, 9)]) == 0
    rng = random.Random(40)
    from math import prod
    for _ in range(20):
        m = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        ref = sum(sign * m[0][a] * m[1][b] * m[2][c]
                  for (a, b, c), sign in [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                                          ((2, 1, 0), -1), ((0, 2, 1), -1), ((1, 0, 2), -1)])
        assert det_int(m) == ref


def test_cc_repeated_slot_milnor_identity(tower):
    # the executable form of {f, f} = {-1, f}
    rng = random.Random(48)
    minus_one = monomial(tower, 1, (0,), -1)
    for _ in range(10):
        f = random_invertible_series(rng, tower, 1)
        assert cc([f, f]) == cc([minus_one, f])


def test_cc_constant_slot_reads_valuation(tower):
    # CC(a, g) = a^{nu(g)} for any unit a
    rng = random.Random(49)
    for _ in range(10):
        a = tower.from_scalar(rng.choice([2, 3, -1])) + tower.gen("e1") * rng.randint(-1, 1)
        g = random_invertible_series(rng, tower, 1)
        assert cc([monomial(tower, 1, (0,), a), g]) == a ** valuation(g)[0]
