from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ifsbench.exact import RotationCoordinate as RC
from ifsbench.properties import (SegmentSpec, SegmentSpecError, backward_shadow, check_lws,
                                 check_shadowing, check_specification, check_ssp,
                                 detect_periodicity, drift_pseudo_orbit, estimate_spec_constant,
                                 gen_pseudo_orbit, parse_kind, periodicity_audit, probe_mixing_exact,
                                 random_segment_spec)
from ifsbench.properties.validate import (validate_periodic, validate_shadowing,
                                          validate_specification)
from ifsbench.symbolic import FullShift, LadderStream, morse, periodic
from ifsbench.systems import (Circle, CircleAffine, FiniteDiscrete, FiniteMap, FunctionFamily,
                              GeneralizedIFS, IntervalUnion, doubling, rotation)


def dyadic_oracle(spec, eps, bits=14):
    """Brute force for the doubling map on the grid j / 2**bits with integer arithmetic."""
    M = 1 << bits
    for j in range(M):
        ok = True
        for x, (lo, hi) in zip(spec.points, spec.pairs):
            for i in range(lo, hi + 1):
                y = Fraction((j << i) % M, M)
                target = (x.q * (1 << (i - lo))) % 1
                d = abs(y - target)
                if min(d, 1 - d) > eps:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return Fraction(j, M)
    return None


def finite_ifs():
    space = FiniteDiscrete(["a", "b"])
    return GeneralizedIFS(space, FunctionFamily([FiniteMap({"a": "a", "b": "a"})]), FullShift(1))


# -- segment specifications -------------------------------------------------------

def test_segment_spec_validation():
    with pytest.raises(SegmentSpecError):
        SegmentSpec(("0",), ((0, 0),))
    with pytest.raises(SegmentSpecError):
        SegmentSpec(("0", "0"), ((0, 2), (2, 3)))
    with pytest.raises(SegmentSpecError):
        SegmentSpec(("0", "0"), ((0, 1), (3, 3)), gap=3)
    s = SegmentSpec(("0", "1/2"), ((0, 1), (4, 6)), gap=3)
    assert s.end == 6 and s.gaps() == [3]


def test_doubling_specification_example(doubling_ifs):
    spec = SegmentSpec((RC(Fraction(0)), RC(Fraction(1, 2))), ((0, 0), (3, 3)))
    rep = check_specification(doubling_ifs, periodic([0]), Fraction(1, 4), spec)
    assert rep.passed and rep.witness["x"] == "0"
    ssp = check_ssp(doubling_ifs, periodic([0]), Fraction(1, 4), spec)
    assert ssp.passed and ssp.witness == {"x": "0", "period": 1}


def test_rotation_fails_strong_specification_globally(rotation_ifs):
    spec = SegmentSpec((RC(Fraction(0)), RC(Fraction(1, 2))), ((0, 0), (3, 3)))
    rep = check_ssp(rotation_ifs, periodic([0]), Fraction(1, 10), spec)
    assert rep.failed and not rep.horizon_limited


def test_specification_fails_rigorously_for_an_isometry(rotation_ifs):
    # a rotation preserves distances, so 0 and 1/2 + 3 theta cannot both be traced
    pts = (RC(Fraction(0)), RC(Fraction(1, 2), Fraction(3)))
    spec = SegmentSpec(pts, ((0, 0), (3, 3)))
    rep = check_specification(rotation_ifs, periodic([0]), Fraction(1, 10), spec, grid=512)
    assert rep.failed


def test_finite_space_specification():
    I = finite_ifs()
    sp = check_specification(I, periodic([0]), Fraction(1, 2), SegmentSpec(("b", "a"), ((0, 0), (1, 3))))
    assert sp.passed and sp.witness["x"] == "b"
    bad = check_ssp(I, periodic([0]), Fraction(1, 2), SegmentSpec(("b", "a"), ((0, 0), (1, 3))))
    assert bad.failed
    good = check_ssp(I, periodic([0]), Fraction(1, 2), SegmentSpec(("a", "b"), ((0, 0), (1, 3))))
    assert good.passed and good.witness["x"] == "a"


@pytest.mark.parametrize("seed", range(6))
def test_specification_agrees_with_dyadic_oracle(doubling_ifs, seed):
    rng = random.Random(seed)
    spec = random_segment_spec(doubling_ifs.space, rng, gap=3)
    eps = Fraction(1, 8)
    rep = check_specification(doubling_ifs, periodic([0]), eps, spec)
    oracle = dyadic_oracle(spec, eps)
    if oracle is not None:
        assert rep.passed
    if rep.passed:
        x = doubling_ifs.point(rep.witness["x"])
        assert validate_specification(doubling_ifs, periodic([0]), eps, spec.points, spec.pairs, x)[0]


@given(st.integers(0, 10 ** 6), st.sampled_from([Fraction(1, 8), Fraction(1, 5)]))
@settings(max_examples=15, deadline=None)
def test_specification_is_monotone_in_eps(seed, eps):
    doubling_ifs = GeneralizedIFS(Circle(), FunctionFamily([doubling()]), FullShift(1))
    spec = random_segment_spec(doubling_ifs.space, random.Random(seed), gap=2)
    small = check_specification(doubling_ifs, periodic([0]), eps, spec, grid=1024)
    if small.passed:
        x = doubling_ifs.point(small.witness["x"])
        assert validate_specification(doubling_ifs, periodic([0]), 2 * eps, spec.points, spec.pairs, x)[0]
        assert check_specification(doubling_ifs, periodic([0]), 2 * eps, spec, grid=1024).passed


def test_estimate_spec_constant(doubling_ifs, rotation_ifs):
    assert estimate_spec_constant(doubling_ifs, periodic([0]), Fraction(1, 8), trials=30, cap=6) == 2
    assert estimate_spec_constant(finite_ifs(), periodic([0]), Fraction(1, 2), trials=10) == 1
    assert estimate_spec_constant(rotation_ifs, periodic([0]), Fraction(1, 10), trials=5, cap=3,
                                  grid=256) is None


def test_local_weak_specification(doubling_ifs):
    chain = ["0", "1/3", "2/3"]
    # the chain condition uses f_{sigma_1..sigma_n}; 2^3 * 0 = 0 is not near 1/3
    with pytest.raises(ValueError):
        check_lws(doubling_ifs, periodic([0]), Fraction(1, 10), 3, Fraction(1, 10), chain, 3)
    chain = ["1/3", "2/3", "1/3"]
    rep = check_lws(doubling_ifs, periodic([0]), Fraction(1, 10), 2, Fraction(1, 10), chain, 3)
    assert rep.passed


# -- shadowing --------------------------------------------------------------------

def test_backward_shadowing_along_expanding_tail(ex36):
    zeros = periodic([0])
    for seed in range(10):
        p = gen_pseudo_orbit(ex36, zeros, "1/7", Fraction(1, 100), 200, seed)
        y, bound = backward_shadow(ex36, zeros, p)
        assert bound == Fraction(1, 100)
        assert validate_shadowing(ex36, zeros, p.points, Fraction(11, 1000), y)[0]


def test_drift_is_not_shadowed_along_identity_tail(ex36):
    ones = periodic([1])
    p = drift_pseudo_orbit(ex36, ones, "0.005", 200, "0.01")
    rep = check_shadowing(ex36, ones, p, "0.1", grid=1000)
    assert rep.failed


def test_short_drift_is_shadowed(ex36):
    ones = periodic([1])
    p = drift_pseudo_orbit(ex36, ones, "0.005", 30, "0.01")
    rep = check_shadowing(ex36, ones, p, "0.1", grid=1000)
    assert rep.passed
    assert validate_shadowing(ex36, ones, p.points, Fraction(1, 10), ex36.point(rep.witness["y"]))[0]


def test_pseudo_orbit_csv_round_trip(ex36, tmp_path):
    from ifsbench.properties import PseudoOrbit

    p = gen_pseudo_orbit(ex36, periodic([0, 1]), "1/7", "0.01", 12, seed=3)
    path = tmp_path / "p.csv"
    path.write_text(p.to_csv(ex36.space))
    q = PseudoOrbit.from_csv(path.read_text(), ex36.space, p.delta, p.stream)
    assert q.points == p.points


# -- mixing probes ------------------------------------------------------------------

def test_exactness_threshold_along_ladder():
    # identity and doubling; U has length 2^-6 and is open
    I = GeneralizedIFS(Circle(), FunctionFamily([CircleAffine(1), doubling()]), FullShift(2))
    U = IntervalUnion.of([("1/3", "67/192")], closed=False, circle=True)
    s = periodic([1, 0])
    rep = probe_mixing_exact(I, s, U, N=13, horizon=40, mode="exact")
    # the 7th doubling is symbol 12, so the 13th image is the first full one
    assert rep.passed and rep.parameters["threshold"] == 13
    assert probe_mixing_exact(I, s, U, N=12, horizon=40, mode="exact").failed


def test_transitivity_probe(doubling_ifs):
    U = IntervalUnion.of([("0", "1/100")], circle=True)
    V = IntervalUnion.of([("1/2", "51/100")], circle=True)
    rep = probe_mixing_exact(doubling_ifs, periodic([0]), U, V, N=1, horizon=16, mode="transitive")
    assert rep.passed


# -- periodicity ----------------------------------------------------------------------

def test_parse_kind():
    assert parse_kind("regularly(2)") == ("regularly", 2, None)
    assert parse_kind("eventually(periodic(3))") == ("eventually", 3, "periodic")
    assert parse_kind("weakly") == ("weakly", None, None)
    with pytest.raises(ValueError):
        parse_kind("sometimes(2)")


def test_ladder_returns():
    I = GeneralizedIFS(Circle(), FunctionFamily([rotation("2θ"), rotation("-θ")]), FullShift(2))
    rep = detect_periodicity(I, LadderStream([(0, 1), (1, 2)]), "1/7", "weakly", horizon=600)
    assert rep.passed
    assert rep.witness["returns"][:5] == [3, 9, 18, 30, 45]
    for p in range(1, 17):
        assert detect_periodicity(I, LadderStream([(0, 1), (1, 2)]), "1/7", "periodic", p,
                                  horizon=600).failed


def test_morse_grades():
    I = GeneralizedIFS(Circle(), FunctionFamily([rotation("θ"), rotation("-θ")]), FullShift(2))
    m = morse(0)
    x = RC(Fraction(3, 11))
    assert detect_periodicity(I, m, x, "periodic", 2).passed
    reg = detect_periodicity(I, m, x, "regularly", 2)
    # x_1 = x + theta but x_3 = x - theta
    assert reg.failed and reg.witness == {"i": 1}
    verdicts, violations = periodicity_audit(I, m, x, 2)
    assert verdicts == {"orbitally": "fail", "regularly": "fail", "periodic": "pass", "weakly": "pass"}
    assert violations == []


def test_eventual_grades():
    I = GeneralizedIFS(Circle(), FunctionFamily([doubling(), rotation("1/2")]), FullShift(2))
    s = periodic([1], [0, 0, 0])
    # 1/8 -> 1/4 -> 1/2 -> 0, then alternates 0, 1/2
    assert detect_periodicity(I, s, "1/8", "periodic", 2, horizon=64).failed
    ev = detect_periodicity(I, s, "1/8", "eventually(orbitally(2))", horizon=64)
    assert ev.passed and ev.witness["i"] == 3


@given(st.lists(st.integers(0, 1), min_size=1, max_size=5), st.integers(1, 4),
       st.fractions(0, 1, max_denominator=30))
@settings(max_examples=40, deadline=None)
def test_grade_chain_never_breaks(per, p, q):
    I = GeneralizedIFS(Circle(), FunctionFamily([rotation("1/3"), CircleAffine(-1, "1/4")]), FullShift(2))
    verdicts, violations = periodicity_audit(I, periodic(per), RC(q), p, horizon=96)
    assert violations == []
    if verdicts["periodic"] == "pass":
        assert validate_periodic(I, periodic(per), RC(q), p, 96)[0]


@given(st.lists(st.integers(0, 2), min_size=1, max_size=5), st.fractions(0, 1, max_denominator=60),
       st.integers(-3, 3))
@settings(max_examples=40, deadline=None)
def test_lattice_orbit_matches_exact_evaluation(per, q, c):
    from ifsbench.properties.periodicity import _orbit_points

    F = FunctionFamily([doubling(), rotation("1/3-θ"), CircleAffine(-3, "2/5+1/2θ")])
    I = GeneralizedIFS(Circle(), F, FullShift(3))
    x = RC(q, Fraction(c))
    keys, word, point = _orbit_points(I, periodic(per), x, 30)
    y = x
    for i, a in enumerate(word):
        assert point(i) == y
        y = F.apply(a, y)
    assert point(30) == y
    assert all((keys[i] == keys[j]) == (point(i) == point(j)) for i in range(31) for j in range(31))
