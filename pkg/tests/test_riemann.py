import numpy as np
import pytest

from core.kinetic import KineticFunction, classical_kinetic, companion
from errors import InvariantViolation
from riemann.oleinik import envelope_pieces, oleinik_pattern
from riemann.solver import (
    ShockClass, WaveKind, WavePattern, classify_shock, evaluate, inverse_speed, pattern_dissipation,
    pattern_l1_distance, sample, solve_riemann,
)


def _kinds(pattern):
    return [w.kind for w in pattern.waves]


def test_nonclassical_then_classical(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, 1.0, -0.5).check(pair, kin)
    assert _kinds(pattern) == [WaveKind.NONCLASSICAL_SHOCK, WaveKind.CLASSICAL_SHOCK]
    first, second = pattern.waves
    assert first.u_plus == -0.75
    assert first.speed_lo == pytest.approx(0.8125, abs=1e-15)
    assert second.speed_lo == pytest.approx(1.1875, abs=1e-15)
    assert pattern_dissipation(pattern, pair) < 0


def test_single_classical_shock(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, 1.0, -0.2).check(pair, kin)
    assert _kinds(pattern) == [WaveKind.CLASSICAL_SHOCK]
    assert pattern.waves[0].speed_lo == pytest.approx(0.84, abs=1e-15)


def test_nonclassical_then_rarefaction(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, 1.0, -2.0).check(pair, kin)
    assert _kinds(pattern) == [WaveKind.NONCLASSICAL_SHOCK, WaveKind.RAREFACTION]
    fan = pattern.waves[1]
    assert (fan.speed_lo, fan.speed_hi) == pytest.approx((1.6875, 12.0))


def test_rarefaction_on_the_convex_side(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, 1.0, 2.0).check(pair, kin)
    assert _kinds(pattern) == [WaveKind.RAREFACTION]
    assert evaluate(pattern, 6.75) == pytest.approx(1.5, abs=1e-14)


def test_mirror_symmetry_of_odd_flux(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, -1.0, 0.5).check(pair, kin)
    assert _kinds(pattern) == [WaveKind.NONCLASSICAL_SHOCK, WaveKind.CLASSICAL_SHOCK]
    assert pattern.waves[0].u_plus == 0.75


@pytest.mark.parametrize("u_r", [1.0, -1.0])
def test_left_state_at_inflection(cubic, pair, kin, u_r):
    pattern = solve_riemann(cubic, pair, kin, 0.0, u_r).check(pair, kin)
    assert _kinds(pattern) == [WaveKind.RAREFACTION]


def test_trivial_problem(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, 0.4, 0.4)
    assert pattern.waves == ()
    assert evaluate(pattern, -3.0) == 0.4


def test_evaluate_is_left_continuous(cubic, pair, kin):
    pattern = solve_riemann(cubic, pair, kin, 1.0, -0.5)
    s = pattern.waves[0].speed_lo
    assert evaluate(pattern, s) == 1.0
    assert evaluate(pattern, s + 1e-9) == -0.75
    np.testing.assert_array_equal(sample(pattern, [0.0, 1.0, 2.0]), [1.0, -0.75, -0.5])


def test_shock_classification(cubic):
    assert classify_shock(cubic, 1.0, -0.2) is ShockClass.LAX
    assert classify_shock(cubic, 1.0, -0.75) is ShockClass.SLOW_UNDERCOMPRESSIVE
    assert classify_shock(cubic, -0.2, -0.3) is ShockClass.INADMISSIBLE


def test_inverse_speed(cubic):
    assert inverse_speed(cubic, 3.0, -0.5, -2.0) == pytest.approx(-1.0, abs=1e-14)
    assert inverse_speed(cubic, 0.1, 1.0, 2.0) == 1.0


def test_check_rejects_broken_patterns(cubic, pair, kin):
    good = solve_riemann(cubic, pair, kin, 1.0, -0.5)
    swapped = WavePattern(1.0, -0.5, good.waves[::-1], cubic)
    with pytest.raises(InvariantViolation):
        swapped.check(pair, kin)
    other = KineticFunction(phi_flat=lambda u: -0.8 * u, lipschitz_bound=0.8, contraction_K=0.64,
                            description="linear c=0.8", pair=pair)
    with pytest.raises(InvariantViolation):
        good.check(pair, other)


def test_soundness_on_random_problems(cubic, pair):
    rng = np.random.default_rng(7)
    for _ in range(200):
        c = rng.uniform(0.55, 0.95)
        kin = KineticFunction(phi_flat=lambda u, c=c: -c * u, lipschitz_bound=c, contraction_K=c * c,
                              description="linear", pair=pair, check=False)
        u_l, u_r = (float(v) for v in rng.uniform(-3.0, 3.0, size=2))
        solve_riemann(cubic, pair, kin, u_l, u_r).check(pair, kin)


def test_envelope_pieces_of_tangent_configuration(cubic):
    pieces = envelope_pieces(cubic, 2.0, -1.5)
    assert [p[0] for p in pieces] == ["jump", "fan"]
    assert pieces[0][1] == 2.0
    assert pieces[0][2] == pytest.approx(-1.0, abs=1e-12)
    assert pieces[1][2] == -1.5


@pytest.mark.parametrize("u_l, u_r", [(1.0, -0.2), (2.0, -1.5), (-1.0, 1.5), (0.5, 2.0), (-2.0, 0.3)])
def test_classical_kinetic_reproduces_convex_hull_solution(cubic, pair, u_l, u_r):
    kin = classical_kinetic(pair)
    ours = solve_riemann(cubic, pair, kin, u_l, u_r)
    assert pattern_l1_distance(ours, oleinik_pattern(cubic, u_l, u_r)) < 1e-6


@pytest.mark.parametrize("u_l, u_r, tangent", [(-2.0, 1.5, 1.0), (-20.0, 15.0, 10.0), (1.5, -2.0, -0.75),
                                               (15.0, -20.0, -7.5)])
def test_tangency_is_refined_at_any_scale(cubic, u_l, u_r, tangent):
    kinds = [p[0] for p in envelope_pieces(cubic, u_l, u_r)]
    pattern = oleinik_pattern(cubic, u_l, u_r)
    assert kinds == ["jump", "fan"]
    assert pattern.waves[0].u_plus == pytest.approx(tangent, rel=1e-10)
    assert pattern.waves[0].speed_lo == pytest.approx(pattern.waves[1].speed_lo, rel=1e-9)


def test_solution_is_continuous_across_the_companion_state(cubic, pair, kin):
    sharp = companion(cubic, kin, 1.0)
    assert sharp == pytest.approx(-0.25, abs=1e-12)
    above = solve_riemann(cubic, pair, kin, 1.0, sharp + 1e-9).check(pair, kin)
    below = solve_riemann(cubic, pair, kin, 1.0, sharp - 1e-9).check(pair, kin)
    assert _kinds(above) == [WaveKind.CLASSICAL_SHOCK]
    assert _kinds(below) == [WaveKind.NONCLASSICAL_SHOCK, WaveKind.CLASSICAL_SHOCK]
    # the middle state survives only on a wedge of vanishing width
    assert abs(below.waves[0].u_plus - below.waves[1].u_plus) == pytest.approx(0.5, abs=1e-8)
    assert below.waves[1].speed_lo - below.waves[0].speed_lo < 1e-8
    assert pattern_l1_distance(above, below) <= 1e-6
