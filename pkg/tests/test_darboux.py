import numpy as np
import pytest

from gamow1d import (
    DomainError,
    PotentialSpec,
    QuadrantError,
    Variant,
    ZeroVelocityError,
    build_gamow,
    deform1,
    deform1_state,
    deform2,
    deform2_state,
    new_eigenstate,
    transformed_scattering,
)
from gamow1d.darboux import count_lobes, velocity_ratio_estimate, gram_matrix, reciprocal_state
from gamow1d.resonances import BoundWave, bound_states
from gamow1d.sampled import bound_states as shoot
from gamow1d.sampled import sample_cells, transmission
from gamow1d.scattering import ScatteringWave, transmission_coefficient
from conftest import away_from, fd2, lowest_pole
from reference_values import KBAR_WELL16


def residual(state, V, x, h=1e-5):
    """max |-y'' + V y - E y| relative to max |y''| on the grid.

    ``y''`` is the central difference of the state's own derivative.
    """
    y = state(x)
    d2 = (state.evaluate(x + h)[1] - state.evaluate(x - h)[1]) / (2 * h)
    res = -d2 + V(x) * y - state.energy * y
    return np.max(np.abs(res)) / np.max(np.abs(d2))


@pytest.fixture(scope="module")
def decreasing16():
    sp = PotentialSpec.well(16, 5)
    return sp, build_gamow(sp, KBAR_WELL16, Variant.DECREASING)


@pytest.fixture(scope="module")
def decaying50():
    sp = PotentialSpec.well(50, 14.2)
    return sp, build_gamow(sp, lowest_pole(sp, 1))


# --- first order -----------------------------------------------------------


def test_deform1_riccati_forms_agree(decreasing16):
    """2 beta^2 + 2 eps - V equals V - 2 (ln u)'' off the interfaces."""
    sp, g = decreasing16
    dp = deform1(g)
    rng = np.random.default_rng(11)
    x = away_from(rng.uniform(-8, 8, 600), (-2.5, 2.5), 1e-2)[:500]
    h = 1e-3
    # (ln u)'' = u''/u - (u'/u)**2, with u'' differenced from u alone
    u, du = g.evaluate(x)
    d2 = fd2(g, x, h) / u - (du / u) ** 2
    other = sp(x) - 2 * d2
    assert np.max(np.abs(dp(x) - other) / np.maximum(1, np.abs(dp(x)))) < 1e-6


def test_deform1_at_center_matches_second_form(decreasing16):
    sp, g = decreasing16
    x = np.array([0.0])
    u, du = g.evaluate(x)
    d2 = (fd2(g, x) / u - (du / u) ** 2)[0]
    assert abs(deform1(g)(0.0) - (sp(0.0) - 2 * d2)) < 1e-6 * abs(deform1(g)(0.0))


def test_deform1_breaks_parity_and_oscillates(decreasing16):
    _, g = decreasing16
    dp = deform1(g)
    assert abs(dp(1.0) - dp(-1.0)) > 1e-2
    x = np.linspace(-2.5, 2.5, 2001)[1:-1]
    im = np.imag(dp(x))
    assert np.count_nonzero(np.sign(im[1:]) != np.sign(im[:-1])) >= 2
    assert isinstance(dp(0.3), complex)


def test_deform1_short_range(decaying50):
    sp, g = decaying50
    dp = deform1(g)
    X = sp.half_width + 20 / abs(g.k.imag)
    for x in (X, -X, X + 10):
        assert abs(dp(x)) < 1e-8


def test_deform1_jump_is_minus_potential_jump(decreasing16):
    sp, g = decreasing16
    dp = deform1(g)
    h = sp.half_width
    jump = dp(h + 1e-12) - dp(h - 1e-12)
    assert jump == pytest.approx(-(sp(h + 1e-12) - sp(h - 1e-12)), abs=1e-6)


def test_transformed_bound_state(decreasing16):
    sp, g = decreasing16
    dp = deform1(g)
    psi = BoundWave(bound_states(sp)[0], sp)
    y = deform1_state(g, psi)
    x = away_from(np.linspace(-9, 9, 200), (-2.5, 2.5), 1e-2)
    assert residual(y, dp, x) < 1e-6
    # normalisable: the tails die off
    xx = np.linspace(-40, 40, 40001)
    n1 = y.norm_squared(xx)
    n2 = y.norm_squared(np.linspace(-80, 80, 80001))
    assert n1 == pytest.approx(n2, rel=1e-9)
    dens = np.abs(y(np.array([-1.0, 1.0]))) ** 2
    assert abs(dens[0] - dens[1]) > 1e-3 * dens.max()  # asymmetric


def test_transformed_scattering_state(decreasing16):
    sp, g = decreasing16
    dp = deform1(g)
    y = deform1_state(g, ScatteringWave(sp, 4.0))
    x = away_from(np.linspace(-9, 9, 200), (-2.5, 2.5), 1e-2)
    assert residual(y, dp, x) < 1e-6


def test_new_eigenstate_well1000():
    sp = PotentialSpec.well(1000, 20)
    g = build_gamow(sp, lowest_pole(sp, 0))
    y = new_eigenstate(g)
    a = y.norm_squared(np.linspace(-60, 60, 240001))
    b = y.norm_squared(np.linspace(-120, 120, 480001))
    assert abs(a - b) < 1e-6 * b
    x = np.linspace(15, 40, 60)
    slope = np.polyfit(x, np.log(np.abs(y(x)) ** 2), 1)[0]
    assert slope == pytest.approx(2 * g.k.imag, abs=1e-4)
    xr = away_from(np.linspace(-15, 15, 200), (-10, 10), 1e-2)
    # 1/u is sharply peaked near the near-nodes of u inside the well, so a fine step is needed
    assert residual(y, deform1(g), xr, h=1e-6) < 1e-5


def test_new_eigenstate_needs_decaying(decreasing16):
    _, g = decreasing16
    with pytest.raises(QuadrantError):
        new_eigenstate(g)
    st = reciprocal_state(g)
    x = away_from(np.linspace(-6, 6, 200), (-2.5, 2.5), 1e-2)
    assert residual(st, deform1(g), x) < 1e-6


def test_t_factor_identity(decaying50):
    sp, g = decaying50
    for kappa in (0.5, 2.0, 7.0):
        ts = transformed_scattering(g, kappa)
        k = g.k
        expect = ((kappa - k.real) ** 2 + k.imag**2) / ((kappa + k.real) ** 2 + k.imag**2)
        assert ts.t_squared == pytest.approx(expect, rel=1e-12)
        assert ts.R_tilde + ts.T_tilde == pytest.approx(expect, rel=1e-12)


def test_t_factor_for_decreasing_is_one(decreasing16):
    _, g = decreasing16
    assert transformed_scattering(g, 2.0).t == 1


def test_velocity_ratio_estimate_narrow_barrier():
    sp = PotentialSpec.barrier(1000, 10)
    g = build_gamow(sp, lowest_pole(sp, 1))
    for kappa in (20.0, 25.0, 40.0):
        ts = transformed_scattering(g, kappa)
        est = velocity_ratio_estimate(2 * kappa, 2 * g.k.real)
        assert abs(ts.R_tilde + ts.T_tilde - est) < 1e-6
    assert velocity_ratio_estimate(1.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        transformed_scattering(g, 0.0)


def test_gram_matrix_not_diagonal(decreasing16):
    sp, g = decreasing16
    ys = [deform1_state(g, BoundWave(s, sp)) for s in bound_states(sp)[:3]]
    G = gram_matrix(ys, np.linspace(-30, 30, 30001))
    np.testing.assert_allclose(np.diag(G).real, 1.0, rtol=1e-12)
    assert np.max(np.abs(G - np.diag(np.diag(G)))) > 1e-3
    np.testing.assert_allclose(G, G.conj().T, atol=1e-12)


# --- second order ----------------------------------------------------------


@pytest.fixture(scope="module")
def well_v2():
    sp = PotentialSpec.well(16, 5)
    return sp, deform2(sp, lowest_pole(sp))


def test_v2_is_real(well_v2):
    _, dp = well_v2
    x = np.linspace(*dp.window(), 4001)
    w = dp.wronskian_form(x)
    assert np.max(np.abs(np.imag(w))) < 1e-10
    assert np.max(np.abs(np.real(w) - dp(x))) < 1e-10 * np.max(np.abs(dp(x)))
    assert np.isrealobj(dp(x))


def test_v2_short_range_and_asymmetric(well_v2):
    _, dp = well_v2
    assert abs(dp(60.0)) < 1e-8 and abs(dp(-60.0)) < 1e-8
    assert abs(dp(1.0) - dp(-1.0)) > 1e-3


def test_v2_isospectral(well_v2):
    sp, dp = well_v2
    lo, hi = dp.window()
    cells = sample_cells(dp, lo, hi, 20000, (-2.5, 2.5))
    levels = shoot(cells, -17, 0)
    base = [s.E for s in bound_states(sp)]
    assert len(levels) == len(base) == 7
    np.testing.assert_allclose(levels, base, atol=1e-4)


def test_v2_states(well_v2):
    sp, dp = well_v2
    x = away_from(np.linspace(-10, 10, 200), (-2.5, 2.5), 1e-2)
    for s in bound_states(sp):
        Psi = deform2_state(dp, BoundWave(s, sp))
        assert Psi.energy == s.E
        assert residual(Psi, dp, x) < 1e-6
        a = Psi.norm_squared(np.linspace(-40, 40, 40001))
        b = Psi.norm_squared(np.linspace(-80, 80, 80001))
        assert a == pytest.approx(b, rel=1e-9)


def test_v2_scattering_transmission_close_to_base(well_v2):
    sp, dp = well_v2
    lo, hi = dp.window()
    cells = sample_cells(dp, lo, hi, 20000, (-2.5, 2.5))
    assert transmission(cells, 4.0) == pytest.approx(transmission_coefficient(sp, 4.0), abs=1e-3)
    x = away_from(np.linspace(-10, 10, 200), (-2.5, 2.5), 1e-2)
    Psi = deform2_state(dp, ScatteringWave(sp, 4.0))
    assert residual(Psi, dp, x) < 1e-6


def test_v2_matches_wronskian_of_seed_pair():
    sp = PotentialSpec.barrier(1000, 10)
    dp = deform2(sp, lowest_pole(sp, 2))
    x = np.linspace(-15, 15, 3001)
    np.testing.assert_allclose(np.real(dp.wronskian_form(x)), dp(x), atol=1e-8 * np.max(np.abs(dp(x))))


def test_deform2_state_rejects_transformation_energy(well_v2):
    _, dp = well_v2

    class Fake:
        energy = dp.eps

        def evaluate(self, x):
            return dp.gamow.evaluate(x)

    with pytest.raises(DomainError):
        deform2_state(dp, Fake())


def test_deform2_quadrant(well16):
    with pytest.raises(QuadrantError):
        deform2(well16, 1.7 + 0.4j)


def test_decaying_velocity_vanishes():
    """The decaying function's flux changes direction, so eps_I / v is singular."""
    from gamow1d.darboux import DeformedPotential2

    sp = PotentialSpec.well(16, 5)
    g = build_gamow(sp, lowest_pole(sp, 1))  # even interior, so beta(0) = 0
    _, _, v = g.beta(np.linspace(-3, 3, 600))
    assert v.min() < 0 < v.max()
    with pytest.raises(ZeroVelocityError):
        DeformedPotential2(g)(0.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_haired_barrier_distortions(n):
    sp = PotentialSpec.barrier(1000, 10)
    lobes, groups = count_lobes(deform2(sp, lowest_pole(sp, n)))
    assert lobes == 2 * n
    assert groups == n
