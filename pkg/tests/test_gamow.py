import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamow1d import (
    DomainError,
    NodeError,
    NotAPole,
    PotentialSpec,
    QuadrantError,
    Variant,
    build_gamow,
    gamow_from_pole,
)
from gamow1d.gamow import transformation_k
from conftest import away_from, fd2, lowest_pole
from reference_values import EPS1_WELL50, KBAR_WELL50

CASES = {
    "well16": (PotentialSpec.well(16, 5), None),
    "well50_m1": (PotentialSpec.well(50, 14.2), 1),
    "well1000": (PotentialSpec.well(1000, 20), 0),
    "barrier10_n1": (PotentialSpec.barrier(1000, 10), 1),
    "barrier5_n3": (PotentialSpec.barrier(1000, 5), 3),
}


@pytest.fixture(scope="module", params=list(CASES))
def decaying(request):
    spec, label = CASES[request.param]
    return build_gamow(spec, lowest_pole(spec, label))


def test_fig1_pole_near_quoted_eigenvalue():
    sp = PotentialSpec.well(50, 14.2)
    k = lowest_pole(sp, 1)
    # the quoted value is a rough estimate; the pole sits within 0.05 of it
    assert abs(k * k - EPS1_WELL50) < 0.05


def test_continuity_at_edges(decaying):
    h = decaying.spec.half_width
    for x0 in (-h, h):
        a = np.array(decaying.evaluate(x0 - 1e-9))
        b = np.array(decaying.evaluate(x0 + 1e-9))
        scale = abs(a[0]) + abs(a[1]) / max(abs(decaying.k), abs(decaying.q))
        assert abs(a[0] - b[0]) < 1e-6 * scale


def test_coefficient_matching_is_exact(decaying):
    """Outer and interior branches agree at the edges to 1e-10 relative."""
    g = decaying
    h = g.spec.half_width
    q, k = g.q, g.k
    inner = lambda x: (g.sin_coef * np.sin(q * x) + g.cos_coef * np.cos(q * x),
                       q * (g.sin_coef * np.cos(q * x) - g.cos_coef * np.sin(q * x)))
    ui, di = inner(h)
    assert abs(g.right_out - ui) < 1e-10 * abs(ui) + 1e-14
    assert abs(1j * k * g.right_out - di) < 1e-10 * abs(di) + 1e-14
    ui, di = inner(-h)
    uo = g.left_in + g.left_out
    do = 1j * k * (g.left_in - g.left_out)
    scale = max(abs(ui), abs(di) / abs(k))
    assert abs(uo - ui) < 1e-10 * scale
    assert abs(do - di) < 1e-10 * scale * abs(k)


def test_schrodinger_residual(decaying):
    g = decaying
    h = g.spec.half_width
    x = away_from(np.linspace(-2 * h - 3, 2 * h + 3, 100), (-h, h), 5e-3)
    step = min(1e-3, 0.1 / max(abs(g.q), abs(g.k)))
    u = g(x)
    res = -fd2(g, x, step) + g.spec(x) * u - g.energy * u
    assert np.max(np.abs(res)) < 1e-6 * np.max(np.abs(fd2(g, x, step)))


def test_outgoing_condition(decaying):
    g = decaying
    for X in (g.spec.half_width + 1, 50.0):
        u, du = g.evaluate(X)
        assert abs((du - 1j * g.k * u) / u) < 1e-8
        u, du = g.evaluate(-X)
        assert abs((du + 1j * g.k * u) / u) < 1e-8
    assert g.left_in == 0 and g.right_in == 0


def test_beta_asymptotics_and_flux(decaying):
    g = decaying
    X = g.spec.half_width + 20
    b, _, v = g.beta(X)
    assert abs(b + 1j * g.k) < 1e-8 * abs(g.k)
    assert v == pytest.approx(2 * g.k.real, rel=1e-10)
    b, _, v = g.beta(-X)
    assert abs(b - 1j * g.k) < 1e-8 * abs(g.k)
    assert v == pytest.approx(-2 * g.k.real, rel=1e-10)
    assert g.asymptotic_beta(1) == -1j * g.k
    assert g.asymptotic_beta(-1) == 1j * g.k


def test_riccati_matches_finite_difference(decaying):
    g = decaying
    h = g.spec.half_width
    rng = np.random.default_rng(7)
    x = away_from(rng.uniform(-h - 4, h + 4, 140), (-h, h), 1e-3)[:100]
    assert x.size == 100
    step = 1e-6
    b, bp, _ = g.beta(x)
    fd = (g.beta(x + step)[0] - g.beta(x - step)[0]) / (2 * step)
    assert np.max(np.abs(fd - bp) / np.maximum(np.abs(bp), np.abs(b))) < 1e-6
    u, du = g.evaluate(x)
    np.testing.assert_allclose(b, -du / u, rtol=1e-13)


def test_growth_exponent(decaying):
    g = decaying
    x = np.linspace(g.spec.half_width + 2, g.spec.half_width + 12, 50)
    slope = np.polyfit(x, np.log(np.abs(g(x)) ** 2), 1)[0]
    assert slope == pytest.approx(-2 * g.k.imag, rel=1e-6)
    slope = np.polyfit(-x, np.log(np.abs(g(-x)) ** 2), 1)[0]
    assert slope == pytest.approx(2 * g.k.imag, rel=1e-6)


def test_capture_mirrors_decaying(decaying):
    c = gamow_from_pole(decaying.spec, decaying.k, Variant.CAPTURE)
    assert c.k == -decaying.k.conjugate()
    x = np.linspace(-30, 30, 301)
    np.testing.assert_allclose(np.abs(c(x)), np.abs(decaying(x)), rtol=1e-10)
    np.testing.assert_allclose(np.abs(c(-x)), np.abs(decaying(-x)), rtol=1e-10)


def test_density_factor(decaying):
    g = decaying
    x = 1.3
    assert g.density_factor(x, 0.0) == pytest.approx(abs(g(x)) ** 2)
    r = g.density_factor(x, 2.0) / g.density_factor(x, 0.5)
    assert r == pytest.approx(np.exp(-g.Gamma * 1.5))


def test_density_front_slope():
    """Far out the density is exp(-Gamma (t - x / v)) up to a constant."""
    sp = PotentialSpec.well(1000, 20)
    g = build_gamow(sp, lowest_pole(sp, 0))
    x = np.linspace(40, 60, 41)
    slope = np.polyfit(x, np.log(g.density_factor(x, 3.0)), 1)[0]
    v_plus = 2 * g.k.real
    assert slope == pytest.approx(g.Gamma / v_plus, abs=1e-4)


def test_decreasing_function_envelope():
    sp = PotentialSpec.well(50, 14.2)
    g = build_gamow(sp, KBAR_WELL50, Variant.DECREASING)
    x = np.linspace(sp.half_width + 1, sp.half_width + 30, 60)
    right = np.log(np.abs(g(x)))
    assert np.all(np.diff(right) < 0)  # decays to the right
    assert np.polyfit(x, right, 1)[0] == pytest.approx(-KBAR_WELL50.imag, rel=1e-6)
    left = np.log(np.abs(g(-x)))
    # the incoming-side exponential dominates on the left: |u| grows there
    assert left[-1] > left[0]
    with pytest.raises(DomainError):
        g.density_factor(0.0, 1.0)


def test_decreasing_residual_and_beta():
    sp = PotentialSpec.well(16, 5)
    g = build_gamow(sp, 1.7504 + 0.7657j, Variant.DECREASING)
    x = away_from(np.linspace(-8, 8, 100), (-2.5, 2.5), 5e-3)
    res = -fd2(g, x) + sp(x) * g(x) - g.energy * g(x)
    assert np.max(np.abs(res)) < 1e-6 * np.max(np.abs(fd2(g, x)))
    assert abs(g.beta(30.0)[0] + 1j * g.k) < 1e-8
    assert g.asymptotic_beta(-1) == -1j * g.k


def test_construction_errors(well16, well16_pole):
    with pytest.raises(NotAPole):
        build_gamow(well16, 1.7504 - 0.7657j)
    with pytest.raises(QuadrantError):
        build_gamow(well16, well16_pole.conjugate())
    with pytest.raises(QuadrantError):
        build_gamow(well16, well16_pole, Variant.CAPTURE)
    with pytest.raises(QuadrantError):
        build_gamow(well16, well16_pole, Variant.DECREASING)


def test_transformation_k():
    k = 2 - 0.5j
    assert transformation_k(k, "decaying") == k
    assert transformation_k(k, "capture") == -2 - 0.5j
    assert transformation_k(k, "decreasing") == 2 + 0.5j


def test_node_detection(well16, well16_pole):
    """beta refuses to divide by a vanishing transformation function."""
    g = build_gamow(well16, well16_pole)
    odd = dataclasses.replace(g, sin_coef=1.0 + 0j, cos_coef=0j)
    with pytest.raises(NodeError):
        odd.beta(0.0)
    with pytest.raises(NodeError):
        odd.beta(np.array([-1.0, 0.0, 1.0]))
    odd.beta(0.3)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 6), st.floats(0.01, 2), st.sampled_from(["well", "barrier"]))
def test_decreasing_family_solves_equation_anywhere(kr, ki, kind):
    sp = PotentialSpec(kind, 9.0, 2.0)
    g = build_gamow(sp, complex(kr, ki), Variant.DECREASING)
    x = away_from(np.linspace(-3, 3, 40), (-1, 1), 5e-3)
    d2 = fd2(g, x)
    res = -d2 + sp(x) * g(x) - g.energy * g(x)
    scale = np.max(np.abs(d2)) + np.max(np.abs(g.energy * g(x)))
    assert np.max(np.abs(res)) < 1e-6 * scale
