import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gasbound.potentials import (
    ConfigError,
    PairPotential,
    TailPiece,
    ThermoState,
    boltzmann,
    builtin,
    evaluate,
    hard_sphere,
    kac_exponential,
    load_potential,
    mayer,
    mayer_abs,
    parse_config,
    square_well,
    tabulated,
)


def test_evaluate_examples(hard_rod, sq_well):
    assert evaluate(hard_rod, 0.5) == math.inf
    assert evaluate(hard_rod, 2.0) == 0.0
    assert evaluate(sq_well, 1.2) == pytest.approx(-math.log(2))
    assert evaluate(sq_well, 1.5) == 0.0  # well is half-open


def test_boltzmann_examples(hard_rod, sq_well, unit_beta):
    assert boltzmann(hard_rod, unit_beta, 0.5) == 0.0
    for beta in (0.1, 1.0, 7.0):
        assert boltzmann(hard_rod, ThermoState(beta), 2.0) == 1.0
    assert boltzmann(sq_well, unit_beta, 1.2) == pytest.approx(2.0, rel=1e-15)


def test_mayer_abs_examples(hard_rod, sq_well, unit_beta):
    assert mayer_abs(hard_rod, unit_beta, 0.3) == 1.0
    assert mayer_abs(hard_rod, unit_beta, 1.0) == 0.0
    assert mayer_abs(sq_well, unit_beta, 1.2) == pytest.approx(1.0, rel=1e-15)
    assert mayer(sq_well, unit_beta, 1.2) == pytest.approx(-1.0, rel=1e-15)


def test_vectorised_evaluation(sq_well, unit_beta):
    r = np.array([0.0, 0.99, 1.0, 1.49, 1.5, 3.0])
    assert np.array_equal(boltzmann(sq_well, unit_beta, r) == 0, r < 1)
    np.testing.assert_allclose(mayer_abs(sq_well, unit_beta, r), [1, 1, 1, 1, 0, 0], atol=1e-15)


@pytest.mark.parametrize("make", [
    lambda: hard_sphere(1, 1),
    lambda: square_well(1, 1, 1.5, math.log(2)),
    lambda: kac_exponential(1, 1, 1),
    lambda: square_well(3, 1, 1.3, 0.4),
])
@given(r=st.floats(0, 20), beta=st.floats(0.05, 5))
@settings(max_examples=60, deadline=None)
def test_boltzmann_consistent_with_energy(make, r, beta):
    p, t = make(), ThermoState(beta)
    phi = evaluate(p, r)
    b = boltzmann(p, t, r)
    if math.isinf(phi):
        assert b == 0.0 and r < p.core_radius
    else:
        assert b == pytest.approx(math.exp(-beta * phi), rel=1e-14)
    # disjoint split of the Mayer magnitude
    m = mayer_abs(p, t, r)
    expect = 1 - b if (math.isinf(phi) or phi >= 0) else b - 1
    assert m == pytest.approx(expect, rel=1e-14, abs=1e-300)


def test_builtin_stability_units():
    assert hard_sphere(1, 1).local_stability_unit == 0.0
    assert square_well(1, 1, 1.5, 0.7).local_stability_unit == pytest.approx(1.4)
    # two well neighbours per side when L - R spans two core lengths
    assert square_well(1, 1, 2.5, 1.0).local_stability_unit == pytest.approx(4.0)
    q = math.exp(-1.0)
    assert kac_exponential(1, 1, 1).local_stability_unit == pytest.approx(q / (1 - q))
    assert kac_exponential(1, 2, 0.5).local_stability_unit == pytest.approx(
        math.exp(-0.5) / (1 - math.exp(-0.5)))


def _max_well_neighbours_1d(R, L):
    """Largest number of points in [R, L) on one side, pairwise >= R apart (greedy is optimal)."""
    count, x = 0, R
    while x < L:
        count += 1
        x += R
    return count


@pytest.mark.parametrize("L", [1.2, 1.5, 2.0, 2.5, 3.7])
def test_square_well_unit_matches_packing_count(L):
    p = square_well(1, 1.0, L, 1.0)
    assert p.local_stability_unit == pytest.approx(2 * _max_well_neighbours_1d(1.0, L))


def _random_packing(rng, R, n, spread):
    pts = []
    for _ in range(50 * n):
        x = rng.uniform(-spread, spread)
        if all(abs(x - y) >= R for y in pts):
            pts.append(x)
        if len(pts) == n:
            break
    return np.array(pts)


@pytest.mark.parametrize("make", [
    lambda: square_well(1, 1, 1.5, math.log(2)),
    lambda: square_well(1, 1, 2.5, 0.3),
    lambda: kac_exponential(1, 1, 1),
    lambda: kac_exponential(1, 3, 0.4),
])
def test_local_stability_on_random_packings(make):
    p = make()
    rng = np.random.default_rng(7)
    beta = 1.3
    worst = math.inf
    for _ in range(200):
        n = int(rng.integers(1, 13))
        # tight packings near y make the bound nearly active
        xs = _random_packing(rng, p.core_radius, n, spread=n * p.core_radius)
        y = rng.uniform(-2, 2)
        e = float(np.sum(beta * evaluate(p, np.abs(xs - y))))
        worst = min(worst, e)
        assert e >= -beta * p.local_stability_unit - 1e-12
    # the dense lattice around y attains the bound in the limit
    lattice = np.concatenate([np.arange(1, 40), -np.arange(1, 40)]) * p.core_radius
    e = float(np.sum(beta * evaluate(p, np.abs(lattice))))
    assert e >= -beta * p.local_stability_unit - 1e-12
    assert e <= -beta * p.local_stability_unit * 0.99


def test_invalid_potentials():
    with pytest.raises(ValueError):
        square_well(1, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        hard_sphere(1, -1.0)
    with pytest.raises(ValueError):
        PairPotential(3, 1.0, (TailPiece(1.0, math.inf, "power", (-1.0, 3.0)),), 1.0)
    with pytest.raises(ValueError):
        PairPotential(1, 1.0, (TailPiece(1.0, math.inf, "constant", (0.5,)),))
    with pytest.raises(ValueError):
        # repulsive tails cannot carry a stability constant
        PairPotential(1, 1.0, (TailPiece(1.0, 2.0, "constant", (0.5,)),), 1.0)
    with pytest.raises(ValueError):
        tabulated(1, 1.0, [1.0, 2.0], [-1.0, 0.0])


def test_tabulated_breakpoints_include_sign_change():
    p = tabulated(1, 1.0, [1.0, 2.0, 3.0], [1.0, -1.0, 0.0], local_stability_unit=2.0)
    assert 1.5 in p.tail_breakpoints
    assert evaluate(p, 1.5) == pytest.approx(0.0)
    assert not p.is_repulsive


def test_parse_config_and_load(tmp_path):
    text = '# comment\n[potential]\nkind = "square_well"\ndimension = 1\ncore_radius = 1\nwell_range = 1.5 # inline\nwell_depth = 0.5\n'
    cfg = parse_config(text)
    assert cfg == {"kind": "square_well", "dimension": 1, "core_radius": 1,
                   "well_range": 1.5, "well_depth": 0.5}
    f = tmp_path / "w.toml"
    f.write_text(text)
    p = load_potential(f)
    assert p.local_stability_unit == pytest.approx(1.0)


def test_load_tabulated_relative_path(tmp_path):
    (tmp_path / "tab.txt").write_text("1.0 0.5\n2.0 0.0\n")
    f = tmp_path / "t.toml"
    f.write_text("kind = tabulated\ntable_file = tab.txt\n")
    p = load_potential(f)
    assert p.is_repulsive and evaluate(p, 1.5) == pytest.approx(0.25)


@pytest.mark.parametrize("text", ["kind square_well\n", "dimension = 1\n",
                                  "kind = square_well\nwell_range = 0.5\nwell_depth = 1\n",
                                  "kind = nonsense\n", " = 3\n"])
def test_bad_config(tmp_path, text):
    f = tmp_path / "bad.toml"
    f.write_text(text)
    with pytest.raises(ConfigError):
        load_potential(f)


def test_builtin_aliases():
    assert builtin("hard_rod").dimension == 1
    assert builtin("kac", kac_alpha=2.0, kac_gamma=1.0).tail[0].params[0] == pytest.approx(-1.0)
