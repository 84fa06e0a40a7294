import json
import math

import numpy as np
import pytest

import boltzq as bq
from boltzq.games import _raw_coefficients


def mk(a_rows, b_rows, name="g"):
    return bq.Game.from_matrices(name, a_rows, b_rows)


class TestReduce:
    def test_matching_pennies_values(self):
        co = bq.reduce_payoffs(bq.fixture("matching_pennies"),
                               bq.Temperatures(1, 1))
        assert (co.a, co.b, co.c, co.d) == (4.0, -2.0, -4.0, 2.0)

    def test_coordination_ratio_matches_mixed_point(self):
        co = bq.reduce_payoffs(bq.fixture("stag_hunt"), bq.Temperatures(1, 1))
        assert (co.a, co.b, co.c, co.d) == (5.0, -2.0, 5.0, -2.0)
        assert co.b_over_a == pytest.approx(-2.0 / 5.0, abs=1e-15)

    def test_doubling_tx_halves_a_and_b(self):
        game = bq.fixture("stag_hunt")
        c1 = bq.reduce_payoffs(game, bq.Temperatures(1, 1))
        c2 = bq.reduce_payoffs(game, bq.Temperatures(2, 1))
        assert c2.a == pytest.approx(c1.a / 2, rel=1e-15)
        assert c2.b == pytest.approx(c1.b / 2, rel=1e-15)
        assert c2.b_over_a == pytest.approx(c1.b_over_a, rel=1e-15)
        assert (c2.c, c2.d) == (c1.c, c1.d)

    def test_reconstruction_exact(self, rng):
        for _ in range(200):
            entries = rng.uniform(-10, 10, (2, 2, 2))
            game = mk(entries[0].tolist(), entries[1].tolist())
            tx, ty = rng.uniform(0.05, 20, 2)
            co = bq.reduce_payoffs(game, bq.Temperatures(tx, ty))
            raw_a, raw_b, raw_c, raw_d = _raw_coefficients(game)
            assert co.a * tx == pytest.approx(raw_a, abs=1e-12)
            assert co.b * tx == pytest.approx(raw_b, abs=1e-12)
            assert co.c * ty == pytest.approx(raw_c, abs=1e-12)
            assert co.d * ty == pytest.approx(raw_d, abs=1e-12)

    def test_ratio_temperature_invariance(self, rng):
        for _ in range(200):
            entries = rng.uniform(-5, 5, (2, 2, 2))
            game = mk(entries[0].tolist(), entries[1].tolist())
            base = bq.reduce_payoffs(game, bq.Temperatures(1, 1))
            if abs(base.raw_a) < 1e-6 or abs(base.raw_c) < 1e-6:
                continue
            tx, ty = rng.uniform(0.01, 50, 2)
            co = bq.reduce_payoffs(game, bq.Temperatures(tx, ty))
            assert co.b_over_a == pytest.approx(base.b_over_a, abs=1e-12)
            assert co.d_over_c == pytest.approx(base.d_over_c, abs=1e-12)

    def test_rejects_wrong_dimension(self):
        g3 = mk(np.eye(3).tolist(), np.eye(3).tolist())
        with pytest.raises(bq.UnsupportedDimensionError):
            bq.reduce_payoffs(g3, bq.Temperatures(1, 1))


def brute_force_equilibrium(game, x, y, grid=1001, tol=1e-9):
    """No deviation on a 1001-point own-strategy grid may gain > tol."""
    A = np.asarray(game.payoff_x.entries)
    B = np.asarray(game.payoff_y.entries)
    yvec = np.array([y, 1 - y])
    xvec = np.array([x, 1 - x])
    base_x = np.array([x, 1 - x]) @ A @ yvec
    base_y = np.array([y, 1 - y]) @ B @ xvec
    probes = np.linspace(0.0, 1.0, grid)
    dev_x = probes * (A @ yvec)[0] + (1 - probes) * (A @ yvec)[1]
    dev_y = probes * (B @ xvec)[0] + (1 - probes) * (B @ xvec)[1]
    return dev_x.max() <= base_x + tol and dev_y.max() <= base_y + tol


class TestNash:
    def test_matching_pennies_single_mixed(self):
        result = bq.nash_equilibria(bq.fixture("matching_pennies"))
        assert len(result) == 1
        ne = result[0]
        assert ne.kind.value == "mixed"
        assert (ne.x, ne.y) == (0.5, 0.5)

    def test_stag_hunt_three(self):
        result = bq.nash_equilibria(bq.fixture("stag_hunt"))
        profiles = {(ne.x, ne.y, ne.kind.value) for ne in result}
        assert profiles == {(1.0, 1.0, "pure"), (0.0, 0.0, "pure"),
                            (0.4, 0.4, "mixed")}

    def test_hawk_dove(self):
        result = bq.nash_equilibria(bq.fixture("hawk_dove"))
        profiles = {(ne.x, ne.y) for ne in result}
        assert (1.0, 0.0) in profiles and (0.0, 1.0) in profiles
        mixed = [ne for ne in result if ne.kind.value == "mixed"]
        assert len(mixed) == 1
        assert mixed[0].x == pytest.approx(1 / 3, abs=1e-12)
        assert mixed[0].y == pytest.approx(1 / 3, abs=1e-12)

    def test_battle_coordination_mixed_point(self):
        mixed = [ne for ne in bq.nash_equilibria(bq.fixture("battle_coordination"))
                 if ne.kind.value == "mixed"]
        assert mixed[0].x == pytest.approx(1 / 3, abs=1e-12)
        assert mixed[0].y == pytest.approx(2 / 3, abs=1e-12)

    def test_every_equilibrium_survives_grid_check(self, rng):
        checked = 0
        for _ in range(300):
            entries = rng.integers(-4, 5, (2, 2, 2)).astype(float)
            game = mk(entries[0].tolist(), entries[1].tolist())
            try:
                result = bq.nash_equilibria(game)
            except bq.DegenerateGameError:
                continue
            for ne in result:
                assert brute_force_equilibrium(game, ne.x, ne.y)
                checked += 1
        assert checked > 300

    def test_continuum_degeneracy_flag(self):
        flat = mk([[1.0, 1.0], [1.0, 1.0]], [[0.0, 1.0], [2.0, 3.0]])
        with pytest.raises(bq.DegenerateGameError) as err:
            bq.nash_equilibria(flat)
        assert err.value.continuum


class TestRiskDominance:
    def test_stag_hunt_picks_payoff_dominant_corner(self):
        # Product of deviation losses: 3*3 = 9 for (stag,stag) beats 2*2 = 4.
        ne = bq.risk_dominant_profile(bq.fixture("stag_hunt"))
        assert (ne.x, ne.y) == (1.0, 1.0)

    def test_uniform_mix_criterion_agrees(self):
        # In a symmetric game the risk-dominant action earns more against a
        # uniform opponent; cross-check the product rule against that.
        game = bq.fixture("stag_hunt")
        A = np.asarray(game.payoff_x.entries)
        against_uniform = A @ np.array([0.5, 0.5])
        assert against_uniform[0] > against_uniform[1]

    def test_symmetric_tie_returns_none(self):
        game = mk([[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 1.0]])
        assert bq.risk_dominant_profile(game) is None

    def test_battle_tie_returns_none(self):
        assert bq.risk_dominant_profile(bq.fixture("battle_coordination")) is None

    def test_hawk_dove_tie_via_relabel(self):
        assert bq.risk_dominant_profile(bq.fixture("hawk_dove")) is None

    def test_asymmetric_coordination(self):
        game = mk([[5.0, 0.0], [0.0, 1.0]], [[5.0, 0.0], [0.0, 1.0]])
        ne = bq.risk_dominant_profile(game)
        assert (ne.x, ne.y) == (1.0, 1.0)

    def test_not_applicable_for_dominance_solvable(self):
        with pytest.raises(bq.NotApplicableError):
            bq.risk_dominant_profile(bq.fixture("prisoners_dilemma"))


class TestClassifyRegion:
    def test_matching_pennies(self):
        co = bq.reduce_payoffs(bq.fixture("matching_pennies"),
                               bq.Temperatures(1, 1))
        assert bq.classify_region(co).label is bq.GameRegionLabel.SINGLE_REST_POINT_ONLY

    def test_coordination_box(self):
        co = bq.ReducedCoefficients.from_values(5, -2, 5, -2)
        assert bq.classify_region(co).label is bq.GameRegionLabel.MULTI_NE_TRIPLE_POSSIBLE

    def test_anti_coordination_box(self):
        co = bq.reduce_payoffs(bq.fixture("hawk_dove"), bq.Temperatures(1, 1))
        assert bq.classify_region(co).label is bq.GameRegionLabel.MULTI_NE_TRIPLE_POSSIBLE

    def test_single_ne_stripe(self):
        co = bq.ReducedCoefficients.from_values(10.0, 1.0, 10.0, -8.0)
        assert bq.classify_region(co).label is bq.GameRegionLabel.SINGLE_NE_TRIPLE_POSSIBLE

    def test_prisoners_dilemma_dark_region(self):
        co = bq.reduce_payoffs(bq.fixture("prisoners_dilemma"),
                               bq.Temperatures(1, 1))
        assert bq.classify_region(co).label is bq.GameRegionLabel.SINGLE_REST_POINT_ONLY

    def test_corner_carries_numeric_boundary(self):
        co = bq.ReducedCoefficients.from_values(10, 3, 10, -15)
        region = bq.classify_region(co)
        assert region.label is bq.GameRegionLabel.NUMERIC_BOUNDARY
        assert region.boundary is not None and region.boundary < 0
        assert region.triple_possible is False
        # a thin sliver hugging b/a = 0 does admit triples
        thin = bq.ReducedCoefficients.from_values(10, 0.03, 10, -15)
        assert bq.classify_region(thin).triple_possible is True

    def test_mirrored_corner(self):
        co = bq.ReducedCoefficients.from_values(10, -15, 10, 3)
        region = bq.classify_region(co)
        assert region.label is bq.GameRegionLabel.NUMERIC_BOUNDARY

    def test_degenerate_raises(self):
        co = bq.ReducedCoefficients.from_values(0.0, 1.0, 2.0, -1.0)
        with pytest.raises(bq.DegenerateGameError):
            bq.classify_region(co)

    def test_opposed_slopes_never_multi(self, rng):
        for _ in range(10_000):
            a, c = rng.uniform(0.1, 20, 2)
            b, d = rng.uniform(-20, 20, 2)
            co = bq.ReducedCoefficients.from_values(a, b, -c, d)
            label = bq.classify_region(co).label
            assert label is bq.GameRegionLabel.SINGLE_REST_POINT_ONLY


class TestGameIO:
    def test_json_round_trip(self, tmp_path):
        game = bq.fixture("stag_hunt")
        path = tmp_path / "g.json"
        path.write_text(json.dumps(game.to_dict()))
        loaded = bq.load_game(path)
        assert loaded == game

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(bq.GameFormatError):
            bq.load_game(path)

    def test_non_square_rejected(self):
        with pytest.raises(bq.GameFormatError):
            mk([[1.0, 2.0]], [[1.0], [2.0]])

    def test_non_finite_rejected(self):
        with pytest.raises(bq.GameFormatError):
            mk([[1.0, math.inf], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]])
