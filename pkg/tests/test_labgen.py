import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobius_sense.labgen import (
    CSV_COLUMNS,
    DESK_TRIALS,
    TRIAL_TABLE,
    ExperimentConfig,
    attainment_poly,
    attainment_target_eigenvalue,
    experiment_csv,
    plan_trials,
    random_illcond,
    random_orthogonal_2x2,
    random_polynomial,
    read_csv,
    rho_scaling_branch,
    run_experiment,
    run_trial,
    save_experiment,
    scale_poly_to_rho,
    trial_rng,
)
from mobius_sense.eigensolve import eigenvalues, chordal_distance
from mobius_sense.mobius import Mobius2x2, ProjPoint, mobius_transform
from mobius_sense.polycore import HomMatrixPolynomial
from mobius_sense.sensitivity import rho_factors


class TestConfig:
    def test_full_scale_counts(self):
        cfg = ExperimentConfig.paper(1)
        assert cfg.trials == TRIAL_TABLE
        assert [k for k, _ in cfg.pairs] == list(range(1, 16))
        assert all(n == 5 for _, n in cfg.pairs)
        assert sum(cfg.trials) == 244

    def test_desk_counts(self):
        cfg = ExperimentConfig.desk(4)
        assert cfg.trials == DESK_TRIALS and cfg.backward

    def test_default_schemes(self):
        assert [ExperimentConfig.desk(e).scheme for e in range(1, 6)] == ["p", "r", "p", "p", "r"]

    def test_exp3_illcond(self):
        cfg = ExperimentConfig.paper(3)
        assert cfg.matrix_kind == "illcond" and cfg.s_values == tuple(range(11))
        assert cfg.sweep == "random"

    def test_exp4_illcond_variant(self):
        cfg = ExperimentConfig.desk(4, matrix_kind="illcond")
        assert cfg.pairs == ((1, 5),) and cfg.matrix_kind == "illcond"

    @pytest.mark.parametrize("kw", [
        dict(experiment=6),
        dict(experiment=1, pairs=((16, 2),), trials=(1,)),
        dict(experiment=1, pairs=((1, 2),), trials=(0,)),
        dict(experiment=1, pairs=((1, 2),), trials=(1, 2)),
        dict(experiment=3, pairs=((1, 2),), trials=(1,), matrix_kind="illcond"),
        dict(experiment=1, workers=0),
        dict(experiment=1, scheme="x"),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)

    def test_to_dict_json(self):
        d = ExperimentConfig.desk(2).to_dict()
        assert json.loads(json.dumps(d))["rho_exponents"] == list(range(7))


def test_plan_trials():
    cfg = ExperimentConfig(1, pairs=((1, 2), (3, 4)), trials=(2, 3))
    specs = plan_trials(cfg)
    assert [s.trial for s in specs] == list(range(5))
    assert [(s.k, s.n, s.slot) for s in specs][2:] == [(3, 4, 0), (3, 4, 1), (3, 4, 2)]


def test_trial_rng_streams():
    a = trial_rng(1, 2, 3).standard_normal(4)
    assert np.array_equal(a, trial_rng(1, 2, 3).standard_normal(4))
    assert not np.array_equal(a, trial_rng(1, 2, 4).standard_normal(4))


class TestGenerators:
    def test_random_polynomial(self, rng):
        P = random_polynomial(3, 4, rng)
        assert P.degree == 4 and P.shape == (3, 3)
        with pytest.raises(ValueError):
            random_polynomial(3, 16, rng)

    def test_orthogonal(self, rng):
        A = random_orthogonal_2x2(rng)
        M = A.matrix
        assert np.allclose(M.T @ M, np.eye(2), atol=1e-14)
        assert A.cond_2 == pytest.approx(1)

    @pytest.mark.parametrize("s", [0, 3, 10])
    def test_illcond(self, rng, s):
        A = random_illcond(rng, s)
        assert A.cond_2 == pytest.approx(10.0**s, rel=1e-6)
        with pytest.raises(ValueError):
            random_illcond(rng, 11)


class TestRhoScaling:
    @pytest.mark.parametrize("norms,rho,label,mirror", [
        ((1, 1, 1), 10, "a", False),
        ((1, 5, 2), 10, "b1", False),
        ((1, 50, 2), 10, "b2", False),
        ((1, 2, 5), 10, "c1", False),
        ((1, 2, 50), 10, "c2", False),
        ((50, 2, 1), 10, "c2", True),
    ])
    def test_branch(self, norms, rho, label, mirror):
        assert rho_scaling_branch(norms, rho) == (label, mirror)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), e=st.integers(0, 10),
           f=st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    def test_hits_target(self, seed, e, f):
        rng = np.random.default_rng(seed)
        C = rng.standard_normal((3, 2, 2)) * (10.0 ** np.array(f))[:, None, None]
        P = scale_poly_to_rho(HomMatrixPolynomial(C), 10.0**e, rng)
        rho, ok = rho_factors(P)
        assert ok and rho == pytest.approx(10.0**e, rel=1e-9)

    def test_equal_norms(self):
        P = HomMatrixPolynomial([np.eye(2)] * 3)
        Q = scale_poly_to_rho(P, 100.0, np.random.default_rng(0))
        assert rho_factors(Q)[0] == pytest.approx(100)

    def test_rejects(self, rng):
        with pytest.raises(ValueError):
            scale_poly_to_rho(random_polynomial(2, 3, rng), 10)
        with pytest.raises(ValueError):
            scale_poly_to_rho(random_polynomial(2, 2, rng), 0.5)
        with pytest.raises(ValueError):
            scale_poly_to_rho(HomMatrixPolynomial([np.zeros((2, 2)), np.eye(2), np.eye(2)]), 10)


class TestAttainment:
    @pytest.mark.parametrize("target", ["upper", "lower"])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_target_is_eigenvalue(self, k, target):
        A = Mobius2x2.from_matrix([[10, 0], [0, 0.1]])
        P = attainment_poly(A, k, 3, target)
        v = attainment_target_eigenvalue(A, k, target)
        assert min(chordal_distance(v, w) for w in eigenvalues(P)) < 1e-10

    def test_rejects(self):
        A = Mobius2x2.from_matrix([[1, 0], [0, 1]])
        with pytest.raises(ValueError):
            attainment_poly(A, 1, 1)
        with pytest.raises(ValueError):
            attainment_poly(A, 1, 2, "middle")


class TestRunner:
    def test_trial_records(self):
        cfg = ExperimentConfig(1, pairs=((3, 2),), trials=(1,))
        tr = run_trial(cfg, plan_trials(cfg)[0])
        assert tr.error is None and len(tr.records) == 6

    def test_backward_trial(self):
        cfg = ExperimentConfig(5, pairs=((2, 3),), trials=(1,), rho_exponents=(2,))
        tr = run_trial(cfg, plan_trials(cfg)[0])
        assert tr.rho_target == 100 and len(tr.records) == 6
        assert all(r.rho == pytest.approx(100) for r in tr.records)

    def test_illcond_trial(self):
        cfg = ExperimentConfig(3, pairs=((1, 2),), trials=(3,), s_values=(0, 2, 4),
                               matrix_kind="illcond")
        res = run_experiment(cfg)
        assert [t.s for t in res] == [0, 2, 4]
        assert res[2].records[0].cond_inf_A > 1e3

    def test_deterministic_and_thread_independent(self):
        cfg = ExperimentConfig.desk(2, seed=3)
        a = experiment_csv(cfg, run_experiment(cfg))
        cfg4 = ExperimentConfig.desk(2, seed=3, workers=4)
        assert experiment_csv(cfg4, run_experiment(cfg4)) == a
        cfg_other = ExperimentConfig.desk(2, seed=4)
        assert experiment_csv(cfg_other, run_experiment(cfg_other)) != a


class TestCsv:
    def test_round_trip(self, tmp_path):
        cfg = ExperimentConfig(1, pairs=((2, 2),), trials=(2,))
        man = save_experiment(cfg, str(tmp_path), "0")
        rows = read_csv(tmp_path / "exp1.csv")
        assert len(rows) == man["rows"] == 8
        assert set(rows[0]) == set(CSV_COLUMNS)
        assert rows[0]["scheme"] == "p" and rows[0]["k"] == 2.0
        m = json.loads((tmp_path / "exp1_manifest.json").read_text())
        assert m["config"]["trials"] == [2] and m["dropped_trials"] == []

    def test_missing_column(self):
        with pytest.raises(ValueError):
            read_csv(io.StringIO("experiment,trial\n1,2\n"))

    def test_special_values(self):
        text = ",".join(CSV_COLUMNS) + "\n" + ",".join(["nan"] * 5 + ["a"] + ["inf"] * 21) + "\n"
        row = read_csv(io.StringIO(text))[0]
        assert math.isnan(row["k"]) and row["q_exact"] == math.inf
