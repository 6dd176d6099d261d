import math

import pytest

import tukey_ep as te


def test_quantile_and_cdf():
    params = te.TukeyLambdaParams(0.0, 1.0, 1.0)
    assert te.tukey_quantile(params, 0.75) == pytest.approx(0.5)
    assert te.tukey_cdf(params, 0.5) == pytest.approx(0.75, abs=1e-10)
    limit = te.tukey_quantile(te.TukeyLambdaParams(2.0, 3.0, 0.0), 0.75)
    assert limit == pytest.approx(2.0 + 3.0 * math.log(3.0))
    with pytest.raises(ValueError):
        te.tukey_quantile(params, 1.0)
    with pytest.raises(ValueError):
        te.TukeyLambdaParams(0.0, -1.0, 0.0)


def test_samplers_are_reproducible():
    params = te.TukeyLambdaParams(0.0, 1.0, 1.0)
    a = te.tukey_samples(params, 1000, seed=3, stream=1)
    assert a == te.tukey_samples(params, 1000, seed=3, stream=1)
    assert all(-1.0 <= v <= 1.0 for v in a)
    assert len(te.gaussian_samples(10, seed=1)) == 10
    assert te.cauchy_samples(5, seed=1) == te.cauchy_samples(5, seed=1)


def test_benchmarks():
    assert te.rosenbrock([1.0, 1.0]) == 0.0
    assert te.sphere([3.0, 4.0]) == 25.0
    assert abs(te.ackley([0.0] * 20)) < 1e-12


def test_published_geometry():
    d = te.derive_geometry(te.Givens(100, 30, -170), te.Vars(-81.67, 94.799), te.FeedSign.SIDE)
    assert d.valid
    assert d.F == pytest.approx(100.93, abs=0.05)
    assert d.M == pytest.approx(2.3970, abs=0.003)
    assert d.l_sm == pytest.approx(93.52, abs=0.15)
    r8, r9 = te.design_condition_residuals(d, te.Vars(-81.67, 94.799))
    assert abs(r8) < 1e-9 and abs(r9) < 1e-9
    assert len(te.cross_section(te.Givens(), te.Vars(), d)) == 8
    assert te.dragonian_fitness(te.Givens(), te.Vars(-60.0, 94.0)) == 1000.0


def test_evolve_with_python_objective():
    config = te.EvolutionConfig()
    config.mu = 21
    config.bounds = [(-5.12, 5.12), (-5.12, 5.12)]
    config.max_evaluations = 4200
    config.seed = 9
    scheme = te.SchemeConfig()
    scheme.k = 7
    result = te.evolve(lambda x: sum(v * v for v in x), config, scheme)
    assert result.evaluations == 21 * (result.generations + 1)
    assert result.best_fitness < 1e-3
    best = [row[3] for row in result.trajectory]
    assert all(b <= a for a, b in zip(best, best[1:]))


def test_run_experiment_and_oracle(tmp_path):
    out = te.run_experiment(
        {"objective": "sphere", "scheme": 2, "population": 9, "trials": 3, "budget": 270, "seed": 4},
        workers=2,
        out_dir=str(tmp_path),
    )
    assert len(out["manifest"]["trials"]) == 3
    assert out["manifest"]["config"]["population"] == 9
    assert (tmp_path / "trials.csv").read_text().startswith(
        "trial,generation,evaluations,best_of_generation,best_so_far\n"
    )
    theta0, f12, fitness = te.grid_search_oracle(
        te.Givens(), te.FitnessConfig(), (-85.0, -80.0), (94.0, 96.0), 0.5
    )
    assert fitness < 130.0


def test_bad_config_raises():
    with pytest.raises(ValueError):
        te.run_experiment({"objective": "sphere", "scheme": 3, "population": 20})


def test_cli_entry_point(capsys):
    assert te.main(["geometry", "--theta0", "-81.67", "--f12", "94.799"]) == 0
    assert "M=2.397" in capsys.readouterr().out
    assert te.main(["nope"]) == 1
