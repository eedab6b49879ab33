import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftmax.brick import (
    ExperimentConfig,
    beta_projection_decomposition_check,
    run_experiment,
    sample_brick,
    sample_seed,
    unit_draw,
)
from shiftmax.conditions import check_admissible, check_evanescent, check_summable
from shiftmax.haar import StepFunction, words
from shiftmax.sequences import DEFAULT_SEQUENCE, GaugeSpec, doubly_exponential, geometric, log2_table

A = DEFAULT_SEQUENCE


def test_doubly_exponential_is_evanescent():
    for e0 in (0, 3):
        for horizon in (1, 5, 12):
            assert check_evanescent(doubly_exponential(e0), 1, horizon).ok


def test_geometric_is_not_evanescent():
    res = check_evanescent(geometric(Fraction(1, 2)), 1, 5)
    assert not res.ok
    # the very first ratio 1/2 already exceeds 2^-4
    assert res.first_violation == 0


def test_slow_step_flagged_at_its_index():
    e = [0]
    for n in range(8):
        e.append(e[-1] + (1 << (n + 2)))
    e[5] = e[4] + 1
    for k in range(6, 9):
        e[k] = e[k - 1] + (1 << (k + 1))
    res = check_evanescent(log2_table([-x for x in e], tail_step=1 << 12), 1, 8)
    assert not res.ok and res.first_violation == 4


def test_evanescence_constant_relaxes():
    a = log2_table([0, -3, -11], tail_step=100)
    assert not check_evanescent(a, 1, 2).ok
    assert check_evanescent(a, 2, 2).ok
    with pytest.raises(ValueError):
        check_evanescent(a, 1, 0)


@pytest.mark.parametrize("rule,ok", [("2^-n*a_n", True), ("n^-1*a_n", True), ("a_n", False)])
def test_admissibility_examples(rule, ok):
    assert check_admissible(GaugeSpec(rule), A, 8).ok == ok


def test_admissibility_log_gap_check():
    res = check_admissible(GaugeSpec("2^-5n*a_n"), A, 8)
    assert not res.ok and "C_lin" in res.reason
    assert check_admissible(GaugeSpec("2^-5n*a_n", c_lin=5), A, 8).ok


def test_summability():
    assert check_summable(A).ok
    assert check_summable(geometric(Fraction(9, 10))).ok
    assert not check_summable(log2_table([0, -1])).ok


@given(st.integers(0, (1 << 64) - 1))
def test_samples_stay_in_brick(seed):
    g = GaugeSpec(depth=4)
    s = sample_brick(g, A, seed)
    for w, c in s.coeffs.as_dict().items():
        assert abs(c) <= g.b(w, A).to_fraction()
        assert c.denominator & (c.denominator - 1) == 0


def test_sampling_deterministic_and_order_free():
    g = GaugeSpec(depth=4)
    s = sample_brick(g, A, 99)
    assert s == sample_brick(g, A, 99)
    ws = [w for k in range(4) for w in words(k)]
    random.Random(0).shuffle(ws)
    for w in ws:
        assert s.coeffs.coeff(w) == unit_draw(99, w) * g.b(w, A).to_fraction()


def test_distinct_words_distinct_streams():
    draws = {unit_draw(5, w) for k in range(6) for w in words(k)}
    assert len(draws) == 63


def test_unit_draw_moments():
    n = 100_000
    mean = float(sum(unit_draw(i, "01") for i in range(n))) / n
    assert abs(mean) <= 3 / math.sqrt(n) / math.sqrt(3)


def test_seed_validation():
    with pytest.raises(ValueError):
        unit_draw(-1, "")
    with pytest.raises(ValueError):
        unit_draw(1 << 64, "")
    assert sample_seed(42, 0) != sample_seed(42, 1)


def small_config(**kw):
    base = dict(a=A, gauge=GaugeSpec(), samples=60, seed=3, depth=3)
    base.update(kw)
    return ExperimentConfig(**base)


def test_empty_experiment():
    rep = run_experiment(small_config(samples=0))
    assert rep["records"] == [] and rep["certified"] == 0
    assert "certification_rate" not in rep
    assert all("failure_rate" not in lv for lv in rep["levels"])


def test_experiment_deterministic_across_workers():
    cfg = small_config()
    one = json.dumps(run_experiment(cfg), sort_keys=True)
    assert one == json.dumps(run_experiment(cfg), sort_keys=True)
    assert one == json.dumps(run_experiment(cfg, workers=2), sort_keys=True)


def test_experiment_aggregates_consistent():
    rep = run_experiment(small_config(samples=120))
    hist = rep["period_histogram"]
    assert sum(hist.values()) == rep["certified"] == 120 - rep["uncertified <= 3"]
    periods = sorted(int(p) for p in hist)
    tails = [sum(c for p, c in hist.items() if int(p) >= q) for q in range(1, max(periods) + 2)]
    assert all(y <= x for x, y in zip(tails, tails[1:]))
    for lv in rep["levels"]:
        assert 0 <= lv["failure_rate"] <= 1 and 0 <= lv["cumulative_rate"] <= 1
        assert lv["within_bound"]
    for r in rep["records"]:
        if r["certified_level"] is not None:
            assert r["passed"][r["certified_level"] - 1]
            assert not any(r["passed"][: r["certified_level"] - 1])
            assert r["period"] <= 1 << (r["certified_level"] - 1)


def test_experiment_with_base_function():
    f0 = StepFunction(2, (1, 0, 0, Fraction(1, 2)))
    rep = run_experiment(small_config(f0=f0, samples=30))
    assert rep["config"]["f0"] == f0.to_json()
    assert all(lv["within_bound"] for lv in rep["levels"])


def test_experiment_validation_aborts():
    with pytest.raises(ValueError, match="evanescence"):
        run_experiment(small_config(a=geometric(Fraction(1, 2))))
    with pytest.raises(ValueError, match="admissibility"):
        run_experiment(small_config(gauge=GaugeSpec("a_n")))
    with pytest.raises(ValueError):
        run_experiment(small_config(samples=-1))


def test_beta_decomposition():
    assert beta_projection_decomposition_check()
    half, eighth = Fraction(3, 8), Fraction(1, 8)
    assert not beta_projection_decomposition_check({"1": eighth, "001": half, "011": half})
    assert not beta_projection_decomposition_check(
        {"0": half, "1": half, "001": eighth, "011": eighth})


def test_default_experiment_regression():
    cfg = ExperimentConfig(a=A, gauge=GaugeSpec(), samples=1000, seed=42, depth=4)
    rep = run_experiment(cfg)
    assert rep["certified"] == 1000 and rep["certification_rate"] == 1.0
    assert [lv["failures"] for lv in rep["levels"]] == [42, 0, 0, 0]
    assert rep["period_histogram"] == {"1": 993, "2": 7}
