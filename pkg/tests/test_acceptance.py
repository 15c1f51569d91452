"""Acceptance gate: one test per shipped criterion, one verdict line each.

Run ``pytest tests/test_acceptance.py -rA`` (or ``-s``) to see the
``ACCEPTANCE <n> PASS|FAIL`` line for every criterion, including the ones
that pass.

The numeric targets below are the externally supplied reference figures
(4-5 significant digits).  Where a target is arithmetically inconsistent
with the fixture data, the check is still asserted at its stated tolerance
and fails honestly; the recomputed value appears in the failure text.
Soft targets (iterations 2-5 of the training trajectory) emit NOTE lines
instead of failing, provided the property suite holds.
"""

import io
import time
import warnings

import numpy as np
import pytest

from helpers import random_model, random_obs
from viterbihmm import (
    DeadTrellisError,
    EmptyStateWarning,
    GaussianState,
    HmmModel,
    TrainingConfig,
    align,
    estimate_gaussians,
    estimate_transitions,
    initialize,
    read_model,
    read_observations,
    train,
    write_model,
    write_observations,
)
from viterbihmm.cli import main
from viterbihmm.reference import brute_force_align, per_dim_log_density
from viterbihmm.viterbi import init_trellis, recurse_step

# -- reference figures ------------------------------------------------------

BOOT_TARGETS = {
    2: ((0.0650, -0.1583, -0.5923), (0.8717, 0.4701, 0.0295)),
    3: ((-0.1823, 0.0432, -0.3820), (0.1322, 1.0758, 0.1880)),
}

DELTA_TARGETS = {
    (1, 2): (-4.1817, 5e-4),
    (2, 2): (-7.1013, 5e-4),
    (2, 3): (-8.3930, 5e-4),
    (3, 2): (-10.59, 5e-3),
    (3, 3): (-10.81, 5e-3),
}
PSI_TARGETS = {(1, 2): 1, (2, 2): 2, (2, 3): 2, (3, 2): 3, (3, 3): 2}

FIRST_SCORE_TARGET = -44.0826
EXPECTED_PATH = (1, 2, 2, 3, 2, 2, 2, 3, 2, 3, 2, 3, 3, 4)

ROW_2_TARGET = (0.0, 3.0 / 7.0, 4.0 / 7.0, 0.0)
ROW_3_TARGET = (0.0, 3.0 / 5.0, 1.0 / 5.0, 1.0 / 5.0)
REEST_TARGETS = {
    2: ((0.0204, 0.0419, -0.5676), (0.7633, 0.6644, 0.0260)),
    3: ((-0.1694, -0.1969, -0.3745), (None, 0.9162, 0.2292)),
}
# the published figure for state 3 variance dimension 1 is negative, which a
# squared-deviation average cannot produce; the recomputed value is checked
STATE3_VAR1_RECOMPUTED = 0.15159531373859117

SCORE_TARGETS = (-44.08260, -35.15588, -29.51328, -18.87455, -18.87455)
HARD_TOL = 1e-3
SOFT_TOL = 1e-2

PATH_LINE = "PATH 1 2 2 3 2 2 2 3 2 3 2 3 3 4"

# ----------------------------------------------------------------------------


def _verdict(number: int, label: str, checks, notes=()):
    """Print the per-criterion verdict line, then assert the hard checks."""
    failures = [text for text, ok in checks if not ok]
    print(f"ACCEPTANCE {number} {'PASS' if not failures else 'FAIL'} - {label}")
    for note in notes:
        print(f"  NOTE: {note}")
    if failures:
        raise AssertionError("; ".join(failures))


def _best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def test_criterion_1_bootstrap(obs, proto):
    model = initialize(obs, proto)
    checks = []
    for j, (mean_target, var_target) in BOOT_TARGETS.items():
        state = model.state(j)
        for i in range(3):
            checks.append((
                f"state {j} mean[{i}]: target {mean_target[i]} +-5e-4, got {state.mean[i]!r}",
                abs(state.mean[i] - mean_target[i]) <= 5e-4,
            ))
            checks.append((
                f"state {j} var[{i}]: target {var_target[i]} +-5e-4, got {state.variance[i]!r}",
                abs(state.variance[i] - var_target[i]) <= 5e-4,
            ))
    elapsed = _best_of(3, lambda: initialize(obs, proto))
    checks.append((f"runtime {elapsed * 1e3:.2f} ms, budget 10 ms", elapsed < 0.010))
    _verdict(1, "uniform-segmentation bootstrap", checks)


def test_criterion_2_trellis_spot_values(obs, proto):
    model = initialize(obs, proto)
    trellis = init_trellis(model, obs)
    recurse_step(model, obs, trellis, 2)
    recurse_step(model, obs, trellis, 3)
    checks = []
    for (t, j), (target, tol) in DELTA_TARGETS.items():
        got = trellis.score(t, j)
        checks.append((
            f"delta_{t}({j}): target {target} +-{tol}, got {got!r}",
            abs(got - target) <= tol,
        ))
    for (t, j), target in PSI_TARGETS.items():
        got = trellis.backpointer(t, j)
        checks.append((f"psi_{t}({j}): expected {target}, got {got}", got == target))
    _verdict(2, "trellis spot values", checks)


def test_criterion_3_first_alignment(obs, proto):
    result = align(initialize(obs, proto), obs)
    checks = [
        (
            f"first score: target {FIRST_SCORE_TARGET} +-{HARD_TOL}, got {result.log_score!r}",
            abs(result.log_score - FIRST_SCORE_TARGET) <= HARD_TOL,
        ),
        (f"path: expected {EXPECTED_PATH}, got {result.path}", result.path == EXPECTED_PATH),
    ]
    _verdict(3, "first alignment", checks)


def test_criterion_4_first_reestimation(obs, proto):
    model = initialize(obs, proto)
    result = align(model, obs)
    trans, flagged = estimate_transitions(result.path, model.num_states)
    checks = [("no flagged rows", flagged == [])]
    for row, target in ((2, ROW_2_TARGET), (3, ROW_3_TARGET)):
        worst = float(np.max(np.abs(trans[row - 1] - np.asarray(target))))
        checks.append((f"transition row {row} off by {worst!r}, tolerance 1e-12", worst <= 1e-12))

    estimates = estimate_gaussians(obs, np.asarray(result.path[1:-1]), 2, floor=1e-4)
    for j, (mean_target, var_target) in REEST_TARGETS.items():
        est = estimates[j - 2]
        for i in range(3):
            checks.append((
                f"state {j} mean[{i}]: target {mean_target[i]} +-5e-4, got {est.mean[i]!r}",
                abs(est.mean[i] - mean_target[i]) <= 5e-4,
            ))
            if var_target[i] is None:
                continue
            checks.append((
                f"state {j} var[{i}]: target {var_target[i]} +-5e-4, got {est.variance[i]!r}",
                abs(est.variance[i] - var_target[i]) <= 5e-4,
            ))
    got = estimates[1].variance[0]
    checks.append((
        f"state 3 var[0]: recomputed {STATE3_VAR1_RECOMPUTED}, got {got!r}",
        abs(got - STATE3_VAR1_RECOMPUTED) <= 1e-12,
    ))
    _verdict(4, "first re-estimation", checks)


def test_criterion_5_training_trajectory(obs, proto):
    model, report = train(obs, proto, TrainingConfig(epsilon=1e-4))
    checks = [
        ("converged", report.converged),
        (f"converges at iteration 5, got {report.iterations_run}", report.iterations_run == 5),
        (
            f"score 1: target {SCORE_TARGETS[0]} +-{HARD_TOL}, got {report.scores[0]!r}",
            abs(report.scores[0] - SCORE_TARGETS[0]) <= HARD_TOL,
        ),
    ]
    notes = []
    for k in range(1, 5):
        deviation = abs(report.scores[k] - SCORE_TARGETS[k])
        if deviation > SOFT_TOL:
            notes.append(
                f"score {k + 1} soft target {SCORE_TARGETS[k]} missed by {deviation:.5f}"
                f" (got {report.scores[k]!r}); covered by the property suite"
            )
    elapsed = _best_of(3, lambda: train(obs, proto, TrainingConfig(epsilon=1e-4)))
    checks.append((f"runtime {elapsed * 1e3:.2f} ms, budget 100 ms", elapsed < 0.100))
    _verdict(5, "training trajectory", checks, notes)


def test_criterion_6_property_suite(obs, proto):
    checks = []

    # (a) oracle equivalence on 200 scored instances
    rng = np.random.default_rng(2026)
    scored = 0
    worst_gap = 0.0
    path_mismatches = 0
    trials = 0
    while scored < 200:
        trials += 1
        model = random_model(rng, structural_zeros=trials % 3 == 0)
        if trials % 4 == 0:
            # identical states force score ties, exercising the tie-break
            model = HmmModel(trans=model.trans, states=(model.state(2),) * model.num_emitting)
        data = random_obs(rng, int(rng.integers(1, 9)), model.dim)
        try:
            mine = align(model, data)
        except DeadTrellisError:
            with pytest.raises(DeadTrellisError):
                brute_force_align(model, data)
            continue
        reference = brute_force_align(model, data)
        worst_gap = max(worst_gap, abs(mine.log_score - reference.log_score))
        path_mismatches += mine.path != reference.path
        scored += 1
    checks.append((f"(a) worst score gap {worst_gap!r} over 200, tolerance 1e-9", worst_gap <= 1e-9))
    checks.append((f"(a) {path_mismatches} path mismatches over 200", path_mismatches == 0))

    # (b) monotone scores over 50 randomized trainings
    rng = np.random.default_rng(2027)
    worst_drop = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyStateWarning)
        for _ in range(50):
            proto_k = random_model(rng, dim=int(rng.integers(1, 4)))
            data = random_obs(rng, int(rng.integers(4, 17)), proto_k.dim)
            _, rep = train(data, proto_k)
            for earlier, later in zip(rep.scores, rep.scores[1:]):
                worst_drop = max(worst_drop, earlier - later)
    checks.append((f"(b) worst score drop {worst_drop!r} over 50 trainings, tolerance 1e-9", worst_drop <= 1e-9))

    # (c) emission identity: gconst form vs per-dimension sum, 1000 draws
    rng = np.random.default_rng(2028)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 6))
        mean = rng.normal(0.0, 3.0, d)
        var = rng.uniform(1e-3, 5.0, d)
        x = rng.normal(0.0, 3.0, d)
        state = GaussianState(mean=mean, variance=var)
        worst = max(worst, abs(state.log_density(x) - per_dim_log_density(x, mean, var)))
    checks.append((f"(c) worst emission gap {worst!r} over 1000, tolerance 1e-10", worst <= 1e-10))

    # (d) file round-trips are value-identical
    rng = np.random.default_rng(2029)
    roundtrip_ok = True
    for _ in range(10):
        model = random_model(rng)
        buffer = io.StringIO()
        write_model(model, buffer)
        buffer.seek(0)
        back = read_model(buffer)
        roundtrip_ok &= np.array_equal(back.trans, model.trans)
        for j in model.emitting_range:
            roundtrip_ok &= np.array_equal(back.state(j).mean, model.state(j).mean)
            roundtrip_ok &= np.array_equal(back.state(j).variance, model.state(j).variance)
        data = random_obs(rng, int(rng.integers(1, 12)), int(rng.integers(1, 5)))
        buffer = io.StringIO()
        write_observations(data, buffer)
        buffer.seek(0)
        roundtrip_ok &= np.array_equal(read_observations(buffer), data)
    checks.append(("(d) model and observation round-trips value-identical", roundtrip_ok))

    # (e) re-estimated transition rows are stochastic
    rng = np.random.default_rng(2030)
    worst_row_gap = 0.0
    for _ in range(30):
        model = random_model(rng)
        data = random_obs(rng, int(rng.integers(2, 12)), model.dim)
        result = align(model, data)
        trans, flagged = estimate_transitions(result.path, model.num_states)
        for row in range(1, model.num_states):
            if row in flagged:
                continue
            worst_row_gap = max(worst_row_gap, abs(trans[row - 1].sum() - 1.0))
    checks.append((f"(e) worst row-sum gap {worst_row_gap!r} over 30, tolerance 1e-12", worst_row_gap <= 1e-12))

    _verdict(6, "property suite", checks)


def test_criterion_7_cli_golden(tmp_path, data_dir, capsys):
    obs_arg = str(data_dir / "mfcc_sample.obs")
    proto_arg = str(data_dir / "proto_2emit.hmm")
    trained = tmp_path / "trained.hmm"
    train_rc = main(["train", "--obs", obs_arg, "--proto", proto_arg, "--out", str(trained)])
    report_lines = (tmp_path / "trained.hmm.report").read_text().splitlines()

    boot = tmp_path / "boot.hmm"
    init_rc = main(["init", "--obs", obs_arg, "--proto", proto_arg, "--out", str(boot)])
    alignment = tmp_path / "sample.ali"
    align_rc = main(["align", "--obs", obs_arg, "--model", str(boot), "--out", str(alignment)])
    capsys.readouterr()  # keep subcommand stdout out of the verdict block

    checks = [
        (f"train exit code {train_rc}", train_rc == 0),
        (f"init exit code {init_rc}", init_rc == 0),
        (f"align exit code {align_rc}", align_rc == 0),
        (f"report has 5 ITER lines, got {len(report_lines) - 1}", len(report_lines) == 6),
        ("report ends CONVERGED yes", report_lines[-1] == "CONVERGED yes"),
    ]
    notes = []
    scores = []
    shape_ok = True
    for k, line in enumerate(report_lines[:-1], start=1):
        parts = line.split()
        shape_ok &= parts[:2] == ["ITER", str(k)] and parts[2] == "LOGPROB" and parts[4] == "DELTA"
        scores.append(float(parts[3]))
    checks.append(("report lines are ITER k LOGPROB v DELTA d", shape_ok))
    if len(scores) == 5:
        checks.append((
            f"ITER 1 LOGPROB: target {SCORE_TARGETS[0]} +-{HARD_TOL}, got {scores[0]!r}",
            abs(scores[0] - SCORE_TARGETS[0]) <= HARD_TOL,
        ))
        for k in range(1, 5):
            deviation = abs(scores[k] - SCORE_TARGETS[k])
            if deviation > SOFT_TOL:
                notes.append(
                    f"ITER {k + 1} soft target {SCORE_TARGETS[k]} missed by {deviation:.5f} (got {scores[k]!r})"
                )

    align_lines = alignment.read_text().splitlines()
    checks.append((f"PATH line byte-exact: got {align_lines[1]!r}", align_lines[1] == PATH_LINE))
    _verdict(7, "CLI golden run", checks, notes)
