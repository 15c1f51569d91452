"""Brute-force reference implementations used by the test suite.

Nothing here goes through the trellis: paths are enumerated exhaustively and
scored by direct summation, statistics are computed with the two-pass
textbook formulas, and the emission density is restated as a sum of scalar
normal log densities.  These are the anti-drift ground truth for the
dynamic program and the estimators.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DeadTrellisError, DimensionMismatchError, PathSpaceTooLargeError
from .model import HmmModel, check_observations, is_impossible
from .viterbi import AlignmentResult

ENUMERATION_GUARD = 10**6


def brute_force_align(model: HmmModel, obs, guard: int = ENUMERATION_GUARD) -> AlignmentResult:
    """Exhaustive best-path search over all emitting-state sequences.

    Scores every complete path entry -> q_1..q_T -> exit by summing log
    transitions and log emissions in path order.  Ties prefer the lower
    state index at the latest position where candidates differ, which is
    the path the backtracking recursion reconstructs under its own
    lowest-index argmax rule.
    """
    obs = check_observations(obs)
    if obs.shape[1] != model.dim:
        raise DimensionMismatchError(f"observations have dim {obs.shape[1]}, model has dim {model.dim}")
    emitting = list(model.emitting_range)
    t_len = obs.shape[0]
    candidates = len(emitting) ** t_len
    if candidates > guard:
        raise PathSpaceTooLargeError(f"{candidates} candidate paths exceed the guard of {guard}")

    log_b = {(t, j): model.log_emission(j, obs[t]) for t in range(t_len) for j in emitting}
    best_seq = None
    best_score = 0.0
    best_key = None
    for seq in itertools.product(emitting, repeat=t_len):
        step = model.log_transition(1, seq[0])
        if is_impossible(step):
            continue
        total = step + log_b[(0, seq[0])]
        dead = False
        for t in range(1, t_len):
            step = model.log_transition(seq[t - 1], seq[t])
            if is_impossible(step):
                dead = True
                break
            total = total + step
            total = total + log_b[(t, seq[t])]
        if dead:
            continue
        step = model.log_transition(seq[-1], model.num_states)
        if is_impossible(step):
            continue
        total = total + step
        key = tuple(reversed(seq))
        if best_seq is None or total > best_score or (total == best_score and key < best_key):
            best_seq, best_score, best_key = seq, total, key
    if best_seq is None:
        raise DeadTrellisError("no complete path exists")
    return AlignmentResult(path=(1, *best_seq, model.num_states), log_score=float(best_score))


def naive_gaussian_stats(obs, seg):
    """Two-pass per-state mean and biased variance, no flooring.

    Returns ``(means, variances)`` as dicts keyed by the emitting state
    index; only states that actually occur in ``seg`` appear.
    """
    obs = check_observations(obs)
    seg = list(seg)
    means: dict[int, np.ndarray] = {}
    variances: dict[int, np.ndarray] = {}
    dim = obs.shape[1]
    for j in sorted(set(seg)):
        frames = [obs[t] for t in range(len(seg)) if seg[t] == j]
        count = len(frames)
        mean = np.zeros(dim)
        for frame in frames:
            for i in range(dim):
                mean[i] += frame[i]
        mean /= count
        var = np.zeros(dim)
        for frame in frames:
            for i in range(dim):
                var[i] += (frame[i] - mean[i]) ** 2
        var /= count
        means[j] = mean
        variances[j] = var
    return means, variances


def per_dim_log_density(x, mean, variance) -> float:
    """Diagonal-Gaussian log density as a sum of scalar normal log densities."""
    x = np.asarray(x, dtype=np.float64)
    mean = np.asarray(mean, dtype=np.float64)
    variance = np.asarray(variance, dtype=np.float64)
    total = 0.0
    for i in range(x.size):
        total += -0.5 * math.log(2.0 * math.pi * variance[i])
        total += -((x[i] - mean[i]) ** 2) / (2.0 * variance[i])
    return total
