"""Segmental training loop: uniform bootstrap, align, re-estimate, repeat.

One training iteration scores the current model with a Viterbi pass, then
re-estimates every parameter from hard counts along the single best path.
The loop stops once two consecutive scores agree within epsilon; at least
two iterations always run.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DeadTrellisError, EmptyStateWarning, TooFewFramesError
from .model import GaussianState, HmmModel, check_observations
from .viterbi import AlignmentResult, TraceSink, align


@dataclass(frozen=True)
class TrainingConfig:
    epsilon: float = 1e-4
    max_iterations: int = 20
    variance_floor: float = 1e-4

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations!r}")
        if not self.variance_floor > 0:
            raise ValueError(f"variance_floor must be positive, got {self.variance_floor!r}")


@dataclass(frozen=True)
class TrainingReport:
    """Per-iteration alignment scores and the convergence outcome.

    ``deltas[k]`` is ``abs(scores[k+1] - scores[k])``, so it has one entry
    fewer than ``scores``.
    """

    scores: tuple[float, ...]
    deltas: tuple[float, ...]
    converged: bool
    iterations_run: int


def uniform_segment(num_frames: int, emitting_count: int) -> np.ndarray:
    """Contiguous equal split of frames among emitting states, before any
    alignment exists.

    Emitting state k (1-based, mapped to model state k+1) receives frames
    floor((k-1)*T/E)+1 .. floor(k*T/E).  Returns the per-frame model state
    index, shape (num_frames,).
    """
    if emitting_count < 1:
        raise ValueError(f"emitting_count must be >= 1, got {emitting_count}")
    if num_frames < emitting_count:
        raise TooFewFramesError(f"{num_frames} frames cannot seed {emitting_count} emitting states")
    assign = np.empty(num_frames, dtype=np.int64)
    for k in range(1, emitting_count + 1):
        start = (k - 1) * num_frames // emitting_count
        stop = k * num_frames // emitting_count
        assign[start:stop] = k + 1
    return assign


def estimate_gaussians(obs, seg, emitting_count: int, floor: float) -> list[Optional[GaussianState]]:
    """Per-state mean and biased (divide-by-count) variance over assigned frames.

    Variances are floored at ``floor``.  A state with no assigned frames
    yields ``None``; the caller decides what to substitute.
    """
    obs = check_observations(obs)
    seg = np.asarray(seg)
    if seg.shape != (obs.shape[0],):
        raise ValueError(f"segmentation length {seg.shape} does not match {obs.shape[0]} frames")
    estimates: list[Optional[GaussianState]] = []
    for j in range(2, emitting_count + 2):
        frames = obs[seg == j]
        if frames.shape[0] == 0:
            estimates.append(None)
            continue
        mean = frames.mean(axis=0)
        variance = np.maximum(((frames - mean) ** 2).mean(axis=0), floor)
        estimates.append(GaussianState(mean=mean, variance=variance))
    return estimates


def estimate_transitions(path, num_states: int) -> tuple[np.ndarray, list[int]]:
    """Hard-count transition re-estimation from one complete path.

    a_ij = count(i -> j) / count(i -> anything).  Rows with no outgoing
    counts are left all-zero and returned in the flagged list for the caller
    to substitute; the exit row stays all-zero by construction.
    """
    path = list(path)
    counts = np.zeros((num_states, num_states))
    for i, j in zip(path, path[1:]):
        counts[i - 1, j - 1] += 1.0
    trans = np.zeros((num_states, num_states))
    flagged: list[int] = []
    for i in range(num_states - 1):
        total = counts[i].sum()
        if total > 0:
            trans[i] = counts[i] / total
        else:
            flagged.append(i + 1)
    return trans, flagged


def initialize(obs, proto: HmmModel, config: TrainingConfig = TrainingConfig()) -> HmmModel:
    """Bootstrap the proto's Gaussians from the uniform segmentation.

    The proto's transition matrix is kept as-is; only the emission
    parameters are replaced.
    """
    obs = check_observations(obs)
    seg = uniform_segment(obs.shape[0], proto.num_emitting)
    estimates = estimate_gaussians(obs, seg, proto.num_emitting, config.variance_floor)
    # uniform segmentation assigns every state at least one frame
    states = tuple(st for st in estimates if st is not None)
    assert len(states) == proto.num_emitting
    return HmmModel(trans=proto.trans, states=states, variance_floor=config.variance_floor)


def _reestimate(model: HmmModel, obs, result: AlignmentResult, floor: float) -> HmmModel:
    seg = np.asarray(result.path[1:-1])
    new_trans, flagged = estimate_transitions(result.path, model.num_states)
    trans = np.array(new_trans)
    for row in flagged:
        warnings.warn(f"state {row} had no outgoing transitions; keeping its previous row", EmptyStateWarning)
        trans[row - 1] = model.trans[row - 1]
    estimates = estimate_gaussians(obs, seg, model.num_emitting, floor)
    states = []
    for j, estimate in zip(model.emitting_range, estimates):
        if estimate is None:
            warnings.warn(f"state {j} received no frames; keeping its previous parameters", EmptyStateWarning)
            estimate = model.state(j)
        states.append(estimate)
    return HmmModel(trans=trans, states=tuple(states), variance_floor=floor)


def train(
    obs,
    proto: HmmModel,
    config: TrainingConfig = TrainingConfig(),
    *,
    trace: Optional[TraceSink] = None,
) -> tuple[HmmModel, TrainingReport]:
    """Run the full bootstrap + iterate loop.

    Every iteration aligns the current model (score P*_k), then re-estimates
    transitions and Gaussians from the alignment.  Training stops when
    k >= 2 and ``abs(P*_k - P*_{k-1}) <= config.epsilon``, or when
    ``config.max_iterations`` is exhausted (``converged`` is False then).

    Returns the last re-estimated model together with the report.  A dead
    trellis aborts with the failing iteration index attached.
    """
    obs = check_observations(obs)
    model = initialize(obs, proto, config)
    scores: list[float] = []
    converged = False
    for k in range(1, config.max_iterations + 1):
        if trace is not None:
            trace(f"ITERATION {k}")
        try:
            result = align(model, obs, trace=trace)
        except DeadTrellisError as err:
            raise DeadTrellisError(str(err), iteration=k) from err
        scores.append(result.log_score)
        if trace is not None:
            trace(f"SCORE {k} {result.log_score!r}")
        model = _reestimate(model, obs, result, config.variance_floor)
        if k >= 2 and abs(scores[-1] - scores[-2]) <= config.epsilon:
            converged = True
            break
    deltas = tuple(abs(b - a) for a, b in zip(scores, scores[1:]))
    report = TrainingReport(
        scores=tuple(scores),
        deltas=deltas,
        converged=converged,
        iterations_run=len(scores),
    )
    return model, report
