"""Log-domain Viterbi decoding over the entry/exit topology.

The trellis covers emitting states only.  Column 1 is seeded from the entry
row of the transition matrix, recursion fills columns 2..T, termination adds
the transition into the exit state, and backtracking walks the backpointers
into the single best state sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CorruptTrellisError, DeadTrellisError, DimensionMismatchError, ModelValidationError
from .model import LOG_ZERO, HmmModel, check_observations, is_impossible, validate

TraceSink = Callable[[str], None]

# backpointer value meaning "no predecessor"
NO_STATE = 0


@dataclass
class Trellis:
    """Score matrix delta and backpointer matrix psi, both T x (N-2).

    Accessors are 1-based in both time and state index to match the usual
    notation: ``score(t, j)`` is delta_t(j) for emitting state j in 2..N-1.
    """

    delta: np.ndarray
    psi: np.ndarray

    @property
    def num_frames(self) -> int:
        return self.delta.shape[0]

    def score(self, t: int, j: int) -> float:
        return float(self.delta[t - 1, j - 2])

    def backpointer(self, t: int, j: int) -> int:
        """Predecessor state of cell (t, j), or NO_STATE when unreachable."""
        return int(self.psi[t - 1, j - 2])


@dataclass(frozen=True)
class AlignmentResult:
    """Best complete path (length T+2, entry and exit included) and its log score."""

    path: tuple[int, ...]
    log_score: float


def init_trellis(model: HmmModel, obs) -> Trellis:
    """Allocate the trellis and fill column t=1 from the entry transitions."""
    obs = check_observations(obs)
    if obs.shape[1] != model.dim:
        raise DimensionMismatchError(f"observations have dim {obs.shape[1]}, model has dim {model.dim}")
    t_len = obs.shape[0]
    delta = np.full((t_len, model.num_emitting), LOG_ZERO)
    psi = np.full((t_len, model.num_emitting), NO_STATE, dtype=np.int64)
    for j in model.emitting_range:
        entry = model.log_transition(1, j)
        if is_impossible(entry):
            continue
        delta[0, j - 2] = entry + model.log_emission(j, obs[0])
        psi[0, j - 2] = 1
    return Trellis(delta=delta, psi=psi)


def recurse_step(model: HmmModel, obs, trellis: Trellis, t: int) -> None:
    """Fill trellis column ``t`` (2 <= t <= T) from column t-1.

    delta_t(j) = max_i [delta_{t-1}(i) + log a_ij] + log b_j(o_t), argmax ties
    going to the smallest state index.  A column with no surviving cell means
    no path exists at all.
    """
    if not 2 <= t <= trellis.num_frames:
        raise IndexError(f"recursion time {t} outside 2..{trellis.num_frames}")
    obs = np.asarray(obs, dtype=np.float64)
    prev = trellis.delta[t - 2]
    alive = False
    for j in model.emitting_range:
        best = LOG_ZERO
        best_source = NO_STATE
        for i in model.emitting_range:
            source = prev[i - 2]
            step = model.log_transition(i, j)
            if is_impossible(source) or is_impossible(step):
                continue
            candidate = source + step
            if candidate > best:
                best = candidate
                best_source = i
        if best_source == NO_STATE:
            # dead path stays dead; LOG_ZERO already in place
            continue
        trellis.delta[t - 1, j - 2] = best + model.log_emission(j, obs[t - 1])
        trellis.psi[t - 1, j - 2] = best_source
        alive = True
    if not alive:
        raise DeadTrellisError(f"no surviving path at frame {t}")


def terminate(model: HmmModel, trellis: Trellis) -> tuple[float, int]:
    """Best final score through the exit state and the state it leaves from.

    P* = max_i [delta_T(i) + log a_iN], ties to the smallest state index.
    """
    t_len = trellis.num_frames
    last = trellis.delta[t_len - 1]
    best = LOG_ZERO
    end_state = NO_STATE
    for i in model.emitting_range:
        source = last[i - 2]
        step = model.log_transition(i, model.num_states)
        if is_impossible(source) or is_impossible(step):
            continue
        candidate = source + step
        if candidate > best:
            best = candidate
            end_state = i
    if end_state == NO_STATE:
        raise DeadTrellisError("no path reaches the exit state")
    # builtin float so repr-based writers never leak numpy scalar syntax
    return float(best), end_state


def backtrack(trellis: Trellis, end_state: int) -> list[int]:
    """Walk the backpointers from ``end_state`` into the emitting path q*_1..q*_T."""
    path = [end_state]
    for t in range(trellis.num_frames, 1, -1):
        previous = trellis.backpointer(t, path[-1])
        if previous == NO_STATE or previous == 1:
            raise CorruptTrellisError(f"missing backpointer at frame {t}, state {path[-1]}")
        path.append(previous)
    path.reverse()
    return path


def _trace_column(trace: Optional[TraceSink], trellis: Trellis, model: HmmModel, t: int) -> None:
    if trace is None:
        return
    for j in model.emitting_range:
        trace(f"DELTA {t} {j} {trellis.score(t, j)!r}")
    for j in model.emitting_range:
        trace(f"PSI {t} {j} {trellis.backpointer(t, j)}")


def align(model: HmmModel, obs, *, trace: Optional[TraceSink] = None) -> AlignmentResult:
    """Full Viterbi pass: init, recurse, terminate, backtrack.

    Parameters
    ----------
    model : HmmModel
        Must pass validation.
    obs : array-like of shape (T, dim)
    trace : callable, optional
        Receives one line per trellis cell (``DELTA t j value`` and
        ``PSI t j value``) as columns are filled.

    Returns
    -------
    AlignmentResult
        ``path`` has length T+2 and starts at 1, ends at N.
    """
    violations = validate(model)
    if violations:
        raise ModelValidationError(violations)
    obs = check_observations(obs)
    if obs.shape[1] != model.dim:
        raise DimensionMismatchError(f"observations have dim {obs.shape[1]}, model has dim {model.dim}")

    trellis = init_trellis(model, obs)
    _trace_column(trace, trellis, model, 1)
    for t in range(2, obs.shape[0] + 1):
        recurse_step(model, obs, trellis, t)
        _trace_column(trace, trellis, model, t)
    log_score, end_state = terminate(model, trellis)
    emitting = backtrack(trellis, end_state)
    return AlignmentResult(path=(1, *emitting, model.num_states), log_score=log_score)
