"""HMM data model and log-probability primitives.

The topology is the HTK one: state 1 is a non-emitting entry state, state N
is a non-emitting absorbing exit state, and states 2..N-1 emit observation
vectors under diagonal-covariance Gaussians.  There is no separate initial
distribution; row 1 of the transition matrix plays that role because the
chain always starts in state 1 with probability one.

All scoring happens in the natural-log domain.  Impossible events are
represented by a finite sentinel rather than ``-inf`` so that ordinary
arithmetic never produces NaNs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError, InvalidVarianceError

LOG_ZERO = -1.0e10
# anything at or below this is treated as impossible
LOG_SMALL = -0.5e10

LOG_TWO_PI = math.log(2.0 * math.pi)

DEFAULT_VARIANCE_FLOOR = 1e-4


def is_impossible(value: float) -> bool:
    """True when a log score is on the dead side of the sentinel threshold."""
    return value <= LOG_SMALL


def gconst(variance) -> float:
    """Data-independent constant of a diagonal-Gaussian log density.

    Returns ``D*log(2*pi) + sum(log(variance))`` in natural-log units.

    Raises
    ------
    InvalidVarianceError
        If any variance entry is zero or negative.
    """
    var = np.asarray(variance, dtype=np.float64)
    if var.ndim != 1 or var.size == 0:
        raise InvalidVarianceError(f"variance must be a non-empty vector, got shape {var.shape}")
    if np.any(var <= 0.0):
        bad = int(np.argmax(var <= 0.0))
        raise InvalidVarianceError(f"variance dimension {bad + 1} is {var[bad]!r}, must be positive")
    return var.size * LOG_TWO_PI + float(np.sum(np.log(var)))


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Diagonal-covariance Gaussian emission density of one emitting state.

    Parameters
    ----------
    mean : array-like of shape (dim,)
    variance : array-like of shape (dim,)
        Diagonal of the covariance matrix.  Entries must be positive before
        the density can be evaluated; construction itself does not reject
        bad values so that validation can report them.
    """

    mean: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen_array(self.mean))
        object.__setattr__(self, "variance", _frozen_array(self.variance))
        if self.mean.ndim != 1 or self.mean.shape != self.variance.shape:
            raise DimensionMismatchError(
                f"mean shape {self.mean.shape} and variance shape {self.variance.shape} must be equal vectors"
            )

    @property
    def dim(self) -> int:
        return self.mean.size

    @cached_property
    def gconst(self) -> float:
        """Cached ``D*log(2*pi) + sum(log(variance))``."""
        return gconst(self.variance)

    def log_density(self, x) -> float:
        """Log density at ``x``: ``-0.5 * (gconst + sum((x-mean)^2/variance))``."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != self.mean.shape:
            raise DimensionMismatchError(f"observation has shape {x.shape}, state has dim {self.dim}")
        quad = float(np.sum((x - self.mean) ** 2 / self.variance))
        return -0.5 * (self.gconst + quad)


@dataclass(frozen=True, eq=False)
class HmmModel:
    """HMM with entry/exit states and diagonal-Gaussian emitting states.

    Parameters
    ----------
    trans : array-like of shape (num_states, num_states)
        Linear-domain transition probabilities.  Row 1 doubles as the
        initial distribution; row ``num_states`` must be all zero.
    states : sequence of GaussianState
        One per emitting state, indexed 2..num_states-1.
    variance_floor : float
        Lower bound the variances are expected to respect; checked by
        :func:`validate`, enforced by the estimation code.
    """

    trans: np.ndarray
    states: tuple[GaussianState, ...]
    variance_floor: float = DEFAULT_VARIANCE_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "trans", _frozen_array(self.trans))
        object.__setattr__(self, "states", tuple(self.states))
        if self.trans.ndim != 2 or self.trans.shape[0] != self.trans.shape[1]:
            raise DimensionMismatchError(f"transition matrix must be square, got shape {self.trans.shape}")
        if self.trans.shape[0] < 3:
            raise DimensionMismatchError("need at least 3 states: entry, one emitting, exit")

    @property
    def num_states(self) -> int:
        return self.trans.shape[0]

    @property
    def num_emitting(self) -> int:
        return self.num_states - 2

    @property
    def dim(self) -> int:
        return self.states[0].dim if self.states else 0

    @property
    def emitting_range(self) -> range:
        """State indices 2..N-1."""
        return range(2, self.num_states)

    @cached_property
    def log_trans(self) -> np.ndarray:
        """Log-domain transition matrix with LOG_ZERO in place of zeros."""
        with np.errstate(divide="ignore"):
            logged = np.where(self.trans > 0.0, np.log(np.where(self.trans > 0.0, self.trans, 1.0)), LOG_ZERO)
        logged.setflags(write=False)
        return logged

    def state(self, j: int) -> GaussianState:
        """Emitting state ``j`` (1-based model numbering, so 2..N-1)."""
        if not 2 <= j <= self.num_states - 1:
            raise IndexError(f"state {j} is not emitting (valid range 2..{self.num_states - 1})")
        return self.states[j - 2]

    def log_transition(self, i: int, j: int) -> float:
        """log a_ij, or LOG_ZERO when a_ij = 0.  Total on 1 <= i, j <= N."""
        if not (1 <= i <= self.num_states and 1 <= j <= self.num_states):
            raise IndexError(f"transition ({i}, {j}) outside 1..{self.num_states}")
        return float(self.log_trans[i - 1, j - 1])

    def log_emission(self, j: int, x) -> float:
        """Emission log density of state ``j`` at observation ``x``."""
        return self.state(j).log_density(x)


def validate(model: HmmModel) -> list[str]:
    """Check every model invariant; return the list of violations (empty = ok).

    Never raises: validation failure is the return value, so invalid models
    can be inspected and reported.
    """
    violations: list[str] = []
    n = model.num_states
    a = model.trans

    if not np.all(np.isfinite(a)):
        violations.append("transition matrix contains non-finite entries")
        return violations

    if np.any(a < 0.0) or np.any(a > 1.0):
        rows, cols = np.where((a < 0.0) | (a > 1.0))
        for r, c in zip(rows, cols):
            violations.append(f"transition a[{r + 1}][{c + 1}] = {a[r, c]!r} outside [0, 1]")

    for i in range(n - 1):
        total = float(a[i].sum())
        if abs(total - 1.0) > 1e-9:
            violations.append(f"transition row {i + 1} sums to {total!r}, expected 1")
    if np.any(a[n - 1] != 0.0):
        violations.append(f"exit row {n} must be all zero")
    if np.any(a[:, 0] != 0.0):
        violations.append("column 1 must be all zero: nothing re-enters the entry state")
    if a[0, n - 1] != 0.0:
        violations.append(f"a[1][{n}] must be zero: at least one observation is emitted")

    if len(model.states) != n - 2:
        violations.append(f"expected {n - 2} emitting states, got {len(model.states)}")
        return violations

    dim = model.dim
    for j, st in zip(model.emitting_range, model.states):
        if st.dim != dim:
            violations.append(f"state {j} has dim {st.dim}, expected {dim}")
            continue
        for i, v in enumerate(st.variance):
            if not v >= model.variance_floor:
                violations.append(
                    f"state {j} variance dimension {i + 1} is {float(v)!r}, below floor {model.variance_floor!r}"
                )
        if not np.all(np.isfinite(st.mean)):
            violations.append(f"state {j} mean contains non-finite entries")
    return violations


def check_observations(data) -> np.ndarray:
    """Coerce to a T x D float matrix and enforce the sequence invariants."""
    obs = np.asarray(data, dtype=np.float64)
    if obs.ndim != 2:
        raise ValueError(f"observations must be a 2-d array (T, D), got ndim {obs.ndim}")
    if obs.shape[0] < 1 or obs.shape[1] < 1:
        raise ValueError(f"observations must be non-empty, got shape {obs.shape}")
    if not np.all(np.isfinite(obs)):
        t, d = map(int, np.argwhere(~np.isfinite(obs))[0])
        raise ValueError(f"non-finite observation at frame {t + 1}, dimension {d + 1}")
    return obs
