"""Scikit-learn style facade over the trainer and the decoder."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import ModelValidationError
from .model import GaussianState, HmmModel, validate
from .training import TrainingConfig, train
from .viterbi import align


def _left_to_right(n_states: int) -> np.ndarray:
    """Default proto topology: self-loop 0.5, advance 0.5, entry into state 2."""
    trans = np.zeros((n_states, n_states))
    trans[0, 1] = 1.0
    for j in range(1, n_states - 1):
        trans[j, j] = 0.5
        trans[j, j + 1] = 0.5
    return trans


class ViterbiGaussianHMM(BaseEstimator):
    """Gaussian HMM trained by iterated Viterbi alignment.

    The model has ``n_states`` states in total: state 1 is a non-emitting
    entry state, state ``n_states`` is a non-emitting exit state, and the
    states in between emit under diagonal Gaussians.

    Parameters
    ----------
    n_states : int, default=4
        Total number of states including entry and exit, so at least 3.
    transitions : array-like of shape (n_states, n_states), optional
        Initial transition matrix (linear probabilities).  When omitted, a
        left-to-right topology with 0.5 self-loops is used.
    epsilon : float, default=1e-4
        Convergence threshold on the absolute score difference.
    max_iterations : int, default=20
    variance_floor : float, default=1e-4

    Attributes
    ----------
    model_ : HmmModel
        The trained model.
    report_ : TrainingReport
        Per-iteration scores and the convergence outcome.
    n_iter_ : int
    converged_ : bool
    n_features_in_ : int

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> X = np.concatenate([rng.normal(0, 1, (8, 2)), rng.normal(4, 1, (8, 2))])
    >>> hmm = ViterbiGaussianHMM(n_states=4).fit(X)
    >>> hmm.predict(X).shape
    (16,)
    """

    def __init__(
        self,
        n_states: int = 4,
        transitions=None,
        epsilon: float = 1e-4,
        max_iterations: int = 20,
        variance_floor: float = 1e-4,
    ):
        self.n_states = n_states
        self.transitions = transitions
        self.epsilon = epsilon
        self.max_iterations = max_iterations
        self.variance_floor = variance_floor

    def _proto(self, dim: int) -> HmmModel:
        if self.n_states < 3:
            raise ValueError(f"n_states must be >= 3 (entry, emitting, exit), got {self.n_states}")
        if self.transitions is None:
            trans = _left_to_right(self.n_states)
        else:
            trans = np.asarray(self.transitions, dtype=np.float64)
            if trans.shape != (self.n_states, self.n_states):
                raise ValueError(f"transitions shape {trans.shape} does not match n_states={self.n_states}")
        states = tuple(
            GaussianState(mean=np.zeros(dim), variance=np.ones(dim)) for _ in range(self.n_states - 2)
        )
        proto = HmmModel(trans=trans, states=states, variance_floor=self.variance_floor)
        violations = validate(proto)
        if violations:
            raise ModelValidationError(violations)
        return proto

    def fit(self, X, y=None):
        """Train on one observation sequence of shape (T, dim)."""
        X = check_array(X, dtype=np.float64)
        config = TrainingConfig(
            epsilon=self.epsilon,
            max_iterations=self.max_iterations,
            variance_floor=self.variance_floor,
        )
        self.model_, self.report_ = train(X, self._proto(X.shape[1]), config)
        self.n_features_in_ = X.shape[1]
        self.n_iter_ = self.report_.iterations_run
        self.converged_ = self.report_.converged
        return self

    def decode(self, X):
        """Best path for ``X``: returns (log_score, per-frame state indices)."""
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        result = align(self.model_, X)
        return result.log_score, np.asarray(result.path[1:-1], dtype=np.int64)

    def predict(self, X):
        """Per-frame emitting state indices (2..n_states-1) of the best path."""
        return self.decode(X)[1]

    def score(self, X, y=None) -> float:
        """Log score of the best path for ``X`` under the trained model."""
        return self.decode(X)[0]
