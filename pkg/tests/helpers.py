"""Shared builders for randomized test instances."""

import numpy as np

from viterbihmm import GaussianState, HmmModel


def random_obs(rng, num_frames, dim):
    return rng.normal(0.0, 2.0, (num_frames, dim))


def random_model(rng, num_emitting=None, dim=None, structural_zeros=False):
    """A valid model with Dirichlet rows; optionally knock out some entries.

    With ``structural_zeros`` the topology may disconnect, so alignment can
    legitimately fail with a dead trellis; callers decide how to treat that.
    """
    if num_emitting is None:
        num_emitting = int(rng.integers(1, 4))
    if dim is None:
        dim = int(rng.integers(1, 5))
    n = num_emitting + 2

    trans = np.zeros((n, n))
    trans[0, 1 : n - 1] = rng.dirichlet(np.ones(num_emitting))
    for row in range(1, n - 1):
        trans[row, 1:n] = rng.dirichlet(np.ones(num_emitting + 1))

    if structural_zeros:
        for row in range(n - 1):
            allowed = np.flatnonzero(trans[row])
            if len(allowed) < 2:
                continue
            drop = allowed[rng.random(len(allowed)) < 0.35]
            if len(drop) == len(allowed):
                drop = drop[:-1]
            trans[row, drop] = 0.0
            trans[row] /= trans[row].sum()

    states = tuple(
        GaussianState(
            mean=rng.normal(0.0, 2.0, dim),
            variance=rng.uniform(0.05, 3.0, dim),
        )
        for _ in range(num_emitting)
    )
    return HmmModel(trans=trans, states=states)


def path_log_score(model, obs, path):
    """Direct sum of log transitions and log emissions along a complete path.

    ``path`` includes the entry and exit states.
    """
    total = model.log_transition(path[0], path[1])
    for k in range(1, len(path) - 1):
        total += model.log_emission(path[k], obs[k - 1])
        total += model.log_transition(path[k], path[k + 1])
    return total
