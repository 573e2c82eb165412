"""Random test distributions shared by the property checks and the CLI."""
from __future__ import annotations

import numpy as np

from .dist import DiscreteDist, JointDiscreteDist, convolve


def random_discrete(rng: np.random.Generator, max_atoms: int = 10, low: float = -3.0,
                    high: float = 3.0, n_atoms: int | None = None) -> DiscreteDist:
    """Uniform support points on [low, high] with Dirichlet(1, ..., 1) masses."""
    n = int(rng.integers(1, max_atoms + 1)) if n_atoms is None else n_atoms
    values = rng.uniform(low, high, n)
    probs = rng.dirichlet(np.ones(n))
    # Dirichlet can produce masses that underflow to zero; nudge them back
    probs = np.maximum(probs, 1e-6)
    return DiscreteDist.from_atoms(values, probs / probs.sum(), normalize=True)


def random_nonnegative(rng: np.random.Generator, max_atoms: int = 10,
                       high: float = 5.0) -> DiscreteDist:
    return random_discrete(rng, max_atoms, 0.0, high)


def coupled_pair(rng: np.random.Generator, max_atoms: int = 6) -> tuple[DiscreteDist, DiscreteDist]:
    """(X, X + D) with D >= 0 independent of X, so the first is stochastically smaller."""
    x = random_discrete(rng, max_atoms)
    step = random_discrete(rng, 3, 0.0, 2.0)
    return x, convolve(x, step)


def random_joint(rng: np.random.Generator, max_atoms: int = 8) -> JointDiscreteDist:
    """Dependent pair: random (x, y) atoms with Dirichlet masses."""
    n = int(rng.integers(1, max_atoms + 1))
    xy = rng.uniform(-3.0, 3.0, (n, 2))
    probs = rng.dirichlet(np.ones(n))
    probs = np.maximum(probs, 1e-6)
    probs /= probs.sum()
    return JointDiscreteDist(np.column_stack([xy, probs]))
