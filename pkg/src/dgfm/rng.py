"""Counter-based reproducible random streams.

Every stochastic draw in this package comes from a stream keyed by the run
seed plus an integer path such as (lane, agent, iteration). Streams with
distinct keys are statistically independent, and the same key always
reproduces the same stream, so simulation results do not depend on the
order in which agents are processed (and would not change under
parallel execution).
"""

import numpy as np

__all__ = ["substream"]


def substream(seed, *path):
    """Return a fresh ``numpy.random.Generator`` for the key (seed, \\*path).

    Parameters
    ----------
    seed : int
        Nonnegative run seed.
    *path : int
        Nonnegative integers identifying the consumer, e.g.
        ``substream(seed, lane, agent, iteration)``.
    """
    key = np.random.SeedSequence([int(seed), *(int(p) for p in path)])
    # Philox is counter-based: cheap to construct per key.
    return np.random.Generator(np.random.Philox(key))
