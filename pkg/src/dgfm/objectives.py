"""Stochastic finite-sum objectives exposing function values only.

No objective in this package ever exposes a gradient; optimizers see a
single method ``eval(x, xi)`` returning the value of the xi-th summand at
x. The concrete objectives are the capped-L1 hinge-loss SVM used in the
benchmark experiments and a few synthetic test functions whose smoothed
surrogates are known in closed form (those are the unbiasedness oracles of
the test suite).

Objectives are immutable after construction and ``eval`` is pure, so they
are safe to share across concurrently simulated agents.
"""

import math

import numpy as np
import scipy.sparse as sp

from .errors import InvalidParameter, SampleIndexError, ShapeError
from .smoothing import sample_sphere

__all__ = [
    "StochasticObjective",
    "CappedL1Svm",
    "QuadraticTest",
    "AbsTest",
    "LinearTest",
    "estimate_lipschitz",
    "full_loss",
    "make_quadratic_test",
]


class StochasticObjective:
    """Base class: n_samples summands over R^dim, values only.

    Attributes
    ----------
    n_samples : int
        Number of summands; sample indices run over range(n_samples).
    dim : int
        Dimension of the decision variable.
    lipschitz_hint : float or None
        Known (or safely assumed) Lipschitz constant; estimators fall back
        to `estimate_lipschitz` when absent.
    name : str
        Identifier used in run metadata.
    """

    def __init__(self, n_samples, dim, lipschitz_hint=None, name=None):
        if n_samples < 1:
            raise InvalidParameter(f"n_samples must be >= 1, got {n_samples}")
        if dim < 1:
            raise InvalidParameter(f"dim must be >= 1, got {dim}")
        self.n_samples = int(n_samples)
        self.dim = int(dim)
        self.lipschitz_hint = lipschitz_hint
        self.name = name or type(self).__name__

    def _check_index(self, xi):
        xi = int(xi)
        if not 0 <= xi < self.n_samples:
            raise SampleIndexError(
                f"sample index {xi} out of range [0, {self.n_samples})"
            )
        return xi

    def eval(self, x, xi):
        """Value of the xi-th summand at x. Deterministic in (x, xi)."""
        raise NotImplementedError

    def full_loss(self, x):
        """Average of all summands at x (reporting only, not an oracle call)."""
        x = np.asarray(x, dtype=float)
        return sum(self.eval(x, xi) for xi in range(self.n_samples)) / self.n_samples


def full_loss(obj, x):
    """Average of all summands of ``obj`` at x."""
    return obj.full_loss(x)


class CappedL1Svm(StochasticObjective):
    """Hinge-loss SVM with the capped-L1 (nonconvex, nonsmooth) penalty.

    The xi-th summand is

        max(1 - b_xi * <a_xi, x>, 0) + lam * sum_j min(|x_j|, alpha),

    i.e. the per-sample hinge plus the full deterministic regularizer. The
    regularizer is included in every stochastic evaluation so the two-point
    probes see the same objective the trajectory reports; leaving it out of
    the oracle would change what is being optimized.

    Parameters
    ----------
    features : scipy.sparse matrix, shape (n, d)
        One sample per row (converted to CSR internally).
    labels : array of +-1, shape (n,)
    lam, alpha : float
        Penalty weight and cap, both positive.
    """

    def __init__(self, features, labels, lam, alpha, name="capped-l1-svm"):
        features = sp.csr_matrix(features, dtype=float)
        labels = np.asarray(labels, dtype=float)
        n, d = features.shape
        if labels.shape != (n,):
            raise ShapeError(f"labels must have shape ({n},), got {labels.shape}")
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise InvalidParameter("labels must all be +1 or -1")
        # lam = 0 degenerates to the plain hinge, which is useful in tests
        if lam < 0.0 or not alpha > 0.0:
            raise InvalidParameter(f"need lam >= 0 and alpha > 0, got {(lam, alpha)}")
        # Row hinge is ||a_xi||-Lipschitz and the penalty lam*d-Lipschitz at worst.
        hint = float(np.sqrt(features.multiply(features).sum(axis=1)).max()) + lam * d
        super().__init__(n_samples=n, dim=d, lipschitz_hint=hint, name=name)
        self.lam = float(lam)
        self.alpha = float(alpha)
        self.labels = labels
        self._matrix = features
        self._indptr = features.indptr
        self._indices = features.indices
        self._data = features.data
        self.labels.setflags(write=False)

    @classmethod
    def from_dataset(cls, dataset, lam=None, alpha=2.0, name=None):
        """Build from a parsed dataset; lam defaults to 1e-5 / n."""
        if lam is None:
            lam = 1e-5 / dataset.n
        return cls(
            dataset.features,
            dataset.labels,
            lam=lam,
            alpha=alpha,
            name=name or "capped-l1-svm",
        )

    def _penalty(self, x):
        return self.lam * float(np.minimum(np.abs(x), self.alpha).sum())

    def eval(self, x, xi):
        xi = self._check_index(xi)
        lo, hi = self._indptr[xi], self._indptr[xi + 1]
        margin = self.labels[xi] * float(np.dot(self._data[lo:hi], x[self._indices[lo:hi]]))
        return max(1.0 - margin, 0.0) + self._penalty(x)

    def full_loss(self, x):
        x = np.asarray(x, dtype=float)
        margins = self.labels * self._matrix.dot(x)
        return float(np.maximum(1.0 - margins, 0.0).mean()) + self._penalty(x)


class QuadraticTest(StochasticObjective):
    """f(x) = ||x||^2, whose smoothed surrogate is exactly ||x||^2 + delta^2.

    Sphere symmetry forces the surrogate into closed form, making this the
    reference oracle for estimator unbiasedness: grad f_delta(x) = 2x for
    every smoothing radius. All summands are identical; ``n_samples`` above
    1 only exists so the objective can be partitioned across agents.
    """

    def __init__(self, dim, n_samples=1):
        super().__init__(n_samples=n_samples, dim=dim, name="quadratic")

    def eval(self, x, xi):
        self._check_index(xi)
        x = np.asarray(x, dtype=float)
        return float(x @ x)

    def full_loss(self, x):
        x = np.asarray(x, dtype=float)
        return float(x @ x)

    def smoothed_value(self, x, delta):
        return float(np.asarray(x) @ np.asarray(x)) + delta**2

    def smoothed_grad(self, x):
        return 2.0 * np.asarray(x, dtype=float)


class AbsTest(StochasticObjective):
    """f(x) = sum_j |x_j|: nonsmooth at every axis, sqrt(d)-Lipschitz."""

    def __init__(self, dim, n_samples=1):
        super().__init__(
            n_samples=n_samples, dim=dim, lipschitz_hint=math.sqrt(dim), name="abs"
        )

    def eval(self, x, xi):
        self._check_index(xi)
        return float(np.abs(x).sum())

    def full_loss(self, x):
        return float(np.abs(x).sum())


class LinearTest(StochasticObjective):
    """f(x) = <c, x>: the estimator applied to it is location-independent."""

    def __init__(self, c, n_samples=1):
        c = np.asarray(c, dtype=float)
        super().__init__(
            n_samples=n_samples,
            dim=c.shape[0],
            lipschitz_hint=float(np.linalg.norm(c)),
            name="linear",
        )
        self.c = c
        self.c.setflags(write=False)

    def eval(self, x, xi):
        self._check_index(xi)
        return float(self.c @ x)

    def full_loss(self, x):
        return float(self.c @ x)


def make_quadratic_test(d):
    """Single-sample ||x||^2 objective (see :class:`QuadraticTest`)."""
    return QuadraticTest(dim=d)


def estimate_lipschitz(obj, probes, radius, rng):
    """Probe-based lower estimate of the Lipschitz constant of obj.

    Samples (x, y, xi) triples inside the ball of the given radius, with
    step lengths spread over three decades so short steps catch local
    kinks, and returns the largest observed slope
    |eval(x, xi) - eval(y, xi)| / ||x - y||. Always a *lower* bound on the
    true constant; reported as such wherever it is used.
    """
    if probes < 2:
        raise InvalidParameter(f"need at least 2 probes, got {probes}")
    d = obj.dim
    best = 0.0
    for _ in range(probes):
        xi = int(rng.integers(obj.n_samples))
        center = radius * rng.uniform() ** (1.0 / d) * sample_sphere(d, rng)
        step = radius * 10.0 ** rng.uniform(-3.0, 0.0) * sample_sphere(d, rng)
        slope = abs(obj.eval(center + step, xi) - obj.eval(center, xi)) / np.linalg.norm(step)
        best = max(best, slope)
    return best
