"""Doubly stochastic mixing matrices for gossip averaging.

A mixing matrix A holds the weights agents use to average their neighbors'
states: one gossip round maps the stacked states z (one row per agent) to
A @ z. For a doubly stochastic A the row mean is preserved exactly, and the
deviation from the mean contracts by the spectral gap
rho = ||A - J||_2, where J = (1/m) 11^T is the plain averaging matrix.
These two facts are what every algorithm in this package leans on, so the
constructors here validate them aggressively and cache rho.

Matrices are stored dense; the network sizes of interest are at most a few
hundred agents. The Kronecker lift A (x) I_d is never materialized: `mix`
applies it as a plain (m, m) x (m, d) product.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraph, InvalidTopology, ShapeError

__all__ = [
    "MixingMatrix",
    "TopologySchedule",
    "ValidationReport",
    "build_complete",
    "build_metropolis_hastings",
    "build_ring",
    "averaging_matrix",
    "load_adjacency",
    "load_matrix",
    "mix",
    "gossip",
    "spectral_gap",
    "validate",
]

# ~100x double-precision epsilon: covers round-off accumulation for m <= 1000.
STOCHASTIC_TOL = 1e-12
# rho must stay below 1 - CONNECTIVITY_TOL for the topology to count as connected.
CONNECTIVITY_TOL = 1e-9


def averaging_matrix(m):
    """The rank-one averaging matrix J = (1/m) 11^T."""
    return np.full((m, m), 1.0 / m)


@dataclass(frozen=True)
class ValidationReport:
    """Per-invariant diagnostics for a candidate weight matrix.

    Attributes record pass/fail per invariant together with the worst
    violation magnitude, so callers can report exactly what is wrong with a
    user-supplied matrix instead of a bare boolean.
    """

    nonnegative: bool
    row_stochastic: bool
    col_stochastic: bool
    positive_diagonal: bool
    connected: bool
    rho: float
    worst_row_error: float
    worst_col_error: float
    min_entry: float
    min_diagonal: float

    @property
    def doubly_stochastic(self):
        return self.row_stochastic and self.col_stochastic

    @property
    def ok(self):
        return (
            self.nonnegative
            and self.row_stochastic
            and self.col_stochastic
            and self.positive_diagonal
            and self.connected
        )

    def failures(self):
        """Names of the invariants that failed, in a stable order."""
        out = []
        if not self.nonnegative:
            out.append(f"negative entry (min {self.min_entry:.3e})")
        if not self.row_stochastic:
            out.append(f"row sums off by {self.worst_row_error:.3e}")
        if not self.col_stochastic:
            out.append(f"column sums off by {self.worst_col_error:.3e}")
        if not self.positive_diagonal:
            out.append(f"nonpositive diagonal (min {self.min_diagonal:.3e})")
        if not self.connected:
            out.append(f"disconnected (rho = {self.rho:.6f})")
        return out


def validate(weights):
    """Check a square weight matrix against the mixing-matrix invariants.

    Returns a :class:`ValidationReport`; never raises for invariant
    failures (constructors consume the report and raise). A non-square
    input violates the precondition and raises :class:`ShapeError`.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ShapeError(f"weight matrix must be square, got shape {w.shape}")
    m = w.shape[0]
    row_err = float(np.max(np.abs(w.sum(axis=1) - 1.0)))
    col_err = float(np.max(np.abs(w.sum(axis=0) - 1.0)))
    min_entry = float(w.min())
    min_diag = float(np.min(np.diag(w)))
    rho = float(np.linalg.norm(w - averaging_matrix(m), ord=2))
    return ValidationReport(
        nonnegative=min_entry >= 0.0,
        row_stochastic=row_err <= STOCHASTIC_TOL,
        col_stochastic=col_err <= STOCHASTIC_TOL,
        positive_diagonal=min_diag > 0.0,
        connected=rho < 1.0 - CONNECTIVITY_TOL,
        rho=rho,
        worst_row_error=row_err,
        worst_col_error=col_err,
        min_entry=min_entry,
        min_diagonal=min_diag,
    )


def spectral_gap(weights):
    """Largest singular value of (A - J) for a doubly stochastic A.

    This is the per-gossip contraction factor of the consensus deviation.
    Raises :class:`InvalidTopology` if the matrix is not doubly stochastic
    with nonnegative entries. A disconnected but otherwise valid matrix
    returns 1.0 rather than raising, so callers can report it.
    """
    w = np.asarray(weights, dtype=float)
    report = validate(w)
    if not (report.nonnegative and report.doubly_stochastic):
        raise InvalidTopology(
            "spectral gap requires a doubly stochastic matrix: "
            + "; ".join(report.failures())
        )
    return report.rho


@dataclass(frozen=True)
class MixingMatrix:
    """Validated doubly stochastic gossip weights with cached spectral gap.

    Immutable after construction (the weights array is set read-only), so
    instances are safe to share across threads.

    Attributes
    ----------
    m : int
        Number of agents.
    weights : ndarray, shape (m, m)
        Nonnegative doubly stochastic weights with positive diagonal.
    rho : float
        Spectral norm of (weights - J); strictly below 1.
    """

    m: int
    weights: np.ndarray
    rho: float

    @classmethod
    def from_weights(cls, weights):
        """Validate raw weights and wrap them; raises on any failure."""
        w = np.array(weights, dtype=float)
        report = validate(w)
        if not report.ok:
            failures = report.failures()
            if report.nonnegative and report.doubly_stochastic and report.positive_diagonal:
                raise DisconnectedGraph("; ".join(failures))
            raise InvalidTopology("; ".join(failures))
        w.setflags(write=False)
        return cls(m=w.shape[0], weights=w, rho=report.rho)


def build_ring(m):
    """Ring of m agents, weight 1/3 on self and on each of the two neighbors.

    The equal 1/3 split is the simplest symmetric doubly stochastic choice
    for a ring. Requires m >= 3 (below that the ring degenerates).
    """
    if m < 3:
        raise InvalidTopology(f"ring topology needs at least 3 agents, got {m}")
    w = np.zeros((m, m))
    third = 1.0 / 3.0
    for i in range(m):
        w[i, i] = third
        w[i, (i - 1) % m] = third
        w[i, (i + 1) % m] = third
    return MixingMatrix.from_weights(w)


def build_complete(m):
    """Fully connected topology: the averaging matrix J itself (rho = 0)."""
    if m < 1:
        raise InvalidTopology(f"need at least one agent, got {m}")
    return MixingMatrix.from_weights(averaging_matrix(m))


def build_metropolis_hastings(adjacency):
    """Metropolis-Hastings weights for a symmetric adjacency with self-loops.

    Off-diagonal weight for an edge (i, j) is 1 / (1 + max(deg_i, deg_j)),
    where deg counts neighbors excluding the self-loop; the diagonal absorbs
    the remainder. The result is doubly stochastic with positive diagonal
    for any connected graph.

    Raises
    ------
    InvalidTopology
        If the adjacency is not symmetric or lacks self-loops.
    DisconnectedGraph
        If the graph is disconnected (the weights would have rho = 1).
    """
    adj = np.asarray(adjacency, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ShapeError(f"adjacency must be square, got shape {adj.shape}")
    if not np.array_equal(adj, adj.T):
        raise InvalidTopology("adjacency must be symmetric")
    if not np.all(np.diag(adj)):
        raise InvalidTopology("adjacency must include all self-loops")
    m = adj.shape[0]
    deg = adj.sum(axis=1) - 1  # neighbors, self excluded
    w = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            if adj[i, j]:
                w[i, j] = w[j, i] = 1.0 / (1.0 + max(deg[i], deg[j]))
    np.fill_diagonal(w, 1.0 - w.sum(axis=1))
    return MixingMatrix.from_weights(w)


def mix(matrix, stacked):
    """One gossip round: row i of the output is sum_j a_ij * row j.

    Applies A (x) I_d without materializing the Kronecker product. The row
    mean is preserved up to round-off, and the deviation from the mean
    contracts by at least ``matrix.rho`` in Frobenius norm.

    Parameters
    ----------
    matrix : MixingMatrix
    stacked : ndarray, shape (m, d)
        One row per agent.
    """
    z = np.asarray(stacked, dtype=float)
    if z.ndim != 2 or z.shape[0] != matrix.m:
        raise ShapeError(
            f"stacked state must have shape ({matrix.m}, d), got {z.shape}"
        )
    return matrix.weights @ z


def gossip(matrix, stacked, rounds):
    """Apply `mix` ``rounds`` times; deviation contracts by <= rho**rounds."""
    z = stacked
    for _ in range(rounds):
        z = mix(matrix, z)
    return z


@dataclass(frozen=True)
class TopologySchedule:
    """Mixing matrix per iteration (and per gossip repetition).

    The default is a single static matrix for the whole run. A schedule
    maps an iteration index ``k`` -- or a pair ``(k, tau)`` for the tau-th
    gossip repetition inside iteration k -- to an alternative matrix of the
    same size. Lookups fall back from (k, tau) to k to the base matrix.
    """

    base: MixingMatrix
    schedule: dict | None = None

    def __post_init__(self):
        if self.schedule:
            for key, mat in self.schedule.items():
                if not isinstance(mat, MixingMatrix):
                    raise InvalidTopology(
                        f"schedule entry {key!r} is not a MixingMatrix"
                    )
                if mat.m != self.base.m:
                    raise InvalidTopology(
                        f"schedule entry {key!r} has m={mat.m}, base has m={self.base.m}"
                    )

    @classmethod
    def static(cls, matrix):
        return cls(base=matrix)

    @property
    def m(self):
        return self.base.m

    def matrix_at(self, k, tau=None):
        if self.schedule:
            if tau is not None and (k, tau) in self.schedule:
                return self.schedule[(k, tau)]
            if k in self.schedule:
                return self.schedule[k]
        return self.base

    def max_rho(self):
        """Worst spectral gap over the base and all scheduled matrices."""
        rho = self.base.rho
        if self.schedule:
            rho = max(rho, *(mat.rho for mat in self.schedule.values()))
        return rho


def load_matrix(path):
    """Load a plain-text weight matrix (whitespace rows, one agent per line)."""
    w = np.loadtxt(path, ndmin=2)
    return MixingMatrix.from_weights(w)


def load_adjacency(path):
    """Load a plain-text 0/1 adjacency matrix for `build_metropolis_hastings`."""
    a = np.loadtxt(path, ndmin=2)
    if not np.all((a == 0) | (a == 1)):
        raise InvalidTopology(f"adjacency file {path} must contain only 0/1 entries")
    return a.astype(bool)
