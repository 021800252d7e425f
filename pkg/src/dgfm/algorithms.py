"""Gradient-free optimizers over a simulated synchronous agent network.

Four stepwise methods share the estimator machinery:

* ``dgfm`` -- every agent draws one (sample, direction) pair per iteration,
  pushes its estimator difference through a gossip tracking variable y so
  that the network average of y equals the network-average estimator, and
  descends the tracked direction. Two gossip rounds per iteration (y, x).
* ``dgfm_plus`` -- variance-reduced variant: every ``period`` iterations each
  agent rebuilds its estimate from a mega-batch and the tracker is
  re-synchronized with ``gossip_rounds`` extra communication rounds; in
  between, cheap paired differences recursively update the estimate.
* ``gfm`` / ``gfm_plus`` -- single-agent counterparts (no network), kept
  step-compatible so that the m = 1 / period = 1 degenerations are
  bit-identical.

Every stochastic draw comes from a counter-based stream keyed by
(seed, lane, agent, iteration); see :mod:`dgfm.rng`. Agent updates inside
one iteration are independent and could run in any order or in parallel
with identical results; the two gossip applications are the
synchronization barriers.

Exact invariants maintained by the updates (used heavily by the tests):
the mean of the tracking variable after the step equals the mean of the
current estimates, and the mean iterate moves by exactly
-eta * mean(tracker), both up to round-off.
"""

import math
import warnings
from dataclasses import asdict, dataclass, field
from time import perf_counter

import numpy as np

from .errors import (
    BudgetExceeded,
    EmptyTrajectory,
    InvalidParameter,
    NumericFailure,
    ShapeError,
)
from .metrics import RunEntry, RunRecord, consensus_error, stationarity_estimate
from .rng import substream
from .smoothing import (
    OracleCounter,
    SmoothingParams,
    minibatch_estimate,
    sample_batch,
    sigma_squared,
    spider_difference,
    surrogate_smoothness,
    two_point_estimate,
)
from .topology import MixingMatrix, TopologySchedule, mix

__all__ = [
    "AgentView",
    "DgfmConfig",
    "DgfmPlusConfig",
    "NetworkState",
    "TheoremParams",
    "dgfm_plus_run",
    "dgfm_plus_step",
    "dgfm_run",
    "dgfm_step",
    "gfm_plus_run",
    "gfm_run",
    "select_output",
    "theorem_params_dgfm",
    "theorem_params_dgfm_plus",
]

# Stream lanes; draws, metrics sampling and output selection never collide.
_LANE_DRAW = 0
_LANE_METRICS = 1
_LANE_SELECT = 2

RHO_FLOOR = 1e-6


def _require_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise InvalidParameter(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class DgfmConfig:
    """Hyperparameters for the single-pair tracked method (and for gfm,
    which additionally reads ``batch``)."""

    eta: float
    delta: float
    iters: int
    seed: int
    batch: int = 1

    def __post_init__(self):
        _require_positive(eta=self.eta, delta=self.delta, batch=self.batch)
        if self.iters < 0:
            raise InvalidParameter(f"iters must be >= 0, got {self.iters}")
        if self.seed < 0:
            raise InvalidParameter(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class DgfmPlusConfig:
    """Hyperparameters for the variance-reduced methods.

    ``period`` is the cycle length (a mega-batch restart fires at every
    iteration k with k mod period == 0), ``mega_batch`` the restart batch
    size, ``batch`` the per-iteration batch size in between, and
    ``gossip_rounds`` the number of extra communication rounds applied to
    the tracking variable at a restart.
    """

    eta: float
    delta: float
    iters: int
    seed: int
    period: int
    batch: int
    mega_batch: int
    gossip_rounds: int = 1

    def __post_init__(self):
        _require_positive(
            eta=self.eta,
            delta=self.delta,
            period=self.period,
            batch=self.batch,
            mega_batch=self.mega_batch,
            gossip_rounds=self.gossip_rounds,
        )
        if self.iters < 0:
            raise InvalidParameter(f"iters must be >= 0, got {self.iters}")
        if self.seed < 0:
            raise InvalidParameter(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class AgentView:
    """Read-only view of one agent's vectors inside a NetworkState."""

    x: np.ndarray
    y: np.ndarray
    v: np.ndarray
    g_prev: np.ndarray
    x_prev: np.ndarray


@dataclass
class NetworkState:
    """Stacked per-agent iterates plus bookkeeping counters.

    Rows index agents. ``y`` is the gradient-tracking variable, ``v`` the
    recursive estimate of the variance-reduced methods, ``g_prev`` the
    cached previous estimator of the single-pair method, and ``x_prev`` the
    previous iterate the paired differences are taken against. At k = 0 all
    of y, v, g_prev are zero and x_prev equals x.
    """

    x: np.ndarray
    y: np.ndarray
    v: np.ndarray
    g_prev: np.ndarray
    x_prev: np.ndarray
    k: int = 0
    comm_rounds: int = 0
    counter: OracleCounter = field(default_factory=OracleCounter)
    restart_log: list = field(default_factory=list)

    @classmethod
    def initial(cls, m, x0):
        """All agents start at the common point x0."""
        x0 = np.asarray(x0, dtype=float)
        if x0.ndim != 1:
            raise ShapeError(f"x0 must be a vector, got shape {x0.shape}")
        x = np.tile(x0, (m, 1))
        zeros = lambda: np.zeros_like(x)
        return cls(x=x, y=zeros(), v=zeros(), g_prev=zeros(), x_prev=x.copy())

    @property
    def m(self):
        return self.x.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    @property
    def oracle_calls(self):
        return self.counter.count

    @property
    def mean_x(self):
        return self.x.mean(axis=0)

    def agent(self, i):
        return AgentView(
            x=self.x[i], y=self.y[i], v=self.v[i], g_prev=self.g_prev[i], x_prev=self.x_prev[i]
        )


def _check_step(state, cfg, m):
    if state.k >= cfg.iters:
        raise BudgetExceeded(
            f"iteration {state.k} outside the configured budget of {cfg.iters}"
        )
    if state.m != m:
        raise ShapeError(f"state has {state.m} agents, topology has {m}")


def dgfm_step(state, matrix, partition, objective, cfg):
    """One synchronous iteration of the single-pair tracked method.

    Each agent draws one (sample, direction) pair from its own shard and
    forms the two-point estimate at its iterate (2m oracle calls). The
    tracking variable is gossiped with the local estimator increment
    folded in, then the iterates descend the fresh tracker and are gossiped
    as well (2 communication rounds). Mutates ``state`` and returns it.
    """
    _check_step(state, cfg, matrix.m)
    m, d = state.x.shape
    params = SmoothingParams(delta=cfg.delta, dim=d)
    k = state.k
    g = np.empty((m, d))
    for i in range(m):
        rng = substream(cfg.seed, _LANE_DRAW, i, k)
        pair = sample_batch(partition.assignment[i], 1, d, rng)
        g[i] = two_point_estimate(
            objective, state.x[i], params, pair.ws[0], pair.xis[0], state.counter
        )
    # (y - g_prev) + g keeps the m = 1 path bit-equal to plain two-point SGD.
    y_new = matrix.weights @ ((state.y - state.g_prev) + g)
    x_new = matrix.weights @ (state.x - cfg.eta * y_new)
    state.comm_rounds += 2
    state.g_prev = g
    state.x_prev = state.x
    state.y = y_new
    state.x = x_new
    state.k += 1
    return state


def dgfm_plus_step(state, schedule, partition, objective, cfg):
    """One synchronous iteration of the variance-reduced tracked method.

    At a restart (k mod period == 0) each agent rebuilds its estimate from
    a mega-batch of ``mega_batch`` pairs (2 m b' oracle calls), the tracker
    is set to the fresh estimates and gossiped ``gossip_rounds`` times.
    Otherwise each agent updates its estimate with a paired difference over
    ``batch`` shared pairs (4 m b oracle calls) and the tracker is gossiped
    once with the increment folded in. Both branches end with the gossiped
    descent step on x.
    """
    if isinstance(schedule, MixingMatrix):
        schedule = TopologySchedule.static(schedule)
    _check_step(state, cfg, schedule.m)
    m, d = state.x.shape
    params = SmoothingParams(delta=cfg.delta, dim=d)
    k = state.k
    v_new = np.empty((m, d))
    if k % cfg.period == 0:
        for i in range(m):
            rng = substream(cfg.seed, _LANE_DRAW, i, k)
            batch = sample_batch(partition.assignment[i], cfg.mega_batch, d, rng)
            v_new[i] = minibatch_estimate(objective, state.x[i], params, batch, state.counter)
        y_new = v_new.copy()
        trace = [consensus_error(y_new)]
        for tau in range(1, cfg.gossip_rounds + 1):
            y_new = mix(schedule.matrix_at(k, tau), y_new)
            trace.append(consensus_error(y_new))
        state.comm_rounds += cfg.gossip_rounds
        state.restart_log.append({"iter": k, "tracking_consensus": trace})
    else:
        for i in range(m):
            rng = substream(cfg.seed, _LANE_DRAW, i, k)
            batch = sample_batch(partition.assignment[i], cfg.batch, d, rng)
            v_new[i] = state.v[i] + spider_difference(
                objective, state.x[i], state.x_prev[i], params, batch, state.counter
            )
        y_new = schedule.matrix_at(k).weights @ ((state.y - state.v) + v_new)
        state.comm_rounds += 1
    x_new = schedule.matrix_at(k).weights @ (state.x - cfg.eta * y_new)
    state.comm_rounds += 1
    state.x_prev = state.x
    state.v = v_new
    state.y = y_new
    state.x = x_new
    state.k += 1
    return state


def _snapshot_due(k, record_due, keep_iterates, snapshot_every):
    # snapshot_every overrides the default record-aligned snapshots, giving
    # a full (or custom-density) trajectory for output selection
    if not keep_iterates:
        return False
    if snapshot_every is not None:
        return k % snapshot_every == 0
    return record_due


def _observe(record, objective, delta, seed, state_x, k, zo_calls, comm_rounds, t0,
             stationarity_every, stationarity_samples):
    """Append one metrics entry; loss/stationarity never touch the oracle counter."""
    xbar = state_x.mean(axis=0)
    loss = objective.full_loss(xbar)
    if not math.isfinite(loss):
        raise NumericFailure(f"non-finite loss at iteration {k}", iteration=k)
    stat = None
    if stationarity_every and (len(record.entries) + 1) % stationarity_every == 0:
        est = stationarity_estimate(
            objective, xbar, delta, stationarity_samples, substream(seed, _LANE_METRICS, k)
        )
        stat = est.value
    record.append(
        RunEntry(
            iteration=k,
            zo_calls=zo_calls,
            comm_rounds=comm_rounds,
            loss=loss,
            consensus_err=consensus_error(state_x),
            stationarity=stat,
            wall_ms=(perf_counter() - t0) * 1000.0,
        )
    )


def _metadata(algo, cfg, objective, topology_id, rho, extra=None):
    md = {
        "algo": algo,
        "seed": cfg.seed,
        "config": asdict(cfg),
        "dataset": objective.name,
        "topology": topology_id,
        "rho": rho,
    }
    if extra:
        md.update(extra)
    return md


def dgfm_run(matrix, partition, objective, cfg, record_every=1, x0=None,
             metadata=None, stationarity_every=10, stationarity_samples=32,
             keep_iterates=True, snapshot_every=None):
    """Run the single-pair tracked method for ``cfg.iters`` iterations.

    All agents start from the common point ``x0`` (zero by default).
    Metrics are recorded every ``record_every`` iterations; the Monte Carlo
    stationarity proxy every ``stationarity_every``-th recorded entry
    (0 disables it). Iterate snapshots for output selection follow the
    recorded entries unless ``snapshot_every`` asks for a different density
    (1 keeps the full trajectory; sensible for small runs only). Identical
    (config, seed) give bit-identical records apart from wall-clock times.

    Returns
    -------
    (NetworkState, RunRecord)
    """
    if partition.m != matrix.m:
        raise ShapeError(f"partition has {partition.m} agents, topology has {matrix.m}")
    x0 = np.zeros(objective.dim) if x0 is None else np.asarray(x0, dtype=float)
    state = NetworkState.initial(matrix.m, x0)
    record = RunRecord(
        metadata=_metadata("dgfm", cfg, objective, f"m={matrix.m}", matrix.rho, metadata)
    )
    t0 = perf_counter()
    for _ in range(cfg.iters):
        dgfm_step(state, matrix, partition, objective, cfg)
        due = state.k % record_every == 0
        if due:
            _observe(record, objective, cfg.delta, cfg.seed, state.x, state.k,
                     state.oracle_calls, state.comm_rounds, t0,
                     stationarity_every, stationarity_samples)
        if _snapshot_due(state.k, due, keep_iterates, snapshot_every):
            record.snapshots.append((state.k, state.x.copy()))
    return state, record


def dgfm_plus_run(schedule, partition, objective, cfg, record_every=1, x0=None,
                  metadata=None, stationarity_every=10, stationarity_samples=32,
                  keep_iterates=True, snapshot_every=None):
    """Run the variance-reduced tracked method; see `dgfm_run` for the contract.

    Restarts fire at every iteration k with k mod period == 0, so a final
    partial cycle simply runs short when ``iters`` is not a multiple of the
    period. Per-restart gossip diagnostics are logged into the record.
    """
    if isinstance(schedule, MixingMatrix):
        schedule = TopologySchedule.static(schedule)
    if partition.m != schedule.m:
        raise ShapeError(f"partition has {partition.m} agents, topology has {schedule.m}")
    x0 = np.zeros(objective.dim) if x0 is None else np.asarray(x0, dtype=float)
    state = NetworkState.initial(schedule.m, x0)
    record = RunRecord(
        metadata=_metadata(
            "dgfm-plus", cfg, objective, f"m={schedule.m}", schedule.base.rho, metadata
        )
    )
    t0 = perf_counter()
    for _ in range(cfg.iters):
        dgfm_plus_step(state, schedule, partition, objective, cfg)
        due = state.k % record_every == 0
        if due:
            _observe(record, objective, cfg.delta, cfg.seed, state.x, state.k,
                     state.oracle_calls, state.comm_rounds, t0,
                     stationarity_every, stationarity_samples)
        if _snapshot_due(state.k, due, keep_iterates, snapshot_every):
            record.snapshots.append((state.k, state.x.copy()))
    record.restarts = list(state.restart_log)
    return state, record


def gfm_run(objective, cfg, record_every=1, x0=None, metadata=None,
            stationarity_every=10, stationarity_samples=32, keep_iterates=True,
            snapshot_every=None):
    """Centralized two-point mini-batch descent (the m = 1 baseline).

    Per iteration: draw ``cfg.batch`` pairs, average their two-point
    estimates, step against the average. 2 b oracle calls per iteration and
    no communication. Bit-equal to `dgfm_run` with one agent and batch 1.

    Returns
    -------
    RunRecord
    """
    d = objective.dim
    x = np.zeros(d) if x0 is None else np.asarray(x0, dtype=float).copy()
    params = SmoothingParams(delta=cfg.delta, dim=d)
    indices = np.arange(objective.n_samples)
    counter = OracleCounter()
    record = RunRecord(metadata=_metadata("gfm", cfg, objective, "centralized", None, metadata))
    t0 = perf_counter()
    for k in range(cfg.iters):
        rng = substream(cfg.seed, _LANE_DRAW, 0, k)
        batch = sample_batch(indices, cfg.batch, d, rng)
        g = minibatch_estimate(objective, x, params, batch, counter)
        x = x - cfg.eta * g
        due = (k + 1) % record_every == 0
        if due:
            _observe(record, objective, cfg.delta, cfg.seed, x[None, :], k + 1,
                     counter.count, 0, t0,
                     stationarity_every, stationarity_samples)
        if _snapshot_due(k + 1, due, keep_iterates, snapshot_every):
            record.snapshots.append((k + 1, x[None, :].copy()))
    return record


def gfm_plus_run(objective, cfg, record_every=1, x0=None, metadata=None,
                 stationarity_every=10, stationarity_samples=32, keep_iterates=True,
                 snapshot_every=None):
    """Centralized variance-reduced descent (the m = 1 baseline of dgfm_plus).

    Mega-batch restart every ``period`` iterations, paired-difference
    recursion in between, plain descent step on the running estimate. With
    period 1 it coincides bit-for-bit with `gfm_run` at batch
    ``mega_batch``.
    """
    d = objective.dim
    x = np.zeros(d) if x0 is None else np.asarray(x0, dtype=float).copy()
    x_prev = x
    v = np.zeros(d)
    params = SmoothingParams(delta=cfg.delta, dim=d)
    indices = np.arange(objective.n_samples)
    counter = OracleCounter()
    record = RunRecord(
        metadata=_metadata("gfm-plus", cfg, objective, "centralized", None, metadata)
    )
    t0 = perf_counter()
    for k in range(cfg.iters):
        rng = substream(cfg.seed, _LANE_DRAW, 0, k)
        if k % cfg.period == 0:
            batch = sample_batch(indices, cfg.mega_batch, d, rng)
            v = minibatch_estimate(objective, x, params, batch, counter)
        else:
            batch = sample_batch(indices, cfg.batch, d, rng)
            v = v + spider_difference(objective, x, x_prev, params, batch, counter)
        x_prev = x
        x = x - cfg.eta * v
        due = (k + 1) % record_every == 0
        if due:
            _observe(record, objective, cfg.delta, cfg.seed, x[None, :], k + 1,
                     counter.count, 0, t0,
                     stationarity_every, stationarity_samples)
        if _snapshot_due(k + 1, due, keep_iterates, snapshot_every):
            record.snapshots.append((k + 1, x[None, :].copy()))
    return record


def select_output(record, rng):
    """Uniform draw over all recorded (agent, iteration) iterates.

    The draw is over the subsampled trajectory the record actually kept
    (every ``record_every``-th iteration by default), not over all m * K
    iterates; run with ``snapshot_every=1`` when the full trajectory
    matters. ``rng`` may be a Generator or a bare seed.
    """
    if isinstance(rng, (int, np.integer)):
        rng = substream(rng, _LANE_SELECT)
    total = sum(x.shape[0] for _, x in record.snapshots)
    if total == 0:
        raise EmptyTrajectory("record holds no iterate snapshots")
    idx = int(rng.integers(total))
    for _, x in record.snapshots:
        if idx < x.shape[0]:
            return x[idx].copy()
        idx -= x.shape[0]
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Prescribed parameter settings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremParams:
    """Analysis-prescribed hyperparameters for a target accuracy epsilon.

    ``beta_x``, ``beta_y``, ``alpha_1``, ``alpha_2`` are Lyapunov weights:
    they document the analysis and are never consumed by the optimizer
    loops. ``iterations_bound`` is the exact (unrounded) lower bound that
    ``iterations`` rounds up.
    """

    eta: float
    beta_x: float
    beta_y: float
    alpha_1: float
    alpha_2: float
    iterations: int
    iterations_bound: float
    sigma_sq: float
    l_delta: float
    batch: int | None = None
    mega_batch: int | None = None
    period: int | None = None
    cycles: int | None = None
    gossip_rounds: int | None = None
    inputs: dict = field(default_factory=dict)

    def echo(self):
        """JSON-able summary for run metadata."""
        out = {
            "eta": self.eta,
            "iterations": self.iterations,
            "alpha_1": self.alpha_1,
            "beta_x": self.beta_x,
            "beta_y": self.beta_y,
        }
        for name in ("batch", "mega_batch", "period", "cycles", "gossip_rounds"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def _check_theorem_inputs(rho, lipschitz, d, delta, epsilon, m, value_gap, c):
    if not 0.0 < rho < 1.0:
        raise InvalidParameter(
            "rho must lie strictly inside (0, 1); a fully connected topology has "
            "rho = 0, pass a tiny floor such as 1e-6 instead"
        )
    _require_positive(lipschitz=lipschitz, delta=delta, epsilon=epsilon, value_gap=value_gap, c=c)
    if d < 1 or m < 1:
        raise InvalidParameter(f"need d >= 1 and m >= 1, got d={d}, m={m}")
    if epsilon > 1e6:
        raise InvalidParameter(f"epsilon {epsilon} is beyond any sensible accuracy target")
    return max(rho, RHO_FLOOR)


def theorem_params_dgfm(rho, lipschitz, d, delta, epsilon, m, value_gap, c=1.0):
    """Prescribed (eta, K, Lyapunov weights) for the single-pair method.

    ``value_gap`` bounds the initial smoothed-objective gap; ``c`` is the
    (unspecified) leading constant of the surrogate smoothness, default 1.
    """
    rho = _check_theorem_inputs(rho, lipschitz, d, delta, epsilon, m, value_gap, c)
    sigma_sq = sigma_squared(d, lipschitz)
    sigma = math.sqrt(sigma_sq)
    l_delta = surrogate_smoothness(d, lipschitz, delta, c)
    r2 = rho * rho
    eta = min(
        (1.0 - r2) ** 2 / (48.0 * sigma * (1.0 + r2) * r2) * epsilon / l_delta,
        epsilon**2 / (32.0 * l_delta * (sigma_sq + lipschitz)),
        8.0 * math.sqrt(6.0 * m * sigma_sq) / (epsilon * l_delta),
    )
    beta_y = (1.0 - r2) * epsilon**2 / (384.0 * sigma_sq * r2 * (1.0 + r2)) * eta / m
    beta_x = 1152.0 * sigma_sq * r2 * (1.0 + r2) / (1.0 - r2) ** 2 * l_delta**2 / epsilon**2 * beta_y
    alpha = (1.0 - r2) / (2.0 * r2)
    k_bound = max(
        2.0 * (sigma_sq + lipschitz**2) * (1.0 - r2) / (3.0 * m * sigma_sq * (1.0 + r2)),
        32.0 * value_gap / (epsilon**2 * eta),
    )
    return TheoremParams(
        eta=eta,
        beta_x=beta_x,
        beta_y=beta_y,
        alpha_1=alpha,
        alpha_2=alpha,
        iterations=math.ceil(k_bound),
        iterations_bound=k_bound,
        sigma_sq=sigma_sq,
        l_delta=l_delta,
        inputs=dict(rho=rho, lipschitz=lipschitz, d=d, delta=delta, epsilon=epsilon,
                    m=m, value_gap=value_gap, c=c),
    )


def theorem_params_dgfm_plus(rho, lipschitz, d, delta, epsilon, m, value_gap, c=1.0):
    """Prescribed (eta, batches, period, gossip rounds) for the
    variance-reduced method.

    The gossip-round prescription turns nonpositive for moderate epsilon;
    in that regime it is clamped to 1 and a ``RuntimeWarning`` is emitted
    rather than guessing intent. Batch sizes and counts are rounded up to
    integers.
    """
    rho = _check_theorem_inputs(rho, lipschitz, d, delta, epsilon, m, value_gap, c)
    sigma_sq = sigma_squared(d, lipschitz)
    l_delta = surrogate_smoothness(d, lipschitz, delta, c)
    r2 = rho * rho
    period = math.ceil(c**2 / (2.0 * delta))
    eta_1 = (1.0 - r2) ** 1.5 * math.sqrt(delta) / (r2 * math.sqrt(1.0 + r2) * math.sqrt(d) * math.sqrt(24.0))
    eta_2 = (
        1.0
        / (2.0 * math.sqrt(3.0 * d * period))
        * (
            lipschitz**2 / (m * epsilon)
            + 3.0 * (1.0 - r2) / (2.0 * c**2)
            * (c**2 * lipschitz**2 / ((1.0 - r2) * delta) + 2.0 * r2 * lipschitz**2 * m)
        )
        ** -0.5
    )
    eta_3 = 0.5 / l_delta
    eta = min(eta_1, eta_2, eta_3)
    beta_y = (1.0 - r2) * delta * eta / (2.0 * rho**4 * c**2 * m) * (c**2 / (2.0 * delta) + 2.0 * period)
    beta_x = (1.0 - r2) ** 2 / (2.0 * r2 * (1.0 + r2) * eta**2) * beta_y
    batch = math.ceil(d / (m * epsilon))
    mega_batch = math.ceil(sigma_sq / (12.0 * epsilon**2))
    gossip_exact = (
        math.log(c**2 * epsilon) - math.log(36.0 * (sigma_sq + lipschitz**2) * (1.0 - r2))
    ) / math.log(rho) + 2.0
    gossip_rounds = math.ceil(gossip_exact)
    if gossip_rounds < 1:
        warnings.warn(
            f"gossip-round prescription {gossip_exact:.3f} is below 1 at epsilon={epsilon}; "
            "clamping to 1",
            RuntimeWarning,
            stacklevel=2,
        )
        gossip_rounds = 1
    cycles = math.ceil(24.0 * value_gap * delta / (epsilon**2 * eta * c**2))
    k_bound = float(cycles * period)
    alpha = (1.0 - r2) / (2.0 * r2)
    return TheoremParams(
        eta=eta,
        beta_x=beta_x,
        beta_y=beta_y,
        alpha_1=alpha,
        alpha_2=alpha,
        iterations=cycles * period,
        iterations_bound=k_bound,
        sigma_sq=sigma_sq,
        l_delta=l_delta,
        batch=batch,
        mega_batch=mega_batch,
        period=period,
        cycles=cycles,
        gossip_rounds=gossip_rounds,
        inputs=dict(rho=rho, lipschitz=lipschitz, d=d, delta=delta, epsilon=epsilon,
                    m=m, value_gap=value_gap, c=c),
    )
