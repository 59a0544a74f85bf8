"""Path simulation for walks driven by Kendall-type kernels.

The recursion starts at ``X_0 = 0`` and takes ``X_1 = dX_1`` literally
(the kernel against a point mass at zero is trivial); every later
transition applies the kernel mechanics:

* plain kernel: ``v = max(X_n, dX_{n+1})``, ``z = min/max``, a switch
  ``Q ~ Bernoulli(z^alpha)`` and a tail factor ``theta ~ Pareto(2 alpha)``
  give ``X_{n+1} = v * theta^Q``;
* weak kernel: moduli replace values, the sign carrier ``u`` is the sign
  of the larger-modulus argument (ties take the current state's sign),
  the tail factor is symmetric, and when the switch stays off the atom is
  realized as ``v * u * R`` with ``R = +-1`` equiprobable.

Path ``m`` of a simulation draws exclusively from the stream
``(seed, stream_id=m)``; within a path the uniforms are consumed in a
fixed order (step, switch, tail, sign), with the tail uniform drawn on
every transition so the per-path draw count is constant.  This makes the
output independent of chunking and worker count, bit for bit.  The
associated walk consumes streams per fixed-size path block instead,
because its multiplier sampler is rejection-based with a data-dependent
draw count; blocks are tied to path indices, not workers, so the same
reproducibility guarantee holds.

The worker pool size is capped by the ``KENDALL_WALKS_THREADS``
environment variable.
"""

from __future__ import annotations

import math
import os
from concurrent import futures
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResourceError, SupportError
from .measures import (
    Beta,
    Dirac,
    Distribution,
    FiniteMixture,
    Gamma,
    Pareto,
    RngStream,
    Scaled,
    SymPareto,
    Uniform01,
    philox_key,
    sample_mu_alpha,
)

_U64 = (1 << 64) - 1
_CHUNK = 16384
_MAX_BYTES = 8_000_000_000

__all__ = [
    "WalkConfig",
    "WalkPath",
    "WalkEnsemble",
    "AssociatedWalkEnsemble",
    "SubsampledEnsemble",
    "simulate",
    "simulate_associated",
    "subsample",
    "step_kendall",
    "step_weak_kendall",
    "worker_count",
]


def worker_count() -> int:
    """Worker cap from KENDALL_WALKS_THREADS, else a small machine default."""
    env = os.environ.get("KENDALL_WALKS_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise ParameterError(
                f"KENDALL_WALKS_THREADS must be a positive integer, got {env!r}"
            ) from None
        if cap < 1:
            raise ParameterError(
                f"KENDALL_WALKS_THREADS must be a positive integer, got {env!r}"
            )
        return cap
    return min(os.cpu_count() or 1, 8)


@dataclass(frozen=True)
class WalkConfig:
    """Simulation request: kernel kind, tail index, step law, sizes, seed."""

    convolution: str
    alpha: float
    unit_step: Distribution
    horizon: int
    paths: int
    seed: int

    def __post_init__(self):
        kind = self.convolution.strip().lower().replace("-", "_")
        if kind not in ("kendall", "weak_kendall"):
            raise ParameterError(
                f"convolution must be 'kendall' or 'weak_kendall', got {self.convolution!r}"
            )
        object.__setattr__(self, "convolution", kind)
        if not (self.alpha > 0) or not math.isfinite(self.alpha):
            raise ParameterError(f"alpha must be positive and finite, got {self.alpha!r}")
        if kind == "weak_kendall" and self.alpha > 1.0:
            raise ParameterError(
                f"weak_kendall requires alpha in (0, 1], got {self.alpha!r}"
            )
        if self.horizon < 1 or int(self.horizon) != self.horizon:
            raise ParameterError(f"horizon must be a positive integer, got {self.horizon!r}")
        if self.paths < 1 or int(self.paths) != self.paths:
            raise ParameterError(f"paths must be a positive integer, got {self.paths!r}")
        object.__setattr__(self, "horizon", int(self.horizon))
        object.__setattr__(self, "paths", int(self.paths))
        object.__setattr__(self, "seed", int(self.seed))
        if not isinstance(self.unit_step, Distribution):
            raise ParameterError(f"unit_step must be a Distribution, got {self.unit_step!r}")
        if kind == "kendall" and self.unit_step.support[0] < 0:
            raise SupportError(
                "kendall walks need a step law on [0, inf); "
                f"got support starting at {self.unit_step.support[0]}"
            )


@dataclass(frozen=True, eq=False)
class WalkPath:
    """One trajectory.

    ``states[n]`` is X_n for n = 0..N.  ``thetas[i]``/``switches[i]``
    describe transition i+1 -> i+2: the stored theta is the realized
    multiplier, i.e. the tail draw when the switch fired and 1 (or the
    atom sign, for the weak walk) otherwise, so
    ``states[i+2] = carrier * thetas[i]`` reconstructs the path exactly.
    """

    states: np.ndarray
    steps: np.ndarray
    thetas: np.ndarray
    switches: np.ndarray


@dataclass(frozen=True, eq=False)
class WalkEnsemble:
    """Struct-of-arrays collection of paths; index to get a WalkPath."""

    config: WalkConfig
    states: np.ndarray
    steps: np.ndarray
    thetas: np.ndarray
    switches: np.ndarray

    def __len__(self):
        return self.states.shape[0]

    def __getitem__(self, m) -> WalkPath:
        return WalkPath(
            states=self.states[m],
            steps=self.steps[m],
            thetas=self.thetas[m],
            switches=self.switches[m],
        )

    def __iter__(self):
        return (self[m] for m in range(len(self)))


@dataclass(frozen=True, eq=False)
class AssociatedWalkEnsemble:
    """Partial sums S_n = sum_k dX_k Y_k with independent Y_k multipliers."""

    config: WalkConfig
    steps: np.ndarray
    multipliers: np.ndarray
    partial_sums: np.ndarray

    def __len__(self):
        return self.partial_sums.shape[0]


@dataclass(frozen=True, eq=False)
class SubsampledEnsemble:
    """States of X_{k n} for n = 0..floor(N/k); carries states only."""

    config: WalkConfig
    stride: int
    states: np.ndarray

    def __len__(self):
        return self.states.shape[0]


def _quantile_draws(law: Distribution):
    """Fixed per-sample uniform consumption for inverse-CDF sampling.

    Returns None for laws without a fixed-draw quantile scheme (these fall
    back to the scalar per-path engine).
    """
    if isinstance(law, Dirac):
        return 0
    if isinstance(law, (Pareto, SymPareto, Uniform01, Beta, Gamma)):
        return 1
    if isinstance(law, Scaled):
        return _quantile_draws(law.base)
    if isinstance(law, FiniteMixture):
        subs = [_quantile_draws(component) for _, component in law.components]
        if any(s is None for s in subs):
            return None
        return 1 + max(subs)
    return None


def _block_sample(law: Distribution, u_block: np.ndarray) -> np.ndarray:
    """Map a (m, draws) uniform block to samples of ``law``."""
    m = u_block.shape[0]
    if isinstance(law, Dirac):
        return np.full(m, law.location, dtype=float)
    if isinstance(law, FiniteMixture):
        cum = np.cumsum([w for w, _ in law.components])
        idx = np.searchsorted(cum, u_block[:, 0], side="right")
        idx = np.minimum(idx, len(law.components) - 1)
        out = np.empty(m, dtype=float)
        for j, (_, component) in enumerate(law.components):
            mask = idx == j
            if mask.any():
                out[mask] = _block_sample(component, u_block[mask, 1:])
        return out
    return np.asarray(law.ppf(u_block[:, 0]), dtype=float)


def _path_uniform_block(seed: int, lo: int, hi: int, draws: int) -> np.ndarray:
    """Rows m - lo hold the first ``draws`` uniforms of stream (seed, m).

    Reuses one Philox instance and resets its key/counter per path, which
    produces bit-identical output to constructing RngStream(seed, m) and
    is about five times faster.
    """
    out = np.empty((hi - lo, draws), dtype=float)
    bg = np.random.Philox(key=philox_key(seed, lo))
    gen = np.random.Generator(bg)
    state = bg.state
    key_words = state["state"]["key"]
    counter = state["state"]["counter"]
    for i in range(hi - lo):
        if i:
            key_words[0] = (lo + i) & _U64
            counter[:] = 0
            state["buffer_pos"] = 4
            bg.state = state
        out[i] = gen.random(draws)
    return out


def _kendall_transition(alpha, x, dx, u_q, u_t):
    v = np.maximum(x, dx)
    safe = np.where(v > 0, v, 1.0)
    z = np.minimum(x, dx) / safe
    q = u_q < z**alpha
    theta = (1.0 - u_t) ** (-1.0 / (2.0 * alpha))
    mult = np.where(q, theta, 1.0)
    nxt = np.where(v > 0, v * mult, 0.0)
    return nxt, mult, q


def _weak_transition(alpha, x, dx, u_q, u_t, u_r):
    ax, adx = np.abs(x), np.abs(dx)
    v = np.maximum(ax, adx)
    safe = np.where(v > 0, v, 1.0)
    z = np.minimum(ax, adx) / safe
    sgn = np.where(ax >= adx, np.sign(x), np.sign(dx))
    q = u_q < z**alpha
    inv = -1.0 / (2.0 * alpha)
    theta = np.where(
        u_t < 0.5,
        -(np.maximum(2.0 * u_t, 1e-300) ** inv),
        np.maximum(2.0 * (1.0 - u_t), 1e-300) ** inv,
    )
    r = np.where(u_r < 0.5, -1.0, 1.0)
    mult = np.where(q, theta, r)
    nxt = np.where(v > 0, v * sgn * mult, 0.0)
    return nxt, mult, q


def _simulate_chunk_quantile(cfg: WalkConfig, kdraws: int, lo: int, hi: int, out):
    states, steps, thetas, switches = out
    n_steps = cfg.horizon
    weak = cfg.convolution == "weak_kendall"
    per_tr = kdraws + (3 if weak else 2)
    total = kdraws + (n_steps - 1) * per_tr
    u = _path_uniform_block(cfg.seed, lo, hi, total)
    sl = slice(lo, hi)
    states[sl, 0] = 0.0
    dx = _block_sample(cfg.unit_step, u[:, :kdraws])
    steps[sl, 0] = dx
    states[sl, 1] = dx
    col = kdraws
    x = dx
    for i in range(1, n_steps):
        dx = _block_sample(cfg.unit_step, u[:, col : col + kdraws])
        col += kdraws
        u_q = u[:, col]
        u_t = u[:, col + 1]
        if weak:
            u_r = u[:, col + 2]
            col += 3
            x, mult, q = _weak_transition(cfg.alpha, x, dx, u_q, u_t, u_r)
        else:
            col += 2
            x, mult, q = _kendall_transition(cfg.alpha, x, dx, u_q, u_t)
        steps[sl, i] = dx
        states[sl, i + 1] = x
        thetas[sl, i - 1] = mult
        switches[sl, i - 1] = q


def _simulate_chunk_scalar(cfg: WalkConfig, lo: int, hi: int, out):
    states, steps, thetas, switches = out
    n_steps = cfg.horizon
    weak = cfg.convolution == "weak_kendall"
    for m in range(lo, hi):
        rng = RngStream(cfg.seed, m)
        gen = rng.generator
        states[m, 0] = 0.0
        x = float(cfg.unit_step.sample(rng))
        steps[m, 0] = x
        states[m, 1] = x
        for i in range(1, n_steps):
            dx = float(cfg.unit_step.sample(rng))
            u_q = gen.random()
            u_t = gen.random()
            if weak:
                u_r = gen.random()
                x, mult, q = _weak_transition(cfg.alpha, x, dx, u_q, u_t, u_r)
            else:
                x, mult, q = _kendall_transition(cfg.alpha, x, dx, u_q, u_t)
            x, mult, q = float(x), float(mult), bool(q)
            steps[m, i] = dx
            states[m, i + 1] = x
            thetas[m, i - 1] = mult
            switches[m, i - 1] = q


def _check_memory(paths: int, horizon: int):
    est = paths * (4 * horizon + 2) * 8
    if est > _MAX_BYTES:
        raise ResourceError(
            f"request needs ~{est / 1e9:.1f} GB for {paths} paths x horizon {horizon}; "
            f"limit is {_MAX_BYTES / 1e9:.0f} GB"
        )


def _run_chunks(n_items: int, task, chunk=_CHUNK):
    ranges = [(lo, min(lo + chunk, n_items)) for lo in range(0, n_items, chunk)]
    workers = min(worker_count(), len(ranges))
    if workers <= 1:
        for lo, hi in ranges:
            task(lo, hi)
    else:
        with futures.ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda r: task(*r), ranges))


def simulate(config: WalkConfig) -> WalkEnsemble:
    """Simulate ``config.paths`` independent trajectories.

    Path m draws from stream (config.seed, m); results are bit-identical
    regardless of worker count.
    """
    _check_memory(config.paths, config.horizon)
    m, n = config.paths, config.horizon
    states = np.empty((m, n + 1), dtype=float)
    steps = np.empty((m, n), dtype=float)
    thetas = np.empty((m, max(n - 1, 0)), dtype=float)
    switches = np.zeros((m, max(n - 1, 0)), dtype=bool)
    out = (states, steps, thetas, switches)
    kdraws = _quantile_draws(config.unit_step)
    if kdraws is None:
        task = lambda lo, hi: _simulate_chunk_scalar(config, lo, hi, out)
    else:
        task = lambda lo, hi: _simulate_chunk_quantile(config, kdraws, lo, hi, out)
    _run_chunks(m, task)
    return WalkEnsemble(config=config, states=states, steps=steps,
                        thetas=thetas, switches=switches)


def simulate_associated(config: WalkConfig) -> AssociatedWalkEnsemble:
    """Partial sums of step * multiplier with multipliers drawn from the
    symmetric stable-like law with characteristic function (1-|t|^alpha)_+.

    Requires a weak_kendall config (the multiplier law needs alpha <= 1).
    Block b of 16384 paths draws from stream (seed, b): steps first, then
    multipliers.
    """
    if config.convolution != "weak_kendall":
        raise ParameterError("the associated walk is defined for weak_kendall configs")
    _check_memory(config.paths, config.horizon)
    m, n = config.paths, config.horizon
    steps = np.empty((m, n), dtype=float)
    multipliers = np.empty((m, n), dtype=float)

    def task(lo, hi):
        rng = RngStream(config.seed, lo // _CHUNK)
        cnt = (hi - lo) * n
        steps[lo:hi] = np.asarray(config.unit_step.sample(rng, cnt)).reshape(hi - lo, n)
        multipliers[lo:hi] = sample_mu_alpha(config.alpha, rng, cnt).reshape(hi - lo, n)

    _run_chunks(m, task)
    partial = np.zeros((m, n + 1), dtype=float)
    np.cumsum(steps * multipliers, axis=1, out=partial[:, 1:])
    return AssociatedWalkEnsemble(config=config, steps=steps,
                                  multipliers=multipliers, partial_sums=partial)


def subsample(ensemble: WalkEnsemble, k: int) -> SubsampledEnsemble:
    """States observed every k steps: Z_n = X_{k n}, n = 0..floor(N/k)."""
    if k < 1 or int(k) != k:
        raise ParameterError(f"stride must be a positive integer, got {k!r}")
    k = int(k)
    if k > ensemble.config.horizon:
        raise ParameterError(
            f"stride {k} exceeds horizon {ensemble.config.horizon}; nothing to observe"
        )
    return SubsampledEnsemble(
        config=ensemble.config, stride=k, states=ensemble.states[:, ::k].copy()
    )


def step_kendall(x: float, dx: float, alpha: float, rng: RngStream):
    """One kernel transition from state x with step dx.

    Returns (next state, stored theta, switch).  The stored theta is the
    Pareto draw when the switch fired, else 1.  Draw order: switch
    uniform, tail uniform (both always consumed).
    """
    if x < 0 or dx < 0:
        raise SupportError(f"kendall step needs x, dx >= 0, got ({x!r}, {dx!r})")
    if not (alpha > 0):
        raise ParameterError(f"alpha must be positive, got {alpha!r}")
    gen = rng.generator
    u_q, u_t = gen.random(), gen.random()
    nxt, mult, q = _kendall_transition(alpha, np.float64(x), np.float64(dx), u_q, u_t)
    return float(nxt), float(mult), bool(q)


def step_weak_kendall(x: float, dx: float, alpha: float, rng: RngStream):
    """One weak-kernel transition; returns (next state, stored multiplier, switch).

    The stored multiplier is the symmetric tail draw when the switch
    fired, else the +-1 atom sign.  Draw order: switch, tail, sign.
    """
    if not (0 < alpha <= 1):
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha!r}")
    gen = rng.generator
    u_q, u_t, u_r = gen.random(), gen.random(), gen.random()
    nxt, mult, q = _weak_transition(alpha, np.float64(x), np.float64(dx), u_q, u_t, u_r)
    return float(nxt), float(mult), bool(q)
