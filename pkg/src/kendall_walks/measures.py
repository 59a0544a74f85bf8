"""Probability laws used throughout the package.

Every law exposes the same small interface: ``sample``, ``cdf`` (right
continuous), ``pdf`` (density of the absolutely continuous part),
``atoms``, ``truncated_alpha_moment`` and a ``support`` descriptor.  Laws
are frozen dataclasses, so structural equality works and they can be used
as dictionary keys.

Random draws go through :class:`RngStream`, a thin wrapper over numpy's
counter-based Philox generator: distinct ``(seed, stream_id)`` pairs give
independent streams, identical pairs reproduce draws bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ParameterError, SupportError

_U64 = (1 << 64) - 1

__all__ = [
    "RngStream",
    "Distribution",
    "Dirac",
    "Pareto",
    "SymPareto",
    "Beta",
    "Gamma",
    "Uniform01",
    "MuAlpha",
    "FiniteMixture",
    "Scaled",
    "symmetrized_atom",
    "scale_law",
    "sample_mu_alpha",
    "mu1_cdf",
    "mu1_pdf",
]


def philox_key(seed: int, stream_id: int) -> int:
    """Pack (seed, stream_id) into a 128-bit Philox key.

    The packing is injective on 64-bit values, so distinct pairs always
    select distinct (hence independent) Philox streams.
    """
    return ((int(seed) & _U64) << 64) | (int(stream_id) & _U64)


class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``."""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.generator = np.random.Generator(
            np.random.Philox(key=philox_key(seed, stream_id))
        )

    def substream(self, stream_id: int) -> "RngStream":
        """A fresh stream with the same seed and a different id."""
        return RngStream(self.seed, stream_id)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


class Distribution:
    """Base interface; concrete laws are the dataclasses below."""

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def sample(self, rng: RngStream, size=None):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def atoms(self) -> tuple[tuple[float, float], ...]:
        """(location, mass) pairs of the discrete part."""
        return ()

    def atom_mass(self, x) -> float:
        m = 0.0
        for loc, w in self.atoms():
            if loc == x:
                m += w
        return m

    def cdf_left(self, x):
        """Left limit of the CDF at x."""
        arr, scalar = _as_array(x)
        out = np.asarray(self.cdf(arr), dtype=float).copy()
        for loc, w in self.atoms():
            out = np.where(arr == loc, out - w, out)
        return _ret(out, scalar)

    def truncated_alpha_moment(self, x, alpha: float):
        """``int_{[0, x]} s^alpha nu(ds)`` for laws carried by [0, inf)."""
        raise NotImplementedError

    def abs_law(self) -> "Distribution":
        """Law of |X|."""
        lo, _ = self.support
        if lo >= 0.0:
            return self
        raise SupportError(f"abs_law not available for {self!r}")

    def _require_half_line(self):
        lo, _ = self.support
        if lo < 0.0:
            raise SupportError(
                f"law {self!r} is not carried by [0, inf); "
                "apply abs_law() or pass a half-line law"
            )


def _check_positive(name, value):
    if not (value > 0) or not math.isfinite(value):
        raise ParameterError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class Dirac(Distribution):
    """Unit mass at ``location``."""

    location: float

    def __post_init__(self):
        if not math.isfinite(self.location):
            raise ParameterError(f"location must be finite, got {self.location!r}")

    @property
    def support(self):
        return (self.location, self.location)

    def sample(self, rng, size=None):
        if size is None:
            return self.location
        return np.full(size, self.location, dtype=float)

    def cdf(self, x):
        arr, scalar = _as_array(x)
        return _ret((arr >= self.location).astype(float), scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        return _ret(np.zeros_like(arr), scalar)

    def atoms(self):
        return ((self.location, 1.0),)

    def ppf(self, u):
        arr, scalar = _as_array(u)
        return _ret(np.full_like(arr, self.location), scalar)

    def truncated_alpha_moment(self, x, alpha):
        if self.location < 0:
            self._require_half_line()
        arr, scalar = _as_array(x)
        val = self.location**alpha
        return _ret(np.where(arr >= self.location, val, 0.0), scalar)

    def abs_law(self):
        return Dirac(abs(self.location))


@dataclass(frozen=True)
class Pareto(Distribution):
    """Power law on ``[scale, inf)`` with ``P(X > x) = (x/scale)^(-order)``."""

    order: float
    scale: float = 1.0

    def __post_init__(self):
        _check_positive("order", self.order)
        _check_positive("scale", self.scale)

    @property
    def support(self):
        return (self.scale, math.inf)

    def ppf(self, u):
        arr, scalar = _as_array(u)
        return _ret(self.scale * (1.0 - arr) ** (-1.0 / self.order), scalar)

    def sample(self, rng, size=None):
        u = rng.generator.random(size)
        return self.ppf(u) if size is not None else float(self.ppf(u))

    def cdf(self, x):
        arr, scalar = _as_array(x)
        y = np.maximum(arr / self.scale, 1.0)
        return _ret(-np.expm1(-self.order * np.log(y)), scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        out = np.where(
            arr >= self.scale,
            (self.order / self.scale) * (arr / self.scale) ** (-self.order - 1.0),
            0.0,
        )
        return _ret(out, scalar)

    def truncated_alpha_moment(self, x, alpha):
        arr, scalar = _as_array(x)
        s, c = self.order, self.scale
        y = np.maximum(arr / c, 1.0)
        if alpha == s:
            val = s * np.log(y)
        else:
            val = s * (y ** (alpha - s) - 1.0) / (alpha - s)
        return _ret(c**alpha * val, scalar)


@dataclass(frozen=True)
class SymPareto(Distribution):
    """Symmetric power law: density ``(order/2) |x/scale|^(-order-1)/scale`` on |x| > scale."""

    order: float
    scale: float = 1.0

    def __post_init__(self):
        _check_positive("order", self.order)
        _check_positive("scale", self.scale)

    @property
    def support(self):
        return (-math.inf, math.inf)

    def ppf(self, u):
        arr, scalar = _as_array(u)
        lower = -np.maximum(2.0 * arr, 1e-300) ** (-1.0 / self.order)
        upper = np.maximum(2.0 * (1.0 - arr), 1e-300) ** (-1.0 / self.order)
        return _ret(self.scale * np.where(arr < 0.5, lower, upper), scalar)

    def sample(self, rng, size=None):
        u = rng.generator.random(size)
        return self.ppf(u) if size is not None else float(self.ppf(u))

    def cdf(self, x):
        arr, scalar = _as_array(x)
        y = np.abs(arr) / self.scale
        tail = 0.5 * np.where(y >= 1.0, y**-self.order, 1.0)
        out = np.where(arr <= 0, tail, 1.0 - tail)
        return _ret(out, scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        y = np.abs(arr) / self.scale
        out = np.where(
            y >= 1.0, (self.order / (2.0 * self.scale)) * y ** (-self.order - 1.0), 0.0
        )
        return _ret(out, scalar)

    def truncated_alpha_moment(self, x, alpha):
        self._require_half_line()
        raise AssertionError("unreachable")

    def abs_law(self):
        return Pareto(self.order, self.scale)


@dataclass(frozen=True)
class Beta(Distribution):
    """Beta(a, b) on (0, 1)."""

    a: float
    b: float

    def __post_init__(self):
        _check_positive("a", self.a)
        _check_positive("b", self.b)

    @property
    def support(self):
        return (0.0, 1.0)

    def ppf(self, u):
        arr, scalar = _as_array(u)
        return _ret(special.betaincinv(self.a, self.b, arr), scalar)

    def sample(self, rng, size=None):
        out = rng.generator.beta(self.a, self.b, size=size)
        return float(out) if size is None else out

    def cdf(self, x):
        arr, scalar = _as_array(x)
        return _ret(special.betainc(self.a, self.b, np.clip(arr, 0.0, 1.0)), scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        inside = (arr > 0) & (arr < 1)
        z = np.where(inside, arr, 0.5)
        logpdf = (
            (self.a - 1.0) * np.log(z)
            + (self.b - 1.0) * np.log1p(-z)
            - special.betaln(self.a, self.b)
        )
        return _ret(np.where(inside, np.exp(logpdf), 0.0), scalar)

    def truncated_alpha_moment(self, x, alpha):
        arr, scalar = _as_array(x)
        coeff = math.exp(
            special.gammaln(self.a + alpha)
            + special.gammaln(self.a + self.b)
            - special.gammaln(self.a)
            - special.gammaln(self.a + self.b + alpha)
        )
        val = coeff * special.betainc(self.a + alpha, self.b, np.clip(arr, 0.0, 1.0))
        return _ret(val, scalar)


@dataclass(frozen=True)
class Gamma(Distribution):
    """Gamma law with shape ``a`` and rate ``b`` (density ~ x^(a-1) e^(-b x))."""

    shape: float
    rate: float

    def __post_init__(self):
        _check_positive("shape", self.shape)
        _check_positive("rate", self.rate)

    @property
    def support(self):
        return (0.0, math.inf)

    def ppf(self, u):
        arr, scalar = _as_array(u)
        return _ret(special.gammaincinv(self.shape, arr) / self.rate, scalar)

    def sample(self, rng, size=None):
        out = rng.generator.gamma(self.shape, 1.0 / self.rate, size=size)
        return float(out) if size is None else out

    def cdf(self, x):
        arr, scalar = _as_array(x)
        return _ret(special.gammainc(self.shape, self.rate * np.maximum(arr, 0.0)), scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        pos = arr > 0
        z = np.where(pos, arr, 1.0)
        logpdf = (
            self.shape * math.log(self.rate)
            + (self.shape - 1.0) * np.log(z)
            - self.rate * z
            - special.gammaln(self.shape)
        )
        return _ret(np.where(pos, np.exp(logpdf), 0.0), scalar)

    def truncated_alpha_moment(self, x, alpha):
        arr, scalar = _as_array(x)
        coeff = math.exp(
            special.gammaln(self.shape + alpha) - special.gammaln(self.shape)
        ) / self.rate**alpha
        val = coeff * special.gammainc(self.shape + alpha, self.rate * np.maximum(arr, 0.0))
        return _ret(val, scalar)


@dataclass(frozen=True)
class Uniform01(Distribution):
    """Uniform law on (0, 1)."""

    @property
    def support(self):
        return (0.0, 1.0)

    def ppf(self, u):
        arr, scalar = _as_array(u)
        return _ret(arr.copy(), scalar)

    def sample(self, rng, size=None):
        out = rng.generator.random(size)
        return float(out) if size is None else out

    def cdf(self, x):
        arr, scalar = _as_array(x)
        return _ret(np.clip(arr, 0.0, 1.0), scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        return _ret(((arr > 0) & (arr < 1)).astype(float), scalar)

    def truncated_alpha_moment(self, x, alpha):
        arr, scalar = _as_array(x)
        return _ret(np.clip(arr, 0.0, 1.0) ** (alpha + 1.0) / (alpha + 1.0), scalar)


def mu1_pdf(x):
    """Density ``(1 - cos x) / (pi x^2)``, continuous at 0."""
    arr, scalar = _as_array(x)
    small = np.abs(arr) < 1e-6
    z = np.where(small, 1.0, arr)
    out = np.where(small, 1.0 / (2.0 * np.pi), (1.0 - np.cos(z)) / (np.pi * z * z))
    return _ret(out, scalar)


def mu1_cdf(x):
    """CDF of the law with characteristic function ``(1 - |t|)_+``."""
    arr, scalar = _as_array(x)
    small = np.abs(arr) < 1e-9
    z = np.where(small, 1.0, arr)
    si, _ = special.sici(z)
    out = np.where(small, 0.5, 0.5 + (si - (1.0 - np.cos(z)) / z) / np.pi)
    return _ret(np.clip(out, 0.0, 1.0), scalar)


def _mu1_proposals(gen, k):
    """One rejection round: k envelope draws and their accept mask.

    Envelope: uniform on [-2, 2] with weight 1/2, density ~ x^(-2) on
    |x| > 2 with weight 1/2; overall acceptance rate is pi/4.
    """
    u_branch = gen.random(k)
    u_pos = gen.random(k)
    u_acc = gen.random(k)
    core = u_branch < 0.5
    sign = np.where(u_branch < 0.75, 1.0, -1.0)
    x_core = -2.0 + 4.0 * u_pos
    x_tail = sign * 2.0 / (1.0 - u_pos)
    x = np.where(core, x_core, x_tail)
    ratio_core = 2.0 * (1.0 - np.cos(x_core)) / np.where(np.abs(x_core) < 1e-9, 1.0, x_core) ** 2
    ratio_core = np.where(np.abs(x_core) < 1e-9, 1.0, ratio_core)
    ratio_tail = 0.5 * (1.0 - np.cos(x_tail))
    accept = np.where(core, u_acc < ratio_core, u_acc < ratio_tail)
    return x, accept


def _sample_mu1(gen, size):
    out = np.empty(size, dtype=float)
    have = 0
    while have < size:
        need = size - have
        k = int(need / 0.75) + 8
        x, acc = _mu1_proposals(gen, k)
        good = x[acc]
        take = min(need, good.size)
        out[have : have + take] = good[:take]
        have += take
    return out


def sample_mu_alpha(alpha: float, rng: RngStream, size=None):
    """Draw from the law with characteristic function ``(1 - |t|^alpha)_+``.

    Uses the factorization through the alpha = 1 law: X = Y * W with
    Y ~ mu_1 and W equal to 1 with probability alpha, otherwise a
    Pareto(alpha) draw.
    """
    if not (0.0 < alpha <= 1.0):
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha!r}")
    scalar = size is None
    n = 1 if scalar else int(size)
    gen = rng.generator
    y = _sample_mu1(gen, n)
    if alpha < 1.0:
        u_comp = gen.random(n)
        u_par = gen.random(n)
        w = np.where(u_comp < alpha, 1.0, (1.0 - u_par) ** (-1.0 / alpha))
        y = y * w
    return float(y[0]) if scalar else y


@dataclass(frozen=True)
class MuAlpha(Distribution):
    """Symmetric law with characteristic function ``(1 - |t|^alpha)_+``, 0 < alpha <= 1."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0) or not math.isfinite(self.alpha):
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha!r}")

    @property
    def support(self):
        return (-math.inf, math.inf)

    def sample(self, rng, size=None):
        return sample_mu_alpha(self.alpha, rng, size)

    def cdf(self, x):
        # Gil-Pelaez on the compactly supported characteristic function:
        # F(v) = 1/2 + (Si(v) - int_0^1 sin(t v) t^(a-1) dt) / pi
        arr, scalar = _as_array(x)
        if self.alpha == 1.0:
            return _ret(mu1_cdf(arr), scalar)
        a = self.alpha

        def one(v):
            if v == 0.0:
                return 0.5
            j, _ = integrate.quad(
                lambda t: t ** (a - 1.0) if t > 0.0 else 0.0, 0.0, 1.0,
                weight="sin", wvar=v, epsabs=1e-12, limit=400,
            )
            return 0.5 + (special.sici(v)[0] - j) / np.pi

        out = np.vectorize(one)(arr)
        return _ret(np.clip(out, 0.0, 1.0), scalar)

    def pdf(self, x):
        # f(v) = (sin(v) / v - int_0^1 cos(t v) t^a dt) / pi
        arr, scalar = _as_array(x)
        if self.alpha == 1.0:
            return _ret(mu1_pdf(arr), scalar)
        a = self.alpha

        def one(v):
            k, _ = integrate.quad(
                lambda t: t**a, 0.0, 1.0,
                weight="cos", wvar=v, epsabs=1e-13, limit=400,
            )
            lead = 1.0 if v == 0.0 else np.sin(v) / v
            return (lead - k) / np.pi

        out = np.vectorize(one)(arr)
        return _ret(np.maximum(out, 0.0), scalar)

    def truncated_alpha_moment(self, x, alpha):
        self._require_half_line()
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class FiniteMixture(Distribution):
    """Convex combination of finitely many laws."""

    components: tuple[tuple[float, Distribution], ...]

    def __post_init__(self):
        if not self.components:
            raise ParameterError("mixture needs at least one component")
        total = 0.0
        for w, law in self.components:
            if not (w > 0) or not math.isfinite(w):
                raise ParameterError(f"mixture weight must be positive, got {w!r}")
            if not isinstance(law, Distribution):
                raise ParameterError(f"mixture component {law!r} is not a Distribution")
            total += w
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"mixture weights sum to {total!r}, expected 1")

    @property
    def support(self):
        los, his = zip(*(law.support for _, law in self.components))
        return (min(los), max(his))

    def _weights(self):
        return np.array([w for w, _ in self.components])

    def sample(self, rng, size=None):
        scalar = size is None
        n = 1 if scalar else int(size)
        gen = rng.generator
        cum = np.cumsum(self._weights())
        idx = np.searchsorted(cum, gen.random(n), side="right")
        idx = np.minimum(idx, len(self.components) - 1)
        out = np.empty(n, dtype=float)
        for j, (_, law) in enumerate(self.components):
            mask = idx == j
            cnt = int(mask.sum())
            if cnt:
                out[mask] = law.sample(rng, cnt)
        return float(out[0]) if scalar else out

    def cdf(self, x):
        arr, scalar = _as_array(x)
        out = sum(w * np.asarray(law.cdf(arr)) for w, law in self.components)
        return _ret(out, scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        out = sum(w * np.asarray(law.pdf(arr)) for w, law in self.components)
        return _ret(out, scalar)

    def atoms(self):
        merged: dict[float, float] = {}
        for w, law in self.components:
            for loc, m in law.atoms():
                merged[loc] = merged.get(loc, 0.0) + w * m
        return tuple(sorted(merged.items()))

    def truncated_alpha_moment(self, x, alpha):
        self._require_half_line()
        arr, scalar = _as_array(x)
        out = sum(
            w * np.asarray(law.truncated_alpha_moment(arr, alpha))
            for w, law in self.components
        )
        return _ret(out, scalar)

    def abs_law(self):
        return FiniteMixture(tuple((w, law.abs_law()) for w, law in self.components))


@dataclass(frozen=True)
class Scaled(Distribution):
    """Pushforward of ``base`` under multiplication by ``factor`` (nonzero)."""

    base: Distribution
    factor: float

    def __post_init__(self):
        if self.factor == 0 or not math.isfinite(self.factor):
            raise ParameterError(f"factor must be nonzero and finite, got {self.factor!r}")

    @property
    def support(self):
        lo, hi = self.base.support
        a, b = lo * self.factor, hi * self.factor
        return (min(a, b), max(a, b))

    def sample(self, rng, size=None):
        out = self.base.sample(rng, size)
        return out * self.factor

    def cdf(self, x):
        arr, scalar = _as_array(x)
        if self.factor > 0:
            out = np.asarray(self.base.cdf(arr / self.factor))
        else:
            out = 1.0 - np.asarray(self.base.cdf_left(arr / self.factor))
        return _ret(out, scalar)

    def pdf(self, x):
        arr, scalar = _as_array(x)
        c = abs(self.factor)
        return _ret(np.asarray(self.base.pdf(arr / self.factor)) / c, scalar)

    def atoms(self):
        return tuple(
            sorted((loc * self.factor, w) for loc, w in self.base.atoms())
        )

    def ppf(self, u):
        arr, scalar = _as_array(u)
        if self.factor > 0:
            out = np.asarray(self.base.ppf(arr)) * self.factor
        else:
            out = np.asarray(self.base.ppf(1.0 - arr)) * self.factor
        return _ret(out, scalar)

    def truncated_alpha_moment(self, x, alpha):
        self._require_half_line()
        arr, scalar = _as_array(x)
        c = self.factor
        out = c**alpha * np.asarray(self.base.truncated_alpha_moment(arr / c, alpha))
        return _ret(out, scalar)

    def abs_law(self):
        return Scaled(self.base.abs_law(), abs(self.factor))


def symmetrized_atom(a: float) -> Distribution:
    """The law (delta_a + delta_{-a}) / 2; collapses to delta_0 at a = 0."""
    if a == 0:
        return Dirac(0.0)
    a = abs(a)
    return FiniteMixture(((0.5, Dirac(-a)), (0.5, Dirac(a))))


def scale_law(law: Distribution, c: float) -> Distribution:
    """Pushforward of ``law`` under multiplication by ``c``; c = 0 gives delta_0."""
    if not math.isfinite(c):
        raise ParameterError(f"scale factor must be finite, got {c!r}")
    if c == 0:
        return Dirac(0.0)
    if isinstance(law, Dirac):
        return Dirac(law.location * c)
    if isinstance(law, Pareto) and c > 0:
        return Pareto(law.order, law.scale * c)
    if isinstance(law, SymPareto):
        return SymPareto(law.order, law.scale * abs(c))
    if isinstance(law, FiniteMixture):
        return FiniteMixture(tuple((w, scale_law(d, c)) for w, d in law.components))
    if isinstance(law, Scaled):
        return scale_law(law.base, law.factor * c)
    if isinstance(law, MuAlpha) and c < 0:
        return Scaled(law, abs(c))
    return Scaled(law, c)
