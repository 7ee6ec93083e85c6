"""Closed-form squeezing expressions for one-axis-twisted ensembles.

Everything is driven by the pair coefficients

    A = 1 - cos^(N-2)(2 alpha),   B = 4 sin(alpha) cos^(N-2)(alpha),

the per-pair transverse correlators of the twisted state. The pure-state
variance-form parameter is

    xi^2 = [1 - (N-1)(sqrt(A^2+B^2) - A)/4] / cos^(2N-2)(alpha).

Decohered expressions come in two families, selected by ``Form``:

``Form.REFERENCE``
    The widely quoted closed forms: a shared numerator zeta(kappa) over
    channel-specific denominators. zeta evaluates the transverse variance
    at the squeezing direction that is optimal for the undamped state,
    and the denominators keep the undamped mean-spin normalization for
    dephasing and adopt a linearized one for damping. These are the
    expressions behind the standard published curves and death times.

``Form.EXACT``
    Exact expectation values of the per-qubit channels: every single- and
    two-qubit correlator is contracted by the channel's Heisenberg
    factors and the definitions are evaluated from the resulting
    collective moments (re-minimizing over directions). This family
    agrees with the explicit density-matrix computation to machine
    precision and is what the verification suite checks against.

Both families coincide at kappa = 1 and are evaluable for any |kappa| <= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import IO, Callable, Mapping

import numpy as np

from ._format import write_csv
from .errors import DegenerateDenominator, InvalidKappa, NTooSmall
from .kappa import KappaModel, kappa_markovian
from .model import ChannelKind, Definition, EnsembleConfig, SqueezingValue, TimeGrid
from .moments import CollectiveMoments, xi2_from_moments, xi2_prime_from_moments

__all__ = [
    "Form",
    "OatCoefficients",
    "SpinDirections",
    "SqueezingCurve",
    "oat_coefficients",
    "xi2_oat",
    "xi2_prime_oat",
    "xi2_dephased",
    "xi2_depolarized",
    "xi2_damped",
    "xi2_prime_dephased",
    "xi2_prime_depolarized",
    "xi2_prime_damped",
    "decohered_moments",
    "spin_directions",
    "optimal_alpha",
    "squeezing_curve",
    "curve_evaluator",
    "channel_xi2",
]


class Form(enum.Enum):
    REFERENCE = "reference"
    EXACT = "exact"


# exponents above this are evaluated in log space to dodge underflow in
# intermediate powers at large N
_LOG_POWER_ABOVE = 64


def _signed_power(base: float, expo: int) -> float:
    if expo <= _LOG_POWER_ABOVE:
        return float(base) ** expo
    a = abs(base)
    if a == 0.0:
        return 0.0
    val = math.exp(expo * math.log(a))
    return -val if (base < 0.0 and expo % 2) else val


def _cos_pow(alpha: float, expo: int) -> float:
    return _signed_power(math.cos(alpha), expo)


@dataclass(frozen=True)
class OatCoefficients:
    """Pair coefficients A, B of the twisted state, plus sqrt(A^2+B^2)."""

    a_coef: float
    b_coef: float
    hypot: float


def oat_coefficients(n: int, alpha: float) -> OatCoefficients:
    """A = 1 - cos^(N-2)(2a), B = 4 sin(a) cos^(N-2)(a); overflow-safe."""
    if n < 2:
        raise NTooSmall(f"need at least 2 particles, got {n}")
    a_coef = 1.0 - _signed_power(math.cos(2.0 * alpha), n - 2)
    b_coef = 4.0 * math.sin(alpha) * _cos_pow(alpha, n - 2)
    return OatCoefficients(a_coef, b_coef, math.hypot(a_coef, b_coef))


# ---------------------------------------------------------------------------
# pure-state forms


def _xi2_pure_raw(n: int, alpha: float) -> float:
    co = oat_coefficients(n, alpha)
    den = _cos_pow(alpha, 2 * n - 2)
    if den == 0.0:
        return math.inf
    return (1.0 - (n - 1) * (co.hypot - co.a_coef) / 4.0) / den


def _ab_terms(n: int, alpha: float) -> tuple[float, float]:
    """The two eigenvalue-form candidates: transverse-plane minimum (a)
    and the mean-spin-axis entry (b)."""
    co = oat_coefficients(n, alpha)
    c2 = 1.0 - co.a_coef
    a = 1.0 - (n - 1) * (co.hypot - co.a_coef) / 4.0
    b = 1.0 + (n - 1) * ((1.0 + c2) / 2.0 - _cos_pow(alpha, 2 * n - 2))
    return a, b


def _xi2_prime_pure_raw(n: int, alpha: float, form: Form) -> float:
    a, b = _ab_terms(n, alpha)
    num = min(a, b)
    if form is Form.EXACT:
        # any exchange-symmetric pure state has <J^2> = (N/2)(N/2+1), so
        # the normalization is exactly 1
        return num
    c2 = _signed_power(math.cos(2.0 * alpha), n - 2)
    return num / ((1.0 - 1.0 / n) * (1.0 + c2) / 2.0 + 1.0 / n)


def xi2_oat(n: int, alpha: float) -> SqueezingValue:
    """Variance-form parameter of the pure twisted state (exact)."""
    return SqueezingValue(_xi2_pure_raw(n, alpha), Definition.XI)


def xi2_prime_oat(n: int, alpha: float, form: Form = Form.REFERENCE) -> SqueezingValue:
    """Eigenvalue-form parameter of the pure twisted state.

    The REFERENCE denominator (1-1/N)(1+cos^(N-2)2a)/2 + 1/N is the
    commonly quoted one; the EXACT normalization is 1 because symmetric
    pure states satisfy <J^2> = (N/2)(N/2+1). The two coincide for N = 2.
    """
    if n < 2:
        raise NTooSmall(f"need at least 2 particles, got {n}")
    return SqueezingValue(_xi2_prime_pure_raw(n, alpha, form), Definition.XI_PRIME)


# ---------------------------------------------------------------------------
# reference decohered forms


def _zeta(n: int, alpha: float, kappa: float) -> float:
    """Shared numerator of the reference family.

    Transverse variance at the kappa = 1 optimal squeezing angle; the
    A = B = 0 point (alpha = 0) is the continuous limit zeta = 1.
    """
    co = oat_coefficients(n, alpha)
    if co.hypot == 0.0:
        return 1.0
    quad = co.a_coef - co.a_coef**2 / co.hypot
    lin = co.b_coef**2 / co.hypot
    return 1.0 + 0.25 * kappa * kappa * (n - 1) * quad - 0.25 * kappa * (n - 1) * lin


def _check_kappa(kappa: float) -> float:
    if not (abs(kappa) <= 1.0):
        raise InvalidKappa(f"|kappa| must be <= 1, got {kappa}")
    return float(kappa)


def _xi2_reference_raw(n: int, alpha: float, kappa: float, kind: ChannelKind) -> float:
    z = _zeta(n, alpha, kappa)
    cpow = _cos_pow(alpha, 2 * n - 2)
    if kind is ChannelKind.DEPHASING:
        den = cpow
    elif kind is ChannelKind.DEPOLARIZING:
        den = kappa * kappa * cpow
    else:
        root = kappa * _cos_pow(alpha, n - 1) + (1.0 - kappa)
        den = root * root
    if den == 0.0:
        return math.inf
    return z / den


def _xi2_prime_reference_raw(n: int, alpha: float, kappa: float, kind: ChannelKind) -> float:
    z = _zeta(n, alpha, kappa)
    k2 = kappa * kappa
    c2 = _signed_power(math.cos(2.0 * alpha), n - 2)
    if kind is ChannelKind.DEPHASING:
        den = (1.0 - 1.0 / n) * (k2 + (1.0 - k2) * (1.0 + c2) / 2.0) + 1.0 / n
    elif kind is ChannelKind.DEPOLARIZING:
        den = (1.0 - 1.0 / n) * k2 + 1.0 / n
    else:
        bracket = 1.0 - _cos_pow(alpha, n - 1) + (1.0 + c2) / 2.0
        den = 1.0 + (1.0 - 1.0 / n) * kappa * (1.0 - kappa) * bracket
        if den <= 0.0:
            raise DegenerateDenominator(
                f"damping eigenvalue-form denominator {den} is not positive"
            )
    return z / den


# ---------------------------------------------------------------------------
# exact decohered forms via closed-form moments


def _contractions(kind: ChannelKind, kappa: float) -> tuple[float, float, float]:
    """Heisenberg factors (r_perp, r_z, m) of one channel application:
    sigma_x/y -> r_perp sigma_x/y, sigma_z -> r_z sigma_z + m."""
    k2 = kappa * kappa
    if kind is ChannelKind.DEPHASING:
        return k2, 1.0, 0.0
    if kind is ChannelKind.DEPOLARIZING:
        return k2, k2, 0.0
    return kappa, k2, k2 - 1.0


def decohered_moments(
    n: int, alpha: float, kind: ChannelKind, kappa: float
) -> CollectiveMoments:
    """Collective moments of the channel-decohered twisted state, in
    closed form.

    Uses the per-pair correlators of the pure state
    (<ss_xx> = (1+c)/2, <ss_yy> = A/2, <ss_yz> = B/4 with
    c = cos^(N-2)(2a)) contracted by the channel factors. Exact for every
    |kappa| <= 1, including the sign-flipped kappa < 0 branch.
    """
    if n < 2:
        raise NTooSmall(f"need at least 2 particles, got {n}")
    rp, rz, m = _contractions(kind, _check_kappa(kappa))
    co = oat_coefficients(n, alpha)
    c2 = 1.0 - co.a_coef
    x1 = _cos_pow(alpha, n - 1)
    pair = n * (n - 1) / 4.0

    mean = np.array([0.5 * n * rp * x1, 0.0, 0.5 * n * m])
    corr = np.zeros((3, 3))
    corr[0, 0] = n / 4.0 + pair * rp * rp * (1.0 + c2) / 2.0
    corr[1, 1] = n / 4.0 + pair * rp * rp * co.a_coef / 2.0
    corr[2, 2] = n / 4.0 + pair * m * m
    corr[1, 2] = corr[2, 1] = pair * rp * rz * co.b_coef / 4.0
    corr[0, 2] = corr[2, 0] = pair * rp * m * x1
    return CollectiveMoments(n_particles=n, mean_spin=mean, corr=corr)


def _xi2_exact_raw(n: int, alpha: float, kappa: float, kind: ChannelKind) -> float:
    m = decohered_moments(n, alpha, kind, kappa)
    return xi2_from_moments(m).value


def _xi2_prime_exact_raw(n: int, alpha: float, kappa: float, kind: ChannelKind) -> float:
    m = decohered_moments(n, alpha, kind, kappa)
    return xi2_prime_from_moments(m).value


def _xi2_channel_raw(
    n: int, alpha: float, kappa: float, kind: ChannelKind, definition: Definition, form: Form
) -> float:
    if definition is Definition.XI:
        if form is Form.REFERENCE:
            return _xi2_reference_raw(n, alpha, kappa, kind)
        return _xi2_exact_raw(n, alpha, kappa, kind)
    if form is Form.REFERENCE:
        return _xi2_prime_reference_raw(n, alpha, kappa, kind)
    return _xi2_prime_exact_raw(n, alpha, kappa, kind)


def channel_xi2(
    n: int,
    alpha: float,
    kappa: float,
    kind: ChannelKind,
    definition: Definition = Definition.XI,
    form: Form = Form.REFERENCE,
) -> SqueezingValue:
    """Decohered squeezing parameter for any channel/definition/form."""
    if n < 2:
        raise NTooSmall(f"need at least 2 particles, got {n}")
    _check_kappa(kappa)
    return SqueezingValue(
        _xi2_channel_raw(n, alpha, kappa, kind, definition, form), definition
    )


def xi2_dephased(n, alpha, kappa, form=Form.REFERENCE) -> SqueezingValue:
    return channel_xi2(n, alpha, kappa, ChannelKind.DEPHASING, Definition.XI, form)


def xi2_depolarized(n, alpha, kappa, form=Form.REFERENCE) -> SqueezingValue:
    return channel_xi2(n, alpha, kappa, ChannelKind.DEPOLARIZING, Definition.XI, form)


def xi2_damped(n, alpha, kappa, form=Form.REFERENCE) -> SqueezingValue:
    return channel_xi2(n, alpha, kappa, ChannelKind.DAMPING, Definition.XI, form)


def xi2_prime_dephased(n, alpha, kappa, form=Form.REFERENCE) -> SqueezingValue:
    return channel_xi2(n, alpha, kappa, ChannelKind.DEPHASING, Definition.XI_PRIME, form)


def xi2_prime_depolarized(n, alpha, kappa, form=Form.REFERENCE) -> SqueezingValue:
    return channel_xi2(n, alpha, kappa, ChannelKind.DEPOLARIZING, Definition.XI_PRIME, form)


def xi2_prime_damped(n, alpha, kappa, form=Form.REFERENCE) -> SqueezingValue:
    return channel_xi2(n, alpha, kappa, ChannelKind.DAMPING, Definition.XI_PRIME, form)


# ---------------------------------------------------------------------------
# directions, optimization, curves


@dataclass(frozen=True)
class SpinDirections:
    """Mean spin direction and the orthogonal family n_perp(phi).

    mean = (cos(dt - N a), sin(dt - N a), 0) for field strength delta and
    time t; perp(phi) spans the plane orthogonal to it.
    """

    angle: float  # delta*t - N*alpha

    @property
    def mean(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle), 0.0])

    def perp(self, phi: float) -> np.ndarray:
        return np.array(
            [
                -math.cos(phi) * math.sin(self.angle),
                math.cos(phi) * math.cos(self.angle),
                math.sin(phi),
            ]
        )


def spin_directions(n: int, alpha: float, delta: float = 0.0, t: float = 0.0) -> SpinDirections:
    return SpinDirections(angle=delta * t - n * alpha)


def xi2_oat_curve(n: int, alphas: np.ndarray) -> np.ndarray:
    """Vectorized pure-state variance form over an alpha grid (log-space
    powers, divergences mapped to +inf)."""
    a = np.asarray(alphas, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        c = np.cos(a)
        c2 = np.cos(2.0 * a)
        expo = n - 2

        def spow(base, e):
            if e == 0:
                return np.ones_like(base)
            mag = np.exp(e * np.log(np.abs(base)))
            if e % 2:
                return np.where(base < 0, -mag, mag)
            return mag

        cA = 1.0 - spow(c2, expo)
        cB = 4.0 * np.sin(a) * spow(c, expo)
        hy = np.hypot(cA, cB)
        num = 1.0 - (n - 1) * (hy - cA) / 4.0
        den = spow(c, 2 * n - 2)
        out = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
    return out


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f: Callable[[float], float], lo: float, hi: float, xatol: float) -> tuple[float, float]:
    x1 = hi - _INV_GOLDEN * (hi - lo)
    x2 = lo + _INV_GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xatol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_GOLDEN * (hi - lo)
            f2 = f(x2)
    xm = 0.5 * (lo + hi)
    return xm, f(xm)


#: nodes in the coarse bracket scan preceding the golden-section refine
_SCAN_POINTS = 2048


def optimal_alpha(n: int, xatol: float = 1e-10) -> tuple[float, float]:
    """Minimize the pure variance-form parameter over alpha in (0, pi/2).

    Coarse 2048-point scan to bracket, golden-section to ``xatol`` in
    alpha. Returns (alpha_star, xi_min) with xi_min = sqrt(min xi^2).
    """
    if n < 3:
        raise NTooSmall(f"optimization needs at least 3 particles, got {n}")
    grid = np.linspace(0.0, math.pi / 2.0, _SCAN_POINTS + 2)[1:-1]
    vals = xi2_oat_curve(n, grid)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    alpha_star, best = _golden_min(lambda a: _xi2_pure_raw(n, a), lo, hi, xatol)
    return alpha_star, math.sqrt(best)


@dataclass(frozen=True)
class SqueezingCurve:
    """A squeezing parameter sampled along a kappa(t) trajectory."""

    config: EnsembleConfig
    channel: ChannelKind
    definition: Definition
    form: Form
    model_label: str
    model_params: dict[str, object]
    grid: TimeGrid
    kappa: np.ndarray
    values: np.ndarray
    markov_rate: float | None = None
    markov_values: np.ndarray | None = None

    def metadata(self) -> dict[str, object]:
        meta: dict[str, object] = {
            "n": self.config.n_particles,
            "alpha": self.config.alpha,
            "delta": self.config.delta,
            "channel": self.channel.value,
            "definition": self.definition.value,
            "form": self.form.value,
            "model": self.model_label,
        }
        meta.update(self.model_params)
        meta.update(
            {
                "t_start": self.grid.t_start,
                "t_end": self.grid.t_end,
                "step": self.grid.step,
            }
        )
        if self.markov_rate is not None:
            meta["compare_markovian"] = self.markov_rate
        return meta

    def to_csv(self, fp: IO[str], extra: Mapping[str, object] | None = None) -> None:
        meta = self.metadata()
        if extra:
            meta.update(extra)
        cols = ["t", "kappa", "xi2"]
        rows = [self.grid.nodes(), self.kappa, self.values]
        if self.markov_values is not None:
            cols.append("xi2_markovian")
            rows.append(self.markov_values)
        write_csv(fp, "curve", meta, cols, zip(*rows))


def _eval_curve(
    n: int,
    alpha: float,
    kappas: np.ndarray,
    kind: ChannelKind,
    definition: Definition,
    form: Form,
    threads: int = 1,
) -> np.ndarray:
    # the channels depend on kappa only through kappa^2 (dephasing,
    # depolarizing exactly) or up to a per-qubit z rotation that leaves
    # both parameters invariant (damping), so curves evaluate at |kappa|
    clamped = np.minimum(np.abs(kappas), 1.0)

    def eval_block(block: np.ndarray) -> np.ndarray:
        out = np.empty(len(block))
        for i, k in enumerate(block):
            out[i] = _xi2_channel_raw(n, alpha, float(k), kind, definition, form)
        return out

    if threads > 1 and len(clamped) > 256:
        from concurrent.futures import ThreadPoolExecutor

        blocks = np.array_split(clamped, threads * 4)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return np.concatenate(list(pool.map(eval_block, blocks)))
    return eval_block(clamped)


def curve_evaluator(
    n: int,
    alpha: float,
    channel: ChannelKind,
    model: KappaModel,
    definition: Definition = Definition.XI,
    form: Form = Form.REFERENCE,
) -> Callable[[float], float]:
    """Scalar t -> xi^2(t) closure for root finding and interval scans."""

    def evaluate(t: float) -> float:
        k = min(abs(float(model.evaluate(t))), 1.0)
        return _xi2_channel_raw(n, alpha, k, channel, definition, form)

    return evaluate


def squeezing_curve(
    cfg: EnsembleConfig,
    channel: ChannelKind,
    model: KappaModel,
    grid: TimeGrid,
    definition: Definition = Definition.XI,
    form: Form = Form.REFERENCE,
    compare_markovian: float | None = None,
    threads: int = 1,
) -> SqueezingCurve:
    """Evaluate kappa(t) on the grid and map it through the decohered
    closed form; optionally add a Markovian comparison column computed
    from kappa(t) = exp(-rate*t). Node evaluation is independent;
    ``threads`` sizes an order-preserving worker pool."""
    if cfg.n_particles < 2:
        raise NTooSmall("squeezing curves need at least 2 particles")
    ts = grid.nodes()
    kappas = np.asarray(model.evaluate(ts), dtype=float)
    values = _eval_curve(
        cfg.n_particles, cfg.alpha, kappas, channel, definition, form, threads
    )
    markov_values = None
    if compare_markovian is not None:
        mk = kappa_markovian(compare_markovian, ts)
        markov_values = _eval_curve(
            cfg.n_particles, cfg.alpha, np.asarray(mk), channel, definition, form, threads
        )
    return SqueezingCurve(
        config=cfg,
        channel=channel,
        definition=definition,
        form=form,
        model_label=model.label(),
        model_params=model.params(),
        grid=grid,
        kappa=kappas,
        values=values,
        markov_rate=compare_markovian,
        markov_values=markov_values,
    )
