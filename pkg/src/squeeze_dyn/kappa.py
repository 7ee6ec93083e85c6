"""The decoherence function kappa(t).

Three model variants share one interface: a Markovian exponential, the
closed-form solution for a resonant Lorentzian reservoir (all coupling
regimes), and tabulated values from the numerical memory-kernel solver.
kappa multiplies the channel parametrizations applied per qubit; kappa(0)
is exactly 1 and |kappa(t)| <= 1 for t >= 0.

The Lorentzian closed form solves

    kappa'(t) = -int_0^t f(t - s) kappa(s) ds,  kappa(0) = 1,

for the exponential kernel f(u) = eta0*gamma*exp(-gamma*u)/2. With
d = sqrt(2*eta0*gamma - gamma^2) the strong-coupling solution is

    kappa(t) = exp(-gamma t/2) [cos(d t/2) + (gamma/d) sin(d t/2)],

oscillatory with sign changes (information backflow); the weak-coupling
branch is the analytic continuation d -> i|d| (monotone positive decay)
and the critical point eta0 = gamma/2 the limit exp(-gamma t/2)(1 + gamma t/2).
``solve_volterra`` integrates the same equation numerically for arbitrary
kernels and is checked against the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, IO, Mapping

import numpy as np

from ._format import write_csv
from ._volterra import BACKEND, solve_history
from .errors import (
    KernelEvaluationError,
    NegativeTime,
    NotOscillatory,
    StepTooLarge,
    ValidationError,
)
from .model import Regime, ReservoirConfig, TimeGrid, reservoir_regime

__all__ = [
    "KappaModel",
    "MarkovianExponential",
    "LorentzianClosedForm",
    "Tabulated",
    "MemoryKernel",
    "KappaSeries",
    "kappa_markovian",
    "kappa_lorentzian",
    "solve_volterra",
    "kappa_zeros",
    "BACKEND",
]

# switch to the series limit when |2*eta0*gamma - gamma^2| < tol * gamma^2,
# avoiding cancellation near d = 0
_CRITICAL_DISC_TOL = 1e-14


def _check_times(t: np.ndarray | float) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise NegativeTime("kappa is defined for t >= 0")
    return arr


def kappa_markovian(rate: float, t: float | np.ndarray) -> float | np.ndarray:
    """exp(-rate*t): strictly decreasing, in (0, 1]."""
    if rate <= 0:
        raise ValidationError("rate must be positive")
    arr = _check_times(t)
    out = np.exp(-rate * arr)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def _lorentzian_value(res: ReservoirConfig, arr: np.ndarray) -> np.ndarray:
    """Branch dispatch without the t >= 0 guard (analytic expression)."""
    gam = res.gamma
    disc = res.discriminant
    if abs(disc) < _CRITICAL_DISC_TOL * gam * gam:
        return np.exp(-gam * arr / 2.0) * (1.0 + gam * arr / 2.0)
    if disc > 0:
        d = math.sqrt(disc)
        x = d * arr / 2.0
        return np.exp(-gam * arr / 2.0) * (np.cos(x) + (gam / d) * np.sin(x))
    # d -> i*dh: cosh/sinh recombined into plain exponentials so large t
    # cannot overflow
    dh = math.sqrt(-disc)
    return 0.5 * (1.0 + gam / dh) * np.exp((dh - gam) * arr / 2.0) + 0.5 * (
        1.0 - gam / dh
    ) * np.exp(-(dh + gam) * arr / 2.0)


def kappa_lorentzian(res: ReservoirConfig, t: float | np.ndarray) -> float | np.ndarray:
    """Closed-form kappa for the Lorentzian reservoir, all regimes.

    kappa(0) = 1 and kappa'(0) = 0 in every branch (the history integral
    vanishes at t = 0).
    """
    arr = _check_times(t)
    out = _lorentzian_value(res, arr)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def kappa_zeros(res: ReservoirConfig, horizon: float) -> list[float]:
    """All zeros of the Lorentzian kappa in (0, horizon], ascending.

    Only the strong-coupling regime oscillates; the roots are
    t_k = (2/d) (k*pi + pi - arctan(d/gamma)) with exact spacing 2*pi/d.
    """
    regime, d = reservoir_regime(res)
    if regime is not Regime.STRONG:
        raise NotOscillatory(f"kappa has no zeros in the {regime.value} regime")
    zeros: list[float] = []
    base = math.pi - math.atan2(d, res.gamma)
    k = 0
    while True:
        t_k = (2.0 / d) * (k * math.pi + base)
        if t_k > horizon:
            break
        zeros.append(t_k)
        k += 1
    return zeros


@dataclass(frozen=True)
class MemoryKernel:
    """Two-point reservoir correlation function f(u), u >= 0.

    ``exponential`` builds the Lorentzian-reservoir kernel
    f(u) = eta0*gamma*exp(-gamma*u)/2; any callable works for custom
    spectra.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    tag: str = "custom"

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.evaluator(u)

    @classmethod
    def exponential(cls, res: ReservoirConfig) -> "MemoryKernel":
        scale = 0.5 * res.eta0 * res.gamma

        def f(u):
            return scale * np.exp(-res.gamma * np.asarray(u, dtype=float))

        return cls(evaluator=f, tag=f"exponential(gamma={res.gamma!r},eta0={res.eta0!r})")


@dataclass(frozen=True)
class KappaSeries:
    """kappa sampled on a uniform grid; values[0] = 1."""

    grid: TimeGrid
    values: np.ndarray

    def to_csv(self, fp: IO[str], params: Mapping[str, object] | None = None) -> None:
        meta: dict[str, object] = {
            "t_start": self.grid.t_start,
            "t_end": self.grid.t_end,
            "step": self.grid.step,
        }
        if params:
            meta.update(params)
        write_csv(fp, "kappa", meta, ["t", "kappa"], zip(self.grid.nodes(), self.values))


def solve_volterra(kernel: MemoryKernel, grid: TimeGrid) -> KappaSeries:
    """Numerically integrate kappa'(t) = -int_0^t f(t-s) kappa(s) ds.

    Product-trapezoidal quadrature for the history integral plus a
    second-order predictor-corrector step; O(M^2) in the node count and
    reproducible bit-for-bit for identical inputs. The grid must start at
    t = 0 (the history integral anchors there) and satisfy the stability
    guard step*sqrt(|f(0)|) < 0.1.
    """
    if grid.t_start != 0.0:
        raise ValidationError("solver grids must start at t = 0")
    ts = grid.nodes()
    try:
        fvals = np.asarray(kernel(ts), dtype=float)
        if fvals.shape != ts.shape:
            fvals = np.array([float(kernel(float(u))) for u in ts])
    except KernelEvaluationError:
        raise
    except Exception as exc:
        raise KernelEvaluationError(f"kernel evaluation failed: {exc}") from exc
    if not np.all(np.isfinite(fvals)):
        raise KernelEvaluationError("kernel returned non-finite values")
    if grid.step * math.sqrt(abs(fvals[0])) >= 0.1:
        raise StepTooLarge(
            f"step {grid.step} too large for |f(0)| = {abs(fvals[0])}: "
            "need step*sqrt(|f(0)|) < 0.1"
        )
    out = np.empty_like(fvals)
    solve_history(fvals, grid.step, out)
    return KappaSeries(grid=grid, values=out)


class KappaModel:
    """Base for the kappa(t) variants; subclasses implement ``evaluate``."""

    def evaluate(self, t: float | np.ndarray) -> float | np.ndarray:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def params(self) -> dict[str, object]:
        raise NotImplementedError


@dataclass(frozen=True)
class MarkovianExponential(KappaModel):
    rate: float

    def __post_init__(self) -> None:
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ValidationError("rate must be positive and finite")

    def evaluate(self, t):
        return kappa_markovian(self.rate, t)

    def label(self) -> str:
        return "markovian"

    def params(self) -> dict[str, object]:
        return {"rate": self.rate}


@dataclass(frozen=True)
class LorentzianClosedForm(KappaModel):
    res: ReservoirConfig

    def evaluate(self, t):
        return kappa_lorentzian(self.res, t)

    def label(self) -> str:
        return "lorentzian"

    def params(self) -> dict[str, object]:
        return {"gamma": self.res.gamma, "eta0": self.res.eta0}


@dataclass(frozen=True)
class Tabulated(KappaModel):
    """Linear interpolation of solver output (or any sampled kappa)."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_nodes,):
            raise ValidationError(
                f"expected {self.grid.n_nodes} values, got shape {vals.shape}"
            )
        if vals[0] != 1.0:
            raise ValidationError("tabulated kappa must start at exactly 1")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("tabulated kappa must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_series(cls, series: KappaSeries) -> "Tabulated":
        return cls(grid=series.grid, values=series.values)

    def evaluate(self, t):
        arr = _check_times(t)
        if np.any(arr > self.grid.t_end * (1 + 1e-12) + 1e-12):
            raise ValidationError("evaluation time beyond the tabulated range")
        out = np.interp(arr, self.grid.nodes(), self.values)
        return float(out) if np.isscalar(t) or arr.ndim == 0 else out

    def label(self) -> str:
        return "tabulated"

    def params(self) -> dict[str, object]:
        return {
            "t_start": self.grid.t_start,
            "t_end": self.grid.t_end,
            "step": self.grid.step,
        }
