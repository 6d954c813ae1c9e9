"""Numeric pipeline: evaluate symbolic densities for a concrete potential,
integrate them over R^n, and convert integrated invariants into scattering
phase / trace-distribution coefficients.

All exact Gamma and (4 pi)^(-n/2) factors are combined in HalfIntScalar
before any float conversion; floats only enter through quadrature and the
final multiplication.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from .diffpoly import DiffPoly
from .halfint import POLE, GammaPole, HalfIntScalar, gamma_half_integer
from .invariants import InvariantResult
from .potentials import PotentialExpr, differentiate, evaluate, evaluate_array


class QuadratureError(RuntimeError):
    """Quadrature failed to converge within budget; carries the partial
    result and its error estimate."""

    def __init__(self, message: str, value: float, error: float):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass
class QuadratureConfig:
    half_width: float = 12.0     # integration box [-L, L]^n
    epsabs: float = 1e-9
    epsrel: float = 1e-9
    limit: int = 200             # max subinterval count per axis


class DensityEvaluator:
    """Evaluates a DiffPoly density for a concrete potential, caching the
    symbolic derivatives D^nu V it needs."""

    def __init__(self, potential: PotentialExpr):
        self.potential = potential
        self._derivatives: dict[tuple[int, ...], PotentialExpr] = {}

    def derivative(self, nu: tuple[int, ...]) -> PotentialExpr:
        expr = self._derivatives.get(nu)
        if expr is None:
            expr = differentiate(self.potential, nu)
            self._derivatives[nu] = expr
        return expr

    def __call__(self, density: DiffPoly, point) -> float:
        total = 0.0
        for mono, coeff in density.terms.items():
            prod = float(coeff)
            for nu in mono:
                prod *= evaluate(self.derivative(nu), point)
            total += prod
        return total

    def on_arrays(self, density: DiffPoly, coords: list[np.ndarray]) -> np.ndarray:
        shape = coords[0].shape
        total = np.zeros(shape)
        for mono, coeff in density.terms.items():
            prod = np.full(shape, float(coeff))
            for nu in mono:
                prod = prod * evaluate_array(self.derivative(nu), coords)
            total += prod
        return total


def evaluate_density(density: DiffPoly, potential: PotentialExpr, point) -> float:
    """Numeric value of a symbolic density at one point."""
    return DensityEvaluator(potential)(density, point)


def integrate_density(density: DiffPoly, potential: PotentialExpr, n: int,
                      config: QuadratureConfig | None = None) -> tuple[float, float]:
    """Adaptive quadrature of the density over the truncated box [-L, L]^n.

    Returns (value, error estimate).  Raises QuadratureError (carrying the
    partial result) if the adaptive scheme reports non-convergence.
    """
    config = config or QuadratureConfig()
    if density.is_zero():
        return 0.0, 0.0
    ev = DensityEvaluator(potential)
    L = config.half_width
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if n == 1:
                value, err = integrate.quad(
                    lambda x: ev(density, (x,)), -L, L,
                    epsabs=config.epsabs, epsrel=config.epsrel,
                    limit=config.limit)
            else:
                value, err = integrate.nquad(
                    lambda *xs: ev(density, xs), [(-L, L)] * n,
                    opts={"epsabs": config.epsabs, "epsrel": config.epsrel,
                          "limit": config.limit})
        except integrate.IntegrationWarning as exc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                if n == 1:
                    value, err = integrate.quad(
                        lambda x: ev(density, (x,)), -L, L,
                        epsabs=config.epsabs, epsrel=config.epsrel,
                        limit=config.limit)
                else:
                    value, err = integrate.nquad(
                        lambda *xs: ev(density, xs), [(-L, L)] * n,
                        opts={"epsabs": config.epsabs, "epsrel": config.epsrel,
                              "limit": config.limit})
            raise QuadratureError(f"quadrature did not converge: {exc}",
                                  value, err) from exc
    return value, err


def spectral_prefactor(j: int, n: int) -> HalfIntScalar | GammaPole:
    """Exact (4 pi)^(-n/2) / Gamma(n/2 - j); POLE when Gamma is at a pole."""
    g = gamma_half_integer(n - 2 * j)
    if g is POLE:
        return POLE
    four_pi = HalfIntScalar(Fraction(1, 2 ** n), -n)  # (4 pi)^(-n/2)
    return four_pi / g


def b_from_a(a_j: float, j: int, n: int) -> float | None:
    """Scattering-phase coefficient b_j = (4 pi)^(-n/2) a_j / Gamma(n/2 - j).

    None (absent) at Gamma poles: even n with j >= n/2.  Distinct from a
    numeric zero - the expansion terminates there rather than vanishing.
    """
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    factor = spectral_prefactor(j, n)
    if factor is POLE:
        return None
    return a_j * float(factor)


def beta_from_alpha(alpha_j: float, j: int, n: int) -> float | None:
    """Trace-distribution coefficient beta_j; absent for every even n (the
    distribution decays faster than any power there)."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    if n % 2 == 0:
        return None
    return b_from_a(alpha_j, j, n)


# ---------------------------------------------------------------------------
# Coefficient tables
# ---------------------------------------------------------------------------


@dataclass
class CoefficientRow:
    j: int
    density_text: str
    value: float
    b_or_beta: float | None
    route: str
    err: float


@dataclass
class CoefficientTable:
    dim: int
    rows: list[CoefficientRow] = field(default_factory=list)
    epsilon: Fraction | None = None

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "epsilon": str(self.epsilon) if self.epsilon is not None else None,
            "rows": [
                {"j": r.j, "density": r.density_text, "value": r.value,
                 "b_or_beta": r.b_or_beta, "route": r.route, "err": r.err}
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_text(self) -> str:
        headers = ["j", "value", "b_or_beta", "err", "route", "density"]
        cells = [[str(r.j), f"{r.value:.9g}",
                  "absent" if r.b_or_beta is None else f"{r.b_or_beta:.9g}",
                  f"{r.err:.3g}", r.route, r.density_text]
                 for r in self.rows]
        widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
                  for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for c in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(c, widths)))
        return "\n".join(lines)

    def to_csv(self) -> str:
        lines = ["j,value,b_or_beta,err,route,density"]
        for r in self.rows:
            b = "" if r.b_or_beta is None else repr(r.b_or_beta)
            lines.append(f'{r.j},{r.value!r},{b},{r.err!r},{r.route},"{r.density_text}"')
        return "\n".join(lines)


def coefficient_table(invariants: list[InvariantResult],
                      potential: PotentialExpr, n: int,
                      derived: str = "b",
                      config: QuadratureConfig | None = None) -> CoefficientTable:
    """Integrate a list of densities and derive b_j (derived="b") or beta_j
    (derived="beta") for each row."""
    epsilon = invariants[0].epsilon if invariants else None
    table = CoefficientTable(dim=n, epsilon=epsilon)
    for inv in invariants:
        value, err = integrate_density(inv.density, potential, n, config)
        if derived == "b":
            extra = b_from_a(value, inv.j, n)
        else:
            extra = beta_from_alpha(value, inv.j, n)
        table.rows.append(CoefficientRow(
            j=inv.j, density_text=inv.density.to_text(), value=value,
            b_or_beta=extra, route=inv.route, err=err))
    return table
