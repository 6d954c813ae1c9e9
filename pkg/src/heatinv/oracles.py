"""Independent numerical checks of the symbolic machinery.

* Feynman-Kac Monte Carlo for the diagonal heat kernel, driven by Brownian
  bridge paths,
* a discretized 1-D relative heat trace with small-time expansion fitting,
* finite-matrix checks of the non-commutative Taylor remainder and of the
  alternating operator family it generates.

Everything is deterministic given the configured seeds.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, expm

from .potentials import PotentialExpr, evaluate_array
from .util import worker_count

# ---------------------------------------------------------------------------
# Feynman-Kac Monte Carlo
# ---------------------------------------------------------------------------

_CHUNK = 4096  # paths per block; fixed so results do not depend on memory


@dataclass(frozen=True)
class BridgeSampler:
    """Brownian bridge path generator.

    Paths are standard bridges b on [0, 1] with b(0) = b(1) = 0 and
    covariance E(b_j(s) b_k(u)) = s (1 - u) delta_jk for s <= u; the heat
    kernel scaling sqrt(2 t) is applied by the consumer.  Construction:
    cumulative Gaussian increments with terminal pinning W(s) - s W(1),
    which is exact in distribution at the grid points.
    """

    seed: int = 0
    steps: int = 256
    paths: int = 100_000
    dim: int = 1

    def blocks(self):
        """Yield (s_grid, block) pairs; block has shape (count, steps+1, dim).

        The seed sequence is split per fixed-size chunk, so the stream of
        paths is independent of any consumer-side parallel partitioning.
        """
        s = np.linspace(0.0, 1.0, self.steps + 1)
        n_chunks = (self.paths + _CHUNK - 1) // _CHUNK
        children = np.random.SeedSequence(self.seed).spawn(n_chunks)
        remaining = self.paths
        for child in children:
            count = min(_CHUNK, remaining)
            remaining -= count
            rng = np.random.default_rng(child)
            incr = rng.normal(scale=math.sqrt(1.0 / self.steps),
                              size=(count, self.steps, self.dim))
            w = np.concatenate(
                [np.zeros((count, 1, self.dim)), np.cumsum(incr, axis=1)], axis=1)
            bridge = w - s[None, :, None] * w[:, -1:, :]
            yield s, bridge


def fk_diagonal(potential: PotentialExpr, x, t: float,
                sampler: BridgeSampler) -> tuple[float, float]:
    """Monte-Carlo diagonal heat kernel

        (4 pi t)^(-n/2) E[ exp(-t * int_0^1 V(x + sqrt(2 t) b(s)) ds) ],

    with the path integral by the trapezoid rule along each bridge.
    Returns (estimate, standard error).
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    n = sampler.dim
    if len(x) != n or potential.dim != n:
        raise ValueError("dimension mismatch between potential, point, sampler")
    scale = math.sqrt(2.0 * t)
    prefactor = (4.0 * math.pi * t) ** (-n / 2)

    def block_sums(args):
        s, block = args
        coords = [x[i] + scale * block[:, :, i] for i in range(n)]
        values = evaluate_array(potential, coords)  # (paths, steps+1)
        path_integral = np.trapezoid(values, s, axis=1)
        weights = np.exp(-t * path_integral)
        return float(weights.sum()), float((weights ** 2).sum()), weights.shape[0]

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(block_sums, sampler.blocks()))
    else:
        sums = [block_sums(args) for args in sampler.blocks()]
    total = sum(s0 for s0, _, _ in sums)
    total_sq = sum(s1 for _, s1, _ in sums)
    count = sum(c for _, _, c in sums)
    mean = total / count
    var = max(total_sq / count - mean ** 2, 0.0)
    stderr = math.sqrt(var / count)
    return prefactor * mean, prefactor * stderr


# ---------------------------------------------------------------------------
# 1-D relative heat trace
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceGrid:
    half_width: float = 30.0
    points: int = 4000


def relative_heat_trace_1d(potential: PotentialExpr, t: float,
                           grid: TraceGrid | None = None) -> float:
    """Trace of e^(-tH) - e^(-tH0) for the second-order central-difference
    discretization on [-L, L] with Dirichlet ends.  H and H0 share the same
    discretization so the bulk of the discretization error cancels in the
    difference.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if potential.dim != 1:
        raise ValueError("relative_heat_trace_1d needs a 1-D potential")
    grid = grid or TraceGrid()
    L, m = grid.half_width, grid.points
    x = np.linspace(-L, L, m + 2)[1:-1]  # interior nodes
    h = x[1] - x[0]
    v = evaluate_array(potential, [x])
    off = np.full(m - 1, -1.0 / h ** 2)
    lam_free = eigh_tridiagonal(np.full(m, 2.0 / h ** 2), off,
                                eigvals_only=True)
    lam = eigh_tridiagonal(2.0 / h ** 2 + v, off, eigvals_only=True)
    return float(np.sum(np.exp(-t * lam) - np.exp(-t * lam_free)))


# ---------------------------------------------------------------------------
# Small-time expansion fitting
# ---------------------------------------------------------------------------


@dataclass
class FitReport:
    ts: np.ndarray
    coefficients: np.ndarray          # c_1 .. c_J
    covariance: np.ndarray | None     # None when residual dof is zero
    condition_number: float
    residual_norm: float

    def coefficient(self, j: int) -> float:
        return float(self.coefficients[j - 1])


def fit_expansion(samples: list[tuple[float, float]], n: int, J: int) -> FitReport:
    """Least-squares fit of samples (t, value) to the small-time model

        value(t) = (4 pi t)^(-n/2) * sum_(j=1)^J c_j t^j.

    The (4 pi t)^(-n/2) prefactor is divided out first.  Reports the design
    matrix condition number; raises on rank deficiency.
    """
    if J < 1:
        raise ValueError(f"J must be >= 1, got {J}")
    if len(samples) < J + 2:
        raise ValueError(f"need at least {J + 2} samples for J={J}, got {len(samples)}")
    ts = np.array([s[0] for s in samples], dtype=float)
    if len(np.unique(ts)) != len(ts):
        raise ValueError("t values must be distinct")
    values = np.array([s[1] for s in samples], dtype=float)
    g = values / (4.0 * math.pi * ts) ** (-n / 2)
    design = np.vander(ts, J + 1, increasing=True)[:, 1:]  # columns t^1..t^J
    cond = float(np.linalg.cond(design))
    coeffs, residuals, rank, _ = np.linalg.lstsq(design, g, rcond=None)
    if rank < J:
        raise ValueError(f"rank-deficient fit: rank {rank} < {J}")
    resid = g - design @ coeffs
    dof = len(ts) - J
    covariance = None
    if dof > 0:
        sigma2 = float(resid @ resid) / dof
        covariance = sigma2 * np.linalg.inv(design.T @ design)
    return FitReport(ts=ts, coefficients=coeffs, covariance=covariance,
                     condition_number=cond,
                     residual_norm=float(np.linalg.norm(resid)))


# ---------------------------------------------------------------------------
# Non-commutative Taylor formula on matrices
# ---------------------------------------------------------------------------


def taylor_family(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """C_m(A, B) = sum_k C(m, k) A^k (-B)^(m-k) for square matrices."""
    dim = a.shape[0]
    out = np.zeros_like(a)
    a_pow = np.eye(dim)
    neg_b_pows = [np.eye(dim)]
    for _ in range(m):
        neg_b_pows.append(neg_b_pows[-1] @ (-b))
    for k in range(m + 1):
        out = out + math.comb(m, k) * (a_pow @ neg_b_pows[m - k])
        a_pow = a_pow @ a
    return out


def taylor_remainder(a: np.ndarray, b: np.ndarray, t: float, N: int) -> float:
    """Operator-norm remainder of the degree-N non-commutative Taylor
    approximation e^(tB) ~ sum_m (-1)^m t^m/m! e^(tA) C_m(A, B)."""
    approx = np.zeros_like(a)
    eta = expm(t * a)
    for m in range(N + 1):
        approx = approx + ((-1) ** m * t ** m / math.factorial(m)
                           ) * (eta @ taylor_family(a, b, m))
    return float(np.linalg.norm(expm(t * b) - approx, 2))


@dataclass
class SlopeReport:
    order: int
    slope: float
    ts: np.ndarray
    remainders: np.ndarray
    seed: int


def nc_taylor_matrix_check(dim: int, N: int, seed: int,
                           ts: np.ndarray | None = None) -> SlopeReport:
    """Random symmetric A, B; fit the log-log slope of the Taylor remainder
    over a geometric t grid.  The slope should be close to N + 1."""
    if dim < 2:
        raise ValueError(f"matrix size must be >= 2, got {dim}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(dim, dim))
    b = rng.uniform(-1.0, 1.0, size=(dim, dim))
    a = (a + a.T) / 2
    b = (b + b.T) / 2
    if ts is None:
        ts = np.geomspace(1e-3, 1e-2, 8)
    remainders = np.array([taylor_remainder(a, b, t, N) for t in ts])
    slope = float(np.polyfit(np.log(ts), np.log(remainders), 1)[0])
    return SlopeReport(order=N, slope=slope, ts=ts, remainders=remainders,
                       seed=seed)


def matrix_operator_family(h0: np.ndarray, h: np.ndarray, m: int) -> np.ndarray:
    """The matrix V_m built from the recurrence V_0 = I,
    V_j = V_(j-1) (H - H0) + [V_(j-1), H0], for discretized H0 and H."""
    v = h - h0
    out = np.eye(h.shape[0])
    for _ in range(m):
        out = out @ v + out @ h0 - h0 @ out
    return out


def discretized_schrodinger_1d(v_values: np.ndarray,
                               h: float) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference H0 and H = H0 + diag(V) matrices on a uniform grid
    with Dirichlet ends."""
    m = len(v_values)
    h0 = (np.diag(np.full(m, 2.0 / h ** 2))
          + np.diag(np.full(m - 1, -1.0 / h ** 2), 1)
          + np.diag(np.full(m - 1, -1.0 / h ** 2), -1))
    return h0, h0 + np.diag(v_values)


def taylor_family_matches_operator_family(h0: np.ndarray, h: np.ndarray,
                                          m: int) -> float:
    """Max relative deviation between C_m(-H0, -H) and the matrix V_m."""
    c = taylor_family(-h0, -h, m)
    v = matrix_operator_family(h0, h, m)
    scale = max(float(np.linalg.norm(v)), 1.0)
    return float(np.linalg.norm(c - v)) / scale
