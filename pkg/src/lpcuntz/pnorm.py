"""Operator p -> p norm estimation between weighted sequence spaces.

Weights are absorbed by diagonal scaling, so everything reduces to
plain l^p kernels.  Exponent 1 is exact (max weighted column sum),
exponent 2 is the largest singular value, and for p in (1, inf) the
estimate is a Boyd-type fixed-point iteration with the dual-exponent
phase map x -> |x|^(p-1) * phase(x), globally convergent from a
positive start for entrywise-nonnegative kernels and run with
multistart otherwise.  A brute-force sampling oracle covers small
source dimensions.  Every returned value is a certified lower bound:
the witness vector reproduces it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .spatial import (
    OperatorMatrix,
    conjugate_exponent,
    vector_norm,
    weighted_to_unweighted,
)

ORACLE_MAX_DIM = 8


@dataclass(frozen=True)
class NormResult:
    estimate: float
    certified_lower: float
    witness: np.ndarray  # in the weighted source coordinates
    method: str
    iterations: int
    converged: bool


def lp_norm(x, p: float) -> float:
    x = np.asarray(x)
    if p == np.inf:
        return float(np.max(np.abs(x), initial=0.0))
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def _phase_power(y: np.ndarray, exponent: float) -> np.ndarray:
    """|y|^exponent * phase(y), with 0 -> 0.

    Entries below 1e-150 are treated as zero so that the phase quotient
    cannot overflow against an underflowing power.
    """
    mags = np.abs(y)
    out = np.zeros_like(y)
    nz = mags > 1e-150
    out[nz] = (mags[nz] ** exponent) * (y[nz] / mags[nz])
    return out


def _ratio(B: np.ndarray, x: np.ndarray, p: float) -> float:
    nx = lp_norm(x, p)
    if nx == 0:
        return 0.0
    return lp_norm(B @ x, p) / nx


def _boyd_ascent(B, p, x0, tol, max_iter):
    """One run of the fixed-point iteration; returns (gamma, x, iters, ok)."""
    q = conjugate_exponent(p)
    x = np.asarray(x0, dtype=complex)
    nx = lp_norm(x, p)
    if nx == 0:
        raise ValueError("zero start vector")
    x = x / nx
    best_gamma, best_x = 0.0, x
    gamma_prev = -1.0
    for it in range(1, max_iter + 1):
        y = B @ x
        gamma = lp_norm(y, p)
        if gamma > best_gamma:
            best_gamma, best_x = gamma, x
        if gamma == 0.0:
            return 0.0, x, it, True
        z = B.conj().T @ _phase_power(y, p - 1.0)
        znorm = lp_norm(z, q)
        pairing = float(np.real(np.vdot(z, x)))
        if znorm <= pairing * (1.0 + tol) or abs(gamma - gamma_prev) <= tol * gamma:
            return best_gamma, best_x, it, True
        gamma_prev = gamma
        xn = _phase_power(z / max(np.abs(z).max(), 1e-300), q - 1.0)
        nx = lp_norm(xn, p)
        if nx == 0:
            return best_gamma, best_x, it, True
        x = xn / nx
    return best_gamma, best_x, max_iter, False


def _finish(A: OperatorMatrix, x_unweighted, method, iterations, converged):
    """Translate an unweighted witness back and certify the bound."""
    mu = A.source.weights
    x = np.asarray(x_unweighted, dtype=complex) * mu ** (-1.0 / A.p)
    nx = vector_norm(A.source, x, A.p)
    if nx == 0:
        return NormResult(0.0, 0.0, x, method, iterations, converged)
    value = vector_norm(A.target, A.apply(x), A.p) / nx
    x = x / nx
    return NormResult(value, value, x, method, iterations, converged)


def power_estimate(
    A: OperatorMatrix,
    restarts: int = 20,
    seed: int = 0,
    tol: float = 1e-12,
    max_iter: int = 600,
) -> NormResult:
    """Best lower bound for the weighted p -> p norm of A."""
    p = A.p
    B = weighted_to_unweighted(A)
    n = B.shape[1]
    if n == 0 or B.shape[0] == 0 or not np.any(B):
        return NormResult(0.0, 0.0, np.zeros(n, dtype=complex), "zero", 0, True)

    if p == 1.0:
        sums = np.abs(B).sum(axis=0)
        col = int(np.argmax(sums))
        x = np.zeros(n, dtype=complex)
        x[col] = 1.0
        return _finish(A, x, "exact-l1", 0, True)

    if p == 2.0:
        _, svals, vh = np.linalg.svd(B)
        return _finish(A, vh[0].conj(), "svd", 0, True)

    nonnegative = bool(np.isrealobj(B) or not np.any(B.imag)) and bool(
        np.all(B.real >= 0)
    )
    starts = [np.ones(n, dtype=complex)]
    if not nonnegative:
        for i in range(min(n, 4)):
            e = np.zeros(n, dtype=complex)
            e[i] = 1.0
            starts.append(e)
        rng = np.random.default_rng(seed)
        while len(starts) < max(restarts, 1):
            starts.append(
                rng.standard_normal(n) + 1j * rng.standard_normal(n)
            )
    best = (0.0, np.ones(n, dtype=complex))
    total_it = 0
    all_ok = True
    for x0 in starts:
        gamma, x, it, ok = _boyd_ascent(B, p, x0, tol, max_iter)
        total_it += it
        all_ok = all_ok and ok
        if gamma > best[0]:
            best = (gamma, x)
    method = "boyd-nonnegative" if nonnegative else "boyd-multistart"
    return _finish(A, best[1], method, total_it, all_ok)


def oracle_grid(
    A: OperatorMatrix,
    samples: int = 4096,
    seed: int = 0,
    starts: int = 10,
    rounds: int = 4,
) -> NormResult:
    """Independent brute-force lower bound for small source dimension:
    random plus low-discrepancy sphere sampling, then derivative-free
    local ascent from ``starts`` direction-diverse candidates, each
    refined by up to ``rounds`` restarted simplex runs."""
    p = A.p
    B = weighted_to_unweighted(A)
    n = B.shape[1]
    if n > ORACLE_MAX_DIM:
        raise ValueError(f"oracle restricted to source dimension <= {ORACLE_MAX_DIM}")
    if n == 0 or B.shape[0] == 0 or not np.any(B):
        return NormResult(0.0, 0.0, np.zeros(n, dtype=complex), "oracle-grid", 0, True)

    rng = np.random.default_rng(seed)
    half = samples // 2
    X = rng.standard_normal((n, half)) + 1j * rng.standard_normal((n, half))
    sob = qmc.Sobol(d=2 * n, scramble=True, seed=seed)
    pts = sob.random(samples - half) * 2.0 - 1.0
    X2 = (pts[:, :n] + 1j * pts[:, n:]).T
    X = np.concatenate([X, X2, np.eye(n, dtype=complex), np.ones((n, 1))], axis=1)

    norms_in = np.sum(np.abs(X) ** p, axis=0) ** (1.0 / p)
    keep = norms_in > 0
    X = X[:, keep] / norms_in[keep]
    norms_out = np.sum(np.abs(B @ X) ** p, axis=0) ** (1.0 / p)
    order = np.argsort(norms_out)[::-1]

    def negated_ratio(params):
        x = params[:n] + 1j * params[n:]
        r = _ratio(B, x, p)
        return -r

    def ascend(x0):
        # restarted simplex ascent; the restart re-inflates the simplex,
        # which matters because the ratio is scale-invariant
        params = np.concatenate([x0.real, x0.imag])
        value = _ratio(B, x0, p)
        for _ in range(rounds):
            res = optimize.minimize(
                negated_ratio,
                params,
                method="Nelder-Mead",
                options={"maxiter": 4000, "xatol": 1e-13, "fatol": 1e-14},
            )
            if -res.fun <= value + 1e-14:
                break
            params, value = res.x, -res.fun
        return value, params[:n] + 1j * params[n:]

    # ascend from high-ranked starts that point into distinct basins
    picks = []
    for idx in order:
        x = X[:, idx]
        if all(
            abs(np.vdot(X[:, j], x)) / (np.linalg.norm(X[:, j]) * np.linalg.norm(x))
            < 0.95
            for j in picks
        ):
            picks.append(idx)
        if len(picks) >= starts:
            break

    best_val, best_x = 0.0, X[:, order[0]]
    for idx in picks:
        val, x = ascend(X[:, idx])
        if val > best_val:
            best_val, best_x = val, x
    return _finish(A, best_x / lp_norm(best_x, p), "oracle-grid", samples, True)


def rank_one_exact(mu_vec, eta_vec, p, source=None, target=None) -> float:
    """Norm of xi -> (sum_j eta_j xi_j) * mu_vec as an operator from
    l^p(source weights) to l^p(target weights): the weighted p-norm of
    mu_vec times the dual norm of the functional eta."""
    p = float(p)
    q = conjugate_exponent(p)
    mu_vec = np.asarray(mu_vec, dtype=complex)
    eta_vec = np.asarray(eta_vec, dtype=complex)
    w_t = np.ones(len(mu_vec)) if target is None else target.weights
    w_s = np.ones(len(eta_vec)) if source is None else source.weights
    out_norm = float(np.sum(w_t * np.abs(mu_vec) ** p) ** (1.0 / p))
    if q == np.inf:
        dual_norm = float(np.max(np.abs(eta_vec) / w_s, initial=0.0))
    else:
        dual_norm = float(np.sum(w_s ** (1.0 - q) * np.abs(eta_vec) ** q) ** (1.0 / q))
    return out_norm * dual_norm


@dataclass(frozen=True)
class NormSequence:
    levels: tuple
    results: tuple  # NormResult per level
    stabilized: bool

    @property
    def values(self):
        return [r.estimate for r in self.results]


def norm_sequence(
    rep,
    a,
    n_max: int,
    n_min: int | None = None,
    restarts: int = 20,
    seed: int = 0,
    stall_eps: float = 1e-3,
) -> NormSequence:
    """Per-level norm lower bounds for a graded representation; they are
    nondecreasing in the level and converge upward to the norm in the
    completed algebra, so the last value is a certified lower bound and
    the sequence is flagged stabilized once successive levels differ by
    less than stall_eps."""
    from .reps import evaluate

    depth = a.t_depth()
    lo = depth if n_min is None else max(n_min, depth)
    if lo > n_max:
        raise ValueError(f"level range [{lo}, {n_max}] is empty")
    levels = tuple(range(lo, n_max + 1))
    results = []
    for level in levels:
        A = evaluate(rep, a, level)
        results.append(power_estimate(A, restarts=restarts, seed=seed))
    stabilized = len(results) >= 2 and abs(
        results[-1].estimate - results[-2].estimate
    ) < stall_eps
    return NormSequence(levels=levels, results=tuple(results), stabilized=stabilized)
