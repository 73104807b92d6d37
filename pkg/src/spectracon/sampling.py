"""Sampling-based probes of spectrahedra.

Containment relaxations return one-sided bounds; the routines here supply
the other side.  A hit-and-run walk draws points from the interior of S_A,
mu_grid evaluates the containment functional on those points to get an
upper bound on mu, and refutation_search polishes the worst point into an
explicit violation witness when one exists.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize

from .errors import InvalidInput
from .pencil import LinearPencil
from .sdpcore import feasibility_probe
from .symcore import min_eigenvalue

_WITNESS_FEAS_TOL = 1e-9


def interior_point(p: LinearPencil, tol: float = 1e-7) -> np.ndarray:
    """A strictly feasible point of S_A, via the feasibility probe."""
    probe = feasibility_probe(p, tol=tol)
    if probe.kind != "NonEmpty":
        raise InvalidInput(
            f"no interior point found (probe says {probe.kind})")
    return probe.point


def _chord(p: LinearPencil, x: np.ndarray, u: np.ndarray,
           cap: float = 1e6) -> tuple[float, float]:
    """Feasible parameter interval of the line x + t*u inside S_A.

    With M = A(x) positive definite and U = sum_q u_q A_q, the segment is
    {t : I + t M^{-1/2} U M^{-1/2} psd}, read off the eigenvalues of the
    scaled direction.
    """
    m = p.evaluate(x).mat
    w, v = np.linalg.eigh(m)
    w = np.maximum(w, 1e-14)
    isqrt = v * (1.0 / np.sqrt(w))
    u_mat = np.zeros_like(m)
    for q in range(p.n):
        if u[q] != 0.0:
            u_mat += u[q] * p.coeffs[q + 1].mat
    g = isqrt.T @ u_mat @ isqrt
    g = (g + g.T) / 2.0
    ev = np.linalg.eigvalsh(g)
    pos = ev[ev > 1e-12]
    neg = ev[ev < -1e-12]
    lo = -1.0 / pos.max() if pos.size else -cap
    hi = 1.0 / (-neg.min()) if neg.size else cap
    return lo, hi


def sample_spectrahedron(p: LinearPencil, count: int, seed: int = 0,
                         x0: np.ndarray | None = None,
                         burn: int = 50, thin: int = 3) -> np.ndarray:
    """Hit-and-run samples from the interior of S_A, shape (count, n).

    Deterministic for a fixed seed.  The walk shrinks each chord slightly
    so iterates stay strictly feasible.
    """
    if count <= 0:
        raise InvalidInput("count must be positive")
    n = p.n
    if x0 is None:
        x0 = interior_point(p)
    x = np.asarray(x0, dtype=float).copy()
    if min_eigenvalue(p.evaluate(x)) <= 0:
        raise InvalidInput("starting point is not strictly feasible")
    rng = np.random.default_rng(seed)
    out = np.empty((count, n))
    kept = 0
    step = 0
    while kept < count:
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        lo, hi = _chord(p, x, u)
        # stay off the boundary
        t = rng.uniform(0.999 * lo, 0.999 * hi)
        x = x + t * u
        step += 1
        if step > burn and (step - burn) % thin == 0:
            out[kept] = x
            kept += 1
    return out


def eigen_margin(p: LinearPencil, x: np.ndarray) -> float:
    """Smallest eigenvalue of the pencil at x."""
    return min_eigenvalue(p.evaluate(x))


def mu_grid(a: LinearPencil, b: LinearPencil, r: float = 1.0, R: float = 2.0,
            samples: int = 400, seed: int = 0,
            points: np.ndarray | None = None) -> float:
    """Sampling upper bound on mu: min over drawn x of the z-profile value.

    For fixed x the inner minimum of z^T B(x) z over r <= |z| <= R is
    r^2 lam_min when lam_min >= 0 and R^2 lam_min otherwise.
    """
    if points is None:
        points = sample_spectrahedron(a, samples, seed=seed)
    best = np.inf
    for x in points:
        lam = min_eigenvalue(b.evaluate(x))
        val = (r * r) * lam if lam >= 0 else (R * R) * lam
        if val < best:
            best = val
    return float(best)


def refutation_search(a: LinearPencil, b: LinearPencil, tol: float = 1e-7,
                      samples: int = 400, seed: int = 0, polish: bool = True,
                      points: np.ndarray | None = None) -> dict | None:
    """Search for x with A(x) psd and B(x) not psd.

    Returns {"x", "b_margin", "a_margin"} for a confirmed witness, None
    otherwise.  A witness must satisfy a_margin >= -1e-9 and
    b_margin < -tol; unconfirmed negatives are never reported.
    """
    if points is None:
        points = sample_spectrahedron(a, samples, seed=seed)
    margins = np.array([min_eigenvalue(b.evaluate(x)) for x in points])
    order = np.argsort(margins)

    def confirmed(x):
        am = min_eigenvalue(a.evaluate(x))
        bm = min_eigenvalue(b.evaluate(x))
        if am >= -_WITNESS_FEAS_TOL and bm < -tol:
            return {"x": np.asarray(x, dtype=float),
                    "b_margin": float(bm), "a_margin": float(am)}
        return None

    for idx in order[:3]:
        hit = confirmed(points[idx])
        if hit is not None:
            return hit

    if not polish:
        return None

    # penalized local descent from the most negative candidates
    def objective(x):
        am = min_eigenvalue(a.evaluate(x))
        bm = min_eigenvalue(b.evaluate(x))
        return bm + 1e4 * max(0.0, -am)

    for idx in order[:3]:
        res = optimize.minimize(objective, points[idx], method="Nelder-Mead",
                                options={"maxiter": 400 * a.n,
                                         "xatol": 1e-10, "fatol": 1e-12})
        hit = confirmed(res.x)
        if hit is not None:
            return hit
        # pull slightly inside A if the polish drifted out
        am = min_eigenvalue(a.evaluate(res.x))
        if am < 0:
            base = points[idx]
            for frac in (0.999, 0.99, 0.9, 0.5):
                cand = base + frac * (res.x - base)
                hit = confirmed(cand)
                if hit is not None:
                    return hit
    return None
