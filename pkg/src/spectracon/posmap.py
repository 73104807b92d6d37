"""Feasibility test for the block-matrix containment certificate.

The direct certificate for containment asks for a psd block matrix
C = (C_ij), i, j = 1..k, with l x l blocks, satisfying the linear equations

    sum_ij  a^p_ij C_ij  =  B_p        for p = 0..n.

Feasibility is decided through the margin program

    max  m   s.t.   C psd shifted by -mI,  C solves the equations,

after parametrizing the affine solution set by a particular solution plus
an orthonormal nullspace basis.  A nonnegative optimal margin produces a
validated witness; a clearly negative one certifies that no psd solution
exists.  By default the test runs on the extended pencil 1 (+) A, which
makes it exactly as strong as the order-0 Gram certificate; the plain and
extended tests agree whenever A_0 = I and the A_p are traceless.

The same module hosts the symmetrized Choi matrix of a linear matrix map,
whose spectrum refutes complete positivity, and a cross-check that the
implications between all computed quantities hold on a given instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, InvariantViolation, NumericalFailure
from .pencil import LinearPencil, MapSpec, extend, sym_basis_indices
from .sdpcore import LmiBuilder, SolveStatus, solve
from .symcore import min_eigenvalue

_EQ_TOL = 1e-7
_FEAS_TOL = 1e-8
_INFEAS_TOL = 1e-6


def _svec_indices(d):
    return sym_basis_indices(d)


def _svec(mat):
    d = mat.shape[0]
    out = np.empty(d * (d + 1) // 2)
    for pos, (i, j) in enumerate(_svec_indices(d)):
        out[pos] = mat[i, j] if i == j else np.sqrt(2.0) * mat[i, j]
    return out


def _smat(vec, d):
    out = np.zeros((d, d))
    for pos, (i, j) in enumerate(_svec_indices(d)):
        if i == j:
            out[i, i] = vec[pos]
        else:
            out[i, j] = out[j, i] = vec[pos] / np.sqrt(2.0)
    return out


@dataclass
class CpResult:
    """Outcome of the block-certificate feasibility test."""

    kind: str  # Feasible | Infeasible | Inconclusive
    margin: float
    witness: np.ndarray | None
    extended: bool
    details: dict = field(default_factory=dict)


def _equation_system(a: LinearPencil, b: LinearPencil):
    k, l, n = a.k, b.k, a.n
    d = k * l
    dim = d * (d + 1) // 2
    idx = {pq: pos for pos, pq in enumerate(_svec_indices(d))}
    rows = []
    rhs = []
    for p in range(n + 1):
        amat = a.coeffs[p].mat
        bmat = b.coeffs[p].mat
        nz = np.argwhere(amat != 0.0)
        for u in range(l):
            for v in range(u, l):
                row = np.zeros(dim)
                for i, j in nz:
                    pq = (int(i) * l + u, int(j) * l + v)
                    pq = (min(pq), max(pq))
                    scale = 1.0 if pq[0] == pq[1] else 1.0 / np.sqrt(2.0)
                    row[idx[pq]] += amat[i, j] * scale
                rows.append(row)
                rhs.append(bmat[u, v])
    return np.array(rows), np.array(rhs), d


def cp_sdfp(a: LinearPencil, b: LinearPencil, extended: bool = True,
            **solve_opts) -> CpResult:
    """Decide solvability of the block certificate equations over psd C.

    Feasible results carry a validated witness; Infeasible means the psd
    margin is decisively negative (or the equations themselves are
    inconsistent); anything in the gray band, or a solver breakdown, is
    Inconclusive.
    """
    if a.n != b.n:
        raise InvalidInput("pencils must share the variable count")
    inner = extend(a) if extended else a
    eq, rhs, d = _equation_system(inner, b)
    scale = 1.0 + float(np.linalg.norm(rhs))

    part, _, rank, sv = np.linalg.lstsq(eq, rhs, rcond=None)
    lin_res = float(np.linalg.norm(eq @ part - rhs))
    details = {"equation_residual": lin_res, "rank": int(rank),
               "nullity": eq.shape[1] - int(rank), "dim": d}
    if lin_res > _EQ_TOL * scale:
        return CpResult("Infeasible", float("-inf"), None, extended,
                        {**details, "reason": "linear obstruction"})

    _, svals, vt = np.linalg.svd(eq, full_matrices=True)
    cutoff = max(eq.shape) * np.finfo(float).eps * (svals[0] if svals.size else 1.0)
    nullity = eq.shape[1] - int(np.sum(svals > cutoff))
    null_basis = vt[eq.shape[1] - nullity:] if nullity else np.zeros((0, eq.shape[1]))
    details["nullity"] = nullity

    c_part = _smat(part, d)
    cap = 10.0 * scale + float(np.abs(np.diag(c_part)).max(initial=0.0))
    builder = LmiBuilder(nvars=nullity + 1, sense="max")
    mvar = nullity
    blk = builder.add_block(d)
    for i in range(d):
        for j in range(i, d):
            if c_part[i, j] != 0.0:
                builder.add_const(blk, i, j, c_part[i, j])
    for q in range(nullity):
        zmat = _smat(null_basis[q], d)
        for i in range(d):
            for j in range(i, d):
                if zmat[i, j] != 0.0:
                    builder.add_term(blk, q, i, j, zmat[i, j])
    for i in range(d):
        builder.add_term(blk, mvar, i, i, -1.0)
    capblk = builder.add_block(-1)
    builder.add_const(capblk, 0, 0, cap)
    builder.add_term(capblk, mvar, 0, 0, -1.0)
    builder.set_objective(mvar, 1.0)
    problem = builder.build(metadata={"origin": "cp_sdfp", "extended": extended})

    try:
        sol = solve(problem, **solve_opts)
    except NumericalFailure as exc:
        return CpResult("Inconclusive", float("nan"), None, extended,
                        {**details, "error": str(exc)})
    details["solver_status"] = sol.status.value
    usable = sol.status is SolveStatus.OPTIMAL or (
        sol.status in (SolveStatus.INACCURATE, SolveStatus.ITER_LIMIT)
        and max(sol.residuals.get("primal_res", 1.0),
                sol.residuals.get("dual_res", 1.0)) <= 1e-6
        and sol.residuals.get("gap_rel", 1.0) <= 1e-5)
    if not usable:
        return CpResult("Inconclusive", float("nan"), None, extended, details)

    margin = builder.value_from(sol)
    details["margin"] = margin
    theta = sol.y[:nullity]
    witness = c_part + sum(t * _smat(zrow, d)
                           for t, zrow in zip(theta, null_basis))
    witness = (witness + witness.T) / 2.0
    details["witness_eq_residual"] = float(np.linalg.norm(eq @ _svec(witness) - rhs))
    details["witness_min_eig"] = min_eigenvalue(witness)

    if margin >= -_FEAS_TOL * scale:
        ok = (details["witness_eq_residual"] <= _EQ_TOL * scale
              and details["witness_min_eig"] >= -10.0 * _FEAS_TOL * scale)
        if ok:
            return CpResult("Feasible", float(margin), witness, extended, details)
        return CpResult("Inconclusive", float(margin), witness, extended,
                        {**details, "reason": "witness validation failed"})
    if margin < -_INFEAS_TOL * scale:
        return CpResult("Infeasible", float(margin), None, extended, details)
    return CpResult("Inconclusive", float(margin), None, extended, details)


# ---------------------------------------------------------------------------
# Choi matrix of a matrix map


def choi_matrix(spec: MapSpec) -> np.ndarray:
    """Symmetrized Choi matrix sum_ij E_ij (x) Phi~(E_ij).

    Phi~ feeds the symmetrization (E_ij + E_ji)/2 through the map, which is
    the canonical extension of a map given on symmetric matrices.  A
    negative eigenvalue rules out any completely positive extension.
    """
    k, l = spec.k, spec.l
    out = np.zeros((k * l, k * l))
    for i in range(k):
        for j in range(k):
            e = np.zeros((k, k))
            e[i, j] += 0.5
            e[j, i] += 0.5
            img = spec.apply(e)
            out[i * l:(i + 1) * l, j * l:(j + 1) * l] = img
    return (out + out.T) / 2.0


# ---------------------------------------------------------------------------
# Cross-checks between the machines


def implication_report(cp: CpResult | None = None, lam0=None, moments=(),
                       grid_value: float | None = None,
                       tol: float = 1e-6, strict: bool = True) -> dict:
    """Verify the provable relations between computed quantities.

    Checks, where the inputs allow: the block certificate is solvable
    exactly when the order-0 Gram bound is nonnegative; moment bounds are
    monotone in the order; no lower bound exceeds a sampled upper estimate.
    With strict=True a hard violation raises InvariantViolation; otherwise
    the report only records it.
    """
    report = {"checks": [], "violations": []}

    def record(name, ok, detail):
        report["checks"].append({"name": name, "ok": bool(ok), "detail": detail})
        if not ok:
            report["violations"].append(name)

    if cp is not None and lam0 is not None and cp.kind != "Inconclusive" \
            and getattr(lam0, "reliable", False):
        v = lam0.value
        if cp.kind == "Feasible":
            record("certificate_implies_gram", v >= -tol,
                   f"margin {cp.margin:.2e}, gram bound {v:.2e}")
        else:
            record("gram_implies_certificate", v <= tol,
                   f"margin {cp.margin:.2e}, gram bound {v:.2e}")

    ordered = [m for m in moments if getattr(m, "reliable", False)]
    ordered.sort(key=lambda m: m.order)
    for lo, hi in zip(ordered, ordered[1:]):
        record(f"moment_monotone_{lo.order}_{hi.order}",
               lo.value <= hi.value + tol,
               f"mu({lo.order}) = {lo.value:.6e}, mu({hi.order}) = {hi.value:.6e}")

    if grid_value is not None:
        for m in ordered:
            record(f"moment_below_sampled_{m.order}",
                   m.value <= grid_value + tol,
                   f"mu({m.order}) = {m.value:.6e}, sampled {grid_value:.6e}")

    if strict and report["violations"]:
        raise InvariantViolation(
            "implication chain violated: " + ", ".join(report["violations"]),
            report=report)
    return report
