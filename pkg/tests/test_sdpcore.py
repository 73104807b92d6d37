import numpy as np
import pytest

from spectracon.errors import InvalidInput
from spectracon.pencil import elliptope_pencil, pencil
from spectracon.sdpa import export_sdpa, parse_sdpa
from spectracon.sdpcore import (LmiBuilder, PrimalBuilder, SdpProblem,
                                SolveStatus, compute_residuals,
                                feasibility_probe, solve)

TOL = 1e-8


def _max_t_below_diag(d):
    """max t with t I <= diag(d), analytic optimum min(d)."""
    lb = LmiBuilder(nvars=1, sense="max")
    blk = lb.add_block(-len(d))
    for i, v in enumerate(d):
        lb.add_const(blk, i, i, v)
        lb.add_term(blk, 0, i, i, -1.0)
    lb.set_objective(0, 1.0)
    return lb, lb.build()


def test_analytic_diag_lmi():
    lb, prob = _max_t_below_diag([3.0, 1.0, 2.0])
    sol = solve(prob)
    assert sol.status is SolveStatus.OPTIMAL
    assert lb.value_from(sol) == pytest.approx(1.0, abs=TOL)


def test_lambda_max_dense():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(5, 5))
    m = (m + m.T) / 2
    lb = LmiBuilder(nvars=1, sense="min")
    blk = lb.add_block(5)
    for i in range(5):
        for j in range(i, 5):
            lb.add_const(blk, i, j, -m[i, j])
        lb.add_term(blk, 0, i, i, 1.0)
    lb.set_objective(0, 1.0)
    sol = solve(lb.build())
    assert sol.status is SolveStatus.OPTIMAL
    assert lb.value_from(sol) == pytest.approx(
        float(np.linalg.eigvalsh(m).max()), abs=1e-7)


def test_primal_builder_min_eig():
    rng = np.random.default_rng(4)
    c = rng.normal(size=(4, 4))
    c = (c + c.T) / 2
    pb = PrimalBuilder()
    blk = pb.add_block(4)
    for i in range(4):
        for j in range(4):
            if c[i, j] != 0.0:
                pb.add_cost(blk, i, j, c[i, j])
    con = pb.new_constraint(1.0)
    for i in range(4):
        pb.add_entry(con, blk, i, i, 1.0)
    sol = solve(pb.build())
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.primal_value == pytest.approx(
        float(np.linalg.eigvalsh(c).min()), abs=1e-7)


def _random_problem(seed, blocks=(3, -2), m=6):
    rng = np.random.default_rng(seed)
    pb = PrimalBuilder()
    handles = [pb.add_block(s) for s in blocks]
    for h, s in zip(handles, blocks):
        d = abs(s)
        for i in range(d):
            for j in range((i if s > 0 else i), (i + 1 if s < 0 else d)):
                pb.add_cost(h, i, j, float(rng.normal()))
    # feasible by construction: random PSD target X0, b = A(X0)
    x0 = []
    for s in blocks:
        d = abs(s)
        if s > 0:
            g = rng.normal(size=(d, d))
            x0.append(g @ g.T + 0.1 * np.eye(d))
        else:
            x0.append(np.diag(rng.uniform(0.5, 2.0, size=d)))
    for _ in range(m):
        rhs = 0.0
        rows = []
        for h, s, xb in zip(handles, blocks, x0):
            d = abs(s)
            for i in range(d):
                for j in range(i, (i + 1 if s < 0 else d)):
                    if rng.uniform() < 0.4:
                        v = float(rng.normal())
                        rows.append((h, i, j, v))
                        rhs += v * xb[i, j]
        con = pb.new_constraint(rhs)
        for h, i, j, v in rows:
            pb.add_entry(con, h, i, j, v)
    return pb.build()


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_weak_duality_and_residuals(seed):
    prob = _random_problem(seed)
    sol = solve(prob)
    assert sol.status is SolveStatus.OPTIMAL
    res = sol.residuals
    assert res["primal_res"] <= 1e-7
    assert res["dual_res"] <= 1e-7
    # weak duality at the returned pair
    assert res["primal_obj"] - res["dual_obj"] >= -1e-7

    # independent recomputation of every reported residual
    again = compute_residuals(prob, sol.x_blocks, sol.y, sol.s_blocks)
    for key, val in sol.residuals.items():
        assert again[key] == pytest.approx(val, rel=1e-9, abs=1e-12)

    # primal residual by hand: || A(X) - b || / (1 + ||b||)
    ax = prob.apply_a(sol.x_blocks)
    prim = float(np.linalg.norm(ax - prob.b)) / (1.0 + prob.norm_b())
    assert prim == pytest.approx(res["primal_res"], rel=1e-6, abs=1e-12)
    # dual residual by hand: || A'y + S - C ||_F over all blocks
    at = prob.apply_at(sol.y)
    sq = 0.0
    for q, size in enumerate(prob.block_sizes):
        diff = at[q] + sol.s_blocks[q] - prob.c_blocks[q]
        sq += float(np.sum(np.square(diff)))
    assert np.sqrt(sq) / (1.0 + prob.norm_c()) == pytest.approx(
        res["dual_res"], rel=1e-6, abs=1e-12)


def test_determinism():
    prob = _random_problem(7)
    s1 = solve(prob)
    s2 = solve(prob)
    assert np.array_equal(s1.y, s2.y)
    assert s1.iterations == s2.iterations
    for a, b in zip(s1.x_blocks, s2.x_blocks):
        assert np.array_equal(a, b)


def test_primal_infeasible_certificate():
    pb = PrimalBuilder()
    blk = pb.add_block(2)
    pb.add_cost(blk, 0, 0, 1.0)
    con = pb.new_constraint(-1.0)
    pb.add_entry(con, blk, 0, 0, 1.0)
    pb.add_entry(con, blk, 1, 1, 1.0)  # trace X = -1, impossible
    prob = pb.build()
    sol = solve(prob)
    assert sol.status is SolveStatus.PRIMAL_INFEASIBLE
    # Farkas ray: b'y > 0
    assert float(sol.y @ prob.b) > 0


def test_lmi_infeasible_maps_through_interpret():
    lb = LmiBuilder(nvars=1, sense="max")
    blk = lb.add_block(-2)
    # x - 1 >= 0 and -x - 1 >= 0 cannot hold together
    lb.add_const(blk, 0, 0, -1.0)
    lb.add_term(blk, 0, 0, 0, 1.0)
    lb.add_const(blk, 1, 1, -1.0)
    lb.add_term(blk, 0, 1, 1, -1.0)
    lb.set_objective(0, 1.0)
    sol = solve(lb.build())
    assert LmiBuilder.interpret(sol) == "infeasible"


def test_lmi_unbounded_maps_through_interpret():
    lb = LmiBuilder(nvars=1, sense="max")
    blk = lb.add_block(-1)
    lb.add_const(blk, 0, 0, 1.0)
    lb.add_term(blk, 0, 0, 0, 1.0)  # 1 + x >= 0, maximize x
    lb.set_objective(0, 1.0)
    sol = solve(lb.build())
    assert LmiBuilder.interpret(sol) == "unbounded"


def test_sdpa_round_trip_exact(tmp_path):
    prob = _random_problem(11)
    path1 = tmp_path / "p1.dat-s"
    path2 = tmp_path / "p2.dat-s"
    export_sdpa(prob, path1)
    parsed = parse_sdpa(path1)
    assert parsed.block_sizes == prob.block_sizes
    assert np.array_equal(parsed.b, prob.b)
    for a, b in zip(parsed.c_blocks, prob.c_blocks):
        assert np.array_equal(a, b)
    # idempotence: writing the parsed problem reproduces the file verbatim
    export_sdpa(parsed, path2)
    assert path1.read_text() == path2.read_text()
    # and the parsed problem solves to the same value
    v1 = solve(prob).value
    v2 = solve(parsed).value
    assert v2 == pytest.approx(v1, abs=TOL)


def test_parse_sdpa_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.dat-s"
    bad.write_text("2\n2\n3\n1.0 2.0\n")  # two blocks declared, one size given
    with pytest.raises(InvalidInput):
        parse_sdpa(bad)


def test_probe_nonempty_and_empty():
    probe = feasibility_probe(elliptope_pencil(3))
    assert probe.kind == "NonEmpty"
    assert probe.point.shape == (3,)
    empty = pencil([np.diag([-1.0, -1.0]), np.diag([1.0, -1.0])])
    assert feasibility_probe(empty).kind == "Empty"


def test_problem_validation():
    with pytest.raises(InvalidInput):
        SdpProblem(block_sizes=(2,), c_blocks=[np.zeros((3, 3))],
                   a_blocks=[np.zeros((1, 4))], b=np.zeros(1))
