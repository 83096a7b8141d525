import math

import numpy as np
import pytest

import ssrk


def test_matrix_round_trip(tmp_path):
    a = ssrk.SparseMatrix.from_dense(np.array([[1.0, 0.0], [0.0, 2.0]]))
    path = tmp_path / "diag.mtx"
    ssrk.write_matrix_market(a, str(path))
    assert ssrk.read_matrix_market(str(path)) == a
    np.testing.assert_array_equal(a.to_dense(), [[1.0, 0.0], [0.0, 2.0]])


def test_zero_row_rejected():
    with pytest.raises(ValueError):
        ssrk.SparseMatrix.from_dense(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_gramian_and_graph():
    a = ssrk.SparseMatrix.from_dense(np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]]))
    np.testing.assert_array_equal(ssrk.gramian(a).to_dense(), [[1, 0, 1], [0, 4, 2], [1, 2, 2]])
    assert ssrk.graph_edges(a) == [(0, 2), (1, 2)]


def test_structured_bounds():
    assert ssrk.structural_lower_bound("path", 7) == 3
    assert ssrk.structural_lower_bound("banded", 10, 1, 0) == 5
    assert ssrk.structural_lower_bound("regular", 10, 3) == 5
    cycle = ssrk.load_matrix("cycle:12", seed=1)
    assert len(ssrk.max_independent_set(cycle)) == 6


def test_solve_trace():
    system = ssrk.plant_solution(ssrk.load_matrix("block:30:3", seed=2), seed=3)
    trace = ssrk.solve(system, method="nssrk", iterations=200, tolerance=1e-300, seed=4)
    assert trace["selectable_size"][0] == 30
    assert set(trace["selectable_size"][1:]) == {29}
    errors = trace["sq_error"]
    assert all(b <= a * (1 + 1e-12) + 1e-28 for a, b in zip(errors, errors[1:]))
    assert errors[-1] < errors[0]


def test_identity_gssrk_terminates():
    system = ssrk.plant_solution(ssrk.SparseMatrix.identity(5), seed=1)
    trace = ssrk.solve(system, method="gssrk", tolerance=1e-300)
    assert trace["stop"] == "selectable_set_empty"
    assert len(trace["iteration"]) == 6


def test_bounds_on_identity():
    report = ssrk.bounds(ssrk.SparseMatrix.identity(3))
    assert math.isclose(report["factor_ssrk_full_set"], 2 / 3)
    assert math.isclose(report["factor_rgrk_theta_0.5"], 7 / 12)


def test_bench_is_deterministic():
    kwargs = dict(methods=["rk", "gssrk"], trials=4, iterations=50, seed=9)
    first = ssrk.bench("circulant:20", **kwargs)
    second = ssrk.bench("circulant:20", threads=2, **kwargs)
    assert first == second
    assert len(first["gssrk"]["mean_sq_error"]) == 51


def test_verify_passes_on_path():
    passed, checks = ssrk.verify(ssrk.load_matrix("path:12"))
    assert passed
    assert all(c["passed"] for c in checks)
