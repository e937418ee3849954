import math

import pytest

import dcmsim


def test_field_and_measurement():
    field = dcmsim.FieldSpec()
    field.seed = 3
    field.p0 = -18.0
    field.path_loss_exp = 4.0
    near = dcmsim.rssi(field, 0, [0.0, 0.0], 1, [0.3, 0.0])
    far = dcmsim.rssi(field, 0, [0.0, 0.0], 1, [3.0, 0.0])
    assert near > far
    sample = dcmsim.try_measure(field, 0, [0.0, 0.0], 1, [0.3, 0.0], -30.0, -25.0)
    assert sample is not None
    assert sample.y == pytest.approx(near - (-25.0))


def test_gp_fit_and_evaluate():
    hyper = dcmsim.GpHyper()
    samples = [
        dcmsim.PairSample([0.0, 0.0], [0.5, 0.0], 2.0),
        dcmsim.PairSample([0.0, 0.0], [1.0, 0.0], -1.0),
    ]
    model = dcmsim.GpModel.fit(hyper, samples)
    ev = model.evaluate([0.0, 0.0], [0.5, 0.0])
    assert ev.mu == pytest.approx(2.0, abs=0.05)
    assert ev.var >= 0.0
    assert ev.h == pytest.approx(ev.mu - ev.var)
    grown = model.admit(dcmsim.PairSample([0.0, 0.0], [1.5, 0.0], -3.0), 0.05, 100)
    assert len(grown.samples) == 3


def test_graph_and_mst():
    import numpy as np

    r = np.full((3, 3), -40.0)
    for i, j in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]:
        r[i, j] = -20.0
    g = dcmsim.build_graph(r, -25.0)
    assert sorted(g.edges) == [(0, 1), (0, 2), (1, 2)]
    assert dcmsim.is_strongly_connected(g)
    g.weights = {(0, 1): 1.0, (0, 2): 5.0, (1, 2): 2.0}
    tree = dcmsim.min_spanning_tree(g)
    assert sorted(tree.tree_edges) == [(0, 1), (1, 2)]

    adjacency = np.zeros((3, 3))
    for i, j in g.edges:
        adjacency[i, j] = adjacency[j, i] = 1.0
    assert dcmsim.algebraic_connectivity(adjacency) == pytest.approx(3.0)


def test_qp_projection():
    p = dcmsim.QpProblem()
    p.n_robots = 1
    p.u_ref = [0.2, 0.0]
    p.alpha = [1.0]
    row = dcmsim.ConstraintRow()
    row.coeffs = {0: [1.0, 0.0]}
    row.rhs = 0.3
    row.relaxable = False
    p.rows = [row]
    sol = dcmsim.solve_qp(p)
    assert sol.status == dcmsim.QpStatus.Optimal
    assert sol.u[0] == pytest.approx(0.3)
    assert sol.u[1] == pytest.approx(0.0)


def test_ring_run_and_summary():
    s = dcmsim.make_ring_scenario(3, 42)
    s.steps = 25
    records = dcmsim.run(s)
    assert len(records) == 25
    summary = dcmsim.summarize(s, records)
    assert summary.min_min_dist > s.r_s - 1e-2
    assert summary.min_lambda2 > 0.0
    assert summary.infeasible_count == 0
    text = dcmsim.format_scenario(s)
    assert "[robots]" in text

    s.set_controller("mccst", 0.8)
    assert s.controller_type() == "mccst"
    baseline = dcmsim.run(s)
    assert len(baseline) == 25
