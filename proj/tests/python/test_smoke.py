import numpy as np
import pytest
import scipy.io

import hodg


def test_meshgen_and_renumber():
    mesh = hodg.generate_mesh("quad", 63, 64, shuffle=7)
    assert mesh.n_cells == 4032
    assert mesh.validate() == []
    renumbered, before, after = hodg.renumber(mesh)
    assert renumbered.n_cells == 4032
    assert after <= 70
    assert before > 10 * after
    assert hodg.bandwidth(renumbered) == after
    order = hodg.rcm_order(mesh)
    assert sorted(order) == list(range(4032))


def test_spy_file_reads_as_symmetric_pattern(tmp_path):
    mesh = hodg.generate_mesh("quad", 4, 1)
    path = tmp_path / "strip.mtx"
    hodg.export_spy(mesh, str(path))
    header = [l for l in path.read_text().splitlines() if not l.startswith("%")][0]
    assert header.split() == ["4", "4", "7"]
    a = scipy.io.mmread(str(path)).toarray()
    assert a.shape == (4, 4)
    assert np.count_nonzero(a) == 10
    assert (a == a.T).all()
    expected = np.eye(4) + np.eye(4, k=1) + np.eye(4, k=-1)
    assert ((a != 0) == (expected != 0)).all()


def test_renumbered_spy_is_banded(tmp_path):
    mesh = hodg.generate_mesh("tri", 12, 12, shuffle=3)
    _, _, after = hodg.renumber(mesh)
    path = tmp_path / "after.mtx"
    hodg.export_spy(mesh, str(path), renumbered=True)
    a = scipy.io.mmread(str(path)).tocoo()
    assert np.abs(a.row - a.col).max() == after


def test_freestream_run_stays_at_round_off():
    out = hodg.run({"mesh.nx": 6, "mesh.ny": 4, "solver.order": 2, "solver.max_iterations": 10})
    assert out["cells"] == 24
    assert list(out["iterations"]) == list(range(1, 11))
    assert out["residuals"].shape == (10, 4)
    assert out["residuals"].max() < 1e-12
    assert out["state"].shape == (24, 4, 6)
    assert np.allclose(out["state"][:, 0, 0], 1.0)
    assert out["files"] == []


def test_mixed_precision_history():
    out = hodg.run({
        "mesh.nx": 8, "mesh.ny": 8, "solver.max_iterations": 20,
        "flow.initial": "pulse", "precision.mode": "mp_fixed", "precision.switch_iter": 5,
    })
    assert list(out["precision"][:5]) == [32] * 5
    assert list(out["precision"][5:]) == [64] * 15
    assert out["precision_event"]["iteration"] == 5


def test_bad_config_raises():
    with pytest.raises(hodg.HodgError, match="solver.ordr"):
        hodg.run({"solver.ordr": 1})
    with pytest.raises(hodg.HodgError):
        hodg.run({"solver.order": 7})


def test_roofline():
    assert hodg.roofline_attainable(1e12, 1e11, 0.5) == 5e10
    assert hodg.roofline_attainable(1e12, 1e11, 100.0) == 1e12
    sample = {"wall_seconds": 1.0, "flops": 1e10, "dram_bytes": 8e10}
    csv = hodg.roofline_csv([("dg_p1", sample)], ["gpu:7e12:9e11"])
    assert csv.splitlines()[-1] == "dg_p1,0.125,1e+10,gpu,1.125e+11,memory"


def test_flop_count_scales_with_mesh():
    small = hodg.count_flops_and_bytes(hodg.generate_mesh("quad", 100, 100), 1)
    large = hodg.count_flops_and_bytes(hodg.generate_mesh("quad", 200, 200), 1)
    assert large["flops"] / small["flops"] == pytest.approx(4.0, rel=0.01)
    sp = hodg.count_flops_and_bytes(hodg.generate_mesh("quad", 100, 100), 1, precision_bits=32)
    assert small["bytes"] == 2 * sp["bytes"]


def test_metrics():
    assert round(100 * hodg.pairwise_distance(2900, 2934), 2) == 1.17
    assert hodg.divergence([2900, 2934, 3180]) == pytest.approx(
        (34 / 2900 + 280 / 2900 + 246 / 2934) / 3, rel=1e-15)
    assert hodg.rdtp(8.1, 1.0) == 8.1


def test_min_reduce():
    rng = np.random.default_rng(1)
    v = rng.random(1000)
    assert hodg.min_reduce(v.tolist()) == v.min()
    assert hodg.min_reduce(v.tolist(), block=7) == v.min()
