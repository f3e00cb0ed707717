"""End-to-end command-line surface tests (in-process main())."""

import json

import numpy as np

from threebody4d import cli


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = cli.main(list(argv) + ["--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def test_verify_default_passes(tmp_path):
    code, text = run(tmp_path, "verify", "--checks", "symplectic,composition,amatrix")
    assert code == 0
    assert text.count("PASS") == 3
    # symplecticity error reported and under tolerance
    line = [l for l in text.splitlines() if l.startswith("symplectic")][0]
    assert float(line.split("=")[1].split("(")[0]) < 1e-9


def test_verify_invariant_suite(tmp_path):
    code, text = run(tmp_path, "verify", "--checks", "invariant")
    assert code == 0
    assert "invariant" in text and "PASS" in text


def test_verify_degenerate_momenta_refused(tmp_path, capsys):
    code = cli.main(["verify", "--mu1", "0.7", "--mu2", "0.7"])
    assert code == 2
    assert "DegenerateMomenta" in capsys.readouterr().err


def test_verify_amatrix_only(tmp_path):
    code, text = run(tmp_path, "verify", "--checks", "amatrix", "--seed", "7")
    assert code == 0
    lines = [l for l in text.splitlines() if ":" in l]
    assert len(lines) == 1 and lines[0].startswith("amatrix")


def test_verify_unknown_check(tmp_path):
    code, _ = run(tmp_path, "verify", "--checks", "nosuch")
    assert code == 2


def test_equilibrium_isosceles_minimum(tmp_path):
    code, text = run(tmp_path, "equilibrium", "--isosceles", "-n", "1", "-t", "0.01")
    assert code == 0
    rep = json.loads(text)
    assert rep["classification"] == "minimum"
    assert all(e > 0 for e in rep["eigenvalues"])


def test_equilibrium_isosceles_above_line_not_minimum(tmp_path):
    code, text = run(tmp_path, "equilibrium", "--isosceles", "-n", "1", "-t", "0.9")
    assert code == 0
    rep = json.loads(text)
    assert rep["classification"] != "minimum"


def test_equilibrium_general_kepler(tmp_path):
    code, text = run(tmp_path, "equilibrium", "--general", "-m", "1,2,3",
                     "-u", "0.01", "--pair", "2,3")
    assert code == 0
    rep = json.loads(text)
    assert rep["classification"] == "minimum"
    assert abs(rep["kepler1"] - 1.0) < 1e-3
    assert abs(rep["kepler2"] - 1.0) < 1e-3


def test_equilibrium_missing_mode(tmp_path):
    code, _ = run(tmp_path, "equilibrium")
    assert code == 2


def test_scan_isosceles_single_hump(tmp_path):
    code, text = run(tmp_path, "scan", "--isosceles", "-n", "1",
                     "--t-grid", "0.001:0.99:40:log")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("param,mu1,mu2,h,b,neg_inv_h,class,eig1")
    bs = np.array([float(l.split(",")[4]) for l in lines[1:]])
    assert np.all(bs < 0.25)
    k = int(np.argmax(bs))
    assert np.all(np.diff(bs[:k + 1]) > 0) and np.all(np.diff(bs[k:]) < 0)


def test_scan_region_map_six_labels(tmp_path):
    code, text = run(tmp_path, "scan", "--region-map",
                     "--n-grid", "0.1:5:50", "--t-grid", "0.02:0.98:50")
    assert code == 0
    lines = text.splitlines()[1:]
    labels = {l.split(",")[4] for l in lines} - {"boundary"}
    assert len(labels) == 6


def test_scan_empty_grid_refused(tmp_path):
    code, _ = run(tmp_path, "scan", "--isosceles", "-n", "1", "--t-grid", "")
    assert code == 2


def test_scan_requires_mode(tmp_path):
    code, _ = run(tmp_path, "scan")
    assert code == 2


def test_integrate_near_equilibrium_compare(tmp_path):
    from threebody4d import equilibria
    rep = equilibria.isosceles_equilibrium(1.0, 0.25)
    qs = ",".join(f"{v:.17g}" for v in rep.q)
    period = 2 * 3.14159 / rep.omega1
    code, text = run(tmp_path, "integrate", "--system", "reduced",
                     "-m", "1,1,1", "--mu1", f"{rep.mu1:.17g}",
                     "--mu2", f"{rep.mu2:.17g}", "-q", qs,
                     "-p", "0.001,-0.0005,0.0008,-0.0002",
                     "--t-end", f"{period:.6g}", "--tol", "1e-11", "--compare")
    assert code == 0
    comp = [l for l in text.splitlines() if l.startswith("# compare")][0]
    dev = float(comp.split("max_qp_deviation = ")[1].split(",")[0])
    assert dev < 1e-6


def test_integrate_at_equilibrium_constant(tmp_path):
    from threebody4d import equilibria
    rep = equilibria.isosceles_equilibrium(1.0, 0.2)
    qs = ",".join(f"{v:.17g}" for v in rep.q)
    code, text = run(tmp_path, "integrate", "--system", "reduced",
                     "-m", "1,1,1", "--mu1", f"{rep.mu1:.17g}",
                     "--mu2", f"{rep.mu2:.17g}", "-q", qs, "-p", "0,0,0,0",
                     "--t-end", "2.0", "--tol", "1e-11")
    assert code == 0
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    first = np.array([float(v) for v in lines[1].split(",")[1:9]])
    last = np.array([float(v) for v in lines[-1].split(",")[1:9]])
    assert np.max(np.abs(last - first)) < 1e-8


def test_integrate_collision_domain_exit(tmp_path):
    code, text = run(tmp_path, "integrate", "--system", "reduced",
                     "-m", "1,1,1", "--mu1", "1.0", "--mu2", "0",
                     "-q", "0.5,0,0,2", "-p-0.6,0,0,0", "--t-end", "10")
    assert code == 0
    assert text.startswith("# domain_exit:")
    assert len(text.splitlines()) > 10  # partial trajectory written


def test_integrate_bad_momenta(tmp_path, capsys):
    code = cli.main(["integrate", "--mu1", "0.1", "--mu2", "0.5"])
    assert code == 2


def test_integrate_partial_system_monitors(tmp_path):
    code, text = run(tmp_path, "integrate", "--system", "partial",
                     "-m", "1,2,3", "--mu1", "1.3", "--mu2", "0.4",
                     "-q", "1.1,0.1,-0.2,0.9", "-p", "0.02,0.01,0.03,0.01",
                     "--t-end", "0.5", "--tol", "1e-10")
    assert code == 0
    header = text.splitlines()[0].split(",")
    assert header[:9] == ["t", "q1", "q2", "q3", "q4", "psi1", "psi2",
                          "theta1", "theta2"]
    assert "c1" in header and "p_theta2" in header
    c1_col = header.index("c1")
    vals = [abs(float(l.split(",")[c1_col])) for l in text.splitlines()[1:]]
    assert max(vals) < 1e-8  # starts on the invariant set and stays there


def test_integrate_full_system(tmp_path):
    code, text = run(tmp_path, "integrate", "--system", "full",
                     "-m", "1,1,1", "--mu1", "1.0", "--mu2", "0.3",
                     "-q", "1.1,0.1,-0.2,0.9", "-p", "0,0,0,0",
                     "--t-end", "0.5")
    assert code == 0
    header = text.splitlines()[0].split(",")
    assert header[1] == "x1_0" and "mu1" in header and "H" in header
    mu1_col = header.index("mu1")
    vals = [float(l.split(",")[mu1_col]) for l in text.splitlines()[1:]]
    assert max(vals) - min(vals) < 1e-9  # conserved along the flow


def test_integrate_json_output(tmp_path):
    code, text = run(tmp_path, "integrate", "--system", "reduced",
                     "-m", "1,1,1", "--mu1", "1.0", "--mu2", "0.3",
                     "-q", "1.1,0.1,-0.2,0.9", "-p", "0,0,0,0",
                     "--t-end", "0.2", "--format", "json")
    assert code == 0
    obj = json.loads(text)
    assert obj["domain_exit"] is None
    assert "q1" in obj["states"] and "H" in obj["monitors"]


def test_integrate_midpoint_method(tmp_path):
    code, text = run(tmp_path, "integrate", "--system", "reduced",
                     "-m", "1,1,1", "--mu1", "1.0", "--mu2", "0.3",
                     "-q", "1.1,0.1,-0.2,0.9", "-p", "0,0,0,0",
                     "--t-end", "0.3", "--method", "midpoint", "--dt", "0.001",
                     "--monitor-every", "50")
    assert code == 0
    lines = text.splitlines()
    h_col = lines[0].split(",").index("H")
    hs = [float(l.split(",")[h_col]) for l in lines[1:]]
    # bounded O(dt^2) oscillation, no blow-up
    assert max(abs(h - hs[0]) for h in hs) < 1e-4 * abs(hs[0])


def test_deterministic_output(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["scan", "--isosceles", "-n", "1.5", "--t-grid", "0.01:0.9:25"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_scan_worker_pool_identical_output(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["scan", "--isosceles", "-n", "1.0", "--t-grid", "0.05:0.6:12"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--workers", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    code, text = run(tmp_path, "verify", "--checks", "symplectic", "--seed", "3")
    code2, text2 = run(tmp_path, "verify", "--checks", "symplectic", "--seed", "3")
    assert text == text2


def test_config_file_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# scan configuration\nisosceles = true\nn = 2.0\n"
                   "t_grid = 0.05:0.5:5\nformat = csv\n")
    out1 = tmp_path / "o1.csv"
    assert cli.main(["scan", "--config", str(cfg), "--out", str(out1)]) == 0
    lines = out1.read_text().splitlines()
    assert len(lines) == 6
    # explicit flag beats the file value
    out2 = tmp_path / "o2.csv"
    assert cli.main(["scan", "--config", str(cfg), "--t-grid", "0.05:0.5:3",
                     "--out", str(out2)]) == 0
    assert len(out2.read_text().splitlines()) == 4


def test_json_format(tmp_path):
    code, text = run(tmp_path, "scan", "--isosceles", "-n", "1",
                     "--t-grid", "0.1,0.2", "--format", "json")
    assert code == 0
    rows = json.loads(text)
    assert len(rows) == 2 and rows[0]["class"] == "minimum"


def test_full_precision_roundtrip(tmp_path):
    code, text = run(tmp_path, "equilibrium", "--isosceles", "-n", "1", "-t", "0.3")
    rep = json.loads(text)
    from threebody4d import equilibria
    direct = equilibria.isosceles_equilibrium(1.0, 0.3)
    assert rep["mu1"] == direct.mu1  # lossless float round-trip
    assert rep["h"] == direct.h
