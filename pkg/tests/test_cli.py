"""Tests for the command-line interface: state input, JSON reports, CSV
sweeps, simulation records, the reconstruction pipeline and exit codes."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from biphoton import cli, measurement, qutrit


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


# ---------------------------------------------------------------------------
# quantify

def test_quantify_maximally_entangled_qutrit(capsys):
    doc = run_json(capsys, "quantify", "--kind", "qutrit",
                   "--amplitudes", "[0,1,0]")
    ent = doc["entanglement"]
    assert ent["schmidt_k"] == pytest.approx(2.0, abs=1e-12)
    assert ent["concurrence"] == pytest.approx(1.0, abs=1e-12)
    assert ent["entropy"] == pytest.approx(1.0, abs=1e-12)
    assert doc["polarization"]["degree_p"] == pytest.approx(0.0, abs=1e-12)


def test_quantify_product_qutrit(capsys):
    doc = run_json(capsys, "quantify", "--kind", "qutrit",
                   "--amplitudes", "[1,0,0]")
    assert doc["entanglement"]["schmidt_k"] == pytest.approx(1.0, abs=1e-12)
    assert doc["polarization"]["degree_p"] == pytest.approx(1.0, abs=1e-12)


def test_quantify_maximal_ququart(capsys):
    amp = 1 / math.sqrt(2)
    doc = run_json(capsys, "quantify", "--kind", "ququart",
                   "--amplitudes", f"[{amp},0,0,{amp}]")
    ent = doc["entanglement"]
    assert ent["schmidt_k"] == pytest.approx(4.0, abs=1e-10)
    assert ent["i_concurrence"] == pytest.approx(math.sqrt(1.5), abs=1e-10)


def test_quantify_family_input(capsys):
    doc = run_json(capsys, "quantify", "--kind", "ququart",
                   "--family", "psi_phi", "--param", str(math.pi / 4))
    assert doc["entanglement"]["schmidt_k"] == pytest.approx(4.0, abs=1e-10)


def test_quantify_complex_amplitudes(capsys):
    doc = run_json(capsys, "quantify", "--kind", "qutrit",
                   "--amplitudes", '[{"re":0,"im":1},0,0]')
    assert doc["amplitudes"][0]["im"] == pytest.approx(1.0)


def test_quantify_dump_density(capsys):
    doc = run_json(capsys, "quantify", "--kind", "qutrit",
                   "--amplitudes", "[0,1,0]", "--dump-density")
    rho = doc["density_matrix"]
    assert len(rho) == 4
    assert rho[1][1]["re"] == pytest.approx(0.5)
    doc = run_json(capsys, "quantify", "--kind", "ququart",
                   "--amplitudes", "[1,0,0,0]", "--dump-density")
    assert len(doc["density_matrix"]) == 16


def test_quantify_malformed_amplitudes(capsys):
    code, _, err = run_cli(capsys, "quantify", "--kind", "qutrit",
                           "--amplitudes", "not json")
    assert code == 2
    assert err


def test_quantify_wrong_amplitude_count(capsys):
    code, _, _ = run_cli(capsys, "quantify", "--kind", "qutrit",
                         "--amplitudes", "[1,0,0,0]")
    assert code == 2


def test_quantify_zero_state(capsys):
    code, _, _ = run_cli(capsys, "quantify", "--kind", "qutrit",
                         "--amplitudes", "[0,0,0]")
    assert code == 2


def test_output_byte_identical(capsys):
    args = ("quantify", "--kind", "qutrit", "--amplitudes", "[0.6,0,0.8]")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


# ---------------------------------------------------------------------------
# compare-2qubit

def test_compare_2qubit_contrast(capsys):
    doc = run_json(capsys, "compare-2qubit", "--kind", "ququart",
                   "--amplitudes", "[1,0,0,0]")
    assert doc["two_qudit"]["schmidt_k"] == pytest.approx(2.0, abs=1e-12)
    assert doc["two_qubit_model"]["schmidt_k"] == pytest.approx(1.0, abs=1e-12)
    assert doc["ratio"] == pytest.approx(2.0, abs=1e-12)


# ---------------------------------------------------------------------------
# sweep

def parse_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    return header, rows


def test_sweep_fig1_extrema(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "fig1", "--grid", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["c_plus", "K", "C", "S_r"]
    assert len(rows) == 5
    by_cp = {round(r[0], 6): r for r in rows}
    for cp in (-1.0, 0.0, 1.0):
        assert by_cp[cp][1] == pytest.approx(2.0, abs=1e-12)
        assert by_cp[cp][2] == pytest.approx(1.0, abs=1e-12)
        assert by_cp[cp][3] == pytest.approx(1.0, abs=1e-12)


def test_sweep_fig4_values(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "fig4", "--grid", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["phi", "K", "C_I", "S_r"]
    # phi = pi/4 row: the maximally entangled point
    row = rows[1]
    assert row[0] == pytest.approx(math.pi / 4)
    assert row[1] == pytest.approx(4.0, abs=1e-10)
    assert row[3] == pytest.approx(2.0, abs=1e-10)


def test_sweep_fig5_asymmetry(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "fig5", "--grid", "5")
    assert code == 0
    _, rows = parse_csv(out)
    assert rows[1][0] == pytest.approx(math.pi / 4)
    assert rows[1][1] == pytest.approx(2.0, abs=1e-10)
    assert rows[3][0] == pytest.approx(3 * math.pi / 4)
    assert rows[3][1] == pytest.approx(4.0, abs=1e-10)


def test_sweep_writes_file(tmp_path, capsys):
    out_path = tmp_path / "fig1.csv"
    code, _, _ = run_cli(capsys, "sweep", "--family", "fig1",
                         "--grid", "11", "--out", str(out_path))
    assert code == 0
    header, rows = parse_csv(out_path.read_text())
    assert header == ["c_plus", "K", "C", "S_r"]
    assert len(rows) == 11


def test_sweep_unwritable_path(capsys):
    code, _, err = run_cli(capsys, "sweep", "--family", "fig1",
                           "--out", "/nonexistent-dir/x.csv")
    assert code == 3
    assert err


# ---------------------------------------------------------------------------
# simulate

def test_simulate_ideal_record(capsys):
    doc = run_json(capsys, "simulate", "--kind", "qutrit",
                   "--amplitudes", "[0,1,0]", "--pairs", "1000000")
    rec = measurement.CoincidenceRecord.from_dict(doc)
    w = rec.conditional_probabilities()
    assert w["H|V"] == pytest.approx(0.5)
    assert w["V|H"] == pytest.approx(0.5)


def test_simulate_sampled_deterministic(capsys):
    args = ("simulate", "--kind", "qutrit", "--amplitudes", "[0.6,0,0.8]",
            "--noise", "sampled", "--pairs", "100000", "--seed", "5")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["seed"] == 5
    assert doc["mode"] == "sampled"


def test_simulate_seed_env_fallback(capsys, monkeypatch):
    argv = ("simulate", "--kind", "qutrit", "--amplitudes", "[0.6,0,0.8]",
            "--noise", "sampled", "--pairs", "100000")
    monkeypatch.setenv("BIPHOTON_SEED", "77")
    _, out_env, _ = run_cli(capsys, *argv)
    monkeypatch.delenv("BIPHOTON_SEED")
    _, out_flag, _ = run_cli(capsys, *argv, "--seed", "77")
    assert out_env == out_flag


# ---------------------------------------------------------------------------
# reconstruct

def write_records(tmp_path, state, kinds=("natural", "rotated45")):
    paths = []
    for basis in kinds:
        cfg = measurement.ExperimentConfig(total_pairs=10**6, basis=basis)
        rec = measurement.expected_coincidences(state, cfg)
        p = tmp_path / f"{basis}.json"
        p.write_text(json.dumps(rec.to_dict()) + "\n")
        paths.append(str(p))
    return paths


def test_reconstruct_from_files(tmp_path, capsys):
    q = qutrit.make_qutrit(np.exp(1j * math.pi / 3), 1, np.exp(-1j * math.pi / 3))
    paths = write_records(tmp_path, q)
    doc = run_json(capsys, "reconstruct", *paths)
    assert doc["schema"] == "recon/1"
    assert doc["kind"] == "qutrit"
    amps = np.array([complex(a["re"], a["im"]) for a in doc["amplitudes"]])
    c_true = qutrit.quantify(q).concurrence
    c_got = qutrit.concurrence(qutrit.make_qutrit(*amps))
    assert abs(c_got - c_true) <= 1e-6


def test_reconstruct_basis_mismatch_exit_code(tmp_path, capsys):
    q = qutrit.make_qutrit(0.6, 0, 0.8)
    paths = write_records(tmp_path, q, kinds=("natural",))
    code, _, err = run_cli(capsys, "reconstruct", paths[0], paths[0])
    assert code == 4
    assert err


def test_reconstruct_requires_two_records(tmp_path, capsys):
    q = qutrit.make_qutrit(0.6, 0, 0.8)
    paths = write_records(tmp_path, q, kinds=("natural",))
    code, _, _ = run_cli(capsys, "reconstruct", paths[0])
    assert code == 4


def test_reconstruct_unreadable_file(capsys):
    code, _, _ = run_cli(capsys, "reconstruct", "/no/such/file.json",
                         "/no/such/other.json")
    assert code == 3


def test_reconstruct_phase_unobservable_still_succeeds(tmp_path, capsys):
    q = qutrit.make_qutrit(1, 0, 1)
    paths = write_records(tmp_path, q)
    code, out, err = run_cli(capsys, "reconstruct", *paths)
    assert code == 0
    doc = json.loads(out)
    assert doc["warnings"]
    amps = np.array([complex(a["re"], a["im"]) for a in doc["amplitudes"]])
    assert abs(qutrit.concurrence(qutrit.make_qutrit(*amps)) - 1) <= 1e-6


def test_reconstruct_corrupted_records_exit_code(tmp_path, capsys):
    qa = qutrit.make_qutrit(0.8, 0.36j, 0.48)
    qb = qutrit.make_qutrit(0.2, 0.5, math.sqrt(1 - 0.04 - 0.25))
    path_n = write_records(tmp_path, qa, kinds=("natural",))[0]
    path_r = write_records(tmp_path, qb, kinds=("rotated45",))[0]
    code, _, err = run_cli(capsys, "reconstruct", path_n, path_r)
    assert code == 4
    assert err


# ---------------------------------------------------------------------------
# shell pipeline

def test_full_pipeline_through_shell():
    amps = "[0.5,{\"re\":0.5,\"im\":0.5},0.5]"
    script = (
        f"{sys.executable} -m biphoton simulate --kind qutrit --amplitudes '{amps}' "
        f"| {sys.executable} -m biphoton simulate --kind qutrit --amplitudes '{amps}' "
        "--basis rotated45 "
        f"| {sys.executable} -m biphoton reconstruct"
    )
    proc = subprocess.run(script, shell=True, capture_output=True, text=True,
                          timeout=120)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    truth = qutrit.make_qutrit(0.5, 0.5 + 0.5j, 0.5)
    amps_got = np.array([complex(a["re"], a["im"]) for a in doc["amplitudes"]])
    c_true = qutrit.quantify(truth).concurrence
    assert abs(qutrit.concurrence(qutrit.make_qutrit(*amps_got)) - c_true) <= 1e-6
