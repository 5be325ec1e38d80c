"""Smoke test for the `linjam` Python module.

Build and install the module first (see README), then run:

    python3 python/smoke_test.py
"""

import csv
import json
import math
import os
import tempfile

import linjam

CONFIG = {
    "channel": {
        "victim_scheme": "QPSK",
        "snr_db": 20,
        "phase_mode": "UniformPerPacket",
        "symbols_per_packet": 1000,
    },
    "action_cfg": {
        "schemes": ["BPSK", "QPSK", "AWGN"],
        "m_disc": 10,
        "jnr_mode": {"Fixed": {"jnr_db": 10}},
    },
    "cost": {"mode": "SER"},
    "learner": "LinTS",
    "horizon": 300,
    "replications": 2,
    "master_seed": 5,
}


def check_analytic():
    assert abs(linjam.erfc(1.0) - 0.157299207050285) < 1e-14
    snr, jnr = linjam.db_to_linear(20), linjam.db_to_linear(10)
    opt = linjam.optimal_pulsed_strategy("BPSK", snr, jnr, linjam.rho_grid(100))
    assert (opt.jammer_scheme, opt.rho_star) == ("BPSK", 0.06), opt
    assert abs(opt.expected_ser - 0.0129830800401136) < 1e-8
    # A BPSK jammer a quarter turn off the victim's axis does nothing.
    assert linjam.pe_at_phase("BPSK", "BPSK", snr, jnr, 0.06, math.pi / 2) < 1e-10
    avg = linjam.pe_phase_averaged("BPSK", "BPSK", snr, jnr, 0.06)
    assert abs(avg - opt.expected_ser) < 1e-12


def check_channel():
    p = linjam.simulate_packet("BPSK", 0.0, "AWGN", -math.inf, 1.0, symbols=200_000, seed=1)
    assert abs(p.ser - 0.5 * linjam.erfc(1.0)) < 0.003, p
    again = linjam.simulate_packet("BPSK", 0.0, "AWGN", -math.inf, 1.0, symbols=200_000, seed=1)
    assert again.symbol_errors == p.symbol_errors
    assert linjam.compute_cost(0.05, True, 10.0) == 0.005
    assert linjam.compute_cost(0.05, True, 10.0, mode="PER") == 0.1


def check_learners():
    space = linjam.build_action_space(["BPSK", "QPSK", "AWGN"], 1000, jnr_db=10.0)
    assert len(space) == 3000
    assert len(linjam.build_action_space(["BPSK"], 4, jnr_range=(0.0, 10.0))) == 16

    stats = linjam.ArmStats()
    stats.record(0.4, 0.25)
    assert stats.context() == [0.4, 1.0, 0.4]

    post = linjam.PosteriorState(sample_scale=1.0, seed=3)
    assert post.select([[0.0, 0.0, 0.0]] * 4) in range(4)
    post.update([1.0, 0.0, 0.0], 2.0)
    assert all(abs(a - b) < 1e-12 for a, b in zip(post.mu_hat, [1.0, 0.0, 0.0])), post.mu_hat
    assert post.precision[0][0] == 2.0

    ucb = linjam.UcbState(3)
    for arm in range(3):
        assert ucb.select() == arm
        ucb.update(arm, 0.1 * arm)
    assert ucb.explored == 3


def check_harness():
    cols = linjam.run_experiment(json.dumps(CONFIG))
    assert len(cols["t"]) == 600
    seq = linjam.run_experiment(json.dumps(CONFIG), sequential=True)
    assert cols == seq

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "run.csv")
        assert linjam.write_log(json.dumps(CONFIG), path) == 600
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        assert ",".join(rows[0].keys()) == linjam.CSV_HEADER
        assert [int(r["action"]) for r in rows] == cols["action"]
        reloaded = json.loads(linjam.load_config(os.path.join(d, "run.json")))
        assert reloaded["master_seed"] == CONFIG["master_seed"]


if __name__ == "__main__":
    check_analytic()
    check_channel()
    check_learners()
    check_harness()
    print(f"linjam {linjam.__version__}: smoke test passed")
