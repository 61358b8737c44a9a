import numpy as np
import pytest

from faidlab.alphabet import NoiseParams
from faidlab.codes import random_regular_code, tanner_code
from faidlab.decoder import make_decoder
from faidlab.faults import make_rng, sp_matrix
from faidlab.sim import (
    BER_COLUMNS,
    BerResult,
    CodewordMode,
    TrialConfig,
    ber_csv,
    ber_sweep,
    fault_tables,
    noisy_decode,
    run_ber,
)
from faidlab.tables import published_lut

TANNER = tanner_code()
OMS = make_decoder(published_lut("offset-ms"))
ROBUST = make_decoder(published_lut("robust-sp"))


def test_trial_config_checks():
    with pytest.raises(ValueError):
        TrialConfig(alpha=0.7)
    with pytest.raises(ValueError):
        TrialConfig(alpha=0.1, max_iterations=0)
    cfg = TrialConfig(alpha=0.1, codeword_mode="RANDOM_CODEWORD")
    assert cfg.codeword_mode is CodewordMode.RANDOM_CODEWORD
    assert cfg.with_(alpha=0.2).alpha == 0.2


def test_ber_result_arithmetic():
    a = BerResult(10, 100, 5, 2, 30)
    b = BerResult(10, 100, 15, 3, 50)
    c = a + b
    assert (c.trials, c.bit_errors, c.frame_errors, c.iterations) == (20, 20, 5, 80)
    assert c.ber == 0.01 and c.fer == 0.25
    assert c.stderr_ber == pytest.approx(np.sqrt(0.01 * 0.99 / 2000))
    with pytest.raises(ValueError):
        BerResult(1, 1, -1, 0)


def test_stderr_uses_frame_spread():
    # per-frame errors 0, 0, 0, 4 on n = 10: sample variance 4, se = 1/10
    r = BerResult(4, 10, 4, 1, 4, sq_errors=16)
    assert r.stderr_ber == pytest.approx(0.1)
    assert r.stderr_ber > BerResult(4, 10, 4, 1, 4).stderr_ber
    assert (r + r).sq_errors == 32
    assert (r + BerResult(4, 10, 4, 1, 4)).sq_errors is None


def test_stderr_matches_spread_across_seeds():
    code = tanner_code()
    dec = make_decoder(published_lut("offset-ms"), 5)
    cfg = TrialConfig(alpha=0.04, noise=NoiseParams.sp(0.05), max_iterations=20)
    runs = [run_ber(code, dec, cfg.with_(seed=k), 400) for k in range(30)]
    spread = np.std([r.ber for r in runs], ddof=1)
    est = np.mean([r.stderr_ber for r in runs])
    # the chi-square spread of 30 samples stays within about 30% of sigma
    assert 0.6 * spread < est < 1.5 * spread


def test_fault_tables():
    p, order, cum = fault_tables(sp_matrix(0.3, 3).entries)
    assert p == pytest.approx(0.3)
    # the conditional law of a fault from +L_1 never reaches the negative levels
    row = dict(zip(order[4], np.diff(np.concatenate([[0.0], cum[4]]))))
    assert all(row[k] == 0 for k in (0, 1, 2))
    assert cum[:, -1].tolist() == [1.0] * 7
    with pytest.raises(ValueError):
        fault_tables(np.array([[1.0, 0.0], [0.5, 0.5]]))


def test_decode_clean_word():
    y = np.ones(TANNER.n, dtype=int)
    est, it, stopped = noisy_decode(TANNER, y, OMS, TrialConfig(alpha=0.0), make_rng(0))
    assert not est.any() and it == 1 and stopped


@pytest.mark.parametrize("bit", [0, 77, 154])
def test_single_error_corrected(bit):
    y = np.ones(TANNER.n, dtype=int)
    y[bit] = -1
    est, _, stopped = noisy_decode(TANNER, y, OMS, TrialConfig(alpha=0.0), make_rng(0))
    assert stopped and not est.any()


def test_decode_input_checks():
    with pytest.raises(ValueError):
        noisy_decode(TANNER, np.ones(10), OMS, TrialConfig(alpha=0.0), make_rng(0))
    with pytest.raises(ValueError):
        noisy_decode(TANNER, np.zeros(TANNER.n), OMS, TrialConfig(alpha=0.0), make_rng(0))
    small = random_regular_code(40, 4, 8)
    with pytest.raises(ValueError):
        run_ber(small, OMS, TrialConfig(alpha=0.0), 1)


def test_stopped_implies_codeword():
    rng = make_rng(3)
    cfg = TrialConfig(alpha=0.0, noise=NoiseParams.sp(0.02))
    for _ in range(40):
        y = np.where(rng.random(TANNER.n) < 0.04, -1, 1)
        est, it, stopped = noisy_decode(TANNER, y, ROBUST, cfg, rng)
        if stopped:
            assert TANNER.is_codeword(est)
        else:
            assert it == cfg.max_iterations


def test_heavy_noise_breaks_decoding():
    cfg = TrialConfig(alpha=0.03, noise=NoiseParams.fd(1.0, 1.0, 0.0), max_iterations=20)
    res = run_ber(TANNER, OMS, cfg, 50)
    assert res.fer > 0.9


def test_noiseless_zero_alpha():
    res = run_ber(TANNER, OMS, TrialConfig(alpha=0.0), 50)
    assert res.ber == 0.0 and res.iterations == 50


def test_determinism_and_workers():
    cfg = TrialConfig(alpha=0.04, noise=NoiseParams.sp(0.05), seed=11)
    a = run_ber(TANNER, ROBUST, cfg, 300)
    assert a == run_ber(TANNER, ROBUST, cfg, 300)
    assert a == run_ber(TANNER, ROBUST, cfg, 300, jobs=3)
    assert a != run_ber(TANNER, ROBUST, cfg.with_(seed=12), 300)


def test_random_codeword_mode_runs():
    cfg = TrialConfig(alpha=0.02, codeword_mode=CodewordMode.RANDOM_CODEWORD)
    res = run_ber(TANNER, OMS, cfg, 100)
    assert res.ber < 0.01


def test_fd_worse_than_sp():
    base = TrialConfig(alpha=0.03, seed=5)
    sp = run_ber(TANNER, ROBUST, base.with_(noise=NoiseParams.sp(0.02)), 2000)
    fd = run_ber(TANNER, ROBUST, base.with_(noise=NoiseParams.fd(0.02)), 2000)
    assert fd.ber + 3 * np.hypot(fd.stderr_ber, sp.stderr_ber) >= sp.ber


@pytest.mark.parametrize("model, rate", [("FD", 0.2 * (10 + 0.5) / 20), ("SP", 0.2 / 10 / 2)])
def test_app_fault_rate(model, rate):
    # clean channel, one iteration: every APP value is +4 before its fault,
    # so the bit error rate follows from a single row of the APP matrix
    cfg = TrialConfig(alpha=0.0, noise=NoiseParams(0.0, 0.0, 0.2, model), max_iterations=1, early_stop=False)
    res = run_ber(TANNER, OMS, cfg, 400)
    assert abs(res.ber - rate) < 4 * np.sqrt(rate * (1 - rate) / (400 * TANNER.n))


def test_sweep_and_csv():
    tmpl = TrialConfig(alpha=0.0, noise=NoiseParams.sp(0.05))
    assert ber_sweep(TANNER, [OMS], tmpl, [], 5) == []
    rows = ber_sweep(TANNER, [OMS, ROBUST], tmpl, [0.01, 0.02], 20)
    assert [r.decoder for r in rows] == ["offset-ms"] * 2 + ["robust-sp"] * 2
    lines = ber_csv(rows).splitlines()
    assert lines[0].split(",") == BER_COLUMNS and len(lines) == 5
    assert lines[1].startswith("offset-ms,SP,0.05,0.05,0.05,0.01,20,")


@pytest.mark.parametrize("noise", [NoiseParams.fd(0.05), NoiseParams.sp(0.05)])
def test_matches_density_evolution(noise):
    from faidlab.de import de_trajectory

    code = random_regular_code(6000, seed=1)
    cfg = TrialConfig(alpha=0.05, noise=noise, max_iterations=3, early_stop=False, seed=2)
    res = run_ber(code, ROBUST, cfg, 40)
    pe = de_trajectory(0.05, ROBUST, noise, 3)[-1]
    assert abs(res.ber - pe) < 4 * res.stderr_ber
