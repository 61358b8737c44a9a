import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faidlab.alphabet import MessagePmf, NoiseParams, make_alphabet
from faidlab.decoder import cnu
from faidlab.faults import (
    TransitionMatrix,
    UnitKind,
    apply_noise,
    check_decomposable,
    check_symmetry,
    decoder_matrices,
    faulty_min_fixture,
    fd_matrix,
    identity_matrix,
    lift,
    make_rng,
    model_matrix,
    sample_noise,
    sp_matrix,
)

probs = st.floats(0.0, 1.0)


def test_sp_examples():
    p = 0.03
    pi = sp_matrix(p, 3)
    assert pi[1, 1] == pytest.approx(1 - p)
    assert pi[1, 0] == pytest.approx(p / 3)
    assert pi[1, 2] == pytest.approx(p / 3)
    assert pi[1, -1] == 0.0
    assert pi[0, 0] == pytest.approx(1 - p)
    for m in (-3, -2, -1, 1, 2, 3):
        assert pi[0, m] == pytest.approx(p / 6)
    assert sp_matrix(0.0, 3).is_identity()


def test_fd_examples():
    assert fd_matrix(0.0, 2).is_identity()
    pi = fd_matrix(0.02, 3)
    off = pi.entries[~np.eye(7, dtype=bool)]
    assert np.allclose(off, 0.02 / 6)
    tern = fd_matrix(0.3, 1).entries
    assert np.allclose(tern, [[0.7, 0.15, 0.15], [0.15, 0.7, 0.15], [0.15, 0.15, 0.7]])


@given(probs, st.integers(1, 6))
def test_matrices_stochastic(p, s):
    for pi in (sp_matrix(p, s), fd_matrix(p, s)):
        assert np.allclose(pi.entries.sum(axis=1), 1.0)
        assert np.allclose(np.diag(pi.entries), 1 - p)


@given(probs, st.integers(1, 6))
def test_sp_never_flips_sign(p, s):
    pi = sp_matrix(p, s).entries
    lv = np.arange(-s, s + 1)
    flips = np.sign(lv)[:, None] * np.sign(lv)[None, :] < 0
    assert not pi[flips].any()


def test_matrix_validation():
    with pytest.raises(ValueError):
        TransitionMatrix(np.full((3, 3), 0.5))
    with pytest.raises(ValueError):
        TransitionMatrix(np.eye(2))
    with pytest.raises(ValueError):
        sp_matrix(1.2, 3)
    with pytest.raises(ValueError):
        model_matrix("NONE", 0.1, 3)


def test_apply_noise_examples():
    a = make_alphabet(3)
    pt = MessagePmf.point(a, 1)
    assert np.array_equal(apply_noise(pt, identity_matrix(3)).mass, pt.mass)
    p = 0.06
    out = apply_noise(pt, sp_matrix(p, 3))
    assert out[1] == pytest.approx(1 - p)
    for v in (0, 2, 3):
        assert out[v] == pytest.approx(p / 3)
    u = MessagePmf.uniform(a)
    assert np.allclose(apply_noise(u, fd_matrix(0.4, 3)).mass, u.mass)
    with pytest.raises(ValueError):
        apply_noise(pt, identity_matrix(2))


def test_sample_noise():
    rng = make_rng(1)
    assert all(sample_noise(v, identity_matrix(3), rng) == v for v in range(-3, 4) for _ in range(20))
    sp = sp_matrix(0.9, 3)
    assert all(sample_noise(2, sp, rng) != -1 for _ in range(2000))
    fd = fd_matrix(1.0, 2)
    assert all(sample_noise(v, fd, rng) != v for v in range(-2, 3) for _ in range(200))


def test_sample_noise_frequencies():
    rng = make_rng(5)
    pi = sp_matrix(0.3, 3)
    draws = np.array([sample_noise(2, pi, rng) for _ in range(20000)])
    freq = np.bincount(draws + 3, minlength=7) / draws.size
    assert np.allclose(freq, pi.entries[5], atol=0.015)


def test_make_rng_streams():
    a = make_rng(3, 0).random(4)
    assert np.array_equal(a, make_rng(3, 0).random(4))
    assert not np.array_equal(a, make_rng(3, 1).random(4))


def test_decoder_matrices():
    pv, pc, pa = decoder_matrices(NoiseParams.sp(0.01, 0.02, 0.03), 3, 10)
    assert pv.size == 7 and pa.size == 21
    assert pc[1, 1] == pytest.approx(0.98)
    assert all(m.is_identity() for m in decoder_matrices(NoiseParams.noiseless(), 3, 10))


def _cnu_unit(pi=None, arity=2):
    return lift(cnu, UnitKind.CNU, arity, 3, pi=pi)


def test_symmetry_checks():
    assert check_symmetry(_cnu_unit())
    assert check_symmetry(_cnu_unit(sp_matrix(0.1, 3)))
    assert check_symmetry(_cnu_unit(fd_matrix(0.1, 3)))
    biased = np.eye(7) * 0.9
    biased[:, 4] += 0.1  # pushes every output towards +L_1
    assert not check_symmetry(_cnu_unit(TransitionMatrix(biased)))


def test_symmetry_of_vnu_unit():
    from faidlab.decoder import vnu
    from faidlab.tables import published_lut

    lut = published_lut("robust-sp")
    unit = lift(lambda eta, y: vnu(lut, eta, y), UnitKind.VNU, 2, 3, pi=sp_matrix(0.05, 3))
    assert check_symmetry(unit)


def test_decomposability():
    assert check_decomposable(_cnu_unit(sp_matrix(0.2, 3)), cnu)
    assert check_decomposable(lift(max, UnitKind.CNU, 2, 3), lambda mu: max(mu))
    assert not check_decomposable(faulty_min_fixture(0.2), lambda mu: min(mu))


def test_faulty_min_fixture():
    f = faulty_min_fixture(0.1)
    d = f.distribution((1, 2))
    assert d[1 + 3] == pytest.approx(0.9) and d[2 + 3] == pytest.approx(0.1)
    assert f.distribution((1, 1))[4] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        faulty_min_fixture(0.0)


@settings(max_examples=20)
@given(st.floats(0.01, 0.99))
def test_faulty_min_never_decomposable(p):
    assert not check_decomposable(faulty_min_fixture(p), lambda mu: min(mu))
