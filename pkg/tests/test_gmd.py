import numpy as np
import pytest

from erasurelab.gf import GF
from erasurelab.gmd import GmdConfig, default_schedule, gmd_decode
from erasurelab.modem import SquareQam, awgn, sigma_from_ebn0, unreliability_exact
from erasurelab.rs import CodeParams, ReceivedWord, RSCodec


@pytest.fixture(scope="module")
def code():
    return CodeParams(GF(4), 15, 7)


@pytest.fixture(scope="module")
def codec(code):
    return RSCodec(code)


def test_default_schedule_even_dmin():
    # d_min = 8: trials at 1, 3, 5, 7
    assert default_schedule(8) == [1, 3, 5, 7]


def test_default_schedule_odd_dmin():
    # d_min = 9: trials at 0, 2, 4, 6, 8
    assert default_schedule(9) == [0, 2, 4, 6, 8]
    assert len(default_schedule(9)) == 5


def test_config_validation():
    with pytest.raises(ValueError):
        GmdConfig([3, 1])
    with pytest.raises(ValueError):
        GmdConfig([0, 0, 2])
    with pytest.raises(ValueError):
        GmdConfig([-1, 1])
    cfg = GmdConfig([0, 2, 4])
    assert cfg.z == 3


def test_for_code(code):
    cfg = GmdConfig.for_code(code)
    assert cfg.erasure_schedule == [0, 2, 4, 6, 8]


def test_gmd_recovers_within_half_distance(codec, code):
    """Few errors with matching high unreliabilities: GMD must recover."""
    rng = np.random.default_rng(0)
    for _ in range(100):
        info = rng.integers(0, code.q, size=code.k).tolist()
        cw = codec.encode(info)
        word = list(cw)
        h = rng.uniform(0.0, 0.1, code.n)
        n_err = int(rng.integers(0, (code.d_min - 1) // 2 + 1))
        pos = rng.permutation(code.n)[:n_err]
        for i in pos:
            word[i] ^= int(rng.integers(1, code.q))
            h[i] = rng.uniform(0.6, 0.99)
        out = gmd_decode(ReceivedWord(word, h), codec, GmdConfig.for_code(code))
        assert out == cw


def test_gmd_beats_errors_only_with_reliable_flags(codec, code):
    """d_min - 1 errors, all flagged unreliable: errors-only fails, GMD wins."""
    rng = np.random.default_rng(1)
    wins = 0
    trials = 50
    for _ in range(trials):
        cw = codec.encode(rng.integers(0, code.q, size=code.k).tolist())
        word = list(cw)
        h = rng.uniform(0.0, 0.05, code.n)
        pos = rng.permutation(code.n)[: code.d_min - 1]
        for i in pos:
            word[i] ^= int(rng.integers(1, code.q))
            h[i] = rng.uniform(0.9, 0.99)
        eo = codec.decode_ee(ReceivedWord(word, h))
        assert eo != cw  # 8 errors exceed the errors-only radius
        out = gmd_decode(ReceivedWord(word, h), codec, GmdConfig.for_code(code))
        wins += out == cw
    assert wins == trials


def test_gmd_output_is_codeword_or_none(codec, code):
    """Garbage input: with the full schedule the n-k erasure trial always
    completes to some codeword (MDS); with a short schedule failures occur.
    Either way, any output is a valid codeword."""
    rng = np.random.default_rng(2)
    nones_short = 0
    for _ in range(30):
        word = rng.integers(0, code.q, size=code.n).tolist()
        h = rng.uniform(0.4, 0.6, code.n)
        out = gmd_decode(ReceivedWord(word, h), codec, GmdConfig.for_code(code))
        assert out is not None and codec.is_codeword(out)
        short = gmd_decode(ReceivedWord(word, h), codec, GmdConfig([0, 2]))
        if short is None:
            nones_short += 1
        else:
            assert codec.is_codeword(short)
    assert nones_short > 0


def test_gmd_candidate_selection_channel(codec, code):
    """Over an actual channel GMD does at least as well as errors-only."""
    rng = np.random.default_rng(3)
    qam = SquareQam(code.q)
    sigma = sigma_from_ebn0(7.0, code.q, code.n, code.k)
    cfg = GmdConfig.for_code(code)
    gmd_err = eo_err = 0
    for _ in range(400):
        cw = codec.encode(rng.integers(0, code.q, size=code.k).tolist())
        y = awgn(qam.modulate(cw), sigma, rng)
        r = qam.hard_decision(y).tolist()
        h = unreliability_exact(y, qam, sigma)
        eo_err += codec.decode_ee(ReceivedWord(r, h)) != cw
        gmd_err += gmd_decode(ReceivedWord(r, h), codec, cfg) != cw
    assert gmd_err <= eo_err


def test_gmd_schedule_cap(codec, code):
    """Erasure counts beyond d_min - 1 are skipped, not attempted."""
    cw = codec.encode([1] * code.k)
    cfg = GmdConfig([0, 20])
    out = gmd_decode(ReceivedWord(list(cw), np.zeros(code.n)), codec, cfg)
    assert out == cw
