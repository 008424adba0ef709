"""End-to-end acceptance criteria, one test per criterion.

Run with `pytest tests/test_acceptance.py -v` to get one PASSED/FAILED line
per criterion. Criterion 6's lossless-reconstruction sub-property is
expected to fail (see the xfail reason); everything else must pass.
"""

import math

import numpy as np
import pytest

from erasurelab.dcf import NO_CAPABILITY, DecoderCapability, DecoderKind
from erasurelab.gf import GF
from erasurelab.modem import (
    SquareQam,
    UnreliabilityLut,
    sigma_from_ebn0,
    unreliability_nn,
)
from erasurelab.rs import CodeParams
from erasurelab.sim import (
    CampaignConfig,
    _frame_rng,
    _FrameRunner,
    batch_residual_probs,
    format_csv,
    run_campaign,
    sample_unreliability_vectors,
    wilson_interval,
)
from erasurelab.strategy import (
    StrategyKind,
    choose_tau,
    expectation,
    hoeffding_half_width,
    pgf_distribution,
    tau_star_exact,
)

CODE255 = CodeParams(GF(8), 255, 144)
CODE15 = CodeParams(GF(4), 15, 7)
Z99 = 2.5758293035489004


def enumerate_pmf(h: np.ndarray) -> np.ndarray:
    """Brute-force Poisson-binomial pmf by explicit 2^n subset enumeration."""
    n = len(h)
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n)) & 1
    probs = np.prod(np.where(bits == 1, h, 1.0 - h), axis=1)
    weights = bits.sum(axis=1)
    return np.bincount(weights, weights=probs, minlength=n + 1)


def test_criterion_01_pgf_matches_subset_enumeration():
    """200 random vectors, n <= 14: per-coefficient agreement to 1e-12."""
    rng = np.random.default_rng(101)
    for _ in range(200):
        n = int(rng.integers(1, 15))
        h = np.sort(rng.uniform(0, 0.98, n))[::-1]
        got = pgf_distribution(h, 0).coeffs
        want = enumerate_pmf(h)
        assert np.max(np.abs(got - want)) < 1e-12


def test_criterion_02_tau_star_exact_matches_brute_force():
    """200 random vectors, RS(16;15,7,9), BMD: chosen tau equals the
    enumeration-based minimizer of the residual error probability."""
    cap = DecoderCapability(DecoderKind.BMD, CODE15)
    rng = np.random.default_rng(102)
    d = CODE15.d_min
    for _ in range(200):
        h = np.sort(rng.uniform(0, 0.95, 15))[::-1]
        probs = []
        for tau in range(d):
            pmf = enumerate_pmf(h[tau:])
            e0 = cap.epsilon0(tau)
            probs.append(1.0 - pmf[: e0 + 1].sum() if e0 > NO_CAPABILITY else 1.0)
        res = tau_star_exact(h, cap)
        assert res.tau_chosen == int(np.argmin(probs))
        assert res.predicted_p == pytest.approx(min(probs), abs=1e-12)


@pytest.mark.parametrize("tau", [0, 2, 4])
def test_criterion_03_analytic_prediction_matches_monte_carlo(tau):
    """RS(16;15,7,9), BMD, fixed tau, 1e5 frames near FER = 1e-2: the
    measured FER lies in the 99% Wilson interval of the mean analytic
    per-frame P(tau)."""
    cfg = CampaignConfig(
        code=CODE15,
        ebn0_grid=(9.5,),
        mode="fixed_tau",
        fixed_tau=tau,
        max_frames=100_000,
        max_errors=10**9,
        seed=103,
        unreliability="exact",
    )
    pt = run_campaign(cfg, threads=1)[0]
    assert pt.frames == 100_000
    lo, hi = wilson_interval(pt.frame_errors, pt.frames, z=Z99)
    assert lo <= pt.predicted_p <= hi, (pt.fer, pt.predicted_p, lo, hi)


def test_criterion_04_hoeffding_window_mass_above_99_percent():
    """100 channel vectors of length 255 between 15 and 18 dB: for every
    tau the probability mass inside [E - w, E + w], w = ceil(s),
    s = sqrt(-ln(0.005) * 2n), exceeds 0.99."""
    qam = SquareQam(256)
    w = hoeffding_half_width(255)
    d = CODE255.d_min
    vecs = []
    for i, db in enumerate((15.0, 16.0, 17.0, 18.0)):
        sigma = sigma_from_ebn0(db, 256, 255, 144)
        vecs.append(
            sample_unreliability_vectors(sigma, qam, 255, 25, _frame_rng(104, i, 0), "exact")
        )
    vecs = np.vstack(vecs)
    assert len(vecs) == 100
    for tau in range(d):
        width = 255 - tau + 1
        coeffs = np.zeros((100, width))
        coeffs[:, 0] = 1.0
        for i in range(tau, 255):
            p = vecs[:, i : i + 1]
            coeffs[:, 1:] = coeffs[:, 1:] * (1.0 - p) + coeffs[:, :-1] * p
            coeffs[:, 0] *= 1.0 - p[:, 0]
        means = vecs[:, tau:].sum(axis=1)
        cum = np.cumsum(coeffs, axis=1)
        lo = np.maximum(np.ceil(means - w).astype(int), 0)
        hi = np.minimum(np.floor(means + w).astype(int), width - 1)
        rows = np.arange(100)
        mass = cum[rows, hi] - np.where(lo > 0, cum[rows, lo - 1], 0.0)
        assert np.all(mass > 0.99), (tau, mass.min())


def test_criterion_05_capability_spot_values_and_maximality():
    """Closed-form eps0 spot checks for (255,144) plus the full-sweep
    maximality property for all three decoder families."""
    bmd = DecoderCapability(DecoderKind.BMD, CODE255)
    gs = DecoderCapability(DecoderKind.GS, CODE255)
    assert bmd.epsilon0(0) == 55
    assert gs.epsilon0(0) == 64
    assert bmd.epsilon0(111) == 0
    km1 = CODE255.k - 1
    for cap in (bmd, gs, DecoderCapability(DecoderKind.IRS, CODE255, 3)):
        upper = 254 if cap.kind is DecoderKind.GS else 255
        for tau in range(upper):
            e0 = cap.epsilon0(tau)
            if e0 == NO_CAPABILITY:
                assert cap.dcf_value(0, tau) <= km1
                continue
            assert cap.dcf_value(e0, tau) > km1
            if e0 + 1 <= CODE255.n - tau:
                assert cap.dcf_value(e0 + 1, tau) <= km1


@pytest.mark.xfail(
    strict=True,
    reason="320 entries cannot losslessly cover the corner regions: the "
    "diagonal fold of a 16x16 corner grid has 136 distinct cells (120 "
    "mirror pairs plus 16 fixed diagonal cells), not 128. The table keeps "
    "the 64+128+128 budget by storing corner diagonals at half resolution, "
    "so 32 of the 65536 grid cells (even diagonal cells of the 4 outer "
    "corners) reproduce their odd neighbor's value instead of their own.",
)
def test_criterion_06_lut_entry_count_and_lossless_reconstruction():
    """256-QAM, 8-bit quantization: exactly 320 entries and cell-center
    reconstruction equal to direct evaluation everywhere to 1e-12."""
    qam = SquareQam(256)
    sigma = sigma_from_ebn0(18.0, 256, 255, 144)
    lut = UnreliabilityLut.build(qam, sigma, 8)
    assert len(lut.entries) == 320

    c = lut.cells_per_region
    w = 2.0 * qam.scale / c
    half_span = qam.L * qam.scale
    grid = (np.arange(256) + 0.5) * w - half_span
    xs, ys = np.meshgrid(grid, grid, indexing="ij")
    pts = np.stack([xs.ravel(), ys.ravel()], axis=-1)
    got = lut.lookup(pts, qam)
    want = unreliability_nn(pts, qam, sigma)
    bad = np.abs(got - want) > 1e-12
    assert bad.sum() == 32  # the half-resolution corner diagonal cells
    assert not np.any(bad), f"{int(bad.sum())} of {len(pts)} cells deviate"


@pytest.fixture(scope="module")
def fig3_curves():
    """Semi-simulative residual error curves for RS(256;255,144,112).

    One set of 1e4 exact-unreliability vectors per grid point, shared by
    all curves (identical to what run_campaign draws for the same seed).
    """
    qam = SquareQam(256)
    bmd = DecoderCapability(DecoderKind.BMD, CODE255)
    gs = DecoderCapability(DecoderKind.GS, CODE255)
    grid = np.array([15.0 + 0.25 * i for i in range(12)])
    names = ("bmd_eo", "bmd_exact", "bmd_hoeffding", "bmd_eps0", "gs_eo", "gs_ad")
    curves = {name: [] for name in names}
    for idx, db in enumerate(grid):
        sigma = sigma_from_ebn0(db, 256, 255, 144)
        vecs = sample_unreliability_vectors(
            sigma, qam, 255, 10_000, _frame_rng(0, idx, 0), "exact"
        )
        h_bar = vecs.mean(axis=0)

        def fer(cap, tau):
            return float(batch_residual_probs(vecs, tau, cap.epsilon0(tau)).mean())

        curves["bmd_eo"].append(fer(bmd, 0))
        for kind in StrategyKind:
            tau = choose_tau(h_bar, bmd, kind).tau_chosen
            curves[f"bmd_{kind.value}"].append(fer(bmd, tau))
        curves["gs_eo"].append(fer(gs, 0))
        curves["gs_ad"].append(fer(gs, choose_tau(h_bar, gs, StrategyKind.EXACT).tau_chosen))
    return grid, {k: np.array(v) for k, v in curves.items()}


def crossing_db(grid: np.ndarray, fer: np.ndarray, target: float = 1e-4) -> float:
    """Eb/N0 where the curve crosses the target FER, log-linear between grid
    points; the final segment is extrapolated if the curve ends just above."""
    lf = np.log10(fer)
    lt = math.log10(target)
    for i in range(len(grid) - 1):
        if lf[i] >= lt >= lf[i + 1]:
            return float(grid[i] + (lf[i] - lt) / (lf[i] - lf[i + 1]) * (grid[i + 1] - grid[i]))
    i = len(grid) - 2
    return float(grid[i] + (lf[i] - lt) / (lf[i] - lf[i + 1]) * (grid[i + 1] - grid[i]))


def test_criterion_07_adaptive_gain_at_1e_minus_4(fig3_curves):
    """BMD adaptive-vs-errors-only gain at FER = 1e-4 is 0.2 +- 0.1 dB;
    the GS gain at the same FER is below 0.05 dB."""
    grid, curves = fig3_curves
    bmd_gain = crossing_db(grid, curves["bmd_eo"]) - crossing_db(grid, curves["bmd_exact"])
    gs_gain = crossing_db(grid, curves["gs_eo"]) - crossing_db(grid, curves["gs_ad"])
    assert 0.1 <= bmd_gain <= 0.3, bmd_gain
    assert gs_gain < 0.05, gs_gain


def test_criterion_08_approximations_match_exact_strategy(fig3_curves):
    """Hoeffding and eps0 strategy curves coincide with the exact-strategy
    curve to within 0.05 decades everywhere on the grid."""
    grid, curves = fig3_curves
    ref = np.log10(curves["bmd_exact"])
    for name in ("bmd_hoeffding", "bmd_eps0"):
        delta = np.abs(np.log10(curves[name]) - ref)
        assert np.max(delta) < 0.05, (name, float(np.max(delta)))


def test_criterion_09_gmd_adaptive_errors_only_ordering():
    """Paired Monte-Carlo on RS(16;15,7,9) at three SNR points: the error
    counts must order FER(gmd) <= FER(adaptive) <= FER(errors-only), each
    gap either significant beyond 3 sigma (paired, on discordant frames)
    or statistically indistinguishable; a significant reversal fails."""
    frames = 4096
    for point, db in enumerate((7.5, 8.5, 9.5)):
        indicators = {}
        for mode in ("gmd", "adaptive", "errors_only"):
            cfg = CampaignConfig(
                code=CODE15,
                ebn0_grid=(db,),
                mode=mode,
                max_frames=frames,
                max_errors=10**9,
                seed=109,
                unreliability="exact",
            )
            sigma = sigma_from_ebn0(db, 16, 15, 7)
            runner = _FrameRunner(cfg, sigma, 0)
            indicators[mode] = np.array(
                [runner.run_frame(i)[0] for i in range(frames)]
            )
        for better, worse in (("gmd", "adaptive"), ("adaptive", "errors_only")):
            a, b = indicators[better], indicators[worse]
            n_better_fails = int(np.sum((a == 1) & (b == 0)))
            n_worse_fails = int(np.sum((a == 0) & (b == 1)))
            diff = n_worse_fails - n_better_fails
            sd = math.sqrt(n_better_fails + n_worse_fails)
            if sd > 0 and abs(diff) > 3 * sd:
                assert diff > 0, (db, better, worse, diff, sd)
            # otherwise: statistically indistinguishable at this point


def test_criterion_10_campaigns_deterministic_across_threads():
    """Identical seed implies byte-identical CSV output, independent of the
    thread count, for both Monte-Carlo and semi-simulative campaigns."""
    mc = CampaignConfig(
        code=CODE15,
        ebn0_grid=(8.5, 9.5),
        mode="adaptive",
        max_frames=512,
        max_errors=10**9,
        seed=110,
        unreliability="nn",
    )
    outs = {format_csv(run_campaign(mc, threads=t)) for t in (1, 2, 4)}
    assert len(outs) == 1
    outs.add(format_csv(run_campaign(mc, threads=2)))
    assert len(outs) == 1
    semi = CampaignConfig(
        code=CODE15, ebn0_grid=(9.0,), mode="semi_simulative", samples=400, seed=110
    )
    assert format_csv(run_campaign(semi)) == format_csv(run_campaign(semi, threads=4))
