"""Monte-Carlo FER campaigns and semi-simulative residual-error bounds.

A campaign sweeps an Eb/N0 grid with one of five decoder modes:

* ``errors_only``   - decode with no erasures,
* ``fixed_tau``     - erase a constant number of most unreliable symbols,
* ``adaptive``      - choose tau per frame with an erasing strategy,
* ``gmd``           - multi-trial GMD reference decoding,
* ``semi_simulative`` - no per-frame decoding: compute tau_bar from an
  average unreliability vector and report the analytic mean of P(tau_bar)
  over sampled unreliability vectors (an upper bound on adaptive decoding).

Per-frame random streams are derived from (seed, grid index, frame index),
so results are reproducible under any degree of concurrency.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dcf import NO_CAPABILITY, DecoderCapability, DecoderKind
from .gmd import GmdConfig, gmd_decode
from .modem import SquareQam, UnreliabilityLut, awgn, sigma_from_ebn0, unreliability_exact, unreliability_nn
from .rs import CodeParams, RSCodec, ReceivedWord, erase_most_unreliable
from .strategy import (
    StrategyKind,
    choose_tau,
    pgf_distribution,
    residual_error_prob,
)

MODES = ("errors_only", "fixed_tau", "adaptive", "gmd", "semi_simulative")
UNRELIABILITY_METHODS = ("exact", "nn", "lut")

#: frames are simulated in fixed-size blocks so that the early-stopping
#: decision never depends on the thread count
FRAME_BLOCK = 256


class ConfigError(ValueError):
    pass


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    mid = phat + z2 / (2.0 * trials)
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
    return max(0.0, (mid - half) / denom), min(1.0, (mid + half) / denom)


@dataclass(frozen=True)
class CampaignConfig:
    code: CodeParams
    decoder_kind: DecoderKind = DecoderKind.BMD
    ell: int = 1
    ebn0_grid: tuple = ()
    mode: str = "errors_only"
    strategy: StrategyKind = StrategyKind.EXACT
    fixed_tau: int = 0
    max_frames: int = 10_000
    max_errors: int = 100
    seed: int = 0
    unreliability: str = "nn"
    samples: int = 10_000  # vectors averaged in semi-simulative mode
    gmd_schedule: tuple | None = None
    force_tau: int | None = None  # semi-simulative only: bypass the strategy

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.unreliability not in UNRELIABILITY_METHODS:
            raise ConfigError(f"unknown unreliability method {self.unreliability!r}")
        if not self.ebn0_grid:
            raise ConfigError("ebn0_grid must be non-empty")
        if self.max_frames < 1:
            raise ConfigError("max_frames must be >= 1")
        if self.mode == "fixed_tau" and not (0 <= self.fixed_tau <= self.code.d_min - 1):
            raise ConfigError("fixed_tau out of [0, d_min - 1]")
        if self.mode in ("errors_only", "fixed_tau", "adaptive", "gmd") and self.decoder_kind is not DecoderKind.BMD:
            raise ConfigError("Monte-Carlo modes require the BMD decoder; "
                              "IRS/GS capabilities are analytic only")

    @property
    def qam_size(self) -> int:
        return self.code.q

    def capability(self) -> DecoderCapability:
        return DecoderCapability(self.decoder_kind, self.code, self.ell)


@dataclass
class FerPoint:
    ebn0_db: float
    mode: str
    strategy: str
    tau: int
    frames: int
    frame_errors: int
    fer: float
    ci_low: float
    ci_high: float
    predicted_p: float


@dataclass
class AverageUnreliability:
    h_bar: np.ndarray
    samples: int


def sample_unreliability_vectors(
    sigma: float,
    qam: SquareQam,
    n: int,
    count: int,
    rng: np.random.Generator,
    method: str = "nn",
    lut: UnreliabilityLut | None = None,
) -> np.ndarray:
    """Sorted (non-increasing) unreliability vectors of random transmissions."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    sym = rng.integers(0, qam.M, size=count * n)
    y = awgn(qam.modulate(sym), sigma, rng)
    if method == "lut":
        lut = lut or UnreliabilityLut.build(qam, sigma, 8)
    # chunked so the exact method's (N, L, L) distance tensor stays small
    h = np.empty(count * n)
    for lo in range(0, count * n, 1 << 18):
        chunk = y[lo : lo + (1 << 18)]
        if method == "exact":
            h[lo : lo + len(chunk)] = unreliability_exact(chunk, qam, sigma)
        elif method == "lut":
            h[lo : lo + len(chunk)] = lut.lookup(chunk, qam)
        else:
            h[lo : lo + len(chunk)] = unreliability_nn(chunk, qam, sigma)
    h = h.reshape(count, n)
    h.sort(axis=1)
    return h[:, ::-1]


def sample_unreliability_vector(sigma, qam, n, rng, method="nn") -> np.ndarray:
    return sample_unreliability_vectors(sigma, qam, n, 1, rng, method)[0]


def average_unreliability(
    sigma, qam, n, rng, samples: int = 10_000, method: str = "nn"
) -> AverageUnreliability:
    """Component-wise mean of sorted unreliability vectors (stays sorted)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    vecs = sample_unreliability_vectors(sigma, qam, n, samples, rng, method)
    return AverageUnreliability(vecs.mean(axis=0), samples)


def tau_bar(h_bar, cap: DecoderCapability, kind: StrategyKind) -> int:
    """Fixed erasure count for a whole grid point, chosen on the average vector."""
    return choose_tau(h_bar, cap, kind).tau_chosen


def predict_errors_only(h, cap: DecoderCapability) -> float:
    """Analytic residual error probability of errors-only decoding (tau = 0)."""
    return residual_error_prob(pgf_distribution(h, 0), cap.epsilon0(0))


def batch_head_mass(vectors: np.ndarray, tau: int, eps0: int) -> np.ndarray:
    """Pr(Y_tau <= eps0) for each row; truncated convolution in O(n * eps0)."""
    count, n = vectors.shape
    if eps0 <= NO_CAPABILITY:
        return np.zeros(count)
    width = min(eps0, n - tau) + 1
    coeffs = np.zeros((count, width))
    coeffs[:, 0] = 1.0
    for i in range(tau, n):
        p = vectors[:, i : i + 1]
        coeffs[:, 1:] = coeffs[:, 1:] * (1.0 - p) + coeffs[:, :-1] * p
        coeffs[:, 0] *= (1.0 - p[:, 0])
    return coeffs.sum(axis=1)


def batch_residual_probs(vectors: np.ndarray, tau: int, eps0: int) -> np.ndarray:
    """Exact P(tau) for each sorted unreliability vector (row)."""
    return np.clip(1.0 - batch_head_mass(vectors, tau, eps0), 0.0, 1.0)


def _frame_rng(seed: int, point_index: int, frame_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(point_index, frame_index))
    )


class _FrameRunner:
    """Per-grid-point state shared by all frames."""

    def __init__(self, cfg: CampaignConfig, sigma: float, point_index: int):
        self.cfg = cfg
        self.sigma = sigma
        self.point_index = point_index
        self.codec = RSCodec(cfg.code)
        self.qam = SquareQam(cfg.qam_size)
        self.cap = cfg.capability()
        self.lut = (
            UnreliabilityLut.build(self.qam, sigma, 8) if cfg.unreliability == "lut" else None
        )
        self.gmd_cfg = (
            GmdConfig(list(cfg.gmd_schedule))
            if cfg.gmd_schedule is not None
            else GmdConfig.for_code(cfg.code)
        )

    def unreliability(self, y: np.ndarray) -> np.ndarray:
        if self.cfg.unreliability == "exact":
            return unreliability_exact(y, self.qam, self.sigma)
        if self.cfg.unreliability == "lut":
            return self.lut.lookup(y, self.qam)
        return unreliability_nn(y, self.qam, self.sigma)

    def run_frame(self, frame_index: int) -> tuple[int, float]:
        """Returns (frame error indicator, per-frame analytic prediction)."""
        cfg = self.cfg
        rng = _frame_rng(cfg.seed, self.point_index, frame_index)
        code = cfg.code
        info = rng.integers(0, code.q, size=code.k).tolist()
        cw = self.codec.encode(info)
        y = awgn(self.qam.modulate(cw), self.sigma, rng)
        r = self.qam.hard_decision(y).tolist()
        h = self.unreliability(y)

        predicted = math.nan
        if cfg.mode == "gmd":
            out = gmd_decode(ReceivedWord(r, h), self.codec, self.gmd_cfg)
        else:
            h_sorted = np.sort(h)[::-1]
            if cfg.mode == "errors_only":
                tau = 0
            elif cfg.mode == "fixed_tau":
                tau = cfg.fixed_tau
            else:  # adaptive
                res = choose_tau(h_sorted, self.cap, cfg.strategy)
                tau = res.tau_chosen
                predicted = res.predicted_p
            if cfg.mode in ("errors_only", "fixed_tau"):
                predicted = residual_error_prob(
                    pgf_distribution(h_sorted, tau), self.cap.epsilon0(tau)
                )
            out = self.codec.decode_ee(erase_most_unreliable(r, h, tau))
        return (0 if out == cw else 1), predicted


def _run_point_mc(cfg: CampaignConfig, sigma: float, point_index: int, threads: int) -> FerPoint:
    runner = _FrameRunner(cfg, sigma, point_index)
    frames = 0
    errors = 0
    pred_sum = 0.0
    pred_count = 0

    def consume(results):
        nonlocal frames, errors, pred_sum, pred_count
        for err, pred in results:
            frames += 1
            errors += err
            if not math.isnan(pred):
                pred_sum += pred
                pred_count += 1

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frames < cfg.max_frames and errors < cfg.max_errors:
            block = range(frames, min(frames + FRAME_BLOCK, cfg.max_frames))
            if pool is not None:
                consume(list(pool.map(runner.run_frame, block)))
            else:
                consume(runner.run_frame(i) for i in block)
    finally:
        if pool is not None:
            pool.shutdown()

    fer = errors / frames
    lo, hi = wilson_interval(errors, frames)
    tau = cfg.fixed_tau if cfg.mode == "fixed_tau" else (0 if cfg.mode == "errors_only" else -1)
    return FerPoint(
        ebn0_db=float(cfg_point_db(cfg, point_index)),
        mode=cfg.mode,
        strategy=cfg.strategy.value,
        tau=tau,
        frames=frames,
        frame_errors=errors,
        fer=fer,
        ci_low=lo,
        ci_high=hi,
        predicted_p=pred_sum / pred_count if pred_count else math.nan,
    )


def cfg_point_db(cfg: CampaignConfig, point_index: int) -> float:
    return cfg.ebn0_grid[point_index]


def _run_point_semi(cfg: CampaignConfig, sigma: float, point_index: int) -> FerPoint:
    qam = SquareQam(cfg.qam_size)
    cap = cfg.capability()
    rng = _frame_rng(cfg.seed, point_index, 0)
    lut = UnreliabilityLut.build(qam, sigma, 8) if cfg.unreliability == "lut" else None
    vecs = sample_unreliability_vectors(
        sigma, qam, cfg.code.n, cfg.samples, rng, cfg.unreliability, lut
    )
    avg = AverageUnreliability(vecs.mean(axis=0), cfg.samples)
    tau = cfg.force_tau if cfg.force_tau is not None else tau_bar(avg.h_bar, cap, cfg.strategy)
    probs = batch_residual_probs(vecs, tau, cap.epsilon0(tau))
    fer = float(probs.mean())
    return FerPoint(
        ebn0_db=float(cfg.ebn0_grid[point_index]),
        mode=cfg.mode,
        strategy=cfg.strategy.value,
        tau=tau,
        frames=cfg.samples,
        frame_errors=0,
        fer=fer,
        ci_low=fer,
        ci_high=fer,
        predicted_p=fer,
    )


def run_campaign(cfg: CampaignConfig, threads: int = 1) -> list[FerPoint]:
    """One FerPoint per Eb/N0 grid entry, deterministic for a given seed."""
    points = []
    for idx, db in enumerate(cfg.ebn0_grid):
        sigma = sigma_from_ebn0(db, cfg.qam_size, cfg.code.n, cfg.code.k)
        if cfg.mode == "semi_simulative":
            points.append(_run_point_semi(cfg, sigma, idx))
        else:
            points.append(_run_point_mc(cfg, sigma, idx, threads))
    return points


CSV_HEADER = "ebn0_db,mode,strategy,tau,frames,frame_errors,fer,ci_low,ci_high,predicted_p"


def format_csv(points: list[FerPoint], manifest: dict | None = None) -> str:
    lines = []
    for key, value in (manifest or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(CSV_HEADER)
    for p in points:
        lines.append(
            f"{p.ebn0_db:.10g},{p.mode},{p.strategy},{p.tau},{p.frames},"
            f"{p.frame_errors},{p.fer:.10g},{p.ci_low:.10g},{p.ci_high:.10g},"
            f"{p.predicted_p:.10g}"
        )
    return "\n".join(lines) + "\n"
