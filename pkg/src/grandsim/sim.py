"""Monte Carlo link simulation: sweep runner, CSV records, and BLER plots.

A sweep fixes one link configuration and walks an SNR grid.  Every frame
draws its own generator from the experiment seed and the frame index, so
results are reproducible and independent of execution order; points stop
early once enough frame errors are in.  Records go to stdout and, when an
output path is set, to CSV one flushed row per point so partial sweeps
remain usable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import channel as ch_mod
from .codes import LinearCode, build_bch, load_generator_matrix, random_linear_code
from .detector import ml_detect, ml_llrs, zf_equalize, zf_llrs
from .guesswork import make_source
from .modem import (
    Constellation,
    FrameLayout,
    constellation,
    hard_demap,
    make_layout,
    map_word,
    slice_symbols,
)
from .turbo import DecoderConfig, hard_grand, message_bits, turbo_grand

CSV_HEADER = "snr_db,frames,frame_errors,bit_errors,bler,ber,mean_queries,mean_iters,wall_s"
DECODERS = ("hard", "orbgrand", "sgrand", "turbo")
DETECTORS = ("zf", "ml")
PLOT_FLOOR = 1e-7


@dataclass
class ExperimentConfig:
    """One link setup plus sweep bookkeeping."""

    code: str = "bch127"            # bch127 | file:<path> | random:<n>,<k>,<seed>
    mod: str = "bpsk"
    channel: str = "rayleigh"
    csi_mix: float = 0.1
    block_fading: bool = False
    detector: str = "zf"
    decoder: str = "turbo"
    turbo_source: str = "sgrand"    # pattern order inside each turbo pass
    budget: int = 100_000
    iters: int = 2
    llr_in: str = "zero"            # initial soft input for the turbo decoder
    snr_db: list[float] = field(default_factory=lambda: [10.0])
    max_frames: int = 100_000
    max_frame_errors: int = 100
    seed: int = 1
    out: str | None = None

    def validate(self) -> None:
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}")
        if self.detector not in DETECTORS:
            raise ValueError(f"detector must be one of {DETECTORS}")
        if self.channel not in ch_mod.PROFILES:
            raise ValueError(f"channel must be one of {ch_mod.PROFILES}")
        if self.llr_in not in ("zero", "zf"):
            raise ValueError("llr_in must be 'zero' or 'zf'")
        if self.max_frames < 0 or self.max_frame_errors < 0:
            raise ValueError("frame and error limits must be nonnegative")
        if not self.snr_db:
            raise ValueError("snr grid is empty")


@dataclass
class SweepRecord:
    snr_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    bler: float
    ber: float
    mean_queries: float
    mean_iters: float
    wall_s: float

    def csv_row(self) -> str:
        return (
            f"{self.snr_db:g},{self.frames},{self.frame_errors},{self.bit_errors},"
            f"{self.bler:.8g},{self.ber:.8g},{self.mean_queries:.8g},"
            f"{self.mean_iters:.8g},{self.wall_s:.6g}"
        )


def build_code(spec: str) -> LinearCode:
    """Code factory for the config grammar."""
    if spec == "bch127":
        return build_bch(127, 2)
    if spec.startswith("file:"):
        return load_generator_matrix(spec[len("file:"):])
    if spec.startswith("random:"):
        parts = spec[len("random:"):].split(",")
        if len(parts) != 3:
            raise ValueError(f"random code spec needs n,k,seed: {spec!r}")
        n, k, seed = (int(p) for p in parts)
        return random_linear_code(n, k, seed)
    raise ValueError(f"unknown code spec {spec!r}")


def parse_snr(text: str) -> list[float]:
    """SNR grid grammar: "start:step:stop" inclusive, or a single value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"snr grid must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("snr step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise ValueError(f"empty snr grid {text!r}")
        return [start + i * step for i in range(count)]
    return [float(text)]


def build_artifacts(cfg: ExperimentConfig) -> tuple[LinearCode, Constellation, FrameLayout]:
    code = build_code(cfg.code)
    cst = constellation(cfg.mod)
    return code, cst, make_layout(code.n, cst)


def _decode_frame(cfg, code, cst, layout, y, ch):
    """Dispatch one received frame to the configured decoder."""
    h, var = ch.h_reported, ch.sym_var
    if cfg.decoder == "turbo":
        dcfg = DecoderConfig(
            budget=cfg.budget,
            iterations=cfg.iters,
            source=cfg.turbo_source,
            llr_input=cfg.llr_in,
        )
        llr_in = zf_llrs(y, h, var, cst, layout) if cfg.llr_in == "zf" else None
        return turbo_grand(y, h, var, code, cst, layout, dcfg, llr_in=llr_in)
    if cfg.decoder == "hard":
        if cfg.detector == "ml":
            word = layout.strip(ml_detect(y, h, var, cst).word)
        else:
            y_eq, _ = zf_equalize(y, h, var)
            word = hard_demap(slice_symbols(y_eq, cst), cst, layout)
        source = make_source("hamming", code.n)
        return hard_grand(word, code, source, cfg.budget)
    # Single-pass soft decoders: syndrome GRAND over a soft-ordered source.
    if cfg.detector == "ml":
        llrs = ml_llrs(y, h, var, cst, layout)
    else:
        llrs = zf_llrs(y, h, var, cst, layout)
    word = (llrs > 0).astype(np.uint8)
    source = make_source(cfg.decoder, code.n, llrs)
    return hard_grand(word, code, source, cfg.budget)


def run_point(
    cfg: ExperimentConfig,
    snr_db: float,
    artifacts: tuple[LinearCode, Constellation, FrameLayout] | None = None,
) -> SweepRecord:
    """Simulate one SNR point until the frame or error limit is reached."""
    cfg.validate()
    code, cst, layout = artifacts if artifacts is not None else build_artifacts(cfg)
    var = ch_mod.noise_variance(snr_db)
    snr_key = int(round(snr_db * 1000))
    t0 = time.perf_counter()

    frames = frame_errors = bit_errors = 0
    total_queries = total_iters = 0
    while frames < cfg.max_frames and frame_errors < cfg.max_frame_errors:
        rng = ch_mod.frame_rng(cfg.seed, snr_key, frames)
        msg = rng.integers(0, 2, size=code.k, dtype=np.uint8)
        codeword = code.encode(msg)
        x = map_word(codeword, cst, layout)
        ch = ch_mod.draw_channel(
            cfg.channel, layout.n_symbols, var, rng, cfg.csi_mix, cfg.block_fading
        )
        y = ch_mod.apply(x, ch, rng)
        outcome = _decode_frame(cfg, code, cst, layout, y, ch)

        frames += 1
        total_queries += outcome.queries
        total_iters += len(outcome.queries_per_iteration)
        if np.any(outcome.decoded != codeword):
            frame_errors += 1
        msg_hat, _ = message_bits(outcome, code)
        bit_errors += int(np.count_nonzero(msg_hat != msg))

    wall = time.perf_counter() - t0
    f = max(frames, 1)
    return SweepRecord(
        snr_db=snr_db,
        frames=frames,
        frame_errors=frame_errors,
        bit_errors=bit_errors,
        bler=frame_errors / f,
        ber=bit_errors / (f * code.k),
        mean_queries=total_queries / f,
        mean_iters=total_iters / f,
        wall_s=wall,
    )


def run_sweep(cfg: ExperimentConfig, verbose: bool = False) -> list[SweepRecord]:
    """Walk the SNR grid; CSV rows are flushed per point when cfg.out is set."""
    cfg.validate()
    artifacts = build_artifacts(cfg)
    records: list[SweepRecord] = []
    sink = open(cfg.out, "w", encoding="utf-8") if cfg.out else None
    try:
        if sink:
            sink.write(CSV_HEADER + "\n")
            sink.flush()
        for snr in cfg.snr_db:
            rec = run_point(cfg, snr, artifacts)
            records.append(rec)
            if sink:
                sink.write(rec.csv_row() + "\n")
                sink.flush()
            if verbose:
                print(rec.csv_row(), flush=True)
    finally:
        if sink:
            sink.close()
    return records


def read_records(path: str) -> list[SweepRecord]:
    """Read a sweep CSV back, validating the schema."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file")
    if lines[0] != CSV_HEADER:
        raise ValueError(f"{path}:1: header mismatch, expected {CSV_HEADER!r}")
    out = []
    names = CSV_HEADER.split(",")
    for rowno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(names):
            raise ValueError(f"{path}:{rowno}: expected {len(names)} columns, got {len(cells)}")
        vals = {}
        for name, cell in zip(names, cells):
            try:
                vals[name] = float(cell)
            except ValueError:
                raise ValueError(f"{path}:{rowno}: column {name!r} is not numeric: {cell!r}") from None
        out.append(
            SweepRecord(
                snr_db=vals["snr_db"],
                frames=int(vals["frames"]),
                frame_errors=int(vals["frame_errors"]),
                bit_errors=int(vals["bit_errors"]),
                bler=vals["bler"],
                ber=vals["ber"],
                mean_queries=vals["mean_queries"],
                mean_iters=vals["mean_iters"],
                wall_s=vals["wall_s"],
            )
        )
    return out


def emit_plot(csv_paths: list[str], out_path: str, floor: float = PLOT_FLOOR) -> None:
    """BLER curves from sweep CSVs to one SVG, log-y with a display floor."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    any_clipped = False
    for path in csv_paths:
        recs = read_records(path)
        snr = np.array([r.snr_db for r in recs])
        bler = np.array([r.bler for r in recs])
        shown = np.maximum(bler, floor)
        line = ax.semilogy(snr, shown, marker="o", label=Path(path).stem)[0]
        clipped = bler < floor
        if np.any(clipped):
            any_clipped = True
            ax.semilogy(
                snr[clipped], shown[clipped], linestyle="none",
                marker="v", mfc="none", color=line.get_color(),
            )
    ax.axhline(floor, color="gray", linestyle="--", linewidth=0.8)
    note = f"display floor {floor:g}" + (" (open markers clipped)" if any_clipped else "")
    ax.annotate(note, xy=(0.02, 0.03), xycoords="axes fraction", fontsize=8, color="gray")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BLER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)


def parse_config_file(path: str) -> dict[str, str]:
    """Flat key=value settings; '#' comments and blank lines ignored."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {text!r}")
            key, value = (part.strip() for part in text.split("=", 1))
            if not key:
                raise ValueError(f"{path}:{lineno}: empty key")
            out[key] = value
    return out
