"""Command line front end: sweep, plot, and selftest subcommands.

Sweep settings come from three layers, later ones winning: built-in
defaults, a key=value config file (--config), and command line flags.
File keys match the flag names without the leading dashes.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from math import erfc, fsum, sqrt

import numpy as np

from .sim import (
    CSV_HEADER,
    ExperimentConfig,
    emit_plot,
    parse_config_file,
    parse_snr,
    run_point,
    run_sweep,
)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# config key -> (ExperimentConfig field, converter)
_SETTINGS = {
    "code": ("code", str),
    "mod": ("mod", str),
    "channel": ("channel", str),
    "csi-mix": ("csi_mix", float),
    "block-fading": ("block_fading", _parse_bool),
    "detector": ("detector", str),
    "decoder": ("decoder", str),
    "turbo-source": ("turbo_source", str),
    "budget": ("budget", int),
    "iters": ("iters", int),
    "llr-in": ("llr_in", str),
    "snr": ("snr_db", parse_snr),
    "frames": ("max_frames", int),
    "errors": ("max_frame_errors", int),
    "seed": ("seed", int),
    "out": ("out", str),
}


def _apply_settings(cfg: ExperimentConfig, settings: dict[str, str], origin: str) -> None:
    for key, raw in settings.items():
        norm = key.replace("_", "-")
        if norm not in _SETTINGS:
            raise ValueError(f"{origin}: unknown setting {key!r}")
        fname, conv = _SETTINGS[norm]
        try:
            setattr(cfg, fname, conv(raw))
        except ValueError as exc:
            raise ValueError(f"{origin}: bad value for {key!r}: {exc}") from None


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig()
    if args.config:
        _apply_settings(cfg, parse_config_file(args.config), args.config)
    flag_settings = {
        key: getattr(args, field)
        for key, (field, _) in _SETTINGS.items()
        if getattr(args, field, None) is not None
    }
    for key, value in flag_settings.items():
        fname, conv = _SETTINGS[key]
        setattr(cfg, fname, conv(value) if isinstance(value, str) else value)
    cfg.validate()
    print(CSV_HEADER, flush=True)
    run_sweep(cfg, verbose=True)
    if cfg.out:
        print(f"# wrote {cfg.out}", flush=True)
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    emit_plot(args.csvs, args.out)
    print(f"# wrote {args.out}")
    return 0


def _cmd_selftest(_: argparse.Namespace) -> int:
    from .codes import build_bch, random_linear_code
    from .galois import GaloisField
    from .guesswork import sgrand_source
    from .modem import constellation, hard_demap, make_layout, map_word, slice_symbols
    from .turbo import hard_grand

    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"selftest: {name}: {'PASS' if ok else 'FAIL'}", flush=True)
        failures += 0 if ok else 1

    gf = GaloisField(3)
    check("gf(8) exp table", list(gf.exp[:7]) == [1, 2, 4, 3, 6, 7, 5])

    code = build_bch(127, 2)
    rng = np.random.default_rng(7)
    ok = code.k == 113
    for _ in range(50):
        cw = code.encode(rng.integers(0, 2, code.k, dtype=np.uint8))
        ok = ok and code.is_codeword(cw) and code.poly_remainder(cw) == 0
        bad = cw.copy()
        bad[rng.choice(code.n, 2, replace=False)] ^= 1
        ok = ok and not code.is_codeword(bad)
    check("bch(127,113) encode and syndrome", ok)

    cst = constellation("qam16")
    layout = make_layout(127, cst)
    ok = abs(float(np.mean(np.abs(cst.points) ** 2)) - 1.0) < 1e-12
    word = rng.integers(0, 2, 127, dtype=np.uint8)
    back = hard_demap(slice_symbols(map_word(word, cst, layout), cst), cst, layout)
    ok = ok and np.array_equal(back, word)
    check("modem roundtrip and unit energy", ok)

    vals = rng.normal(size=10)
    mags = np.abs(vals)
    expect = sorted(
        (
            tuple(p)
            for w in range(11)
            for p in itertools.combinations(range(10), w)
        ),
        key=lambda p: (fsum(mags[i] for i in p), len(p), p),
    )
    got = list(itertools.islice(sgrand_source(vals), 1024))
    check("sgrand emission order", got == expect)

    code16 = random_linear_code(16, 8, 1)
    msgs = ((np.arange(256)[:, None] >> np.arange(8)) & 1).astype(np.uint8)
    books = (msgs.astype(np.uint32) @ code16.generator & 1).astype(np.uint8)
    ok = True
    sigma2 = 0.7
    for trial in range(200):
        trng = np.random.default_rng(1000 + trial)
        cw = books[trng.integers(0, 256)]
        y = 1.0 - 2.0 * cw + trng.normal(scale=np.sqrt(sigma2 / 2), size=16)
        llr = -4.0 * y / sigma2
        word = (llr > 0).astype(np.uint8)
        out = hard_grand(word, code16, sgrand_source(llr), budget=1 << 16)
        flips = books ^ word
        weights = flips @ np.abs(llr)
        near = np.flatnonzero(weights <= weights.min() + 1e-9)
        best = min(
            near,
            key=lambda i: (
                fsum(np.abs(llr)[flips[i] != 0]),
                int(flips[i].sum()),
                tuple(np.flatnonzero(flips[i])),
            ),
        )
        ok = ok and np.array_equal(out.decoded, books[best])
    check("soft grand equals codebook minimization (200 trials)", ok)

    cfg_t = ExperimentConfig(
        decoder="turbo", budget=2000, iters=2, snr_db=[12.0],
        max_frames=30, max_frame_errors=10**9, seed=5,
    )
    rec = run_point(cfg_t, 12.0)
    check(
        "turbo pipeline smoke",
        rec.frames == 30 and rec.mean_queries <= 2 * 2000 and rec.mean_iters == 2.0,
    )

    snr_db = 4.3227
    cfg_u = ExperimentConfig(
        code="random:127,127,0", channel="awgn", decoder="hard",
        snr_db=[snr_db], max_frames=800, max_frame_errors=10**9, seed=3,
    )
    rec = run_point(cfg_u, snr_db)
    theory = 0.5 * erfc(sqrt(10 ** (snr_db / 10)))
    check(
        "uncoded bpsk ber vs theory (15%)",
        rec.ber > 0 and abs(rec.ber - theory) / theory < 0.15,
    )

    print(f"selftest: {'all passed' if failures == 0 else f'{failures} failed'}", flush=True)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grandsim",
        description="Guessing-based decoding experiments: sweeps, plots, selftest.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a Monte Carlo SNR sweep")
    sweep.add_argument("--config", help="key=value settings file")
    sweep.add_argument("--code", dest="code")
    sweep.add_argument("--mod", dest="mod", choices=["bpsk", "qam16"])
    sweep.add_argument("--channel", dest="channel",
                       choices=["awgn", "rayleigh", "rayleigh-csi-err"])
    sweep.add_argument("--csi-mix", dest="csi_mix", type=float)
    sweep.add_argument("--block-fading", dest="block_fading",
                       action="store_true", default=None)
    sweep.add_argument("--detector", dest="detector", choices=["zf", "ml"])
    sweep.add_argument("--decoder", dest="decoder",
                       choices=["hard", "orbgrand", "sgrand", "turbo"])
    sweep.add_argument("--turbo-source", dest="turbo_source",
                       choices=["hamming", "orbgrand", "sgrand"])
    sweep.add_argument("--budget", dest="budget", type=int)
    sweep.add_argument("--iters", dest="iters", type=int)
    sweep.add_argument("--llr-in", dest="llr_in", choices=["zero", "zf"])
    sweep.add_argument("--snr", dest="snr_db", help="start:step:stop in dB")
    sweep.add_argument("--frames", dest="max_frames", type=int)
    sweep.add_argument("--errors", dest="max_frame_errors", type=int)
    sweep.add_argument("--seed", dest="seed", type=int)
    sweep.add_argument("--out", dest="out", help="CSV output path")
    sweep.set_defaults(func=_cmd_sweep)

    plot = sub.add_parser("plot", help="plot BLER curves from sweep CSVs")
    plot.add_argument("csvs", nargs="+", help="sweep CSV files")
    plot.add_argument("--out", required=True, help="SVG output path")
    plot.set_defaults(func=_cmd_plot)

    selftest = sub.add_parser("selftest", help="quick built-in checks")
    selftest.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
