"""Guessing-based channel decoding and Monte Carlo link simulation.

Conventions shared across the package:

* bit words are numpy uint8 arrays (length n in the code domain, length
  M*q in the padded symbol domain, filler bits at the tail),
* soft values are numpy float64 arrays holding log P(bit=1)/P(bit=0),
* noise-pattern sources are iterators of sorted flip-position tuples.
"""

from .galois import GaloisField
from .codes import LinearCode, build_bch, load_generator_matrix, random_linear_code
from .modem import (
    Constellation,
    FrameLayout,
    constellation,
    hard_demap,
    make_layout,
    map_word,
    per_bit_variance,
    slice_symbols,
)
from .channel import (
    ChannelRealization,
    apply,
    csi_error,
    draw_channel,
    frame_rng,
    noise_variance,
    rayleigh_diag,
)
from .detector import (
    DetectionResult,
    map_llrs,
    map_metric,
    ml_detect,
    ml_llrs,
    saturation_cap,
    symbol_bit_llrs,
    weighted_distance,
    zf_equalize,
    zf_llrs,
)
from .guesswork import (
    hamming_source,
    make_source,
    masked,
    orb_source,
    pattern_weight,
    reliability_ranks,
    sgrand_source,
)
from .turbo import (
    DecodeOutcome,
    DecoderConfig,
    TurboState,
    hard_grand,
    message_bits,
    synthesize_llrs,
    turbo_grand,
)
from .sim import (
    ExperimentConfig,
    SweepRecord,
    build_code,
    emit_plot,
    parse_snr,
    read_records,
    run_point,
    run_sweep,
)

__all__ = [
    "GaloisField",
    "LinearCode",
    "build_bch",
    "load_generator_matrix",
    "random_linear_code",
    "Constellation",
    "FrameLayout",
    "constellation",
    "hard_demap",
    "make_layout",
    "map_word",
    "per_bit_variance",
    "slice_symbols",
    "ChannelRealization",
    "apply",
    "csi_error",
    "draw_channel",
    "frame_rng",
    "noise_variance",
    "rayleigh_diag",
    "DetectionResult",
    "map_llrs",
    "map_metric",
    "ml_detect",
    "ml_llrs",
    "saturation_cap",
    "symbol_bit_llrs",
    "weighted_distance",
    "zf_equalize",
    "zf_llrs",
    "hamming_source",
    "make_source",
    "masked",
    "orb_source",
    "pattern_weight",
    "reliability_ranks",
    "sgrand_source",
    "DecodeOutcome",
    "DecoderConfig",
    "TurboState",
    "hard_grand",
    "message_bits",
    "synthesize_llrs",
    "turbo_grand",
    "ExperimentConfig",
    "SweepRecord",
    "build_code",
    "emit_plot",
    "parse_snr",
    "read_records",
    "run_point",
    "run_sweep",
]
