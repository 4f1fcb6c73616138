"""Reed-Muller codes, Gibbs posterior-sampling decoding over the binary
symmetric channel, and exact mixing-time diagnostics at desk scale.

The hot kernels (chain stepping, Gray-code distance tables) run in a compiled
extension when available and in a pure-Python twin otherwise; see
rmgibbs.backend_name().
"""

__version__ = "0.1.0"

from ._backend import HAVE_COMPILED, backend_name
from .errors import DimensionError, ParameterError, ResourceLimitError, RmGibbsError
from .gf2 import BitMatrix, BitVector, add, encode, hamming_distance, weight
from .rmcode import (
    Monomial,
    RmCode,
    build,
    enumerate_monomials,
    eval_monomial,
    min_distance,
    order_for_rate,
)
from .channel import (
    BscParams,
    PosteriorModel,
    chain_rng,
    crossover_exponent,
    index_to_message,
    is_typical,
    message_to_index,
    transmit,
)
from .gibbs import GibbsChain, apply_kernel, decode, transition_prob
from .adversary import (
    AdversarialInstance,
    Lemma4Report,
    build_instance,
    build_y,
    closed_form_delta,
    nearest_codeword,
    verify_grid,
    verify_lemma4,
)
from .analysis import (
    BottleneckReport,
    MixingReport,
    SandwichReport,
    Theorem3Report,
    exact_bottleneck,
    exact_tv_curve,
    map_decode,
    sandwich_check,
    singleton_bottleneck,
    theorem3_bound,
    tv_distance,
)

__all__ = [
    "__version__",
    "HAVE_COMPILED",
    "backend_name",
    "RmGibbsError",
    "ParameterError",
    "DimensionError",
    "ResourceLimitError",
    "BitVector",
    "BitMatrix",
    "weight",
    "hamming_distance",
    "add",
    "encode",
    "Monomial",
    "RmCode",
    "enumerate_monomials",
    "eval_monomial",
    "build",
    "min_distance",
    "order_for_rate",
    "BscParams",
    "PosteriorModel",
    "crossover_exponent",
    "transmit",
    "chain_rng",
    "is_typical",
    "message_to_index",
    "index_to_message",
    "GibbsChain",
    "transition_prob",
    "apply_kernel",
    "decode",
    "AdversarialInstance",
    "Lemma4Report",
    "build_y",
    "nearest_codeword",
    "closed_form_delta",
    "build_instance",
    "verify_lemma4",
    "verify_grid",
    "BottleneckReport",
    "MixingReport",
    "SandwichReport",
    "Theorem3Report",
    "singleton_bottleneck",
    "exact_bottleneck",
    "exact_tv_curve",
    "map_decode",
    "sandwich_check",
    "theorem3_bound",
    "tv_distance",
]
