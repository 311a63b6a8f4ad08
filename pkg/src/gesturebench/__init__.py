"""Gesture-keyboard error-rate simulation, recognition, and layout optimization."""

from importlib import resources

from .classifier import (
    Network,
    RpropParams,
    TrainingPair,
    TrainingSet,
    build_training_set,
    elliot,
    forward,
    load_network,
    new_network,
    save_network,
    train_rprop,
)
from .errors import NoCandidatesError, ParseError, UnknownLayoutError
from .evaluation import ErrorEstimate, EvalConfig, benchmark_scaling, error_rate_mc, uncertainty
from .features import FeatureVector, euclidean_distance, feature_vector, finite_differences
from .geometry import (
    Key,
    KeyboardLayout,
    builtin_layout,
    builtin_names,
    dump_layout,
    key_at,
    key_center,
    load_layout,
    normalize_area,
    swap_keys,
)
from .lexicon import (
    Lexicon,
    dump_lexicon,
    filter_by_wordlists,
    load_lexicon,
    load_wordlist,
    sample_word,
    truncate_top,
)
from .optimizer import Schedule, multi_start, optimize, random_permutation
from .pruning import (
    RadixTree,
    build_radix_tree,
    candidates_in_string_form,
    collapse_runs,
    prune_candidates,
    string_form,
    template_prune,
)
from .recognition import PerfectVectorCache, Scorer, euclidean_scorer, network_scorer, recognize
from .trajectory import (
    ALL_METHODS,
    InputModelConfig,
    area_scaled_config,
    control_points,
    interpolate,
    perfect_vector,
    random_vector,
    resample,
)

__version__ = "0.1.0"


def demo_lexicon() -> Lexicon:
    """The bundled English demo lexicon (common words, approximate counts)."""
    text = resources.files("gesturebench").joinpath("data/demo_lexicon.txt").read_text()
    return load_lexicon(text)
