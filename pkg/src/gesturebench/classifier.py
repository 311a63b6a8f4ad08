"""Neural match scorer for gesture/template pairs.

A fixed 11-11-11-11-2-1 fully connected network with Elliot activations maps
the 11-feature distance vector to a similarity score in (0, 1); 1 means
"same word".  Training is full-batch resilient backpropagation on generated
pairs of randomized vectors and ideal traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParseError
from .features import FEATURE_NAMES, FeatureVector, feature_vector
from .geometry import KeyboardLayout
from .lexicon import Lexicon, sample_word
from .pruning import RadixTree, build_radix_tree, prune_candidates
from .trajectory import InputModelConfig, perfect_vector, random_vector

LAYER_SIZES = (11, 11, 11, 11, 2, 1)
STEEPNESS = 0.5

CATEGORY_SAME = "same"
CATEGORY_RANDOM = "random"
CATEGORY_SIMILAR = "similar"


def elliot(x, s: float = STEEPNESS):
    """Soft sigmoid 0.5*s*x/(1 + s*|x|) + 0.5, bounded in (0, 1)."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * s * x / (1.0 + s * np.abs(x)) + 0.5
    return float(out) if out.ndim == 0 else out


def elliot_deriv(x, s: float = STEEPNESS):
    x = np.asarray(x, dtype=float)
    return 0.5 * s / (1.0 + s * np.abs(x)) ** 2


@dataclass(frozen=True)
class Network:
    """Feedforward scorer weights plus feature-normalization statistics."""

    weights: tuple[np.ndarray, ...]  # per layer, shape (fan_out, fan_in)
    biases: tuple[np.ndarray, ...]  # per layer, shape (fan_out,)
    norm_mean: np.ndarray  # (11,)
    norm_std: np.ndarray  # (11,)
    steepness: float = STEEPNESS

    def __post_init__(self):
        expected = list(zip(LAYER_SIZES[1:], LAYER_SIZES[:-1]))
        shapes = [w.shape for w in self.weights]
        if shapes != expected:
            raise ValueError(f"weight shapes {shapes} do not match {expected}")
        for w, b, (out, _) in zip(self.weights, self.biases, expected):
            if b.shape != (out,):
                raise ValueError(f"bias shape {b.shape} does not match fan-out {out}")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ValueError("network weights must be finite")
        if self.steepness <= 0:
            raise ValueError("steepness must be positive")

    def normalize(self, feats: np.ndarray) -> np.ndarray:
        std = np.where(self.norm_std > 0, self.norm_std, 1.0)
        return (feats - self.norm_mean) / std


def new_network(rng: np.random.Generator) -> Network:
    """Fresh network with uniform [-0.5, 0.5] weights and identity normalization."""
    weights = []
    biases = []
    for fan_in, fan_out in zip(LAYER_SIZES[:-1], LAYER_SIZES[1:]):
        weights.append(rng.uniform(-0.5, 0.5, size=(fan_out, fan_in)))
        biases.append(rng.uniform(-0.5, 0.5, size=fan_out))
    return Network(
        weights=tuple(weights),
        biases=tuple(biases),
        norm_mean=np.zeros(LAYER_SIZES[0]),
        norm_std=np.ones(LAYER_SIZES[0]),
    )


def forward(net: Network, f: FeatureVector) -> float:
    """Similarity score in (0, 1); higher means a better match."""
    return float(forward_block(net, f.as_array()[None])[0])


def forward_block(net: Network, feats: np.ndarray) -> np.ndarray:
    """Scores for a (P, 11) feature block, shape (P,)."""
    a = net.normalize(np.asarray(feats, dtype=float))
    for w, b in zip(net.weights, net.biases):
        a = elliot(a @ w.T + b, net.steepness)
    return a[:, 0]


@dataclass(frozen=True)
class TrainingPair:
    features: FeatureVector
    label: float
    category: str


@dataclass(frozen=True)
class RpropParams:
    """iRPROP- hyperparameters: sign-based per-weight adaptive steps."""

    eta_plus: float = 1.2
    eta_minus: float = 0.5
    step_init: float = 0.1
    step_min: float = 1e-6
    step_max: float = 50.0


def _loss_and_gradients(net, x, y):
    activations = [x]
    zs = []
    a = x
    for w, b in zip(net.weights, net.biases):
        z = a @ w.T + b
        a = elliot(z, net.steepness)
        zs.append(z)
        activations.append(a)
    scores = a[:, 0]
    residual = scores - y
    loss = float(np.mean(residual**2))
    n = len(y)
    delta = (2.0 / n) * residual[:, None] * elliot_deriv(zs[-1], net.steepness)
    grads_w = []
    grads_b = []
    for layer in range(len(net.weights) - 1, -1, -1):
        grads_w.append(delta.T @ activations[layer])
        grads_b.append(delta.sum(axis=0))
        if layer > 0:
            delta = (delta @ net.weights[layer]) * elliot_deriv(zs[layer - 1], net.steepness)
    grads_w.reverse()
    grads_b.reverse()
    return loss, grads_w, grads_b


def mse_loss(net: Network, data: list[TrainingPair]) -> float:
    x = net.normalize(np.stack([p.features.as_array() for p in data]))
    y = np.array([p.label for p in data])
    return _loss_and_gradients(net, x, y)[0]


def fit_normalization(net: Network, data: list[TrainingPair]) -> Network:
    """Network with per-feature mean/std statistics taken from the data."""
    feats = np.stack([p.features.as_array() for p in data])
    return replace(net, norm_mean=feats.mean(axis=0), norm_std=feats.std(axis=0))


def train_rprop(
    net: Network,
    data: list[TrainingPair],
    epochs: int,
    hyper: RpropParams = RpropParams(),
    refit_normalization: bool = True,
) -> tuple[Network, list[float]]:
    """Full-batch iRPROP- minimizing the MSE between score and label.

    Returns the trained network and the per-epoch loss trace (measured before
    each update).  Zero epochs returns the network unchanged.
    """
    if not data:
        raise ValueError("training data must be non-empty")
    if epochs == 0:
        return net, []
    if refit_normalization:
        net = fit_normalization(net, data)
    x = net.normalize(np.stack([p.features.as_array() for p in data]))
    y = np.array([p.label for p in data])

    weights = [w.copy() for w in net.weights]
    biases = [b.copy() for b in net.biases]
    params = weights + biases
    working = replace(net, weights=tuple(weights), biases=tuple(biases))
    steps = [np.full_like(p, hyper.step_init) for p in params]
    prev_grads = [np.zeros_like(p) for p in params]
    losses = []
    for epoch in range(epochs):
        loss, grads_w, grads_b = _loss_and_gradients(working, x, y)
        if not np.isfinite(loss):
            raise RuntimeError(f"non-finite loss {loss} at epoch {epoch}")
        losses.append(loss)
        grads = grads_w + grads_b
        for p, g, prev, step in zip(params, grads, prev_grads, steps):
            sign_change = g * prev
            grew = sign_change > 0
            flipped = sign_change < 0
            step *= np.where(grew, hyper.eta_plus, 1.0)
            step *= np.where(flipped, hyper.eta_minus, 1.0)
            np.clip(step, hyper.step_min, hyper.step_max, out=step)
            g = np.where(flipped, 0.0, g)
            p -= np.sign(g) * step
            prev[...] = g
    return working, losses


def save_network(net: Network) -> str:
    """Text form: layer sizes, steepness, normalization, then per-layer
    row-major weights and biases, one line each."""

    def fmt(values) -> str:
        return " ".join(f"{v:.17g}" for v in np.asarray(values).ravel())

    lines = [
        "layers " + " ".join(str(s) for s in LAYER_SIZES),
        f"steepness {net.steepness:.17g}",
        fmt(net.norm_mean),
        fmt(net.norm_std),
    ]
    for w, b in zip(net.weights, net.biases):
        lines.append(fmt(w))
        lines.append(fmt(b))
    return "\n".join(lines) + "\n"


def load_network(text: str) -> Network:
    lines = [l for l in (raw.strip() for raw in text.splitlines()) if l]
    if len(lines) != 4 + 2 * (len(LAYER_SIZES) - 1):
        raise ParseError(f"model file must have {4 + 2 * (len(LAYER_SIZES) - 1)} lines")
    head = lines[0].split()
    if head[0] != "layers":
        raise ParseError("model file must start with a layers line")
    if tuple(int(v) for v in head[1:]) != LAYER_SIZES:
        raise ParseError(f"unsupported layer sizes {head[1:]}")
    steep = lines[1].split()
    if steep[0] != "steepness" or len(steep) != 2:
        raise ParseError("second line must be `steepness <value>`")

    def parse(line: str, count: int, what: str) -> np.ndarray:
        vals = line.split()
        if len(vals) != count:
            raise ParseError(f"expected {count} numbers for {what}, got {len(vals)}")
        try:
            return np.array([float(v) for v in vals])
        except ValueError:
            raise ParseError(f"bad number in {what}") from None

    mean = parse(lines[2], LAYER_SIZES[0], "normalization means")
    std = parse(lines[3], LAYER_SIZES[0], "normalization stds")
    weights = []
    biases = []
    for i, (fan_in, fan_out) in enumerate(zip(LAYER_SIZES[:-1], LAYER_SIZES[1:])):
        w = parse(lines[4 + 2 * i], fan_in * fan_out, f"layer {i} weights")
        b = parse(lines[5 + 2 * i], fan_out, f"layer {i} biases")
        weights.append(w.reshape(fan_out, fan_in))
        biases.append(b)
    try:
        return Network(
            weights=tuple(weights),
            biases=tuple(biases),
            norm_mean=mean,
            norm_std=std,
            steepness=float(steep[1]),
        )
    except ValueError as e:
        raise ParseError(str(e)) from None


@dataclass
class TrainingSet:
    pairs: list[TrainingPair]
    fallback_count: int = 0  # similar-word pairs demoted to random (no candidates)

    def feature_matrix(self) -> np.ndarray:
        return np.stack([p.features.as_array() for p in self.pairs])


def build_training_set(
    lex: Lexicon,
    layout: KeyboardLayout,
    cfgs: list[InputModelConfig],
    total: int,
    rng: np.random.Generator,
    prune_vectors: int = 20,
    tree: RadixTree | None = None,
) -> TrainingSet:
    """Labelled feature pairs: 30% same word, 20% random word, 50% similar word.

    Each pair compares a randomized vector of word_a (interpolation methods
    rotate through cfgs) against the ideal linear trace of word_b.  Similar
    words come from word_a's pruned candidate set; when that set is empty the
    pair falls back to the random category and is counted.
    """
    if total < 10:
        raise ValueError("total must be >= 10")
    if not len(lex):
        raise ValueError("lexicon must be non-empty")
    if not cfgs:
        raise ValueError("need at least one input config")
    n_points = cfgs[0].n_points
    if any(c.n_points != n_points for c in cfgs):
        raise ValueError("all input configs must share n_points")
    if tree is None:
        tree = build_radix_tree(lex)

    n_same = (3 * total) // 10
    n_random = (2 * total) // 10
    n_similar = total - n_same - n_random
    categories = (
        [CATEGORY_SAME] * n_same + [CATEGORY_RANDOM] * n_random + [CATEGORY_SIMILAR] * n_similar
    )

    perfect_cache: dict[str, np.ndarray] = {}

    def perfect(word: str) -> np.ndarray:
        got = perfect_cache.get(word)
        if got is None:
            got = perfect_cache[word] = perfect_vector(word, layout, n_points)
        return got

    pairs: list[TrainingPair] = []
    fallbacks = 0
    for i, category in enumerate(categories):
        cfg = cfgs[i % len(cfgs)]
        word_a = sample_word(lex, rng)
        v = random_vector(word_a, layout, cfg, rng)
        if category == CATEGORY_SIMILAR:
            cands = prune_candidates(word_a, layout, cfg, prune_vectors, tree, rng)
            cands.discard(word_a)
            if cands:
                word_b = sorted(cands)[rng.integers(len(cands))]
            else:
                fallbacks += 1
                category = CATEGORY_RANDOM
        if category == CATEGORY_RANDOM:
            word_b = word_a
            for _ in range(1000):
                word_b = sample_word(lex, rng)
                if word_b != word_a:
                    break
            if word_b == word_a:  # single-word lexicon
                category = CATEGORY_SAME
        if category == CATEGORY_SAME:
            word_b = word_a
        label = 1.0 if word_b == word_a else 0.0
        pairs.append(TrainingPair(feature_vector(v, perfect(word_b)), label, category))
    return TrainingSet(pairs=pairs, fallback_count=fallbacks)


__all__ = [
    "CATEGORY_RANDOM",
    "CATEGORY_SAME",
    "CATEGORY_SIMILAR",
    "FEATURE_NAMES",
    "LAYER_SIZES",
    "Network",
    "RpropParams",
    "STEEPNESS",
    "TrainingPair",
    "TrainingSet",
    "build_training_set",
    "elliot",
    "elliot_deriv",
    "fit_normalization",
    "forward",
    "forward_block",
    "load_network",
    "mse_loss",
    "new_network",
    "save_network",
    "train_rprop",
]
