"""Gesture trajectory generation.

A gesture for a word is built in three steps: draw one control point per
letter (key centers, optionally Gaussian-perturbed), interpolate a continuous
curve through them, and resample the curve at equal arc-length intervals into
a fixed-length vector of (x, y) points with implicit unit time steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .geometry import KeyboardLayout

LINEAR = "linear"
NATURAL_CUBIC = "natural-cubic"
CUBIC_HERMITE = "cubic-hermite"
MONOTONE_CUBIC_HERMITE = "monotone-cubic-hermite"
STRAIGHT_ENDED_NATURAL_CUBIC = "straight-ended-natural-cubic"

ALL_METHODS = (
    LINEAR,
    NATURAL_CUBIC,
    CUBIC_HERMITE,
    MONOTONE_CUBIC_HERMITE,
    STRAIGHT_ENDED_NATURAL_CUBIC,
)

# Dense samples per control-point interval before arc-length resampling.
OVERSAMPLE = 32

SIGMA_FIXED = "fixed"
SIGMA_EXTENT = "extent"


@dataclass(frozen=True)
class InputModelConfig:
    """Parameters of the randomized input model.

    sigma_x/sigma_y are the Gaussian widths of the per-letter control-point
    offsets (in layout units); rho is the per-axis correlation between
    consecutive offsets.  In "extent" sigma mode the widths instead scale
    with each key's width/height by extent_scale and sigma_x/sigma_y are
    ignored.
    """

    sigma_x: float
    sigma_y: float
    rho: float = 0.0
    interpolation: str = LINEAR
    n_points: int = 50
    sigma_mode: str = SIGMA_FIXED
    extent_scale: float = 0.25

    def __post_init__(self):
        if self.sigma_x < 0 or self.sigma_y < 0:
            raise ValueError("sigma_x and sigma_y must be >= 0")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError("rho must be in [-1, 1]")
        if self.interpolation not in ALL_METHODS:
            raise ValueError(f"unknown interpolation {self.interpolation!r}")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")
        if self.sigma_mode not in (SIGMA_FIXED, SIGMA_EXTENT):
            raise ValueError(f"unknown sigma_mode {self.sigma_mode!r}")


def area_scaled_config(layout: KeyboardLayout, **overrides) -> InputModelConfig:
    """Default model for a layout: sigma = 0.25 * sqrt(mean single-key area)."""
    a_key = layout.total_key_area / 26.0
    sigma = 0.25 * float(np.sqrt(a_key))
    return InputModelConfig(sigma_x=sigma, sigma_y=sigma, **overrides)


def _letter_indices(word: str) -> np.ndarray:
    if not word:
        raise ValueError("word must be non-empty")
    idx = np.frombuffer(word.encode("ascii", "strict"), dtype=np.uint8).astype(np.intp) - 97
    if (idx < 0).any() or (idx > 25).any():
        raise ValueError(f"word {word!r} contains characters outside a-z")
    return idx


def _offset_sigmas(idx: np.ndarray, layout: KeyboardLayout, cfg: InputModelConfig) -> np.ndarray:
    if cfg.sigma_mode == SIGMA_EXTENT:
        return cfg.extent_scale * 2.0 * layout.half_extents[idx]
    return np.array([cfg.sigma_x, cfg.sigma_y])


def control_points(
    word: str, layout: KeyboardLayout, cfg: InputModelConfig, rng: np.random.Generator
) -> np.ndarray:
    """One Gaussian-perturbed control point per letter, shape (len(word), 2)."""
    return control_points_batch(word, layout, cfg, 1, rng)[0]


def control_points_batch(
    word: str, layout: KeyboardLayout, cfg: InputModelConfig, count: int, rng: np.random.Generator
) -> np.ndarray:
    """count independent control-point sets for the same word, (count, L, 2)."""
    idx = _letter_indices(word)
    centers = layout.centers[idx]
    sigmas = _offset_sigmas(idx, layout, cfg)
    z = rng.standard_normal((count, len(idx), 2))
    if cfg.rho != 0.0 and len(idx) > 1:
        mix = np.sqrt(1.0 - cfg.rho * cfg.rho)
        for k in range(1, len(idx)):
            z[:, k] = cfg.rho * z[:, k - 1] + mix * z[:, k]
    return centers + sigmas * z


def _chordal_params(pts: np.ndarray) -> np.ndarray:
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _dedupe(pts: np.ndarray) -> np.ndarray:
    # Splines need strictly increasing chordal parameters; drop exact repeats
    # (zero-noise repeated letters).
    if len(pts) < 2:
        return pts
    keep = np.concatenate([[True], np.linalg.norm(np.diff(pts, axis=0), axis=1) > 1e-12])
    return pts[keep]


def _dense_params(t: np.ndarray) -> np.ndarray:
    chunks = [np.linspace(t[i], t[i + 1], OVERSAMPLE + 1)[:-1] for i in range(len(t) - 1)]
    chunks.append(t[-1:])
    return np.concatenate(chunks)


def _catmull_rom_tangents(t: np.ndarray, pts: np.ndarray) -> np.ndarray:
    m = np.empty_like(pts)
    m[0] = (pts[1] - pts[0]) / (t[1] - t[0])
    m[-1] = (pts[-1] - pts[-2]) / (t[-1] - t[-2])
    if len(pts) > 2:
        m[1:-1] = (pts[2:] - pts[:-2]) / (t[2:] - t[:-2])[:, None]
    return m


def _fritsch_carlson_limit(t: np.ndarray, y: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Clamp tangents of one coordinate so each cubic segment is monotone."""
    m = m.copy()
    d = np.diff(y) / np.diff(t)
    for i in range(len(d)):
        if d[i] == 0.0:
            m[i] = 0.0
            m[i + 1] = 0.0
            continue
        a = m[i] / d[i]
        b = m[i + 1] / d[i]
        if a < 0.0:
            m[i] = 0.0
            a = 0.0
        if b < 0.0:
            m[i + 1] = 0.0
            b = 0.0
        s = a * a + b * b
        if s > 9.0:
            tau = 3.0 / np.sqrt(s)
            m[i] = tau * a * d[i]
            m[i + 1] = tau * b * d[i]
    return m


def interpolate(ctrl: np.ndarray, method: str) -> np.ndarray:
    """Densely sampled curve through the control points, in order.

    Returns an (M, 2) polyline.  A single control point yields itself.
    """
    ctrl = np.asarray(ctrl, dtype=float)
    if ctrl.ndim != 2 or ctrl.shape[1] != 2 or len(ctrl) == 0:
        raise ValueError("ctrl must be a non-empty (L, 2) array")
    if method not in ALL_METHODS:
        raise ValueError(f"unknown interpolation {method!r}")
    if method == LINEAR:
        return ctrl
    pts = _dedupe(ctrl)
    if len(pts) < 3:
        return pts
    if method == STRAIGHT_ENDED_NATURAL_CUBIC:
        if len(pts) < 4:
            return pts
        inner = interpolate(pts[1:-1], NATURAL_CUBIC)
        return np.concatenate([pts[:1], inner, pts[-1:]])
    t = _chordal_params(pts)
    if method == NATURAL_CUBIC:
        spline = CubicSpline(t, pts, axis=0, bc_type="natural")
    else:
        m = _catmull_rom_tangents(t, pts)
        if method == MONOTONE_CUBIC_HERMITE:
            for axis in range(2):
                m[:, axis] = _fritsch_carlson_limit(t, pts[:, axis], m[:, axis])
        spline = CubicHermiteSpline(t, pts, m, axis=0)
    return spline(_dense_params(t))


def resample(curve: np.ndarray, n_points: int) -> np.ndarray:
    """n_points samples at equal arc-length spacing along the polyline."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    curve = np.asarray(curve, dtype=float)
    if curve.ndim != 2 or curve.shape[1] != 2 or len(curve) == 0:
        raise ValueError("curve must be a non-empty (M, 2) array")
    cum = _chordal_params(curve)
    total = cum[-1]
    if total == 0.0:
        return np.tile(curve[0], (n_points, 1))
    targets = np.linspace(0.0, total, n_points)
    return np.stack(
        [np.interp(targets, cum, curve[:, 0]), np.interp(targets, cum, curve[:, 1])], axis=1
    )


def perfect_vector(word: str, layout: KeyboardLayout, n_points: int = 50) -> np.ndarray:
    """Deterministic vector through exact key centers, linear interpolation."""
    idx = _letter_indices(word)
    return resample(layout.centers[idx], n_points)


def random_vector(
    word: str, layout: KeyboardLayout, cfg: InputModelConfig, rng: np.random.Generator
) -> np.ndarray:
    """One randomized vector: perturbed control points -> curve -> resample."""
    ctrl = control_points(word, layout, cfg, rng)
    return resample(interpolate(ctrl, cfg.interpolation), cfg.n_points)


def random_vectors_batch(
    word: str, layout: KeyboardLayout, cfg: InputModelConfig, count: int, rng: np.random.Generator
) -> np.ndarray:
    """count randomized vectors for one word, shape (count, n_points, 2).

    Statistically identical to count calls of random_vector on the same
    stream; the linear-interpolation path is batched for speed.
    """
    ctrl = control_points_batch(word, layout, cfg, count, rng)
    n = cfg.n_points
    if cfg.interpolation != LINEAR:
        return np.stack(
            [resample(interpolate(c, cfg.interpolation), n) for c in ctrl]
        )
    out = np.empty((count, n, 2))
    if ctrl.shape[1] == 1:
        out[:] = ctrl[:, :1, :]
        return out
    seg = np.linalg.norm(np.diff(ctrl, axis=1), axis=2)
    cum = np.concatenate([np.zeros((count, 1)), np.cumsum(seg, axis=1)], axis=1)
    frac = np.linspace(0.0, 1.0, n)
    for i in range(count):
        total = cum[i, -1]
        if total == 0.0:
            out[i] = ctrl[i, 0]
            continue
        targets = frac * total
        out[i, :, 0] = np.interp(targets, cum[i], ctrl[i, :, 0])
        out[i, :, 1] = np.interp(targets, cum[i], ctrl[i, :, 1])
    return out
