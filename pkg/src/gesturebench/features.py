"""Distance features between two equal-length input vectors.

The feature set holds squared component distances of the positions, of the
first and second discrete time derivatives (unit time steps), of the first
and last points, plus the signed difference of squared polyline lengths.
Identical vectors map to the all-zero feature vector.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

FEATURE_NAMES = (
    "d2_x",
    "d2_y",
    "d2_dx",
    "d2_dy",
    "d2_ddx",
    "d2_ddy",
    "d2_first_x",
    "d2_first_y",
    "d2_last_x",
    "d2_last_y",
    "dlen2",
)


@dataclass(frozen=True)
class FeatureVector:
    d2_x: float
    d2_y: float
    d2_dx: float
    d2_dy: float
    d2_ddx: float
    d2_ddy: float
    d2_first_x: float
    d2_first_y: float
    d2_last_x: float
    d2_last_y: float
    dlen2: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self))

    @classmethod
    def from_array(cls, a) -> "FeatureVector":
        vals = [float(v) for v in a]
        if len(vals) != len(fields(cls)):
            raise ValueError(f"expected {len(fields(cls))} features, got {len(vals)}")
        return cls(*vals)


def _check_pair(a: np.ndarray, b: np.ndarray, min_len: int = 2) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.ndim != 2 or a.shape[1] != 2 or len(a) < min_len:
        raise ValueError(f"vectors must be (n>={min_len}, 2) arrays, got {a.shape}")
    return a, b


def euclidean_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Root of the summed squared point-to-point distances."""
    a, b = _check_pair(a, b)
    return float(np.sqrt(((a - b) ** 2).sum()))


def finite_differences(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First and second forward differences per axis, lengths n-1 and n-2."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise ValueError(f"need an (n>=3, 2) vector, got {v.shape}")
    d = np.diff(v, axis=0)
    return d, np.diff(d, axis=0)


def path_length(v: np.ndarray) -> float:
    """Arc length of the sampled polyline."""
    v = np.asarray(v, dtype=float)
    return float(np.linalg.norm(np.diff(v, axis=0), axis=1).sum())


def feature_vector(a: np.ndarray, b: np.ndarray) -> FeatureVector:
    """The 11 squared-distance features between vectors a and b."""
    a, b = _check_pair(a, b, min_len=3)
    da, dda = finite_differences(a)
    db, ddb = finite_differences(b)
    pos2 = ((a - b) ** 2).sum(axis=0)
    d2 = ((da - db) ** 2).sum(axis=0)
    dd2 = ((dda - ddb) ** 2).sum(axis=0)
    first2 = (a[0] - b[0]) ** 2
    last2 = (a[-1] - b[-1]) ** 2
    dlen2 = path_length(a) ** 2 - path_length(b) ** 2
    return FeatureVector(
        d2_x=float(pos2[0]),
        d2_y=float(pos2[1]),
        d2_dx=float(d2[0]),
        d2_dy=float(d2[1]),
        d2_ddx=float(dd2[0]),
        d2_ddy=float(dd2[1]),
        d2_first_x=float(first2[0]),
        d2_first_y=float(first2[1]),
        d2_last_x=float(last2[0]),
        d2_last_y=float(last2[1]),
        dlen2=float(dlen2),
    )


def feature_block(v: np.ndarray, stack: np.ndarray) -> np.ndarray:
    """Features of v against each row of a (C, n, 2) stack, as a (C, 11) array.

    Row c equals feature_vector(v, stack[c]).as_array(); the batch form exists
    for the recognizer's candidate loops.
    """
    v = np.asarray(v, dtype=float)
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3 or stack.shape[1:] != v.shape:
        raise ValueError(f"stack shape {stack.shape} does not match vector {v.shape}")
    ds = np.diff(stack, axis=1)
    dds = np.diff(ds, axis=1)
    len2s = np.linalg.norm(ds, axis=2).sum(axis=1) ** 2
    return feature_block_pre(v, stack, ds, dds, len2s)


def feature_block_pre(
    v: np.ndarray, stack: np.ndarray, ds: np.ndarray, dds: np.ndarray, len2s: np.ndarray
) -> np.ndarray:
    """feature_block with the stack's diffs and squared lengths precomputed."""
    if len(v) < 3:
        raise ValueError("vectors must have n >= 3 points")
    dv, ddv = finite_differences(v)
    out = np.empty((len(stack), 11))
    out[:, 0:2] = ((stack - v) ** 2).sum(axis=1)
    out[:, 2:4] = ((ds - dv) ** 2).sum(axis=1)
    out[:, 4:6] = ((dds - ddv) ** 2).sum(axis=1)
    out[:, 6:8] = (stack[:, 0] - v[0]) ** 2
    out[:, 8:10] = (stack[:, -1] - v[-1]) ** 2
    out[:, 10] = path_length(v) ** 2 - len2s
    return out
