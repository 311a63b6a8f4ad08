"""Keyboard geometry: keys, layouts, swaps, scaling, and point-to-key lookup.

A layout is an immutable set of 26 keys (one per letter a-z), each with a
center, a bounding-box extent, and a shape (axis-aligned rectangle or
flat-top hexagon inscribed in the box).  All coordinates are dimensionless
layout units; only relative geometry matters.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParseError, UnknownLayoutError

RECT = "rect"
HEX = "hex"

# A flat-top hexagon inscribed in its bounding box covers 3/4 of the box.
HEX_AREA_FACTOR = 0.75

_LETTERS = string.ascii_lowercase


@dataclass(frozen=True)
class Key:
    """One key: a letter placed at a center with a bounding-box extent."""

    letter: str
    center_x: float
    center_y: float
    width: float
    height: float
    shape: str = RECT

    def __post_init__(self):
        if len(self.letter) != 1 or self.letter not in _LETTERS:
            raise ValueError(f"key letter must be one of a-z, got {self.letter!r}")
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"key {self.letter!r} extents must be positive")
        if self.shape not in (RECT, HEX):
            raise ValueError(f"key {self.letter!r} shape must be rect or hex")

    @property
    def area(self) -> float:
        if self.shape == HEX:
            return self.width * self.height * HEX_AREA_FACTOR
        return self.width * self.height

    def corners(self) -> np.ndarray:
        """Polygon vertices, counterclockwise."""
        cx, cy, hw, hh = self.center_x, self.center_y, self.width / 2, self.height / 2
        if self.shape == RECT:
            return np.array(
                [(cx - hw, cy - hh), (cx + hw, cy - hh), (cx + hw, cy + hh), (cx - hw, cy + hh)]
            )
        # Flat-top hexagon with vertices on the box's left/right edge midlines.
        return np.array(
            [
                (cx + hw, cy),
                (cx + hw / 2, cy + hh),
                (cx - hw / 2, cy + hh),
                (cx - hw, cy),
                (cx - hw / 2, cy - hh),
                (cx + hw / 2, cy - hh),
            ]
        )

    def contains(self, x: float, y: float) -> bool:
        """Boundary-inclusive containment test."""
        u = abs(x - self.center_x) / (self.width / 2)
        t = abs(y - self.center_y) / (self.height / 2)
        if self.shape == RECT:
            return u <= 1.0 and t <= 1.0
        return t <= 1.0 and u + 0.5 * t <= 1.0


@dataclass(frozen=True)
class KeyboardLayout:
    """26 non-overlapping keys, one per letter.  Immutable and shareable."""

    name: str
    keys: tuple[Key, ...]

    def __post_init__(self):
        letters = sorted(k.letter for k in self.keys)
        if letters != list(_LETTERS):
            missing = sorted(set(_LETTERS) - set(letters))
            dupes = sorted({l for l in letters if letters.count(l) > 1})
            problems = []
            if missing:
                problems.append(f"missing letters: {''.join(missing)}")
            if dupes:
                problems.append(f"duplicate letters: {''.join(dupes)}")
            raise ValueError("; ".join(problems) or "layout must have 26 keys")
        object.__setattr__(self, "keys", tuple(sorted(self.keys, key=lambda k: k.letter)))
        _check_no_overlap(self.keys)

    def key(self, letter: str) -> Key:
        return self.keys[ord(letter) - 97]

    @cached_property
    def centers(self) -> np.ndarray:
        """(26, 2) key centers indexed by letter ordinal."""
        a = np.array([(k.center_x, k.center_y) for k in self.keys])
        a.setflags(write=False)
        return a

    @cached_property
    def half_extents(self) -> np.ndarray:
        """(26, 2) half widths/heights indexed by letter ordinal."""
        a = np.array([(k.width / 2, k.height / 2) for k in self.keys])
        a.setflags(write=False)
        return a

    @cached_property
    def hex_mask(self) -> np.ndarray:
        a = np.array([k.shape == HEX for k in self.keys])
        a.setflags(write=False)
        return a

    @property
    def total_key_area(self) -> float:
        return sum(k.area for k in self.keys)


def _check_no_overlap(keys):
    polys = [k.corners() for k in keys]
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if _convex_overlap(polys[i], polys[j]):
                raise ValueError(
                    f"keys {keys[i].letter!r} and {keys[j].letter!r} overlap"
                )


def _convex_overlap(a: np.ndarray, b: np.ndarray, eps: float = 1e-9) -> bool:
    """Separating-axis test for open (interior) intersection of convex polygons."""
    for poly in (a, b):
        edges = np.roll(poly, -1, axis=0) - poly
        normals = np.stack([-edges[:, 1], edges[:, 0]], axis=1)
        for n in normals:
            pa = a @ n
            pb = b @ n
            if pa.max() <= pb.min() + eps or pb.max() <= pa.min() + eps:
                return False
    return True


def key_at(layout: KeyboardLayout, x: float, y: float) -> str | None:
    """Letter of the key containing (x, y), or None.

    Containment is boundary-inclusive; points on a shared edge resolve to the
    alphabetically smaller letter.
    """
    for k in layout.keys:  # keys are sorted by letter, so first hit wins ties
        if k.contains(x, y):
            return k.letter
    return None


def keys_at(layout: KeyboardLayout, points: np.ndarray) -> np.ndarray:
    """Vectorized key_at: maps (..., 2) points to letter ordinals, -1 for none."""
    pts = np.asarray(points, dtype=float)
    d = np.abs(pts[..., None, :] - layout.centers)  # (..., 26, 2)
    ut = d / layout.half_extents
    u, t = ut[..., 0], ut[..., 1]
    inside = (u <= 1.0) & (t <= 1.0)
    hex_extra = u + 0.5 * t <= 1.0
    inside &= ~layout.hex_mask | hex_extra
    hit = inside.any(axis=-1)
    first = inside.argmax(axis=-1)  # smallest ordinal among hits = alphabetical tie rule
    return np.where(hit, first, -1)


def key_center(layout: KeyboardLayout, letter: str) -> tuple[float, float]:
    k = layout.key(letter)
    return (k.center_x, k.center_y)


def swap_keys(layout: KeyboardLayout, pairs) -> KeyboardLayout:
    """New layout where each pair's letters exchange geometric positions."""
    seen = set()
    for a, b in pairs:
        for c in (a, b):
            if c not in _LETTERS:
                raise ValueError(f"invalid letter {c!r}")
            if c in seen:
                raise ValueError(f"letter {c!r} appears in more than one pair")
            seen.add(c)
    target = {l: l for l in _LETTERS}
    for a, b in pairs:
        target[a], target[b] = b, a
    keys = []
    for k in layout.keys:
        src = layout.key(target[k.letter])
        keys.append(
            Key(k.letter, src.center_x, src.center_y, src.width, src.height, src.shape)
        )
    return KeyboardLayout(layout.name, tuple(keys))


def normalize_area(layout: KeyboardLayout, target_total_area: float) -> KeyboardLayout:
    """Uniformly scale the layout so its total key area equals the target."""
    if not target_total_area > 0:
        raise ValueError("target_total_area must be positive")
    s = math.sqrt(target_total_area / layout.total_key_area)
    keys = tuple(
        Key(k.letter, k.center_x * s, k.center_y * s, k.width * s, k.height * s, k.shape)
        for k in layout.keys
    )
    return KeyboardLayout(layout.name, keys)


def load_layout(text: str, name: str = "custom") -> KeyboardLayout:
    """Parse the line-based layout format.

    Each key line is `letter center_x center_y width height shape` with
    whitespace separators and shape rect|hex; '#' starts a comment line.
    Exactly 26 key lines are required, one per letter.
    """
    keys = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ParseError(f"expected 6 fields, got {len(parts)}", line=lineno)
        letter, shape = parts[0], parts[5]
        if len(letter) != 1 or letter not in _LETTERS:
            raise ParseError(f"bad letter {letter!r}", line=lineno)
        if letter in keys:
            raise ParseError(f"duplicate letter {letter!r}", line=lineno)
        try:
            cx, cy, w, h = (float(v) for v in parts[1:5])
        except ValueError:
            raise ParseError(f"bad number in {line!r}", line=lineno) from None
        if not (w > 0 and h > 0):
            raise ParseError(f"non-positive extent for {letter!r}", line=lineno)
        if shape not in (RECT, HEX):
            raise ParseError(f"shape must be rect or hex, got {shape!r}", line=lineno)
        keys[letter] = Key(letter, cx, cy, w, h, shape)
    missing = sorted(set(_LETTERS) - set(keys))
    if missing:
        raise ParseError(f"missing letters: {''.join(missing)}")
    return KeyboardLayout(name, tuple(keys.values()))


def dump_layout(layout: KeyboardLayout) -> str:
    """Serialize in the load_layout format."""
    lines = [f"# layout: {layout.name}"]
    for k in layout.keys:
        lines.append(
            f"{k.letter} {k.center_x:.17g} {k.center_y:.17g} "
            f"{k.width:.17g} {k.height:.17g} {k.shape}"
        )
    return "\n".join(lines) + "\n"


def _row_layout(name: str, rows: list[tuple[float, float, str]]) -> KeyboardLayout:
    """Rows of unit-square keys: (first_center_x, center_y, letters)."""
    keys = []
    for x0, y, letters in rows:
        for i, letter in enumerate(letters):
            keys.append(Key(letter, x0 + i, y, 1.0, 1.0, RECT))
    return KeyboardLayout(name, tuple(keys))


def _qwerty() -> KeyboardLayout:
    # Three staggered rows; home row offset 0.5 from the top row, bottom row
    # a further 0.25.
    return _row_layout(
        "qwerty",
        [
            (0.5, 2.5, "qwertyuiop"),
            (1.0, 1.5, "asdfghjkl"),
            (1.25, 0.5, "zxcvbnm"),
        ],
    )


def _dvorak() -> KeyboardLayout:
    # Letter positions of the Dvorak Simplified layout on the same staggered
    # grid as the QWERTY built-in; punctuation slots are left empty.
    return _row_layout(
        "dvorak",
        [
            (3.5, 2.5, "pyfgcrl"),
            (1.0, 1.5, "aoeuidhtns"),
            (2.25, 0.5, "qjkxbmwvz"),
        ],
    )


def _square_alphabetic() -> KeyboardLayout:
    rows = ["abcdef", "ghijkl", "mnopqr", "stuvwx"]
    keys = []
    for r, letters in enumerate(rows):
        for i, letter in enumerate(letters):
            keys.append(Key(letter, i + 0.5, 4.5 - r, 1.0, 1.0, RECT))
    keys.append(Key("y", 2.5, 0.5, 1.0, 1.0, RECT))
    keys.append(Key("z", 3.5, 0.5, 1.0, 1.0, RECT))
    return KeyboardLayout("square-alphabetic", tuple(keys))


_BUILTINS = {
    "qwerty": _qwerty,
    "dvorak": _dvorak,
    "square-alphabetic": _square_alphabetic,
}


def builtin_layout(name: str) -> KeyboardLayout:
    """One of the shipped layouts: qwerty, dvorak, square-alphabetic."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise UnknownLayoutError(
            f"unknown layout {name!r}; built-ins: {', '.join(sorted(_BUILTINS))}"
        ) from None
    return factory()


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)
