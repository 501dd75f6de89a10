"""Color conversions used to characterize road pixels.

RGB values in [0,1] are mapped into five device-independent spaces:
plain RGB, normalized rgb, the opponent space O1/O2/O3, an HSV variant
built from a luminance/chrominance matrix, and CIE Lab.  A single image
can be expanded into any ordered subset of the 13 evaluated channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

# XYZ matrix for the Lab conversion.  Each row sums to 1, so RGB white
# (1,1,1) maps to the reference white (X0,Y0,Z0) = (1,1,1).
XYZ_MATRIX = np.array(
    [
        [0.490, 0.310, 0.200],
        [0.177, 0.812, 0.011],
        [0.000, 0.010, 0.990],
    ]
)


class ChannelId(Enum):
    """The 13 single color channels evaluated in the benchmark.

    nb and O3 are computable (see :func:`to_normalized_rgb` and
    :func:`to_opponent`) but are not benchmark channels.
    """

    R = "R"
    G = "G"
    B = "B"
    nr = "nr"
    ng = "ng"
    O1 = "O1"
    O2 = "O2"
    L = "L"
    a = "a"
    b = "b"
    H = "H"
    S = "S"
    V = "V"


@dataclass(frozen=True)
class Representation:
    """An ordered, duplicate-free subset of channels; feature dimension = len(channels)."""

    name: str
    channels: tuple[ChannelId, ...]

    def __post_init__(self):
        if not self.channels:
            raise ConfigurationError("representation needs at least one channel")
        if len(set(self.channels)) != len(self.channels):
            raise ConfigurationError(f"duplicate channels in representation {self.name!r}")

    @property
    def dim(self) -> int:
        return len(self.channels)


@dataclass(frozen=True)
class ChannelRange:
    """Analytic bounds of a channel under RGB inputs in [0,1]^3."""

    channel: ChannelId
    lo: float
    hi: float


def to_normalized_rgb(r, g, b):
    """Chromaticity (nr, ng, nb) = (R,G,B)/(R+G+B); black maps to (1/3,1/3,1/3)."""
    r = np.asarray(r, dtype=float)
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    total = r + g + b
    safe = np.where(total > 0, total, 1.0)
    third = np.where(total > 0, 0.0, 1.0 / 3.0)
    nr = r / safe + third
    ng = g / safe + third
    nb = b / safe + third
    return nr, ng, nb


def to_opponent(r, g, b):
    """Opponent channels: O1=(R-G)/sqrt2, O2=(R+G-2B)/sqrt6, O3=(R+G+B)/sqrt3."""
    r = np.asarray(r, dtype=float)
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    o1 = (r - g) / SQRT2
    o2 = (r + g - 2.0 * b) / SQRT6
    o3 = (r + g + b) / SQRT3
    return o1, o2, o3


def to_hsv_variant(r, g, b):
    """Hue/saturation/value from the luminance-chrominance matrix variant.

    V = (R+G+B)/3, V1 = (-R-G+2B)/sqrt6, V2 = (R-2G+B)/sqrt6,
    H = atan2(V2, V1) in (-pi, pi] (0 when achromatic), S = hypot(V1, V2).
    This is not the conventional hexcone HSV.
    """
    r = np.asarray(r, dtype=float)
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    v = (r + g + b) / 3.0
    v1 = (-r - g + 2.0 * b) / SQRT6
    v2 = (r - 2.0 * g + b) / SQRT6
    s = np.hypot(v1, v2)
    h = np.arctan2(v2, v1)
    h = np.where(s > 0, h, 0.0)
    return h, s, v


def to_lab(r, g, b):
    """CIE Lab via the fixed XYZ matrix with white point (1,1,1), pure cube root."""
    r = np.asarray(r, dtype=float)
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    x = XYZ_MATRIX[0, 0] * r + XYZ_MATRIX[0, 1] * g + XYZ_MATRIX[0, 2] * b
    y = XYZ_MATRIX[1, 0] * r + XYZ_MATRIX[1, 1] * g + XYZ_MATRIX[1, 2] * b
    z = XYZ_MATRIX[2, 0] * r + XYZ_MATRIX[2, 1] * g + XYZ_MATRIX[2, 2] * b
    cx = np.cbrt(x)
    cy = np.cbrt(y)
    cz = np.cbrt(z)
    lum = 116.0 * cy - 16.0
    a = 500.0 * (cx - cy)
    bb = 200.0 * (cy - cz)
    return lum, a, bb


# Bounds of the Lab a/b channels over the RGB unit cube.  Both channels
# are coordinate-monotone difference-of-cube-root maps along their active
# faces, so the extrema sit at cube vertices.
_A_MIN = 500.0 * float(np.cbrt(0.310) - np.cbrt(0.812))  # RGB = (0,1,0)
_A_MAX = 500.0 * float(np.cbrt(0.200) - np.cbrt(0.011))  # RGB = (0,0,1)
_B_MIN = 200.0 * float(np.cbrt(0.011) - np.cbrt(0.990))  # RGB = (0,0,1)
_B_MAX = 200.0 * float(np.cbrt(0.989) - np.cbrt(0.010))  # RGB = (1,1,0)

_CHANNEL_RANGES = {
    ChannelId.R: (0.0, 1.0),
    ChannelId.G: (0.0, 1.0),
    ChannelId.B: (0.0, 1.0),
    ChannelId.nr: (0.0, 1.0),
    ChannelId.ng: (0.0, 1.0),
    ChannelId.O1: (-1.0 / SQRT2, 1.0 / SQRT2),
    ChannelId.O2: (-2.0 / SQRT6, 2.0 / SQRT6),
    ChannelId.L: (-16.0, 100.0),
    ChannelId.a: (_A_MIN, _A_MAX),
    ChannelId.b: (_B_MIN, _B_MAX),
    ChannelId.H: (-math.pi, math.pi),
    ChannelId.S: (0.0, math.sqrt(5.0 / 6.0)),
    ChannelId.V: (0.0, 1.0),
}


def channel_range(channel: ChannelId) -> ChannelRange:
    lo, hi = _CHANNEL_RANGES[channel]
    return ChannelRange(channel, lo, hi)


def convert_channels(rgb: np.ndarray) -> dict[ChannelId, np.ndarray]:
    """Compute all 13 channels for an array of RGB values (..., 3)."""
    rgb = np.asarray(rgb, dtype=float)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    nr, ng, _ = to_normalized_rgb(r, g, b)
    o1, o2, _ = to_opponent(r, g, b)
    h, s, v = to_hsv_variant(r, g, b)
    lum, a, bb = to_lab(r, g, b)
    return {
        ChannelId.R: r,
        ChannelId.G: g,
        ChannelId.B: b,
        ChannelId.nr: nr,
        ChannelId.ng: ng,
        ChannelId.O1: o1,
        ChannelId.O2: o2,
        ChannelId.L: lum,
        ChannelId.a: a,
        ChannelId.b: bb,
        ChannelId.H: h,
        ChannelId.S: s,
        ChannelId.V: v,
    }


def extract(image: np.ndarray, rep: Representation) -> np.ndarray:
    """Convert an H x W x 3 RGB image into an H x W x d feature image."""
    image = np.asarray(image, dtype=float)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ConfigurationError(f"expected an HxWx3 image, got shape {image.shape}")
    planes = convert_channels(image)
    return np.stack([planes[c] for c in rep.channels], axis=-1)


def rescale_to_unit(features: np.ndarray, rep: Representation) -> np.ndarray:
    """Affinely map each channel from its analytic range onto [0,1].

    Strictly monotone per channel, so classifier rankings are preserved
    while histogram binning gets a common domain.
    """
    features = np.asarray(features, dtype=float)
    out = np.empty_like(features)
    for i, ch in enumerate(rep.channels):
        lo, hi = _CHANNEL_RANGES[ch]
        out[..., i] = (features[..., i] - lo) / (hi - lo)
    return out


def _singleton(ch: ChannelId) -> Representation:
    return Representation(ch.value, (ch,))


REPRESENTATIONS: dict[str, Representation] = {
    **{ch.value: _singleton(ch) for ch in ChannelId},
    "RGB": Representation("RGB", (ChannelId.R, ChannelId.G, ChannelId.B)),
    "nrng": Representation("nrng", (ChannelId.nr, ChannelId.ng)),
    "O1O2": Representation("O1O2", (ChannelId.O1, ChannelId.O2)),
    "Lab": Representation("Lab", (ChannelId.L, ChannelId.a, ChannelId.b)),
    "HSV": Representation("HSV", (ChannelId.H, ChannelId.S, ChannelId.V)),
    "HS": Representation("HS", (ChannelId.H, ChannelId.S)),
}

CANONICAL_NAMES = list(REPRESENTATIONS)


def get_representation(name: str) -> Representation:
    try:
        return REPRESENTATIONS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown representation {name!r}; choose from {', '.join(CANONICAL_NAMES)}"
        ) from None
