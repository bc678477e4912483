"""
Fixed-length linear rescaling of driving primitives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..encounters import DrivingPrimitive
from ..errors import FeatureError


DEFAULT_LENGTH = 50

PrimitiveIdentity = tuple[str, int, int, int]


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RescaledPrimitive:
    """Both vehicles' positions (l x 2) and speeds (l,) at l uniform points."""

    p1: np.ndarray
    p2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    source: PrimitiveIdentity | None = None

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "v1", "v2"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        length = self.v1.shape[0]
        shapes = (self.p1.shape, self.p2.shape, self.v2.shape)
        if shapes != ((length, 2), (length, 2), (length,)):
            raise FeatureError("rescaled channels must share one length l")

    @property
    def length(self) -> int:
        return self.v1.shape[0]


def _interpolate(channel: np.ndarray, query: np.ndarray) -> np.ndarray:
    knots = np.arange(channel.shape[0], dtype=np.float64)
    if channel.ndim == 1:
        return np.interp(query, knots, channel)
    columns = [np.interp(query, knots, channel[:, i]) for i in range(channel.shape[1])]
    return np.column_stack(columns)


def rescale_primitive(prim: DrivingPrimitive, l: int = DEFAULT_LENGTH) -> RescaledPrimitive:
    """
    Linearly interpolate every channel onto l points spanning [t_m, t_n].

    Samples are uniformly spaced, so interpolating in sample-index space is
    interpolating in time; knots and endpoints are reproduced exactly.
    """
    if prim.n_samples < 2:
        raise FeatureError(
            f"degenerate primitive {prim.identity}: a single sample cannot be rescaled"
        )
    if l < 2:
        raise FeatureError(f"rescale length must be at least 2, got {l}")
    query = np.linspace(0.0, prim.n_samples - 1.0, l)
    return RescaledPrimitive(
        p1=_interpolate(prim.p1, query),
        p2=_interpolate(prim.p2, query),
        v1=_interpolate(prim.v1, query),
        v2=_interpolate(prim.v2, query),
        source=prim.identity,
    )
