"""
Local tangent-plane projection for encounters.

Equirectangular approximation about the midpoint of both vehicles at t = 0,
adequate at the ~100 m scale of an encounter.
"""

from __future__ import annotations

import numpy as np

from ..errors import EncounterValidationError
from .models import A1_COL, A2_COL, B1_COL, B2_COL, CoordinateFrame, DrivingEncounter


EARTH_RADIUS_M = 6_371_008.8


def _wrap_degrees(delta: np.ndarray) -> np.ndarray:
    return (delta + 180.0) % 360.0 - 180.0


def geographic_to_local(
    lat: np.ndarray, lon: np.ndarray, origin_lat: float, origin_lon: float
) -> tuple[np.ndarray, np.ndarray]:
    """(lat, lon) degrees to (east, north) meters about an origin."""
    x = EARTH_RADIUS_M * np.radians(_wrap_degrees(np.asarray(lon) - origin_lon)) * np.cos(
        np.radians(origin_lat)
    )
    y = EARTH_RADIUS_M * np.radians(np.asarray(lat) - origin_lat)
    return x, y


def local_to_geographic(
    x: np.ndarray, y: np.ndarray, origin_lat: float, origin_lon: float
) -> tuple[np.ndarray, np.ndarray]:
    """(east, north) meters about an origin to (lat, lon) degrees."""
    lat = origin_lat + np.degrees(np.asarray(y) / EARTH_RADIUS_M)
    lon = origin_lon + np.degrees(
        np.asarray(x) / (EARTH_RADIUS_M * np.cos(np.radians(origin_lat)))
    )
    return lat, lon


def project_to_local_frame(enc: DrivingEncounter) -> DrivingEncounter:
    """
    Project a geographic encounter onto a local east-north plane in meters.

    The origin is the midpoint of both vehicles at the first sample; speeds
    are unchanged.
    """
    if enc.frame == CoordinateFrame.LOCAL_METERS:
        raise EncounterValidationError(f"encounter {enc.id}: already projected")

    first = enc.data[0]
    origin_lat = 0.5 * (first[A1_COL] + first[A2_COL])
    origin_lon = first[B1_COL] + 0.5 * _wrap_degrees(first[B2_COL] - first[B1_COL])

    data = np.array(enc.data, copy=True)
    for lat_col, lon_col in ((A1_COL, B1_COL), (A2_COL, B2_COL)):
        x, y = geographic_to_local(data[:, lat_col], data[:, lon_col], origin_lat, origin_lon)
        data[:, lat_col] = x
        data[:, lon_col] = y

    return enc.with_data(
        data,
        frame=CoordinateFrame.LOCAL_METERS,
        origin=(float(origin_lat), float(origin_lon)),
    )


def unproject_to_geographic(
    enc: DrivingEncounter, origin_lat: float, origin_lon: float
) -> DrivingEncounter:
    """Inverse of the projection: local meters back to degrees about an origin."""
    if enc.frame == CoordinateFrame.GEOGRAPHIC_DEGREES:
        raise EncounterValidationError(f"encounter {enc.id}: already geographic")

    data = np.array(enc.data, copy=True)
    for x_col, y_col in ((A1_COL, B1_COL), (A2_COL, B2_COL)):
        lat, lon = local_to_geographic(data[:, x_col], data[:, y_col], origin_lat, origin_lon)
        data[:, x_col] = lat
        data[:, y_col] = lon

    return enc.with_data(data, frame=CoordinateFrame.GEOGRAPHIC_DEGREES, origin=None)
