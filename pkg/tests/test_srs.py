"""Projection math checks: center mapping, round trips, equal-area property."""

import math

import numpy as np
import pytest

from landelig.errors import AntipodalPoint, OutOfDomain, UnsupportedSrsPair
from landelig.srs import (
    EPSG3035,
    GRS80,
    Srs,
    laea_forward,
    laea_inverse,
    transform_point,
    transform_points,
)


def ellipsoid_quadrangle_area(lon0, lon1, lat0, lat1, ell=GRS80):
    """Oracle: exact ellipsoidal area of a lon/lat aligned quadrangle.

    Uses the authalic q function: the area of the band between two
    latitudes over a longitude span dlam is dlam * a^2 * (q1 - q0) / 2.
    """
    e2 = ell.e2
    e = math.sqrt(e2)

    def q(lat):
        s = math.sin(math.radians(lat))
        return (1 - e2) * (
            s / (1 - e2 * s * s) - (0.5 / e) * math.log((1 - e * s) / (1 + e * s))
        )

    dlam = math.radians(lon1 - lon0)
    return dlam * ell.semi_major ** 2 * (q(lat1) - q(lat0)) / 2.0


def shoelace(xs, ys):
    return 0.5 * abs(np.sum(xs * np.roll(ys, -1) - np.roll(xs, -1) * ys))


def test_center_maps_to_false_origin_exactly():
    x, y = laea_forward(10.0, 52.0)
    assert x == 4321000.0
    assert y == 3210000.0


def test_inverse_of_center():
    lon, lat = laea_inverse(4321000.0, 3210000.0)
    assert lon == pytest.approx(10.0, abs=1e-12)
    assert lat == pytest.approx(52.0, abs=1e-12)


def test_round_trip_grid():
    lons = np.linspace(-10.0, 30.0, 5)
    lats = np.linspace(35.0, 70.0, 5)
    for lon in lons:
        for lat in lats:
            x, y = laea_forward(lon, lat)
            lon2, lat2 = laea_inverse(x, y)
            assert abs(lon2 - lon) < 1e-9
            assert abs(lat2 - lat) < 1e-9


def test_known_reference_coordinate():
    # Around the projection center small offsets must match the local
    # meter scale: 0.01 deg of latitude near 52N is about 1113 m.
    x0, y0 = laea_forward(10.0, 52.0)
    x1, y1 = laea_forward(10.0, 52.01)
    assert abs(x1 - x0) < 1.0
    assert 1100 < (y1 - y0) < 1125


def test_equal_area_property():
    # 1x1 degree quadrangles across the test band, edges densified so the
    # planar polygon follows the projected graticule closely.
    for lat0 in (35.0, 52.0, 69.0):
        for lon0 in (-10.0, 10.0, 29.0):
            lat1, lon1 = lat0 + 1.0, lon0 + 1.0
            n = 64
            lons = np.concatenate([
                np.linspace(lon0, lon1, n),
                np.full(n, lon1),
                np.linspace(lon1, lon0, n),
                np.full(n, lon0),
            ])
            lats = np.concatenate([
                np.full(n, lat0),
                np.linspace(lat0, lat1, n),
                np.full(n, lat1),
                np.linspace(lat1, lat0, n),
            ])
            xs, ys = transform_points(lons, lats, Srs.wgs84(), Srs.laea3035())
            area = shoelace(xs, ys)
            truth = ellipsoid_quadrangle_area(lon0, lon1, lat0, lat1)
            assert area == pytest.approx(truth, rel=1e-3)


def test_antipodal_point_raises():
    with pytest.raises(AntipodalPoint):
        laea_forward(-170.0, -52.0)


def test_out_of_domain_raises():
    # three Earth diameters away from the false origin
    far = 6 * GRS80.semi_major
    with pytest.raises(OutOfDomain):
        laea_inverse(4321000.0 + far, 3210000.0)


def test_latitude_range_checked():
    with pytest.raises(ValueError):
        laea_forward(10.0, 91.0)


def test_transform_point_identity_is_bitwise():
    pt = (123.456789, -987.654321)
    for srs in (Srs.wgs84(), Srs.laea3035(), Srs.local_meters()):
        assert transform_point(pt, srs, srs) == pt


def test_transform_point_matches_forward():
    pt = (6.0, 50.5)
    assert transform_point(pt, Srs.wgs84(), Srs.laea3035()) == laea_forward(*pt)


def test_laea_round_trip_through_hub():
    x, y = 4021000.0, 3010000.0
    x2, y2 = transform_point(
        transform_point((x, y), Srs.laea3035(), Srs.wgs84()),
        Srs.wgs84(),
        Srs.laea3035(),
    )
    assert abs(x2 - x) < 1e-6
    assert abs(y2 - y) < 1e-6


def test_srs_names_round_trip():
    for name in ("wgs84", "laea3035", "local_meters"):
        assert Srs.from_name(name).name == name
    with pytest.raises(UnsupportedSrsPair):
        Srs.from_name("epsg:9999")


def test_nonstrict_transform_masks_bad_points():
    lons = np.array([10.0, -170.0])
    lats = np.array([52.0, -52.0])
    xs, ys = transform_points(lons, lats, Srs.wgs84(), Srs.laea3035(), strict=False)
    assert np.isfinite(xs[0]) and np.isfinite(ys[0])
    assert np.isnan(xs[1]) and np.isnan(ys[1])
