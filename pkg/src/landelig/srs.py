"""Spatial reference systems and the transforms between them.

Three kinds of SRS are supported:

* ``wgs84`` - geographic longitude/latitude in degrees,
* ``laea3035`` (or any other parameterization of ``LaeaParams``) - an
  ellipsoidal Lambert azimuthal equal-area plane in meters,
* ``local_meters`` - a bare planar system for synthetic scenes, whose
  coordinates pass through the geographic hub unchanged.

All transforms are composed through geographic coordinates as the hub, so
N supported kinds need N projection implementations instead of N^2 pairs.
The LAEA formulas are the standard ellipsoidal ones (Snyder, "Map
Projections: A Working Manual", 1987), which is what makes the default
parameter set reproduce published European LAEA grid coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AntipodalPoint, OutOfDomain, UnsupportedSrsPair

__all__ = [
    "Ellipsoid",
    "GRS80",
    "LaeaParams",
    "EPSG3035",
    "Srs",
    "laea_forward",
    "laea_inverse",
    "transform_point",
    "transform_points",
]


@dataclass(frozen=True)
class Ellipsoid:
    """Reference ellipsoid given by semi-major axis and inverse flattening."""

    semi_major: float
    inverse_flattening: float

    def __post_init__(self):
        if not (self.semi_major > 0 and self.inverse_flattening > 1):
            raise ValueError("ellipsoid requires a > 0 and 1/f > 1")

    @property
    def e2(self) -> float:
        f = 1.0 / self.inverse_flattening
        return 2.0 * f - f * f


GRS80 = Ellipsoid(semi_major=6378137.0, inverse_flattening=298.257222101)


@dataclass(frozen=True)
class LaeaParams:
    """Parameters of an ellipsoidal Lambert azimuthal equal-area plane."""

    lat_0: float
    lon_0: float
    false_easting: float
    false_northing: float
    ellipsoid: Ellipsoid = GRS80

    def __post_init__(self):
        if not (math.isfinite(self.lat_0) and math.isfinite(self.lon_0)):
            raise ValueError("projection center must be finite")
        if abs(self.lat_0) > 90.0 or abs(self.lon_0) > 180.0:
            raise ValueError("projection center out of range")
        if not (math.isfinite(self.false_easting) and math.isfinite(self.false_northing)):
            raise ValueError("false origin must be finite")


#: European LAEA grid: center 52N 10E, false origin (4321000, 3210000), GRS80.
EPSG3035 = LaeaParams(
    lat_0=52.0,
    lon_0=10.0,
    false_easting=4321000.0,
    false_northing=3210000.0,
    ellipsoid=GRS80,
)


@dataclass(frozen=True)
class Srs:
    """A spatial reference system: geographic, LAEA plane, or local plane."""

    kind: str  # "geographic" | "laea" | "local"
    laea: LaeaParams | None = None

    def __post_init__(self):
        if self.kind not in ("geographic", "laea", "local"):
            raise ValueError(f"unknown srs kind: {self.kind!r}")
        if self.kind == "laea" and self.laea is None:
            raise ValueError("laea srs requires parameters")

    @classmethod
    def wgs84(cls) -> "Srs":
        return cls("geographic")

    @classmethod
    def laea3035(cls) -> "Srs":
        return cls("laea", EPSG3035)

    @classmethod
    def local_meters(cls) -> "Srs":
        return cls("local")

    @classmethod
    def from_name(cls, name: str) -> "Srs":
        """Resolve a config-file SRS name ("wgs84", "laea3035", "local_meters")."""
        key = name.strip().lower()
        if key == "wgs84":
            return cls.wgs84()
        if key == "laea3035":
            return cls.laea3035()
        if key == "local_meters":
            return cls.local_meters()
        raise UnsupportedSrsPair(f"unknown srs name: {name!r}")

    @property
    def name(self) -> str:
        if self.kind == "geographic":
            return "wgs84"
        if self.kind == "local":
            return "local_meters"
        if self.laea == EPSG3035:
            return "laea3035"
        return "laea_custom"


# ---------------------------------------------------------------------------
# Ellipsoidal LAEA core
# ---------------------------------------------------------------------------

def _q_of_phi(sin_phi, e, e2):
    """Snyder's q auxiliary, the authalic-latitude integrand antiderivative."""
    es = e * sin_phi
    return (1.0 - e2) * (
        sin_phi / (1.0 - e2 * sin_phi * sin_phi)
        - (0.5 / e) * np.log((1.0 - es) / (1.0 + es))
    )


class _LaeaCore:
    """Precomputed constants for one LAEA parameterization."""

    def __init__(self, p: LaeaParams):
        self.p = p
        a = p.ellipsoid.semi_major
        e2 = p.ellipsoid.e2
        e = math.sqrt(e2)
        phi0 = math.radians(p.lat_0)
        self.a, self.e, self.e2 = a, e, e2
        self.lam0 = math.radians(p.lon_0)
        self.qp = float(_q_of_phi(1.0, e, e2))
        q0 = float(_q_of_phi(math.sin(phi0), e, e2))
        self.beta0 = math.asin(min(1.0, max(-1.0, q0 / self.qp)))
        self.rq = a * math.sqrt(self.qp / 2.0)
        m0 = math.cos(phi0) / math.sqrt(1.0 - e2 * math.sin(phi0) ** 2)
        if abs(math.cos(self.beta0)) < 1e-12:
            # polar aspect: D degenerates to 1 in the limit
            self.d = 1.0
        else:
            self.d = a * m0 / (self.rq * math.cos(self.beta0))

    def forward(self, lon, lat, strict: bool):
        lon = np.asarray(lon, dtype=np.float64)
        lat = np.asarray(lat, dtype=np.float64)
        phi = np.radians(lat)
        q = _q_of_phi(np.sin(phi), self.e, self.e2)
        beta = np.arcsin(np.clip(q / self.qp, -1.0, 1.0))
        lam = np.radians(lon) - self.lam0
        # wrap to (-pi, pi]
        lam = np.arctan2(np.sin(lam), np.cos(lam))
        sb0, cb0 = math.sin(self.beta0), math.cos(self.beta0)
        sb, cb = np.sin(beta), np.cos(beta)
        denom = 1.0 + sb0 * sb + cb0 * cb * np.cos(lam)
        bad = denom < 1e-12
        if strict and np.any(bad):
            raise AntipodalPoint("point is antipodal to the projection center")
        with np.errstate(divide="ignore", invalid="ignore"):
            b = self.rq * np.sqrt(2.0 / np.where(bad, np.nan, denom))
            x = b * self.d * cb * np.sin(lam) + self.p.false_easting
            y = (b / self.d) * (cb0 * sb - sb0 * cb * np.cos(lam)) + self.p.false_northing
        return x, y

    def inverse(self, x, y, strict: bool):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        xr = (x - self.p.false_easting) / self.d
        yr = (y - self.p.false_northing) * self.d
        rho = np.hypot(xr, yr)
        limit = 2.0 * self.rq
        bad = rho > limit * (1.0 + 1e-12)
        if strict and np.any(bad):
            raise OutOfDomain("coordinates outside the projection's valid disk")
        ce = 2.0 * np.arcsin(np.clip(rho / limit, 0.0, 1.0))
        sb0, cb0 = math.sin(self.beta0), math.cos(self.beta0)
        with np.errstate(divide="ignore", invalid="ignore"):
            at_center = rho < 1e-12
            safe_rho = np.where(at_center, 1.0, rho)
            q = self.qp * (np.cos(ce) * sb0 + yr * np.sin(ce) * cb0 / safe_rho)
            lam = np.arctan2(
                xr * np.sin(ce),
                safe_rho * cb0 * np.cos(ce) - yr * sb0 * np.sin(ce),
            )
        phi = self._phi_from_q(q)
        lon = np.degrees(self.lam0 + np.where(at_center, 0.0, lam))
        lat = np.degrees(np.where(at_center, math.radians(self.p.lat_0), phi))
        lon = np.where(bad, np.nan, lon)
        lat = np.where(bad, np.nan, lat)
        return lon, lat

    def _phi_from_q(self, q):
        """Invert the authalic-latitude relation by Newton iteration."""
        e, e2 = self.e, self.e2
        ratio = np.clip(q / self.qp, -1.0, 1.0)
        phi = np.arcsin(np.clip(q / 2.0, -1.0, 1.0))
        polar = np.abs(ratio) >= 1.0 - 1e-15
        for _ in range(30):
            sp = np.sin(phi)
            es = e * sp
            one = 1.0 - e2 * sp * sp
            f = (
                q / (1.0 - e2)
                - sp / one
                + (0.5 / e) * np.log((1.0 - es) / (1.0 + es))
            )
            delta = (one * one / (2.0 * np.maximum(np.cos(phi), 1e-14))) * f
            phi = phi + delta
            if np.all(np.abs(delta) < 1e-15):
                break
        return np.where(polar, np.sign(ratio) * (np.pi / 2.0), phi)


_CORE_CACHE: dict[LaeaParams, _LaeaCore] = {}


def _core(p: LaeaParams) -> _LaeaCore:
    core = _CORE_CACHE.get(p)
    if core is None:
        core = _LaeaCore(p)
        _CORE_CACHE[p] = core
    return core


def laea_forward(lon: float, lat: float, p: LaeaParams = EPSG3035) -> tuple[float, float]:
    """Project geographic degrees onto the LAEA plane (meters).

    Raises AntipodalPoint when the input is numerically antipodal to the
    projection center, where the projection is singular.
    """
    if abs(lat) > 90.0:
        raise ValueError("latitude out of range")
    x, y = _core(p).forward(lon, lat, strict=True)
    return float(x), float(y)


def laea_inverse(x: float, y: float, p: LaeaParams = EPSG3035) -> tuple[float, float]:
    """Invert the LAEA projection back to geographic degrees.

    Raises OutOfDomain for coordinates beyond the valid disk of radius
    2*Rq around the false origin.
    """
    lon, lat = _core(p).inverse(x, y, strict=True)
    return float(lon), float(lat)


# ---------------------------------------------------------------------------
# Hub transforms
# ---------------------------------------------------------------------------

def _to_geographic(xs, ys, srs: Srs, strict: bool):
    if srs.kind in ("geographic", "local"):
        return xs, ys
    if srs.kind == "laea":
        return _core(srs.laea).inverse(xs, ys, strict)
    raise UnsupportedSrsPair(f"no hub path from srs kind {srs.kind!r}")


def _from_geographic(lons, lats, srs: Srs, strict: bool):
    if srs.kind in ("geographic", "local"):
        return lons, lats
    if srs.kind == "laea":
        return _core(srs.laea).forward(lons, lats, strict)
    raise UnsupportedSrsPair(f"no hub path to srs kind {srs.kind!r}")


def transform_points(xs, ys, src: Srs, dst: Srs, strict: bool = True):
    """Transform coordinate arrays between reference systems.

    Identity transforms pass the inputs through bitwise-unchanged. With
    strict=False, points that cannot be represented (antipodal or outside
    the valid disk) come back as NaN instead of raising.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if src == dst:
        return xs, ys
    lons, lats = _to_geographic(xs, ys, src, strict)
    return _from_geographic(lons, lats, dst, strict)


def transform_point(pt: tuple[float, float], src: Srs, dst: Srs) -> tuple[float, float]:
    """Transform a single (x, y) point between reference systems."""
    if src == dst:
        return (pt[0], pt[1])
    x, y = transform_points(pt[0], pt[1], src, dst, strict=True)
    return float(x), float(y)
