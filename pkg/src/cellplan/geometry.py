"""Square-grid network topology with lattice UE placement."""

from __future__ import annotations

import math
from dataclasses import dataclass


class GeometryError(ValueError):
    """Raised for layouts that cannot be constructed."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite coordinates ({self.x}, {self.y})")

    def shifted(self, dx: float, dy: float) -> Point:
        return Point(self.x + dx, self.y + dy)

    def scaled(self, alpha: float) -> Point:
        return Point(self.x * alpha, self.y * alpha)


def distance(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class IncidentScene:
    center: Point
    width: float
    height: float
    ues: tuple[Point, ...]

    def contains(self, p: Point, tol: float = 1e-9) -> bool:
        return (abs(p.x - self.center.x) <= self.width / 2 + tol
                and abs(p.y - self.center.y) <= self.height / 2 + tol)


@dataclass(frozen=True)
class CellLayout:
    """One serving cell, its interfering neighbours, and the UEs it serves.

    ``interferer_bts`` is the set O of stationary BTSs other than the
    serving one. ``stationary_bts`` is O plus the serving BTS, which is the
    interferer set seen by incident UEs when the mobile BTS serves them.
    """

    side_length: float
    tiers: int
    serving_bts: Point
    interferer_bts: tuple[Point, ...]
    routine_ues: tuple[Point, ...]
    incident: IncidentScene

    @property
    def stationary_bts(self) -> tuple[Point, ...]:
        return (self.serving_bts,) + self.interferer_bts

    @property
    def mobile_bts(self) -> Point:
        return self.incident.center

    def in_serving_cell(self, p: Point, tol: float = 1e-9) -> bool:
        half = self.side_length / 2 + tol
        return (abs(p.x - self.serving_bts.x) <= half
                and abs(p.y - self.serving_bts.y) <= half)

    def translated(self, dx: float, dy: float) -> CellLayout:
        def mv(pts):
            return tuple(p.shifted(dx, dy) for p in pts)

        scene = self.incident
        return CellLayout(
            side_length=self.side_length,
            tiers=self.tiers,
            serving_bts=self.serving_bts.shifted(dx, dy),
            interferer_bts=mv(self.interferer_bts),
            routine_ues=mv(self.routine_ues),
            incident=IncidentScene(scene.center.shifted(dx, dy), scene.width,
                                   scene.height, mv(scene.ues)),
        )

    def scaled(self, alpha: float) -> CellLayout:
        """Scale every coordinate (and all lengths) about the origin."""
        if alpha <= 0:
            raise GeometryError("scale factor must be positive")

        def sc(pts):
            return tuple(p.scaled(alpha) for p in pts)

        scene = self.incident
        return CellLayout(
            side_length=self.side_length * alpha,
            tiers=self.tiers,
            serving_bts=self.serving_bts.scaled(alpha),
            interferer_bts=sc(self.interferer_bts),
            routine_ues=sc(self.routine_ues),
            incident=IncidentScene(scene.center.scaled(alpha), scene.width * alpha,
                                   scene.height * alpha, sc(scene.ues)),
        )


def lattice_shape(n: int) -> tuple[int, int]:
    """Rows and columns for ``n`` points: rows is the largest divisor <= sqrt(n)."""
    if n < 1:
        raise GeometryError(f"lattice needs at least one point, got {n}")
    rows = max(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
    return rows, n // rows


def lattice_points(n: int, center: Point, width: float, height: float) -> tuple[Point, ...]:
    """Centres of an r x c partition of the rectangle, row-major from the south-west.

    The longer lattice side runs along the longer rectangle side (x on ties).
    """
    rows, cols = lattice_shape(n)
    if height > width:
        rows, cols = cols, rows
    x0 = center.x - width / 2
    y0 = center.y - height / 2
    dx = width / cols
    dy = height / rows
    return tuple(
        Point(x0 + (j + 0.5) * dx, y0 + (i + 0.5) * dy)
        for i in range(rows)
        for j in range(cols)
    )


def build_layout(
    side_length: float,
    tiers: int = 2,
    n_routine: int = 80,
    scene_width: float = 200.0,
    scene_height: float = 200.0,
    n_incident: int = 50,
    origin: Point = Point(0.0, 0.0),
) -> CellLayout:
    """Build the square grid around a serving BTS at ``origin``.

    The incident scene is centred at the midpoint of the serving cell's
    east edge; the mobile BTS sits at that centre.
    """
    if not side_length > 0:
        raise GeometryError(f"side_length must be positive, got {side_length}")
    if tiers < 1:
        raise GeometryError(f"tiers must be >= 1, got {tiers}")
    if n_routine < 1 or n_incident < 1:
        raise GeometryError("UE counts must be >= 1")
    if not (scene_width > 0 and scene_height > 0):
        raise GeometryError("scene dimensions must be positive")

    interferers = tuple(
        Point(origin.x + i * side_length, origin.y + j * side_length)
        for i in range(-tiers, tiers + 1)
        for j in range(-tiers, tiers + 1)
        if (i, j) != (0, 0)
    )
    routine = lattice_points(n_routine, origin, side_length, side_length)
    center = Point(origin.x + side_length / 2, origin.y)
    scene = IncidentScene(
        center=center,
        width=scene_width,
        height=scene_height,
        ues=lattice_points(n_incident, center, scene_width, scene_height),
    )
    return CellLayout(side_length, tiers, origin, interferers, routine, scene)
