"""Two-planes in C^n, their Plücker embedding, and the n=4 chart.

A plane is a rank-2 complex 2 x n matrix; its Plücker image is the vector
of 2 x 2 column minors, one per pair {i, j} in lexicographic order.  For
n = 4 the image is cut out by the single quadric z0*z5 + z2*z3 = z1*z4,
and the chart where the {2,3}-minor is nonzero carries the affine
coordinates used by the complete-intersection checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactgeom import pairs_lex

RANK_TOL = 1e-12
COORD_TOL = 1e-12


def normalize_projective(coords, tol: float = COORD_TOL) -> np.ndarray:
    """Canonical representative: unit norm, first nonzero entry real positive."""
    v = np.asarray(coords, dtype=complex).copy()
    if v.ndim != 1 or v.size == 0:
        raise ValueError("projective point must be a nonempty 1-d vector")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    v /= norm
    nonzero = np.nonzero(np.abs(v) > tol)[0]
    if nonzero.size == 0:
        raise ValueError("all coordinates below tolerance")
    k = int(nonzero[0])
    v *= np.conj(v[k]) / abs(v[k])
    v[k] = v[k].real
    return v


def projective_distance(u, v) -> float:
    """Fubini-Study style distance sqrt(1 - |<u, v>|^2) on unit vectors.

    Computed as the norm of the component of u orthogonal to v, which is
    the same number but does not lose precision when the classes agree.
    """
    a = np.asarray(u, dtype=complex)
    b = np.asarray(v, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    orthogonal = a - np.vdot(b, a) * b
    return float(np.linalg.norm(orthogonal))


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of CP^N stored in canonical normalization."""

    coords: np.ndarray

    def __post_init__(self):
        canonical = normalize_projective(self.coords)
        canonical.setflags(write=False)
        object.__setattr__(self, "coords", canonical)

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coords]


@dataclass(frozen=True)
class GrassmannPoint:
    """A 2-plane in C^n as a certified rank-2 complex 2 x n matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).copy()
        if m.ndim != 2 or m.shape[0] != 2 or m.shape[1] < 2:
            raise ValueError(f"expected a 2 x n matrix with n >= 2, got shape {m.shape}")
        scale = float(np.max(np.abs(m))) ** 2
        largest_minor = max(
            abs(m[0, i - 1] * m[1, j - 1] - m[0, j - 1] * m[1, i - 1])
            for i, j in pairs_lex(m.shape[1])
        )
        if scale == 0.0 or largest_minor <= RANK_TOL * scale:
            raise ValueError("matrix is not certifiably of rank 2")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


def plucker_embed(plane: GrassmannPoint) -> ProjectivePoint:
    """Plücker image: the 2 x 2 column minors in lexicographic pair order."""
    m = plane.matrix
    minors = [m[0, i - 1] * m[1, j - 1] - m[0, j - 1] * m[1, i - 1]
              for i, j in pairs_lex(plane.n)]
    return ProjectivePoint(np.array(minors, dtype=complex))


def plucker_relation_residual(point, n: int = 4) -> float:
    """|z0*z5 + z2*z3 - z1*z4| on the given representative.

    The value is scale dependent, so callers pass a normalized point; the
    coordinates are used exactly as handed in.
    """
    if n != 4:
        raise ValueError("the quadric relation is implemented for n = 4 only")
    z = point.coords if isinstance(point, ProjectivePoint) else np.asarray(point, dtype=complex)
    if z.shape != (6,):
        raise ValueError("expected 6 homogeneous coordinates")
    return float(abs(z[0] * z[5] + z[2] * z[3] - z[1] * z[4]))


@dataclass(frozen=True)
class ChartCoords4:
    """Affine coordinates on the chart of G(4,2) where the {2,3}-minor is nonzero."""

    a1: complex
    a2: complex
    a3: complex
    a4: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.a1, self.a2, self.a3, self.a4)

    def as_uv(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array(self.as_tuple(), dtype=complex)
        return a.real.copy(), a.imag.copy()


def chart_coords(plane: GrassmannPoint) -> ChartCoords4:
    """Chart coordinates a1 = P13/P23, a2 = -P34/P23, a3 = -P12/P23, a4 = P24/P23."""
    if plane.n != 4:
        raise ValueError("chart coordinates are defined for n = 4")
    z = plucker_embed(plane).coords
    if abs(z[3]) <= COORD_TOL:
        raise ValueError("outside chart: the {2,3}-minor vanishes")
    return ChartCoords4(
        a1=complex(z[1] / z[3]),
        a2=complex(-z[5] / z[3]),
        a3=complex(-z[0] / z[3]),
        a4=complex(z[4] / z[3]),
    )


def from_chart(coords) -> GrassmannPoint:
    """Plane with {2,3}-minor 1 realizing the given chart coordinates."""
    if isinstance(coords, ChartCoords4):
        a1, a2, a3, a4 = coords.as_tuple()
    else:
        a1, a2, a3, a4 = (complex(c) for c in coords)
    matrix = np.array([[a1, 1.0, 0.0, a2],
                       [a3, 0.0, 1.0, a4]], dtype=complex)
    return GrassmannPoint(matrix)
