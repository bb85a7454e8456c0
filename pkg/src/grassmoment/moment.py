"""Moment maps for the torus actions on CP^N and on the Grassmannian.

Three maps share one weight structure.  The standard simplex moment map
sends a projective point to its squared-modulus profile; the hypersimplex
moment map pushes that profile forward along the 0/1 weight vectors, one
per coordinate pair; and the Grassmannian moment map is the hypersimplex
one precomposed with the Plücker embedding.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactgeom import hypersimplex_vertices, pairs_lex
from .plucker import GrassmannPoint, ProjectivePoint, plucker_embed


def weight_vectors(n: int) -> np.ndarray:
    """Integer weight vectors, one per pair {i, j} in lex order, as rows.

    Row k has ones exactly at the two positions of the k-th pair.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    pairs = pairs_lex(n)
    weights = np.zeros((len(pairs), n), dtype=int)
    for k, (i, j) in enumerate(pairs):
        weights[k, i - 1] = 1
        weights[k, j - 1] = 1
    return weights


def symmetric_power_phases(t: Sequence[complex], n: int) -> np.ndarray:
    """Second symmetric power of a torus element: products t_i * t_j, lex order."""
    t = np.asarray(t, dtype=complex)
    if t.shape != (n,):
        raise ValueError(f"expected {n} phases, got shape {t.shape}")
    return np.array([t[i - 1] * t[j - 1] for i, j in pairs_lex(n)], dtype=complex)


def _squared_profile(point) -> np.ndarray:
    coords = point.coords if isinstance(point, ProjectivePoint) else np.asarray(point, dtype=complex)
    profile = np.abs(coords) ** 2
    total = profile.sum()
    if total == 0.0:
        raise ValueError("zero vector has no moment image")
    return profile / total


def simplex_moment(point) -> np.ndarray:
    """Standard moment map CP^N -> Delta^N: normalized squared moduli."""
    return _squared_profile(point)


def hypersimplex_moment(point, n: int) -> np.ndarray:
    """Moment map CP^N -> hypersimplex: weight-vector average of |z_i|^2."""
    profile = _squared_profile(point)
    weights = weight_vectors(n)
    if profile.shape[0] != weights.shape[0]:
        raise ValueError(
            f"point has {profile.shape[0]} coordinates, expected {weights.shape[0]} for n={n}")
    return profile @ weights


def grassmann_moment(plane: GrassmannPoint, n: int) -> np.ndarray:
    """Moment map on 2-planes: hypersimplex moment of the Plücker image."""
    if plane.n != n:
        raise ValueError(f"plane is in C^{plane.n}, not C^{n}")
    return hypersimplex_moment(plucker_embed(plane), n)


def weight_map(x: Sequence, n: int):
    """Linear map sending the k-th simplex vertex to the k-th weight vector.

    Exact on Fraction input (returns a tuple of Fractions), floating point
    otherwise (returns an ndarray).
    """
    expected = len(pairs_lex(n))
    if len(x) != expected:
        raise ValueError(f"expected a simplex point of length {expected}, got {len(x)}")
    if any(isinstance(v, Fraction) for v in x):
        vertices = hypersimplex_vertices(n)
        out = [Fraction(0)] * n
        for weight, vertex in zip(x, vertices):
            weight = Fraction(weight)
            for j in range(n):
                out[j] += weight * vertex[j]
        return tuple(out)
    return np.asarray(x, dtype=float) @ weight_vectors(n)


def hypersimplex_residual(x, n: int, tol_sum: float = 1e-10) -> float:
    """How far a real vector is from {0 <= x_i <= 1, sum = 2}, in max norm."""
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected length {n}")
    below = float(np.max(np.maximum(-x, 0.0), initial=0.0))
    above = float(np.max(np.maximum(x - 1.0, 0.0), initial=0.0))
    return max(below, above, abs(float(x.sum()) - 2.0))


__all__ = [
    "weight_vectors",
    "symmetric_power_phases",
    "simplex_moment",
    "hypersimplex_moment",
    "grassmann_moment",
    "weight_map",
    "hypersimplex_residual",
]
