"""Regular values, strata stabilizers, and the chamber combinatorics.

Two regularity notions live side by side.  A point of the hypersimplex is
a regular value for the Grassmannian moment map iff it avoids the
arrangement sum_{i in T} x_i = 1 and the boundary; it is a regular value
for the ambient projective moment map iff it lies in no convex hull of
vertices of dimension below n-1.  The second condition is decided by a
Caratheodory-bounded enumeration over affinely independent vertex
subsets, cross-checked by an exhaustive scan over all coordinate
supports.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .exactgeom import (
    Vector,
    affine_rank,
    arrangement_for_n,
    convex_membership,
    hypersimplex_vertices,
    in_hypersimplex,
    pairs_lex,
    sign_vector,
)

DEFAULT_SEED = 0xC0FFEE

#: Canonical interior points of the two reference chambers.
CHAMBER_POINT_MINUS: Vector = (Fraction(1, 3), Fraction(5, 9), Fraction(5, 9), Fraction(5, 9))
CHAMBER_POINT_PLUS: Vector = (Fraction(2, 3), Fraction(4, 9), Fraction(4, 9), Fraction(4, 9))


@dataclass(frozen=True)
class AdmissiblePolytope:
    """Convex hull of the weight vectors indexed by a stratum support."""

    vertex_set: tuple[Vector, ...]
    dim: int


@dataclass(frozen=True)
class StabilizerReport:
    dim_polytope: int
    dim_stabilizer: int


@dataclass(frozen=True)
class ChamberReport:
    id: tuple[int, ...]
    dimension: int
    representative: Vector


@dataclass(frozen=True)
class ChamberOrbit:
    label: str
    representative: ChamberReport
    chambers: tuple[ChamberReport, ...]


def support_from_pairs(pairs: Sequence[tuple[int, int]], n: int) -> tuple[int, ...]:
    """Translate pairs {i, j} into 0-based coordinate indices, lex order."""
    index = {pair: k for k, pair in enumerate(pairs_lex(n))}
    return tuple(sorted(index[tuple(sorted(p))] for p in pairs))


def polytope_of_support(sigma: Sequence[int], n: int) -> AdmissiblePolytope:
    """The admissible polytope of a stratum support, with its exact dimension."""
    sigma = tuple(sigma)
    if not sigma:
        raise ValueError("stratum support must be nonempty")
    vertices = hypersimplex_vertices(n)
    if any(i < 0 or i >= len(vertices) for i in sigma):
        raise ValueError("support index out of range")
    vertex_set = tuple(vertices[i] for i in sigma)
    return AdmissiblePolytope(vertex_set=vertex_set, dim=affine_rank(vertex_set))


def stabilizer_dim(sigma: Sequence[int], n: int) -> StabilizerReport:
    """Stabilizer dimension of the stratum with nonzero coordinates sigma.

    The polytope spanned by the weight vectors of sigma has the same
    dimension as the freely acting quotient torus, so the stabilizer
    (diagonal circle included) has dimension n minus that.
    """
    polytope = polytope_of_support(sigma, n)
    return StabilizerReport(dim_polytope=polytope.dim, dim_stabilizer=n - polytope.dim)


def _require_hypersimplex(x: Sequence[Fraction], n: int) -> None:
    if len(x) != n:
        raise ValueError(f"expected a point of length {n}")
    if not in_hypersimplex(x):
        raise ValueError("point lies outside the hypersimplex")


def is_regular_grassmann(x: Sequence[Fraction], n: int) -> bool:
    """Regular value test for the Grassmannian moment map, exact.

    True iff 0 < x_i < 1 for all i and x avoids every arrangement
    hyperplane, i.e. x sits in an open chamber of maximal dimension.
    """
    _require_hypersimplex(x, n)
    if not all(0 < v < 1 for v in x):
        return False
    return all(h.evaluate(x) != 0 for h in arrangement_for_n(n))


class _HullTester:
    """Prepared exact membership test for one affinely independent vertex set."""

    __slots__ = ("vertices", "pivot_rows", "other_rows", "inverse", "columns")

    def __init__(self, vertices: Sequence[Vector]):
        self.vertices = [tuple(v) for v in vertices]
        k = len(self.vertices)
        dim = len(self.vertices[0])
        last = self.vertices[-1]
        columns = [[v[i] - last[i] for i in range(dim)] for v in self.vertices[:-1]]
        rows = [[col[i] for col in columns] for i in range(dim)]
        pivot_rows: list[int] = []
        work: list[list[Fraction]] = []
        for i, row in enumerate(rows):
            candidate = work + [list(row)]
            reduced_rank = _matrix_rank(candidate)
            if reduced_rank > len(work):
                work.append(list(row))
                pivot_rows.append(i)
            if len(pivot_rows) == k - 1:
                break
        if len(pivot_rows) != k - 1:
            raise ValueError("vertex set is not affinely independent")
        square = [rows[i] for i in pivot_rows]
        self.inverse = _invert(square)
        self.pivot_rows = pivot_rows
        self.other_rows = [i for i in range(dim) if i not in pivot_rows]
        self.columns = rows

    def weights(self, x: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
        last = self.vertices[-1]
        k = len(self.vertices)
        if k == 1:
            return (Fraction(1),) if tuple(x) == last else None
        diff = [x[i] - last[i] for i in range(len(last))]
        mu = [sum(self.inverse[r][c] * diff[self.pivot_rows[c]] for c in range(k - 1))
              for r in range(k - 1)]
        if any(v < 0 for v in mu):
            return None
        tail = 1 - sum(mu)
        if tail < 0:
            return None
        for i in self.other_rows:
            if sum(self.columns[i][c] * mu[c] for c in range(k - 1)) != diff[i]:
                return None
        return tuple(mu) + (tail,)


def _matrix_rank(rows: list[list[Fraction]]) -> int:
    from .exactgeom import _row_echelon

    _, pivots = _row_echelon([list(r) for r in rows])
    return len(pivots)


def _invert(square: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(square)
    identity = [[Fraction(1) if i == j else Fraction(0) for j in range(k)] for i in range(k)]
    from .exactgeom import _row_echelon

    augmented = [list(square[i]) + identity[i] for i in range(k)]
    reduced, pivots = _row_echelon(augmented)
    if pivots != list(range(k)):
        raise ValueError("matrix is singular")
    return [row[k:] for row in reduced]


@lru_cache(maxsize=8)
def _prepared_testers(n: int) -> tuple[tuple[tuple[int, ...], _HullTester], ...]:
    """All affinely independent vertex subsets of size <= n-1, smallest first."""
    vertices = hypersimplex_vertices(n)
    prepared = []
    for size in range(1, n):
        for idx in itertools.combinations(range(len(vertices)), size):
            subset = [vertices[i] for i in idx]
            if size > 1 and affine_rank(subset) != size - 1:
                continue
            prepared.append((idx, _HullTester(subset)))
    return tuple(prepared)


def is_regular_projective(x: Sequence[Fraction], n: int) -> bool:
    """Regular value test for the ambient projective moment map, exact.

    A point fails iff it lies in the convex hull of an affinely
    independent vertex subset of size at most n-1 (such a hull spans
    dimension at most n-2, and any witness hull of low dimension reduces
    to one of these by Caratheodory).  Guarded to n <= 6: the subset
    enumeration grows too fast beyond that.
    """
    if n > 6:
        raise ValueError("projective regularity test supports n <= 6")
    _require_hypersimplex(x, n)
    x = tuple(Fraction(v) for v in x)
    for _, tester in _prepared_testers(n):
        if tester.weights(x) is not None:
            return False
    return True


def is_regular_projective_bruteforce(x: Sequence[Fraction], n: int) -> bool:
    """Reference scan over all nonempty coordinate supports.

    Declares x non-regular iff some support spans a polytope of dimension
    at most n-2 whose hull contains x.  Kept deliberately independent of
    the bounded enumeration above so the two can cross-check each other.
    """
    _require_hypersimplex(x, n)
    vertices = hypersimplex_vertices(n)
    x = tuple(Fraction(v) for v in x)
    for size in range(1, len(vertices) + 1):
        for sigma in itertools.combinations(range(len(vertices)), size):
            subset = [vertices[i] for i in sigma]
            if affine_rank(subset) > n - 2:
                continue
            if convex_membership(x, subset) is not None:
                return False
    return True


def _representative_candidates() -> Iterator[Vector]:
    """Interior rational candidates: the eight reference points, then a grid."""
    for base in (CHAMBER_POINT_MINUS, CHAMBER_POINT_PLUS):
        special, common = base[0], base[1]
        for position in range(4):
            point = [common] * 4
            point[position] = special
            yield tuple(point)
    for point in hypersimplex_grid(4, 9):
        yield point


def enumerate_chambers(n: int = 4) -> list[ChamberReport]:
    """The eight maximal chambers of the n=4 decomposition, with exact representatives."""
    if n != 4:
        raise ValueError("chamber enumeration is implemented for n = 4 only")
    arrangement = arrangement_for_n(4)
    found: dict[tuple[int, ...], Vector] = {}
    for x in _representative_candidates():
        if not all(0 < v < 1 for v in x):
            continue
        signs = sign_vector(x, arrangement)
        if 0 in signs:
            continue
        found.setdefault(signs, x)
        if len(found) == 8:
            break
    return [ChamberReport(id=signs, dimension=3, representative=x)
            for signs, x in sorted(found.items())]


def chamber_orbits() -> tuple[ChamberOrbit, ChamberOrbit]:
    """Partition of the eight chambers under coordinate permutations.

    Two orbits of four chambers each; the orbit of the all-minus chamber
    is labeled C- and the orbit of the all-plus chamber C+.
    """
    chambers = enumerate_chambers(4)
    by_id = {c.id: c for c in chambers}
    arrangement = arrangement_for_n(4)

    parent = {c.id: c.id for c in chambers}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for chamber in chambers:
        for perm in itertools.permutations(range(4)):
            image = tuple(chamber.representative[p] for p in perm)
            union(chamber.id, sign_vector(image, arrangement))

    groups: dict[tuple[int, ...], list[ChamberReport]] = {}
    for chamber in chambers:
        groups.setdefault(find(chamber.id), []).append(chamber)

    minus_id = (-1, -1, -1)
    plus_id = (1, 1, 1)
    orbits = []
    for label, rep_id in (("C-", minus_id), ("C+", plus_id)):
        members = tuple(sorted(groups[find(rep_id)], key=lambda c: c.id))
        orbits.append(ChamberOrbit(label=label, representative=by_id[rep_id], chambers=members))
    return tuple(orbits)


def orbit_label(chamber_id: Sequence[int]) -> str:
    """C- or C+ label for a maximal chamber id."""
    for orbit in chamber_orbits():
        if tuple(chamber_id) in {c.id for c in orbit.chambers}:
            return orbit.label
    raise ValueError(f"not a maximal chamber id: {chamber_id}")


def center_point_regular(n: int) -> bool:
    """Whether the center (2/n, ..., 2/n) is a regular value; true iff n is odd."""
    if n < 4:
        raise ValueError("need n >= 4")
    center = tuple(Fraction(2, n) for _ in range(n))
    return is_regular_grassmann(center, n)


def largest_chamber_witness(n: int, seed: int = DEFAULT_SEED, max_trials: int = 2000) -> Vector:
    """Exact interior point of the largest maximal chamber.

    All support sums with |T| up to n//2 (odd n) or n//2 - 1 (even n) stay
    below 1, and no arrangement hyperplane is hit.  For odd n the center
    works; for even n a seeded exact perturbation of the center is
    searched.
    """
    if not 4 <= n <= 8:
        raise ValueError("witness search supports 4 <= n <= 8")
    strict_bound = n // 2 if n % 2 == 1 else n // 2 - 1
    arrangement = arrangement_for_n(n)

    def qualifies(x: Vector) -> bool:
        if not all(0 < v < 1 for v in x):
            return False
        for h in arrangement:
            value = h.evaluate(x)
            if value == 0:
                return False
            if len(h.support) <= strict_bound and value >= 0:
                return False
        return True

    center = tuple(Fraction(2, n) for _ in range(n))
    if qualifies(center):
        return center

    rng = random.Random(seed)
    scale = 100 * n * n
    for _ in range(max_trials):
        raw = [rng.randrange(-97, 98) for _ in range(n)]
        total = sum(raw)
        candidate = tuple(Fraction(2, n) + Fraction(n * r - total, n * scale) for r in raw)
        if sum(candidate) == 2 and qualifies(candidate):
            return candidate
    raise RuntimeError(f"witness search exhausted after {max_trials} trials")


def hypersimplex_grid(n: int, denominator: int) -> Iterator[Vector]:
    """All exact points of the hypersimplex with the given denominator."""
    d = denominator

    def rec(position: int, remaining: int):
        if position == n - 1:
            if 0 <= remaining <= d:
                yield (remaining,)
            return
        low = max(0, remaining - d * (n - 1 - position))
        high = min(d, remaining)
        for k in range(low, high + 1):
            for tail in rec(position + 1, remaining - k):
                yield (k,) + tail

    for numerators in rec(0, 2 * d):
        yield tuple(Fraction(k, d) for k in numerators)
