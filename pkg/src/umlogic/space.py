"""Finite ultrametric spaces, their validation, and models over them.

A space is a finite ordered point set with an exact rational distance
table.  Construction never checks the metric laws: :func:`validate_space`
reports violations as data, so deliberately broken spaces (used to show
which laws the strong triangle inequality buys) are representable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np


class UnknownPointError(KeyError):
    """A point name that does not belong to the space."""

    def __str__(self) -> str:
        return f"unknown point {self.args[0]!r}" if self.args else "unknown point"


@dataclass(frozen=True)
class Violation:
    """One violated metric law together with a witnessing tuple of points."""

    condition: str
    witness: tuple[str, ...]
    detail: str


def _as_distance(value: Fraction | int | str) -> Fraction:
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return Fraction(str(value))


class UltrametricSpace:
    """Finite point set with a dense symmetric table of exact distances."""

    def __init__(self, points: Sequence[str], matrix: Sequence[Sequence[Fraction | int | str]]):
        self._points = tuple(points)
        if len(set(self._points)) != len(self._points):
            raise ValueError("duplicate point names")
        if len(matrix) != len(self._points) or any(len(row) != len(self._points) for row in matrix):
            raise ValueError("distance matrix shape does not match the point list")
        self._index = {p: i for i, p in enumerate(self._points)}
        self._matrix = tuple(tuple(_as_distance(v) for v in row) for row in matrix)
        self._ball_masks: dict[Fraction, tuple[int, ...]] = {}
        self._realized: list[Fraction] | None = None

    @classmethod
    def from_pairs(
        cls,
        points: Sequence[str],
        pairs: Mapping[tuple[str, str], Fraction | int | str],
    ) -> "UltrametricSpace":
        """Build a space from unordered-pair distances (diagonal fixed at 0)."""
        index = {p: i for i, p in enumerate(points)}
        matrix = [[Fraction(0)] * len(points) for _ in points]
        seen = set()
        for (x, y), value in pairs.items():
            if x not in index or y not in index:
                missing = x if x not in index else y
                raise UnknownPointError(missing)
            i, j = index[x], index[y]
            matrix[i][j] = matrix[j][i] = _as_distance(value)
            seen.add(frozenset((i, j)))
        expected = {frozenset((i, j)) for i in range(len(points)) for j in range(i + 1, len(points))}
        if seen != expected:
            raise ValueError("pair distances must cover every unordered pair of distinct points")
        return cls(points, matrix)

    @classmethod
    def from_sequences(cls, points: Sequence[str], sequences: Mapping[str, str]) -> "UltrametricSpace":
        """Build a space whose distances come from binary event histories.

        ``sequences`` maps each point to a fixed-length binary string; the
        distance between two points is 2^-n for the 1-based position n where
        their histories first differ.
        """
        seqs = []
        for p in points:
            if p not in sequences:
                raise UnknownPointError(p)
            seq = sequences[p]
            if not seq or any(c not in "01" for c in seq):
                raise ValueError(f"sequence for {p!r} is not a nonempty binary string")
            seqs.append(seq)
        if len(set(len(s) for s in seqs)) > 1:
            raise ValueError("sequences must all have the same length")
        matrix = [[sequence_distance(a, b) for b in seqs] for a in seqs]
        return cls(points, matrix)

    @property
    def points(self) -> tuple[str, ...]:
        return self._points

    @property
    def n(self) -> int:
        return len(self._points)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._points)) - 1

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownPointError(x) from None

    def __contains__(self, x: str) -> bool:
        return x in self._index

    def dist(self, x: str, y: str) -> Fraction:
        return self._matrix[self.index(x)][self.index(y)]

    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._matrix

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names_of(self, mask: int) -> frozenset[str]:
        return frozenset(p for i, p in enumerate(self._points) if mask >> i & 1)

    def ball_masks(self, eps: Fraction) -> tuple[int, ...]:
        """Per-point bitmasks of the closed ball {y : d(x, y) <= eps}."""
        cached = self._ball_masks.get(eps)
        if cached is None:
            cached = tuple(
                sum(1 << j for j, d in enumerate(row) if d <= eps) for row in self._matrix
            )
            self._ball_masks[eps] = cached
        return cached

    def ball(self, x: str, eps: Fraction) -> frozenset[str]:
        """The closed ball around ``x`` of radius ``eps``; always contains x."""
        return self.names_of(self.ball_masks(eps)[self.index(x)])

    def realized_distances(self) -> list[Fraction]:
        """Ascending deduplicated list of every distance the table realizes."""
        if self._realized is None:
            self._realized = sorted({d for row in self._matrix for d in row})
        return list(self._realized)


def validate_space(space: UltrametricSpace) -> list[Violation]:
    """Check the five metric laws; empty report means the space is valid.

    Each violated law is reported once, with the first witnessing pair or
    triple in point order.
    """
    pts = space.points
    m = space.matrix()
    n = len(pts)
    violations = []

    bad = next(((i, j) for i in range(n) for j in range(n) if m[i][j] < 0), None)
    if bad:
        i, j = bad
        violations.append(Violation(
            "nonnegativity", (pts[i], pts[j]), f"d({pts[i]}, {pts[j]}) = {m[i][j]} < 0"))

    bad = next(((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != m[j][i]), None)
    if bad:
        i, j = bad
        violations.append(Violation(
            "symmetry", (pts[i], pts[j]),
            f"d({pts[i]}, {pts[j]}) = {m[i][j]} but d({pts[j]}, {pts[i]}) = {m[j][i]}"))

    bad = next((i for i in range(n) if m[i][i] != 0), None)
    if bad is not None:
        violations.append(Violation(
            "zero-self-distance", (pts[bad],), f"d({pts[bad]}, {pts[bad]}) = {m[bad][bad]} != 0"))

    bad = next(((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] == 0), None)
    if bad:
        i, j = bad
        violations.append(Violation(
            "identity-of-indiscernibles", (pts[i], pts[j]),
            f"distinct points {pts[i]}, {pts[j]} at distance 0"))

    bad = _strong_triangle_witness(m)
    if bad:
        i, j, k = bad
        violations.append(Violation(
            "strong-triangle", (pts[i], pts[j], pts[k]),
            f"d({pts[i]}, {pts[j]}) = {m[i][j]} > max(d({pts[i]}, {pts[k]}), "
            f"d({pts[j]}, {pts[k]})) = {max(m[i][k], m[j][k])}"))

    return violations


def _strong_triangle_witness(m) -> tuple[int, int, int] | None:
    """First triple (i, j, k), i < j, with d(i, j) > max(d(i, k), d(j, k)).

    Distances are rank-encoded (order-preserving, still exact) so the cubic
    sweep can run vectorised; the returned triple is the lexicographically
    least one, matching a plain nested loop over i < j, then k.
    """
    n = len(m)
    if n < 3:
        return None
    ranks = {d: r for r, d in enumerate(sorted({d for row in m for d in row}))}
    rank = np.array([[ranks[d] for d in row] for row in m], dtype=np.int32)
    best: tuple[int, int, int] | None = None
    for k in range(n):
        to_k = rank[:, k]
        bound = np.maximum(to_k[:, None], to_k[None, :])
        over = np.triu(rank > bound, 1)
        over[k, :] = False
        over[:, k] = False
        hits = np.argwhere(over)
        if hits.size:
            i, j = map(int, hits[0])
            if best is None or (i, j, k) < best:
                best = (i, j, k)
    return best


def sequence_distance(x: str, y: str) -> Fraction:
    """Distance 2^-n between equal-length binary histories first differing at 1-based position n."""
    if len(x) != len(y):
        raise ValueError("sequences must have equal length")
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return Fraction(1, 2 ** (i + 1))
    return Fraction(0)


def cantor_sequences(depth: int) -> list[str]:
    """All binary histories of the given depth, in event-tree leaf order.

    The leftmost leaf (every event happened) comes first, so index i in the
    result names the i-th leaf of the depth-n binary event tree.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return [format(i, f"0{depth}b") for i in range(2 ** depth - 1, -1, -1)]


def cantor_space(depth: int) -> UltrametricSpace:
    """Depth-n truncation of the binary-history space, points named by their sequences."""
    seqs = cantor_sequences(depth)
    return UltrametricSpace.from_sequences(seqs, {s: s for s in seqs})


class Model:
    """A space plus a valuation assigning each atom the set of points where it holds."""

    def __init__(self, space: UltrametricSpace, valuation: Mapping[str, Iterable[str]] | None = None):
        self.space = space
        self.valuation: dict[str, frozenset[str]] = {}
        for atom, members in (valuation or {}).items():
            members = frozenset(members)
            for p in members:
                if p not in space:
                    raise UnknownPointError(p)
            self.valuation[atom] = members

    def atom_set(self, name: str) -> frozenset[str]:
        """Points where ``name`` holds; atoms missing from the valuation are empty."""
        return self.valuation.get(name, frozenset())

    def atom_mask(self, name: str) -> int:
        return self.space.mask_of(self.valuation.get(name, ()))
