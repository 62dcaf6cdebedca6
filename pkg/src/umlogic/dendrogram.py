"""Dendrogram of ball nesting, with DOT export.

In a valid ultrametric space any two intersecting balls are nested, so
the distinct closed balls form a tree under containment: singletons at
the leaves, the whole space at the root, one layer per realized radius.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .space import UltrametricSpace


@dataclass(frozen=True)
class BallNode:
    """One distinct ball: its members in point order and its diameter."""

    members: tuple[str, ...]
    radius: Fraction
    parent: int | None


def ball_tree(space: UltrametricSpace) -> list[BallNode]:
    """All distinct closed balls as a containment tree.

    Nodes are sorted by (size, members); each node's radius is the
    smallest radius generating it, which for a valid space is the set's
    diameter.  The parent is the index of the smallest strictly larger
    ball.
    """
    distinct: set[frozenset[str]] = set()
    for radius in space.realized_distances():
        for point in space.points:
            distinct.add(space.ball(point, radius))

    def ordered(members: frozenset[str]) -> tuple[str, ...]:
        return tuple(p for p in space.points if p in members)

    sets = sorted(distinct, key=lambda s: (len(s), ordered(s)))
    nodes = []
    for members in sets:
        diameter = max(
            (space.dist(a, b) for a in members for b in members),
            default=Fraction(0),
        )
        parent = None
        best_size = None
        for j, other in enumerate(sets):
            if members < other and (best_size is None or len(other) < best_size):
                parent = j
                best_size = len(other)
        nodes.append(BallNode(ordered(members), diameter, parent))
    return nodes


def dendrogram_dot(space: UltrametricSpace) -> str:
    """DOT text for the ball-nesting tree; deterministic node order."""
    nodes = ball_tree(space)
    lines = ["digraph balls {"]
    for i, node in enumerate(nodes):
        if len(node.members) == 1:
            label = node.members[0]
        else:
            label = "{" + ",".join(node.members) + "} r=" + str(node.radius)
        label = label.replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}"];')
    for i, node in enumerate(nodes):
        if node.parent is not None:
            lines.append(f"  n{node.parent} -> n{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
