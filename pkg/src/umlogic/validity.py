"""Brute-force validity checking over finite spaces.

A formula is valid in a space when it holds at every world under every
valuation of its atoms.  Only atoms occurring in the formula are
enumerated; each candidate valuation is an integer whose bit layout is
documented at :func:`valid_in_model`, and evaluation runs vectorised over
chunks of candidates with one bitmask per point set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formula import And, Atom, Box, Formula, Not, atoms, desugar, subformulas
from .space import UltrametricSpace

DEFAULT_CAP = 1 << 26
_CHUNK = 1 << 18


class EnumerationCapExceeded(Exception):
    """The valuation space is larger than the configured cap."""

    def __init__(self, needed: int, cap: int):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{needed} valuations exceed the enumeration cap {cap}")


@dataclass
class Counterexample:
    valuation: dict[str, frozenset[str]]
    world: str


@dataclass
class ValidityResult:
    valid: bool
    witness: Counterexample | None
    valuations_checked: int

    def __bool__(self) -> bool:
        return self.valid


def _eval_chunk(space: UltrametricSpace, order: list[Formula], atom_arrays: dict, size: int):
    full = np.uint64(space.full_mask)
    values: dict[Formula, np.ndarray] = {}
    for g in order:
        if isinstance(g, Atom):
            values[g] = atom_arrays[g.name]
        elif isinstance(g, Not):
            values[g] = full ^ values[g.sub]
        elif isinstance(g, And):
            values[g] = values[g.left] & values[g.right]
        elif isinstance(g, Box):
            sub = values[g.sub]
            acc = np.zeros(size, dtype=np.uint64)
            for w, ball in enumerate(space.ball_masks(g.grade)):
                b = np.uint64(ball)
                acc |= ((sub & b) == b).astype(np.uint64) << np.uint64(w)
            values[g] = acc
        else:
            raise TypeError(f"not a core formula: {g!r}")
    return values[order[-1]]


def valid_in_model(space: UltrametricSpace, f: Formula, cap: int = DEFAULT_CAP) -> ValidityResult:
    """Exhaustively check ``f`` at every world under every valuation of its atoms.

    Candidate valuations are encoded as integers: atom j (in sorted name
    order) owns bits [j*n, (j+1)*n) and bit i of its slice puts point i in
    the atom's set.  Candidates are scanned in ascending order and worlds
    in point order, so the reported counterexample is the least one under
    that encoding.  Raises :class:`EnumerationCapExceeded` when there are
    more than ``cap`` candidates.
    """
    names = sorted(atoms(f))
    n = space.n
    total = 1 << (n * len(names))
    # Candidates are packed into uint64, so 62 index bits is a hard ceiling
    # regardless of how generous the configured cap is.
    if total > min(cap, 1 << 62):
        raise EnumerationCapExceeded(total, min(cap, 1 << 62))

    core = desugar(f)
    order = subformulas(core)
    full = space.full_mask
    point_bits = np.uint64(full)

    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.uint64)
        atom_arrays = {
            name: (idx >> np.uint64(j * n)) & point_bits for j, name in enumerate(names)
        }
        result = _eval_chunk(space, order, atom_arrays, stop - start)
        bad = np.nonzero(result != point_bits)[0]
        if bad.size:
            encoded = int(idx[bad[0]])
            held = int(result[bad[0]])
            valuation = {
                name: space.names_of(encoded >> (j * n) & full) for j, name in enumerate(names)
            }
            world = next(space.points[i] for i in range(n) if not held >> i & 1)
            return ValidityResult(False, Counterexample(valuation, world), start + int(bad[0]) + 1)
    return ValidityResult(True, None, total)
