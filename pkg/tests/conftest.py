from fractions import Fraction

import pytest

from umlogic.space import Model, UltrametricSpace, cantor_sequences


def w_named_space(depth: int) -> UltrametricSpace:
    """Binary-history space with points renamed w0, w1, ... in event-tree order."""
    sequences = cantor_sequences(depth)
    names = [f"w{i}" for i in range(len(sequences))]
    return UltrametricSpace.from_sequences(names, dict(zip(names, sequences)))


@pytest.fixture
def w_model() -> Model:
    """Depth-3 event-tree model: p on {w0, w1}, q on {w0..w3}."""
    return Model(w_named_space(3), {"p": ["w0", "w1"], "q": ["w0", "w1", "w2", "w3"]})


@pytest.fixture
def triangle_space() -> UltrametricSpace:
    """Plain-metric triangle (1/2, 1/2, 1): valid metric, not an ultrametric."""
    return UltrametricSpace.from_pairs(
        ["a", "b", "c"],
        {("a", "b"): Fraction(1, 2), ("b", "c"): Fraction(1, 2), ("a", "c"): Fraction(1)},
    )
