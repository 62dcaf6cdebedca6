"""JSON model files: load with validation, save in canonical form.

A model file is an object with "points" (ordered array of names),
"distance" (one of "matrix": row-major exact-rational strings, or
"sequences": point -> binary history, distances derived from the first
differing position), and an optional "valuation" (atom -> point names).
Rationals cross the file boundary as strings like "1/8"; floats are
rejected to keep the arithmetic exact.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .space import Model, UltrametricSpace, UnknownPointError, Violation, validate_space


class ModelFormatError(ValueError):
    """Structurally bad model/valuation/map file."""


class InvalidSpaceError(ValueError):
    """The file parsed, but its distance table breaks the metric laws."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.detail for v in violations))


def parse_rational(value, *, what: str = "distance") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ModelFormatError(f"{what} {value!r} must be an exact-rational string, not a float/bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ModelFormatError(f"unreadable {what} {value!r}") from None
    raise ModelFormatError(f"unreadable {what} {value!r}")


def _parse_points(data: dict) -> list[str]:
    points = data.get("points")
    if not isinstance(points, list) or not points or not all(isinstance(p, str) for p in points):
        raise ModelFormatError('"points" must be a nonempty array of strings')
    return points


def _parse_valuation(data: dict) -> dict[str, list[str]]:
    valuation = data.get("valuation", {})
    if not isinstance(valuation, dict):
        raise ModelFormatError('"valuation" must be an object mapping atoms to point arrays')
    for atom, members in valuation.items():
        if not isinstance(members, list) or not all(isinstance(p, str) for p in members):
            raise ModelFormatError(f'valuation of "{atom}" must be an array of point names')
    return valuation


def model_from_dict(data, *, validate: bool = True) -> Model:
    """Build a model from parsed JSON; rejects invalid spaces unless told not to."""
    if not isinstance(data, dict):
        raise ModelFormatError("model file must be a JSON object")
    points = _parse_points(data)
    distance = data.get("distance")
    if not isinstance(distance, dict) or len(distance.keys() & {"matrix", "sequences"}) != 1:
        raise ModelFormatError('"distance" must be an object with exactly one of "matrix" or "sequences"')

    if "matrix" in distance:
        matrix = distance["matrix"]
        if not isinstance(matrix, list) or len(matrix) != len(points) or not all(
            isinstance(row, list) and len(row) == len(points) for row in matrix
        ):
            raise ModelFormatError(f'"matrix" must be a {len(points)}x{len(points)} array')
        parsed = [[parse_rational(v) for v in row] for row in matrix]
        try:
            space = UltrametricSpace(points, parsed)
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None
    else:
        sequences = distance["sequences"]
        if not isinstance(sequences, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in sequences.items()
        ):
            raise ModelFormatError('"sequences" must map point names to binary strings')
        try:
            space = UltrametricSpace.from_sequences(points, sequences)
        except UnknownPointError as exc:
            raise ModelFormatError(f"no sequence given for point {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None

    try:
        model = Model(space, _parse_valuation(data))
    except UnknownPointError as exc:
        raise ModelFormatError(f"valuation names unknown point {exc.args[0]!r}") from None

    if validate:
        violations = validate_space(space)
        if violations:
            raise InvalidSpaceError(violations)
    return model


def load_model(path: str | Path, *, validate: bool = True) -> Model:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: {exc}") from None
    return model_from_dict(data, validate=validate)


def model_to_dict(model: Model) -> dict:
    """Canonical matrix-form dictionary; point order preserved, sets sorted."""
    space = model.space
    return {
        "points": list(space.points),
        "distance": {"matrix": [[str(d) for d in row] for row in space.matrix()]},
        "valuation": {atom: sorted(members) for atom, members in model.valuation.items()},
    }


def dump_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, indent=2) + "\n"


def save_model(model: Model, path: str | Path) -> None:
    Path(path).write_text(dump_model(model))
