"""Formula AST and exact grade arithmetic for the graded modal language.

A formula is built from atoms, negation, conjunction and the graded
modalities ``[g]`` (box) and ``<g>`` (diamond); disjunction, implication
and diamond are definitional sugar that :func:`desugar` eliminates.
Grades are exact rationals in [0, 1], kept as :class:`fractions.Fraction`
so that comparisons against distances never involve rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class GradeError(ValueError):
    """Raised for grade values outside [0, 1] or unreadable grade text."""


def as_grade(value: int | str | Fraction) -> Fraction:
    """Convert ``value`` to an exact grade in [0, 1].

    Accepts Fractions, ints, and strings in either ``"p/q"`` or finite
    decimal form (``"0.125"``).
    """
    if isinstance(value, Fraction):
        grade = value
    elif isinstance(value, int):
        grade = Fraction(value)
    elif isinstance(value, str):
        try:
            grade = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise GradeError(f"unreadable grade {value!r}") from exc
    else:
        raise GradeError(f"unreadable grade {value!r}")
    if not 0 <= grade <= 1:
        raise GradeError(f"grade {grade} outside [0, 1]")
    return grade


class Formula:
    """Base class for formulas; instances are immutable and hashable."""

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


class _Graded(Formula):
    """Shared grade validation for Box and Diamond."""

    def __post_init__(self):
        grade = self.grade
        if isinstance(grade, bool):
            raise GradeError(f"grade {grade!r} is not a rational")
        if isinstance(grade, int):
            object.__setattr__(self, "grade", Fraction(grade))
            grade = self.grade
        # Non-numeric grade slots are allowed so axiom-schema templates can
        # carry grade metavariables; concrete formulas always hold Fractions.
        if isinstance(grade, Fraction) and not 0 <= grade <= 1:
            raise GradeError(f"grade {grade} outside [0, 1]")


@dataclass(frozen=True)
class Box(_Graded):
    grade: Fraction
    sub: Formula


@dataclass(frozen=True)
class Diamond(_Graded):
    grade: Fraction
    sub: Formula


# Precedence levels used by the printer; prefix operators bind tightest.
_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_PREFIX = 4


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return _PREC_IMPLIES
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    return _PREC_PREFIX


def _wrap(f: Formula, minimum: int) -> str:
    text = format_formula(f)
    if _prec(f) < minimum:
        return f"({text})"
    return text


def format_formula(f: Formula) -> str:
    """Render ``f`` as canonical concrete syntax.

    Grades print as exact fractions and parentheses are inserted only
    where precedence requires them, so ``parse(format_formula(f))`` is
    structurally equal to ``f``.
    """
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _wrap(f.sub, _PREC_PREFIX)
    if isinstance(f, Box):
        return f"[{f.grade}]" + _wrap(f.sub, _PREC_PREFIX)
    if isinstance(f, Diamond):
        return f"<{f.grade}>" + _wrap(f.sub, _PREC_PREFIX)
    if isinstance(f, And):
        # Left-associative: the right operand needs parens when it is
        # itself a conjunction, or anything binding more loosely.
        return _wrap(f.left, _PREC_AND) + " & " + _wrap(f.right, _PREC_AND + 1)
    if isinstance(f, Or):
        return _wrap(f.left, _PREC_OR) + " | " + _wrap(f.right, _PREC_OR + 1)
    if isinstance(f, Implies):
        # Right-associative.
        return _wrap(f.left, _PREC_IMPLIES + 1) + " -> " + _wrap(f.right, _PREC_IMPLIES)
    raise TypeError(f"not a formula: {f!r}")


def desugar(f: Formula) -> Formula:
    """Rewrite ``f`` so only atoms, ~, & and box remain.

    Or(a, b) becomes ~(~a & ~b), Implies(a, b) becomes ~(a & ~b), and
    Diamond(g, a) becomes ~[g]~a.  The result is logically equivalent to
    ``f`` in every model.
    """
    if isinstance(f, Not):
        return Not(desugar(f.sub))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Box):
        return Box(f.grade, desugar(f.sub))
    if isinstance(f, Diamond):
        return Not(Box(f.grade, Not(desugar(f.sub))))
    return f


def subformulas(f: Formula) -> list[Formula]:
    """All subterms of ``f``, each listed once, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(g: Formula) -> None:
        if g in seen:
            return
        if isinstance(g, (Not, Box, Diamond)):
            walk(g.sub)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        seen[g] = None

    walk(f)
    return list(seen)


def grade_set(f: Formula) -> set[Fraction]:
    """The grades occurring in modalities of ``f``."""
    grades: set[Fraction] = set()
    for g in subformulas(f):
        if isinstance(g, (Box, Diamond)):
            grades.add(g.grade)
    return grades


def atoms(f: Formula) -> set[str]:
    """Names of the propositional atoms occurring in ``f``."""
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}
