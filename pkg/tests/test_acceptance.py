"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Every tolerance is exact (rational equality, zero discrepancies);
criteria with a runtime budget enforce it with a wall-clock assertion.
"""
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from umlogic.cli import main
from umlogic.constructions import (
    PointMap,
    bilipschitz_bounds,
    check_frame_morphism,
    disjoint_union,
)
from umlogic.formula import Box, Diamond, Implies
from umlogic.generators import (
    formula_grades,
    random_formula,
    random_model,
    random_schema_instance,
    random_ultrametric_space,
)
from umlogic.harness import (
    axiom_instances,
    check_morphism_transfer,
    check_subspace_validity,
    check_union_invariance_exhaustive,
    check_union_validity,
)
from umlogic.modelio import load_model
from umlogic.parser import parse
from umlogic.proofs import check_proof, proof_from_json
from umlogic.semantics import (
    closure_mask,
    holds,
    interior_mask,
    plausibility_degree,
    stability_degree,
)
from umlogic.space import Model, UltrametricSpace, cantor_space, validate_space
from umlogic.validity import valid_in_model

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(number: int, description: str, budget_seconds: float | None = None):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"CRITERION {number}: FAIL - {description}")
        raise
    elapsed = time.monotonic() - start
    if budget_seconds is not None and elapsed >= budget_seconds:
        print(f"CRITERION {number}: FAIL - {description} (runtime {elapsed:.2f}s over {budget_seconds}s)")
        raise AssertionError(f"criterion {number} runtime {elapsed:.2f}s exceeds {budget_seconds}s")
    print(f"CRITERION {number}: PASS - {description} ({elapsed:.2f}s)")


def test_criterion_1_worked_example(tmp_path):
    with criterion(1, "depth-3 event-tree model reproduced exactly", budget_seconds=1.0):
        valuation = tmp_path / "valuation.json"
        valuation.write_text(json.dumps({"p": ["w0", "w1"], "q": ["w0", "w1", "w2", "w3"]}))
        model_path = tmp_path / "model.json"
        assert main(["cantor", "--depth", "3", "--valuation", str(valuation),
                     "--out", str(model_path)]) == 0

        model = load_model(model_path)
        assert model.space.dist("w0", "w1") == Fraction(1, 8)
        assert model.space.dist("w0", "w2") == Fraction(1, 4)
        assert model.space.dist("w0", "w3") == Fraction(1, 4)
        for far in ("w4", "w5", "w6", "w7"):
            assert model.space.dist("w0", far) == Fraction(1, 2)
        assert holds(model, "w0", parse("[1/8]p"))
        assert holds(model, "w0", parse("[1/4]q"))
        assert main(["check", "--model", str(model_path), "--formula", "[1/8]p",
                     "--world", "w0", "--out", str(tmp_path / "c1.json")]) == 0
        assert main(["check", "--model", str(model_path), "--formula", "[1/4]q",
                     "--world", "w0", "--out", str(tmp_path / "c2.json")]) == 0


def _verify_graded_identities(space: UltrametricSpace, subset_masks) -> int:
    """Identities (i)-(ix) of the graded interior/closure pair, by bitmask.

    Returns the number of subset/grade combinations verified; any failure
    raises AssertionError immediately.
    """
    full = space.full_mask
    grades = space.realized_distances()
    checks = 0
    previous = None
    for a in subset_masks:
        ints = {g: interior_mask(space, a, g) for g in grades}
        clos = {g: closure_mask(space, a, g) for g in grades}
        assert ints[Fraction(0)] == a                                    # (iii)
        for e in grades:
            ie, ce = ints[e], clos[e]
            assert ie & a == ie                                          # (iv)
            assert a & ce == a                                           # (vi)
            interior_of_closure = interior_mask(space, ce, e)
            assert ce & interior_of_closure == ce                        # (vii)
            assert a & interior_of_closure == a                          # (ix)
            assert full ^ interior_mask(space, full ^ a, e) == ce        # (viii)
            for g in grades:
                if e >= g:
                    assert ints[e] & ints[g] == ints[e]                  # (i)
                assert interior_mask(space, ints[g], e) == ints[max(e, g)]  # (ii)
                checks += 1
        if previous is not None:
            b, prev_ints = previous
            for e in grades:
                assert interior_mask(space, a & b, e) == ints[e] & prev_ints[e]  # (v)
        previous = (a, ints)
    return checks


def _small_space_catalog() -> list[UltrametricSpace]:
    quarter, half, one = Fraction(1, 4), Fraction(1, 2), Fraction(1)
    five_a = UltrametricSpace.from_pairs(
        ["v0", "v1", "v2", "v3", "v4"],
        {
            ("v0", "v1"): quarter, ("v0", "v2"): half, ("v1", "v2"): half,
            ("v0", "v3"): one, ("v1", "v3"): one, ("v2", "v3"): one,
            ("v0", "v4"): one, ("v1", "v4"): one, ("v2", "v4"): one,
            ("v3", "v4"): Fraction(1, 8),
        },
    )
    five_b = random_ultrametric_space(random.Random(205), 5)
    catalog = [
        UltrametricSpace(["solo"], [[0]]),
        cantor_space(1),
        UltrametricSpace.from_pairs(
            ["a", "b", "c"], {("a", "b"): quarter, ("b", "c"): half, ("a", "c"): half}
        ),
        cantor_space(2),
        five_a,
        five_b,
    ]
    for s in catalog:
        assert validate_space(s) == []
    return catalog


def test_criterion_2_graded_identities(triangle_space):
    with criterion(2, "graded interior/closure identities, plus the non-ultrametric failure",
                   budget_seconds=60.0):
        checks = 0
        for space in _small_space_catalog():
            checks += _verify_graded_identities(space, range(1 << space.n))

        rng = random.Random(202)
        for _ in range(200):
            space = random_ultrametric_space(rng, 8)
            assert validate_space(space) == []
            subsets = [rng.randrange(1 << 8) for _ in range(500)]
            checks += _verify_graded_identities(space, subsets)
        assert checks > 100_000

        # The composition law (ii) is specific to the strong triangle
        # inequality: the flat (1/2, 1/2, 1) triangle falsifies it.
        s = triangle_space
        half = Fraction(1, 2)
        members = s.mask_of({"a", "b"})
        once = interior_mask(s, members, half)
        twice = interior_mask(s, once, half)
        assert once == s.mask_of({"a"})
        assert twice == 0
        assert twice != interior_mask(s, members, max(half, half))


def test_criterion_3_soundness():
    with criterion(3, "schema soundness with exhaustive valuations, rule preservation",
                   budget_seconds=300.0):
        rng = random.Random(303)
        spaces = [random_ultrametric_space(rng, rng.randint(2, 6), prefix=f"s{i}_")
                  for i in range(20)]
        for s in spaces:
            assert validate_space(s) == []
        grade_pools = [formula_grades(s) for s in spaces]

        verified: list[tuple[int, object]] = []
        for name in ("K", "T", "UM1", "TI", "UM2", "UM3", "D", "UM4"):
            for i in range(200):
                which = i % len(spaces)
                instance, _ = random_schema_instance(
                    rng, name, ("p", "q"), grade_pools[which], formula_depth=2
                )
                result = valid_in_model(spaces[which], instance)
                assert result.valid, (name, instance, result.witness)
                verified.append((which, instance))

        for _ in range(100):
            which, f = rng.choice(verified)
            eps = rng.choice(grade_pools[which])
            assert valid_in_model(spaces[which], Box(eps, f)).valid

        for _ in range(100):
            which, f = rng.choice(verified)
            candidates = [g for w, g in verified if w == which]
            g = rng.choice(candidates)
            assert valid_in_model(spaces[which], Implies(f, g)).valid
            assert valid_in_model(spaces[which], g).valid


def test_criterion_4_degree_consistency():
    with criterion(4, "degree thresholds predict box and diamond truth exactly"):
        rng = random.Random(404)
        checks = 0
        for _ in range(50):
            space = random_ultrametric_space(rng, rng.randint(2, 8))
            model = random_model(rng, space, ("p", "q"))
            grades = [g for g in space.realized_distances() if g <= 1]
            pool = formula_grades(space)
            for _ in range(10):
                f = random_formula(rng, ("p", "q"), pool, 3)
                for w in space.points:
                    stab = stability_degree(model, w, f)
                    plaus = plausibility_degree(model, w, f)
                    for eps in grades:
                        expect_box = stab.threshold is not None and (
                            stab.attained or eps < stab.threshold
                        )
                        expect_dia = plaus.threshold is not None and eps >= plaus.threshold
                        assert holds(model, w, Box(eps, f)) == expect_box
                        assert holds(model, w, Diamond(eps, f)) == expect_dia
                        checks += 2
        assert checks > 10_000


def test_criterion_5_preservation():
    with criterion(5, "union invariance (exhaustive to depth 3) and validity preservation",
                   budget_seconds=120.0):
        # Two structurally rich 4-point components: a full binary history
        # tree and a three-level chain with different distance values.
        rng = random.Random(505)
        chain = UltrametricSpace.from_pairs(
            ["b0", "b1", "b2", "b3"],
            {
                ("b0", "b1"): Fraction(1, 8),
                ("b0", "b2"): Fraction(1, 3), ("b1", "b2"): Fraction(1, 3),
                ("b0", "b3"): Fraction(3, 4), ("b1", "b3"): Fraction(3, 4),
                ("b2", "b3"): Fraction(3, 4),
            },
        )
        components = [random_model(rng, cantor_space(2), ("p", "q")),
                      random_model(rng, chain, ("p", "q"))]
        invariance = check_union_invariance_exhaustive(components, max_depth=3)
        assert invariance.discrepancies == 0, invariance.first_witness
        assert invariance.samples > 100

        instances = [f for _, f in axiom_instances(Fraction(1, 2), Fraction(1, 4))]
        union3 = check_union_validity([cantor_space(2)] * 3, instances)
        assert union3.discrepancies == 0, union3.first_witness
        # The 3-copy union realizes distance 2, which no binary-history
        # truncation can (those cap at 1/2), yet validity carries over.
        union_space = disjoint_union([Model(cantor_space(2)) for _ in range(3)]).space
        assert Fraction(2) in union_space.realized_distances()
        assert max(cantor_space(2).realized_distances()) == Fraction(1, 2)

        subspaces = check_subspace_validity(cantor_space(3), instances)
        assert subspaces.discrepancies == 0, subspaces.first_witness


def test_criterion_6_morphism_suite():
    with criterion(6, "morphism acceptance, satisfaction transfer, two-sided bounds"):
        rng = random.Random(606)
        space = cantor_space(2)
        src = random_model(rng, space, ("p", "q"))
        formulas = [
            random_formula(rng, ("p", "q"), formula_grades(space), 3) for _ in range(100)
        ]

        identity = PointMap({p: p for p in space.points})
        report = check_morphism_transfer(src, src, identity, formulas)
        assert report.discrepancies == 0 and report.samples >= 100

        swap = {p: ("1" if p[0] == "0" else "0") + p[1:] for p in space.points}
        swapped = Model(space, {a: {swap[p] for p in members}
                                for a, members in src.valuation.items()})
        swap_map = PointMap(swap)
        report = check_morphism_transfer(src, swapped, swap_map, formulas)
        assert report.discrepancies == 0

        for pm in (identity, swap_map):
            bounds = bilipschitz_bounds(space, space, pm)
            assert bounds.ok and bounds.tightest_k == 1

        trunc = PointMap({p: p[:3] for p in cantor_space(4).points})
        frame = check_frame_morphism(cantor_space(4), cantor_space(3), trunc)
        assert frame.ok
        bounds = bilipschitz_bounds(cantor_space(4), cantor_space(3), trunc)
        assert not bounds.ok and "bijection" in bounds.reason


# One deliberately broken justification per line; each must be rejected at
# exactly the line it corrupts.
_MUTATIONS = {
    1: {"by": "axiom:T"},
    2: {"by": "axiom:UM2"},
    3: {"by": "mp:2,1"},
    4: {"by": "axiom:K"},
    5: {"by": "mp:4,3"},
    6: {"by": "nec:2:1/4"},
    7: {"by": "axiom:UM3"},
    8: {"by": "mp:7,5"},
    9: {"by": "axiom:UM1"},
    10: {"by": "nec:8:1/4"},
}


def test_criterion_7_proof_checker():
    with criterion(7, "bundled derivation accepted, every mutation rejected at its line"):
        source = json.loads((DATA / "stability_chain.json").read_text())
        assert len(source) == 10
        verdict = check_proof(proof_from_json(source))
        assert verdict.accepted

        for number, patch in _MUTATIONS.items():
            mutated = json.loads(json.dumps(source))
            entry = next(e for e in mutated if e["n"] == number)
            entry.update(patch)
            bad = check_proof(proof_from_json(mutated))
            assert not bad.accepted, f"mutation of line {number} was accepted"
            assert bad.failed_line == number, (
                f"mutation of line {number} rejected at line {bad.failed_line}"
            )

        rng = random.Random(707)
        theorems = [line for line in proof_from_json(source).lines
                    if line.number in verdict.theorem_lines]
        assert [line.number for line in theorems] == [2, 4, 6, 7, 9]
        for line in theorems:
            for _ in range(20):
                space = random_ultrametric_space(rng, rng.randint(2, 4))
                result = valid_in_model(space, line.formula)
                assert result.valid, (line.number, result.witness)
