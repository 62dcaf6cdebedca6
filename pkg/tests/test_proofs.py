from fractions import Fraction
from pathlib import Path

import pytest

from umlogic.formula import Atom
from umlogic.parser import parse
from umlogic.proofs import (
    AxiomStep,
    MP,
    Nec,
    Premise,
    Proof,
    ProofFormatError,
    ProofLine,
    check_proof,
    load_proof,
    proof_from_json,
    verdict_to_dict,
)

DATA = Path(__file__).parent / "data"


def line(n, text, just):
    return ProofLine(n, parse(text), just)


class TestCheckProof:
    def test_necessitation_of_an_axiom(self):
        proof = Proof([
            line(1, "[1/2]p -> p", AxiomStep("T")),
            line(2, "[1/2]([1/2]p -> p)", Nec(1, Fraction(1, 2))),
        ])
        verdict = check_proof(proof)
        assert verdict.accepted
        assert verdict.theorem_lines == (1, 2)

    def test_recovery_from_premise(self):
        proof = Proof([
            line(1, "q", Premise()),
            line(2, "q -> [1/4]<1/4>q", AxiomStep("UM4", {"eps": "1/4", "phi": Atom("q")})),
            line(3, "[1/4]<1/4>q", MP(1, 2)),
        ])
        verdict = check_proof(proof)
        assert verdict.accepted
        assert verdict.theorem_lines == (2,)

    def test_mp_citing_a_non_implication(self):
        proof = Proof([
            line(1, "p", Premise()),
            line(2, "q", Premise()),
            line(3, "p & q", MP(1, 2)),
        ])
        verdict = check_proof(proof)
        assert not verdict.accepted
        assert verdict.failed_line == 3
        assert "implication" in verdict.reason

    def test_mp_accepts_desugared_implication(self):
        proof = Proof([
            line(1, "p", Premise()),
            line(2, "~(p & ~q)", Premise()),
            line(3, "q", MP(1, 2)),
        ])
        assert check_proof(proof).accepted

    def test_axiom_step_with_wrong_bindings(self):
        proof = Proof([
            line(1, "[1/2]p -> p", AxiomStep("T", {"eps": "1/4", "phi": Atom("p")})),
        ])
        verdict = check_proof(proof)
        assert not verdict.accepted
        assert verdict.failed_line == 1
        assert "[1/4]p -> p" in verdict.reason

    def test_axiom_step_with_wrong_schema(self):
        proof = Proof([line(1, "[1/2]p -> p", AxiomStep("K"))])
        verdict = check_proof(proof)
        assert (verdict.accepted, verdict.failed_line) == (False, 1)

    def test_nec_grade_must_match(self):
        proof = Proof([
            line(1, "p | ~p", Premise()),
            line(2, "[1/2](p | ~p)", Nec(1, Fraction(1, 4))),
        ])
        verdict = check_proof(proof)
        assert (verdict.accepted, verdict.failed_line) == (False, 2)

    def test_citing_a_later_line(self):
        proof = Proof([
            line(1, "[1/4]<1/4>q", MP(2, 3)),
            line(2, "q", Premise()),
        ])
        verdict = check_proof(proof)
        assert (verdict.accepted, verdict.failed_line) == (False, 1)
        assert "does not exist earlier" in verdict.reason

    def test_line_numbers_must_increase(self):
        proof = Proof([
            line(2, "p", Premise()),
            line(2, "p", Premise()),
        ])
        verdict = check_proof(proof)
        assert (verdict.accepted, verdict.failed_line) == (False, 2)

    def test_premise_taint_propagates_through_nec(self):
        proof = Proof([
            line(1, "p", Premise()),
            line(2, "[1/8]p", Nec(1, Fraction(1, 8))),
        ])
        verdict = check_proof(proof)
        assert verdict.accepted
        assert verdict.theorem_lines == ()


class TestBundledDerivation:
    def test_accepted_with_expected_theorems(self):
        verdict = check_proof(load_proof(DATA / "stability_chain.json"))
        assert verdict.accepted
        assert verdict.theorem_lines == (2, 4, 6, 7, 9)

    def test_verdict_dict_shape(self):
        verdict = check_proof(load_proof(DATA / "stability_chain.json"))
        payload = verdict_to_dict(verdict)
        assert payload == {
            "accepted": True,
            "failed_line": None,
            "reason": None,
            "theorems": [2, 4, 6, 7, 9],
        }


class TestJsonParsing:
    def test_malformed_by_string(self):
        with pytest.raises(ProofFormatError, match="justification"):
            proof_from_json([{"n": 1, "formula": "p", "by": "mp:one,2"}])

    def test_unknown_by_string(self):
        with pytest.raises(ProofFormatError):
            proof_from_json([{"n": 1, "formula": "p", "by": "induction"}])

    def test_bad_line_number(self):
        with pytest.raises(ProofFormatError, match='"n"'):
            proof_from_json([{"n": 0, "formula": "p", "by": "premise"}])

    def test_bad_formula(self):
        with pytest.raises(ProofFormatError, match="entry 0"):
            proof_from_json([{"n": 1, "formula": "p &", "by": "premise"}])

    def test_unknown_binding_key(self):
        with pytest.raises(ProofFormatError, match="binding"):
            proof_from_json([
                {"n": 1, "formula": "[1/2]p -> p", "by": "axiom:T", "bind": {"zeta": "1/2"}},
            ])

    def test_bad_nec_grade(self):
        with pytest.raises(ProofFormatError):
            proof_from_json([{"n": 1, "formula": "[2]p", "by": "nec:1:2"}])

    def test_not_an_array(self):
        with pytest.raises(ProofFormatError, match="array"):
            proof_from_json({"n": 1})

    def test_bad_json_file(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("not json")
        with pytest.raises(ProofFormatError):
            load_proof(path)
