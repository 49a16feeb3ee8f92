import os
from pathlib import Path

import pytest

import enigma

FIXTURES = Path(os.environ.get("ENIGMA_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


def test_features_of_equality_literal():
    sig = enigma.Signature()
    c = enigma.parse_clause("f(X,Y) = g(sko1,sko2(X))", sig)
    assert c.length == 8
    assert enigma.literal_features(c) == {
        ("⊕", "=", "f"): 1,
        ("⊕", "=", "g"): 1,
        ("=", "f", "⊛"): 2,
        ("=", "g", "⊙"): 2,
        ("g", "⊙", "⊛"): 1,
    }
    sig.freeze()
    base = len(sig) + 1
    assert enigma.feature_index(("⊕", "=", "f"), sig) == 2 * base**2 + sig.lookup("=") * base + sig.lookup("f") + 1
    assert enigma.feature_dimension(sig) == base**3


def test_weights():
    assert enigma.weight(10, True, 0.2) == pytest.approx(3.0)
    assert enigma.weight(10, False, 0.0) == 10.0
    assert (enigma.preweight(True), enigma.preweight(False)) == (1.0, 10.0)


def test_prove_train_and_guided_rerun():
    problem = enigma.load_problem(FIXTURES / "corpus" / "chain00.p")
    record = enigma.prove(problem)
    assert record.outcome == "proof_found"
    assert record.strategy == "1*FIFO,4*SymbolCount"
    positives, negatives = enigma.extract_examples(record)
    assert len(positives) + len(negatives) == len(set(record.given))
    assert {c.id for c in positives} <= set(record.proof())
    problem.signature.freeze()
    model = enigma.train(positives, negatives, problem.signature)
    assert all(model.predict(c) == 1 for c in positives)
    strategy = enigma.parse_strategy("Learned(self,gamma=0.2)", {"self": model})
    assert str(strategy) == "1*Learned(self,gamma=0.2)"
    again = enigma.prove(problem, strategy)
    assert again.outcome == "proof_found"
    assert again.processed <= record.processed


def test_strategy_text():
    s = enigma.parse_strategy("2*FIFO+baseline")
    assert str(s) == "2*FIFO,1*FIFO,4*SymbolCount"
    assert s.cycle_length == 7
    assert [s.cef_at(k) for k in range(3)] == ["FIFO", "FIFO", "FIFO"]
    with pytest.raises(enigma.EnigmaError):
        enigma.parse_strategy("Bogus")


def test_greedy_cover():
    assert enigma.greedy_cover([{1, 2, 3}, {3, 4}, {4}]) == [0, 1]


def test_errors_are_enigma_errors():
    with pytest.raises(enigma.EnigmaError):
        enigma.parse_problem("cnf(a, axiom, p(X).")
    with pytest.raises(enigma.EnigmaError, match="empty class"):
        enigma.train([], [], enigma.Signature())


def test_record_json():
    problem = enigma.parse_problem("cnf(a, axiom, p).\ncnf(b, negated_conjecture, ~p).\n", "tiny")
    record = enigma.prove(problem)
    assert '"outcome": "proof_found"' in record.to_json()
    assert record.empty_clause is not None
