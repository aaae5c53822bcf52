from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hollowspec.blowup import build_blowup, decompose_blowup
from hollowspec.errors import ParseError, ThresholdParseError
from hollowspec.exactnum import Ordering, compare_thresholds, lambda_prime, lambda_star, threshold_from_rational, threshold_sqrt
from hollowspec.formats import (
    certificate_from_record,
    certificate_record,
    decomposition_record,
    dumps,
    format_hsm,
    format_sg,
    frontier_record,
    load_subject,
    parse_hsm,
    parse_sg,
    parse_threshold,
    read_certificates,
    threshold_from_record,
    threshold_record,
)
from hollowspec.matrixcore import HollowSymMatrix
from hollowspec.search import certify_graph, certify_matrix, frontier_blowups, random_matrix
from hollowspec.signedgraph import SignedGraph, random_signed_graph


class TestHsm:
    def test_round_trip(self):
        rng = random.Random(1)
        for _ in range(50):
            A = random_matrix(rng, rng.randint(1, 6), 5)
            assert parse_hsm(format_hsm(A)) == A

    def test_comments_and_blank_lines(self):
        A = parse_hsm("# a matrix\n2\n\n0 3\n3 0  # row two\n")
        assert A.rows == ((0, 3), (3, 0))

    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("", 1, "empty"),
            ("x\n", 1, "order"),
            ("2\n0 1\n", 2, "expected 2 matrix rows"),
            ("2\n0 1\n1 0 0\n", 3, "row 2 has 3 entries"),
            ("2\n0 1\n2 0\n", 3, "differs"),
            ("2\n1 1\n1 0\n", 2, "diagonal"),
            ("2\n0 a\na 0\n", 2, "not an integer"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, fragment):
        with pytest.raises(ParseError) as exc:
            parse_hsm(text, "m.hsm")
        assert exc.value.line == line
        assert fragment in str(exc.value)
        assert str(exc.value).startswith(f"m.hsm:{line}:")


class TestSg:
    def test_round_trip(self):
        rng = random.Random(2)
        for _ in range(50):
            F = random_signed_graph(rng, rng.randint(1, 7))
            assert parse_sg(format_sg(F)) == F

    def test_sign_spellings(self):
        F = parse_sg("4 4\n1 2 +\n2 3 -\n3 4 1\n1 4 −1\n")
        assert F.sorted_edges() == [(0, 1, 1), (0, 3, -1), (1, 2, -1), (2, 3, 1)]

    @pytest.mark.parametrize(
        "text, line",
        [
            ("3\n", 1),
            ("3 1\n2 1 +\n", 2),
            ("3 1\n1 4 +\n", 2),
            ("3 1\n1 2 2\n", 2),
            ("3 2\n1 2 +\n1 2 -\n", 3),
            ("3 2\n1 2 +\n", 2),
        ],
    )
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_sg(text, "g.sg")
        assert exc.value.line == line

    def test_load_by_extension(self, tmp_path):
        (tmp_path / "a.hsm").write_text("2\n0 3\n3 0\n")
        (tmp_path / "g.sg").write_text("2 1\n1 2 -1\n")
        (tmp_path / "x.txt").write_text("")
        assert isinstance(load_subject(tmp_path / "a.hsm"), HollowSymMatrix)
        assert isinstance(load_subject(tmp_path / "g.sg"), SignedGraph)
        with pytest.raises(ParseError):
            load_subject(tmp_path / "x.txt")
        with pytest.raises(ParseError):
            load_subject(tmp_path / "missing.hsm")


class TestThresholdGrammar:
    def test_forms(self):
        assert parse_threshold("2").rational_value == 2
        assert parse_threshold("9/4").rational_value == Fraction(9, 4)
        assert compare_thresholds(parse_threshold("sqrt:5"), threshold_sqrt(5)) is Ordering.EQUAL
        assert parse_threshold("star") == lambda_star()
        assert parse_threshold("prime") == lambda_prime()

    def test_perfect_square_becomes_rational(self):
        assert parse_threshold("sqrt:9").rational_value == 3

    @pytest.mark.parametrize("bad", ["", "abc", "0", "-2", "1/0", "sqrt:", "sqrt:x", "sqrt:1", "2.5", "sqrt:-5"])
    def test_rejects(self, bad):
        with pytest.raises(ThresholdParseError):
            parse_threshold(bad)

    @given(st.sampled_from(["2", "21/10", "sqrt:5", "sqrt:7", "star", "prime", "1009/500"]))
    def test_record_round_trip(self, expr):
        t = parse_threshold(expr)
        back = threshold_from_record(json.loads(dumps(threshold_record(t))))
        assert compare_thresholds(back, t) is Ordering.EQUAL


class TestRecords:
    def test_certificate_round_trip(self):
        two = threshold_from_rational(2)
        certs = [
            certify_matrix(HollowSymMatrix(((0, 2, 1), (2, 0, 0), (1, 0, 0))), two),
            certify_graph(SignedGraph.star(5), lambda_star()),
            certify_matrix(HollowSymMatrix(((0, 3, 0), (3, 0, 0), (0, 0, 0))), two),
        ]
        text = "".join(dumps(certificate_record(c)) + "\n" for c in certs)
        back = read_certificates(text)
        assert [b.verdict for b in back] == [c.verdict for c in certs]
        assert [b.subject for b in back] == [c.subject for c in certs]
        assert [b.evidence for b in back] == [c.evidence for c in certs]
        assert certificate_record(certificate_from_record(certificate_record(certs[0]))) == certificate_record(certs[0])

    def test_evidence_is_one_based(self):
        rec = certificate_record(certify_matrix(HollowSymMatrix(((0, 3), (3, 0))), threshold_from_rational(2)))
        assert [i for i, _ in rec["evidence"]] == [1, 2]

    def test_bad_record_line(self):
        with pytest.raises(ParseError) as exc:
            read_certificates('\n{"type": "certificate"}\n', "r.jsonl")
        assert exc.value.line == 2

    def test_decomposition_record(self):
        F = SignedGraph(2, frozenset({(0, 1, -1)}))
        rec = decomposition_record(decompose_blowup(build_blowup(F, (2, 1))))
        assert rec["graph"] == "2 1\n1 2 -1\n"
        assert rec["multiplicities"] == "1:2 2:1"
        assert rec["switching"] == "+++"

    def test_frontier_record_carries_certificates(self):
        res = frontier_blowups(SignedGraph.star(5), threshold_from_rational(Fraction(21, 10)), 3)
        rec = json.loads(dumps(frontier_record(res)))
        assert rec["closed"] and rec["minimal_bad"] == [[1] * 6]
        assert len(read_certificates(dumps(rec))) == 1
