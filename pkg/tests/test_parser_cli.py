import json
from fractions import Fraction

import pytest

from bigiso import fixtures
from bigiso.calculus import Chart
from bigiso.cli import main
from bigiso.parser import ParseError, parse_document, parse_expression
from bigiso.scalars import Polynomial


class TestExpressionParser:
    def setup_method(self):
        self.chart = Chart(("x1", "x2"))

    def test_basic_polynomial(self):
        p = parse_expression(self.chart, "x1*x2 + 3/2")
        assert p == (
            Polynomial.variable(("x1", "x2"), "x1") * Polynomial.variable(("x1", "x2"), "x2")
            + Polynomial.constant(("x1", "x2"), Fraction(3, 2))
        )

    def test_cancellation_to_zero(self):
        assert parse_expression(self.chart, "x1^2 - x1^2").is_zero()

    def test_non_constant_divisor_rejected(self):
        with pytest.raises(ParseError) as err:
            parse_expression(self.chart, "x2/x1")
        assert "non-constant divisor" in str(err.value)

    def test_unknown_coordinate(self):
        with pytest.raises(ParseError) as err:
            parse_expression(self.chart, "x1 + y")
        assert "unknown coordinate" in str(err.value)
        assert err.value.col == 6

    def test_precedence_and_unary(self):
        p = parse_expression(self.chart, "-x1 + 2*x2^2")
        q = -Polynomial.variable(("x1", "x2"), "x1") + 2 * Polynomial.variable(("x1", "x2"), "x2") ** 2
        assert p == q

    def test_parentheses(self):
        p = parse_expression(self.chart, "(x1 + x2)^2")
        q = (Polynomial.variable(("x1", "x2"), "x1") + Polynomial.variable(("x1", "x2"), "x2")) ** 2
        assert p == q

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_expression(self.chart, "x1 + @")
        assert err.value.col == 6

    def test_print_parse_round_trip(self):
        import random

        rng = random.Random(17)
        for _ in range(40):
            terms = {}
            for _ in range(rng.randint(0, 5)):
                exps = (rng.randint(0, 3), rng.randint(0, 3))
                terms[exps] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            p = Polynomial(("x1", "x2"), terms)
            assert parse_expression(self.chart, str(p)) == p


class TestDocumentParser:
    def test_full_document(self):
        doc = parse_document(fixtures.fixture_text("example_r5"))
        assert doc.chart.names == ("x1", "x2", "y1", "y2", "z")
        assert len(doc.e_sections) == 3
        assert len(doc.e_prime_sections) == 7
        assert doc.adapted_split == (("x1", "x2"), ("y1", "y2"), ("z",))

    def test_reduction_document(self):
        doc = parse_document(fixtures.fixture_text("example_reduction"))
        assert doc.submanifold_equations is not None
        assert doc.foliation_names == ("x3",)

    def test_hamiltonian_pairs(self):
        doc = parse_document(fixtures.fixture_text("example_symplectic"))
        assert [p.name for p in doc.hamiltonian_pairs] == ["p1", "q1", "mixed"]

    def test_missing_chart(self):
        with pytest.raises(ParseError):
            parse_document("E:\n  (1 | 0)\n")

    def test_component_count_mismatch(self):
        text = "chart x y\nE:\n  (1, 0 | 0)\n"
        with pytest.raises(ParseError) as err:
            parse_document(text)
        assert "components" in str(err.value)

    def test_unknown_line(self):
        with pytest.raises(ParseError):
            parse_document("chart x\nnonsense here\n")


class TestCli:
    def run(self, *argv, tmp_path=None):
        import io
        from contextlib import redirect_stdout

        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(list(argv))
        return code, buf.getvalue()

    def test_integrability_pass(self):
        code, out = self.run("integrability", "--fixture", "example_r3")
        assert code == 0
        payload = json.loads(out)
        assert payload["summary"]["ok"] is True
        names = [c["name"] for c in payload["checks"]]
        assert "integrability" in names

    def test_integrability_fail_with_certificate(self):
        code, out = self.run("integrability", "--fixture", "example_theta_nonintegrable")
        assert code == 1
        payload = json.loads(out)
        fail = [c for c in payload["checks"] if c["name"] == "integrability"][0]
        assert fail["verdict"] == "fail"
        assert fail["certificate"]["failures"]
        assert "minor" in fail["certificate"]["failures"][0]["detail"]

    def test_decomposable_both_charts(self):
        code_orig, _ = self.run("decomposable", "--fixture", "example_r5")
        code_tilde, _ = self.run("decomposable", "--fixture", "example_r5_tilde")
        assert code_orig == 1
        assert code_tilde == 0

    def test_canonical_r3(self):
        code, out = self.run("canonical", "--fixture", "example_r3")
        assert code == 0
        payload = json.loads(out)
        frame = [c for c in payload["checks"] if c["name"] == "canonical normalization"][0]
        assert frame["certificate"]["frame"]["X"] == [["1", "0", "0", "0", "0", "0"]]

    def test_transversal_r5(self):
        code, out = self.run("transversal", "--fixture", "example_r5")
        assert code == 0
        payload = json.loads(out)
        tr = [c for c in payload["checks"] if c["name"] == "transversal structure"][0]
        assert tr["certificate"]["chart"] == ["y1", "y2", "z"]
        assert tr["certificate"]["frame_E"] == [["0", "0", "0", "0", "0", "1"]]

    def test_reduce_fixture(self):
        code, out = self.run("reduce", "--fixture", "example_reduction")
        assert code == 0
        payload = json.loads(out)
        red = [c for c in payload["checks"] if c["name"] == "reduction pipeline"][0]
        assert red["certificate"]["quotient_chart"] == ["x1", "x2"]
        assert red["certificate"]["poisson_condition"] is True

    def test_input_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.bis"
        bad.write_text("chart x\nE:\n  (y | 0)\n")
        code, out = self.run("validate", str(bad))
        assert code == 2
        payload = json.loads(out)
        assert payload["errors"]

    def test_missing_file(self):
        code, out = self.run("validate", "/nonexistent/path.bis")
        assert code == 2

    def test_report_all_deterministic(self):
        _, out1 = self.run("report-all", "--fixture", "example_r3", "--seed", "7")
        _, out2 = self.run("report-all", "--fixture", "example_r3", "--seed", "7")
        assert out1 == out2

    def test_report_all_every_fixture(self):
        expectations = {
            "example_theta_nonintegrable": 1,  # integrability fails
            "example_r5": 1,  # decomposability fails in these coordinates
        }
        for name in fixtures.list_fixtures():
            code, out = self.run("report-all", "--fixture", name)
            expected = expectations.get(name, 0)
            assert code == expected, f"{name}: exit {code}, expected {expected}\n{out}"
            # determinism across runs
            _, out2 = self.run("report-all", "--fixture", name)
            assert out == out2, name

    def test_output_file(self, tmp_path):
        target = tmp_path / "report.json"
        code, out = self.run(
            "integrability", "--fixture", "example_r3", "--output", str(target)
        )
        assert code == 0
        assert json.loads(target.read_text())["summary"]["ok"] is True

    def test_validate_hamiltonian_pairs(self):
        code, out = self.run("validate", "--fixture", "example_symplectic")
        assert code == 0
        payload = json.loads(out)
        ham = [c for c in payload["checks"] if c["name"].startswith("hamiltonian")]
        assert len(ham) == 3
        assert all(c["certificate"]["hamiltonian"] for c in ham)

    def test_grid_flag(self):
        code, _ = self.run("integrability", "--fixture", "example_r3", "--grid=-1..1:8")
        assert code == 0
