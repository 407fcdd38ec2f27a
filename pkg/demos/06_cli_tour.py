"""Driving the command line front-end over the bundled fixture documents.

Run with: python3 demos/06_cli_tour.py
"""

import json

from bigiso import fixtures
from bigiso.cli import main

print("bundled fixtures:", ", ".join(fixtures.list_fixtures()))

# The CLI prints a JSON report and exits 0/1/2. Running in-process here.
import contextlib
import io


def run(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, json.loads(buf.getvalue())


code, report = run("integrability", "--fixture", "example_r3")
print("\nintegrability of the Q^3 example -> exit", code)
for check in report["checks"]:
    print(f"  {check['name']}: {check['verdict']}")

code, report = run("integrability", "--fixture", "example_theta_nonintegrable")
print("\nnon-integrable graph fixture -> exit", code)
fail = [c for c in report["checks"] if c["verdict"] == "fail"][0]
print("  certificate:", fail["certificate"]["failures"][0]["detail"])

code, _ = run("decomposable", "--fixture", "example_r5")
print("\ndecomposable (original chart) -> exit", code)
code, _ = run("decomposable", "--fixture", "example_r5_tilde")
print("decomposable (sheared chart) -> exit", code)

code, report = run("reduce", "--fixture", "example_reduction")
pipeline = [c for c in report["checks"] if c["name"] == "reduction pipeline"][0]
print("\nreduction fixture -> exit", code)
print("  quotient chart:", pipeline["certificate"]["quotient_chart"])
print("  quotient frame:", pipeline["certificate"]["quotient_frame_E"])
