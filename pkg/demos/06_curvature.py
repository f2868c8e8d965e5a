"""Surveying the pi_v-curvature of delta^(n)(y) = (a/t^n) y over many primes.

Reducing at a place v over p and iterating p times gives a matrix that
vanishes when the equation looks trivial mod v.  For a = sqrt 2 that happens
exactly where 2 is a square mod p.
"""

from pathlib import Path

from qiter.curvature import isotriviality_survey, load_curvature_input, parse_primes

DATA = Path(__file__).resolve().parent.parent / "data" / "modules"

inp = load_curvature_input(DATA / "sqrt2.json")
report = isotriviality_survey(inp, parse_primes("3..60"))
for row in report["places"]:
    flag = "ok " if row["status"] == "vanishes" else "-- "
    print(flag, row["p"], row["factor"], row["status"], row.get("witness", ""))
print(report["summary"]["verdict"])
print(report["summary"]["counts"])

inp = load_curvature_input(DATA / "a2.json")
report = isotriviality_survey(inp, parse_primes("3..60"))
print("a = 2:", report["summary"]["verdict"], report["summary"]["counts"])
