"""From projective-system data to equation matrices, then back to solutions.

The input files under data/systems describe modules by nested kernel bases.
Each one yields a family of matrices A_k with delta^(k)(Y) = A_k Y.
"""

from pathlib import Path

from qiter.idqmod import check_solution, consistency_check, equations_from_system, load_system
from qiter.matrix import Matrix
from qiter.ratfunc import parse

def show(A):
    return [[str(x) for x in row] for row in A.rows]


DATA = Path(__file__).resolve().parent.parent / "data" / "systems"

for name in ("rank1_p5.json", "unipotent_p2.json", "rank1_char0_n3.json"):
    fam = equations_from_system(load_system(DATA / name))
    print(f"{name}: kind={fam.kind}, levels={fam.index_set}")
    if fam.kind == "charp":
        for k, A in enumerate(fam.Atilde):
            print(f"  level n*p^{k}: {show(A)}")
    else:
        print("  A_n =", show(fam.An))
    rep = consistency_check(fam)
    print(f"  consistent up to {rep.bound}: {rep.ok}")

# a rank-1 char-p family solved by a single monomial
fam = equations_from_system(load_system(DATA / "rank1_p5.json"))
A = 2 * (1 + 3 * 5 + 2 * 25 + 4 * 125)  # n times the digit value
Y = Matrix([[parse(fam.ctx, f"t^{A}")]], fam.ctx.tower)
print(f"t^{A} solves the p=5 family:", check_solution(fam, Y))
print("t^2 does not:", check_solution(fam, Matrix([[parse(fam.ctx, "t^2")]], fam.ctx.tower)))
