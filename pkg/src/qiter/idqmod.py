"""Iterative q-difference modules as matrix data.

Conventions (fixed for the whole package):

* Coordinates are columns.  A module is given on a basis B by matrices N_k with
  ``delta_M^(k)(B x) = B * sum_{i+j=k} N_i sigma^i(delta^(j)(x))`` and N_0 = I.
* An equation family stores matrices A_k with ``delta^(k)(Y) = A_k Y`` for the
  levels k of its index set: {1, n} in characteristic 0 (plus the intermediate
  levels 2..n-1), {1} and {n p^k : k <= Kmax} in characteristic p.
* ``sigma(Y) = S Y`` with ``S = I + (q - 1) t A_1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .exactfield import tower_from_config, tower_to_config
from .matrix import DimensionMismatch, Matrix, SingularMatrix
from .qarith import QContext, make_context, q_binom
from .ratfunc import RatFunc, delta, parse, parse_element

__all__ = [
    "EquationFamily",
    "ProjectiveSystemData",
    "ModuleRep",
    "ConsistencyReport",
    "SingularD",
    "NotInKernel",
    "MissingLevel",
    "ContextMismatch",
    "SingularPhi",
    "equations_from_system",
    "equations_from_system_charp",
    "equations_from_system_char0",
    "check_solution",
    "sigma_matrix",
    "consistency_check",
    "tensor",
    "dual",
    "n_to_a",
    "load_system",
    "load_family",
    "family_to_json",
    "context_from_json",
]


class SingularD(ValueError):
    pass


class NotInKernel(ValueError):
    """A D_k or C_n entry is not killed by the operators its level requires."""


class MissingLevel(KeyError):
    pass


class ContextMismatch(ValueError):
    pass


class SingularPhi(ValueError):
    pass


def _gen_levels(ctx: QContext, kind: str, Kmax: int | None) -> list[int]:
    n = ctx.n
    if kind == "char0":
        return [1, n]
    return [1] + [n * ctx.p**k for k in range(Kmax + 1)]


@dataclass
class EquationFamily:
    """Matrices A_k of delta^(k)(Y) = A_k Y on the stored levels."""

    ctx: QContext
    dim: int
    kind: str
    levels: dict
    Kmax: int | None = None

    def __post_init__(self):
        if self.kind not in ("char0", "charp"):
            raise ValueError("kind must be 'char0' or 'charp'")
        if self.kind == "charp":
            if not self.ctx.p:
                raise ValueError("a charp family needs a characteristic-p context")
            if self.Kmax is None:
                raise ValueError("charp family needs Kmax")
        elif self.ctx.p:
            raise ValueError("a char0 family needs a characteristic-0 context")
        for k in self.index_set:
            if k not in self.levels:
                raise MissingLevel(k)
        for k, A in self.levels.items():
            if A.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"level {k} has shape {A.shape}")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def index_set(self) -> list[int]:
        return _gen_levels(self.ctx, self.kind, self.Kmax)

    @property
    def A1(self) -> Matrix:
        return self.levels[1]

    @property
    def An(self) -> Matrix:
        return self.levels[self.ctx.n]

    @property
    def Atilde(self) -> list[Matrix]:
        if self.kind != "charp":
            raise AttributeError("Atilde is only defined in characteristic p")
        return [self.levels[self.ctx.n * self.p**k] for k in range(self.Kmax + 1)]

    def intermediates(self) -> dict:
        return {k: A for k, A in self.levels.items() if 1 < k < self.ctx.n}


@dataclass
class ProjectiveSystemData:
    """D_0, D_1, ... (and C_n in characteristic 0) describing a module by nested bases."""

    ctx: QContext
    kind: str
    D: list
    Cn: Matrix | None = None

    @property
    def dim(self) -> int:
        return self.D[0].shape[0]

    @property
    def Kmax(self) -> int:
        return len(self.D) - 2

    def validate(self) -> None:
        ctx = self.ctx
        m = self.dim
        for k, Dk in enumerate(self.D):
            if Dk.shape != (m, m):
                raise DimensionMismatch(f"D_{k} has shape {Dk.shape}")
            if not Dk.det():
                raise SingularD(f"D_{k} is not invertible")
        if self.kind == "charp":
            if len(self.D) < 2:
                raise ValueError("need at least D_0 and D_1")
            n, p = ctx.n, ctx.p
            # D_k must lie in the kernel of delta^(j) for 0 < j < n p^(k-1); by the
            # composition law it is enough to test j = 1 and j = n p^i, i < k-1
            for k in range(1, len(self.D)):
                orders = [1] + [n * p**i for i in range(k - 1)]
                for x in self.D[k].entries():
                    for j in orders:
                        if delta(ctx, j, x):
                            raise NotInKernel(f"entry {x} of D_{k} has delta^({j}) != 0")
        else:
            if self.Cn is None:
                raise ValueError("a char0 system needs C_n")
            if self.Cn.shape != (m, m):
                raise DimensionMismatch("C_n has the wrong shape")
            for x in self.Cn.entries():
                if delta(ctx, 1, x):
                    raise NotInKernel(f"entry {x} of C_n has delta^(1) != 0")


def equations_from_system_charp(sys: ProjectiveSystemData) -> EquationFamily:
    """A_1 = delta^(1)(D_0) D_0^-1 and Atilde_k = delta^(np^k)(D_0...D_{k+1}) (D_0...D_{k+1})^-1."""
    if sys.kind != "charp":
        raise ValueError("not a characteristic-p system")
    sys.validate()
    ctx = sys.ctx
    n, p = ctx.n, ctx.p
    D = sys.D
    levels = {1: D[0].delta(ctx, 1) * D[0].inverse()}
    prod = D[0]
    for k in range(sys.Kmax + 1):
        prod = prod * D[k + 1]
        levels[n * p**k] = prod.delta(ctx, n * p**k) * prod.inverse()
    return EquationFamily(ctx, sys.dim, "charp", levels, sys.Kmax)


def equations_from_system_char0(sys: ProjectiveSystemData) -> EquationFamily:
    """A_1, the intermediate A_2..A_{n-1}, and A_n from D_0 and C_n."""
    if sys.kind != "char0":
        raise ValueError("not a characteristic-0 system")
    sys.validate()
    ctx = sys.ctx
    n, q = ctx.n, ctx.q
    D0 = sys.D[0]
    D0inv = D0.inverse()
    m = sys.dim
    A = {0: Matrix.identity(ctx.tower, m), 1: D0.delta(ctx, 1) * D0inv}
    for k in range(1, n - 1):
        num = A[k].delta(ctx, 1) + A[k].sigma(ctx) * A[1]
        A[k + 1] = num * RatFunc.constant(ctx.tower, (q - 1) / (q ** (k + 1) - 1))
    An = -(D0 * sys.Cn * D0inv)
    for k in range(n):
        An = An - D0 * D0inv.delta(ctx, n - k).sigma(ctx, k) * A[k]
    A[n] = An
    del A[0]
    return EquationFamily(ctx, m, "char0", A)


def equations_from_system(sys: ProjectiveSystemData) -> EquationFamily:
    if sys.kind == "charp":
        return equations_from_system_charp(sys)
    return equations_from_system_char0(sys)


def check_solution(fam: EquationFamily, Y: Matrix) -> bool:
    """delta^(k)(Y) == A_k Y for each k of the index set."""
    if Y.shape[0] != fam.dim:
        raise DimensionMismatch(f"Y has {Y.shape[0]} rows, family has dimension {fam.dim}")
    return all(Y.delta(fam.ctx, k) == fam.levels[k] * Y for k in fam.index_set)


def failing_levels(fam: EquationFamily, Y: Matrix) -> list[int]:
    return [k for k in fam.index_set if Y.delta(fam.ctx, k) != fam.levels[k] * Y]


def sigma_matrix(fam: EquationFamily) -> Matrix:
    """S = (q - 1) t A_1 + I, so that sigma(y) = S y for solutions y."""
    ctx = fam.ctx
    c = RatFunc.t(ctx.tower) * RatFunc.constant(ctx.tower, ctx.q - 1)
    return Matrix.identity(ctx.tower, fam.dim) + fam.A1 * c


# --- consistency -------------------------------------------------------------------


@dataclass
class ConsistencyReport:
    """Violated relations found while checking levels up to ``bound``.

    Each violation is (level i, generator a): the relation
    delta^(a) o delta^(i-a) = (i over a)_q delta^(i) failed on solutions.
    """

    bound: int
    violations: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def levels(self) -> list[int]:
        return sorted({i for i, _ in self.violations})

    def to_json(self) -> dict:
        return {"ok": self.ok, "bound": self.bound, "checked": self.checked,
                "violations": [{"level": i, "generator": a} for i, a in self.violations]}


class _Ladder:
    """Matrices M_i with delta^(i)(Y) = M_i Y derived from a family's generators."""

    def __init__(self, fam: EquationFamily):
        self.fam = fam
        self.ctx = fam.ctx
        self.M = {0: Matrix.identity(fam.ctx.tower, fam.dim)}
        self.gens = fam.index_set

    def generator_for(self, i: int) -> int | None:
        """A generator a with (i over a)_q != 0 used to define M_i, or None."""
        ctx = self.ctx
        n = ctx.n
        if i % n:
            return 1
        m = i // n
        if not ctx.p:
            return n
        j = 0
        while m % ctx.p == 0:
            m //= ctx.p
            j += 1
        a = n * ctx.p**j
        return a if a in self.gens else None

    def apply(self, a: int, b: int) -> Matrix:
        """Matrix of delta^(a)(M_b Y) in terms of Y."""
        ctx = self.ctx
        Mb = self.M[b]
        out = Matrix.zero(ctx.tower, self.fam.dim)
        for u in range(a + 1):
            term = Mb.delta(ctx, a - u)
            if term.is_zero():
                continue
            out = out + term.sigma(ctx, u) * self.M[u]
        return out


def consistency_check(fam: EquationFamily, max_index: int | None = None) -> ConsistencyReport:
    """Check the composition law on solutions for all levels up to a bound.

    Every level i is reached from the stored generators (delta^(1) and the
    index set); for each generator a <= i we then require
    delta^(a)(M_(i-a) Y) = (i over a)_q M_i Y.  With a = 1 and i = n this is the
    terminal constraint delta^(1)(A_{n-1}) + sigma(A_{n-1}) A_1 = 0.
    """
    ctx = fam.ctx
    n = ctx.n
    if max_index is None:
        max_index = 2 * n + 1 if fam.kind == "char0" else min(n * ctx.p ** (fam.Kmax + 1), 64)
    lad = _Ladder(fam)
    report = ConsistencyReport(bound=max_index)
    stored = fam.levels
    for i in range(1, max_index + 1):
        a0 = None if i in stored else lad.generator_for(i)
        if i in stored:
            lad.M[i] = stored[i]
        elif a0 is not None:
            w = q_binom(ctx, i, a0)
            lad.M[i] = lad.apply(a0, i - a0) * RatFunc.constant(ctx.tower, w.inverse())
        for a in lad.gens:
            if a > i or (i - a) not in lad.M:
                continue
            if a == a0:
                continue
            w = q_binom(ctx, i, a)
            if i not in lad.M and w:
                continue
            lhs = lad.apply(a, i - a)
            rhs = lad.M[i] * RatFunc.constant(ctx.tower, w) if w else None
            report.checked += 1
            if (rhs is None and not lhs.is_zero()) or (rhs is not None and lhs != rhs):
                report.violations.append((i, a))
        if i not in lad.M:
            report.bound = i
            break
    return report


# --- operator form ----------------------------------------------------------------------


@dataclass
class ModuleRep:
    """Operator matrices N_0 = I, N_1, ..., N_bound on a basis."""

    ctx: QContext
    dim: int
    N: list

    @property
    def bound(self) -> int:
        return len(self.N) - 1

    @classmethod
    def unit(cls, ctx: QContext, bound: int) -> ModuleRep:
        I = Matrix.identity(ctx.tower, 1)
        Z = Matrix.zero(ctx.tower, 1)
        return cls(ctx, 1, [I] + [Z] * bound)

    @classmethod
    def from_fundamental(cls, ctx: QContext, Y: Matrix, bound: int) -> ModuleRep:
        """Module for which the columns of Y are solutions: N_k = Y delta^(k)(Y^-1)."""
        Yinv = Y.inverse()
        return cls(ctx, Y.shape[0], [Y * Yinv.delta(ctx, k) for k in range(bound + 1)])

    def phi_matrix(self) -> Matrix:
        """Phi with phi_M(B x) = B Phi sigma(x)."""
        ctx = self.ctx
        c = RatFunc.t(ctx.tower) * RatFunc.constant(ctx.tower, ctx.q - 1)
        return Matrix.identity(ctx.tower, self.dim) + self.level(1) * c

    def level(self, k: int) -> Matrix:
        if k > self.bound:
            raise MissingLevel(f"level {k} not stored (bound {self.bound})")
        return self.N[k]

    def apply(self, k: int, x: Matrix) -> Matrix:
        """Coordinates of delta_M^(k)(B x), column-wise for a matrix x."""
        ctx = self.ctx
        out = Matrix.zero(ctx.tower, self.dim, x.shape[1])
        for i in range(k + 1):
            d = x.delta(ctx, k - i)
            if not d.is_zero():
                out = out + self.level(i) * d.sigma(ctx, i)
        return out

    def composition_defects(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with delta_M^(i) o delta_M^(j) != (i+j over i)_q delta_M^(i+j) on the basis."""
        bad = []
        for i in range(1, self.bound + 1):
            for j in range(1, self.bound + 1 - i):
                lhs = self.apply(i, self.N[j])
                w = q_binom(self.ctx, i + j, i)
                if lhs != self.N[i + j] * RatFunc.constant(self.ctx.tower, w):
                    bad.append((i, j))
        return bad

    def solves(self, Y: Matrix) -> bool:
        """True if delta_M^(k)(B Y) = 0 for 1 <= k <= bound."""
        return all(self.apply(k, Y).is_zero() for k in range(1, self.bound + 1))


def _phi_powers(m: ModuleRep, count: int) -> list[Matrix]:
    """Phi^[j] = Phi sigma(Phi) ... sigma^(j-1)(Phi) for j < count."""
    ctx = m.ctx
    Phi = m.phi_matrix()
    out = [Matrix.identity(ctx.tower, m.dim)]
    for j in range(1, count):
        out.append(out[-1] * Phi.sigma(ctx, j - 1))
    return out


def tensor(m1: ModuleRep, m2: ModuleRep) -> ModuleRep:
    """delta^(k)(x (x) y) = sum_{i+j=k} phi^j(delta^(i)(x)) (x) delta^(j)(y) on basis vectors."""
    if m1.ctx != m2.ctx:
        raise ContextMismatch("modules over different contexts")
    ctx = m1.ctx
    bound = min(m1.bound, m2.bound)
    powers = _phi_powers(m1, bound + 1)
    N = []
    for k in range(bound + 1):
        acc = Matrix.zero(ctx.tower, m1.dim * m2.dim)
        for i in range(k + 1):
            j = k - i
            left = powers[j] * m1.N[i].sigma(ctx, j)
            if left.is_zero() or m2.N[j].is_zero():
                continue
            acc = acc + left.kron(m2.N[j])
        N.append(acc)
    return ModuleRep(ctx, m1.dim * m2.dim, N)


def dual(m: ModuleRep) -> ModuleRep:
    """Dual module on the dual basis.

    delta^(k)(f) = sum_{i+j=k} (-1)^i q^(i(i+1)/2) sigma^i o delta^(j) o f o delta_M^(i) o phi_M^(-i).
    """
    ctx = m.ctx
    tower = ctx.tower
    powers = _phi_powers(m, m.bound + 1)
    Z = []
    for i in range(m.bound + 1):
        try:
            inv = powers[i].inverse()
        except SingularMatrix:
            raise SingularPhi("phi_M is not invertible") from None
        # phi_M^(-i)(B e_c) = B W e_c
        W = inv.sigma(ctx, -i)
        Z.append(m.apply(i, W))
    N = []
    for k in range(m.bound + 1):
        acc = Matrix.zero(tower, m.dim)
        for i in range(k + 1):
            j = k - i
            c = ctx.qpow(i * (i + 1) // 2) * (-1 if i % 2 else 1)
            term = Z[i].delta(ctx, j).sigma(ctx, i)
            if not term.is_zero():
                acc = acc + term * RatFunc.constant(tower, c)
        N.append(acc.T)
    return ModuleRep(ctx, m.dim, N)


def _target_levels(ctx: QContext, kind: str, Kmax: int | None) -> int:
    if kind == "char0":
        return ctx.n
    return ctx.n * ctx.p**Kmax


def n_to_a(m: ModuleRep, kind: str | None = None, Kmax: int | None = None) -> EquationFamily:
    """Equation form of a module: solve sum_{i+j=k} N_i sigma^i(delta^(j)(Y)) = 0 for delta^(k)(Y) = A_k Y."""
    ctx = m.ctx
    tower = ctx.tower
    if kind is None:
        kind = "charp" if ctx.p else "char0"
    if kind == "charp" and Kmax is None:
        Kmax = 0
        while ctx.n * ctx.p ** (Kmax + 1) <= m.bound:
            Kmax += 1
    top = _target_levels(ctx, kind, Kmax)
    if top > m.bound:
        raise MissingLevel(f"need operator levels up to {top}, module stores {m.bound}")
    I = Matrix.identity(tower, m.dim)
    Phi = m.phi_matrix()
    try:
        A1 = -(Phi.inverse() * m.N[1])
    except SingularMatrix:
        raise SingularPhi("phi_M is not invertible") from None
    c = RatFunc.t(tower) * RatFunc.constant(tower, ctx.q - 1)
    S = I + A1 * c
    Spow = [I]
    for i in range(1, top + 1):
        Spow.append(S.sigma(ctx, i - 1) * Spow[-1])
    A = [I, A1]
    for k in range(2, top + 1):
        acc = Matrix.zero(tower, m.dim)
        for i in range(1, k + 1):
            if m.N[i].is_zero() or A[k - i].is_zero():
                continue
            acc = acc + m.N[i] * A[k - i].sigma(ctx, i) * Spow[i]
        A.append(-acc)
    levels = {1: A1}
    if kind == "char0":
        for k in range(2, ctx.n + 1):
            levels[k] = A[k]
    else:
        for k in range(Kmax + 1):
            levels[ctx.n * ctx.p**k] = A[ctx.n * ctx.p**k]
    return EquationFamily(ctx, m.dim, kind, levels, Kmax if kind == "charp" else None)


# --- JSON -------------------------------------------------------------------------------


def context_from_json(doc: dict) -> QContext:
    """Context from {"field": {...}, "q": "g", "n": 3}; q defaults to the canonical root."""
    tower = tower_from_config(doc.get("field", {"char": doc.get("p", 0), "modulus": [0, 1]}))
    n = int(doc["n"])
    q = parse_element(tower, doc["q"]) if doc.get("q") is not None else None
    return make_context(tower, n, q)


def _matrix_from_json(ctx: QContext, rows) -> Matrix:
    return Matrix([[parse(ctx, str(x)) for x in r] for r in rows], ctx.tower)


def load_system(src) -> ProjectiveSystemData:
    doc = _load_doc(src)
    ctx = context_from_json(doc)
    kind = doc.get("kind", "charp" if ctx.p else "char0")
    D = [_matrix_from_json(ctx, Dk) for Dk in doc["D"]]
    Cn = _matrix_from_json(ctx, doc["Cn"]) if doc.get("Cn") is not None else None
    sys = ProjectiveSystemData(ctx, kind, D, Cn)
    if "Kmax" in doc and kind == "charp" and int(doc["Kmax"]) != sys.Kmax:
        raise ValueError(f"Kmax {doc['Kmax']} needs {int(doc['Kmax']) + 2} matrices D, got {len(D)}")
    return sys


def load_family(src) -> EquationFamily:
    doc = _load_doc(src)
    ctx = context_from_json(doc)
    kind = doc.get("kind", "charp" if ctx.p else "char0")
    levels = {1: _matrix_from_json(ctx, doc["A1"])}
    if kind == "char0":
        levels[ctx.n] = _matrix_from_json(ctx, doc["An"])
        for k, A in (doc.get("A") or {}).items():
            levels[int(k)] = _matrix_from_json(ctx, A)
        Kmax = None
    else:
        At = doc["Atilde"]
        Kmax = len(At) - 1
        for k, A in enumerate(At):
            levels[ctx.n * ctx.p**k] = _matrix_from_json(ctx, A)
    return EquationFamily(ctx, levels[1].shape[0], kind, levels, Kmax)


def family_to_json(fam: EquationFamily) -> dict:
    ctx = fam.ctx
    doc = {
        "field": tower_to_config(ctx.tower),
        "q": str(ctx.q),
        "n": ctx.n,
        "kind": fam.kind,
        "A1": fam.A1.to_strings(),
    }
    if fam.kind == "char0":
        doc["A"] = {str(k): A.to_strings() for k, A in sorted(fam.intermediates().items())}
        doc["An"] = fam.An.to_strings()
    else:
        doc["p"] = ctx.p
        doc["Kmax"] = fam.Kmax
        doc["Atilde"] = [A.to_strings() for A in fam.Atilde]
    return doc


def _load_doc(src) -> dict:
    if isinstance(src, dict):
        return src
    if isinstance(src, Path) or (isinstance(src, str) and not src.lstrip().startswith("{")):
        return json.loads(Path(src).read_text())
    return json.loads(src)

