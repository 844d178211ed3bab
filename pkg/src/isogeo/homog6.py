"""g = 6: tabulated alpha, frame conversion, linear isospectral families and the
equivalent formulations of homogeneity, checked in exact arithmetic where possible."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import subspace_angles

from . import surd
from .errors import InputError, ModelConsistencyError, UndefinedEntryError
from .family import angle_data, exact_lambdas, exact_thetas12
from .numkit import eig_sym, max_abs
from .quadric import InvariantSet, invariant_set_from_data
from .residual import Residual, residual
from .surd import CSurd, Surd

G = 6
CRITERION_TOL = 1e-10
SQRT32 = Surd.sqrt(Fraction(3, 2))


def format_value(value: Surd) -> str:
    """Render a table value as a rational multiple of sqrt(3/2) when possible."""
    if value.is_zero():
        return "0"
    k = value / SQRT32
    a, b, c, d = k.c
    if b or c or d:
        return str(value)
    if a == 1:
        return "sqrt(3/2)"
    if a == -1:
        return "-sqrt(3/2)"
    return f"{a}*sqrt(3/2)"


# -- tables ----------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlphaTable:
    """Fully symmetric alpha in the e-frame; indices are 1-based, 7..12 are the barred ones for m=2."""

    m: int
    entries: dict  # sorted triple -> Surd (nonzero only)
    expressions: dict = field(default_factory=dict)  # sorted triple -> source string
    name: str = ""

    @property
    def n(self) -> int:
        return G * self.m

    def label(self, i: int) -> int:
        """Distribution (1..6) of a 1-based frame index."""
        return (i - 1) % G + 1

    @property
    def labels(self) -> np.ndarray:
        return np.array([self.label(i) for i in range(1, self.n + 1)])

    def value(self, i: int, j: int, k: int) -> Surd:
        for idx in (i, j, k):
            if not 1 <= idx <= self.n:
                raise InputError(f"index {idx} outside 1..{self.n}")
        return self.entries.get(tuple(sorted((i, j, k))), Surd())

    def expression(self, i: int, j: int, k: int) -> str:
        return format_value(self.value(i, j, k))

    def dense(self) -> np.ndarray:
        a = np.zeros((self.n,) * 3)
        for key, v in self.entries.items():
            for p in set(itertools.permutations(key)):
                a[tuple(x - 1 for x in p)] = float(v)
        return a

    def with_entry(self, i, j, k, value: Surd, name: str = "") -> "AlphaTable":
        entries = dict(self.entries)
        key = tuple(sorted((i, j, k)))
        if value.is_zero():
            entries.pop(key, None)
        else:
            entries[key] = value
        return AlphaTable(self.m, entries, {}, name or f"{self.name}+alpha{key}")

    def components(self) -> list[dict]:
        return [
            {"i": i, "j": j, "k": k, "value_expression": format_value(v)}
            for (i, j, k), v in sorted(self.entries.items())
        ]


def table_from_components(m: int, components, name: str = "") -> AlphaTable:
    entries, exprs = {}, {}
    for comp in components:
        key = tuple(sorted((int(comp["i"]), int(comp["j"]), int(comp["k"]))))
        if any(not 1 <= x <= G * m for x in key):
            raise ModelConsistencyError(f"alpha component {key} outside 1..{G * m}")
        value = surd.parse(str(comp["value_expression"]))
        if key in entries and entries[key] != value:
            raise ModelConsistencyError(f"conflicting values for alpha{key}")
        if not value.is_zero():
            entries[key] = value
            exprs[key] = str(comp["value_expression"])
    return AlphaTable(m, entries, exprs, name)


def load_alpha_table(m: int) -> AlphaTable:
    if m not in (1, 2):
        raise InputError("tabulated g=6 data exists for m = 1 and m = 2 only")
    from .models.registry import registry_get

    return table_from_spec(registry_get(f"g6-hom-m{m}"))


def table_from_spec(spec) -> AlphaTable:
    if spec.kind != "tabulated":
        raise InputError(f"model {spec.name} is not tabulated")
    return table_from_components(spec.params["m"], spec.params["alpha_components"], spec.name)


def table_invariants(table: AlphaTable) -> InvariantSet:
    """InvariantSet of a table: ghat = I in the e-frame, B0 = diag(exp(2 i theta_label))."""
    angles = angle_data(G, (table.m,) * G)
    labels = table.labels
    B0 = np.diag(np.exp(2j * angles.thetas[labels - 1]))
    return invariant_set_from_data(np.eye(table.n), table.dense(), B0, labels, angles)


# -- e/f frame conversion -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FrameConversion:
    table: AlphaTable
    scales: tuple  # exact sqrt(2/(1+lambda^2)) per distribution, = sqrt2 sin(theta)
    lambdas: tuple  # exact principal curvatures per distribution
    alpha_f: dict  # sorted triple -> Surd

    def alpha_f_value(self, i, j, k) -> Surd:
        return self.alpha_f.get(tuple(sorted((i, j, k))), Surd())

    def christoffel(self, i: int, j: int, k: int) -> Surd:
        """Lambda_{i,j}^k = alpha(f_i, f_j, f_k) / (lambda_j - lambda_k)."""
        lj = self.lambdas[self.table.label(j) - 1]
        lk = self.lambdas[self.table.label(k) - 1]
        if lj == lk:
            raise UndefinedEntryError(f"Lambda_({i},{j})^{k} undefined: lambda_{j} = lambda_{k}")
        return self.alpha_f_value(i, j, k) / (lj - lk)

    def christoffel_entries(self) -> dict:
        out = {}
        for key in self.alpha_f:
            for i, j, k in set(itertools.permutations(key)):
                if self.table.label(j) != self.table.label(k):
                    out[(i, j, k)] = self.christoffel(i, j, k)
        return dict(sorted(out.items()))


def frame_convert(table: AlphaTable, angles=None) -> FrameConversion:
    if angles is not None and (angles.g != G or not math.isclose(angles.phi, math.pi / (2 * G))):
        raise InputError("exact conversion needs the g=6 angles with phi = pi/12")
    lam = exact_lambdas(G)
    scales = tuple(Surd.sqrt(2) * surd.sin12(k) for k in exact_thetas12(G))
    alpha_f = {}
    for key, v in table.entries.items():
        s = scales[table.label(key[0]) - 1] * scales[table.label(key[1]) - 1] * scales[table.label(key[2]) - 1]
        alpha_f[key] = v / s
    return FrameConversion(table, scales, tuple(lam), alpha_f)


# -- isospectral families ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsoFamily:
    L0: np.ndarray
    L1: np.ndarray
    j: int
    m: int = 1
    basis: tuple = ()  # 1-based table indices of the rows
    exact_L1: dict = field(default_factory=dict, repr=False)

    def at(self, s: float) -> np.ndarray:
        return math.cos(s) * self.L0 + math.sin(s) * self.L1


def family_coefficient(a: int, b: int, j: int) -> Surd:
    """1 / (2 sqrt2 |sin(theta_a - theta_j)| |sin(theta_b - theta_j)|), exactly."""
    th = exact_thetas12(G)
    sa = abs(surd.sin12(th[a - 1] - th[j - 1]))
    sb = abs(surd.sin12(th[b - 1] - th[j - 1]))
    return Surd(1) / (2 * Surd.sqrt(2) * sa * sb)


def build_isospectral_family(table: AlphaTable, j: int = 6, normal_copy: int = 0) -> IsoFamily:
    """L0 = shape operator of the focal manifold at theta_j, L1 = shape operator for e_j.

    For m = 2 the normal is e_j (normal_copy 0) or its barred partner (1) and the basis
    interleaves (e_a, e_a-bar) for the five distributions a = j+1, ..., j+5 (cyclic)."""
    if not 1 <= j <= G:
        raise InputError(f"focal index {j} outside 1..6")
    if normal_copy not in range(table.m):
        raise InputError(f"normal copy {normal_copy} outside 0..{table.m - 1}")
    dists = [(j + k - 1) % G + 1 for k in range(1, G)]
    basis = tuple(a + G * c for a in dists for c in range(table.m))
    normal = j + G * normal_copy
    th = exact_thetas12(G)
    diag = [surd.cot12(th[table.label(i) - 1] - th[j - 1]) for i in basis]
    exact = {}
    size = len(basis)
    L1 = np.zeros((size, size))
    for r, a in enumerate(basis):
        for c, b in enumerate(basis):
            if table.label(a) == table.label(b):
                continue
            val = family_coefficient(table.label(a), table.label(b), j) * table.value(a, b, normal)
            if not val.is_zero():
                exact[(r, c)] = val
                L1[r, c] = float(val)
    L0 = np.diag([float(d) for d in diag])
    return IsoFamily(L0, L1, j, table.m, basis, exact)


def rotating_kernel_family() -> IsoFamily:
    """Negative control: isospectral with the g=6 focal spectrum, kernel turning with s.

    On rows (1, 3, 5) it is sqrt3 times the spin-1 pair (J_z, J_x), on rows (2, 4) a
    scaled (sigma_z, sigma_x) pair; both rotate eigenvectors as s varies."""
    r3 = math.sqrt(3.0)
    L0 = np.diag([r3, 1 / r3, 0.0, -1 / r3, -r3])
    L1 = np.zeros((5, 5))
    L1[0, 2] = L1[2, 0] = L1[2, 4] = L1[4, 2] = math.sqrt(1.5)
    L1[1, 3] = L1[3, 1] = 1 / r3
    return IsoFamily(L0, L1, 0, 1, ())


def s_grid(count: int) -> np.ndarray:
    return np.arange(count) * (2 * math.pi / count)


def isospectral_scan(fam: IsoFamily, s_count: int = 64, tol: float = 1e-9) -> Residual:
    if s_count < 8:
        raise InputError("s_count must be at least 8")
    ref = np.sort(np.linalg.eigvalsh(fam.L0))
    worst = 0.0
    for s in s_grid(s_count):
        worst = max(worst, max_abs(np.sort(np.linalg.eigvalsh(fam.at(s))) - ref))
    return residual("isospectral", worst, tol, j=fam.j, m=fam.m, s_values=s_count)


def _kernel(L, tol):
    clusters = eig_sym(L, cluster_tol=tol)
    k = int(np.argmin(np.abs(clusters.values)))
    if abs(clusters.values[k]) > 10 * tol:
        return None
    return clusters.bases[k]


def kernel_constancy(fam: IsoFamily, s_count: int = 64, tol: float = 1e-8, cluster_tol: float = 1e-6) -> Residual:
    ker0 = _kernel(fam.L0, cluster_tol)
    if ker0 is None:
        return residual("kernel_constancy", math.inf, tol, note="L(0) has no kernel", j=fam.j)
    worst = 0.0
    for s in s_grid(s_count):
        ker = _kernel(fam.at(s), cluster_tol)
        if ker is None or ker.shape[1] != ker0.shape[1]:
            return residual("kernel_constancy", math.inf, tol, note=f"kernel dimension changes at s={s:.6f}",
                            j=fam.j, m=fam.m)
        worst = max(worst, float(np.max(subspace_angles(ker0, ker))))
    return residual("kernel_constancy", worst, tol, j=fam.j, m=fam.m, s_values=s_count)


def all_families(table: AlphaTable) -> list[IsoFamily]:
    return [build_isospectral_family(table, j, c) for j in range(1, G + 1) for c in range(table.m)]


# -- homogeneity criteria ----------------------------------------------------------------------

@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    residual: float
    passed: bool
    note: str = ""

    def to_residual(self) -> Residual:
        return Residual(f"homog6.criterion_{self.criterion}", self.residual, CRITERION_TOL,
                        {"criterion": self.criterion}, self.note)


def _max_abs_exact(values) -> Surd:
    best = Surd()
    for v in values:
        if abs(v) > best:
            best = abs(v)
    return best


def _opposite(table, a, b) -> bool:
    return (table.label(a) - table.label(b)) % G == 3


def criterion_i(table: AlphaTable) -> Surd:
    bad = []
    for key, v in table.entries.items():
        if any(_opposite(table, a, b) for a, b in itertools.combinations(key, 2)):
            bad.append(v)
    return _max_abs_exact(bad)


def criterion_ii(table: AlphaTable) -> Surd:
    return _max_abs_exact(
        v for key, v in table.entries.items() if sum(table.label(i) for i in key) % 3 != 0
    )


def _mu(table, i) -> CSurd:
    """exp(2 i theta_label) for the frame index i."""
    return surd.expi12(2 * exact_thetas12(G)[table.label(i) - 1])


def criterion_iii(table: AlphaTable) -> Surd:
    """max over frame triples of |sum_j (-1)^j alpha(B^j X, B^-j Y, Z)|, exactly."""
    worst = Surd()
    n = table.n
    phase_sum = {}
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            key = (table.label(x), table.label(y))
            if key not in phase_sum:
                ratio = _mu(table, x) / _mu(table, y)
                acc, term = CSurd(0), CSurd(1)
                for j in range(G):
                    acc = acc + (term if j % 2 == 0 else -term)
                    term = term * ratio
                phase_sum[key] = acc
    for key, v in table.entries.items():
        for x, y, z in set(itertools.permutations(key)):
            val = phase_sum[(table.label(x), table.label(y))] * v
            size = val.norm2()
            if size > worst:
                worst = size
    # worst holds a squared modulus; its float square root is the residual
    return worst


def criterion_iv(table: AlphaTable) -> Surd:
    """max over X in D_i, Y in D_{i+3} frame vectors of 1/4 sum_c alpha(X, Y, e_c)^2."""
    worst = Surd()
    n = table.n
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            if not _opposite(table, x, y):
                continue
            acc = Surd()
            for c in range(1, n + 1):
                v = table.value(x, y, c)
                acc = acc + v * v
            acc = acc * Surd(Fraction(1, 4))
            if acc > worst:
                worst = acc
    return worst


def criterion_v(table: AlphaTable) -> Surd:
    """alpha(pi_j X, pi_{j+3} Y, Z) - alpha(pi_{j+3} X, pi_j Y, Z) on frame vectors."""
    worst = Surd()
    n = table.n
    for j in range(1, G + 1):
        jj = (j + 2) % G + 1
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                for z in range(1, n + 1):
                    first = table.value(x, y, z) if table.label(x) == j and table.label(y) == jj else Surd()
                    second = table.value(x, y, z) if table.label(x) == jj and table.label(y) == j else Surd()
                    d = abs(first - second)
                    if d > worst:
                        worst = d
    return worst


def curvature_iv_float(inv: InvariantSet) -> float:
    """R(pi_i X, pi_{i+3} Y, pi_{i+3} Y, pi_i X) from the Gauss identity right-hand side."""
    from .numkit import kn_sym_tensor

    a = inv.alpha
    Gi = np.linalg.inv(inv.ghat)
    aa = np.einsum("xwm,mn,yzn->xyzw", a, Gi, a) - np.einsum("xzm,mn,ywn->xyzw", a, Gi, a)
    R = kn_sym_tensor(inv.ghat, inv.ghat) + np.real(kn_sym_tensor(inv.b, inv.bbar)) + 0.25 * aa
    worst = 0.0
    for x in range(inv.n):
        for y in range(inv.n):
            if (inv.labels[x] - inv.labels[y]) % G == 3:
                worst = max(worst, abs(R[x, y, y, x]))
    return worst


def homogeneity_criteria(table: AlphaTable, inv: InvariantSet | None = None,
                         s_count: int = 64) -> list[CriterionReport]:
    inv = table_invariants(table) if inv is None else inv
    out = []

    def add(name, value, note=""):
        value = float(value)
        out.append(CriterionReport(name, value, value < CRITERION_TOL, note))

    add("i", criterion_i(table))
    add("ii", criterion_ii(table))
    add("iii", math.sqrt(float(criterion_iii(table))), "exact phases exp(i k pi/6)")
    curv = curvature_iv_float(inv)
    add("iv", criterion_iv(table), f"sectional curvature via the Gauss identity: {curv:.3e}")
    add("v", criterion_v(table), "algebraic reformulation only; integrability itself needs a manifold")
    kernel = max(kernel_constancy(f, s_count).value for f in all_families(table))
    add("vi", kernel, "max principal angle over all focal families")
    return out
