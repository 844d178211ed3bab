"""Verification suites: each maps a run context to a list of Residuals.

Point-geometry suites fan out over sampled points; tabulated models get an explicit
skipped entry for them. Failures inside one task become failing residuals with the
error message attached, so a run always produces a complete report."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import homog6
from .errors import IsogeoError
from .family import angle_data, angles_from_jet, parallel, reflection_residuals, reflection_tau
from .identities import (
    ALGEBRAIC_TOL,
    FD_TOL,
    all_classical_weyl,
    alpha_route_check,
    alpha_t_independence,
    closed_form_checks,
    cartan_identity,
    codazzi_check,
    connection_relation_check,
    gauss_check,
    invariant_weyl,
    nabla_b_check,
    sphere_gauss_route,
    symmetry_check,
    symmetry_composition_check,
    weyl_implies_cartan,
)
from .local import LocalGeometry
from .models.geometry import jet as make_jet, model_self_test, sample_points
from .numkit import FIRST_DERIVATIVE, NESTED_DERIVATIVE, StepPolicy, max_abs
from .quadric import b_identities, ghat, ghat_at_t, invariant_set, lagrangian_jet, lift, symmetry_defect
from .residual import Residual, residual, skipped

SUITES = ("self", "lift", "invariants", "weyl", "codazzi-gauss", "symmetry", "cartan", "homog6")
POINT_SUITES = frozenset({"self", "lift", "codazzi-gauss", "symmetry"})

ALPHA_T_GRID = (-0.35, -0.2, 0.1, 0.25, 0.4)
GHAT_T_GRID = tuple(np.round(np.linspace(-0.45, 0.45, 10), 3))
B_T_GRID = (-0.3, 0.15, 0.35)
FOCAL_MARGIN = 0.05
INVARIANT_TOL = 1e-9
WEYL_FD_TOL = 1e-4


@dataclass
class RunContext:
    spec: object
    points: int = 4
    seed: int = 0
    policy: StepPolicy = FIRST_DERIVATIVE
    nested: StepPolicy = NESTED_DERIVATIVE

    @cached_property
    def samples(self):
        return sample_points(self.spec, self.points, self.seed)

    @cached_property
    def jets(self):
        return [make_jet(self.spec, p) for p in self.samples]

    def local(self, k: int) -> LocalGeometry:
        return LocalGeometry(self.spec, self.samples[k], self.policy, self.nested)

    @cached_property
    def table(self):
        return homog6.table_from_spec(self.spec)


def _safe_grid(grid, jet):
    """Drop t-values within FOCAL_MARGIN of a focal time of this surface."""
    thetas = angles_from_jet(jet).thetas
    out = []
    for t in grid:
        dist = min(abs(math.remainder(t - th, math.pi)) for th in thetas)
        if dist > FOCAL_MARGIN:
            out.append(float(t))
    return out


def _guard(name, fn, **context) -> list[Residual]:
    try:
        out = fn()
    except IsogeoError as exc:
        return [residual(f"{name}.error", math.inf, 0.0, note=f"{type(exc).__name__}: {exc}", **context)]
    return [out] if isinstance(out, Residual) else list(out)


def _with_point(res: list[Residual], k: int) -> list[Residual]:
    return [Residual(r.name, r.value, r.tol, {**r.context, "point": k}, r.note, r.skipped) for r in res]


# -- suites ---------------------------------------------------------------------------------

def suite_self(ctx: RunContext) -> list[Residual]:
    samples = ctx.samples if len(ctx.samples) >= 2 else sample_points(ctx.spec, 2, ctx.seed)
    return _guard("self", lambda: model_self_test(ctx.spec, samples))


def _lift_point(jet) -> list[Residual]:
    out = []
    z = lift(parallel(jet, 0.0))
    out.append(residual("lift.stiefel", max(z.null_residual, z.norm_residual), ALGEBRAIC_TOL))
    lj = lagrangian_jet(jet)
    out.append(residual("lift.horizontal", lj.horizontality, ALGEBRAIC_TOL))
    out.append(residual("lift.lagrangian", lj.lagrangian, ALGEBRAIC_TOL))
    a_lift, routes = alpha_route_check(jet)
    out.extend(routes)
    out.append(residual("alpha.symmetry", symmetry_defect(a_lift), 1e-7))
    out.append(alpha_t_independence(jet, _safe_grid(ALPHA_T_GRID, jet), a_lift))
    g0 = ghat(jet)
    dev = max(max_abs(ghat_at_t(jet, t) - g0) for t in _safe_grid(GHAT_T_GRID, jet))
    out.append(residual("ghat.t_independence", dev, 1e-8, t_values=len(_safe_grid(GHAT_T_GRID, jet))))
    return out


def suite_lift(ctx: RunContext) -> list[Residual]:
    out = []
    for k, jet in enumerate(ctx.jets):
        out += _with_point(_guard("lift", lambda: _lift_point(jet)), k)
    return out


# alpha-derived invariants carry finite-difference noise on point models
FD_INVARIANT_TOLS = {"alpha_symmetry": 1e-8, "alpha_same_distribution": 1e-7, "alpha_trace_free": 1e-7}


def _invariant_residuals(inv, fd: bool) -> list[Residual]:
    out = []
    for key, value in inv.residuals().items():
        tol = FD_INVARIANT_TOLS.get(key, INVARIANT_TOL) if fd else ALGEBRAIC_TOL
        out.append(residual(f"invariants.{key}", value, tol))
    return out


def _b_point(jet) -> list[Residual]:
    vals = b_identities(jet.A0, jet.g, _safe_grid(B_T_GRID, jet))
    ang = angles_from_jet(jet)
    expected_trace = abs(sum(m * np.exp(2j * th) for m, th in zip(ang.multiplicities, ang.thetas)))
    out = []
    for key, value in vals.items():
        if key == "trace" and expected_trace > 1e-12:
            out.append(skipped("b.trace", reason="unequal multiplicities"))
        else:
            out.append(residual(f"b.{key}", value, INVARIANT_TOL))
    return out


def suite_invariants(ctx: RunContext) -> list[Residual]:
    if not ctx.spec.has_geometry:
        return _invariant_residuals(homog6.table_invariants(ctx.table), fd=False)
    out = []
    for k, jet in enumerate(ctx.jets):
        out += _with_point(_guard("invariants", lambda: _invariant_residuals(invariant_set(jet, ctx.policy), fd=True)
                                  + _b_point(jet)), k)
    return out


def _cartan(ctx) -> Residual:
    return cartan_identity(angle_data(ctx.spec.g, ctx.spec.multiplicities))


def _weyl_pair(inv, tol_inv, rng) -> list[Residual]:
    return [all_classical_weyl(inv, FD_TOL if tol_inv > ALGEBRAIC_TOL else ALGEBRAIC_TOL, rng),
            invariant_weyl(inv, tol_inv)]


def suite_weyl(ctx: RunContext) -> list[Residual]:
    rng = np.random.default_rng(ctx.seed)
    if not ctx.spec.has_geometry:
        out = _weyl_pair(homog6.table_invariants(ctx.table), ALGEBRAIC_TOL, rng)
    else:
        out = []
        for k, jet in enumerate(ctx.jets):
            out += _with_point(_guard("weyl", lambda: _weyl_pair(invariant_set(jet, ctx.policy),
                                                                WEYL_FD_TOL, rng)), k)
    cartan = _cartan(ctx)
    classical = [r for r in out if r.name == "weyl.classical"]
    weyl_status = Residual("weyl.classical", max((r.value for r in classical), default=0.0),
                           classical[0].tol if classical else FD_TOL)
    out.append(weyl_implies_cartan(weyl_status, cartan))
    return out


def _geometry_point(ctx, k) -> list[Residual]:
    local = ctx.local(k)
    out = [codazzi_check(local), gauss_check(local), nabla_b_check(local), connection_relation_check(local)]
    out += closed_form_checks(local.jet)
    g = local.jet.g
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            if i != j:
                out.append(sphere_gauss_route(local, i, j))
    return out


def suite_codazzi_gauss(ctx: RunContext) -> list[Residual]:
    out = []
    for k in range(len(ctx.samples)):
        out += _with_point(_guard("codazzi-gauss", lambda: _geometry_point(ctx, k)), k)
    return out


def _symmetry_point(ctx, jet) -> list[Residual]:
    out = []
    alpha_f = None
    for j in range(1, jet.g + 1):
        refl = reflection_tau(jet, j)
        out.append(residual("reflection.involution", refl.involution, 1e-8, j=j))
        for key, value in reflection_residuals(jet, refl).items():
            out.append(residual(f"reflection.{key}", value, 1e-8, j=j))
        res = symmetry_check(jet, j, alpha_f, ctx.policy)
        out.append(res)
    if jet.g >= 2:
        out.append(symmetry_composition_check(jet, 1, 2, None, ctx.policy))
    return out


def suite_symmetry(ctx: RunContext) -> list[Residual]:
    out = []
    for k, jet in enumerate(ctx.jets):
        out += _with_point(_guard("symmetry", lambda: _symmetry_point(ctx, jet)), k)
    return out


def suite_cartan(ctx: RunContext) -> list[Residual]:
    return [_cartan(ctx)]


def suite_homog6(ctx: RunContext) -> list[Residual]:
    if ctx.spec.has_geometry:
        return [skipped("homog6", {"model": ctx.spec.name}, "not applicable: needs tabulated g=6 data")]
    table = ctx.table
    out = [c.to_residual() for c in homog6.homogeneity_criteria(table)]
    for fam in homog6.all_families(table):
        out.append(homog6.isospectral_scan(fam))
        out.append(homog6.kernel_constancy(fam))
    return out


SUITE_FUNCTIONS = {
    "self": suite_self,
    "lift": suite_lift,
    "invariants": suite_invariants,
    "weyl": suite_weyl,
    "codazzi-gauss": suite_codazzi_gauss,
    "symmetry": suite_symmetry,
    "cartan": suite_cartan,
    "homog6": suite_homog6,
}


def run_suite(name: str, ctx: RunContext) -> list[Residual]:
    if name in POINT_SUITES and not ctx.spec.has_geometry:
        return [skipped(name, {"model": ctx.spec.name}, "not applicable")]
    out = SUITE_FUNCTIONS[name](ctx)
    return [Residual(r.name, r.value, r.tol, {"suite": name, **r.context}, r.note, r.skipped) for r in out]
