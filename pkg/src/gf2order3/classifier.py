"""End-to-end classification of a group generated by order-3 elements.

The pipeline enumerates the group (when it fits the cap), builds the
class of the seed, checks the hypotheses, and then follows the geometry:
projective planes lead to the linear cases, dual affine planes to the
form and pair models, and an empty point set to the GF(4) cases.  Every
conclusion carries evidence that :func:`verify_report` re-checks from the
generators alone.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import f4
from .cotriangular import CotriangularKind, classify_cotriangular, identify_group
from .errors import CapExceeded, InvariantViolation, PreconditionError, RecoveryFailed
from .forms import QuadraticForm, SymplecticForm, order_gl, order_gl4, order_gu
from .geometry import PlaneKind, build_geometry, connectivity, equiv_classes, perp_radical, plane_census
from .gf2 import BitMatrix, BitVector, Subspace, bits_to_str, matrix_from_text, matrix_to_text, str_to_bits, vec_mat
from .group import (
    DEFAULT_CLOSURE_CAP,
    GroupClosure,
    build_class,
    check_hypotheses,
    closure,
    conjugation_orbit,
    count_transvections,
    is_d_element,
    is_transvection,
)
from .spreads import SpreadKind, find_spreads, recover_f4, recover_hermitian, singular_involution

__all__ = [
    "BRANCHES",
    "ClassifyConfig",
    "ClassificationReport",
    "Finding",
    "classify",
    "census",
    "verify_report",
    "transvection_certificate",
]

BRANCHES = {
    "a": "linear group over GF(2), generated by transvection pairs",
    "b": "7:3 in dimension 3",
    "c": "Alt(7) in dimension 4",
    "d": "symplectic group",
    "e": "orthogonal group",
    "f": "alternating group on the pair module",
    "g": "linear group over GF(4), generated by reflections",
    "h": "unitary group over GF(4)",
}

_COTRI_BRANCH = {CotriangularKind.SP: "d", CotriangularKind.ORTHOGONAL: "e", CotriangularKind.TRIANGULAR: "f"}


@dataclass(frozen=True)
class ClassifyConfig:
    max_closure: int = DEFAULT_CLOSURE_CAP
    seed_index: int = 0
    min_form_dim: int = 6


@dataclass
class ClassificationReport:
    dimension: int
    group_order: Optional[int]
    group_order_source: Optional[str]
    class_size: int
    is_single_class: Optional[bool]
    inverse_closed: bool
    scope: str
    hypothesis_flags: dict
    geometry_census: dict
    branch_taken: Optional[str]
    group_name: Optional[str]
    evidence: dict
    all_verified_branches: list
    warnings: list = field(default_factory=list)

    @property
    def classified(self) -> bool:
        return self.branch_taken is not None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationReport":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"dimension: {self.dimension}"]
        order = self.group_order if self.group_order is not None else "unknown"
        lines.append(f"group order: {order} ({self.group_order_source})")
        lines.append(f"class size: {self.class_size} (single class: {self.is_single_class}, scope: {self.scope})")
        for k in ("commutator_full", "centralizer_trivial", "transitive_on_lines", "generated_by_class"):
            lines.append(f"  {k}: {self.hypothesis_flags.get(k)}")
        lines.append("geometry: " + ", ".join(f"{k}={v}" for k, v in sorted(self.geometry_census.items())))
        if self.branch_taken:
            lines.append(f"branch: ({self.branch_taken}) {self.group_name} - {BRANCHES[self.branch_taken]}")
        else:
            lines.append("branch: none")
        lines.append("verified branches: " + ", ".join(self.all_verified_branches))
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def _text(m: BitMatrix) -> str:
    return matrix_to_text(m)


def transvection_certificate(seed: BitMatrix, dclass, generators: Sequence[BitMatrix], cap: int) -> Optional[dict]:
    """A transvection ``seed * d`` or ``seed * d^-1`` with ``d`` in the class.

    When its conjugacy orbit under the generators has the size of the full
    set of transvections, the group contains every transvection and so
    equals SL(n,2).
    """
    n = seed.nrows
    for d in dclass:
        for other, label in ((d, "d"), (d @ d, "d^-1")):
            t = seed @ other
            if is_transvection(t):
                orbit = conjugation_orbit(t, generators, cap)
                full = ((1 << n) - 1) * ((1 << (n - 1)) - 1)
                return {
                    "transvection": _text(t),
                    "partner": _text(d),
                    "partner_power": label,
                    "orbit_size": len(orbit),
                    "all_transvections": full,
                    "generates_sl": len(orbit) == full,
                }
    return None


def _geometry_stage(geom, warnings: list) -> tuple[dict, dict]:
    census = geom.census()
    if not geom.points:
        return census, {}
    planes = plane_census(geom)
    kinds = {k.value: 0 for k in PlaneKind}
    for pt in planes.values():
        kinds[pt.kind.value] += 1
    census["planes"] = kinds
    comps, diam = connectivity(geom)
    census["components"] = comps
    census["diameter"] = diam
    census["perp_radical_dim"] = perp_radical(geom).dim
    census["equivalence_classes_nontrivial"] = sum(1 for c in equiv_classes(geom) if len(c) > 1)
    return census, planes


def _linear_branch(report_bits: dict, group, dclass, generators, geom, seed, cfg, warnings) -> None:
    n = dclass.n
    cert = transvection_certificate(seed, dclass, generators, cfg.max_closure)
    ev = report_bits["evidence"]
    if group is not None:
        tv = count_transvections(group)
        ev["transvections_in_group"] = tv
        has_tv = tv > 0
    else:
        has_tv = cert is not None and cert["generates_sl"]
    if cert is not None:
        ev["transvection_certificate"] = cert
    order = group.order if group is not None else None
    if has_tv:
        branch, name, formula = "a", f"SL({n},2)", order_gl(n)
        if order is None:
            if not (cert and cert["generates_sl"]):
                raise InvariantViolation("transvection orbit is not the full set")
            report_bits["group_order"] = formula
            report_bits["group_order_source"] = "formula"
            warnings.append("group order taken from the transvection certificate")
    elif n == 3 and order == 21:
        branch, name, formula = "b", "7:3", 21
    elif n == 4 and order == 2520:
        branch, name, formula = "c", "Alt(7)", 2520
    else:
        raise InvariantViolation(f"projective planes without transvections in dimension {n}, order {order}")
    final = report_bits["group_order"]
    if final is not None and final != formula:
        raise InvariantViolation(f"{name}: order {final} != {formula}")
    # transitive on points and lines, so both counts divide the order
    npts, nlines = len(geom.points), len(geom.lines)
    ev["order_divisible_by_points_and_lines"] = final % npts == 0 and final % nlines == 0
    if not ev["order_divisible_by_points_and_lines"]:
        raise InvariantViolation("group order not divisible by the point and line counts")
    report_bits.update(branch_taken=branch, group_name=name, all_verified_branches=[branch])


def _cotriangular_branch(report_bits: dict, group, geom, cfg, warnings) -> None:
    result = classify_cotriangular(geom)
    kind = result.chosen(cfg.min_form_dim)
    if kind is not result.kind:
        warnings.append(
            f"dimension {geom.n} < {cfg.min_form_dim}: the {result.kind.value} model also verifies, "
            f"reported as {kind.value}"
        )
    ident = identify_group(result, kind, group.order if group is not None else None)
    if group is None:
        warnings.append("group order not enumerated; formula order reported")
        report_bits["group_order"] = ident.formula_order
        report_bits["group_order_source"] = "formula"
    rec = result.recovery
    ev = report_bits["evidence"]
    ev["gram"] = _text(rec.form.gram)
    ev["point_basis"] = _text(rec.basis)
    ev["point_gram"] = _text(rec.point_gram)
    ev["models_verified"] = [k.value for k in result.verified]
    if result.quadratic is not None:
        ev["quadratic_values_on_basis"] = str(result.quadratic.values_on_basis)
        ev["witt_sign"] = result.quadratic.witt_sign()
    if result.triangular is not None:
        tri = result.triangular
        ev["omega_size"] = tri.omega_size
        ev["quotiented"] = tri.quotiented
        ev["quotient_inference"] = tri.inference
        ev["point_labels"] = [[bits_to_str(v, geom.n), a, b] for v, (a, b) in tri.point_labels]
    ev["point_count"] = len(geom.points)
    report_bits.update(
        branch_taken=_COTRI_BRANCH[kind],
        group_name=ident.name,
        all_verified_branches=[_COTRI_BRANCH[k] for k in result.verified],
    )


def _f4_names(k: int, order: Optional[int], unitary: bool) -> tuple[str, int]:
    if unitary:
        full, name = order_gu(k), f"GU({k},2)"
    else:
        full, name = order_gl4(k), f"GL({k},4)"
    if order is None or order == full:
        return name, full
    if order * 3 == full:
        return name.replace("G", "S", 1), order
    raise InvariantViolation(f"order {order} matches neither {name} nor its determinant-one subgroup")


def _spread_branch(report_bits: dict, group, dclass, generators, cfg, warnings) -> None:
    sc = find_spreads(dclass)
    report_bits["geometry_census"]["spreads"] = sc.census()
    report_bits["geometry_census"]["spread_structure_checks"] = sc.structure_checks
    if not all(sc.structure_checks.values()):
        raise InvariantViolation(f"spread structure violated: {sc.structure_checks}")
    ev = report_bits["evidence"]
    k = dclass.n // 2
    order = group.order if group is not None else None
    if sc.count(SpreadKind.FULL):
        f4s = recover_f4(dclass, sc.lines, generators, sc)
        ev["j_operator"] = _text(f4s.j_operator)
        ev["j_solutions"] = f4s.solutions
        name, formula = _f4_names(k, order, unitary=False)
        branch = "g"
    elif sc.singular:
        f4s = recover_f4(dclass, sc.all_lines, generators, sc)
        herm = recover_hermitian(f4s, dclass, sc.singular, generators)
        ev["j_operator"] = _text(f4s.j_operator)
        ev["j_solutions"] = f4s.solutions
        ev["f4_basis"] = _text(herm.basis)
        ev["hermitian_gram_1"] = _text(herm.gram[0])
        ev["hermitian_gram_w"] = _text(herm.gram[1])
        ev["hermitian_scaling"] = "unique nonzero invariant form over GF(2); no scaling choice"
        ev["absolute_points"] = [s.to_text() for s in herm.absolute_points]
        tangent = next(s for s in sc.spreads if s.kind is SpreadKind.TANGENT)
        for f in dclass:
            try:
                t = singular_involution(tangent, f, dclass)
            except PreconditionError:
                continue
            ev["singular_involution"] = _text(t)
            break
        name, formula = _f4_names(k, order, unitary=True)
        branch = "h"
    else:
        raise InvariantViolation("no spreads and no singular lines")
    if order is None:
        report_bits["group_order"] = formula
        report_bits["group_order_source"] = "formula"
        warnings.append("group order not enumerated; formula order reported")
    report_bits.update(branch_taken=branch, group_name=name, all_verified_branches=[branch])


def _check_generators(generators: Sequence[BitMatrix]) -> int:
    if not generators:
        raise PreconditionError("no generators")
    n = generators[0].nrows
    for g in generators:
        if g.nrows != n or g.ncols != n:
            raise PreconditionError("generators must be square of one size")
    return n


def classify(
    generators: Sequence[BitMatrix], seed: Optional[BitMatrix] = None, config: Optional[ClassifyConfig] = None
) -> ClassificationReport:
    cfg = config or ClassifyConfig()
    gens = list(generators)
    n = _check_generators(gens)
    if seed is None:
        if not 0 <= cfg.seed_index < len(gens):
            raise PreconditionError("seed index out of range")
        seed = gens[cfg.seed_index]
    if not is_d_element(seed):
        raise PreconditionError("seed must have order 3 and a 2-dimensional commutator")
    warnings: list[str] = []
    group: Optional[GroupClosure]
    try:
        group = closure(gens, cap=cfg.max_closure)
    except CapExceeded as exc:
        group = None
        warnings.append(f"closure stopped at cap {cfg.max_closure} after {exc.partial} elements")
    dclass = build_class(gens, seed, group, cap=cfg.max_closure)
    hyp = check_hypotheses(group if group is not None else gens, dclass)
    if hyp.generated_by_class is None:
        scope = "extended-scope"
        warnings.append("generators lie outside the class and the group was not enumerated")
    else:
        scope = "class"
    if not dclass.inverse_closed:
        warnings.append("class is not closed under inversion")
    geom = build_geometry(dclass)
    bits = dict(
        dimension=n,
        group_order=group.order if group is not None else None,
        group_order_source="closure" if group is not None else None,
        class_size=dclass.size,
        is_single_class=dclass.is_single_class,
        inverse_closed=dclass.inverse_closed,
        scope=scope,
        hypothesis_flags=hyp.as_dict(),
        geometry_census={},
        branch_taken=None,
        group_name=None,
        evidence={},
        all_verified_branches=[],
    )
    census_, planes = _geometry_stage(geom, warnings)
    bits["geometry_census"] = census_
    if not hyp.ok:
        warnings.append("hypotheses fail; no branch claimed")
        return ClassificationReport(**bits, warnings=warnings)
    if geom.points:
        kinds = {p.kind for p in planes.values()}
        if len(kinds) > 1:
            raise InvariantViolation("projective and dual affine planes both occur")
        if census_["components"] != 1 or census_["diameter"] > 2:
            raise InvariantViolation("collinearity graph is disconnected or has diameter above 2")
        if kinds == {PlaneKind.PROJECTIVE} or not kinds:
            _linear_branch(bits, group, dclass, gens, geom, seed, cfg, warnings)
        else:
            _cotriangular_branch(bits, group, geom, cfg, warnings)
    else:
        _spread_branch(bits, group, dclass, gens, cfg, warnings)
    return ClassificationReport(**bits, warnings=warnings)


def census(generators: Sequence[BitMatrix], seed: Optional[BitMatrix] = None, config: Optional[ClassifyConfig] = None) -> dict:
    """Geometry and spread statistics without any branch decision."""
    cfg = config or ClassifyConfig()
    gens = list(generators)
    _check_generators(gens)
    seed = seed if seed is not None else gens[cfg.seed_index]
    dclass = build_class(gens, seed, None, cap=cfg.max_closure)
    geom = build_geometry(dclass)
    out, _ = _geometry_stage(geom, [])
    out["class_size"] = dclass.size
    if not geom.points:
        out["spreads"] = find_spreads(dclass).census()
    return out


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Finding:
    name: str
    ok: bool
    detail: str = ""


def _form_checks(gram: BitMatrix, gens: Sequence[BitMatrix]) -> list[Finding]:
    out = []
    try:
        form = SymplecticForm(gram)
        out.append(Finding("gram_alternating", True))
    except ValueError as exc:
        return [Finding("gram_alternating", False, str(exc))]
    out.append(Finding("gram_nondegenerate", form.is_nondegenerate()))
    out.append(Finding("form_invariant_under_generators", all(form.is_invariant(g) for g in gens)))
    return out


def _verify_evidence(rep: ClassificationReport, gens: Sequence[BitMatrix]) -> list[Finding]:
    ev = rep.evidence
    n = rep.dimension
    out: list[Finding] = []
    branch = rep.branch_taken
    if branch == "a" and "transvection_certificate" in ev:
        cert = ev["transvection_certificate"]
        t = matrix_from_text(cert["transvection"])
        d = matrix_from_text(cert["partner"])
        out.append(Finding("certificate_is_transvection", is_transvection(t)))
        out.append(Finding("certificate_partner_in_class_shape", is_d_element(d)))
        orbit = conjugation_orbit(t, gens)
        full = ((1 << n) - 1) * ((1 << (n - 1)) - 1)
        out.append(Finding("certificate_orbit_is_all_transvections", len(orbit) == full == cert["orbit_size"]))
    if branch in ("d", "e", "f"):
        gram = matrix_from_text(ev["gram"])
        out += _form_checks(gram, gens)
        basis = matrix_from_text(ev["point_basis"])
        pg = matrix_from_text(ev["point_gram"])
        out.append(Finding("base_change_reproduces_point_gram", basis @ gram @ basis.transpose() == pg))
    if branch == "e":
        try:
            q = QuadraticForm(BitVector.from_string(ev["quadratic_values_on_basis"]), SymplecticForm(gram))
            pol = all(q(u ^ v) ^ q(u) ^ q(v) == q.bilinear(u, v) for u in range(1 << n) for v in range(1 << n))
            out.append(Finding("quadratic_polarizes_to_gram", pol))
            out.append(Finding("quadratic_invariant_under_generators", all(q.is_invariant(g) for g in gens)))
            out.append(Finding("quadratic_point_count", len(q.nonsingular_vectors()) == ev["point_count"]))
        except ValueError as exc:
            out.append(Finding("quadratic_well_formed", False, str(exc)))
    if branch == "f":
        k = ev["omega_size"]
        vec = {(a, b): str_to_bits(s) for s, a, b in ev["point_labels"]}
        u = [0] + [vec[(0, i)] for i in range(1, k)]
        lin = all(vec[(a, b)] == u[a] ^ u[b] for a in range(1, k) for b in range(a + 1, k))
        out.append(Finding("pair_labels_linear", lin))
        pts = set(vec.values())
        out.append(Finding("pair_points_distinct", len(pts) == k * (k - 1) // 2))
        out.append(Finding("generators_permute_pair_points", all({g.apply(p) for p in pts} == pts for g in gens)))
        dim = Subspace.span(u[1:], n).dim
        out.append(Finding("pair_module_dimension", dim == n and n == (k - 2 if ev["quotiented"] else k - 1)))
    if branch in ("g", "h"):
        j = matrix_from_text(ev["j_operator"])
        ident = BitMatrix.identity(n)
        out.append(Finding("j_cube_root_of_unity", j @ j + j + ident == BitMatrix.zeros(n, n)))
        out.append(Finding("j_commutes_with_generators", all(g @ j == j @ g for g in gens)))
    if branch == "h":
        basis = matrix_from_text(ev["f4_basis"])
        h0 = matrix_from_text(ev["hermitian_gram_1"])
        h1 = matrix_from_text(ev["hermitian_gram_w"])
        k = n // 2
        h = [[h0[i, jj] | (h1[i, jj] << 1) for jj in range(k)] for i in range(k)]
        out.append(Finding("hermitian_conjugate_symmetric", all(h[b][a] == f4.conj(h[a][b]) for a in range(k) for b in range(k))))
        ok_basis = basis.is_invertible() and all(
            basis.rows[2 * i + 1] == j.apply(basis.rows[2 * i]) for i in range(k)
        )
        out.append(Finding("f4_basis_matches_j", ok_basis))
        if ok_basis:
            binv = basis.inverse()

            def hv(x: int, y: int) -> int:
                cx = f4.decode(vec_mat(x, binv.rows), k)
                cy = f4.decode(vec_mat(y, binv.rows), k)
                acc = 0
                for a in range(k):
                    for b in range(k):
                        acc ^= f4.mul(f4.mul(cx[a], h[a][b]), f4.conj(cy[b]))
                return acc

            inv = all(hv(g.apply(x), g.apply(y)) == hv(x, y) for g in gens for x in basis.rows for y in basis.rows)
            out.append(Finding("hermitian_invariant_under_generators", inv))
            absolute = {Subspace.span((v, j.apply(v)), n) for v in range(1, 1 << n) if hv(v, v) == 0}
            listed = {Subspace.from_text(t, n) for t in ev["absolute_points"]}
            out.append(Finding("absolute_points_match", absolute == listed))
    return out


def verify_report(report: ClassificationReport | dict, generators: Sequence[BitMatrix]) -> list[Finding]:
    """Re-check every evidence item of a report against the generators."""
    rep = report if isinstance(report, ClassificationReport) else ClassificationReport.from_dict(report)
    gens = list(generators)
    out: list[Finding] = []
    out.append(Finding("dimension", bool(gens) and gens[0].nrows == rep.dimension))
    if not out[-1].ok:
        return out
    if rep.branch_taken is not None:
        out.append(Finding("branch_among_verified", rep.branch_taken in rep.all_verified_branches))
        out.append(Finding("hypotheses_hold", all(
            rep.hypothesis_flags.get(k) for k in ("commutator_full", "centralizer_trivial", "transitive_on_lines")
        )))
    if rep.group_order_source == "closure":
        try:
            order = closure(gens, cap=rep.group_order).order
            out.append(Finding("group_order", order == rep.group_order, f"{order} vs {rep.group_order}"))
        except CapExceeded:
            out.append(Finding("group_order", False, "closure exceeds the reported order"))
    try:
        out += _verify_evidence(rep, gens)
    except (KeyError, ValueError, RecoveryFailed) as exc:
        out.append(Finding("evidence_well_formed", False, repr(exc)))
    return out
