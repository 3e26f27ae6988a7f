"""Analysis orchestration and report serialization."""

import json
import time

from .. import __version__
from ..brst import (
    brst_generators,
    dual_euler,
    euler_characteristic,
    min_shift,
    poincare_series,
)
from ..dof import NOT_APPLICABLE, dof_pipeline
from ..errors import InternalError
from ..freemod import budget_scope, current_budget
from ..jets import einstein_estimate, jet_count
from ..system import DiffSystem, groebner_completion, is_weakly_involutive

SCHEMA_VERSION = 1
METHODS = ("ext", "graded", "brst", "oracle")
DEFAULT_ORACLE_N = 10
SOFT_TIMER = 60.0


def _finite_difference(values, order):
    v = list(values)
    for _ in range(order):
        v = [b - a for a, b in zip(v, v[1:])]
    return v


def oracle_section(sys, report, N):
    """Jet counts for the analyzed system and the DoF they imply."""
    if any(sys.theta):
        # U carries the standard filtration, so jets are counted with theta = 0
        sys = DiffSystem(sys.dimension, sys.field_names, sys.matrix, equation_names=sys.equation_names,
                         allow_zero_rows=True, variable_names=sys.variable_names)
    target = sys if is_weakly_involutive(sys) else groebner_completion(sys)
    jc = jet_count(target, N, R=report.gauge_generators)
    data = report.u_data
    d = sys.dimension
    hilbert_u = [data.hilbert_function(k) for k in range(N + 1)]
    threshold = data.stabilization_threshold
    section = {
        "N": N,
        "h_sigma": jc.h_sigma,
        "h_gauge": jc.h_trivial,
        "h_u": jc.h_u,
        "matches_hilbert": jc.h_u == hilbert_u,
        "stabilization_threshold": threshold,
        "estimate": None,
    }
    if N >= 1 and d >= 2:
        section["estimate"] = str(einstein_estimate(target, N, counts=jc))
    dof = None
    if d == 1:
        if N >= threshold:
            dof = sum(jc.h_u)
    elif N >= threshold + d - 2 and N >= d - 2:
        dof = _finite_difference(jc.h_u[N - (d - 2):], d - 2)[0]
    return section, dof


def analyze(sys, methods=("ext", "graded", "brst"), oracle_N=DEFAULT_ORACLE_N, conjugate=False, budget=None):
    """Run the requested methods and return a JSON-ready report dictionary."""
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    budget = budget if budget is not None else current_budget()
    timings = {}
    with budget_scope(budget):
        t0 = time.perf_counter()
        rep = dof_pipeline(sys, with_conjugate=conjugate, methods=methods)
        timings["pipeline"] = round(time.perf_counter() - t0, 4)
        chi = poincare = chi_b = None
        if rep.complex is not None:
            c = min_shift(rep.complex)
            gens = brst_generators(rep.complex, c)
            chi = euler_characteristic(gens)
            poincare = poincare_series(gens)
            chi_b = dual_euler(chi, sys.dimension)
        oracle = None
        method_results = {k: v for k, v in rep.method_results.items() if k in methods}
        if "oracle" in methods:
            t0 = time.perf_counter()
            oracle, n_or = oracle_section(sys, rep, oracle_N)
            timings["oracle"] = round(time.perf_counter() - t0, 4)
            if not oracle["matches_hilbert"]:
                raise InternalError("jet counts disagree with the Hilbert function of U")
            if n_or is None:
                method_results["oracle"] = NOT_APPLICABLE
                rep.notes.append(f"oracle N={oracle_N} below the stabilization range")
            else:
                if n_or != rep.dof:
                    raise InternalError(f"method disagreement: oracle {n_or} != {rep.dof}")
                method_results["oracle"] = n_or
    for k, v in timings.items():
        if v > SOFT_TIMER:
            rep.notes.append(f"{k} exceeded the {SOFT_TIMER:.0f} s soft timer ({v} s)")
    u = rep.u_data
    return {
        "dof": rep.dof,
        "methods": method_results,
        "flags": rep.flags,
        "equation_orders": rep.equation_orders,
        "identity_orders": rep.identity_orders,
        "symmetry_orders": rep.symmetry_orders,
        "qf": str(rep.qf) if rep.qf is not None else None,
        "euler_characteristic": chi.to_string() if chi is not None else None,
        "conjugate_dof": rep.conjugate_dof,
        "oracle": oracle,
        "meta": {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "budget_gb": budget,
            "timings": timings,
            "dimension": sys.dimension,
            "fields": list(sys.field_names),
            "equations": list(sys.equation_names),
            "u_dimension": None if u.is_zero else u.dimension,
            "u_multiplicity": u.multiplicity,
            "u_series": str(u.series),
            "stabilization_threshold": u.stabilization_threshold,
            "poincare_series": poincare.to_string() if poincare is not None else None,
            "dual_euler": chi_b.to_string() if chi_b is not None else None,
            "notes": rep.notes,
        },
    }


def emit_report(report, format="json"):
    if format == "json":
        return (json.dumps(report, indent=2) + "\n").encode("utf-8")
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    lines = []
    meta = report["meta"]
    lines.append(f"system: d = {meta['dimension']}, {len(meta['fields'])} fields, {len(meta['equations'])} equations")
    flags = ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in report["flags"].items())
    lines.append(f"flags: {flags}")
    lines.append("equation orders: " + " ".join(str(k) for k in report["equation_orders"]))
    for name, v in report["methods"].items():
        lines.append(f"method {name}: {v}")
    if report["qf"] is not None:
        lines.append(f"Q_F(z) = {report['qf']}")
    if report["identity_orders"]:
        lines.append(f"gauge identity orders: {report['identity_orders']}")
    if report["symmetry_orders"]:
        lines.append(f"gauge symmetry orders: {report['symmetry_orders']}")
    if report["euler_characteristic"] is not None:
        lines.append(f"chi_C(z) = {report['euler_characteristic']}")
    if report["conjugate_dof"] is not None:
        lines.append(f"conjugate DoF = {report['conjugate_dof']}")
    if report["oracle"]:
        o = report["oracle"]
        lines.append(f"oracle N = {o['N']}: h_U = {o['h_u']}, estimate = {o['estimate']}")
    for note in meta["notes"]:
        lines.append(f"note: {note}")
    lines.append(f"DoF = {report['dof']}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_report(data):
    """Inverse of emit_report(..., 'json')."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data)


def resolution_report(cx):
    """Betti tables of both sides and of the glued complex, JSON-ready."""
    return {
        "v_part": [list(F.generator_degrees) for F in cx.v_part.terms],
        "w_part": [list(F.generator_degrees) for F in cx.w_part.terms],
        "betti": cx.betti.to_rows(),
        "qf": str(cx.qf),
    }

