"""Report documents: one self-describing structure per run, rendered as
human-readable text or JSON.

Verdicts and the bound line are fixed strings so downstream tooling can grep
them.  All numbers are written with shortest round-trip reprs; rendering a
report twice from the same inputs yields identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .analysis import BOUND_TOL, VennChain
from .lhv import SETTINGS, DeterminismReport, HypothesisFlags, LhvModel
from .modelfile import model_to_document
from .montecarlo import EstimateReport
from .quantum import CorrelationRecord

VERDICT_SATISFIES = "SATISFIES Bell inequality"
VERDICT_VIOLATES = "VIOLATES Bell inequality"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE (statistical)"

BOUND_ANCHOR = "bound: p_same(A,B) + p_same(A,C) + p_same(B,C) >= 1"
CHAIN_CONFIRMED = "locality + perfect correlations => deterministic responses: CONFIRMED"
CHAIN_NOT_ESTABLISHED = (
    "locality + perfect correlations => deterministic responses: PREMISES NOT SATISFIED"
)

# Standing assumptions about the experimenter, not the model; always true here
# because setting choices are drawn independently of everything else.
ASSUMPTIONS = {
    "no_super_determinism": True,
    "measurement_independence": True,
}
ASSUMPTIONS_NOTE = (
    "assumed: setting choices independent of the hidden variable and of future "
    "outcomes (no super-determinism; measurement independence)"
)

_VERDICTS = (VERDICT_SATISFIES, VERDICT_VIOLATES, VERDICT_INCONCLUSIVE)


@dataclass(frozen=True)
class ReportDocument:
    """A single run's report: mode tag, echoed inputs, results, verdict line."""

    mode: str
    inputs: dict
    results: dict
    verdict: str | None

    def __post_init__(self) -> None:
        if self.verdict is not None and self.verdict not in _VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")


def verdict_for_sum(bell_sum: float) -> str:
    return VERDICT_SATISFIES if bell_sum >= 1.0 - BOUND_TOL else VERDICT_VIOLATES


def verdict_for_estimate(report: EstimateReport) -> str:
    """Statistical verdict: decided only when the 99% interval clears 1."""
    if report.bell_sum_interval is None:
        return VERDICT_INCONCLUSIVE
    lo, hi = report.bell_sum_interval
    if hi < 1.0:
        return VERDICT_VIOLATES
    if lo >= 1.0:
        return VERDICT_SATISFIES
    return VERDICT_INCONCLUSIVE


def _f(x: float) -> str:
    return repr(float(x))


def _record_dict(record: CorrelationRecord) -> dict:
    return {
        "p_same_ab": record.p_same_ab,
        "p_same_ac": record.p_same_ac,
        "p_same_bc": record.p_same_bc,
        "bell_sum": record.bell_sum,
    }


def _flags_dict(flags: HypothesisFlags) -> dict:
    return {
        "counterfactual_definite": flags.counterfactual_definite,
        "hidden_variable": flags.hidden_variable,
        "bell_local": flags.bell_local,
        "perfect_correlations": flags.perfect_correlations,
        "einstein_local": flags.einstein_local,
    }


def quantum_report(angles_deg: tuple[float, float, float], record: CorrelationRecord) -> ReportDocument:
    return ReportDocument(
        mode="quantum",
        inputs={
            "state": "(|00> + |11>)/sqrt(2)",
            "angles_deg": {"A": angles_deg[0], "B": angles_deg[1], "C": angles_deg[2]},
        },
        results=_record_dict(record),
        verdict=verdict_for_sum(record.bell_sum),
    )


def lhv_report(
    model_source: str,
    model: LhvModel,
    record: CorrelationRecord,
    flags: HypothesisFlags,
    chain: VennChain | None,
) -> ReportDocument:
    results = {
        "correlations": _record_dict(record),
        "hypotheses": _flags_dict(flags),
        "assumptions": dict(ASSUMPTIONS),
    }
    if chain is not None:
        results["venn"] = {
            "dashed": chain.areas.dashed,
            "gray": chain.areas.gray,
            "dotted": chain.areas.dotted,
            "residual": chain.areas.residual,
            "area_sum": chain.area_sum,
            "p_same_sum": chain.p_same_sum,
            "chain_holds": chain.holds,
        }
    else:
        results["venn"] = None
    return ReportDocument(
        mode="lhv",
        inputs={"model": model_source, "lambdas": len(model.lambdas), "document": model_to_document(model)},
        results=results,
        verdict=verdict_for_sum(record.bell_sum),
    )


def scan_report(
    step_deg: float,
    refined: bool,
    csv_path: str,
    grid_points: int,
    min_sum: float,
    argmin_deg: tuple[float, float],
) -> ReportDocument:
    return ReportDocument(
        mode="scan",
        inputs={"step_deg": step_deg, "refine": refined, "csv": csv_path},
        results={
            "grid_points": grid_points,
            "family": "equatorial bases only",
            "min_sum": min_sum,
            "argmin_deg": {
                "theta_a": 0.0,
                "theta_b": argmin_deg[0],
                "theta_c": argmin_deg[1],
            },
            "refined": refined,
        },
        verdict=verdict_for_sum(min_sum),
    )


def sample_report(report: EstimateReport, model_source: str | None = None) -> ReportDocument:
    inputs = {
        "n_samples": report.config.n_samples,
        "seed": report.config.seed,
        "source": report.config.source,
        "settings_policy": report.config.settings_policy,
    }
    if model_source is not None:
        inputs["model"] = model_source
    pairs = [
        {
            "settings": f"{p.setting_1}{p.setting_2}",
            "n_trials": p.n_trials,
            "n_same": p.n_same,
            "p_same": p.p_same,
            "std_error": p.std_error,
            "ci99": list(p.interval),
            "method": p.method,
        }
        for p in report.pairs
    ]
    results = {
        "pairs": pairs,
        "bell_sum": report.bell_sum,
        "bell_sum_std_error": report.bell_sum_std_error,
        "bell_sum_ci99": list(report.bell_sum_interval) if report.bell_sum_interval else None,
        "assumptions": dict(ASSUMPTIONS),
    }
    return ReportDocument(
        mode="sample",
        inputs=inputs,
        results=results,
        verdict=verdict_for_estimate(report),
    )


def _chain_line(derivation: DeterminismReport) -> str:
    if not derivation.precondition_ok:
        return CHAIN_NOT_ESTABLISHED
    if derivation.holds:
        return CHAIN_CONFIRMED
    return "locality + perfect correlations => deterministic responses: FAILED"


def determinism_report(
    model_source: str,
    model: LhvModel,
    locality_ok: bool,
    derivation: DeterminismReport,
) -> ReportDocument:
    results = {
        "assumptions": dict(ASSUMPTIONS),
        "bell_locality_factorization": locality_ok,
        "perfect_correlations": {
            s: {"holds": m10 <= 1e-12 and m01 <= 1e-12, "discordance_10": m10, "discordance_01": m01}
            for s, m10, m01 in derivation.discordance_by_setting
        },
        "chain": _chain_line(derivation),
        "degenerate_support": derivation.degenerate,
        "witnesses": [
            {
                "lambda": w.lambda_id,
                "setting": w.setting,
                "p1": list(w.p1),
                "p2": list(w.p2),
                "deterministic": w.deterministic,
                "objects_equal": w.objects_equal,
            }
            for w in derivation.witnesses
        ],
        "failures": [
            {"setting": f.setting, "lambda": f.lambda_id, "discordance_mass": f.mass}
            for f in derivation.failures
        ],
    }
    return ReportDocument(
        mode="determinism",
        inputs={"model": model_source, "lambdas": len(model.lambdas), "document": model_to_document(model)},
        results=results,
        verdict=None,
    )


def render_json(doc: ReportDocument) -> str:
    payload = {"mode": doc.mode, "inputs": doc.inputs, "results": doc.results}
    if doc.verdict is not None:
        payload["verdict"] = doc.verdict
    return json.dumps(payload, indent=2) + "\n"


def render_text(doc: ReportDocument) -> str:
    renderer = _TEXT_RENDERERS[doc.mode]
    lines = renderer(doc)
    if doc.verdict is not None:
        lines.append(f"verdict: {doc.verdict}")
    return "\n".join(lines) + "\n"


def _header(title: str) -> list[str]:
    return [f"== {title} =="]


def _text_quantum(doc: ReportDocument) -> list[str]:
    a = doc.inputs["angles_deg"]
    r = doc.results
    lines = _header("exact quantum correlations")
    lines.append(f"state: {doc.inputs['state']}")
    lines.append(f"angles [deg]: A={_f(a['A'])}  B={_f(a['B'])}  C={_f(a['C'])}")
    for key in ("p_same_ab", "p_same_ac", "p_same_bc"):
        lines.append(f"{key} = {_f(r[key])}")
    lines.append(f"bell_sum = {_f(r['bell_sum'])}")
    lines.append(BOUND_ANCHOR)
    return lines


def _text_lhv(doc: ReportDocument) -> list[str]:
    lines = _header("hidden-variable model correlations")
    lines.append(f"model: {doc.inputs['model']} ({doc.inputs['lambdas']} lambdas)")
    r = doc.results["correlations"]
    for key in ("p_same_ab", "p_same_ac", "p_same_bc"):
        lines.append(f"{key} = {_f(r[key])}")
    lines.append(f"bell_sum = {_f(r['bell_sum'])}")
    h = doc.results["hypotheses"]
    lines.append(
        "hypotheses: counterfactual_definite="
        + str(h["counterfactual_definite"]).lower()
        + " hidden_variable="
        + str(h["hidden_variable"]).lower()
        + " bell_local="
        + str(h["bell_local"]).lower()
        + " perfect_correlations="
        + str(h["perfect_correlations"]).lower()
    )
    lines.append(f"einstein_local: {h['einstein_local']}")
    lines.append(ASSUMPTIONS_NOTE)
    venn = doc.results["venn"]
    if venn is None:
        lines.append("venn areas: n/a (model is not a distribution over shared triplets)")
    else:
        lines.append(
            f"venn areas: dashed={_f(venn['dashed'])} gray={_f(venn['gray'])} "
            f"dotted={_f(venn['dotted'])} residual={_f(venn['residual'])}"
        )
        lines.append(
            f"area chain: p_same_sum={_f(venn['p_same_sum'])} >= area_sum={_f(venn['area_sum'])} >= 1: "
            + ("holds" if venn["chain_holds"] else "FAILS")
        )
    lines.append(BOUND_ANCHOR)
    return lines


def _text_scan(doc: ReportDocument) -> list[str]:
    r = doc.results
    a = r["argmin_deg"]
    lines = _header("measurement-angle scan")
    lines.append(
        f"theta_a fixed at 0; step {_f(doc.inputs['step_deg'])} deg; "
        f"{r['grid_points']} grid points ({r['family']})"
    )
    lines.append(f"csv: {doc.inputs['csv']}")
    if r["refined"]:
        lines.append("minimum refined locally around the incumbent grid point")
    lines.append(
        f"min bell_sum = {_f(r['min_sum'])} at theta_b={_f(a['theta_b'])} deg, "
        f"theta_c={_f(a['theta_c'])} deg"
    )
    lines.append(BOUND_ANCHOR)
    return lines


def _text_sample(doc: ReportDocument) -> list[str]:
    lines = _header("sampled correlation estimates")
    i = doc.inputs
    lines.append(
        f"n_samples={i['n_samples']} seed={i['seed']} source={i['source']} "
        f"settings_policy={i['settings_policy']}"
    )
    if "model" in i:
        lines.append(f"model: {i['model']}")
    lines.append("pair  n_trials  n_same  p_same  std_error  ci99_low  ci99_high  method")
    for p in doc.results["pairs"]:
        lines.append(
            f"{p['settings']}  {p['n_trials']}  {p['n_same']}  {_f(p['p_same'])}  "
            f"{_f(p['std_error'])}  {_f(p['ci99'][0])}  {_f(p['ci99'][1])}  {p['method']}"
        )
    lines.append(ASSUMPTIONS_NOTE)
    if doc.results["bell_sum"] is None:
        lines.append("bell_sum: n/a (needs trials on all of AB, AC, BC)")
    else:
        ci = doc.results["bell_sum_ci99"]
        lines.append(
            f"bell_sum = {_f(doc.results['bell_sum'])} +/- {_f(doc.results['bell_sum_std_error'])} "
            f"(99% CI [{_f(ci[0])}, {_f(ci[1])}])"
        )
    lines.append(BOUND_ANCHOR)
    return lines


def _text_determinism(doc: ReportDocument) -> list[str]:
    r = doc.results
    lines = _header("determinism derivation")
    lines.append(f"model: {doc.inputs['model']} ({doc.inputs['lambdas']} lambdas)")
    lines.append(ASSUMPTIONS_NOTE)
    lines.append(
        "bell locality factorization (by construction): "
        + ("OK" if r["bell_locality_factorization"] else "FAILED")
    )
    for s in SETTINGS:
        pc = r["perfect_correlations"][s]
        if pc["holds"]:
            lines.append(f"perfect correlation on {s}: OK")
        else:
            lines.append(
                f"perfect correlation on {s}: FAILED "
                f"(discordance {_f(pc['discordance_10'])} + {_f(pc['discordance_01'])})"
            )
    lines.append(r["chain"])
    if r["degenerate_support"]:
        lines.append("support is empty: determinism holds vacuously (degenerate)")
    if r["failures"]:
        lines.append("failing (setting, lambda) discordance masses:")
        for f in r["failures"]:
            lines.append(f"  {f['setting']}  {f['lambda']}  mass={_f(f['discordance_mass'])}")
    if r["witnesses"]:
        lines.append("witnesses: lambda  setting  P1(0) P1(1)  P2(0) P2(1)  deterministic  equal")
        for w in r["witnesses"]:
            lines.append(
                f"  {w['lambda']}  {w['setting']}  {_f(w['p1'][0])} {_f(w['p1'][1])}  "
                f"{_f(w['p2'][0])} {_f(w['p2'][1])}  {str(w['deterministic']).lower()}  "
                f"{str(w['objects_equal']).lower()}"
            )
    return lines


_TEXT_RENDERERS = {
    "quantum": _text_quantum,
    "lhv": _text_lhv,
    "scan": _text_scan,
    "sample": _text_sample,
    "determinism": _text_determinism,
}
