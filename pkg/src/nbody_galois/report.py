"""JSON-ready dictionaries and Markdown rendering of analysis results.

Exact values are written as strings (``"7/5"``, ``"-61/80 - 1/80*sqrt(3961)"``)
so that certificates survive a JSON round trip unchanged.  Indices shown to
users (bodies in an ordering, delta number) are 1-based.
"""

from __future__ import annotations

import json
from importlib import resources

import mpmath

from .central_config import CollinearConfig, Spectrum
from .kovacic.analysis import DeltaAnalysis, ObstructionReport
from .kovacic.verdict import Verdict
from .variational.scalar import ReducedEquation, Singularity

REPORT_VERSION = 1


def load_schema() -> dict:
    text = resources.files("nbody_galois").joinpath("schema/report_v1.json").read_text()
    return json.loads(text)


def _s(x) -> str | None:
    return None if x is None else str(x)


def _num(x: float) -> float:
    # 15 significant digits keep the JSON identical across platforms
    return float(f"{float(x):.15g}")


def _enclosure(sing_exp, precision: int) -> list[str]:
    digits = max(5, int(precision * 0.30103))
    with mpmath.workprec(precision):
        v = sing_exp.enclosure(precision)
        return [mpmath.nstr(v.real, digits), mpmath.nstr(v.imag, digits)]


def config_dict(config: CollinearConfig) -> dict:
    return {
        "masses": [_num(m) for m in config.masses.masses],
        "ordering": [k + 1 for k in config.ordering],
        "x": [_num(v) for v in config.x],
        "mu": _num(config.mu),
        "V": _num(config.V_value),
        "I": _num(config.I_value),
        "residual": _num(config.residual),
    }


def spectrum_dict(spec: Spectrum) -> dict:
    return {
        "lambdas": [_num(v) for v in spec.lambdas],
        "deltas": [
            {
                "float": _num(rd.float_value),
                "rational": str(rd.value),
                "bound": _num(rd.bound),
                "lo": str(rd.lo),
                "hi": str(rd.hi),
            }
            for rd in spec.delta_rationalized
        ],
        "eig_error": _num(spec.eig_error),
        "conley_defect": _num(spec.conley_defect),
        "notes": list(spec.notes),
    }


def singularity_dict(s: Singularity, precision: int) -> dict:
    return {
        "location": str(s.location),
        "pole_order": s.pole_order,
        "alpha": str(s.alpha),
        "exponent_difference": str(s.exponent_difference),
        "exponents": [str(e) for e in s.exponents],
        "exponent_enclosures": [_enclosure(e, precision) for e in s.exponents],
    }


def equation_dict(req: ReducedEquation, precision: int) -> dict:
    return {
        "r_numerator": str(req.r.num),
        "r_denominator": str(req.r.den),
        "fuchsian": req.fuchsian,
        "singularities": [singularity_dict(s, precision) for s in req.singularities],
    }


def _diag_value(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return str(v)


def verdict_dict(v: Verdict, precision: int = 128) -> dict:
    out = {
        "branch": v.branch,
        "conclusion": v.conclusion,
        "parameters": None,
        "log_evidence": [
            {
                "singularity": str(lr.singularity),
                "exponent_difference": lr.exponent_difference,
                "g_s": _s(lr.g_s),
                "log_present": lr.log_present,
                "status": lr.status,
            }
            for lr in v.log_evidence
        ],
        "candidates": [
            {
                "exponents": [str(e) for e in o.candidate.exponents()],
                "d": o.candidate.d,
                "polynomial": _s(o.polynomial),
            }
            for o in v.candidates
        ],
        "witness": None if v.witness is None else {
            "exponents": [str(e) for e in v.witness.candidate.exponents()],
            "polynomial": str(v.witness.polynomial),
        },
        "diagnostics": {k: _diag_value(x) for k, x in sorted(v.diagnostics.items())},
        "equation": None if v.reduced is None else equation_dict(v.reduced, precision),
    }
    if v.params is not None:
        p = v.params
        out["parameters"] = {
            "delta": str(p.delta),
            "e": _s(p.e) if not p.circular else None,
            "circular": p.circular,
            "Delta_squared": str(p.DeltaSq),
        }
    return out


def delta_dict(d: DeltaAnalysis, precision: int) -> dict:
    return {
        "index": d.index + 1,
        "delta": str(d.delta.value),
        "delta_float": _num(d.delta.float_value),
        "enclosure": [str(d.delta.lo), str(d.delta.hi)],
        "certified": d.certified,
        "endpoint_runs": [
            {"delta": str(r.delta), "e": _s(r.e), "branch": r.branch, "conclusion": r.conclusion}
            for r in d.endpoints
        ],
        "verdict": verdict_dict(d.verdict, precision),
    }


def analysis_dict(rep: ObstructionReport) -> dict:
    prec = rep.options.precision
    orbit = rep.orbit
    out = {
        "report_version": REPORT_VERSION,
        "command": "analyze",
        "request": {
            "masses": [_num(m) for m in rep.masses],
            "ordering": [k + 1 for k in rep.ordering],
            "h": str(rep.h),
            "c": str(rep.c),
            "precision": prec,
        },
        "case_tag": rep.case_tag,
        "orbit": {
            "e_squared": str(orbit.e2),
            "e": _s(orbit.e),
            "e_exact": orbit.e_exact,
            "e_enclosure": None if orbit.e_lo is None else [str(orbit.e_lo), str(orbit.e_hi)],
        },
        "config": None if rep.config is None else config_dict(rep.config),
        "spectrum": None if rep.spectrum is None else spectrum_dict(rep.spectrum),
        "per_delta": [delta_dict(d, prec) for d in rep.per_delta],
        "overall": rep.overall,
        "notes": list(rep.notes),
    }
    if rep.timings:
        out["timings"] = {k: round(v, 4) for k, v in sorted(rep.timings.items())}
    return out


def to_json(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- Markdown ------------------------------------------------------------

def _md_table(header: list[str], rows: list[list]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r in rows:
        lines.append("| " + " | ".join(str(x) for x in r) + " |")
    return lines


def _md_config(cd: dict) -> list[str]:
    rows = [[b, m, f"{x:.15g}"] for b, m, x in zip(cd["ordering"], cd["masses"], [cd["x"][k - 1] for k in cd["ordering"]])]
    out = ["## Central configuration", ""]
    out += _md_table(["body (left to right)", "mass", "x"], rows)
    out += ["", f"mu = {cd['mu']}, residual = {cd['residual']:.3e}", ""]
    return out


def _md_spectrum(sd: dict) -> list[str]:
    out = ["## Spectrum of C", "", "lambda = " + ", ".join(f"{v:.15g}" for v in sd["lambdas"]), ""]
    if sd["deltas"]:
        out += _md_table(
            ["k", "delta (float)", "rational", "bound"],
            [[k + 1, f"{d['float']:.15g}", d["rational"], f"{d['bound']:.2g}"] for k, d in enumerate(sd["deltas"])],
        )
        out.append("")
    out += [f"- {n}" for n in sd["notes"]]
    return out


def _md_verdict(vd: dict) -> list[str]:
    out = [f"- branch: {vd['branch']}", f"- conclusion: **{vd['conclusion']}**"]
    if vd["equation"]:
        out += ["", "Singular points:", ""]
        out += _md_table(
            ["point", "pole order", "alpha", "exponent difference"],
            [[s["location"], s["pole_order"], s["alpha"], s["exponent_difference"]] for s in vd["equation"]["singularities"]],
        )
    if vd["log_evidence"]:
        out += ["", "Logarithmic terms:", ""]
        out += _md_table(
            ["point", "s", "g_s", "log"],
            [[lr["singularity"], lr["exponent_difference"], lr["g_s"], lr["log_present"]] for lr in vd["log_evidence"]],
        )
    out += ["", f"Kovacic case 1 candidates: {len(vd['candidates'])}", ""]
    if vd["candidates"]:
        out += _md_table(
            ["exponents", "d", "polynomial"],
            [[", ".join(c["exponents"]), c["d"], c["polynomial"] or "none"] for c in vd["candidates"]],
        )
    if vd["diagnostics"]:
        out += ["", "Diagnostics:", ""]
        out += [f"- {k}: {v}" for k, v in vd["diagnostics"].items()]
    return out


def analysis_markdown(d: dict) -> str:
    req = d["request"]
    out = [
        "# Non-integrability analysis",
        "",
        f"masses {req['masses']}, h = {req['h']}, c = {req['c']}",
        "",
        f"**Overall: {d['overall']}** (case {d['case_tag']})",
        "",
    ]
    if d["config"]:
        out += _md_config(d["config"])
    if d["spectrum"]:
        out += _md_spectrum(d["spectrum"])
    for pd in d["per_delta"]:
        out += ["", f"## delta_{pd['index']} = {pd['delta']}", ""]
        out.append(f"enclosure [{pd['enclosure'][0]}, {pd['enclosure'][1]}], certified: {pd['certified']}")
        out.append("")
        out += _md_verdict(pd["verdict"])
    if d["notes"]:
        out += ["", "## Notes", ""] + [f"- {n}" for n in d["notes"]]
    return "\n".join(out) + "\n"


def config_report(config: CollinearConfig, spec: Spectrum | None, command: str) -> dict:
    out = {
        "report_version": REPORT_VERSION,
        "command": command,
        "config": config_dict(config),
        "spectrum": None if spec is None else spectrum_dict(spec),
    }
    return out


def config_markdown(d: dict) -> str:
    out = [f"# {d['command']}", ""]
    out += _md_config(d["config"])
    if d["spectrum"]:
        out += _md_spectrum(d["spectrum"])
    return "\n".join(out) + "\n"


def verify_report(results: list, instance: dict) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "command": "verify",
        "instance": instance,
        "checks": [
            {"suite": r.suite, "name": r.name, "value": _num(r.value), "tol": _num(r.tol), "passed": r.passed}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }


def verify_markdown(d: dict) -> str:
    out = ["# Invariant suite", ""]
    out += _md_table(
        ["suite", "check", "value", "tolerance", "ok"],
        [[c["suite"], c["name"], f"{c['value']:.3e}", f"{c['tol']:.0e}", "yes" if c["passed"] else "NO"] for c in d["checks"]],
    )
    out += ["", f"**{'all passed' if d['passed'] else 'FAILED'}**"]
    return "\n".join(out) + "\n"
