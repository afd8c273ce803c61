"""Report assembly and rendering for the command line front end.

Each subcommand produces one report tree (plain dicts, lists, floats).
The machine rendering is canonical JSON (sorted keys, two-space indent);
the text rendering walks the same tree and prints every number with its
full shortest round-trip representation, so both carry identical numeric
values and byte-identical output for identical inputs.
"""

from __future__ import annotations

import json
import math

from .ensembles import purify, rho_left, allowed_subspace, schmidt
from .linalg import frobenius, real_trace
from .measurement import (
    complete_pom,
    confidence_of,
    confidence_report,
    max_confidence,
    simulate_measurement,
)
from .nosignalling import (
    bound_bipartite,
    confidence_bipartite,
    marginal_invariance,
    subspace_leakage,
)
from .specio import matrix_to_json
from .transforms import apply_kraus, concentrate, monotonicity_check

DEFAULT_TOLERANCE = 1e-9


def _kind(ens, j: int) -> str:
    return "pure" if ens.is_pure(j) else "mixed"


def bound_report(ens) -> dict:
    states = [
        {
            "label": j,
            "prior": float(ens.priors[j]),
            "kind": _kind(ens, j),
            "bound": max_confidence(ens, j),
        }
        for j in range(ens.n_states)
    ]
    return {"command": "bound", "dimension": ens.dim, "states": states}


def pom_report(ens) -> dict:
    pom = complete_pom(ens)
    rep = confidence_report(ens, pom)
    states = []
    for (label, e), (_, bound, achieved, prob) in zip(pom.effects, rep.records):
        states.append(
            {
                "label": label,
                "prior": float(ens.priors[label]),
                "kind": _kind(ens, label),
                "bound": bound,
                "confidence": achieved,
                "outcome_probability": prob,
                "effect": matrix_to_json(e),
            }
        )
    return {
        "command": "pom",
        "dimension": ens.dim,
        "states": states,
        "fail_effect": matrix_to_json(pom.fail),
        "inconclusive_probability": rep.inconclusive_probability,
    }


def verify_report(ens, tolerance: float) -> tuple[dict, bool]:
    """Cross-picture verification tree plus an overall pass flag."""
    bs = purify(ens)
    rl = rho_left(ens)
    pd = allowed_subspace(bs, rl)
    sd = schmidt(bs)
    pom = complete_pom(ens)

    gaps = {}
    gaps["purification_residual"] = frobenius(bs.left_marginal() - rl)
    gaps["schmidt_reconstruction"] = frobenius(sd.reconstruct() - bs.amplitudes)
    gaps["projector_gap"] = frobenius(sd.right_vectors @ sd.right_vectors.conj().T - pd.matrix)
    gaps["marginal_deviation"] = marginal_invariance(bs, pom)

    per_state = []
    worst_leakage = 0.0
    for label, e in pom.effects:
        bound = max_confidence(ens, label)
        achieved = confidence_of(ens, e, label)
        entry = {
            "label": label,
            "bound": bound,
            "bound_gap": abs(bound_bipartite(bs, pd, label) - bound),
            "achievability_gap": abs(achieved - bound),
            "crosspicture_gap": abs(confidence_bipartite(bs, e, label) - achieved),
            "leakage": subspace_leakage(bs, pd, e),
        }
        worst_leakage = max(worst_leakage, entry["leakage"])
        per_state.append(entry)

    fail_weight = real_trace(ens.average @ pom.fail)
    if fail_weight > 1e-12:
        gaps["fail_leakage"] = subspace_leakage(bs, pd, pom.fail)
        worst_leakage = max(worst_leakage, gaps["fail_leakage"])
    else:
        gaps["fail_leakage"] = None

    exceeded = sorted(
        name
        for name, value in gaps.items()
        if value is not None and value > tolerance
    )
    for entry in per_state:
        for name in ("bound_gap", "achievability_gap", "crosspicture_gap", "leakage"):
            if entry[name] > tolerance:
                exceeded.append(f"states[{entry['label']}].{name}")

    report = {
        "command": "verify",
        "dimension": ens.dim,
        "tolerance": float(tolerance),
        "checks": gaps,
        "states": per_state,
        "exceeded": exceeded,
        "status": "pass" if not exceeded else "fail",
    }
    return report, not exceeded


def simulate_report(ens, trials: int, seed: int) -> dict:
    pom = complete_pom(ens)
    rep = confidence_report(ens, pom)
    sim = simulate_measurement(ens, pom, trials, seed)
    outcomes = []
    for k, (label, _) in enumerate(pom.effects):
        expected = rep.records[k][2]
        count = sim.outcome_counts[k]
        freq = sim.conditional_frequencies[k]
        band = 3.0 * math.sqrt(expected * (1.0 - expected) / count) if count else None
        outcomes.append(
            {
                "label": label,
                "count": count,
                "frequency": freq,
                "expected_confidence": expected,
                "band_3sigma": band,
            }
        )
    return {
        "command": "simulate",
        "dimension": ens.dim,
        "trials": sim.trials,
        "seed": sim.seed,
        "outcomes": outcomes,
        "fail": {
            "count": sim.fail_count,
            "frequency": sim.fail_frequency,
            "expected_probability": rep.inconclusive_probability,
        },
    }


def concentrate_report(ens) -> dict:
    bs = purify(ens)
    before = schmidt(bs)
    result = concentrate(bs)
    after = schmidt(result.post_state)
    return {
        "command": "concentrate",
        "dimension": ens.dim,
        "schmidt_before": [float(x) for x in before.coefficients],
        "schmidt_after": [float(x) for x in after.coefficients],
        "success_probability": result.success_probability,
        "kraus": matrix_to_json(result.kraus.matrix),
        "fail_effect": matrix_to_json(result.fail_effect),
    }


def transform_report(ens, kraus, tolerance: float) -> tuple[dict, bool]:
    transformed, success = apply_kraus(ens, kraus)
    states = []
    ok = True
    for j in range(ens.n_states):
        record = monotonicity_check(ens, kraus, j, tol=tolerance)
        ok = ok and record.ok
        states.append(
            {
                "label": j,
                "prior_before": float(ens.priors[j]),
                "prior_after": float(transformed.priors[j]),
                "confidence_before": record.confidence_before,
                "confidence_after": record.confidence_after,
                "full_rank_on_support": record.full_rank_on_support,
                "verdict": record.verdict,
            }
        )
    report = {
        "command": "transform",
        "dimension": ens.dim,
        "kraus_rank": kraus.rank,
        "success_probability": success,
        "states": states,
        "status": "pass" if ok else "fail",
    }
    return report, ok


def render_machine(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _numeric_tree(node) -> bool:
    if isinstance(node, bool):
        return False
    if isinstance(node, (int, float)):
        return True
    if isinstance(node, list):
        return bool(node) and all(_numeric_tree(x) for x in node)
    return False


def _scalar(node) -> str:
    if node is None:
        return "null"
    if isinstance(node, bool):
        return "true" if node else "false"
    if isinstance(node, float):
        return repr(float(node))
    return str(node)


def _walk(node, depth: int, lines: list, label) -> None:
    pad = "  " * depth
    head = f"{pad}{label}" if label is not None else pad
    if isinstance(node, dict):
        if label is not None:
            lines.append(f"{head}:")
            depth += 1
        for key, value in node.items():
            _walk(value, depth, lines, key)
    elif isinstance(node, list):
        if _numeric_tree(node) or not node:
            lines.append(f"{head}: {json.dumps(node)}")
        else:
            lines.append(f"{head}:")
            for item in node:
                if isinstance(item, dict):
                    lines.append(f"{pad}  -")
                    for key, value in item.items():
                        _walk(value, depth + 2, lines, key)
                else:
                    _walk(item, depth + 1, lines, "-")
    else:
        lines.append(f"{head}: {_scalar(node)}")


def render_text(report: dict) -> str:
    lines: list = []
    _walk(report, 0, lines, None)
    return "\n".join(lines) + "\n"


def render(report: dict, output: str) -> str:
    return render_machine(report) if output == "machine" else render_text(report)
