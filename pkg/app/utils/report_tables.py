"""
Human-readable rendering of run reports as pandas tables.
"""
import json

import pandas as pd

from app.schemas import RunReport


def _cell(value) -> str:
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def key_value_table(payload: dict) -> pd.DataFrame:
    """Flatten a nested payload into (field, value) rows with dotted field names."""
    if not payload:
        return pd.DataFrame(columns=["field", "value"])
    flat = pd.json_normalize(payload, sep=".").iloc[0]
    return pd.DataFrame({"field": flat.index, "value": [_cell(v) for v in flat.values]})


def census_table(results: dict) -> pd.DataFrame:
    rows = []
    for k, c in enumerate(results.get("classes", [])):
        rows.append({
            "class": k,
            "valuations": _cell(c["valuations"]),
            "rigid": c["rigid"],
            "end_rank": c["end_rank"],
            "residue_end_dim": c["residue_end_dim"],
            "ext1": _cell(c["ext1"]["invariants"]),
            "multiplicities": _cell(c["multiplicities"]),
        })
    return pd.DataFrame(rows, columns=[
        "class", "valuations", "rigid", "end_rank", "residue_end_dim", "ext1", "multiplicities",
    ])


def level_table(results: dict) -> pd.DataFrame:
    counts = results.get("level_counts", {})
    return pd.DataFrame(
        {"colength": [int(k) for k in counts], "sublattices": list(counts.values())}
    ).sort_values("colength")


def render_report(report: RunReport) -> str:
    header = {
        "command": report.command,
        "seed": report.seed,
        "context": report.context,
    }
    sections = [key_value_table(header).to_string(index=False)]

    results = dict(report.results)
    census = results.pop("census", None) if isinstance(results.get("census"), dict) else None
    if census is None and "classes" in results:
        census, results = results, {}
    if results:
        sections.append(key_value_table(results).to_string(index=False))
    if census is not None:
        summary = {k: v for k, v in census.items() if k not in ("classes", "level_counts")}
        sections.append(key_value_table(summary).to_string(index=False))
        sections.append(level_table(census).to_string(index=False))
        sections.append(census_table(census).to_string(index=False))

    if report.precision_retries:
        retries = pd.DataFrame([r.model_dump() for r in report.precision_retries])
        sections.append("precision retries:\n" + retries.to_string(index=False))
    if report.timings:
        timings = pd.DataFrame({"stage": list(report.timings), "seconds": list(report.timings.values())})
        sections.append(timings.to_string(index=False, float_format=lambda s: f"{s:.3f}"))
    return "\n\n".join(sections) + "\n"
