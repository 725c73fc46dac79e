"""Serialization of covers and analysis reports (JSON / CSV)."""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from importlib import resources

from .enumeration import Instance, instance_from_edges
from .errors import ParseError, ValidationError
from .graph import Graph, edge_key
from .information import CostModel, InformationReport
from .motifs import canonicalizer, edges_to_mask, motif_from_id
from .solver import Cover

SCHEMA_ID = "subcover-report/1"


# -- cover JSON ------------------------------------------------------------------

def cover_to_json(cover: Cover, g: Graph) -> list[dict]:
    """Instances as ``{motif, vertices, edges}`` using the graph's original ids."""
    lab = g.labels
    out = []
    for inst in sorted(cover.instances, key=lambda i: (i.motif, i.edges)):
        out.append({
            "motif": inst.motif,
            "vertices": [lab[v] for v in inst.vertices],
            "edges": [[lab[u], lab[v]] for u, v in inst.edges],
        })
    return out


def dump_cover(cover: Cover, g: Graph, fh) -> None:
    json.dump(cover_to_json(cover, g), fh, indent=1)
    fh.write("\n")


def load_cover(data, g: Graph) -> Cover:
    """Rebuild and validate a cover against ``g``.

    ``data`` is the instance array, or a report object carrying a ``cover``
    key.  Raises :class:`ValidationError` naming the offending instance or
    listing the uncovered edges.
    """
    if isinstance(data, dict):
        if "cover" not in data:
            raise ParseError("report has no cover listing; rerun analyze with --emit-cover")
        data = data["cover"]
    if not isinstance(data, list):
        raise ParseError("cover JSON must be an array of instances")
    index = g.index_of_label()
    instances = []
    for pos, item in enumerate(data):
        try:
            motif = item["motif"]
            raw_edges = item["edges"]
            raw_verts = item.get("vertices")
        except (KeyError, TypeError):
            raise ParseError(f"instance #{pos} lacks 'motif' or 'edges'") from None
        name = f"instance #{pos} ({motif})"
        try:
            edges = [edge_key(index[int(u)], index[int(v)], g.directed) for u, v in raw_edges]
        except KeyError as exc:
            raise ValidationError(f"{name}: vertex {exc.args[0]} is not in the graph") from None
        for e in edges:
            if e not in g.edge_id:
                u, v = g.labels[e[0]], g.labels[e[1]]
                raise ValidationError(f"{name}: edge ({u}, {v}) is not in the graph")
        inst = instance_from_edges(motif, edges)
        if raw_verts is not None and sorted(index.get(int(v), -1) for v in raw_verts) != list(inst.vertices):
            raise ValidationError(f"{name}: vertex list does not match its edges")
        try:
            m = motif_from_id(motif)
        except ParseError as exc:
            raise ValidationError(f"{name}: {exc}") from None
        if m.directed != g.directed or len(inst.vertices) != m.size or len(inst.edges) != m.edge_count:
            raise ValidationError(f"{name}: edges do not form motif {motif}")
        local = {v: i for i, v in enumerate(inst.vertices)}
        mask = edges_to_mask(m.size, [(local[u], local[v]) for u, v in inst.edges], g.directed)
        if canonicalizer(m.size, g.directed).classify(mask)[0] != m.mask:
            raise ValidationError(f"{name}: edges do not form motif {motif}")
        instances.append(inst)
    cover = Cover.from_instances(g, instances)
    missing = cover.uncovered(g)
    if missing:
        shown = ", ".join(f"({g.labels[u]}, {g.labels[v]})" for u, v in missing[:20])
        more = f" and {len(missing) - 20} more" if len(missing) > 20 else ""
        raise ValidationError(f"cover leaves {len(missing)} edge(s) uncovered: {shown}{more}")
    return cover


def read_cover(path, g: Graph) -> Cover:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from None
    return load_cover(data, g)


# -- analysis report -------------------------------------------------------------

def motif_rows(info: InformationReport, model: CostModel, ranges=None) -> list[dict]:
    rows = []
    for r in info.rows:
        m = motif_from_id(r.canonical_id)
        row = {
            "motif": r.canonical_id,
            "size": m.size,
            "edges": m.edge_count,
            "aut": m.aut_size,
            "count": r.count,
            "entropy_bits": r.entropy,
            "epsilon_bits": r.epsilon,
            "log_star_count": model.log_star(r.count),
            "c_score": r.c_score,
            "normalized_c_score": r.normalized,
        }
        if ranges is not None:
            row["count_range"] = list(ranges.get(r.canonical_id, (r.count, r.count)))
        rows.append(row)
    return rows


def totals(info: InformationReport, N: int, model: CostModel) -> dict:
    return {
        "sigma": info.sigma,
        "eri": info.eri,
        "delta_sigma": info.delta_sigma,
        "compression_percent": 100.0 * info.compression,
        "log_star_N": model.log_star(N),
    }


def build_report(g: Graph, info: InformationReport, model: CostModel, *, source: str | None,
                 config: dict, runs: list[dict] | None = None, ranges=None,
                 cover: Cover | None = None, command: str = "analyze") -> dict:
    report = {
        "schema": SCHEMA_ID,
        "command": command,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "input": {"path": source, "N": g.n, "E": g.m, "directed": g.directed},
        "config": config,
        "motifs": motif_rows(info, model, ranges),
        "totals": totals(info, g.n, model),
        "profile_defined": any(r.c_score > 0 for r in info.rows),
    }
    if runs is not None:
        report["runs"] = runs
    if cover is not None:
        report["cover"] = cover_to_json(cover, g)
    return report


def dumps_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=False) + "\n"


def dumps_csv(report: dict) -> str:
    """Per-motif rows, then totals rounded to whole bits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["motif", "size", "edges", "count", "count_min", "count_max", "entropy_bits",
                "epsilon_bits", "c_score", "normalized_c_score"])
    for r in report["motifs"]:
        lo, hi = r.get("count_range", (r["count"], r["count"]))
        w.writerow([r["motif"], r["size"], r["edges"], r["count"], lo, hi,
                    round(r["entropy_bits"]), round(r["epsilon_bits"]),
                    f"{r['c_score']:.6g}", f"{r['normalized_c_score']:.6g}"])
    t = report["totals"]
    w.writerow([])
    w.writerow(["N", "E", "sigma", "eri", "delta_sigma", "compression_percent"])
    w.writerow([report["input"]["N"], report["input"]["E"], round(t["sigma"]), round(t["eri"]),
                round(t["delta_sigma"]), f"{t['compression_percent']:.2f}"])
    return buf.getvalue()


def load_schema() -> dict:
    text = resources.files("subcover").joinpath("schemas/report.schema.json").read_text("utf-8")
    return json.loads(text)


def strip_volatile(report: dict) -> dict:
    """Copy without the timestamp, for reproducibility comparisons."""
    return {k: v for k, v in report.items() if k != "generated_at"}


__all__ = ["build_report", "cover_to_json", "dump_cover", "dumps_csv", "dumps_json",
           "load_cover", "load_schema", "read_cover", "strip_volatile", "Instance"]
