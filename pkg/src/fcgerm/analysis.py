"""Full pipeline on one model: locus, fc table, thin zone, (SC) and separating sets."""
from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .errors import Inconclusive
from .fc import depth_filtration, fc_group_of
from .complex import vertex_components
from .homology import betti_numbers
from .locus import conicalness, detect_non_simple, thick_components, thin_zone
from .model import StrictTransformModel, tangent_link
from .rings import as_ring
from .separating import check_sc, find_separating_set, test_fc_injectivity

STEPS = ("fc", "stability", "thin", "sc")


@dataclass(frozen=True)
class AnalysisOptions:
    ring: str = "gf2"
    s: int = 2
    degrees: tuple | None = None  # fc degrees; default 1..d-1
    skip: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "ring", as_ring(self.ring))
        object.__setattr__(self, "skip", frozenset(self.skip))
        unknown = set(self.skip) - set(STEPS)
        if unknown:
            raise ValueError(f"unknown steps to skip: {sorted(unknown)}")
        if self.s < 0:
            raise ValueError("subdivision level must be >= 0")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["skip"] = sorted(self.skip)
        d["degrees"] = None if self.degrees is None else list(self.degrees)
        return d


@dataclass
class AnalysisReport:
    data: dict
    status: str = "ok"

    @property
    def inconclusive(self) -> bool:
        return self.status == "inconclusive"

    def to_dict(self) -> dict:
        return self.data


def _simplices(K) -> list:
    return [list(s) for s in K.maximal_simplices()]


def _fc_table(model, opts, d) -> list:
    degrees = opts.degrees if opts.degrees is not None else range(1, d)
    filt = depth_filtration(model, opts.s)
    other = None if "stability" in opts.skip else depth_filtration(model, opts.s + 1)
    rows = []
    for k in degrees:
        for delta in range(1, k + 1):
            r = fc_group_of(filt, k, delta, opts.ring).rank
            row = {"k": k, "delta": delta, "rank": r}
            if other is not None:
                row["stable"] = fc_group_of(other, k, delta, opts.ring).rank == r
            rows.append(row)
    return rows


def run_analysis(model: StrictTransformModel, options: AnalysisOptions | None = None) -> AnalysisReport:
    opts = options or AnalysisOptions()
    d = model.dim
    link = tangent_link(model)
    data = {
        "tool": {"name": "fcgerm", "version": __version__},
        "parameters": opts.to_dict(),
        "model": {
            "name": model.name,
            "dim": d,
            "ambient_dim": model.ambient_dim,
            "f_vector": list(model.complex.f_vector),
            "thickness": link.verdict,
            "tangent_link": {
                "dim": link.dim,
                "f_vector": list(link.complex.f_vector),
                "components": len(np.unique(vertex_components(link.complex))) if link.dim >= 0 else 0,
            },
        },
    }
    try:
        locus = detect_non_simple(model)
    except Inconclusive as exc:
        data["status"] = "inconclusive"
        data["inconclusive"] = {"reason": exc.reason, "message": str(exc), **exc.details}
        return AnalysisReport(data, "inconclusive")
    data["non_simple_locus"] = {
        "method": locus.method,
        "dim": locus.dim,
        "simplices": _simplices(locus.complex),
        "verdict_counts": {v: sum(1 for x in locus.verdicts.values() if x == v)
                           for v in sorted(set(locus.verdicts.values()))},
        "inconsistencies": [list(s) for s in locus.inconsistencies],
    }
    con = conicalness(model, locus)
    data["conicalness"] = {"verdict": con.verdict, "tangent_link_manifold": con.link_manifold,
                           "flags": list(con.flags)}
    filt = depth_filtration(model, opts.s)
    data["complement_betti"] = betti_numbers(filt.complement, opts.ring)
    if "fc" not in opts.skip:
        data["fc_ranks"] = _fc_table(model, opts, d)
    zone = None
    if "thin" not in opts.skip:
        zone = thin_zone(model, locus, opts.s)
        if zone.empty:
            data["thin_zone"] = None
        else:
            Z = zone.model.complex
            data["thin_zone"] = {
                "f_vector": list(Z.f_vector),
                "betti": betti_numbers(Z, opts.ring),
                "trace_f_vector": list(zone.model.boundary.f_vector),
            }
        data["thick_components"] = [
            {"thick": c.thick, "trace_dim": c.trace_dim, "conicalness": c.verdict,
             "f_vector": list(c.model.complex.f_vector)}
            for c in thick_components(model, locus, opts.s)]
    if "sc" not in opts.skip:
        sc = check_sc(model, locus, opts.s)
        data["sc"] = sc.to_dict()
        witness = find_separating_set(model, locus, opts.s, sc)
        data["separating_witness"] = None if witness is None else witness.to_dict()
        if zone is not None:
            data["injectivity"] = [test_fc_injectivity(model, zone, k, opts.ring, witness).to_dict()
                                   for k in range(1, d)]
    data["status"] = "ok"
    return AnalysisReport(data)


# ---------------------------------------------------------------- text

def _fmt_table(rows) -> list[str]:
    if not rows:
        return ["  (no degrees)"]
    out = ["   k  delta  rank  stable"]
    for r in rows:
        st = {True: "yes", False: "NO"}.get(r.get("stable"), "-")
        out.append(f"  {r['k']:>2}  {r['delta']:>5}  {r['rank']:>4}  {st:>6}")
    return out


def render_text(report: AnalysisReport | dict) -> str:
    data = report.to_dict() if isinstance(report, AnalysisReport) else report
    m = data["model"]
    p = data["parameters"]
    lines = [
        f"fcgerm {data['tool']['version']}  model {m['name'] or '(unnamed)'}",
        f"ring {p['ring']}  subdivision {p['s']}",
        f"dimension {m['dim']} in R^{m['ambient_dim']}; f-vector {m['f_vector']}",
        f"tangent link: dim {m['tangent_link']['dim']}, {m['tangent_link']['components']} component(s), "
        f"germ is {m['thickness']}",
    ]
    if data.get("status") == "inconclusive":
        lines.append(f"INCONCLUSIVE ({data['inconclusive']['reason']}): {data['inconclusive']['message']}")
        return "\n".join(lines) + "\n"
    loc = data["non_simple_locus"]
    lines.append(f"non-simple locus [{loc['method']}]: dim {loc['dim']}, {loc['simplices']}")
    lines.append(f"conicalness: {data['conicalness']['verdict']}")
    lines.append(f"complement Betti numbers: {data['complement_betti']}")
    if "fc_ranks" in data:
        lines.append("fast-contracting ranks:")
        lines += _fmt_table(data["fc_ranks"])
    if "thin_zone" in data:
        tz = data["thin_zone"]
        lines.append("thin zone: empty" if tz is None else
                     f"thin zone: f-vector {tz['f_vector']}, Betti {tz['betti']}")
        for i, c in enumerate(data["thick_components"]):
            lines.append(f"thick component {i}: trace dim {c['trace_dim']}, {c['conicalness']}")
    if "sc" in data:
        sc = data["sc"]
        lines.append(f"condition (SC): {sc['sc']} ({sc['components']} component(s) off the locus, "
                     f"separated={sc['separated']})")
        w = data["separating_witness"]
        lines.append("separating set: none" if w is None else
                     f"separating set: f-vector {w['f_vector']}, {w['thick_components']} thick sides, verified")
        for inj in data.get("injectivity", []):
            lines.append(f"thin zone -> germ in degree {inj['k']}: ranks {inj['thin_rank']} -> {inj['germ_rank']}, "
                         f"image {inj['image_rank']}, injective={inj['injective']}, "
                         f"surjective={inj['surjective']}, cross-check={inj['cross_check']}")
    return "\n".join(lines) + "\n"
