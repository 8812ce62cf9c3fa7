"""Model, cycle and report files."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .complex import SimplicialComplex
from .enclosure import fmt_rational
from .errors import InputError, SchemaError
from .ff import PLCycle
from .geometry import GeometricComplex
from .model import StrictTransformModel, build_model
from .rings import as_ring


def parse_rational(x, where: str = "value") -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SchemaError(f"{where}: {x!r} is not an exact rational; write it as \"a/b\"")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"{where}: cannot parse {x!r} as a rational")


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return data


def _simplex_list(raw, n: int, where: str) -> list[tuple[int, ...]]:
    if not isinstance(raw, list):
        raise SchemaError(f"{where} must be a list")
    out = []
    for i, s in enumerate(raw):
        if not isinstance(s, list) or not s or not all(isinstance(v, int) and not isinstance(v, bool) for v in s):
            raise SchemaError(f"{where}[{i}] must be a non-empty list of vertex ids")
        bad = [v for v in s if not 0 <= v < n]
        if bad:
            raise SchemaError(f"{where}[{i}] = {s}: vertex {bad[0]} does not exist")
        if len(set(s)) != len(s):
            raise SchemaError(f"{where}[{i}] = {s}: repeated vertex")
        out.append(tuple(sorted(s)))
    return out


# ---------------------------------------------------------------- models

@dataclass(frozen=True)
class ModelFile:
    model: StrictTransformModel
    ring: str | None = None
    subdivision: int | None = None


def model_from_dict(data: dict, where: str = "model") -> ModelFile:
    for key in ("vertices", "simplices"):
        if key not in data:
            raise SchemaError(f"{where}: missing field {key!r}")
    verts = data["vertices"]
    if not isinstance(verts, list) or not verts:
        raise SchemaError(f"{where}: 'vertices' must be a non-empty list")
    n = len(verts)
    width = data.get("ambient_dim")
    points = [None] * n
    for i, v in enumerate(verts):
        loc = f"vertices[{i}]"
        if not isinstance(v, dict) or not {"id", "u", "r"} <= set(v):
            raise SchemaError(f"{loc}: need fields id, u, r")
        vid = v["id"]
        if not isinstance(vid, int) or isinstance(vid, bool) or not 0 <= vid < n:
            raise SchemaError(f"{loc}: ids must be dense 0..{n - 1}, got {vid!r}")
        if points[vid] is not None:
            raise SchemaError(f"{loc}: duplicate id {vid}")
        if not isinstance(v["u"], list):
            raise SchemaError(f"{loc}.u must be a list")
        u = [parse_rational(x, f"{loc}.u") for x in v["u"]]
        if width is None:
            width = len(u)
        if len(u) != width:
            raise SchemaError(f"{loc}.u has {len(u)} coordinates, expected {width}")
        points[vid] = u + [parse_rational(v["r"], f"{loc}.r")]
    simplices = _simplex_list(data["simplices"], n, f"{where}.simplices")
    override = data.get("non_simple_override")
    if override is not None:
        override = _simplex_list(override, n, f"{where}.non_simple_override")
    K = SimplicialComplex.from_simplices(simplices)
    model = build_model(GeometricComplex.from_points(K, points), str(data.get("name", "")), override)
    ring = data.get("ring")
    if ring is not None:
        try:
            ring = as_ring(ring)
        except InputError as exc:
            raise SchemaError(f"{where}.ring: {exc}") from exc
    sub = data.get("subdivision")
    if sub is not None and (not isinstance(sub, int) or isinstance(sub, bool) or sub < 0):
        raise SchemaError(f"{where}.subdivision must be a non-negative integer")
    return ModelFile(model, ring, sub)


def parse_model(path) -> ModelFile:
    return model_from_dict(_load_json(path), str(path))


def model_to_dict(model: StrictTransformModel, ring: str | None = None, subdivision: int | None = None) -> dict:
    """File form of a model; vertex ids are renumbered densely if the model uses a sparse set."""
    used = [int(v) for v in model.complex.vertices]
    new_id = {v: i for i, v in enumerate(used)}
    out = {
        "name": model.name,
        "ambient_dim": model.ambient_dim,
        "vertices": [{"id": new_id[v],
                      "u": [fmt_rational(x) for x in model.direction(v)],
                      "r": fmt_rational(model.radius(v))} for v in used],
        "simplices": [[new_id[v] for v in s] for s in model.complex.maximal_simplices()],
    }
    if model.non_simple_override is not None:
        out["non_simple_override"] = [[new_id[v] for v in s] for s in model.non_simple_override]
    if ring is not None:
        out["ring"] = ring
    if subdivision is not None:
        out["subdivision"] = subdivision
    return out


# ---------------------------------------------------------------- complexes and cycles

def complex_from_dict(data: dict, where: str = "complex") -> GeometricComplex:
    """Geometric complex from ``vertices`` (id + coords, or id + u + r) and ``simplices``."""
    if "vertices" not in data or "simplices" not in data:
        raise SchemaError(f"{where}: need 'vertices' and 'simplices'")
    verts = data["vertices"]
    n = len(verts)
    points = [None] * n
    for i, v in enumerate(verts):
        loc = f"vertices[{i}]"
        vid = v.get("id", i) if isinstance(v, dict) else i
        if not isinstance(vid, int) or not 0 <= vid < n or points[vid] is not None:
            raise SchemaError(f"{loc}: ids must be dense and unique")
        if isinstance(v, list):
            coords = v
        elif "coords" in v:
            coords = v["coords"]
        elif "u" in v and "r" in v:
            coords = list(v["u"]) + [v["r"]]
        else:
            raise SchemaError(f"{loc}: need coords")
        points[vid] = [parse_rational(x, loc) for x in coords]
    simplices = _simplex_list(data["simplices"], n, f"{where}.simplices")
    gc = GeometricComplex.from_points(SimplicialComplex.from_simplices(simplices), points)
    gc.check_nondegenerate()
    return gc


def complex_to_dict(gc: GeometricComplex) -> dict:
    return {
        "vertices": [{"id": v, "coords": [fmt_rational(x) for x in gc.point(v)]}
                     for v in range(len(gc.numer))],
        "simplices": [list(s) for s in gc.complex.maximal_simplices()],
    }


def parse_complex(path) -> GeometricComplex:
    return complex_from_dict(_load_json(path), str(path))


def parse_cycle(path) -> PLCycle:
    return PLCycle.from_dict(_load_json(path))


# ---------------------------------------------------------------- output

def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_text(path, text: str) -> None:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)


def off_mesh(model: StrictTransformModel) -> str:
    """Blow-down image (u, r) -> r u as an OFF mesh; vertices are not merged.

    Coordinates beyond the third are dropped and missing ones padded with 0.
    """
    K = model.complex
    faces = K.maximal_simplices() if K.dim <= 2 else [tuple(s) for s in K.simplices(2).tolist()]
    lines = ["OFF", "# blow-down image, visualization only: simplices are linearized",
             f"{model.n_vertices} {len(faces)} 0"]
    for v in range(model.n_vertices):
        p = [float(x) for x in model.blow_down(v)][:3]
        p += [0.0] * (3 - len(p))
        lines.append(" ".join(repr(x) for x in p))
    for f in faces:
        lines.append(" ".join(str(x) for x in (len(f),) + tuple(f)))
    return "\n".join(lines) + "\n"
