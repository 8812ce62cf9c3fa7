"""Command line entry point.

Exit codes: 0 success, 1 invalid input, 2 inconclusive, 3 internal error.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import __version__
from .errors import Inconclusive, InputError, WitnessVerificationFailed

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_INTERNAL = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    from .io import write_text
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _load(args):
    from .io import parse_model
    mf = parse_model(args.file)
    ring = getattr(args, "ring", None) or mf.ring or "gf2"
    s = getattr(args, "subdiv", None)
    s = s if s is not None else (mf.subdivision if mf.subdivision is not None else 2)
    return mf.model, ring, s


def cmd_validate(args) -> int:
    from .model import tangent_link
    model, _, _ = _load(args)
    link = tangent_link(model)
    print(f"ok: {model.name or args.file}: dim {model.dim}, f-vector {list(model.complex.f_vector)}, "
          f"tangent link dim {link.dim} ({link.verdict})")
    return EXIT_OK


def cmd_analyze(args) -> int:
    from .analysis import AnalysisOptions, render_text, run_analysis
    from .io import canonical_json, off_mesh, write_text
    model, ring, s = _load(args)
    try:
        opts = AnalysisOptions(ring, s, tuple(args.degrees) if args.degrees else None, frozenset(args.skip or ()))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = run_analysis(model, opts)
    js = canonical_json(report.to_dict())
    txt = render_text(report)
    if args.out:
        out = Path(args.out)
        write_text(out / "report.json", js)
        write_text(out / "report.txt", txt)
        if args.mesh:
            write_text(out / "blow_down.off", off_mesh(model))
        sys.stdout.write(txt)
    else:
        sys.stdout.write(js if args.format == "json" else txt)
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK


def cmd_fc(args) -> int:
    from .fc import fc_group
    from .io import canonical_json
    model, ring, s = _load(args)
    g = fc_group(model, args.k, args.delta, ring, s)
    print(canonical_json({"k": args.k, "delta": g.delta, "ring": ring, "subdivision": s,
                          "rank": g.rank, "complement_rank": g.ambient.rank,
                          "torsion": list(g.ambient.torsion)}), end="")
    return EXIT_OK


def cmd_thin_zone(args) -> int:
    from .homology import betti_numbers
    from .io import canonical_json, model_to_dict
    from .locus import detect_non_simple, thin_zone
    model, ring, s = _load(args)
    zone = thin_zone(model, detect_non_simple(model), s)
    if zone.empty:
        data = {"empty": True}
    else:
        data = {"empty": False, "f_vector": list(zone.model.complex.f_vector),
                "betti": betti_numbers(zone.model.complex, ring),
                "model": model_to_dict(zone.model)}
    _emit(canonical_json(data), args.out)
    return EXIT_OK


def cmd_check_sc(args) -> int:
    from .io import canonical_json
    from .locus import detect_non_simple
    from .separating import check_sc
    model, _, s = _load(args)
    print(canonical_json(check_sc(model, detect_non_simple(model), s).to_dict()), end="")
    return EXIT_OK


def cmd_sep_set(args) -> int:
    from .io import canonical_json
    from .locus import detect_non_simple
    from .separating import find_separating_set
    model, _, s = _load(args)
    w = find_separating_set(model, detect_non_simple(model), s)
    _emit(canonical_json({"witness": None if w is None else w.to_dict()}), args.out)
    return EXIT_OK


def cmd_ff_certify(args) -> int:
    from .certificate import verify_certificate
    from .ff import certify_trivial
    from .io import canonical_json, parse_complex, parse_cycle
    gc = parse_complex(args.complex)
    cycle = parse_cycle(args.cycle)
    cert = certify_trivial(gc, cycle)
    check = verify_certificate(gc, cert)
    data = cert.to_dict()
    data["verification"] = {"ok": check.ok, "failures": check.failures}
    _emit(canonical_json(data), args.out)
    if not check.ok:
        print("certificate failed re-verification: " + "; ".join(check.failures), file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _param(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    try:
        v = int(v)
    except ValueError:
        pass
    return k, v


def cmd_example(args) -> int:
    from .gallery import gallery
    from .io import canonical_json, model_to_dict
    params = dict(args.param or [])
    try:
        model = gallery(args.name, **params)
    except TypeError as exc:
        raise InputError(f"bad parameters for {args.name}: {exc}") from exc
    _emit(canonical_json(model_to_dict(model)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fcgerm", description="Fast-contracting homology of PL germs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def model_cmd(name, fn, help_):
        q = sub.add_parser(name, help=help_)
        q.add_argument("file")
        q.add_argument("--ring", choices=["gf2", "q"])
        q.add_argument("--subdiv", type=int)
        q.set_defaults(func=fn)
        return q

    model_cmd("validate", cmd_validate, "check a model file")
    q = model_cmd("analyze", cmd_analyze, "run the full analysis")
    q.add_argument("--out", help="directory for report.json and report.txt")
    q.add_argument("--format", choices=["text", "json"], default="text")
    q.add_argument("--degree", dest="degrees", type=int, action="append")
    q.add_argument("--skip", action="append", choices=["fc", "stability", "thin", "sc"])
    q.add_argument("--mesh", action="store_true", help="also write the blow-down as OFF")
    q = model_cmd("fc", cmd_fc, "rank of one fast-contracting group")
    q.add_argument("-k", type=int, required=True)
    q.add_argument("--delta", type=int, default=1)
    q = model_cmd("thin-zone", cmd_thin_zone, "thin zone around the non-simple locus")
    q.add_argument("--out")
    model_cmd("check-sc", cmd_check_sc, "evaluate condition (SC)")
    q = model_cmd("sep-set", cmd_sep_set, "search for a verified separating set")
    q.add_argument("--out")
    q = sub.add_parser("ff-certify", help="certify that a small PL cycle bounds")
    q.add_argument("complex")
    q.add_argument("cycle")
    q.add_argument("--out")
    q.set_defaults(func=cmd_ff_certify)
    q = sub.add_parser("example", help="write a gallery model file")
    q.add_argument("name")
    q.add_argument("--param", type=_param, action="append")
    q.add_argument("--out")
    q.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                return args.func(args)
            finally:
                for w in caught:
                    print(f"warning: {w.category.__name__}: {w.message}", file=sys.stderr)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Inconclusive as exc:
        print(f"inconclusive ({exc.reason}): {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except WitnessVerificationFailed as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
