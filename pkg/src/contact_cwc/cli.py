"""Command-line interface: ``cwc check|cone|reconstruct|trajectory|validate``.

Wrenches must already be expressed at the patch center in the surface frame
(x along the half-length X, y along Y, z along the contact normal).

Exit codes: 0 member / pass, 1 not member / violation / mismatch, 2 usage or
input error. ``--format machine`` prints one JSON object per line, each with a
``schema_version`` field.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

from .closed_form import (ROW_LABELS, check_wrench, face_form, zero_friction_face_form)
from .contact_model import ContactPatch, Wrench, compose_wrench
from .errors import Infeasible
from .polytope import cwc_span, matches_closed_form, project_wrench_cone
from .reconstruction import reconstruct_forces
from .validation import (BOUNDARY_EPSILON, DEFAULT_MU, DEFAULT_X, DEFAULT_Y,
                         ValidationConfig, validate_patch)

SCHEMA_VERSION = 1

TRAJECTORY_HEADER = ("t", "fx", "fy", "fz", "taux", "tauy", "tauz")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Malformed file content; carries the offending line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _finite_floats(text, count=None):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if count is not None and len(values) != count:
        raise argparse.ArgumentTypeError(f"expected {count} numbers, got {len(values)}")
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return values


def wrench_arg(text):
    return Wrench(*_finite_floats(text, 6))


def float_list_arg(text):
    return tuple(_finite_floats(text))


def _emit(record):
    record = {"schema_version": SCHEMA_VERSION, **record}
    print(json.dumps(record, sort_keys=False))


def _patch(args, parser):
    try:
        return ContactPatch(args.X, args.Y, args.mu)
    except ValueError as exc:
        parser.error(str(exc))


def _patch_dict(patch):
    return {"X": patch.X, "Y": patch.Y, "mu": patch.mu}


# -- check ------------------------------------------------------------------

def cmd_check(args, parser):
    patch = _patch(args, parser)
    report = check_wrench(patch, args.wrench)
    if args.format == "machine":
        _emit({"kind": "check", "patch": _patch_dict(patch),
               "wrench": args.wrench.as_array().tolist(), **report.to_dict()})
    else:
        verdict = "MEMBER" if report.member else "NOT MEMBER"
        if report.boundary:
            verdict += " (on boundary)"
        print(f"verdict     {verdict}")
        print(f"min margin  {report.min_margin:+.6g}")
        if report.zmp is not None:
            print(f"zmp         ({report.zmp[0]:+.6g}, {report.zmp[1]:+.6g})")
        yaw = report.yaw
        print(f"yaw range   [{yaw.tau_min:+.6g}, {yaw.tau_max:+.6g}]"
              + ("  EMPTY" if yaw.empty_range else ""))
        print(f"tau_safe    {yaw.tau_safe:+.6g}")
        if report.weak_normal:
            print("warning     normal force below threshold with nonzero wrench")
        print()
        print(f"{'row':<18}{'margin':>14}")
        for label, m in zip(report.row_labels, report.margins):
            flag = "  VIOLATED" if label in report.violated else ""
            print(f"{label:<18}{m:>+14.6g}{flag}")
    return EXIT_OK if report.member else EXIT_FAIL


# -- cone -------------------------------------------------------------------

def cmd_cone(args, parser):
    patch = _patch(args, parser)
    status = EXIT_OK
    if args.form == "face":
        if patch.mu > 0:
            form = face_form(patch)
        else:
            print("ZeroFriction: mu = 0, emitting the reduced frictionless cone", file=sys.stderr)
            form = zero_friction_face_form(patch)
        for label, row in zip(form.row_labels, form.rows):
            if args.format == "machine":
                _emit({"kind": "face_row", "label": label, "coefficients": row.tolist()})
            else:
                print(f"{label:<18}" + " ".join(f"{v:+.9f}" for v in row))
    else:
        span = cwc_span(patch)
        per_corner = len(span) // 4
        signs = ("(+,+)", "(+,-)", "(-,+)", "(-,-)") if per_corner == 4 else ("(0,0)",)
        labels = [f"C{i + 1}{s}" for i in range(4) for s in signs]
        for label, ray in zip(labels, span.rays):
            if args.format == "machine":
                _emit({"kind": "span_ray", "label": label, "coefficients": ray.tolist()})
            else:
                print(f"{label:<10}" + " ".join(f"{v:+.9f}" for v in ray))
    if args.exact:
        projected = project_wrench_cone(patch, exact=True)
        match = matches_closed_form(projected, patch)
        if args.format == "machine":
            _emit({"kind": "exact_check", "rows": len(projected), "match": match})
        else:
            print(f"exact elimination: {len(projected)} rows, {'MATCH' if match else 'MISMATCH'}")
        status = EXIT_OK if match else EXIT_FAIL
    return status


# -- reconstruct ------------------------------------------------------------

def cmd_reconstruct(args, parser):
    patch = _patch(args, parser)
    try:
        forces = reconstruct_forces(patch, args.wrench, strict=args.positive)
    except Infeasible as exc:
        if args.format == "machine":
            _emit({"kind": "reconstruct", "feasible": False})
        else:
            print(f"INFEASIBLE: {exc}")
        return EXIT_FAIL
    residual = np.abs(compose_wrench(patch, forces).as_array() - args.wrench.as_array()).max()
    if args.format == "machine":
        _emit({"kind": "reconstruct", "feasible": True,
               "forces": forces.as_array().tolist(), "residual": float(residual)})
    else:
        for i, f in enumerate(forces.as_array()):
            print(f"C{i + 1}  " + " ".join(f"{v:+.9g}" for v in f))
        print(f"residual {residual:.3g}")
    return EXIT_OK


# -- trajectory -------------------------------------------------------------

def read_trajectory(lines, strict=True, warn=None):
    """Parse ``t,fx,fy,fz,taux,tauy,tauz`` records.

    Returns a list of ``(line_number, t, Wrench)``. In strict mode the first
    bad line raises :class:`InputError`; otherwise it is reported through
    ``warn`` and skipped. Timestamps must increase strictly.
    """
    records = []
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != TRAJECTORY_HEADER:
        raise InputError(1, f"header must be {','.join(TRAJECTORY_HEADER)}")
    last_t = -math.inf
    for number, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            if len(row) != 7:
                raise InputError(number, f"expected 7 fields, got {len(row)}")
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise InputError(number, "non-numeric field")
            if not all(math.isfinite(v) for v in values):
                raise InputError(number, "non-finite value")
            if values[0] <= last_t:
                raise InputError(number, "timestamps must increase strictly")
        except InputError as exc:
            if strict:
                raise
            if warn is not None:
                warn(f"skipping {exc}")
            continue
        last_t = values[0]
        records.append((number, values[0], Wrench(*values[1:])))
    return records


def cmd_trajectory(args, parser):
    patch = _patch(args, parser)
    scaled = patch.scaled(args.scale_area) if args.scale_area is not None else None
    warn = lambda msg: print(f"warning: {msg}", file=sys.stderr)  # noqa: E731
    try:
        with open(args.input, newline="") as fh:
            records = read_trajectory(fh, strict=args.strict, warn=warn)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    violations = scaled_violations = 0
    worst = None
    if args.format == "human":
        head = f"{'t':>10} {'member':>6} {'min_margin':>12} {'tau_safe':>11} {'yaw range':>25}  zmp / violated"
        if scaled is not None:
            head += "  | scaled"
        print(head)
    for line, t, w in records:
        report = check_wrench(patch, w)
        violations += not report.member
        if worst is None or report.min_margin < worst[1]:
            worst = (t, report.min_margin)
        scaled_report = check_wrench(scaled, w) if scaled is not None else None
        if scaled_report is not None:
            scaled_violations += not scaled_report.member
        if args.format == "machine":
            record = {"kind": "record", "line": line, "t": t, "member": report.member,
                      "min_margin": report.min_margin, "violated": list(report.violated),
                      "zmp": None if report.zmp is None else list(report.zmp),
                      "tau_min": report.yaw.tau_min, "tau_max": report.yaw.tau_max,
                      "tau_safe": report.yaw.tau_safe}
            if scaled_report is not None:
                record["scaled_member"] = scaled_report.member
                record["scaled_min_margin"] = scaled_report.min_margin
            _emit(record)
        else:
            zmp = "-" if report.zmp is None else f"({report.zmp[0]:+.4g},{report.zmp[1]:+.4g})"
            extra = " ".join(report.violated) if report.violated else zmp
            yaw = f"[{report.yaw.tau_min:+.4g},{report.yaw.tau_max:+.4g}]"
            text = (f"{t:>10.4g} {'yes' if report.member else 'NO':>6} {report.min_margin:>+12.4g} "
                    f"{report.yaw.tau_safe:>+11.4g} {yaw:>25}  {extra}")
            if scaled_report is not None:
                text += f"  | {'yes' if scaled_report.member else 'NO'} {scaled_report.min_margin:+.4g}"
            print(text)

    summary = {"kind": "summary", "records": len(records), "violations": violations,
               "worst_t": None if worst is None else worst[0],
               "worst_min_margin": None if worst is None else worst[1]}
    if scaled is not None:
        summary["scale_area"] = args.scale_area
        summary["scaled_violations"] = scaled_violations
    if args.format == "machine":
        _emit(summary)
    else:
        print()
        print(f"{len(records)} records, {violations} violations")
        if worst is not None:
            print(f"worst record at t={worst[0]:.6g} with min margin {worst[1]:+.6g}")
        if scaled is not None:
            print(f"area scaled by {args.scale_area}: {scaled_violations} violations")
    return EXIT_OK if violations == 0 else EXIT_FAIL


# -- validate ---------------------------------------------------------------

def cmd_validate(args, parser):
    try:
        config = ValidationConfig(X=args.X, Y=args.Y, mu=args.mu, samples=args.samples,
                                  seed=args.seed, epsilon=args.epsilon,
                                  reconstruct_samples=args.reconstruct_samples,
                                  allow_boundary=args.allow_boundary)
    except ValueError as exc:
        parser.error(str(exc))
    start = time.perf_counter()
    results = []
    if args.format == "human":
        print(f"{'X':>6} {'Y':>6} {'mu':>5} {'samples':>8} {'members':>8} {'excluded':>9} "
              f"{'disagree':>9} {'recon':>6} {'recon_fail':>10} {'seconds':>8}")
    for i, patch in enumerate(config.patches()):
        r = validate_patch(patch, config, i)
        results.append(r)
        if args.format == "machine":
            _emit({"kind": "patch", "patch": _patch_dict(patch), "samples": r.samples,
                   "members": r.members, "excluded": r.excluded,
                   "disagreements": r.disagreements, "reconstructed": r.reconstructed,
                   "reconstruction_failures": r.reconstruction_failures})
        else:
            print(f"{patch.X:>6g} {patch.Y:>6g} {patch.mu:>5g} {r.samples:>8} {r.members:>8} "
                  f"{r.excluded:>9} {r.disagreements:>9} {r.reconstructed:>6} "
                  f"{r.reconstruction_failures:>10} {r.seconds:>8.2f}")
    disagreements = sum(r.disagreements for r in results)
    failures = sum(r.reconstruction_failures for r in results)
    passed = failures == 0 and (disagreements == 0 or config.allow_boundary)
    if args.format == "machine":
        # timing is left out so that machine output is reproducible
        _emit({"kind": "summary", "patches": len(results), "disagreements": disagreements,
               "reconstruction_failures": failures, "passed": passed})
    else:
        print()
        print(f"{len(results)} patches, {disagreements} disagreements, "
              f"{failures} reconstruction failures, {time.perf_counter() - start:.1f} s")
        print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def _add_patch_args(p):
    p.add_argument("--X", type=float, required=True, help="half-length along x (m)")
    p.add_argument("--Y", type=float, required=True, help="half-length along y (m)")
    p.add_argument("--mu", type=float, required=True, help="friction coefficient")


def _add_format(p):
    p.add_argument("--format", choices=("human", "machine"), default="human")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cwc", description="Contact wrench cone of rectangular surface contacts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test one wrench for contact stability")
    _add_patch_args(p)
    p.add_argument("--wrench", type=wrench_arg, required=True,
                   help="fx,fy,fz,taux,tauy,tauz (use --wrench=-1,... for a leading minus)")
    _add_format(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cone", help="list the face or span form of the cone")
    _add_patch_args(p)
    p.add_argument("--form", choices=("face", "span"), default="face")
    p.add_argument("--exact", action="store_true",
                   help="also rebuild the face form by exact elimination and compare")
    _add_format(p)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("reconstruct", help="corner forces realizing a wrench")
    _add_patch_args(p)
    p.add_argument("--wrench", type=wrench_arg, required=True)
    p.add_argument("--positive", action="store_true",
                   help="prefer strictly positive normal forces when possible")
    _add_format(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("trajectory", help="margins along a recorded wrench trajectory")
    _add_patch_args(p)
    p.add_argument("--input", required=True, metavar="PATH",
                   help="CSV with header " + ",".join(TRAJECTORY_HEADER))
    p.add_argument("--scale-area", type=float, metavar="S",
                   help="also check against the patch with its area multiplied by S")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=True,
                      help="abort on the first malformed line (default)")
    mode.add_argument("--lenient", dest="strict", action="store_false",
                      help="skip malformed lines with a warning")
    _add_format(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("validate", help="randomized closed form vs LP oracle check")
    p.add_argument("--X", type=float_list_arg, default=DEFAULT_X, help="comma-separated grid")
    p.add_argument("--Y", type=float_list_arg, default=DEFAULT_Y, help="comma-separated grid")
    p.add_argument("--mu", type=float_list_arg, default=DEFAULT_MU, help="comma-separated grid")
    p.add_argument("--samples", type=int, default=10_000, help="wrenches per patch")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=BOUNDARY_EPSILON,
                   help="boundary band excluded from the comparison")
    p.add_argument("--reconstruct-samples", type=int, default=1000,
                   help="wrenches per patch used for the reconstruction round trip")
    p.add_argument("--allow-boundary", action="store_true",
                   help="do not fail on membership disagreements (for --epsilon 0)")
    _add_format(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "scale_area", None) is not None and args.scale_area <= 0:
        parser.error("--scale-area must be positive")
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
