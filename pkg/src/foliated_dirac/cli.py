"""Command-line entry point.

Subcommands: ``clifford`` (dump generator matrices and relation residuals),
``family`` (build and export a sampled family), ``assemble`` (build a total
operator, optionally dumping it as sparse triplets), ``spectrum`` and
``oracle`` (eigenvalues of the assembled / intrinsic operator as CSV or
JSON), ``verify`` (run the property suite and write its JSON report).

Exit status: 0 on success, 1 when a verify check fails, 2 on input errors
(the message names the offending scenario field).
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import assembler, family, oracle, verify
from ._util import fmt_float
from .clifford import Signature, build_even_rep, build_odd_rep, check_relations, tilde_rep
from .expressions import ExpressionError
from .lattice import InvalidMetricError, LapseBoundError, ResolutionError
from .scenario import ScenarioError, bundled_scenario_names, bundled_scenario_path, load_scenario

_INPUT_ERRORS = (ScenarioError, ExpressionError, InvalidMetricError, LapseBoundError,
                 ResolutionError)


def _load(args):
    path = Path(args.scenario)
    if not path.exists():
        path = bundled_scenario_path(args.scenario)
    scn = load_scenario(path)
    if getattr(args, "signature", None):
        scn = scn.with_signature(Signature.parse(args.signature))
    if getattr(args, "resolution", None):
        pts, nt = _parse_resolution_pair(args.resolution)
        scn = scn.with_resolution(points_per_axis=pts, num_time_nodes=nt)
    return scn


def _parse_resolution_pair(text: str):
    try:
        pts, nt = (int(p) for p in text.lower().split("x"))
        return pts, nt
    except ValueError:
        raise ScenarioError(f"expected LxNt (e.g. 16x16), got {text!r}", "resolution") from None


def _parse_resolutions(text: str):
    return [_parse_resolution_pair(p) for p in text.split(",") if p]


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    path.write_text(text)
    print(f"wrote {path}")


def _json_dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _spectrum_payload(result, fmt: str) -> str:
    if fmt == "csv":
        return assembler.spectrum_to_csv(result)
    vals = [[float(np.real(v)), float(np.imag(v))] for v in np.atleast_1d(result.values)]
    return _json_dumps({"eigenvalues": vals, "asymmetry": result.asymmetry,
                        "method": result.method})


def cmd_clifford(args) -> int:
    out = _outdir(args)
    sig = Signature.parse(args.signature or "riemannian")
    odd = build_odd_rep(args.n)
    even = build_even_rep(odd, sig)
    spatial = tilde_rep(even)
    payload = {
        "odd": odd.to_json(),
        "even": even.to_json(),
        "spatial_on_doubled": spatial.to_json(),
        "residuals": {
            "odd": check_relations(odd).max_residual,
            "even": check_relations(even).max_residual,
            "spatial_on_doubled": check_relations(spatial).max_residual,
        },
    }
    _write(out / f"clifford_n{args.n}_{sig}.json", _json_dumps(payload))
    return 0


def cmd_family(args) -> int:
    scn = _load(args)
    out = _outdir(args)
    fam = family.from_scenario(scn)
    report = family.check_family_axioms(fam)
    _write(out / f"{scn.name}_family.json", _json_dumps(family.family_to_json(fam)))
    _write(out / f"{scn.name}_family_axioms.json", _json_dumps(report.to_json()))
    print(f"family: {fam.num_nodes} nodes, Hilbert dimension {fam.hilbert_dim}, "
          f"axioms {'pass' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def _assemble(scn, operator: str, sign: int):
    fam = family.from_scenario(scn)
    tg = assembler.TimeGrid.from_scenario(scn)
    if operator == "trivial":
        return assembler.assemble_trivial(fam, tg, sign)
    if operator == "riemannian":
        return assembler.assemble_riemannian(fam, tg, sign)
    if operator == "lorentzian":
        return assembler.assemble_lorentzian(fam, tg)
    raise ScenarioError(f"unknown operator {operator!r}", "operator")


def _default_operator(scn) -> str:
    return "lorentzian" if scn.signature.kind == "lorentzian" else "riemannian"


def cmd_assemble(args) -> int:
    scn = _load(args)
    out = _outdir(args)
    kind = args.operator or _default_operator(scn)
    op = _assemble(scn, kind, -1 if args.sign == "-" else +1)
    print(f"assembled {op.provenance}: dimension {op.dim}, "
          f"nnz {op.matrix.nnz}, hermitian_expected {op.hermitian_expected}")
    if args.dump_matrix:
        _write(out / f"{scn.name}_{op.provenance}.triplets", assembler.operator_to_triplets(op))
    summary = {
        "scenario": scn.name, "operator": op.provenance, "dim": op.dim,
        "nnz": int(op.matrix.nnz),
        "time_grid_antihermiticity": op.time_grid.antihermiticity_residual(),
    }
    _write(out / f"{scn.name}_{op.provenance}.json", _json_dumps(summary))
    return 0


def cmd_spectrum(args) -> int:
    scn = _load(args)
    out = _outdir(args)
    kind = args.operator or _default_operator(scn)
    op = _assemble(scn, kind, -1 if args.sign == "-" else +1)
    mat = op.krein_symmetrized() if op.signature.kind == "lorentzian" else op
    result = assembler.spectrum(mat, count=args.eigs,
                                which="smallest" if args.eigs else "all")
    ext = "csv" if args.format == "csv" else "json"
    _write(out / f"{scn.name}_{op.provenance}_spectrum.{ext}",
           _spectrum_payload(result, args.format))
    print(f"spectrum: {len(np.atleast_1d(result.values))} values, method {result.method}, "
          f"asymmetry {fmt_float(result.asymmetry)}")
    return 0


def cmd_oracle(args) -> int:
    scn = _load(args)
    out = _outdir(args)
    op = oracle.intrinsic_dirac(oracle.SpacetimeGrid.build(scn))
    mat = op.krein_symmetrized() if op.signature.kind == "lorentzian" else op.matrix
    result = assembler.spectrum(mat, count=args.eigs,
                                which="smallest" if args.eigs else "all",
                                assume="hermitian")
    ext = "csv" if args.format == "csv" else "json"
    _write(out / f"{scn.name}_intrinsic_spectrum.{ext}", _spectrum_payload(result, args.format))
    print(f"intrinsic spectrum: {len(np.atleast_1d(result.values))} values, "
          f"asymmetry {fmt_float(result.asymmetry)}")
    return 0


def cmd_verify(args) -> int:
    scn = _load(args)
    out = _outdir(args)
    resolutions = _parse_resolutions(args.resolutions) if args.resolutions else None
    checks = args.checks.split(",") if args.checks else "all"
    report = verify.run_suite(scn, resolutions=resolutions, checks=checks)
    stamp = None if args.no_timestamp else datetime.datetime.now(
        datetime.timezone.utc).isoformat()
    payload = report.to_json(include_timing=not args.no_timestamp, timestamp=stamp)
    _write(out / f"{scn.name}_verify.json", _json_dumps(payload))
    for r in report.results:
        resid = "-" if r.residual is None else f"{r.residual:.3e}"
        print(f"[{r.status.upper():7s}] {r.check_id}: residual {resid}"
              + (f" (limit {r.threshold:.1e})" if r.threshold is not None else "")
              + (f" - {r.notes}" if r.notes else ""))
    print(f"suite {'PASSED' if report.passed else 'FAILED'} on scenario {scn.name}")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foliated-dirac",
        description="Assemble, verify, and cross-check foliated Dirac operators. "
                    f"Bundled scenarios: {', '.join(bundled_scenario_names())}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("--scenario", required=True,
                           help="scenario JSON path or bundled scenario name")
            p.add_argument("--signature", choices=["riemannian", "lorentzian"],
                           help="override the scenario signature")
            p.add_argument("--resolution", help="override resolution as LxNt, e.g. 32x32")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--no-timestamp", action="store_true",
                       help="suppress timestamp and wall-clock fields for byte-stable output")

    p = sub.add_parser("clifford", help="dump generator matrices as [re, im] JSON")
    p.add_argument("--n", type=int, default=3, help="odd spatial dimension")
    p.add_argument("--signature", choices=["riemannian", "lorentzian"], default="riemannian")
    common(p, scenario=False)
    p.set_defaults(fn=cmd_clifford)

    p = sub.add_parser("family", help="build a sampled family and export it")
    common(p)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("assemble", help="assemble a total operator")
    common(p)
    p.add_argument("--operator", choices=["trivial", "riemannian", "lorentzian"])
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.add_argument("--dump-matrix", action="store_true",
                   help="write the operator as sparse row/col/re/im triplets")
    p.set_defaults(fn=cmd_assemble)

    p = sub.add_parser("spectrum", help="eigenvalues of an assembled operator")
    common(p)
    p.add_argument("--operator", choices=["trivial", "riemannian", "lorentzian"])
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.add_argument("--eigs", type=int, help="number of smallest-magnitude eigenvalues")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("oracle", help="eigenvalues of the intrinsic operator")
    common(p)
    p.add_argument("--eigs", type=int, help="number of smallest-magnitude eigenvalues")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("verify", help="run the property suite")
    common(p)
    p.add_argument("--checks", help="comma-separated subset of checks "
                                    f"({','.join(verify.available_checks())})")
    p.add_argument("--resolutions", help="comma-separated LxNt list, e.g. 16x16,32x32")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
