"""Command-line harness: identity registry runs, batch verification with
JSON-lines reports, series expansion dumps, and enumeration tables.

Exit codes: 0 all requested checks pass, 1 at least one fails, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .errors import PwOmegaError, UnknownIdentity, UnknownObject
from .qseries import Monomial, QSeries, qpochhammer

F = Fraction


# ---------------------------------------------------------------------------
# expandable named series
# ---------------------------------------------------------------------------

def _expand_object(name: str, N: int) -> QSeries:
    from .appell import mu_torsion_series
    from .classical import (EtaQuotient, TorsionPoint, eta_quotient_series,
                            eta_series, theta_series_at_torsion)
    from .indefinite import pbar_omega_series
    from .partitions import FAMILIES, genfun

    name = name.strip()
    if name == "pbar-omega":
        return pbar_omega_series(N, "triple_sum")
    if name == "pbar-omega-def":
        return pbar_omega_series(N, "definition")
    if name == "eta":
        return eta_series(N)
    if name == "eta^3":
        return eta_series(N).pow(3)
    if name == "euler":
        return qpochhammer(1, Monomial(1, 1), None, N)
    if name.startswith("eta-quotient:"):
        return eta_quotient_series(EtaQuotient.parse(name.split(":", 1)[1]), N)
    if name == "theta(tau+1/2)":
        return theta_series_at_torsion(TorsionPoint(1, F(1, 2)), N)
    if name == "theta(tau/2+1/4)":
        return theta_series_at_torsion(TorsionPoint(F(1, 2), F(1, 4)), N)
    if name == "mu(tau/2,tau/2+1/4)":
        return mu_torsion_series(TorsionPoint(F(1, 2), 0),
                                 TorsionPoint(F(1, 2), F(1, 4)), N)
    family = name.replace("-", "_")
    if family in FAMILIES:
        return genfun(family, N)
    raise UnknownObject(f"no expandable series named {name!r}")


EXPANDABLE = ["pbar-omega", "pbar-omega-def", "eta", "eta^3", "euler",
              "eta-quotient:<spec>", "theta(tau+1/2)", "theta(tau/2+1/4)",
              "mu(tau/2,tau/2+1/4)", "spt", "p-omega", "spt-omega",
              "pbar-omega (family)", "sptbar-omega", "spt-g2"]


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

def load_config(path: Optional[str]) -> Dict:
    """key=value lines; keys: order, prec, jobs, taus (u,v;u,v;...)."""
    if not path:
        return {}
    out: Dict = {}
    try:
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, val = line.partition("=")
                key, val = key.strip(), val.strip().strip('"')
                if key in ("order", "prec", "jobs", "window"):
                    out[key] = int(val)
                elif key == "taus":
                    out["taus"] = [tuple(float(x) for x in pair.split(","))
                                   for pair in val.split(";") if pair.strip()]
                else:
                    raise ValueError(f"unknown config key {key!r}")
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc))
    return out


class ConfigError(Exception):
    pass


def _parse_taus(values: Optional[List[str]]):
    if not values:
        return None
    return [tuple(float(x) for x in v.split(",")) for v in values]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_list(args) -> int:
    from .registry import REGISTRY

    for ident in REGISTRY:
        flag = "" if ident.expected == "pass" else "  [expected fail: see README]"
        print(f"{ident.id:16s} {ident.description}{flag}")
    return 0


def _overrides(args, cfg: Dict) -> Dict:
    out = dict(cfg)
    for key in ("order", "prec", "window"):
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            out[key] = val
    taus = _parse_taus(getattr(args, "tau", None))
    if taus:
        out["taus"] = taus
    if getattr(args, "tolerance", None) is not None:
        out["tolerance"] = args.tolerance
    out.pop("jobs", None)
    return out


def cmd_run(args) -> int:
    from .registry import run_identity

    cfg = load_config(args.config)
    try:
        report = run_identity(args.id, _overrides(args, cfg))
    except UnknownIdentity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_dict()))
    return 0 if report.status == "pass" else 1


def cmd_suite(args) -> int:
    from .registry import run_suite

    cfg = load_config(args.config)
    jobs = args.jobs if args.jobs is not None else cfg.get("jobs", 1)
    reports = run_suite(args.filter, jobs, _overrides(args, cfg))
    ok = True
    for report in reports:
        print(json.dumps(report.to_dict()))
        ok = ok and report.status == "pass"
    return 0 if ok else 1


def cmd_expand(args) -> int:
    try:
        series = _expand_object(args.object, args.order)
    except UnknownObject as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("expandable objects: " + ", ".join(EXPANDABLE), file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps({"object": args.object, "lattice": series.D,
                          "order": str(series.order_exp()),
                          "terms": series.to_pairs()}))
    else:
        print("exponent,coefficient")
        for exp, coeff in series.terms():
            print(f"{exp},\"{coeff}\"")
    return 0


def cmd_oracle(args) -> int:
    from .errors import NoCombinatorialDefinition, ResourceBound
    from .partitions import census

    family = args.family.replace("-", "_")
    print("n,count")
    for n in range(1, args.n + 1):
        try:
            print(f"{n},{census(family, n)}")
        except (NoCombinatorialDefinition, ResourceBound, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwomega",
        description="verify the q-series, indefinite-theta, and modular-completion "
                    "identities of the overpartition series toolkit")
    parser.add_argument("--config", help="key=value config file", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered identities")

    p_run = sub.add_parser("run", help="run one identity")
    p_run.add_argument("id")
    p_run.add_argument("--order", type=int, default=None)
    p_run.add_argument("--prec", type=int, default=None)
    p_run.add_argument("--window", type=int, default=None)
    p_run.add_argument("--tolerance", type=float, default=None)
    p_run.add_argument("--tau", action="append", default=None,
                       metavar="u,v", help="tau point (repeatable)")

    p_suite = sub.add_parser("suite", help="run the identity suite")
    p_suite.add_argument("--filter", default=None, help="glob on identity ids")
    p_suite.add_argument("--jobs", type=int, default=None)
    p_suite.add_argument("--order", type=int, default=None)
    p_suite.add_argument("--prec", type=int, default=None)
    p_suite.add_argument("--window", type=int, default=None)
    p_suite.add_argument("--tolerance", type=float, default=None)
    p_suite.add_argument("--tau", action="append", default=None, metavar="u,v")

    p_exp = sub.add_parser("expand", help="emit a named series")
    p_exp.add_argument("object")
    p_exp.add_argument("--order", type=int, required=True)
    p_exp.add_argument("--format", choices=("json", "csv"), default="json")

    p_or = sub.add_parser("oracle", help="enumeration table for a family")
    p_or.add_argument("family")
    p_or.add_argument("--n", type=int, required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "list":
            return cmd_list(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "suite":
            return cmd_suite(args)
        if args.command == "expand":
            return cmd_expand(args)
        if args.command == "oracle":
            return cmd_oracle(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PwOmegaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
