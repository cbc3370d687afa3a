"""Command-line front end: `shagrowth {local,periods,omega-phi,growth,conductor-bound}`."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import sympy

from . import catalog
from .assembler import growth_report
from .conductor_bounds import (base_change_conductor_bound, epsilon_bound_two_adic, m_from_f,
                               tower_conductor_ceiling)
from .curves import minimal_model, tate_local_data, torsion_order
from .exact import format_fraction, to_fraction
from .local_growth import omega_phi
from .periods import period_data, period_quotients
from .report import growth_csv, growth_table, local_table, machine
from .tower import TowerModel, load_tower_file, parse_tower


class RequireExactError(RuntimeError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    output_format: str = "table"
    digits: int = 50
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.output_format not in ("table", "machine"):
            raise ValueError("format must be 'table' or 'machine'")
        if self.digits < 30:
            raise ValueError("precision must be at least 30 digits")
        p = self.options.get("p")
        if p is not None and not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")


def parse_layers(text: str) -> list[int]:
    """'1..4' or '2' or '1,3,5'."""
    if ".." in text:
        a, b = text.split("..")
        out = list(range(int(a), int(b) + 1))
    else:
        out = [int(x) for x in text.split(",")]
    if not out or min(out) < 0:
        raise ValueError(f"bad layer range {text!r}")
    return out


def _pair(text: str):
    if ":" not in text:
        raise ValueError("pair must look like SOURCE:TARGET")
    a, b = text.split(":", 1)
    return a, b


def _tower(opts) -> TowerModel:
    if opts.get("tower_file"):
        return load_tower_file(opts["tower_file"])
    if opts.get("tower"):
        return parse_tower(opts["tower"])
    raise ValueError("a tower is required (--tower or --tower-file)")


def _render(cfg: RunConfig, doc: dict, table: str) -> str:
    return machine(doc) if cfg.output_format == "machine" else table


def _run_local(cfg: RunConfig) -> str:
    E = minimal_model(catalog.curve(cfg.options["curve"]))[0]
    d = tate_local_data(E, cfg.options["prime"])
    doc = {"curve": cfg.options["curve"], "minimal_model": E.to_json(), **d.to_json()}
    return _render(cfg, doc, local_table(doc))


def _run_periods(cfg: RunConfig) -> str:
    E = minimal_model(catalog.curve(cfg.options["curve"]))[0]
    with mpmath.workdps(cfg.digits):
        pd = period_data(E, cfg.digits)
        shown = 20
        doc = {"curve": cfg.options["curve"], "omega": mpmath.nstr(pd.omega, shown),
               "omega_star": mpmath.nstr(pd.omega_star, shown),
               "least_real_period": mpmath.nstr(pd.real_period, shown), "components": pd.components,
               "torsion": torsion_order(E)}
    other = cfg.options.get("curve2")
    if other:
        om, om_star = period_quotients(E, catalog.curve(other), cfg.digits)
        doc.update({"other": other, "omega_quotient": format_fraction(om),
                    "omega_star_quotient": format_fraction(om_star)})
    return _render(cfg, doc, local_table(doc))


def _run_omega_phi(cfg: RunConfig) -> str:
    o = cfg.options
    a, b = _pair(o["pair"])
    q = o["prime"]
    dE = tate_local_data(minimal_model(catalog.curve(a))[0], q)
    dE2 = tate_local_data(minimal_model(catalog.curve(b))[0], q)
    ext_tame = None if o.get("ext_tame") is None else o["ext_tame"]
    val = omega_phi(dE, dE2, o["e"], ext_tame=ext_tame, degree=o.get("deg"),
                    conductor_F=o.get("conductor_F"), e_stable=o.get("e_stable"))
    if o.get("require_exact") and not val.is_exact:
        raise RequireExactError(f"Omega_phi is only known as an interval: {val}")
    doc = {"pair": o["pair"], "prime": q, "e": o["e"], "types": [dE.symbol, dE2.symbol],
           "delta": [dE.delta, dE2.delta], "omega_phi": val.to_json()}
    return _render(cfg, doc, local_table({**doc, "omega_phi": str(val)}))


def _run_growth(cfg: RunConfig) -> str:
    o = cfg.options
    a, b = _pair(o["pair"])
    phi = catalog.isogeny(a, b, o.get("deg"))
    T = _tower(o)
    torsion = {}
    for item in o.get("torsion") or []:
        n, t, t2 = (int(x) for x in item.split(":"))
        torsion[n] = (t, t2)
    rep = growth_report(phi, T, o["p"], o["layers"], o.get("rank_bound"), torsion, cfg.digits,
                        torsion_known=not o.get("torsion_unknown"))
    if o.get("require_exact") and not all(r.exact for r in rep.layers):
        bad = [r.n for r in rep.layers if not r.exact]
        raise RequireExactError(f"layers {bad} are only known as intervals")
    if o.get("csv"):
        with open(o["csv"], "w") as fh:
            fh.write(growth_csv(rep))
    if o.get("figure"):
        from .plotting import growth_figure
        growth_figure(rep, T.l, T.d, o["figure"])
    return _render(cfg, rep.to_json(), growth_table(rep))


def _run_conductor_bound(cfg: RunConfig) -> str:
    o = cfg.options
    doc = {}
    if o.get("l") is not None:
        doc["ceiling"] = format_fraction(tower_conductor_ceiling(o["l"], o.get("v") or 1, o.get("e") or 1))
    if o.get("f") is not None:
        f = to_fraction(o["f"])
        doc["base_change_bound"] = format_fraction(base_change_conductor_bound(f, o.get("e") or 1))
        doc["m"] = format_fraction(m_from_f(f, o.get("dim") or 2))
        doc["epsilon_bound_at_2"] = format_fraction(
            epsilon_bound_two_adic(f, o.get("e") or 1, None if o.get("r") is None else to_fraction(o["r"])))
    if not doc:
        raise ValueError("give --l (tower ceiling) and/or --f (base change bound)")
    return _render(cfg, doc, local_table(doc))


HANDLERS = {"local": _run_local, "periods": _run_periods, "omega-phi": _run_omega_phi,
            "growth": _run_growth, "conductor-bound": _run_conductor_bound}


def run(cfg: RunConfig) -> str:
    return HANDLERS[cfg.subcommand](cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "machine"), default="table", dest="output_format")
    common.add_argument("--digits", type=int, default=int(os.environ.get("SHAGROWTH_DIGITS", "50")),
                        help="working precision in decimal digits (env SHAGROWTH_DIGITS)")

    ap = argparse.ArgumentParser(prog="shagrowth", description="Growth of Sha quotients under isogeny in towers.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("local", parents=[common], help="Tate's algorithm at a prime")
    s.add_argument("--curve", required=True, help="bundled label or coefficients a1,a2,a3,a4,a6")
    s.add_argument("--prime", type=int, required=True)

    s = sub.add_parser("periods", parents=[common], help="periods and their quotients")
    s.add_argument("--curve", required=True)
    s.add_argument("--curve2")

    s = sub.add_parser("omega-phi", parents=[common], help="Omega_phi for one base change")
    s.add_argument("--pair", required=True, help="SOURCE:TARGET")
    s.add_argument("--prime", type=int, required=True)
    s.add_argument("--e", type=int, required=True)
    s.add_argument("--deg", type=int)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--ext-tame", dest="ext_tame", action="store_true", default=None)
    g.add_argument("--ext-wild", dest="ext_tame", action="store_false")
    s.add_argument("--conductor-F", dest="conductor_F", type=int)
    s.add_argument("--e-stable", dest="e_stable", type=int)
    s.add_argument("--require-exact", action="store_true")

    s = sub.add_parser("growth", parents=[common], help="growth report along a tower")
    s.add_argument("--pair", required=True, help="SOURCE:TARGET")
    s.add_argument("--deg", type=int)
    s.add_argument("--tower", help="cyclotomic:l, false-tate:l:m, z5sq-qi or a bundled tower name")
    s.add_argument("--tower-file")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--layers", type=parse_layers, default=parse_layers("0..4"))
    s.add_argument("--rank-bound", type=int)
    s.add_argument("--torsion", action="append", metavar="N:T:T2",
                   help="torsion orders of E and E' over layer N (repeatable)")
    s.add_argument("--torsion-unknown", action="store_true",
                   help="widen Sha intervals for torsion growth instead of assuming it stabilised")
    s.add_argument("--require-exact", action="store_true")
    s.add_argument("--figure")
    s.add_argument("--csv")

    s = sub.add_parser("conductor-bound", parents=[common], help="conductor calculus")
    s.add_argument("--l", type=int)
    s.add_argument("--v", type=int)
    s.add_argument("--e", type=int)
    s.add_argument("--f")
    s.add_argument("--dim", type=int)
    s.add_argument("--r")
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items() if k not in ("subcommand", "output_format", "digits")}
    try:
        cfg = RunConfig(args.subcommand, args.output_format, args.digits, opts)
        print(run(cfg))
    except RequireExactError as exc:
        print(f"shagrowth: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, ArithmeticError, OSError) as exc:
        print(f"shagrowth: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
