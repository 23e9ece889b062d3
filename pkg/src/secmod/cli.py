"""Command line interface.

Subcommands and their outputs:

  sep-curve      CSV  a,snr_db,sigma,sep
  pac-table      CSV  snr_leg,snr_eve,msep_b,pac_a,status,sep_leg,sep_eve,a_max
  sep-breakdown  JSON a, snr_db, sigma, the 20 named SCP values and sep
  capacity-gap   CSV  snr_leg,snr_eve,msep_b,bandwidth,pac_a,wiretap_capacity,
                      snr_equ_wiretap,snr_equ_actual,gap
  validate       JSON per-cell closed-form vs Monte-Carlo comparison
  transmit       JSON end-to-end transmission report

Every subcommand accepts ``--config FILE`` with flat ``key = value`` lines
whose keys are the long option names (dashes or underscores); flags given on
the command line win. Output goes to ``--out`` (``-`` for stdout), else to
``$SECMOD_OUTPUT_DIR/<command>.<csv|json>`` when that variable is set, else
to stdout. Failures print a JSON error record on stderr.

Exit codes: 0 ok, 1 validation cell failed, 2 usage, 3 infeasible or
non-binding PAC, 4 internal error.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from secmod.capacity import capacity_gap_curve
from secmod.errors import PacDomainError, PacStatusError
from secmod.montecarlo import validate_closed_form
from secmod.pac_optimizer import POLICIES, pac_grid, pac_table, sep_curve
from secmod.pipeline import (PAYLOAD_KINDS, TransmitConfig, parse_config_text, transmit_payload,
                             transmit_random)
from secmod.sep_analytics import scp_breakdown, sigma_from_snr

OUTPUT_DIR_ENV = "SECMOD_OUTPUT_DIR"

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2
EXIT_PAC = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_output(text, out, command, ext):
    """Write atomically (temp file + rename) or to stdout."""
    if out is None:
        outdir = os.environ.get(OUTPUT_DIR_ENV)
        if outdir:
            out = os.path.join(outdir, f"{command}.{ext}")
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = os.path.abspath(out)
    os.makedirs(os.path.dirname(target), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-", suffix="." + ext)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_sep_curve(args):
    if not 0 < args.a_min <= args.a_max < 0.5 or args.a_step <= 0:
        raise UsageError("need 0 < a-min <= a-max < 0.5 and a-step > 0")
    grid = pac_grid(args.a_min, args.a_max, args.a_step)
    rows = []
    for snr in args.snr:
        sigma = sigma_from_snr(snr)
        rows += [(a, snr, sigma, s) for a, s in sep_curve(snr, grid)]
    return _csv_text(["a", "snr_db", "sigma", "sep"], rows), "csv", EXIT_OK


def _cmd_pac_table(args):
    sols = pac_table(args.snr_leg, args.snr_eve, args.msep, policy=args.policy, workers=args.workers)
    rows = [(s.query.snr_leg, s.query.snr_eve, s.query.msep_b,
             s.a if s.active else "-", s.status.value, s.sep_leg, s.sep_eve, s.a_max)
            for s in sols]
    header = ["snr_leg", "snr_eve", "msep_b", "pac_a", "status", "sep_leg", "sep_eve", "a_max"]
    return _csv_text(header, rows), "csv", EXIT_OK


def _cmd_sep_breakdown(args):
    sigma = sigma_from_snr(args.snr)
    bd = scp_breakdown(args.a, sigma)
    doc = {"a": bd.a, "snr_db": args.snr, "sigma": sigma, "scp": bd.named_fields(), "sep": bd.sep}
    return _json_text(doc), "json", EXIT_OK


def _cmd_capacity_gap(args):
    reports = capacity_gap_curve(args.snr_leg, args.snr_eve, args.msep,
                                 bandwidth=args.bandwidth, policy=args.policy)
    rows = [(r.snr_leg, r.snr_eve, r.msep_b, r.bandwidth, r.pac_a, r.wiretap_capacity,
             r.snr_equ_wiretap, r.snr_equ_actual, r.gap) for r in reports]
    header = ["snr_leg", "snr_eve", "msep_b", "bandwidth", "pac_a", "wiretap_capacity",
              "snr_equ_wiretap", "snr_equ_actual", "gap"]
    return _csv_text(header, rows), "csv", EXIT_OK


def _cmd_validate(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    grid = [(a, snr) for a in args.a for snr in args.snr]
    report = validate_closed_form(grid, args.trials, args.seed, workers=args.workers)
    doc = {
        "trials": report.trials,
        "seed": report.seed,
        "passed": report.passed,
        "cells": [{
            "a": c.a, "snr_db": c.snr_db, "sigma": c.sigma, "analytic_sep": c.analytic,
            "errors": c.estimate.errors, "simulated_sep": c.estimate.point,
            "ci_low": c.estimate.ci_low, "ci_high": c.estimate.ci_high, "passed": c.passed,
        } for c in report.cells],
    }
    return _json_text(doc), "json", EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def _cmd_transmit(args):
    keys = ["snr_leg", "snr_eve", "msep_b", "pac_a", "seed", "payload_kind", "n_symbols",
            "width", "height", "superposition_enabled", "snr_eve_actual", "policy"]
    config = TransmitConfig(**{k: getattr(args, k) for k in keys})
    if config.payload_kind == "random-bits":
        report = transmit_random(config)
    else:
        if not args.payload:
            raise UsageError(f"--payload FILE is required for {config.payload_kind}")
        with open(args.payload, "rb") as fh:
            report = transmit_payload(fh.read(), config)
    return _json_text(report.to_dict()), "json", EXIT_OK


def build_parser():
    p = _Parser(prog="secmod", description="Superposition-coded secure 4-QAM toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="flat key = value file supplying option defaults")
        sp.add_argument("--out", help="output path, '-' for stdout")
        return sp

    sp = common(sub.add_parser("sep-curve", help="SEP versus PAC curves"))
    sp.add_argument("--snr", type=float, nargs="+", default=[20.0, -10.0])
    sp.add_argument("--a-min", type=float, default=0.001)
    sp.add_argument("--a-max", type=float, default=0.499)
    sp.add_argument("--a-step", type=float, default=0.001)
    sp.set_defaults(func=_cmd_sep_curve)

    sp = common(sub.add_parser("pac-table", help="optimal PAC for SNR/MSEP grid"))
    sp.add_argument("--snr-leg", type=float, default=20.0)
    sp.add_argument("--snr-eve", type=float, nargs="+", default=[-15.0, -10.0, -5.0, 0.0, 5.0])
    sp.add_argument("--msep", type=float, nargs="+", default=[0.74, 0.73, 0.72, 0.71])
    sp.add_argument("--policy", choices=POLICIES, default="boundary")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=_cmd_pac_table)

    sp = common(sub.add_parser("sep-breakdown", help="all SCP terms for one (a, SNR)"))
    sp.add_argument("--a", type=float, default=0.04)
    sp.add_argument("--snr", type=float, default=-15.0)
    sp.set_defaults(func=_cmd_sep_breakdown)

    sp = common(sub.add_parser("capacity-gap", help="equivalent-SNR gap to wiretap capacity"))
    sp.add_argument("--snr-leg", type=float, nargs="+", default=[10.0, 15.0, 20.0, 25.0])
    sp.add_argument("--snr-eve", type=float, default=-10.0)
    sp.add_argument("--msep", type=float, nargs="+", default=[0.71, 0.72, 0.73, 0.74])
    sp.add_argument("--bandwidth", type=float, default=1.0)
    sp.add_argument("--policy", choices=POLICIES, default="boundary")
    sp.set_defaults(func=_cmd_capacity_gap)

    sp = common(sub.add_parser("validate", help="closed-form SEP against Monte-Carlo"))
    sp.add_argument("--a", type=float, nargs="+", default=[0.01, 0.05, 0.1, 0.2, 0.4])
    sp.add_argument("--snr", type=float, nargs="+", default=[-15.0, -10.0, -5.0, 0.0, 20.0])
    sp.add_argument("--trials", type=int, default=10 ** 6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=_cmd_validate)

    sp = common(sub.add_parser("transmit", help="send a payload to Bob and Eve"))
    sp.add_argument("--snr-leg", type=float, default=20.0)
    sp.add_argument("--snr-eve", type=float, default=-10.0)
    sp.add_argument("--msep-b", "--msep", type=float, default=None)
    sp.add_argument("--pac-a", "--pac", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--payload-kind", choices=PAYLOAD_KINDS, default="random-bits")
    sp.add_argument("--n-symbols", type=int, default=0)
    sp.add_argument("--payload", help="payload file for raw-bytes / raw-image")
    sp.add_argument("--width", type=int)
    sp.add_argument("--height", type=int)
    sp.add_argument("--no-superposition", dest="superposition_enabled", action="store_false")
    sp.add_argument("--snr-eve-actual", type=float, default=None)
    sp.add_argument("--policy", choices=POLICIES, default="boundary")
    sp.set_defaults(func=_cmd_transmit, superposition_enabled=True)
    return p


def _config_defaults(sp, path):
    """Turn a config file into parser defaults, typed like the matching options."""
    with open(path) as fh:
        entries = parse_config_text(fh.read())
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, raw in entries.items():
        if key == "superposition_enabled":
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            continue
        if key == "msep" and "msep_b" in actions:
            key = "msep_b"
        if key not in actions or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r}")
        act = actions[key]
        conv = act.type or str
        try:
            if act.nargs in ("+", "*"):
                defaults[key] = [conv(v) for v in raw.replace(",", " ").split()]
            elif raw.lower() in ("none", "null", ""):
                defaults[key] = None
            else:
                defaults[key] = conv(raw)
        except ValueError as exc:
            raise UsageError(f"config key {key!r}: {exc}") from exc
        if act.choices is not None and defaults[key] not in act.choices:
            raise UsageError(f"config key {key!r}: {raw!r} not in {list(act.choices)}")
    return defaults


def _error(code, kind, message):
    sys.stderr.write(json.dumps({"error": {"code": code, "type": kind, "message": message}}) + "\n")
    return code


def run_cli(argv=None):
    """Parse ``argv``, run the subcommand and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            sp = parser._subparsers._group_actions[0].choices[args.command]
            sp.set_defaults(**_config_defaults(sp, args.config))
            args = parser.parse_args(argv)
        text, ext, code = args.func(args)
        write_output(text, args.out, args.command, ext)
        return code
    except UsageError as exc:
        return _error(EXIT_USAGE, "usage", str(exc))
    except PacStatusError as exc:
        return _error(EXIT_PAC, "pac_status", str(exc))
    except (PacDomainError, ValueError, OSError) as exc:
        return _error(EXIT_USAGE, type(exc).__name__, str(exc))
    except Exception as exc:  # noqa: BLE001
        return _error(EXIT_INTERNAL, type(exc).__name__, str(exc))


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
