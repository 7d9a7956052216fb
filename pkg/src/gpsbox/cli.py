"""Command-line front end.

Exit codes: 0 success, 1 reproduce/verify mismatch, 2 invalid configuration,
3 solver failure, 4 sweep with fewer than 90% of points computed,
5 unbound state or no critical radius, 6 oracle bracket failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

from gpsbox.analysis import NoRootError, critical_radius, free_ordering, small_box_ordering, sweep
from gpsbox.config import ORDER_ENV, ConfigError, RunConfig, build_config, env_order, load_config_file
from gpsbox.hamiltonian import (
    ConfinedProblem,
    SolverError,
    StateLabel,
    UnboundStateError,
    count_nodes,
    solve,
)
from gpsbox.observables import MOMENT_POWERS, FormulaError, moments, polarizability
from gpsbox.oracle import OracleError, numerov_energy
from gpsbox.reproduce import TABLE_IDS, reproduce

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_SOLVER, EXIT_SWEEP, EXIT_UNBOUND, EXIT_ORACLE = range(7)
VERIFY_TOL = 1e-7
SWEEP_MIN_FRACTION = 0.9


class CommandError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass
class Report:
    """Tabular command output plus comment lines and the config echo."""

    command: str
    columns: list
    rows: list = field(default_factory=list)
    comments: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    status: int = EXIT_OK


def fmt(value):
    """12 significant digits for floats; everything else as text."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.12g}") if math.isfinite(value) else None
    return value


def render(report: Report, style: str) -> str:
    if style == "json":
        doc = {
            "command": report.command,
            "config": report.config,
            "results": [{c: _json_value(v) for c, v in zip(report.columns, row)} for row in report.rows],
            "comments": report.comments,
            "exit_code": report.status,
        }
        return json.dumps(doc, indent=2) + "\n"
    if style == "csv":
        buf = io.StringIO()
        for line in report.comments:
            buf.write(f"# {line}\r\n")
        writer = csv.writer(buf)  # RFC 4180: CRLF line ends, minimal quoting
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()
    cells = [[fmt(v) for v in row] for row in report.rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(report.columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(report.columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines += [f"# {c}" for c in report.comments]
    return "\n".join(lines) + "\n"


def _need_labels(cfg):
    labels = cfg.labels()
    if not labels:
        raise ConfigError("no states given: use --state or --ell with --count")
    return labels


def _single_rc(cfg):
    radii = cfg.radii()
    if len(radii) != 1:
        raise ConfigError(f"this command needs exactly one cavity radius, got {len(radii)}")
    return radii[0]


def _no_scale(cfg, command):
    if cfg.scale is not None:
        raise ConfigError(f"--scale applies to single-radius solves, not to {command}")


def cmd_solve(cfg: RunConfig) -> Report:
    labels = _need_labels(cfg)
    r_c = _single_rc(cfg)
    pot = cfg.make_potential()
    order = cfg.resolved_order()
    columns = ["state", "n", "l", "rc", "energy", "nodes"]
    if cfg.moments:
        columns += [f"r^{p}" for p in MOMENT_POWERS]
    report = Report("solve", columns)
    for state in labels:
        spec = solve(ConfinedProblem(pot, state.ell, r_c, order, cfg.scale), state.k + 1)
        row = [str(state), state.n, state.ell, r_c, spec.energy(state), count_nodes(spec.psi(state))]
        if cfg.moments:
            m = moments(spec, state)
            row += [m[p] for p in MOMENT_POWERS]
        report.rows.append(row)
    cfg.order = order
    return report


def cmd_sweep(cfg: RunConfig) -> Report:
    labels = _need_labels(cfg)
    _no_scale(cfg, "sweep")
    radii = cfg.radii()
    if len(radii) < 2:
        raise ConfigError("sweep needs at least two cavity radii")
    pot = cfg.make_potential()
    # explicit order, else the environment default, else a convergence pre-check
    order = cfg.order if cfg.order is not None else env_order()
    results = [sweep(pot, state, radii, order) for state in labels]
    report = Report("sweep", ["rc"] + [f"E_{s}" for s in labels])
    ok = 0
    for i, r_c in enumerate(radii):
        row = [r_c]
        for res in results:
            hit = dict(res.points).get(r_c)
            row.append(hit)
            ok += hit is not None
        report.rows.append(row)
    for state, res in zip(labels, results):
        for r_c, message in res.failures:
            report.comments.append(f"failed {state} rc={fmt(r_c)}: {message}")
    used = sorted({res.order for res in results})
    report.comments.insert(0, f"grid order {', '.join(map(str, used))}")
    cfg.order = used[0] if len(used) == 1 else cfg.order
    total = len(radii) * len(labels)
    if ok < SWEEP_MIN_FRACTION * total:
        report.status = EXIT_SWEEP
        report.comments.append(f"only {ok}/{total} points computed")
    return report


def cmd_critical(cfg: RunConfig) -> Report:
    _no_scale(cfg, "critical")
    if cfg.all_n is not None:
        labels = [StateLabel(n, ell) for n in range(1, cfg.all_n + 1) for ell in range(n)]
    else:
        labels = _need_labels(cfg)
    pot = cfg.make_potential()
    order = cfg.resolved_order()
    report = Report("critical", ["state", "rc_critical", "residual", "bracket_width", "certificate_h"])
    for state in labels:
        try:
            cr = critical_radius(pot, state, tol=cfg.tol, order=order)
        except (NoRootError, UnboundStateError) as exc:
            report.rows.append([str(state), None, None, None, None])
            report.comments.append(f"{state}: {exc}")
            report.status = EXIT_UNBOUND
            continue
        report.rows.append([str(state), cr.radius, cr.residual, cr.bracket_width,
                            10.0 * max(cr.bracket_width, 2.220446049250313e-16 * cr.radius)])
    cfg.order = order
    return report


def cmd_polarizability(cfg: RunConfig) -> Report:
    labels = _need_labels(cfg)
    radii = cfg.radii()
    if not radii:
        raise ConfigError("no cavity radius given")
    pot = cfg.make_potential()
    order = cfg.resolved_order()
    report = Report("polarizability", ["state", "rc", "r^1", "r^2", "r^3", "alpha_K", "alpha_B"])
    for state in labels:
        for r_c in radii:
            spec = solve(ConfinedProblem(pot, state.ell, r_c, order, cfg.scale), state.k + 1)
            m = moments(spec, state, powers=(1, 2, 3))
            pair = polarizability(m)
            report.rows.append([str(state), r_c, m[1], m[2], m[3], pair.kirkwood, pair.buckingham])
    cfg.order = order
    return report


def cmd_ordering(cfg: RunConfig) -> Report:
    _no_scale(cfg, "ordering")
    pot = cfg.make_potential()
    order = cfg.resolved_order()
    if cfg.mode == "small":
        r_c = _single_rc(cfg)
        levels = small_box_ordering(pot, r_c, cfg.max_states, order, with_energies=True)
    else:
        try:
            levels = free_ordering(pot, cfg.max_states, order, with_energies=True)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
    report = Report("ordering", ["rank", "state", "energy"])
    for i, (e, state) in enumerate(levels, 1):
        report.rows.append([i, str(state), e])
    cfg.order = order
    return report


def cmd_reproduce(cfg: RunConfig) -> Report:
    _no_scale(cfg, "reproduce")
    tables = cfg.tables or list(TABLE_IDS)
    if tables == ["ALL"]:
        tables = list(TABLE_IDS)
    for t in tables:
        if t not in TABLE_IDS:
            raise ConfigError(f"unknown table {t!r}; choose from {', '.join(TABLE_IDS)} or ALL")
    order = cfg.resolved_order()
    report = Report("reproduce", ["table", "source", "quantity", "state", "rc", "computed",
                                  "reference", "diff", "tol", "pass"])
    for t in tables:
        art = reproduce(t, order)
        for r in art.rows:
            c = r.cell
            report.rows.append([c.table, f"{c.row} / {c.column}", c.quantity, str(c.state), c.r_c,
                                r.computed, c.value, r.diff, r.tol, r.passed])
        n_fail = len(art.failures)
        report.comments.append(f"Table {t}: {len(art.rows) - n_fail}/{len(art.rows)} rows pass")
        if n_fail:
            report.status = EXIT_MISMATCH
    cfg.order = order
    return report


def cmd_verify(cfg: RunConfig) -> Report:
    labels = _need_labels(cfg)
    if len(labels) != 1:
        raise ConfigError("verify takes a single state")
    state = labels[0]
    r_c = _single_rc(cfg)
    pot = cfg.make_potential()
    order = cfg.resolved_order()
    e_gps = solve(ConfinedProblem(pot, state.ell, r_c, order, cfg.scale), state.k + 1).energy(state)
    try:
        shot = numerov_energy(pot, state.ell, r_c, state.k, points=cfg.points)
    except OracleError as exc:
        raise CommandError(f"oracle failed: {exc}", EXIT_ORACLE) from None
    diff = abs(e_gps - shot.energy)
    report = Report("verify", ["state", "rc", "E_gps", "E_numerov", "diff", "step", "pass"])
    report.rows.append([str(state), r_c, e_gps, shot.energy, diff, shot.step, diff <= VERIFY_TOL])
    if diff > VERIFY_TOL:
        report.status = EXIT_MISMATCH
    cfg.order = order
    return report


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "polarizability": cmd_polarizability,
    "ordering": cmd_ordering,
    "reproduce": cmd_reproduce,
    "verify": cmd_verify,
}

def _add_common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="flat key = value file or JSON output to reuse")
    p.add_argument("--potential", default=S, help="coulomb | hulthen | box")
    p.add_argument("--charge", type=float, default=S, help="nuclear charge Z (coulomb)")
    p.add_argument("--delta", type=float, default=S, help="screening parameter (hulthen)")
    p.add_argument("--state", dest="states", action="append", default=S,
                   help="state label such as 1s, 2p, 10m or 8,7; repeatable")
    p.add_argument("--ell", type=int, default=S, help="angular momentum, with --count")
    p.add_argument("--count", type=int, default=S, help="number of lowest states for --ell")
    p.add_argument("--rc", type=float, nargs="+", default=S, help="cavity radius or radii (a.u.)")
    p.add_argument("--rc-range", dest="rc_range", nargs="+", default=S,
                   metavar=("START", "STOP"), help="START STOP COUNT [lin|log]")
    p.add_argument("--order", type=int, default=S,
                   help=f"grid order N (default 128, or ${ORDER_ENV})")
    p.add_argument("--scale", type=float, default=S, help="mapping parameter L (default r_c/2)")
    p.add_argument("--format", choices=("table", "csv", "json"), default=S)
    p.add_argument("--output", "-o", default=S, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpsbox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    p = sub.add_parser("solve", help="energies of states at one cavity radius")
    _add_common(p)
    p.add_argument("--moments", action="store_true", default=S, help="also print <r^k>")

    p = sub.add_parser("sweep", help="energy curves over a range of cavity radii")
    _add_common(p)

    p = sub.add_parser("critical", help="critical cavity radii")
    _add_common(p)
    p.add_argument("--all-n", dest="all_n", type=int, default=S, help="every state with n up to this")
    p.add_argument("--tol", type=float, default=S, help="|E| tolerance at the root")

    p = sub.add_parser("polarizability", help="Kirkwood and Buckingham polarizabilities")
    _add_common(p)

    p = sub.add_parser("ordering", help="level ordering across l blocks")
    _add_common(p)
    p.add_argument("--mode", choices=("small", "free"), default=S)
    p.add_argument("--max-states", dest="max_states", type=int, default=S)

    p = sub.add_parser("reproduce", help="recompute reference tables against stored values")
    _add_common(p)
    p.add_argument("tables", nargs="*", default=S, help=f"{' '.join(TABLE_IDS)} or ALL")

    p = sub.add_parser("verify", help="compare against the Numerov shooting oracle")
    _add_common(p)
    p.add_argument("--points", type=int, default=S, help="Numerov mesh intervals (>= 2000)")
    return parser


def _overrides(ns):
    values = dict(vars(ns))
    values.pop("command", None)
    values.pop("config", None)
    if "rc_range" in values:
        raw = values["rc_range"]
        if len(raw) not in (3, 4):
            raise ConfigError("--rc-range takes START STOP COUNT [lin|log]")
        try:
            values["rc_range"] = [float(raw[0]), float(raw[1]), int(raw[2])] + raw[3:]
        except ValueError:
            raise ConfigError(f"--rc-range values {raw!r} are not numbers") from None
    if "rc_range" in values and "rc" not in values:
        values["rc"] = []
    if "rc" in values and "rc_range" not in values:
        values["rc_range"] = None
    if "ell" in values and "states" not in values:
        values["states"] = []
    return values


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    style = getattr(ns, "format", "table")
    try:
        file_values = load_config_file(ns.config) if hasattr(ns, "config") else None
        cfg = build_config(file_values, _overrides(ns))
        style = cfg.format
        report = COMMANDS[ns.command](cfg)
    except ConfigError as exc:
        print(f"gpsbox: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CommandError as exc:
        print(f"gpsbox: {exc}", file=sys.stderr)
        return exc.code
    except (UnboundStateError, NoRootError) as exc:
        print(f"gpsbox: {exc}", file=sys.stderr)
        return EXIT_UNBOUND
    except (SolverError, FormulaError) as exc:
        print(f"gpsbox: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    report.config = cfg.echo()
    if report.status == EXIT_MISMATCH and ns.command == "reproduce":
        for row in report.rows:
            if not row[-1]:
                print(f"FAIL Table {row[0]} {row[1]} {row[3]}: computed {fmt(row[5])},"
                      f" reference {fmt(row[6])}, diff {row[7]:.3g} > {row[8]:g}", file=sys.stderr)
    _emit(render(report, style), cfg.output)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
