"""spindyn command line: reproducible runs, delimited output, rendered figures.

Subcommands: precess, align, brackets, accel, mptd, qmcheck, report.
Exit codes: 0 all good, 1 configuration error, 2 numerical or check failure.
Every run is deterministic for a fixed --seed (SPINDYN_SEED is the
fallback); CSV and JSON-lines files are byte-identical across repeats.
When an output directory is given, matplotlib figures are rendered next to
the delimited files (disable with --no-plot).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import acceleration as accel
from . import brackets as br
from . import curved as cv
from . import geometry as geo
from . import precession as pr
from . import quantum as qm
from .acceptance import run_acceptance
from .config import ConfigError, load_config_file, parse_vec3, resolve_seed
from .geometry import DomainError
from .precession import NumericalFailure
from .reporting import CheckReport, csv_text, fmt, write_json_lines

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


class CliParser(argparse.ArgumentParser):
    """argparse variant whose usage errors honor the exit-code contract."""

    def error(self, message):
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(sub, constants=True):
    sub.add_argument("--seed", type=int, default=None,
                     help="random seed (fallback: SPINDYN_SEED, then 0)")
    sub.add_argument("--out", default=None, help="output directory")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker cap for parallel sweeps (default: all cores)")
    sub.add_argument("--config", default=None,
                     help="key = value file with defaults for this command")
    sub.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None,
                     help="render PNG figures next to the output files "
                          "(default: on when --out is set)")
    if constants:
        sub.add_argument("--e", type=float, default=-1.0, help="charge")
        sub.add_argument("--m", type=float, default=1.0, help="mass")
        sub.add_argument("--c", type=float, default=1.0, help="speed of light")
        sub.add_argument("--hbar", type=float, default=1.0)


def build_parser():
    parser = CliParser(prog="spindyn",
                       description="numerical lab for spinning-electron dynamics")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    for name, gamma_default, theta_default in (("precess", 0.0, None),
                                               ("align", 1.0, 0.25 * math.pi)):
        sp = subs.add_parser(name, help="integrate the spin flow "
                             + ("(alignment coupling on)" if name == "align" else ""))
        _add_common(sp)
        sp.add_argument("--gamma", type=float, default=gamma_default,
                        help="dimensionless alignment coupling (>= 0)")
        sp.add_argument("--B", type=parse_vec3, default="0,0,1")
        sp.add_argument("--E", type=parse_vec3, default="0,0,0")
        sp.add_argument("--A0", type=float, default=0.0)
        sp.add_argument("--p", type=parse_vec3, default="0,0,0",
                        help="background momentum entering the precession vector")
        sp.add_argument("--S", type=parse_vec3, default=None,
                        help="initial spin vector (overrides --theta0)")
        sp.add_argument("--theta0", type=float, default=theta_default,
                        help="initial angle to B (builds S in the B plane)")
        sp.add_argument("--smag", type=float, default=math.sqrt(3.0) / 2.0,
                        help="|S| used with --theta0")
        sp.add_argument("--dt", type=float, default=0.01)
        sp.add_argument("--steps", type=int, default=1000)
        sp.add_argument("--scheme", choices=("rk4", "rk45"), default="rk4")
        sp.add_argument("--eps", type=float, default=0.01,
                        help="angular threshold for the alignment-time readout")
        sp.set_defaults(handler=cmd_precess)

    sp = subs.add_parser("brackets", help="Poisson-structure self checks")
    _add_common(sp)
    sp.add_argument("--check", action="store_true", default=True,
                    help="emit the bracket CheckReport (default)")
    sp.set_defaults(handler=cmd_brackets)

    sp = subs.add_parser("accel", help="longitudinal-acceleration scaling sweep")
    _add_common(sp)
    sp.add_argument("--scenario", choices=("em", "geodesic", "synthetic"),
                    default="em")
    sp.add_argument("--vmin", type=float, default=0.90)
    sp.add_argument("--vmax", type=float, default=0.999)
    sp.add_argument("--npoints", type=int, default=23)
    sp.add_argument("--E0", type=float, default=1.0, help="field strength (em)")
    sp.add_argument("--rs", type=float, default=2.0)
    sp.add_argument("--r-over-rs", type=float, default=10.0)
    sp.add_argument("--exponent", type=float, default=1.5,
                    help="exact power for the synthetic self-test")
    sp.set_defaults(handler=cmd_accel)

    sp = subs.add_parser("mptd", help="spinning body in Schwarzschild spacetime")
    _add_common(sp)
    sp.add_argument("--kappa", type=int, choices=(0, 1), default=0)
    sp.add_argument("--rs", type=float, default=2.0)
    sp.add_argument("--r0-over-rs", type=float, default=10.0)
    sp.add_argument("--orbit", choices=("circular", "radial"), default="circular")
    sp.add_argument("--v-local", type=float, default=0.0,
                    help="local speed for the radial orbit")
    sp.add_argument("--alpha", type=float, default=0.75,
                    help="spin-square scale: S.S = 8 alpha")
    sp.add_argument("--spin-scale", type=float, default=1.0)
    sp.add_argument("--spin-dir", type=parse_vec3, default="0,0,1",
                    help="spin direction in the local static frame")
    sp.add_argument("--dtau", type=float, default=0.05)
    sp.add_argument("--steps", type=int, default=2000)
    sp.add_argument("--flat", action="store_true",
                    help="flat spacetime control run")
    sp.set_defaults(handler=cmd_mptd)

    sp = subs.add_parser("qmcheck", help="operator-identity suite and packet demos")
    _add_common(sp)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--pmax", type=float, default=10.0,
                    help="max |p| in units of mc")
    sp.add_argument("--zitter", action="store_true",
                    help="also run the wave-packet oscillation demo")
    sp.add_argument("--mix", type=float, default=0.5,
                    help="negative-branch weight for the packet demo")
    sp.add_argument("--grid-n", type=int, default=512)
    sp.add_argument("--dp", type=float, default=0.0025)
    sp.add_argument("--sigma-p", type=float, default=0.02)
    sp.add_argument("--T", type=float, default=500.0)
    sp.add_argument("--nsamples", type=int, default=4096)
    sp.set_defaults(handler=cmd_qmcheck)

    sp = subs.add_parser("report", help="aggregate acceptance report")
    _add_common(sp, constants=False)
    sp.add_argument("--json", action="store_true", help="machine-readable rows")
    sp.add_argument("--criteria", default=None,
                    help="comma-separated criterion numbers (default: all)")
    sp.add_argument("--selftest-flip-alignment", action="store_true",
                    help=argparse.SUPPRESS)
    sp.set_defaults(handler=cmd_report)

    return parser, subs


# ---------------------------------------------------------------------------
# helpers

def _ensure_out(args):
    if args.out:
        os.makedirs(args.out, exist_ok=True)


def _want_plots(args):
    if args.plot is None:
        return args.out is not None
    if args.plot and not args.out:
        raise ConfigError("--plot requires --out")
    return args.plot


def _write(args, name, text):
    path = os.path.join(args.out, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _pmap(fn, items, threads):
    n = threads if threads is not None else (os.cpu_count() or 1)
    if n > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=n) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _initial_spin(args):
    if args.S is not None:
        return np.asarray(args.S, dtype=float)
    if args.theta0 is None:
        return np.array([1.0, 0.0, 0.0])
    bnorm = float(np.linalg.norm(args.B))
    bhat = args.B / bnorm if bnorm > 0 else np.array([0.0, 0.0, 1.0])
    ref = np.array([1.0, 0.0, 0.0])
    if abs(float(bhat @ ref)) > 0.9:
        ref = np.array([0.0, 1.0, 0.0])
    perp = ref - bhat * float(bhat @ ref)
    perp /= np.linalg.norm(perp)
    return args.smag * (math.cos(args.theta0) * bhat + math.sin(args.theta0) * perp)


# ---------------------------------------------------------------------------
# handlers

def cmd_precess(args):
    params = pr.ParticleParams(e=args.e, m=args.m, c=args.c, hbar=args.hbar,
                               gamma_align=args.gamma)
    fields = pr.FieldConfig(E=args.E, B=args.B, A0=args.A0)
    S0 = _initial_spin(args)
    state = pr.SpinState(S=S0, p=args.p)
    traj = pr.integrate_spin(state, fields, params, dt=args.dt,
                             n_steps=args.steps, scheme=args.scheme)

    text = csv_text(pr.CSV_HEADER_SPIN, traj.rows())
    if args.out:
        _ensure_out(args)
        _write(args, "precess.csv", text)
        if _want_plots(args):
            from .plotting import plot_spin_trajectory
            plot_spin_trajectory(traj, os.path.join(args.out, "precess.png"))
    else:
        sys.stdout.write(text)

    final_theta = traj.theta[-1]
    print(f"# final theta = {final_theta:.6g} rad", file=sys.stderr)
    print(f"# |S| relative drift = {traj.smag_drift():.3e}", file=sys.stderr)
    if params.gamma_align > 0:
        t_align = pr.measure_alignment_time(traj, args.eps)
        rate = pr.decay_rate_fit(traj)
        beta_b = params.beta_align * float(np.linalg.norm(args.B))
        print(f"# measured tan-decay rate = {-rate:.6g} (beta |B| = {beta_b:.6g})",
              file=sys.stderr)
        if t_align is not None:
            print(f"# alignment time (< {args.eps:g} rad) = {t_align:.6g}",
                  file=sys.stderr)
        else:
            print("# alignment threshold not reached in this window", file=sys.stderr)
    return EXIT_OK


def cmd_brackets(args):
    params = pr.ParticleParams(e=args.e, m=args.m, c=args.c, hbar=args.hbar)
    table = br.standard_spin_table(params)
    rng = np.random.default_rng(resolve_seed(args.seed))
    rep = CheckReport()

    worst = 0.0
    for _ in range(100):
        pt = br.PhasePoint(x=rng.normal(size=3), p=rng.normal(size=3),
                           S=rng.normal(size=3))
        pi = table.structure_matrix(pt)
        worst = max(worst, float(np.max(np.abs(pi + pi.T))))
    rep.add("antisymmetry-random-points", worst, 1e-15)

    pt = br.PhasePoint(x=rng.normal(size=3), p=rng.normal(size=3),
                       S=rng.normal(size=3))
    rep.add("so3-jacobi", br.jacobi_residual(
        table, pt, br.coordinate("S1"), br.coordinate("S2"), br.coordinate("S3")),
        1e-10)
    rep.add("mixed-xxS-jacobi", br.jacobi_residual(
        table, pt, br.coordinate("x1"), br.coordinate("x2"), br.coordinate("S3")),
        1e-8)
    defect = br.jacobi_residual(table, pt, br.coordinate("S1"),
                                br.coordinate("x1"), br.coordinate("x2"))
    oracle = abs(pt.S[1]) / (params.m * params.c) ** 2
    rep.add("truncated-table-defect-vs-oracle", abs(defect - oracle),
            1e-6 * max(1.0, oracle), measured=defect, expected=oracle)
    rep.add("casimir-analytic", br.casimir_residual(table, pt), 1e-14)
    rep.add("casimir-fd", br.casimir_residual(table, pt, use_fd=True), 1e-10)

    fields = pr.FieldConfig(E=[1.0, 0.5, -0.2], B=[0.3, 0.1, 0.8])
    H = br.pauli_hamiltonian_function(fields, params)
    _, _, dS = br.hamiltonian_flow(table, H, pt)
    R = pr.precession_vector(fields, pt.p, params)
    rep.add("flow-vs-precession-law",
            float(np.max(np.abs(dS - pr.precession_rhs(pt.S, R)))), 1e-12)

    slope, _ = br.xx_bracket_c_scaling(
        lambda c: pr.ParticleParams(e=args.e, m=args.m, c=c, hbar=args.hbar),
        [10.0, 100.0, 1000.0], pt)
    rep.add("xx-c-scaling-slope", abs(slope + 2.0), 0.01, measured=slope)

    sys.stdout.write(rep.json_lines())
    if args.out:
        _ensure_out(args)
        _write(args, "brackets.jsonl", rep.json_lines())
        if _want_plots(args):
            from .plotting import plot_check_report
            plot_check_report(rep, os.path.join(args.out, "brackets.png"),
                              title="bracket-engine checks")
    if not rep.all_pass:
        print(f"# FAILED: {[it.name for it in rep.failures()]}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_accel(args):
    if not 0.0 < args.vmin < args.vmax < args.c:
        raise ConfigError("need 0 < vmin < vmax < c")
    speeds = list(np.linspace(args.vmin, args.vmax, args.npoints))
    if args.scenario == "em":
        samples = _pmap(lambda v: accel.em_parallel_sweep([v], E_mag=args.E0,
                                                          e=args.e, m=args.m,
                                                          c=args.c)[0],
                        speeds, args.threads)
        expected = 1.5
    elif args.scenario == "geodesic":
        samples = _pmap(lambda v: accel.geodesic_radial_sweep(
            [v], r_over_rs=args.r_over_rs, r_s=args.rs, c=args.c)[0],
            speeds, args.threads)
        expected = 1.0
    else:
        samples = accel.synthetic_sweep(speeds, args.exponent, c=args.c)
        expected = args.exponent
    fit = accel.fit_exponent(samples, c=args.c)

    rows = [(v, a, math.log(args.c**2 - v**2)) for v, a in samples]
    text = csv_text("v,a_par,log_gap", rows)
    record = {"scenario": args.scenario, "exponent": fit.exponent,
              "amplitude": fit.amplitude, "residual": fit.residual,
              "n_samples": fit.n_samples, "expected_exponent": expected}
    if args.out:
        _ensure_out(args)
        _write(args, "accel.csv", text)
        write_json_lines(os.path.join(args.out, "accel_fit.jsonl"), [record])
        if _want_plots(args):
            from .plotting import plot_accel_sweep
            plot_accel_sweep(samples, fit, args.c,
                             os.path.join(args.out, "accel.png"))
    else:
        sys.stdout.write(text)
    print(json.dumps(record))
    print(f"# fitted exponent {fit.exponent:.6g} (expected {expected:g}), "
          f"log-log residual {fit.residual:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_mptd(args):
    spacetime = geo.MinkowskiSpacetime() if args.flat \
        else geo.SchwarzschildSpacetime(args.rs)
    r0 = args.r0_over_rs * (args.rs if not args.flat else 1.0)
    body = cv.equatorial_body_state(
        spacetime, r0, m=args.m, c=args.c, kappa=args.kappa, orbit=args.orbit,
        v_local=args.v_local, spin_dir=args.spin_dir, alpha=args.alpha,
        spin_scale=args.spin_scale)
    traj = cv.integrate_body(body, spacetime, dtau=args.dtau,
                             n_steps=args.steps, m=args.m, c=args.c)

    rows = []
    for k in range(len(traj.tau)):
        rows.append((traj.tau[k], traj.x[k, 0] / args.c, traj.x[k, 1],
                     traj.x[k, 3], traj.P[k, 0], traj.P[k, 1], traj.P[k, 3],
                     *traj.S6[k], traj.spin_sq[k], *traj.ssc[k],
                     traj.mass_shell[k]))
    text = csv_text(cv.CSV_HEADER_BODY, rows)
    if args.out:
        _ensure_out(args)
        _write(args, "mptd.csv", text)
        if _want_plots(args):
            from .plotting import plot_body_trajectory
            plot_body_trajectory(traj, os.path.join(args.out, "mptd.png"))
    else:
        sys.stdout.write(text)

    ssc_norm = np.sqrt(np.sum(traj.ssc**2, axis=1))
    print(f"# spin-square drift = {traj.drift(traj.spin_sq):.3e}", file=sys.stderr)
    print(f"# supplementary-condition monitor max |S.P| = {float(np.max(ssc_norm)):.3e}",
          file=sys.stderr)
    print(f"# mass-shell drift = {float(np.max(np.abs(traj.mass_shell - traj.mass_shell[0]))):.3e}",
          file=sys.stderr)
    print(f"# r in [{traj.x[:, 1].min():.6g}, {traj.x[:, 1].max():.6g}]",
          file=sys.stderr)
    if traj.early_stop is not None:
        print(f"# EARLY STOP at step {traj.early_stop}: horizon approach",
              file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_qmcheck(args):
    seed = resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    moms = qm.random_onshell(rng, args.samples, pmax_over_mc=args.pmax,
                             m=args.m, c=args.c)
    spinors = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in moms]

    def residuals(pair):
        mom, u = pair
        ri, rm = qm.v_identity_residuals(mom)
        return (qm.heisenberg_identity(mom.p, args.m, args.c),
                qm.kg_factorization(mom), ri, rm,
                qm.spin_su2_residual(mom, args.hbar),
                qm.spin_casimir_residual(mom, args.hbar),
                qm.fw_unitarity_residual(mom),
                qm.fw_restriction_residual(mom, u))
    all_res = _pmap(residuals, list(zip(moms, spinors)), args.threads)
    worst = np.max(np.asarray(all_res), axis=0)

    rep = CheckReport()
    names = ("heisenberg-equations", "klein-gordon-factorization", "v-inverse",
             "v-metric", "spin-su2", "spin-casimir", "fw-unitarity",
             "fw-restriction")
    for name, res in zip(names, worst):
        rep.add(name, float(res), 1e-12)

    series_text = None
    if args.zitter:
        field = qm.dirac_branch_packet(n=args.grid_n, dp=args.dp,
                                       sigma_p=args.sigma_p,
                                       weights=(1.0 - args.mix, args.mix),
                                       m=args.m, c=args.c, hbar=args.hbar)
        ser = qm.evolve_dirac_packet(field, T=args.T, n_samples=args.nsamples)
        omega = qm.dominant_frequency(ser.t, ser.x_mean)
        expected = 2.0 * args.m * args.c**2 / args.hbar
        rep.add("zitter-frequency", abs(omega / expected - 1.0), 0.01,
                expected=expected, measured=omega)
        rep.add("zitter-norm-drift",
                float(np.max(np.abs(ser.norm - ser.norm[0])) / ser.norm[0]), 1e-12)
        rows = [(t, "x_mean", x) for t, x in zip(ser.t, ser.x_mean)]
        rows += [(t, "norm", v) for t, v in zip(ser.t, ser.norm)]
        series_text = "t,obs_name,value\n" + "".join(
            f"{fmt(t)},{name},{fmt(v)}\n" for t, name, v in rows)

    sys.stdout.write(rep.json_lines())
    if args.out:
        _ensure_out(args)
        _write(args, "qmcheck.jsonl", rep.json_lines())
        if series_text is not None:
            _write(args, "qmcheck_series.csv", series_text)
        if _want_plots(args):
            from .plotting import plot_check_report
            plot_check_report(rep, os.path.join(args.out, "qmcheck.png"),
                              title="operator-identity suite")
            if args.zitter:
                from .plotting import plot_packet_series
                plot_packet_series(ser, os.path.join(args.out, "qmcheck_zitter.png"))
    if not rep.all_pass:
        print(f"# FAILED: {[it.name for it in rep.failures()]}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_report(args):
    numbers = None
    if args.criteria:
        try:
            numbers = {int(tok) for tok in args.criteria.split(",")}
        except ValueError as exc:
            raise ConfigError(f"bad --criteria list {args.criteria!r}") from exc
    sign = -1.0 if args.selftest_flip_alignment else 1.0
    suite = run_acceptance(seed=resolve_seed(args.seed), numbers=numbers,
                           alignment_sign=sign)

    rows = list(suite.rows())
    if args.json:
        for row in rows:
            print(json.dumps(row))
    else:
        width = max(len(r["name"]) for r in rows)
        print(f"{'crit':>4}  {'check'.ljust(width)}  {'residual':>13}  "
              f"{'tol':>9}  result")
        for r in rows:
            verdict = "pass" if r["pass"] else "FAIL"
            print(f"{r['criterion']:>4}  {r['name'].ljust(width)}  "
                  f"{r['residual']:13.6e}  {r['tol']:9.1e}  {verdict}")
        print(f"# {len(rows)} checks in {suite.duration:.1f} s; "
              f"overall: {'pass' if suite.all_pass else 'FAIL'}")

    if args.out:
        _ensure_out(args)
        write_json_lines(os.path.join(args.out, "report.jsonl"), rows)
        if _want_plots(args):
            from .plotting import plot_acceptance
            plot_acceptance(suite, os.path.join(args.out, "report.png"))
    return EXIT_OK if suite.all_pass else EXIT_NUMERIC


# ---------------------------------------------------------------------------

def _apply_config(subparser, cfg):
    actions = {a.dest: a for a in subparser._actions}
    resolved = {}
    for key, raw in cfg.items():
        if key not in actions or key in ("help", "handler"):
            raise ConfigError(f"unknown config key {key!r}")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction,
                               argparse.BooleanOptionalAction)):
            resolved[key] = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                resolved[key] = action.type(raw)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        else:
            resolved[key] = raw
    subparser.set_defaults(**resolved)


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, subs = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            _apply_config(subs.choices[args.command], load_config_file(args.config))
            args = parser.parse_args(argv)  # command line beats config file
        return args.handler(args)
    except ConfigError as exc:
        print(f"spindyn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, DomainError) as exc:
        print(f"spindyn: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"spindyn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
