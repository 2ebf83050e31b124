"""Command-line driver.

One subcommand per computation family; JSON in, CSV/JSON out.  Outputs are
deterministic for a fixed configuration and seed: every JSON result embeds
the config hash, toolkit version, and seed, and segregates the timestamp
into a ``meta`` field that comparisons may ignore.  The seed is taken from
``--seed`` or the documented default ``DEFAULT_SEED``; the environment is
never consulted.

Exit codes: 0 success, 2 configuration error, 3 numerical nonconvergence,
4 no separating witness (diagnostics on stdout).
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .acceptance import run_all
from .construct import build_enlarged_domain, find_separator, verify_gluing
from .envelope import (
    CrossSpec,
    check_monotone_convergence,
    enlarge_boundary_set,
    envelope_slice,
    interior_grid,
)
from .errors import (
    ConfigError,
    GridTooCoarseError,
    NoConvergenceError,
    NotStronglyPseudoconvexError,
    NoWitnessError,
    StepBudgetExceededError,
)
from .fixtures import disc_arcs_by_angle, fixture_domain, fixture_path
from .geometry import boundary_set_from_json, domain_from_json
from .levelset import ball_fixture, build_sublevel_sequence, disc_fixture
from .measure import GridConfig, WosConfig, measure_values

DEFAULT_SEED = 1729


def _load_json_arg(ref: str):
    if ref.startswith("fixture:"):
        return json.loads(fixture_path(ref.split(":", 1)[1]).read_text())
    text = ref if ref.lstrip().startswith(("{", "[")) else Path(ref).read_text()
    return json.loads(text)


def _load_domain(ref: str):
    if ref.startswith("fixture:"):
        return fixture_domain(ref.split(":", 1)[1])
    return domain_from_json(_load_json_arg(ref))


def _load_set(ref: str, domain):
    obj = _load_json_arg(ref)
    if isinstance(obj, dict) and "angles" in obj:
        if not hasattr(domain, "param_of_angle"):
            raise ConfigError("angle-based sets need the disc fixture domain")
        return disc_arcs_by_angle(domain, [tuple(p) for p in obj["angles"]])
    return boundary_set_from_json(obj).validate(domain)


def _load_spec(ref: str) -> CrossSpec:
    obj = _load_json_arg(ref)
    D = domain_from_json(obj["D"])
    G = domain_from_json(obj["G"])
    return CrossSpec(
        D,
        boundary_set_from_json(obj["A"]).validate(D),
        G,
        boundary_set_from_json(obj["B"]).validate(G),
    )


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def _parse_grid(text: str):
    try:
        nx, ny = text.lower().split("x")
        return int(nx), int(ny)
    except Exception:
        raise ConfigError(f"--eval-grid wants NxM, got {text!r}") from None


def _engine_cfg(args):
    engine = args.engine
    if engine == "grid":
        return GridConfig(spacing=args.grid_spacing)
    if engine == "wos":
        return WosConfig(samples=args.samples, seed=args.seed)
    if engine == "closed_form":
        return None
    raise ConfigError(f"unknown engine {engine!r}")


def _config_hash(args) -> str:
    payload = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return hashlib.sha256(json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _payload(args, body: dict) -> dict:
    return {
        "version": __version__,
        "config_hash": _config_hash(args),
        "seed": getattr(args, "seed", DEFAULT_SEED),
        **body,
        "meta": {"timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()},
    }


def _emit(args, body: dict, human: str):
    doc = _payload(args, body)
    if getattr(args, "out", None):
        Path(args.out).write_text(json.dumps(doc, indent=2, default=float) + "\n")
    if args.json:
        print(json.dumps(doc, default=float))
    else:
        print(human)
        if getattr(args, "out", None):
            print(f"wrote {args.out}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_measure(args):
    domain = _load_domain(args.domain)
    bset = _load_set(args.set, domain)
    cfg = _engine_cfg(args)
    nx, ny = _parse_grid(args.eval_grid)
    spacing = getattr(cfg, "spacing", None)
    clearance = 2 * spacing if spacing else 0.02 * domain.diameter
    pts = interior_grid(domain, nx, ny, clearance)
    field = measure_values(domain, bset, cfg, pts, n_threads=args.threads)
    if args.field_out:
        field.to_csv(args.field_out)
    body = {
        "engine": field.engine,
        "points": int(len(field)),
        "value_range": [float(field.values.min()), float(field.values.max())],
        "max_stderr": float(field.stderr.max()),
        "field_csv": args.field_out,
    }
    _emit(args, body, f"{field.engine}: {len(field)} points, "
                      f"values in [{field.values.min():.6f}, {field.values.max():.6f}]")
    return 0


def _cmd_envelope(args):
    spec = _load_spec(args.spec)
    which, value = args.slice.split("=", 1)
    which = which.strip()
    if which not in ("z", "w"):
        raise ConfigError("--slice wants w=<complex> or z=<complex>")
    point = _parse_complex(value)
    cfg = _engine_cfg(args)
    nx, ny = _parse_grid(args.eval_grid)
    sl = envelope_slice(spec, point, grid=(nx, ny), fixed_factor=which,
                        cfg_free=cfg, cfg_fixed=cfg)
    if args.field_out:
        sl.to_csv(args.field_out)
    body = {"slice": sl.summary(), "field_csv": args.field_out}
    s = sl.summary()
    _emit(args, body, f"slice at {which}={point}: {s['inside']}/{s['count']} inside, "
                      f"margin in [{s['min_margin']:.4f}, {s['max_margin']:.4f}]")
    return 0


def _cmd_converge(args):
    domain = _load_domain(args.domain)
    bset = _load_set(args.set, domain)
    ks = [int(k) for k in args.ks.split(",")]
    family = {k: enlarge_boundary_set(domain, bset, args.growth / k) for k in ks}
    cfg = _engine_cfg(args)
    if args.eval_points:
        pts = [(_parse_complex(p).real, _parse_complex(p).imag)
               for p in args.eval_points.split(";")]
    else:
        nx, ny = _parse_grid(args.eval_grid)
        pts = interior_grid(domain, nx, ny, 0.05 * domain.diameter)
    rep = check_monotone_convergence(domain, bset, family, pts, cfg=cfg)
    _emit(args, {"report": rep.to_json()},
          f"monotone: {rep.nondecreasing}, discrepancy {rep.discrepancy[0]:.4g} -> "
          f"{rep.discrepancy[-1]:.4g}, pass={rep.passed}")
    return 0


def _cmd_glue(args):
    domain = _load_domain(args.domain)
    bset = _load_set(args.set, domain)
    ext = build_enlarged_domain(domain, bset, args.k)
    if args.eval_points:
        pts = [(_parse_complex(p).real, _parse_complex(p).imag)
               for p in args.eval_points.split(";")]
    else:
        pts = interior_grid(domain, 5, 5, 0.15 * domain.diameter)[:10]
    rep = verify_gluing(domain, bset, ext, pts, GridConfig(spacing=args.grid_spacing),
                        tolerance=args.tolerance)
    _emit(args, {"report": rep.to_json()},
          f"gluing k={rep.k}: max discrepancy {rep.max_discrepancy:.3e} "
          f"(tol {rep.tolerance:g}), pass={rep.passed}")
    return 0


def _cmd_propc(args):
    base = {"disc": disc_fixture, "ball": ball_fixture}.get(args.fixture)
    if base is None:
        raise ConfigError("--fixture must be disc or ball")
    ks = [int(k) for k in args.ks.split(",")]
    _, rep = build_sublevel_sequence(base(), ks, per_axis=args.resolution, tol=args.tolerance)
    _emit(args, {"report": rep.to_json()},
          f"sublevel sequence ({args.fixture}): onset k={rep.onset}, pass={rep.passed}")
    return 0


def _cmd_separator(args):
    spec = _load_spec(args.spec)
    z_text, w_text = args.point.split(";")
    z = _parse_complex(z_text.split("=")[-1])
    w = _parse_complex(w_text.split("=")[-1])
    cfg = _engine_cfg(args)
    wit = find_separator(spec, (z, w), cfg=cfg, ball_radius=args.radius,
                         tol=args.tolerance, k_max=args.k_max)
    _emit(args, {"witness": wit.to_json()},
          f"witness: {wit.omega_kind} at k={wit.k}, residual {wit.boundary_residual:.3e}")
    return 0


def _cmd_validate(args):
    if args.suite != "acceptance":
        raise ConfigError("only --suite acceptance is available")
    only = {int(i) for i in args.only.split(",")} if args.only else None
    echo = None if args.json else print
    results = run_all(only=only, echo=echo)
    if args.json:
        print(json.dumps(_payload(args, {"results": [r.to_json() for r in results]}),
                         default=float))
    if args.out:
        Path(args.out).write_text(
            json.dumps(_payload(args, {"results": [r.to_json() for r in results]}),
                       indent=2, default=float) + "\n"
        )
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------


def _build_parser():
    p = argparse.ArgumentParser(
        prog="harmcross",
        description="planar harmonic measures, boundary-cross envelopes, "
                    "and constructive domain sequences",
    )
    p.add_argument("--version", action="version", version=f"harmcross {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, engine=True):
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"random seed (default {DEFAULT_SEED}; never read from the environment)")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--json", action="store_true", help="machine-readable stdout")
        sp.add_argument("--out", help="write the JSON result here")
        if engine:
            sp.add_argument("--engine", default="grid", choices=["grid", "wos", "closed_form"])
            sp.add_argument("--grid-spacing", type=float, default=1 / 128)
            sp.add_argument("--samples", type=int, default=20_000)

    sp = sub.add_parser("measure", help="harmonic measure field on an evaluation grid")
    sp.add_argument("--domain", required=True, help="domain JSON path or fixture:NAME")
    sp.add_argument("--set", required=True, help="boundary-set JSON path, inline JSON, or fixture:NAME")
    sp.add_argument("--eval-grid", default="32x32")
    sp.add_argument("--field-out", help="CSV output (x, y, value, stderr, engine)")
    common(sp)
    sp.set_defaults(func=_cmd_measure)

    sp = sub.add_parser("envelope", help="cross-envelope slice with one factor fixed")
    sp.add_argument("--spec", required=True, help="cross JSON path or fixture:NAME")
    sp.add_argument("--slice", required=True, help="w=<complex> or z=<complex>")
    sp.add_argument("--eval-grid", default="32x32")
    sp.add_argument("--field-out", help="CSV output (x, y, margin, mask)")
    common(sp)
    sp.set_defaults(func=_cmd_envelope)

    sp = sub.add_parser("converge", help="monotone convergence of neighborhood measures")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--set", required=True)
    sp.add_argument("--ks", default="1,2,4,8,16,32,64")
    sp.add_argument("--growth", type=float, default=1.0,
                    help="neighborhood k grows the set by growth/k in arc length")
    sp.add_argument("--eval-grid", default="8x8")
    sp.add_argument("--eval-points", help="semicolon-separated complex points")
    common(sp)
    sp.set_defaults(func=_cmd_converge)

    sp = sub.add_parser("glue", help="measure invariance across pocket welds")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--set", required=True)
    sp.add_argument("--k", type=int, default=20)
    sp.add_argument("--grid-spacing", type=float, default=1 / 256)
    sp.add_argument("--tolerance", type=float, default=1e-2)
    sp.add_argument("--eval-points")
    common(sp, engine=False)
    sp.set_defaults(func=_cmd_glue)

    sp = sub.add_parser("propc", help="nested pseudoconvex sublevel sequences")
    sp.add_argument("--fixture", default="disc", choices=["disc", "ball"])
    sp.add_argument("--ks", default="1,2,4,8,16,32,64")
    sp.add_argument("--resolution", type=int, default=21)
    sp.add_argument("--tolerance", type=float, default=1e-3)
    common(sp, engine=False)
    sp.set_defaults(func=_cmd_propc)

    sp = sub.add_parser("separator", help="separating-domain witness near a query pair")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--point", required=True, help='"z=<complex>;w=<complex>"')
    sp.add_argument("--radius", type=float, default=0.05)
    sp.add_argument("--tolerance", type=float, default=1e-3)
    sp.add_argument("--k-max", type=int, default=64)
    common(sp)
    sp.set_defaults(func=_cmd_separator)

    sp = sub.add_parser("validate", help="run the acceptance battery")
    sp.add_argument("--suite", default="acceptance")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    common(sp, engine=False)
    sp.set_defaults(func=_cmd_validate)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(json.dumps({"error": f"{type(e).__name__}: {e}"}), file=sys.stderr)
        return 2
    except (NoConvergenceError, GridTooCoarseError, StepBudgetExceededError,
            NotStronglyPseudoconvexError) as e:
        print(json.dumps({"error": f"{type(e).__name__}: {e}"}), file=sys.stderr)
        return 3
    except NoWitnessError as e:
        print(json.dumps({"no_witness": str(e),
                          "diagnostics": {str(k): v for k, v in e.diagnostics.items()}}))
        return 4


if __name__ == "__main__":
    sys.exit(main())
