"""Command-line front end.

Subcommands: specfun, basis, semigroup, hankel, identities, hardy. Every
option can also come from a flat ``key=value`` file given with
``--config``; flags override the file. Exit status is 0 when every check
passes, 1 when any check fails and 2 for configuration errors.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import identities, specfun
from ._validation import DomainError, check_int, check_real
from .fractional import FractionalParams
from .hardy import REPORT_FIELDS, default_corpus, default_threads, sweep, verify_nd
from .laguerre import analyze, phi_tilde_matrix, synthesize
from .quadrature import Params, make_radial_rule
from .semigroup import apply_kernel, apply_spectral, hankel, hankel_spectral
from .spherical import ReducedModel

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _float_list(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


def _str_list(text):
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _complex(text):
    return complex(str(text).replace(" ", ""))


COMMON = [
    ("output", str, None, "report path; stdout when omitted"),
    ("format", str, "csv", "csv or json"),
]

OPTIONS = {
    "specfun": [
        ("function", str, "j", "one of j, jnorm, i, k, laguerre, lngamma"),
        ("order", float, 0.0, "order nu (or alpha for laguerre)"),
        ("degree", int, 3, "Laguerre degree"),
        ("x_min", float, 0.1, "grid start"),
        ("x_max", float, 10.0, "grid end"),
        ("points", int, 11, "grid size"),
    ],
    "basis": [
        ("a", float, 1.0, "deformation a > 0"),
        ("alpha", float, 0.0, "type alpha >= -1/2"),
        ("L", int, 20, "highest degree"),
        ("r_min", float, 0.1, "sample start"),
        ("r_max", float, 4.0, "sample end"),
        ("points", int, 9, "sample count"),
        ("nodes", int, 128, "radial rule size"),
    ],
    "semigroup": [
        ("a", float, 1.0, "deformation a > 0"),
        ("alpha", float, 0.0, "type alpha >= -1/2"),
        ("z", _complex, 0.5, "semigroup parameter, Re z >= 0"),
        ("corpus", str, "mixture", "corpus entry"),
        ("r_min", float, 0.2, "sample start"),
        ("r_max", float, 3.0, "sample end"),
        ("points", int, 8, "sample count"),
        ("L", int, 40, "expansion degree"),
        ("tol", float, 1e-7, "allowed spectral/kernel difference"),
    ],
    "hankel": [
        ("a", float, 1.0, "deformation a > 0"),
        ("alpha", float, 0.0, "type alpha >= -1/2"),
        ("corpus", str, "mixture", "corpus entry"),
        ("r_min", float, 0.2, "sample start"),
        ("r_max", float, 3.0, "sample end"),
        ("points", int, 8, "sample count"),
        ("L", int, 40, "expansion degree"),
        ("tol", float, 1e-7, "allowed boundary-identity residual"),
    ],
    "identities": [
        ("battery", str, "default", "'default' or semicolon-separated a:alpha pairs"),
    ],
    "hardy": [
        ("mode", str, "sweep", "sweep or nd"),
        ("a_values", _float_list, [1.0, 2.0], "comma-separated a grid"),
        ("alpha_values", _float_list, [0.0, 1.0], "comma-separated alpha grid"),
        ("sigma_values", _float_list, [0.3, 0.7], "comma-separated sigma grid"),
        ("delta_values", _float_list, [0.5, 2.0], "comma-separated delta grid"),
        ("corpus", _str_list, ["phi0", "gauss", "bump"], "comma-separated corpus entries"),
        ("model", str, "PlaneFourier", "Z2_line or PlaneFourier (nd mode)"),
        ("a", float, 2.0, "deformation for nd mode"),
        ("k", float, 0.0, "multiplicity for Z2_line"),
        ("M_max", int, 3, "highest plane mode"),
        ("sigma", float, 0.5, "order for nd mode"),
        ("delta", float, 1.0, "shift for nd mode"),
    ],
}


def build_parser():
    parser = argparse.ArgumentParser(prog="ka-laguerre", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value file")
        for key, typ, _, help_text in opts + COMMON:
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, dest=key, type=typ, default=argparse.SUPPRESS, help=help_text)
    return parser


def read_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def resolve_config(command, args):
    """Defaults, then the config file, then flags."""
    opts = OPTIONS[command] + COMMON
    types = {key: typ for key, typ, _, _ in opts}
    config = {key: default for key, _, default, _ in opts}
    if args.get("config"):
        for key, raw in read_config_file(args["config"]).items():
            if key == "command":
                continue
            if key not in types:
                raise ConfigError(f"unknown config key {key!r} for {command}")
            try:
                config[key] = types[key](raw)
            except ValueError:
                raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from None
    for key, value in args.items():
        if key in types:
            config[key] = value
    if config["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {config['format']!r}")
    return config


def _format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def render_report(rows, fmt, fields):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_format_value(row[f]) for f in fields])
        return buf.getvalue()
    if fmt == "json":
        data = [{f: _json_value(row[f]) for f in fields} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    raise DomainError(f"unknown report format {fmt!r}")


def write_report(rows, fmt, path, fields=None):
    """Write homogeneous rows as CSV or JSON; ``path=None`` writes to stdout."""
    rows = list(rows)
    if fields is None:
        if not rows:
            raise DomainError("fields are needed for an empty report")
        fields = list(rows[0])
    for row in rows:
        if list(row) != list(fields):
            raise DomainError("report rows are not homogeneous")
    text = render_report(rows, fmt, fields)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


def _params(cfg):
    return Params(check_real("a", cfg["a"], 0.0, low_open=True), check_real("alpha", cfg["alpha"], -0.5))


def _grid(cfg, lo_key, hi_key):
    lo = check_real(lo_key, cfg[lo_key], 0.0, low_open=True)
    hi = check_real(hi_key, cfg[hi_key], lo)
    n = check_int("points", cfg["points"], low=1)
    return np.linspace(lo, hi, n)


def _corpus_function(name, params):
    entry = default_corpus().get(name)
    return entry, entry.build(params)


def cmd_specfun(cfg):
    x = np.linspace(check_real("x_min", cfg["x_min"]), check_real("x_max", cfg["x_max"]),
                    check_int("points", cfg["points"], low=1))
    nu = cfg["order"]
    name = cfg["function"]
    table = {
        "j": lambda: specfun.bessel_j(nu, x),
        "jnorm": lambda: specfun.bessel_j_normalized(nu, x),
        "i": lambda: specfun.bessel_i(nu, x),
        "k": lambda: specfun.macdonald_k(nu, x),
        "laguerre": lambda: specfun.laguerre_poly(check_int("degree", cfg["degree"]), nu, x),
        "lngamma": lambda: specfun.ln_gamma(x),
    }
    if name not in table:
        raise DomainError(f"function must be one of {', '.join(table)}, got {name!r}")
    values = np.asarray(table[name](), dtype=float)
    rows = [{"x": float(xi), "value": float(v)} for xi, v in zip(x, values)]
    failures = [] if np.all(np.isfinite(values)) else [f"{name}: non-finite values"]
    return rows, ["x", "value"], failures


def cmd_basis(cfg):
    p = _params(cfg)
    L = check_int("L", cfg["L"])
    r = _grid(cfg, "r_min", "r_max")
    rule = make_radial_rule(p, check_int("nodes", cfg["nodes"], low=32))
    samples = phi_tilde_matrix(L, p, r)
    basis = phi_tilde_matrix(L, p, rule.nodes)
    gram = (basis * rule.weights) @ basis.T
    rows = []
    for l in range(L + 1):
        for ri, v in zip(r, samples[l]):
            rows.append({"section": "sample", "l": l, "x": float(ri), "value": float(v)})
    for l in range(L + 1):
        for j in range(L + 1):
            rows.append({"section": "gram", "l": l, "x": float(j), "value": float(gram[l, j])})
    dev = float(np.max(np.abs(gram - np.eye(L + 1))))
    failures = [] if dev <= 1e-8 else [f"Gram deviation {dev:.3e} exceeds 1e-8"]
    return rows, ["section", "l", "x", "value"], failures


def cmd_semigroup(cfg):
    p = _params(cfg)
    r = _grid(cfg, "r_min", "r_max")
    z = cfg["z"]
    if not (math.isfinite(z.real) and math.isfinite(z.imag)) or z.real < 0:
        raise DomainError(f"z must satisfy Re z >= 0, got {z}")
    entry, f = _corpus_function(cfg["corpus"], p)
    c = analyze(f, p, check_int("L", cfg["L"]), support=entry.support)
    spec = np.asarray(synthesize(apply_spectral(c, z), r), dtype=complex)
    real_t = z.imag == 0 and z.real > 0
    kern = apply_kernel(f, p, z.real, r) if real_t else np.full(r.shape, math.nan)
    failures = []
    rows = []
    for ri, sv, kv in zip(r, spec, kern):
        diff = abs(sv - kv) if real_t else math.nan
        rows.append({"r": float(ri), "spectral_re": sv.real, "spectral_im": sv.imag,
                     "kernel": float(kv), "difference": float(diff)})
        if real_t and entry.support is None and diff > cfg["tol"]:
            failures.append(f"r={ri:.6g}: spectral/kernel difference {diff:.3e} exceeds {cfg['tol']:g}")
    return rows, ["r", "spectral_re", "spectral_im", "kernel", "difference"], failures


def cmd_hankel(cfg):
    p = _params(cfg)
    r = _grid(cfg, "r_min", "r_max")
    entry, f = _corpus_function(cfg["corpus"], p)
    quad = np.asarray(hankel(f, p, r, support=entry.support))
    c = analyze(f, p, check_int("L", cfg["L"]), support=entry.support)
    spec = np.asarray(synthesize(hankel_spectral(c), r), dtype=complex)
    rows = []
    failures = []
    for ri, qv, sv in zip(r, quad, spec):
        diff = abs(qv - sv)
        rows.append({"r": float(ri), "quadrature": float(qv), "boundary_re": sv.real,
                     "boundary_im": sv.imag, "residual": float(diff)})
        if entry.support is None and diff > cfg["tol"]:
            failures.append(f"r={ri:.6g}: boundary identity residual {diff:.3e} exceeds {cfg['tol']:g}")
    return rows, ["r", "quadrature", "boundary_re", "boundary_im", "residual"], failures


def _battery(spec):
    if spec == "default":
        return identities.BATTERY
    out = []
    for item in spec.split(";"):
        try:
            a, alpha = (float(v) for v in item.split(":"))
        except ValueError:
            raise ConfigError(f"battery entry {item!r} is not a:alpha") from None
        Params(a, alpha)
        out.append((a, alpha))
    return tuple(out)


def cmd_identities(cfg, threads):
    results = identities.run_suite(_battery(cfg["battery"]), threads)
    rows = [res.row() for res in results]
    failures = [f"{res.check} [{res.params}]: residual {res.residual:.3e} exceeds {res.threshold:g}"
                for res in results if not res.passed]
    return rows, identities.RESULT_FIELDS, failures


def _nd_input(model):
    a = model.a
    if model.kind == "Z2_line":
        return lambda x: np.exp(-np.abs(x) ** a / a) * (1.0 + x + 0.3 * x * x)
    return lambda x, y: np.exp(-np.hypot(x, y) ** a / a) * (1.0 + x + 0.5 * x * y + 0.2 * y)


def cmd_hardy(cfg, threads):
    mode = cfg["mode"]
    if mode == "sweep":
        for key, low, high, lo_open, hi_open in (("a_values", 0.0, None, True, False),
                                                 ("sigma_values", 0.0, 1.0, True, True),
                                                 ("delta_values", 0.0, None, True, False)):
            for v in cfg[key]:
                check_real(key[:-7], v, low, high, low_open=lo_open, high_open=hi_open)
        corpus = default_corpus().subset(cfg["corpus"])
        reports = sweep(cfg["a_values"], cfg["alpha_values"], cfg["sigma_values"],
                        cfg["delta_values"], corpus, threads)
    elif mode == "nd":
        model = ReducedModel(cfg["model"], cfg["a"], cfg["k"], cfg["M_max"])
        fp = FractionalParams(cfg["sigma"], cfg["delta"])
        reports = [verify_nd(_nd_input(model), model, fp, name=f"{model.kind}-mixed")]
    else:
        raise DomainError(f"mode must be sweep or nd, got {mode!r}")
    rows = [rep.row() for rep in reports]
    failures = []
    for rep in reports:
        if not rep.passed:
            why = rep.error or f"lhs={rep.lhs:.6g} mid={rep.mid:.6g} rhs={rep.rhs:.6g}"
            failures.append(f"a={rep.a:g} alpha={rep.alpha:g} sigma={rep.sigma:g} "
                            f"delta={rep.delta:g} {rep.corpus}: {why}")
    return rows, REPORT_FIELDS, failures


COMMANDS = {
    "specfun": lambda cfg, threads: cmd_specfun(cfg),
    "basis": lambda cfg, threads: cmd_basis(cfg),
    "semigroup": lambda cfg, threads: cmd_semigroup(cfg),
    "hankel": lambda cfg, threads: cmd_hankel(cfg),
    "identities": cmd_identities,
    "hardy": cmd_hardy,
}


def run(argv=None):
    """Parse, validate, compute and write; returns the exit status."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    args = vars(ns)
    command = args.pop("command")
    try:
        cfg = resolve_config(command, args)
        threads = default_threads()
        rows, fields, failures = COMMANDS[command](cfg, threads)
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        write_report(rows, cfg["format"], cfg["output"], fields)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for line in failures:
        print(f"FAIL {line}", file=sys.stderr)
    print(f"{command}: {len(rows)} rows, {len(failures)} failures", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
