"""Command-line front end: ``xiholo {eval,verify,reconstruct,zeros,rh-scan,report}``."""

from __future__ import annotations

import argparse
import math
import re
import sys
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .contour_quadrature import VerticalLineSpec, verify_constant_integrals
from .errors import DomainError, XiError
from .holography import (AdditionalIntegralConfig, reconstruction_grid, verify_additional_integrals,
                         verify_reconstruction, xi_reconstruct_eq10)
from .identity import IdentityReport
from .reporting import (build_document, dumps, emit_report, ensure_zeros, findings_for,
                        identity_from_dict, is_finding, load_zero_cache, read_document,
                        scans_from_dicts, write_document, CacheError)
from .xi_core import Xi_via_eq18, compare_methods, xi_reference, xi_via_eq12, xi_via_eq13
from .zeros import (adjudicate_eq25, default_sigma_grid, default_tau_grid, final_conjecture_scan,
                    rh_scan, summarize_scan)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ASSERTION = 4

SUBCOMMANDS = ("eval", "verify", "reconstruct", "zeros", "rh-scan", "report")
RECONSTRUCTION_BAR = 1e-6


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    tolerance: float = 1e-9
    contour_c: float = 1.5
    truncation_T: float = 60.0
    output_format: str = "json"
    cache_path: str = "./xi_zeros.json"
    results_path: str = "./xi_verify.json"
    grid: dict = field(default_factory=dict)

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ConfigError(f"--tolerance must be a positive number, got {self.tolerance}")
        if not (1.0 < self.contour_c < 2.0):
            raise ConfigError(f"--contour-c must satisfy 1 < c < 2, got {self.contour_c}")
        if not self.truncation_T >= 30.0:
            raise ConfigError(f"--truncation-T must be at least 30, got {self.truncation_T}")
        if self.output_format not in ("json", "csv", "text"):
            raise ConfigError(f"--format must be json, csv or text, got {self.output_format!r}")

    def line_spec(self) -> VerticalLineSpec:
        return VerticalLineSpec(c=self.contour_c, T=self.truncation_T,
                                tol=max(self.tolerance / 10, 1e-10))


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

_POINT = re.compile(r"^\s*(?:s\s*=\s*)?(.+?)\s*$")


def parse_point(text: str) -> complex:
    """'s=0.5+14.13i', '0.5+14.13j', '0.5' -> complex."""
    body = _POINT.match(text).group(1).replace(" ", "").replace("i", "j")
    try:
        return complex(body)
    except ValueError:
        raise ConfigError(f"cannot parse point {text!r}; expected e.g. s=0.5+14.1347i") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="assertion tolerance for quadrature identities (default 1e-9)")
    common.add_argument("--contour-c", type=float, default=1.5, dest="contour_c",
                        help="abscissa of the vertical line, 1 < c < 2 (default 1.5)")
    common.add_argument("--truncation-T", type=float, default=60.0, dest="truncation_T",
                        help="half-height of the truncated line integral (default 60)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json",
                        dest="output_format")
    common.add_argument("--cache-path", default="./xi_zeros.json", dest="cache_path",
                        help="zero cache file (default ./xi_zeros.json)")
    common.add_argument("--results-path", default="./xi_verify.json", dest="results_path",
                        help="where verify stores its results for report (default ./xi_verify.json)")

    p = _Parser(prog="xiholo", description="Riemann xi: integral identities, line "
                "reconstruction, zeros and strip scans.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="evaluate xi(s)")
    e.add_argument("point", help="s=<re>+<im>i")
    e.add_argument("--method", default="reference",
                   choices=("reference", "eq12", "eq13", "eq18", "reconstruction"))

    v = sub.add_parser("verify", parents=[common], help="run the identity suites")
    v.add_argument("--identities", default="",
                   help="comma-separated identity names (e.g. eq6,eq9,iii); default all")

    r = sub.add_parser("reconstruct", parents=[common], help="line reconstruction grid")
    r.add_argument("--sigmas", default="0.1,0.3,0.5,0.7,0.9")
    r.add_argument("--taus", default="0,5,14.134725,25,40")
    r.add_argument("--cs", default=None, help="line abscissae; defaults to --contour-c")

    z = sub.add_parser("zeros", parents=[common], help="locate critical zeros (cached)")
    z.add_argument("--count", type=int, default=100)
    z.add_argument("--step", type=float, default=0.05)

    s = sub.add_parser("rh-scan", parents=[common], help="off-line system and conjecture scans")
    s.add_argument("--sigma-count", type=int, default=40)
    s.add_argument("--tau-count", type=int, default=60)
    s.add_argument("--conjecture-s-count", type=int, default=9)
    s.add_argument("--conjecture-t-count", type=int, default=91)

    sub.add_parser("report", parents=[common], help="render cache plus last verify results")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    grid = {k: v for k, v in vars(ns).items()
            if k not in ("subcommand", "tolerance", "contour_c", "truncation_T",
                         "output_format", "cache_path", "results_path")}
    cfg = RunConfig(ns.subcommand, ns.tolerance, ns.contour_c, ns.truncation_T,
                    ns.output_format, ns.cache_path, ns.results_path, grid)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# subcommands; each returns (document text, exit status)
# ---------------------------------------------------------------------------

def _base(name: str) -> str:
    return name.split("[", 1)[0]


def _status(reports: list[IdentityReport], tol: float) -> int:
    """Tolerance failure if an evaluation raised; assertion failure if a
    non-finding residual exceeds the tolerance."""
    if any(not math.isfinite(r.abs_residual) for r in reports):
        return EXIT_NUMERICAL
    if any(r.abs_residual > tol and not is_finding(r) for r in reports):
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_eval(cfg: RunConfig):
    s = parse_point(cfg.grid["point"])
    method = cfg.grid["method"]
    if method == "reference":
        res = xi_reference(s)
    elif method == "eq12":
        res = xi_via_eq12(s)
    elif method == "eq13":
        res = xi_via_eq13(s)
    elif method == "eq18":
        res = Xi_via_eq18((s - 0.5) / 1j)
    else:
        res = xi_reconstruct_eq10(s, cfg.line_spec())
    out = {"s": s, "value": res.value, "method": res.method, "est_error": res.est_error}
    if cfg.output_format == "json":
        return dumps(out), EXIT_OK
    if cfg.output_format == "csv":
        return (f"s_re,s_im,value_re,value_im,method,est_error\r\n{s.real!r},{s.imag!r},"
                f"{res.value.real!r},{res.value.imag!r},{res.method.value},{res.est_error!r}\r\n",
                EXIT_OK)
    return f"xi({s}) = {res.value}  [{res.method.value}, est. error {res.est_error:.2e}]\n", EXIT_OK


def run_verify_suites(cfg: RunConfig, wanted: set[str]) -> list[IdentityReport]:
    spec = cfg.line_spec()

    def keep(reports):
        return [r for r in reports if not wanted or _base(r.id) in wanted]

    groups = {
        "constant": ({"eq6", "eq7", "eq8a", "eq8b", "eq8c", "eq8d", "eq9", "eq9-mirror"},
                     lambda: verify_constant_integrals(spec)),
        "reconstruction": ({"eq10", "eq11", "eq17", "eq21"}, lambda: verify_reconstruction(spec)),
        "methods": ({"xi-eq12", "xi-eq13", "xi-eq18", "xi-J"}, compare_methods),
        "eq25": ({"eq25"}, adjudicate_eq25),
    }
    additional = {"i", "ii", "i-ii-chain", "iii", "iv", "v", "vi", "vii", "viii", "ix"}
    known = set().union(additional, *(ids for ids, _ in groups.values()))
    unknown = wanted - known
    if unknown:
        raise ConfigError(f"unknown identities: {', '.join(sorted(unknown))}; "
                          f"choose from {', '.join(sorted(known))}")
    out = []
    for ids, fn in groups.values():
        if not wanted or ids & wanted:
            out.extend(keep(fn()))
    if not wanted or additional & wanted:
        only = {w for w in wanted if w in additional}
        if "i-ii-chain" in only:
            only.add("ii")
        cfg_add = AdditionalIntegralConfig(cutoff=cfg.truncation_T, only=only)
        out.extend(keep(verify_additional_integrals(cfg_add)))
    return sorted(out, key=lambda r: r.id)


def cmd_verify(cfg: RunConfig):
    wanted = {w.strip() for w in cfg.grid.get("identities", "").split(",") if w.strip()}
    reports = run_verify_suites(cfg, wanted)
    doc = build_document(asdict(cfg), identities=reports)
    write_document(cfg.results_path, doc)
    if cfg.output_format == "json":
        text = dumps(reports)
    else:
        text = emit_report(doc, cfg.output_format)
    return text, _status(reports, cfg.tolerance)


def cmd_reconstruct(cfg: RunConfig):
    sigmas = _floats(cfg.grid["sigmas"])
    taus = _floats(cfg.grid["taus"])
    cs = _floats(cfg.grid["cs"]) if cfg.grid.get("cs") else [cfg.contour_c]
    if any(not (0 < s < 1) for s in sigmas):
        raise ConfigError("--sigmas must lie in (0, 1)")
    if any(not (1 < c < 2) for c in cs):
        raise ConfigError("--cs must lie in (1, 2)")
    reports = reconstruction_grid(sigmas, taus, cs, T=cfg.truncation_T)
    doc = build_document(asdict(cfg), identities=reports,
                         findings=[f"{r.id}: residual {r.abs_residual:.3e}" for r in reports
                                   if r.abs_residual > RECONSTRUCTION_BAR])
    if any(not math.isfinite(r.abs_residual) for r in reports):
        status = EXIT_NUMERICAL
    elif any(r.abs_residual > RECONSTRUCTION_BAR for r in reports):
        status = EXIT_ASSERTION
    else:
        status = EXIT_OK
    return emit_report(doc, cfg.output_format), status


def cmd_zeros(cfg: RunConfig):
    count = cfg.grid["count"]
    if not 1 <= count <= 500:
        raise ConfigError("--count must be between 1 and 500")
    records, _ = ensure_zeros(cfg.cache_path, count, cfg.grid["step"])
    doc = build_document(asdict(cfg), zeros=records)
    ok = all(r.bracket_width <= 1e-10 and r.eq20_residual <= 1e-8 for r in records)
    return emit_report(doc, cfg.output_format), EXIT_OK if ok else EXIT_ASSERTION


def cmd_rh_scan(cfg: RunConfig):
    g = cfg.grid
    cells = rh_scan(default_sigma_grid(g["sigma_count"]), default_tau_grid(g["tau_count"]))
    conj = final_conjecture_scan(np.linspace(0.05, 0.45, g["conjecture_s_count"]),
                                 np.linspace(10.0, 100.0, g["conjecture_t_count"]))
    summary = summarize_scan(cells + conj)
    adjud = adjudicate_eq25()
    doc = build_document(asdict(cfg), identities=adjud, scans=cells + conj, summary=summary,
                         findings=findings_for(adjud, summary))
    ok = bool(cells) and all(c.residual_system > 0 for c in cells)
    return emit_report(doc, cfg.output_format), EXIT_OK if ok else EXIT_ASSERTION


def cmd_report(cfg: RunConfig):
    try:
        zeros = load_zero_cache(cfg.cache_path)
    except CacheError as exc:
        warnings.warn(f"no usable zero cache: {exc}", RuntimeWarning)
        zeros = []
    identities, scans = [], []
    try:
        prev = read_document(cfg.results_path)
        identities = [identity_from_dict(d) for d in prev.get("identities", [])]
        scans = scans_from_dicts(prev.get("scans", []))
    except OSError as exc:
        warnings.warn(str(exc), RuntimeWarning)
    doc = build_document(asdict(cfg), identities=identities, zeros=zeros, scans=scans)
    return emit_report(doc, cfg.output_format), EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "reconstruct": cmd_reconstruct,
            "zeros": cmd_zeros, "rh-scan": cmd_rh_scan, "report": cmd_report}


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    cfg.validate()
    text, status = COMMANDS[cfg.subcommand](cfg)
    stdout.write(text)
    return status


def main(argv=None) -> int:
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        return run(cfg)
    except (ConfigError, DomainError) as exc:
        print(f"xiholo: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except XiError as exc:
        print(f"xiholo: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"xiholo: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
