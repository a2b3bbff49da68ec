"""Command-line front end: construct, verify, classify, demo, serve."""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.config import settings, setup_logging
from app.core.errors import (
    EXIT_PASS,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    GeometryError,
    describe,
    exit_code_for,
)
from app.core.formats import dumps, guess_format, read_point_file, render_report, write_point_file
from app.core.service import certify_points, construct_point_set
from app.geometry.curve import construct_q_generic
from app.geometry.field import Prime, primes_below
from app.geometry.lift import reduce_form
from app.geometry.quadform import IrreducibleRank2, RationalForm, classify, evaluate, parse_form
from app.geometry.verify import PointSet, is_q_generic
from app.models.certificate import Certificate
from app.models.pointset import PointSetFile
from app.models.run import Command, OutputFormat, RunConfig

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 4."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="qgeneric",
        description="Construct and certify Q-generic point sets."
    )
    parser.add_argument("--log-level", default=None, help="Log level (default from settings).")
    parser.add_argument("--log-json", action="store_true", help="Emit JSON log lines on stderr.")
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="Build a point set and certify it.")
    construct.add_argument("--dim", type=int, required=True)
    mode = construct.add_mutually_exclusive_group(required=True)
    mode.add_argument("--n", type=int, dest="grid_size", help="Grid size: points in {1..n}^d.")
    mode.add_argument("--p", type=int, dest="prime", help="Field mode: points in F_p^d.")
    construct.add_argument("--form", default="sphere", dest="form_spec")
    construct.add_argument("--output", "-o", dest="output_path")
    construct.add_argument("--report", dest="report_path")
    construct.add_argument("--format", choices=[f.value for f in OutputFormat])
    construct.add_argument("--seed", type=int, default=settings.default_seed)
    construct.add_argument("--threads", type=int, default=settings.verify_threads)

    verify = sub.add_parser("verify", help="Certify a point-set file.")
    verify.add_argument("input_path")
    verify.add_argument("--form", default=None, dest="form_spec",
                        help="Form spec; defaults to the form stored in the file.")
    verify.add_argument("--report", dest="report_path")
    verify.add_argument("--threads", type=int, default=settings.verify_threads)

    classify_cmd = sub.add_parser("classify", help="Rich or irreducible of rank 2 over F_p.")
    classify_cmd.add_argument("--dim", type=int, required=True)
    classify_cmd.add_argument("--p", type=int, dest="prime", required=True)
    classify_cmd.add_argument("--form", default="sphere", dest="form_spec")
    classify_cmd.add_argument("--seed", type=int, default=settings.default_seed)

    demo = sub.add_parser("demo", help="Sizes and certificates over the (d, p) matrix.")
    demo.add_argument("--dims", default="2,3,4", help="Comma-separated dimensions.")
    demo.add_argument("--min-prime", type=int, default=5)
    demo.add_argument("--max-prime", type=int, default=97)
    demo.add_argument("--threads", type=int, default=settings.verify_threads)

    serve = sub.add_parser("serve", help="Run the HTTP API.")
    serve.add_argument("--host", default=settings.host)
    serve.add_argument("--port", type=int, default=settings.port)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {
        key: value for key, value in vars(args).items()
        if key in RunConfig.model_fields and value is not None
    }
    return RunConfig(**fields)


def _emit(data: PointSetFile, cfg: RunConfig) -> None:
    if cfg.output_path:
        write_point_file(data, cfg.output_path, cfg.format)
    else:
        sys.stdout.write(dumps(data, cfg.format or OutputFormat.JSON))


def _report(certificate: Certificate, form: str, cfg: RunConfig) -> None:
    text = render_report(certificate, form)
    if cfg.report_path:
        Path(cfg.report_path).write_text(text, encoding="utf-8")
    # stdout carries the point file when no output path is given
    stream = sys.stdout if cfg.output_path or cfg.command != Command.CONSTRUCT else sys.stderr
    stream.write(text)


def _exit_status(certificate: Certificate) -> int:
    return EXIT_PASS if certificate.passed else EXIT_VERIFICATION_FAILED


def cmd_construct(cfg: RunConfig) -> int:
    """Grid mode runs the full pipeline; field mode constructs and certifies over F_p."""
    run = construct_point_set(cfg.dim, cfg.form_spec, grid_size=cfg.grid_size, prime=cfg.prime,
                              seed=cfg.seed, threads=cfg.threads)
    _emit(run.data, cfg)
    _report(run.certificate, str(run.form), cfg)
    return _exit_status(run.certificate)


def _file_form(data: PointSetFile, form_spec: Optional[str]) -> RationalForm:
    if form_spec:
        return parse_form(form_spec, data.dim)
    if data.form:
        return RationalForm.from_rows(data.dim, data.form)
    return parse_form("sphere", data.dim)


def cmd_verify(cfg: RunConfig) -> int:
    """Field-mode files are checked over F_p, all others over the integers."""
    data = read_point_file(cfg.input_path)
    rational = _file_form(data, cfg.form_spec)
    prime = data.prime if data.field_mode else None
    certificate = certify_points(data.dim, data.points, rational, prime, threads=cfg.threads)
    _report(certificate, str(rational), cfg)
    return _exit_status(certificate)


def classification_report(rational: RationalForm, prime: Prime, seed: Optional[int] = None) -> list[str]:
    q = reduce_form(rational, prime)
    result = classify(q, seed=seed)
    if isinstance(result, IrreducibleRank2):
        return [
            f"IrreducibleRank2 over F_{prime}: {q}",
            f"discriminant: {result.discriminant} (mod {prime})",
            f"Euler witness: {result.discriminant}^(({prime}-1)/2) = {result.euler_witness} "
            f"= -1 (mod {prime}), a non-square",
        ]
    lines = [f"Rich over F_{prime}: {q}", "basis:"]
    for index, v in enumerate(result.basis.vectors, start=1):
        lines.append(f"  v{index} = {tuple(v)}  Q(v{index}) = {evaluate(q, v)}")
    return lines


def cmd_classify(cfg: RunConfig) -> int:
    prime = Prime(cfg.prime)
    rational = parse_form(cfg.form_spec, cfg.dim)
    sys.stdout.write("\n".join(classification_report(rational, prime, cfg.seed)) + "\n")
    return EXIT_PASS


def cmd_demo(dims: Sequence[int], min_prime: int, max_prime: int, threads: int) -> int:
    """Sphere constructions over every (d, p); prints a size table."""
    rows = [f"{'d':>2} {'p':>4} {'p+1-d':>6} {'size':>5}  status"]
    failures = 0
    for d in dims:
        rational = parse_form("sphere", d)
        for prime in sorted(primes_below(max_prime), key=int):
            p = int(prime)
            if p < min_prime or d > p + 1:
                continue
            q = reduce_form(rational, prime)
            if isinstance(classify(q), IrreducibleRank2):
                rows.append(f"{d:>2} {p:>4} {p + 1 - d:>6} {'-':>5}  irreducible rank 2")
                continue
            construction = construct_q_generic(q, d)
            certificate = is_q_generic(PointSet.of(construction.points, d, p), q, threads=threads)
            failures += not certificate.passed
            rows.append(f"{d:>2} {p:>4} {p + 1 - d:>6} {construction.size:>5}  {certificate.status.value}")
    sys.stdout.write("\n".join(rows) + "\n")
    return EXIT_PASS if failures == 0 else EXIT_VERIFICATION_FAILED


def cmd_serve(host: str, port: int) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=host, port=port, reload=settings.debug)
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_json or None)

    try:
        if args.command == "serve":
            return cmd_serve(args.host, args.port)
        if args.command == "demo":
            dims = [int(x) for x in args.dims.split(",") if x.strip()]
            return cmd_demo(dims, args.min_prime, args.max_prime, args.threads)

        cfg = _run_config(args)
        if cfg.format is None and cfg.output_path:
            cfg.format = guess_format(cfg.output_path)
        handlers = {
            Command.CONSTRUCT: cmd_construct,
            Command.VERIFY: cmd_verify,
            Command.CLASSIFY: cmd_classify,
        }
        return handlers[cfg.command](cfg)
    except GeometryError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stderr.write(f"error: {describe(e)['message']}\n")
        return exit_code_for(e)
    except (ValidationError, ValueError, OSError) as e:
        logger.error(f"Invalid input: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
