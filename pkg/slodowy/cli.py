"""Command-line front end: batch verification, construction dumps, rendering and the worked examples."""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, TextIO

from rich.console import Console

from .checks import CheckReport
from .config import ENV_VARS, FIXTURE_NAMES, Settings
from .errors import InputError, SlodowyError
from .partitions import MAX_N, Partition, covers_above, hasse_dot, hasse_edges
from .pyramids import RENDER_FORMATS, enumerate_pyramids, render
from .stages import construct_stage, verify_stage
from .ui import covers_table, loading_indicator, print_report, show_error, show_info, show_success, stage_panel
from .uhbar import (
    PBWElem,
    StageAlgebra,
    ideal_reduce,
    invariant_basis,
    one_shot_dims,
    stage_algebra,
    two_stage_dims,
)

logger = logging.getLogger(__name__)

MAX_STAGE_N = 8
MAX_QUANTUM_N = 4
EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.ERROR),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except InputError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


# --------------------------------------------------------------------------- output


class Output:
    """JSON lines or rich text, to stdout or a file."""

    def __init__(self, fmt: str, out: Path | None) -> None:
        self.fmt = fmt
        self.out = out
        self._handle: TextIO | None = None
        self._console: Console | None = None

    def __enter__(self) -> "Output":
        if self.out is not None:
            self._handle = self.out.open("w", encoding="utf-8")
        stream = self._handle or sys.stdout
        self._console = Console(file=stream, soft_wrap=True) if self.fmt == "text" else None
        return self

    def __exit__(self, *exc: object) -> None:
        if self._handle is not None:
            self._handle.close()

    @property
    def stream(self) -> TextIO:
        return self._handle or sys.stdout

    @property
    def console(self) -> Console:
        assert self._console is not None
        return self._console

    def line(self, record: Any) -> None:
        self.stream.write(json.dumps(record, sort_keys=False, default=str) + "\n")
        self.stream.flush()

    def raw(self, text: str) -> None:
        self.stream.write(text)

    def report(self, report: CheckReport) -> None:
        if self.fmt == "text":
            print_report(report, self.console)
        else:
            self.line(report.to_dict())


# --------------------------------------------------------------------------- commands


def _verify_pair(pair: tuple[tuple[int, ...], tuple[int, ...]]) -> dict[str, Any]:
    mu, lam = Partition(pair[0]), Partition(pair[1])
    try:
        return verify_stage(mu, lam).to_dict()
    except SlodowyError as e:
        report = CheckReport(subject=f"stage {mu} < {lam}", data={"mu": mu.to_json(), "lam": lam.to_json()})
        report.add("construction", False, {"error": str(e), **e.details})
        return report.to_dict()


def cmd_verify_all(args: argparse.Namespace, out: Output) -> int:
    if not 2 <= args.n <= MAX_STAGE_N:
        raise InputError(f"verify-all needs 2 <= n <= {MAX_STAGE_N}, got {args.n}")
    pairs = sorted((mu.parts, lam.parts) for mu, lam in hasse_edges(args.n))
    logger.info("verifying %d covers for n=%d with %d worker(s)", len(pairs), args.n, args.jobs)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results: Iterable[dict[str, Any]] = pool.map(_verify_pair, pairs)
            return _emit_batch(results, out)
    return _emit_batch(map(_verify_pair, pairs), out)


def _emit_batch(results: Iterable[dict[str, Any]], out: Output) -> int:
    failed = 0
    for record in results:
        if out.fmt == "text":
            report = CheckReport(record["subject"], record["checks"], record["witnesses"], record["data"])
            print_report(report, out.console)
        else:
            out.line(record)
        for name in record["failures"]:
            failed += 1
            show_error(f"{record['data']['mu']} < {record['data']['lam']}: {name}")
    if failed:
        return EXIT_FAILED
    show_success("all covers verified")
    return EXIT_OK


def cmd_construct(args: argparse.Namespace, out: Output) -> int:
    sd = construct_stage(args.mu, args.lam)
    if out.fmt == "text":
        out.console.print(stage_panel(sd))
    else:
        out.line(sd.to_json())
    return EXIT_OK


def cmd_examples(args: argparse.Namespace, out: Output) -> int:
    fixture_dir = str(args.fixture_dir) if args.fixture_dir else None
    with loading_indicator(f"Running the {args.name} example"):
        if args.name == "sl3":
            from .uhbar import verify_sl3

            report = verify_sl3(max_degree=args.degree, fixture_dir=fixture_dir)
        else:
            from .poisson import verify_sl4

            report = verify_sl4(fixture_dir=fixture_dir)
    out.report(report)
    for name in report.failures():
        show_error(f"{args.name}: {name}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_render(args: argparse.Namespace, out: Output) -> int:
    if args.what == "hasse":
        if args.format != "dot":
            raise InputError(f"the Hasse diagram is only rendered as dot, not {args.format}")
        if not 1 <= args.target <= MAX_N:
            raise InputError(f"n must be between 1 and {MAX_N}")
        out.raw(hasse_dot(args.target))
        return EXIT_OK
    shape = Partition.parse(args.target)
    for pyramid in enumerate_pyramids(shape):
        out.raw(render(pyramid, fmt=args.format))
        if args.format == "ascii":
            out.raw("\n")
    return EXIT_OK


def _quantum_stage(mu: Partition, lam: Partition) -> StageAlgebra:
    if mu.n > MAX_QUANTUM_N:
        raise InputError(f"quantum commands are limited to n <= {MAX_QUANTUM_N}, got {mu.n}")
    return stage_algebra(construct_stage(mu, lam))


def _read_element(source: str, sa: StageAlgebra) -> PBWElem:
    text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"element is not valid JSON: {e}") from e
    if not isinstance(data, list):
        raise InputError("element must be a JSON list of terms")
    if all(isinstance(t, dict) for t in data):
        return PBWElem.from_json(data)
    return sa.algebra.from_terms(data)


def cmd_reduce(args: argparse.Namespace, out: Output) -> int:
    sa = _quantum_stage(args.mu, args.lam)
    ctx = sa.ctx1 if args.stage == 1 else sa.ctx2
    element = _read_element(args.element, sa)
    reduced = ideal_reduce(element, ctx)
    names = sa.algebra.names
    record = {
        "letters": list(names),
        "stage": args.stage,
        "input": element.to_json(names),
        "reduced": reduced.to_json(names),
        "pretty": reduced.pretty(names),
    }
    if out.fmt == "text":
        out.console.print(record["pretty"])
    else:
        out.line(record)
    return EXIT_OK


def cmd_invariants(args: argparse.Namespace, out: Output) -> int:
    sa = _quantum_stage(args.mu, args.lam)
    names = sa.algebra.names
    with loading_indicator(f"Invariants up to degree {args.degree}"):
        basis = invariant_basis(sa.ctx2, args.degree)
        record = {
            "mu": args.mu.to_json(),
            "lam": args.lam.to_json(),
            "letters": list(names),
            "one_shot_dims": one_shot_dims(sa.ctx2, args.degree),
            "two_stage_dims": two_stage_dims(sa, args.degree),
            "generators": [u.pretty(names) for u in basis],
        }
    if out.fmt == "text":
        report = CheckReport(subject=f"invariants {args.mu} < {args.lam}", data=record)
        report.add("dims_agree", record["one_shot_dims"] == record["two_stage_dims"])
        print_report(report, out.console)
    else:
        out.line(record)
    return EXIT_OK if record["one_shot_dims"] == record["two_stage_dims"] else EXIT_FAILED


def cmd_covers(args: argparse.Namespace, out: Output) -> int:
    above = covers_above(args.mu)
    if out.fmt == "text":
        out.console.print(covers_table([(args.mu, above)]))
    else:
        out.line({"mu": args.mu.to_json(), "covers": [lam.to_json() for lam in above]})
    return EXIT_OK


def cmd_serve(args: argparse.Namespace, out: Output) -> int:
    from .server import mcp

    show_info(f"Starting Slodowy Stages server ({args.transport})")
    try:
        if args.transport == "stdio":
            mcp.run(transport="stdio", show_banner=False)
        else:
            level = args.log_level.upper()
            uvicorn_config = None
            if level != "DEBUG":
                uvicorn_config = {
                    "log_config": {
                        "version": 1,
                        "disable_existing_loggers": False,
                        "loggers": {"uvicorn.access": {"level": "CRITICAL"}},
                    }
                }
            mcp.run(
                transport="streamable-http",
                host=args.host,
                port=args.port,
                show_banner=False,
                log_level="error" if level == "ERROR" else level.lower(),
                uvicorn_config=uvicorn_config,
            )
    except KeyboardInterrupt:
        show_info("Server stopped by user")
        logger.info("Server shutdown complete")
    return EXIT_OK


# --------------------------------------------------------------------------- parser


def build_parser(settings: Settings | None = None) -> argparse.ArgumentParser:
    s = settings or Settings.from_env()
    parser = argparse.ArgumentParser(
        prog="slodowy",
        description="Hamiltonian reduction by stages for finite W-algebras in type A",
        epilog="Environment variables: " + ", ".join(ENV_VARS),
    )
    parser.add_argument("--log-level", default=s.log_level, help=f"Log level (default: {s.log_level})")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str, handler: Callable[..., int], help_text: str, fmt: Sequence[str] = ("json", "text")
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--format", choices=list(fmt), default=fmt[0], help=f"Output format (default: {fmt[0]})")
        p.add_argument("--out", type=Path, default=None, help="Write output to a file instead of stdout")
        return p

    p = command("verify-all", cmd_verify_all, "Verify every cover of every partition of n")
    p.add_argument("n", type=int)
    p.add_argument("--jobs", type=int, default=s.jobs, help=f"Worker processes (default: {s.jobs})")

    p = command("construct", cmd_construct, "Dump the stage data of a cover mu < lam")
    p.add_argument("mu", type=_partition)
    p.add_argument("lam", type=_partition)

    p = command("examples", cmd_examples, "Run the sl3 or sl4 worked example")
    p.add_argument("name", choices=list(FIXTURE_NAMES))
    p.add_argument("--degree", type=_nonnegative, default=8, help="Degree bound for sl3 (default: 8)")
    p.add_argument("--fixture-dir", type=Path, default=s.fixtures, help="Directory with sl3.json / sl4.json")

    p = command("render", cmd_render, "Render pyramids of a shape or the Hasse diagram of n", RENDER_FORMATS)
    p.add_argument("what", choices=["pyramids", "hasse"])
    p.add_argument("target", help="shape such as 4,3 for pyramids; n for hasse")

    p = command("reduce", cmd_reduce, "Canonical representative of a PBW element in a stage quotient")
    p.add_argument("mu", type=_partition)
    p.add_argument("lam", type=_partition)
    p.add_argument("--element", default="-", help="JSON file with the element, - for stdin")
    p.add_argument("--stage", type=int, choices=[1, 2], default=2)

    p = command("invariants", cmd_invariants, "One-shot and two-stage invariant dimensions per degree")
    p.add_argument("mu", type=_partition)
    p.add_argument("lam", type=_partition)
    p.add_argument("--degree", type=_nonnegative, default=4)

    p = command("covers", cmd_covers, "Partitions covering mu in dominance order")
    p.add_argument("mu", type=_partition)

    p = command("serve", cmd_serve, "Run the MCP server")
    p.add_argument("--transport", choices=["stdio", "http"], default="stdio")
    p.add_argument("--host", default=s.host, help=f"Host to bind to (default: {s.host})")
    p.add_argument("--port", type=int, default=s.port, help=f"Port to listen on (default: {s.port})")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        settings = Settings.from_env()
    except SlodowyError as e:
        show_error(str(e))
        return e.exit_code
    args = build_parser(settings).parse_args(argv)
    if args.command == "render" and args.what == "hasse":
        try:
            args.target = int(args.target)
        except ValueError:
            show_error(f"hasse needs an integer n, got {args.target!r}")
            return EXIT_USAGE
    configure_logging(args.log_level)
    logger.info("slodowy %s", args.command)
    try:
        with Output(args.format, args.out) as out:
            return int(args.handler(args, out))
    except SlodowyError as e:
        show_error(str(e))
        logger.debug("error details: %s", e.details)
        return e.exit_code
    except OSError as e:
        show_error(f"I/O error: {e}")
        return EXIT_IO
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        raise


if __name__ == "__main__":
    sys.exit(main())
