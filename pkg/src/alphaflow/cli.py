"""Command-line interface: ``alphaflow {flow,stable,verify,ncount}``.

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .charcheck import SUITES, run_suite
from .errors import AlphaFlowError, TooLarge
from .ffield import FieldParams, field_make, field_of_order, prime_power
from .flowref import FLOW_POLY_MAX_EDGES, Q_MINUS_ONE, flow_poly
from .graph import CATALOG_NAMES, Multigraph, named_graph, read_edge_list
from .kontsum import ENGINES, n_count, s_table

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(AlphaFlowError, ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    graph_name: str | None = None
    edges_path: str | None = None
    q: int | None = None
    p: int | None = None
    d: int = 1
    threads: int | None = None
    reduction: bool = True
    force: bool = False
    fmt: str = "json"
    output: str | None = None
    engine: str = "frontier"
    suite: str = "all"

    def __post_init__(self):
        if (self.graph_name is None) == (self.edges_path is None) and self.command != "verify":
            raise UsageError("give exactly one of --graph or --edges")
        if self.q is not None and self.p is not None:
            raise UsageError("give either --q or --p/--d, not both")

    @property
    def graph_label(self) -> str | None:
        return self.graph_name if self.graph_name is not None else self.edges_path

    def order(self) -> int | None:
        if self.q is not None:
            return self.q
        if self.p is not None:
            return self.p**self.d
        return None

    def field(self) -> FieldParams:
        if self.p is not None:
            return field_make(self.p, self.d)
        if self.q is None:
            raise UsageError(f"{self.command} needs --q or --p")
        return field_of_order(self.q)

    def load_graph(self) -> tuple[Multigraph, int]:
        if self.graph_name is not None:
            return named_graph(self.graph_name), 0
        return read_edge_list(self.edges_path)


@dataclass
class Report:
    command: str
    graph: str | None
    q: int | None
    results: dict
    elapsed_ms: float = 0.0
    ok: bool = True

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "graph": self.graph,
            "q": self.q,
            "results": self.results,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "version": __version__,
        }


def cmd_flow(cfg: RunConfig) -> Report:
    g, loops = cfg.load_graph()
    poly = flow_poly(g) * Q_MINUS_ONE**loops
    q = cfg.order()
    results = {
        "coefficients": list(poly.coefficients),
        "polynomial": str(poly),
        "loops": loops,
        "value": poly(q) if q is not None else None,
    }
    return Report("flow", cfg.graph_label, q, results)


def cmd_stable(cfg: RunConfig) -> Report:
    fp = cfg.field()
    g, loops = cfg.load_graph()
    t0 = time.perf_counter()
    table = s_table(g, fp, reduction=cfg.reduction, threads=cfg.threads, force=cfg.force,
                    engine=cfg.engine, graph_id=cfg.graph_label or "")
    seconds = time.perf_counter() - t0
    # each stripped loop carries a free nonzero weight that never touches the Laplacian
    scale = (fp.q - 1) ** loops
    reference = flow_poly(g)(fp.q) * scale if g.n_edges <= FLOW_POLY_MAX_EDGES else None
    flow = table.flow_value * scale
    results = {
        "s_values": {str(r): s * scale for r, s in enumerate(table.s_values)},
        "rank_counts": {str(r): c * scale for r, c in enumerate(table.rank_counts)},
        "flow": flow,
        "flow_reference": reference,
        "match": reference is None or reference == flow,
        "loops": loops,
        "reduced": table.reduced,
        "engine": table.engine,
        "assignments": table.assignments,
        "assignments_per_second": round(table.assignments / seconds, 1) if seconds > 0 else None,
    }
    return Report("stable", cfg.graph_label, fp.q, results, ok=results["match"])


def cmd_verify(cfg: RunConfig) -> Report:
    fp = cfg.field()
    reports = run_suite(cfg.suite, fp)
    results = {"suite": cfg.suite, "checks": [r.as_dict() for r in reports]}
    return Report("verify", cfg.graph_label, fp.q, results, ok=all(r.passed for r in reports))


def cmd_ncount(cfg: RunConfig) -> Report:
    fp = cfg.field()
    g, loops = cfg.load_graph()
    # a loop's weight never enters the Laplacian, so it may take any of q values
    value = n_count(g, fp, threads=cfg.threads, force=cfg.force) * fp.q**loops
    return Report("ncount", cfg.graph_label, fp.q, {"n_count": value, "loops": loops})


COMMANDS = {"flow": cmd_flow, "stable": cmd_stable, "verify": cmd_verify, "ncount": cmd_ncount}


def _tsv(report: Report) -> str:
    r = report.results
    rows: list[tuple] = []
    if report.command == "flow":
        rows.append(("power", "coefficient"))
        rows += [(k, c) for k, c in enumerate(r["coefficients"])]
        if r["value"] is not None:
            rows.append(("flow", r["value"]))
    elif report.command == "stable":
        rows.append(("r", "S(r,q)"))
        rows += list(r["s_values"].items())
        rows.append(("flow", r["flow"]))
    elif report.command == "verify":
        rows.append(("check", "instances", "max_deviation", "passed"))
        rows += [(c["name"], c["instances"], f"{c['max_deviation']:.3e}", "pass" if c["passed"] else "FAIL")
                 for c in r["checks"]]
    else:
        rows.append(("ncount", r["n_count"]))
    return "".join("\t".join(str(x) for x in row) + "\n" for row in rows)


def render(report: Report, fmt: str) -> str:
    if fmt == "tsv":
        return _tsv(report)
    return json.dumps(report.to_json(), indent=2) + "\n"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alphaflow",
        description="Flow polynomials over F_q via graded spanning-tree character sums.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--graph", choices=CATALOG_NAMES, help="named catalog graph")
    src.add_argument("--edges", metavar="PATH", help="edge-list file, one 'u v' pair per line")
    common.add_argument("--q", type=int, help="field order (odd prime power)")
    common.add_argument("--p", type=int, help="field characteristic (with --d)")
    common.add_argument("--d", type=_positive_int, default=1, help="extension degree (default 1)")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: available cores)")
    common.add_argument("--format", choices=("json", "tsv"), default="json", dest="fmt")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")

    sub.add_parser("flow", parents=[common], help="flow polynomial by deletion/contraction")
    st = sub.add_parser("stable", parents=[common], help="graded sums S(r,q) and the reassembled flow")
    st.add_argument("--no-reduction", action="store_false", dest="reduction",
                    help="enumerate every assignment instead of one per scaling orbit")
    st.add_argument("--force", action="store_true", help="ignore the search-space guard")
    st.add_argument("--engine", choices=ENGINES, default="frontier")
    ve = sub.add_parser("verify", parents=[common], help="character-sum and oracle checks")
    ve.add_argument("--suite", choices=("all", *SUITES), default="all")
    nc = sub.add_parser("ncount", parents=[common], help="number of weightings with nonzero tree sum")
    nc.add_argument("--force", action="store_true", help="ignore the search-space guard")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, graph_name=ns.graph, edges_path=ns.edges, q=ns.q, p=ns.p, d=ns.d,
        threads=ns.threads, reduction=getattr(ns, "reduction", True),
        force=getattr(ns, "force", False), fmt=ns.fmt, output=ns.output,
        engine=getattr(ns, "engine", "frontier"), suite=getattr(ns, "suite", "all"))


def run(cfg: RunConfig) -> tuple[Report, int]:
    t0 = time.perf_counter()
    report = COMMANDS[cfg.command](cfg)
    report.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return report, EXIT_OK if report.ok else EXIT_MISMATCH


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if cfg.q is not None and cfg.command != "flow" and prime_power(cfg.q) is None:
            raise UsageError(f"q={cfg.q} is not a prime power")
        report, code = run(cfg)
    except TooLarge as exc:
        print(f"alphaflow: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (AlphaFlowError, ValueError, KeyError, OSError) as exc:
        print(f"alphaflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = render(report, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.fmt == "tsv":
        # timing stays off stdout so the table is reproducible byte for byte
        extra = ""
        if report.command == "stable" and report.results["assignments_per_second"] is not None:
            extra = f" assignments_per_second={report.results['assignments_per_second']}"
        print(f"# elapsed_ms={report.elapsed_ms:.1f}{extra}", file=sys.stderr)
    if code == EXIT_MISMATCH:
        print("alphaflow: verification mismatch", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
