"""Command-line entry point.

Exit codes: 0 verified, 1 usage or IO error, 2 conjecture violation found,
3 a construction contradicted a proven lemma.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys
import tempfile
from fractions import Fraction
from itertools import product
from pathlib import Path

from .certificates import certificate_check
from .coloring import Coloring, exceptional_graph
from .errors import (BiregularError, BudgetExceeded, CertificateSchemaError, LemmaViolation,
                     PreconditionError, UncoveredParameters)
from .generate import DEFAULT_BURN_IN, random_bnk, random_instance, shuffled_instance
from .inequality import (InequalityInstance, exhaustive_check, random_counterexample_search,
                         random_matrix, report, square_case_certificate)
from .involution import involution_certificate, solve_4parts, solve_balls
from .matching import hall_coefficient
from .model import LabeledBigraph, WeightMatrix, canonical_json, enumerate_bnk, instance_from_matrix
from .oracles import (DEFAULT_MAX_EDGES, DEFAULT_NODE_BUDGET, brute_force_involution,
                      conjecture_campaign, verify_higgins, verify_weak_balls)
from .tensor import symmetric_product

log = logging.getLogger("biregular")

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_LEMMA = 0, 1, 2, 3
WORKERS_ENV = "BIREGULAR_WORKERS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _csv_text(rows: list[dict]) -> str:
    keys: list[str] = []
    for r in rows:
        for key in r:
            if key not in keys:
                keys.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({key: (canonical_json(v) if isinstance(v, (dict, list)) else v)
                         for key, v in r.items()})
    return buf.getvalue()


def _output(args, doc, rows: list[dict] | None = None) -> None:
    if getattr(args, "format", "json") == "csv":
        _emit(_csv_text(rows if rows is not None else [doc]), args.out)
    else:
        _emit(canonical_json(doc), args.out)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _load(path: str, loader, what: str):
    doc = _load_json(path)
    try:
        return loader(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a valid {what}: {exc}") from None


def _parse_shape(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"shape must look like 4x4, got {text!r}") from None


# subcommands

def cmd_gen(args) -> int:
    g = random_instance(args.n, args.k, args.seed, args.burn_in)
    _emit(canonical_json(g.to_json()), args.out)
    return EXIT_OK


def _solve_or_search(g: LabeledBigraph, args) -> tuple[dict | None, str]:
    try:
        _, cert = solve_balls(g)
        return cert, "constructive"
    except UncoveredParameters:
        log.info("(%d, %d) has no constructive route; using exhaustive search", g.n, g.k)
    iota = brute_force_involution(g, args.max_edges, args.node_budget)
    if iota is None:
        return None, "brute-force"
    return involution_certificate(g, iota, method="brute-force"), "brute-force"


def cmd_solve_balls(args) -> int:
    g = _load(args.instance, LabeledBigraph.from_json, "instance")
    cert, _ = _solve_or_search(g, args)
    if cert is None:
        _emit(canonical_json({"kind": "balls-counterexample", "instance": g.to_json()}), args.out)
        return EXIT_VIOLATION
    if args.dot and "coloring" in cert:
        w = Coloring.from_json(cert["coloring"])
        sign = 1 if cert["eps"] >= 0 else -1
        atomic_write(args.dot, exceptional_graph(g, w, cert["m"], sign).to_dot())
    _emit(canonical_json(cert), args.out)
    return EXIT_OK


def cmd_solve_4parts(args) -> int:
    g1 = _load(args.first, LabeledBigraph.from_json, "instance")
    g2 = _load(args.second, LabeledBigraph.from_json, "instance")
    _, cert = solve_4parts(g1, g2)
    _emit(canonical_json(cert), args.out)
    return EXIT_OK


def _matrices(args):
    """Members of B(n, k) (or binary n x k matrices for higgins) under test."""
    n, k = args.n, args.k
    if args.conjecture == "higgins":
        if args.exhaustive:
            for bits in product((0, 1), repeat=n * k):
                yield WeightMatrix(tuple(tuple(bits[i * k:(i + 1) * k]) for i in range(n)))
        else:
            rng = random.Random(args.seed)
            for _ in range(args.samples):
                yield WeightMatrix(tuple(tuple(rng.randint(0, 1) for _ in range(k)) for _ in range(n)))
    elif args.conjecture == "inequality" and not args.exhaustive:
        rng = random.Random(args.seed)
        for _ in range(args.samples):
            yield WeightMatrix(tuple(map(tuple, random_matrix(n, k, args.density, rng))))
    elif args.exhaustive:
        yield from enumerate_bnk(n, k)
    else:
        rng = random.Random(args.seed)
        for _ in range(args.samples):
            yield random_bnk(n, k, rng)


def _verify_one(B: WeightMatrix, args) -> tuple[bool, dict]:
    conj = args.conjecture
    if conj == "balls":
        rng = random.Random(canonical_json([args.seed, B.to_list()]))
        g = shuffled_instance(B, rng) if not args.exhaustive else instance_from_matrix(B)
        cert, method = _solve_or_search(g, args)
        if cert is None:
            return False, {"kind": "balls-counterexample", "instance": g.to_json()}
        if not certificate_check(cert):
            raise LemmaViolation("emitted involution certificate failed independent check", cert)
        return True, {"method": method}
    if conj == "weak-balls":
        ok, cert = verify_weak_balls(B)
        return ok, ({} if ok else cert)
    if conj == "higgins":
        verdict, cert = verify_higgins(B)
        return verdict != "counterexample", ({"verdict": verdict} if verdict != "counterexample" else cert)
    res = exhaustive_check(B.data, budget=args.subset_budget)
    if res["holds"]:
        return True, {"subsets": res["subsets"]}
    cells = [tuple(c) for c in res["violation"]]
    return False, report(InequalityInstance(B.data, tuple(cells)))


def cmd_verify(args) -> int:
    failures, rows, count = [], [], 0
    for B in _matrices(args):
        ok, info = _verify_one(B, args)
        count += 1
        rows.append({"index": count - 1, "matrix": B.to_list(), "passed": ok})
        if not ok:
            failures.append({"matrix": B.to_list(), "certificate": info})
    doc = {"conjecture": args.conjecture, "n": args.n, "k": args.k,
           "mode": "exhaustive" if args.exhaustive else "sampled", "seed": args.seed,
           "instances": count, "passed": count - len(failures), "failed": len(failures),
           "failures": failures}
    _output(args, doc, rows)
    if failures:
        log.error("%d counterexample(s) to %s found", len(failures), args.conjecture)
        return EXIT_VIOLATION
    return EXIT_OK


def _parse_matrix_doc(doc):
    if isinstance(doc, dict) and "data" in doc:
        doc = doc["data"]
    return tuple(tuple(Fraction(x) for x in row) for row in doc)


def cmd_inequality(args) -> int:
    if args.search:
        if not args.shape:
            raise UsageError("--search requires --shape")
        doc = random_counterexample_search(args.shape, args.density, args.trials, args.seed)
        _output(args, doc)
        return EXIT_VIOLATION if doc["violations"] else EXIT_OK
    if not (args.matrix and args.cells):
        raise UsageError("give --matrix and --cells, or --search")
    M = _load(args.matrix, _parse_matrix_doc, "matrix")
    cells_doc = _load_json(args.cells)
    if isinstance(cells_doc, dict):
        cells_doc = cells_doc.get("cells")
    try:
        inst = InequalityInstance(M, tuple(tuple(c) for c in cells_doc))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid inequality input: {exc}") from None
    doc = report(inst)
    if args.spectral:
        doc["spectral"] = square_case_certificate(inst)
    _output(args, doc)
    return EXIT_VIOLATION if doc["violated"] else EXIT_OK


def cmd_h(args) -> int:
    G = _load(args.graph, WeightMatrix.from_json, "matrix")
    h = hall_coefficient(G, args.bound)
    doc = {"value": f"{h.value.numerator}/{h.value.denominator}", "witness": list(h.witness)}
    _output(args, doc)
    return EXIT_OK


def cmd_tensor(args) -> int:
    M = _load(args.matrix, WeightMatrix.from_json, "matrix")
    _emit(canonical_json(symmetric_product(M).to_json()), args.out)
    return EXIT_OK


def cmd_campaign(args) -> int:
    cfg = _load_json(args.config)
    if not isinstance(cfg, dict) or "ranges" not in cfg:
        raise UsageError("campaign config needs a 'ranges' list")
    try:
        ranges = [(int(n), int(k)) for n, k in cfg["ranges"]]
    except (TypeError, ValueError):
        raise UsageError("ranges must be [[n, k], ...]") from None
    res = conjecture_campaign(ranges, cfg.get("budgets"), int(cfg.get("seed", 0)),
                              args.workers, bool(cfg.get("timing", False)))
    if args.format == "csv":
        _emit(_csv_text(res["records"]), args.out)
    else:
        lines = [canonical_json(r) for r in res["records"]]
        lines.append(canonical_json({"summary": res["summary"], "seed": res["seed"],
                                     "ranges": res["ranges"]}))
        _emit("\n".join(lines), args.out)
    return EXIT_OK if res["summary"]["all_passed"] else EXIT_VIOLATION


def cmd_check(args) -> int:
    try:
        ok = certificate_check(Path(args.certificate))
    except OSError as exc:
        raise UsageError(f"cannot read {args.certificate}: {exc.strerror}") from None
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="biregular", description="Involutions, matchings and bounds for biregular bigraphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--out", help="write here (atomically) instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    def budgets(sp):
        sp.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
        sp.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)

    sp = sub.add_parser("gen", help="random member of A(n, k)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve-balls", help="involution certificate for an instance")
    sp.add_argument("instance")
    sp.add_argument("--dot", help="also write the exceptional graph as DOT")
    budgets(sp)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_solve_balls)

    sp = sub.add_parser("solve-4parts", help="bijection certificate for two instances")
    sp.add_argument("first")
    sp.add_argument("second")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_solve_4parts)

    sp = sub.add_parser("verify", help="check a conjecture over B(n, k) or samples")
    sp.add_argument("--conjecture", required=True,
                    choices=("balls", "weak-balls", "higgins", "inequality"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--subset-budget", type=int, default=2_000_000)
    budgets(sp)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("inequality", help="evaluate or search the odd-cycle matrix inequality")
    sp.add_argument("--matrix")
    sp.add_argument("--cells")
    sp.add_argument("--spectral", action="store_true", help="attach the square-case certificate")
    sp.add_argument("--search", action="store_true")
    sp.add_argument("--shape", type=_parse_shape)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--density", type=float, default=0.3)
    common(sp)
    sp.set_defaults(func=cmd_inequality)

    sp = sub.add_parser("h", help="exact Hall coefficient of a bipartite graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--bound", type=int, default=20, help="largest left part scanned")
    common(sp)
    sp.set_defaults(func=cmd_h)

    sp = sub.add_parser("tensor", help="symmetric cell product of a matrix")
    sp.add_argument("--matrix", required=True)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_tensor)

    sp = sub.add_parser("campaign", help="run all verifiers over configured (n, k)")
    sp.add_argument("--config", required=True)
    sp.add_argument("--workers", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_campaign)

    sp = sub.add_parser("check", help="validate a certificate file")
    sp.add_argument("certificate")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        log.setLevel(logging.INFO if args.verbose else logging.WARNING)
        if getattr(args, "workers", 1) is None:
            args.workers = _default_workers()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateSchemaError as exc:
        print(f"error: malformed certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LemmaViolation as exc:
        print(f"LEMMA VIOLATION: {exc}", file=sys.stderr)
        print(canonical_json(exc.artifact), file=sys.stderr)
        return EXIT_LEMMA
    except PreconditionError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BiregularError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
