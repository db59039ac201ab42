"""Command-line front end: ``python -m app.cli <command> ...``.

Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
2 for invalid input and 3 when an internal consistency check fails.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from app.api.v1.services.intersection_service import IntersectionService
from app.api.v1.services.picard_service import PicardService, format_generators
from app.api.v1.services.pullback_service import PullbackService
from app.chow.keys import QueryDocument, class_to_map, format_human, parse_class_expression, parse_weights
from app.chow.picard import DivClass
from app.chow.selfcheck import LEVELS, run_selfcheck, summarize
from app.core.cache import ResultCache
from app.core.config import settings
from app.core.exceptions import InvalidInputError, InvariantBreachError, SelfmapChowError
from app.core.logging_config import setup_logging

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BREACH = 3


def _emit(args: argparse.Namespace, payload: Dict[str, Any], human: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in human:
            print(line)


def _class_lines(cls: DivClass) -> List[str]:
    return [f"  {key}: {format_human(value)}" for key, value in class_to_map(cls).items()] or ["  0"]


def cmd_basis(args: argparse.Namespace) -> int:
    weights = parse_weights(args.weights) if args.weights is not None else None
    listing = PicardService().basis(args.d, args.n, weights)
    human = [f"Y_{{{args.d},{args.n}}}: rank {listing['rank']}"]
    unstable = set(listing.get("unstable", []))
    for key in listing["generators"]:
        human.append(f"  {key}{'  (unstable)' if key in unstable else ''}")
    if weights is not None:
        human.append(f"unstable fixed-point divisors: {listing['unstable_fix'] or '(none)'}")
        human.append(f"quotient rank {listing['quotient_rank']}: {format_generators(listing['surviving'])}")
    _emit(args, listing, human)
    return EXIT_OK


def cmd_classes(args: argparse.Namespace) -> int:
    service = PicardService()
    payload = {"d": args.d, "n": args.n, "classes": {}}
    human = []
    for expression in args.expressions:
        cls = service.build_class(args.d, args.n, expression)
        payload["classes"][expression] = class_to_map(cls)
        human.append(f"{expression} =")
        human.extend(_class_lines(cls))
    _emit(args, payload, human)
    return EXIT_OK


def _load_document(args: argparse.Namespace) -> QueryDocument:
    if args.query:
        try:
            raw = json.loads(Path(args.query).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"Cannot read query file {args.query}: {exc}")
        return QueryDocument.from_json(raw)
    if args.d is None:
        raise InvalidInputError("intersect needs --query FILE or --d with --factor expressions")
    weights = [str(w) for w in parse_weights(args.weights or [])]
    return QueryDocument.from_json({"d": args.d, "weights": weights, "factors": list(args.factor or [])})


def _open_cache(args: argparse.Namespace) -> Optional[ResultCache]:
    if getattr(args, "no_cache", False):
        return None
    return ResultCache(args.cache or settings.SELFMAP_CHOW_CACHE)


def cmd_intersect(args: argparse.Namespace) -> int:
    document = _load_document(args)
    service = IntersectionService(_open_cache(args))
    outcome = service.intersect(document, jobs=args.jobs, pivot=args.pivot)
    _emit(args, service.record(outcome), [format_human(outcome.value)])
    return EXIT_OK


def cmd_pullback(args: argparse.Namespace) -> int:
    service = PullbackService()
    if args.kind == "compose":
        cls = parse_class_expression(args.d1 * args.d2, args.n1, args.cls)
        first, second = service.compose(args.d1, args.n1, args.d2, cls)
        payload = {"first": class_to_map(first), "second": class_to_map(second)}
        human = [f"on Y_{{{args.d1},{args.n1}}}:"] + _class_lines(first)
        human += [f"on Y_{{{args.d2},0}}:"] + _class_lines(second)
    elif args.kind == "selfcompose":
        cls = parse_class_expression(args.d**args.m, args.n, args.cls)
        pulled = service.selfcompose(args.d, args.n, args.m, cls)
        payload = {"class": class_to_map(pulled)}
        human = [f"on Y_{{{args.d},{args.n}}}:"] + _class_lines(pulled)
    else:
        cls = parse_class_expression(args.d, args.n, args.cls)
        pulled = service.forget(args.d, args.n, cls)
        payload = {"class": class_to_map(pulled)}
        human = [f"on Y_{{{args.d},{args.n + 1}}}:"] + _class_lines(pulled)
    _emit(args, payload, human)
    return EXIT_OK


def cmd_selfcheck(args: argparse.Namespace) -> int:
    cache = ResultCache(args.cache or settings.SELFMAP_CHOW_CACHE)
    results = run_selfcheck(args.level, seed=args.seed)
    report = summarize(results)
    report["cache"] = cache.stats()
    human = []
    for suite in report["suites"]:
        human.append(f"{'PASS' if suite['passed'] else 'FAIL'}  {suite['name']} ({suite['checks']} checks, {suite['seconds']}s)")
        human.extend(f"      {failure}" for failure in suite["failures"])
    _emit(args, report, human)
    return EXIT_OK if report["passed"] else EXIT_BREACH


def cmd_cache(args: argparse.Namespace) -> int:
    cache = ResultCache(args.cache or settings.SELFMAP_CHOW_CACHE)
    if args.action == "clear":
        removed = cache.clear()
        _emit(args, {"path": str(cache.path), "removed": removed}, [f"removed {removed} records from {cache.path}"])
    else:
        stats = cache.stats()
        _emit(args, stats, [f"{stats['path']}: {stats['entries']} records"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a single JSON object")
    common.add_argument("--cache", default=None, help="cache file (default: $SELFMAP_CHOW_CACHE)")
    common.add_argument("--jobs", type=int, default=settings.JOBS, help="worker processes")

    parser = argparse.ArgumentParser(
        prog="selfmap-chow",
        description="Divisor classes and intersection numbers on moduli of self-maps of P^1",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    basis = sub.add_parser("basis", parents=[common], help="list the Picard basis")
    basis.add_argument("--d", type=int, required=True)
    basis.add_argument("--n", type=int, required=True)
    basis.add_argument("--weights", nargs="*", default=None, help="weights as p/q tokens or one comma list")
    basis.set_defaults(handler=cmd_basis)

    classes = sub.add_parser("classes", parents=[common], help="expand named classes in the basis")
    classes.add_argument("--d", type=int, required=True)
    classes.add_argument("--n", type=int, required=True)
    classes.add_argument("expressions", nargs="+", help="e.g. 'psi(1)' 'Per(2)' 'H(1,2)'")
    classes.set_defaults(handler=cmd_classes)

    intersect = sub.add_parser("intersect", parents=[common], help="compute a top intersection number")
    intersect.add_argument("--query", help="JSON query document")
    intersect.add_argument("--d", type=int)
    intersect.add_argument("--weights", nargs="*", default=None)
    intersect.add_argument("--factor", action="append", help="inline class expression; repeat per factor")
    intersect.add_argument("--pivot", help="generator key of the first boundary to split along")
    intersect.add_argument("--no-cache", action="store_true", help="bypass the persistent cache")
    intersect.set_defaults(handler=cmd_intersect)

    pullback = sub.add_parser("pullback", help="pull classes back along natural maps")
    kinds = pullback.add_subparsers(dest="kind", required=True)
    compose = kinds.add_parser("compose", parents=[common])
    compose.add_argument("--d1", type=int, required=True)
    compose.add_argument("--n1", type=int, required=True)
    compose.add_argument("--d2", type=int, required=True)
    compose.add_argument("--class", dest="cls", required=True)
    selfcompose = kinds.add_parser("selfcompose", parents=[common])
    selfcompose.add_argument("--d", type=int, required=True)
    selfcompose.add_argument("--n", type=int, required=True)
    selfcompose.add_argument("--m", type=int, required=True)
    selfcompose.add_argument("--class", dest="cls", required=True)
    forget = kinds.add_parser("forget", parents=[common])
    forget.add_argument("--d", type=int, required=True)
    forget.add_argument("--n", type=int, required=True)
    forget.add_argument("--class", dest="cls", required=True)
    pullback.set_defaults(handler=cmd_pullback)

    selfcheck = sub.add_parser("selfcheck", parents=[common], help="run the invariant suites")
    selfcheck.add_argument("--level", choices=LEVELS, default="quick")
    selfcheck.add_argument("--seed", type=int, default=None)
    selfcheck.set_defaults(handler=cmd_selfcheck)

    cache = sub.add_parser("cache", parents=[common], help="inspect or clear the result cache")
    cache.add_argument("action", choices=("stats", "clear"))
    cache.set_defaults(handler=cmd_cache)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = setup_logging(stderr=True)
    if args.jobs < 1:
        logger.error(f"--jobs must be at least 1, got {args.jobs}")
        return EXIT_INVALID
    try:
        return args.handler(args)
    except InvalidInputError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_INVALID
    except InvariantBreachError as exc:
        logger.error(f"Invariant breach: {exc}")
        return EXIT_BREACH
    except SelfmapChowError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_BREACH


if __name__ == "__main__":
    sys.exit(main())
