"""
Command-line front end.

    fgl-cobord lazard --max-weight 6
    fgl-cobord verify inverse-identity --cap 6
    fgl-cobord lbmul 1 2 --specialize additive
    fgl-cobord wpbf decompose --n 2 --element "t"

Every command writes one JSON document (or a rich table with --emit table).
Exit codes: 0 success, 1 verification failure or integrality refusal,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import psutil

from config import config as app_config, get_cache_dir
from fgl_cobord.cli import render
from fgl_cobord.core.cache import PresentationCache, RedisCacheManager
from fgl_cobord.core.errors import DepthError, FglCobordError, IntegralityError, TruncationError
from fgl_cobord.core.lazard import SCHEMA, LazardPresentation, universal_table
from fgl_cobord.core.line_bundle import EpsilonTable, LBElement, build_psi
from fgl_cobord.core.mishchenko import MODES, mishchenko_elements
from fgl_cobord.core.proj_rings import ProjRing
from fgl_cobord.core.specialize import (
    additive_morphism,
    morphism_from_json,
    multiplicative_morphism,
    specialize,
)
from fgl_cobord.core.verify import CHECKS, VerifyContext, run_check
from fgl_cobord.core.wpbf import WpbfDecomposition, decompose, proj_map
from fgl_cobord.database.database import PresentationStore
from fgl_cobord.utils.logging import logger, set_level

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# one presentation cache per cache directory, for the life of the process
_caches: dict = {}


@dataclass(frozen=True)
class RunConfig:
    """Settings for one invocation: config file defaults overridden by flags."""

    max_weight: int = 6
    mode: str = "integral"
    output_format: str = "json"
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    parallel: bool = False
    cache_enabled: bool = True
    seed: int = 0
    samples: int = 100
    cost_warning_weight: int = 8

    def __post_init__(self):
        if self.max_weight < 1:
            raise TruncationError(f"empty truncation: max weight {self.max_weight} < 1")
        if self.mode not in MODES:
            raise FglCobordError(f"unknown mode {self.mode!r}")

    @classmethod
    def resolve(cls, args: argparse.Namespace, settings=None) -> "RunConfig":
        settings = settings or app_config

        def pick(flag: str, key: str):
            value = getattr(args, flag, None)
            return settings.get(key) if value is None else value

        input_path = pick("input", "input_path")
        output_path = pick("output", "output_path")
        return cls(
            max_weight=int(pick("max_weight", "max_weight")),
            mode=pick("mode", "mode"),
            output_format=pick("emit", "output_format"),
            input_path=Path(input_path) if input_path else None,
            output_path=Path(output_path) if output_path else None,
            parallel=bool(args.parallel or settings.get("parallel_weights", False)),
            cache_enabled=not args.no_cache and bool(settings.get("cache_enabled", True)),
            seed=int(pick("seed", "verify_seed")),
            samples=int(pick("samples", "verify_samples")),
            cost_warning_weight=int(settings.get("cost_warning_weight", 8)),
        )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-weight", dest="max_weight", type=int, help="truncation weight N (default 6)")
    common.add_argument("--mode", choices=MODES, help="integral (default) or rational coefficients")
    common.add_argument("--emit", choices=("json", "table"), help="output format")
    common.add_argument("--output", type=Path, help="write the document to this file")
    common.add_argument("--input", type=Path, help="read the element or morphism from this file")
    common.add_argument("--no-cache", dest="no_cache", action="store_true", help="always rebuild the presentation")
    common.add_argument("--parallel", action="store_true", help="solve weight components in worker processes")
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--samples", type=int, help="samples per randomized check")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ...")

    parser = argparse.ArgumentParser(
        prog="fgl-cobord",
        description="Exact formal group law and line-bundle cobordism calculus.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("lazard", parents=[common], help="build and export the truncated Lazard ring")

    verify = commands.add_parser("verify", parents=[common], help="run an identity check")
    verify.add_argument("check", choices=sorted(CHECKS))
    verify.add_argument("--cap", type=int, help="series degree cap")
    verify.add_argument("--caps", type=int, nargs=2, metavar=("N", "M"), help="caps of P^n x P^m")
    verify.add_argument("--depth", type=int, help="psi depth")
    verify.add_argument("--n", type=int, help="projective dimension for wpbf-roundtrip")

    lbmul = commands.add_parser(
        "lbmul", parents=[common], help="product e_i * e_j in B^{*,1}(pt); needs --max-weight >= i + j"
    )
    lbmul.add_argument("i", type=int)
    lbmul.add_argument("j", type=int)
    lbmul.add_argument("--specialize", help="additive, multiplicative or a morphism JSON file")

    wpbf = commands.add_parser("wpbf", parents=[common], help="weak projective bundle formula on P^n")
    wpbf.add_argument("action", choices=("decompose", "compose"))
    wpbf.add_argument("--n", type=int, required=True, help="projective dimension")
    wpbf.add_argument("--element", help="series (decompose) or component list (compose), JSON or text")
    return parser


def load_presentation(cfg: RunConfig) -> LazardPresentation:
    if cfg.max_weight > cfg.cost_warning_weight:
        available = psutil.virtual_memory().available / 2**30
        logger.warning(
            f"N={cfg.max_weight} above {cfg.cost_warning_weight}: relation matrices grow quickly "
            f"({available:.1f} GiB memory available)"
        )
    if not cfg.cache_enabled:
        return LazardPresentation.build(cfg.max_weight, parallel=cfg.parallel)
    cache_dir = get_cache_dir()
    if cache_dir not in _caches:
        store = PresentationStore(cache_dir) if cache_dir is not None else None
        _caches[cache_dir] = PresentationCache(app_config, store, RedisCacheManager(app_config))
    return _caches[cache_dir].load(cfg.max_weight, parallel=cfg.parallel)


def _read_input(args, cfg: RunConfig) -> str:
    if getattr(args, "element", None) is not None:
        return args.element
    if cfg.input_path is None:
        raise FglCobordError("no element given: use --element or --input")
    try:
        return cfg.input_path.read_text()
    except OSError as exc:
        raise FglCobordError(f"cannot read {cfg.input_path}: {exc}") from exc


def _as_json(text: str) -> Any:
    try:
        return json.loads(text)
    except ValueError:
        return None


# commands return (document, renderable, exit code)


def cmd_lazard(args, cfg: RunConfig):
    L = load_presentation(cfg)
    document = L.to_json()
    return document, render.presentation_table(L), EXIT_OK


def cmd_verify(args, cfg: RunConfig):
    L = load_presentation(cfg)
    ctx = VerifyContext(
        L,
        mode=cfg.mode,
        cap=args.cap,
        caps=tuple(args.caps) if args.caps else None,
        depth=args.depth,
        n=args.n,
        samples=cfg.samples,
        seed=cfg.seed,
    )
    results = run_check(args.check, ctx)
    passed = all(results)
    document = {
        "schema": SCHEMA,
        "check": args.check,
        "max_weight": L.max_weight,
        "passed": passed,
        "results": [r.to_json() for r in results],
    }
    return document, render.checks_table(f"verify {args.check}", results), EXIT_OK if passed else EXIT_FAILURE


def _specialization(L: LazardPresentation, which: str):
    if which == "additive":
        return additive_morphism(L)
    if which == "multiplicative":
        return multiplicative_morphism(L)
    path = Path(which)
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise FglCobordError(f"cannot read morphism {which!r}: {exc}") from exc
    return morphism_from_json(L, data)


def cmd_lbmul(args, cfg: RunConfig):
    if args.i + args.j > cfg.max_weight:
        raise DepthError(
            f"depth exhaustion: e_{args.i} * e_{args.j} needs weight {args.i + args.j}, "
            f"rerun with --max-weight {args.i + args.j}"
        )
    L = load_presentation(cfg)
    F = universal_table(L)
    cache = mishchenko_elements(L, F, L.max_weight, cfg.mode)
    name = "universal"
    if args.specialize:
        morphism = _specialization(L, args.specialize)
        F = specialize(L, F, morphism)
        cache = cache.specialize(morphism)
        name = morphism.name
    psi = build_psi(cache, L.max_weight)
    table = EpsilonTable(F, psi, cache)
    ring = cache.ring
    result = table.product(LBElement.basis(ring, args.i), LBElement.basis(ring, args.j))
    document = {
        "schema": SCHEMA,
        "max_weight": L.max_weight,
        "i": args.i,
        "j": args.j,
        "ring": str(ring),
        "specialization": name,
        "product": result.to_json(),
        "text": result.format(),
    }
    rows = [(f"e_{i}", ring.format(c)) for i, c in reversed(result.coords.items())]
    return document, render.rows_table(f"e_{args.i} * e_{args.j} ({name})", ("basis", "coefficient"), rows), EXIT_OK


def cmd_wpbf(args, cfg: RunConfig):
    L = load_presentation(cfg)
    R = ProjRing(L, (args.n,))
    text = _read_input(args, cfg)
    data = _as_json(text)
    if args.action == "compose":
        if isinstance(data, list):
            data = {"n": args.n, "alphas": data}
        if not isinstance(data, dict):
            raise FglCobordError("compose expects a JSON list of components or {\"n\", \"alphas\"}")
        d = WpbfDecomposition.from_json(L, data)
        series = proj_map(d, R)
        document = {"schema": SCHEMA, "n": args.n, "series": R.to_json(series), "text": series.format()}
        rows = [(f"t^{exp[0]}", L.format(c)) for exp, c in series.items()]
    else:
        if isinstance(data, list):
            raise FglCobordError("decompose expects a series JSON document or a polynomial in t")
        e = R.from_json(data) if isinstance(data, dict) else R.parse(data if isinstance(data, str) else text)
        F = universal_table(L)
        cache = mishchenko_elements(L, F, L.max_weight, cfg.mode)
        d = decompose(e, build_psi(cache, max(args.n, 0)), cache)
        document = {"schema": SCHEMA, **d.to_json(L)}
        rows = [(f"alpha_{a}", L.format(x)) for a, x in enumerate(d.alphas)]
    return document, render.rows_table(f"wpbf {args.action} n={args.n}", ("component", "value"), rows), EXIT_OK


COMMANDS = {
    "lazard": cmd_lazard,
    "verify": cmd_verify,
    "lbmul": cmd_lbmul,
    "wpbf": cmd_wpbf,
}


def emit(document: dict, renderable, cfg: RunConfig):
    if cfg.output_format == "table":
        text = render.render_text(renderable)
    else:
        text = json.dumps(document, indent=2) + "\n"
    if cfg.output_path is not None:
        cfg.output_path.write_text(text)
        logger.info(f"Wrote {cfg.output_path}")
    else:
        sys.stdout.write(text)


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.log_level or app_config.get("log_level"):
        set_level(args.log_level or app_config.get("log_level"))
    try:
        cfg = RunConfig.resolve(args)
        document, renderable, code = COMMANDS[args.command](args, cfg)
        emit(document, renderable, cfg)
        return code
    except IntegralityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except FglCobordError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_USAGE
