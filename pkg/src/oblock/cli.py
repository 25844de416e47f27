"""``oblock`` command line.

Exit status: 0 on success, 1 when a computation or validation fails (including
elements outside the block and corrupt caches), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, report
from .block import BlockDescriptor, make_block
from .coxeter import WeylElem, all_subsets, cartan_type, parse_word
from .errors import CacheError, GroupTooLargeError, NotInBlockError, OblockError
from .kl import kl_table
from .oracles import verify_block

COMMANDS = ("group", "kl", "verma", "projective", "tilting", "hazi", "rigidity", "verify")
CACHE_ENV = "OBLOCK_CACHE_DIR"


class UsageError(Exception):
    pass


def default_cache_dir() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "oblock"


@dataclass
class CliConfig:
    command: str
    block: BlockDescriptor
    x: WeylElem | None
    y: WeylElem | None
    fmt: str
    cache_dir: Path | None
    all: bool
    verify: bool
    reverse: bool

    @property
    def cache_path(self) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"kl-{self.block.group.label}.json"


def _parse_walls(text: str, rank: int) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        walls = [int(w) for w in text.replace("*", ",").split(",")]
    except ValueError:
        raise UsageError(f"bad --walls {text!r}; expected a comma list of simple indices") from None
    bad = [w for w in walls if not 1 <= w <= rank]
    if bad:
        raise UsageError(f"--walls index {bad[0]} out of range 1..{rank}")
    return walls


def _parse_elem(b: BlockDescriptor, text: str | None, flag: str) -> WeylElem | None:
    if text is None:
        return None
    try:
        letters = parse_word(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None
    bad = [i for i in letters if not 1 <= i <= b.group.rank]
    if bad:
        raise UsageError(f"{flag}: simple index {bad[0]} out of range 1..{b.group.rank}")
    return b.group.word(letters)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oblock",
                                description="Graded Verma, projective and tilting data for blocks of category O.")
    p.add_argument("--version", action="version", version=f"oblock {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "group": "group order, w0 and the coset representatives X",
        "kl": "one KL polynomial (--x, --y) or the whole table",
        "verma": "grading layers of a Verma module",
        "projective": "graded Verma flag of a projective",
        "tilting": "flag, character and Loewy length of tilting modules",
        "hazi": "grading filtration of a tilting module by layer balancing, with step trace",
        "rigidity": "rigidity conditions for one x or the whole block",
        "verify": "run the invariant suite; nonzero exit on any failure",
    }
    for name in COMMANDS:
        s = sub.add_parser(name, help=helps[name])
        s.add_argument("--type", required=True, help="Cartan type, e.g. A3, G2, A1xA1")
        s.add_argument("--walls", default="", help="comma list of simple indices fixing the weight")
        s.add_argument("--format", default="json", choices=("json", "md", "tex"))
        s.add_argument("--cache-dir", default=None, help=f"KL cache directory (default ${CACHE_ENV} or ~/.cache/oblock)")
        s.add_argument("--no-cache", action="store_true", help="neither read nor write the KL cache")
        if name in ("kl", "verma", "projective", "tilting", "hazi", "rigidity"):
            s.add_argument("--x", default=None, help="element as a word, e.g. 1,2,1")
        if name == "kl":
            s.add_argument("--y", default=None, help="second element for a single polynomial")
        if name in ("tilting", "rigidity", "verify"):
            s.add_argument("--all", action="store_true",
                           help="every x in the block" if name != "verify" else "every wall subset of the type")
        if name in ("tilting", "rigidity"):
            s.add_argument("--fast", action="store_true", help="skip the translation-route cross-check")
        if name == "hazi":
            s.add_argument("--reverse", action="store_true", help="reverse ShortLex tie-break")
    return p


def parse_config(args: argparse.Namespace) -> CliConfig:
    try:
        cartan = cartan_type(args.type)
        walls = _parse_walls(args.walls, cartan.rank)
        b = make_block(cartan, walls)
    except GroupTooLargeError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cache_dir = None if args.no_cache else Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    cfg = CliConfig(
        command=args.command, block=b,
        x=_parse_elem(b, getattr(args, "x", None), "--x"),
        y=_parse_elem(b, getattr(args, "y", None), "--y"),
        fmt=args.format, cache_dir=cache_dir,
        all=getattr(args, "all", False), verify=not getattr(args, "fast", False),
        reverse=getattr(args, "reverse", False),
    )
    needs_x = {"verma", "projective", "hazi"}
    if cfg.command in needs_x and cfg.x is None:
        raise UsageError(f"{cfg.command} needs --x")
    if cfg.command in ("tilting", "rigidity") and cfg.x is None and not cfg.all:
        raise UsageError(f"{cfg.command} needs --x or --all")
    if cfg.command == "kl" and (cfg.x is None) != (cfg.y is None):
        raise UsageError("kl needs both --x and --y, or neither for the whole table")
    return cfg


def execute(cfg: CliConfig) -> tuple[dict, int]:
    b = cfg.block
    if cfg.command == "group":
        return report.payload_group(b), 0
    if cfg.command == "kl" and cfg.x is None:
        return report.payload_kl_table(b, cfg.cache_path), 0
    if cfg.cache_path is not None:
        kl_table(b.group, cfg.cache_path)
    if cfg.command == "kl":
        return report.payload_kl(b, cfg.x, cfg.y), 0
    if cfg.command == "verma":
        return report.payload_verma(b, cfg.x), 0
    if cfg.command == "projective":
        return report.payload_projective(b, cfg.x), 0
    if cfg.command == "hazi":
        return report.payload_hazi(b, cfg.x, cfg.reverse), 0
    xs = list(b) if cfg.all else [cfg.x]
    if cfg.command == "tilting":
        return report.payload_tilting(b, xs, cfg.verify), 0
    if cfg.command == "rigidity":
        return report.payload_rigidity(b, xs, cfg.verify), 0
    blocks = [make_block(b.group, S) for S in all_subsets(b.group.rank)] if cfg.all else [b]
    reports = [verify_block(blk, group_checks=(blk is blocks[0])) for blk in blocks]
    doc = report.payload_verify(reports)
    return doc, 0 if doc["passed"] else 1


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = parse_config(args)
    except UsageError as exc:
        parser.print_usage(err)
        print(f"oblock: error: {exc}", file=err)
        return 2
    except OblockError as exc:
        print(f"oblock: error: {exc}", file=err)
        return 1
    try:
        doc, status = execute(cfg)
    except NotInBlockError as exc:
        print(f"oblock: error: {exc}", file=err)
        return 1
    except CacheError as exc:
        print(f"oblock: error: {exc} (remove {exc.path} to rebuild it)", file=err)
        return 1
    except OblockError as exc:
        print(f"oblock: computation failed: {exc}", file=err)
        return 1
    print(report.render(doc, cfg.fmt), file=out)
    return status


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="oblock: %(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
