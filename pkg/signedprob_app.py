#!/usr/bin/env python3
"""
Signed probability toolkit application

이 애플리케이션은 관측 공간을 검사하고 확장 문제를 풀며, 내장 시나리오와
Kochen-Specker 검사를 실행하는 명령줄 인터페이스(CLI)를 제공합니다.

Exit codes: 0 ok or feasible, 1 invalid input, 2 I/O or parse error,
3 no extension or no model.
"""

import argparse
import asyncio
import logging
import os
import sys
from typing import List, Optional

# 라이브러리 경로 추가
current_dir = os.path.dirname(os.path.abspath(__file__))
if current_dir not in sys.path:
    sys.path.insert(0, current_dir)

from signedprob import utils
from signedprob.frame import DEFAULT_AUTOMORPHISM_CAP
from signedprob.scenarios import SCENARIOS

import signedprob_app_handlers as handlers

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signedprob",
        description="Extension problems for observation spaces with signed probabilities")
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS,
                        help="logging level (default: WARNING)")
    parser.add_argument("--log-file", default=None, help="also write the log to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="validate an observation space file")
    check.add_argument("file")

    extend = commands.add_parser("extend", help="solve the extension problem")
    extend.add_argument("file")
    extend.add_argument("--mode", choices=handlers.MODES, default="signed")
    extend.add_argument("--json", action="store_true", help="print a JSON report")

    report = commands.add_parser("report", help="answer the whole extension problem of a space")
    source = report.add_mutually_exclusive_group(required=True)
    source.add_argument("file", nargs="?", default=None)
    source.add_argument("--scenario", default=None, help=f"built-in scenario, one of {', '.join(SCENARIOS)}")
    report.add_argument("--event", action="append", default=None,
                        help="comma separated outcome labels whose forced probability is wanted; repeatable")
    report.add_argument("--json", action="store_true", help="print a JSON report")

    scenario = commands.add_parser("scenario", help="print a built-in scenario as a space file")
    scenario.add_argument("name", help=f"one of {', '.join(SCENARIOS)}")
    scenario.add_argument("--angles", default=None, help="bell analyzer angles in units of pi/8, e.g. 0,2,3")

    symmetrize = commands.add_parser("symmetrize", help="average an extension over automorphisms")
    symmetrize.add_argument("space")
    symmetrize.add_argument("extension")
    group = symmetrize.add_mutually_exclusive_group(required=True)
    group.add_argument("--auto", action="store_true", help="use every automorphism")
    group.add_argument("--perm", action="append", default=None,
                       help='permutation in cycle notation, e.g. "(+++ ---)(++- --+)"; repeatable')
    symmetrize.add_argument("--cap", type=int, default=DEFAULT_AUTOMORPHISM_CAP,
                            help="largest sample space for --auto")

    ks = commands.add_parser("ks", help="check a basis system for Kochen-Specker selections")
    ks.add_argument("--file", default=None, help="basis system file (default: bundled 18-ray system)")
    ks.add_argument("--limit", type=positive_int, default=None, help="stop after this many selections")
    return parser


async def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 사용법 오류는 종료 코드 2
        return e.code if isinstance(e.code, int) else handlers.EXIT_IO

    utils.setup_logging(getattr(logging, args.log_level), args.log_file)

    if args.command == "check":
        return await handlers.handle_check(args.file)
    if args.command == "extend":
        return await handlers.handle_extend(args.file, args.mode, args.json)
    if args.command == "report":
        return await handlers.handle_report(args.file, args.scenario, args.event or (), args.json)
    if args.command == "scenario":
        return await handlers.handle_scenario(args.name, args.angles)
    if args.command == "symmetrize":
        return await handlers.handle_symmetrize(args.space, args.extension, args.auto,
                                                args.perm or (), args.cap)
    if args.command == "ks":
        return await handlers.handle_ks(args.file, args.limit)
    parser.error(f"unknown command {args.command}")
    return handlers.EXIT_IO


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
