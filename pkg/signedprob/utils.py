"""
Utility module for the signed probability toolkit.

This module provides logging setup and the cycle notation used to write
outcome permutations on the command line.
"""

import logging
import re
from typing import List, Optional, Sequence

from signedprob.frame import Permutation, check_permutation
from signedprob.space import SampleSpace

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
MAX_MESSAGE_LENGTH = 500


class LongMessageFilter(logging.Filter):
    """Shorten tableau and matrix dumps and long tracebacks."""

    def filter(self, record):
        if hasattr(record, 'msg') and record.msg is not None:
            if not isinstance(record.msg, str):
                try:
                    msg_str = str(record.msg)
                except Exception:
                    msg_str = "[변환 불가능한 메시지]"
            else:
                msg_str = record.msg
            if record.args:
                try:
                    msg_str = msg_str % record.args
                    record.args = None
                except (TypeError, ValueError):
                    pass

            # 너무 긴 메시지는 앞부분만 유지
            if len(msg_str) > MAX_MESSAGE_LENGTH:
                msg_str = f"{msg_str[:200]}... [{len(msg_str)}자 중 일부만 표시]"
            record.msg = msg_str

            if record.exc_info:
                exception_text = logging.Formatter().formatException(record.exc_info)
                if len(exception_text) > MAX_MESSAGE_LENGTH:
                    record.exc_text = f"{exception_text[:200]}... [상세 예외 정보 생략됨]"
                    record.exc_info = None
        return True


def setup_logging(level: int = logging.WARNING, log_file: Optional[str] = None) -> None:
    """
    Set up logging on the root logger.

    Console output goes to stderr so that JSON printed on stdout stays
    machine readable.

    Args:
        level: The logging level to use
        log_file: Optional path of an additional log file
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # 기존 핸들러 모두 제거
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT)
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    console_handler.addFilter(LongMessageFilter())
    root_logger.addHandler(console_handler)

    if log_file:
        try:
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            file_handler.addFilter(LongMessageFilter())
            root_logger.addHandler(file_handler)
        except (IOError, PermissionError):
            # 파일을 열 수 없는 경우 경고만 출력
            logging.warning(f"로그 파일 {log_file} 을(를) 생성할 수 없습니다. 콘솔 로깅만 활성화됩니다.")

    logger.info("로깅 시스템이 초기화되었습니다.")


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, space: SampleSpace) -> Permutation:
    """
    Parse a permutation of outcomes written as cycles of labels.

    "(+++ ---)(++- --+)" swaps +++ with --- and ++- with --+; outcomes in
    no cycle are fixed. "()" is the identity.

    Args:
        text: Cycles of whitespace or comma separated labels
        space: The sample space the labels belong to

    Returns:
        The permutation as an image tuple over outcome indices

    Raises:
        ValueError: On unknown labels, a label used twice or stray text
    """
    stripped = _CYCLE.sub("", text)
    if stripped.strip():
        raise ValueError(f"unexpected text {stripped.strip()!r} outside cycles in {text!r}")
    image = list(range(space.size))
    used = set()
    for body in _CYCLE.findall(text):
        labels = [label for label in re.split(r"[\s,]+", body.strip()) if label]
        indices = []
        for label in labels:
            try:
                index = space.index(label)
            except KeyError as e:
                raise ValueError(str(e.args[0])) from None
            if index in used:
                raise ValueError(f"outcome {label!r} appears in more than one place in {text!r}")
            used.add(index)
            indices.append(index)
        for position, index in enumerate(indices):
            image[index] = indices[(position + 1) % len(indices)]
    return check_permutation(image, space.size)


def format_cycles(perm: Sequence[int], space: SampleSpace) -> str:
    """Write a permutation as cycles of labels, fixed points omitted; "()" for the identity."""
    perm = check_permutation(perm, space.size)
    seen = set()
    cycles: List[str] = []
    for start in range(space.size):
        if start in seen or perm[start] == start:
            continue
        cycle = []
        current = start
        while current not in seen:
            seen.add(current)
            cycle.append(space.labels[current])
            current = perm[current]
        cycles.append("(" + " ".join(cycle) + ")")
    return "".join(cycles) or "()"
