"""
Shared fixtures for the signed probability toolkit tests.
"""

import asyncio
import os
import random
import sys

import pytest

# 저장소 루트를 경로에 추가
root_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if root_dir not in sys.path:
    sys.path.insert(0, root_dir)

from signedprob import fileio, scenarios  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def piponi():
    return scenarios.piponi()


@pytest.fixture
def bell():
    return scenarios.bell()


@pytest.fixture
def hardy():
    return scenarios.hardy()


@pytest.fixture
def hardy_hidden():
    return scenarios.hardy_hidden()


@pytest.fixture
def bundled_system():
    return asyncio.run(fileio.load_basis_file())
