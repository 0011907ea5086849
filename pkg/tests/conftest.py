import math

import numpy as np
import pytest
from hypothesis import settings

from mindiam.geometry import ConvexPolygon

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SUMMARY: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in SUMMARY:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def unit_square(x=0.0, y=0.0):
    return ConvexPolygon.box(x, y, x + 1, y + 1)


def rotated_unit_square(center, theta):
    r = 1 / math.sqrt(2)
    return ConvexPolygon(
        tuple(
            (round(center[0] + r * math.cos(theta + k * math.pi / 2), 12),
             round(center[1] + r * math.sin(theta + k * math.pi / 2), 12))
            for k in range(4)
        )
    )


def pinwheel_squares():
    """Three unit squares that meet pairwise but share no common point."""
    out = []
    for a in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3):
        out.append(rotated_unit_square((0.6 * math.cos(a), 0.6 * math.sin(a)), math.pi / 6 + a))
    return tuple(out)
