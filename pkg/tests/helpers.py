"""Shared generators for the test suite."""

import numpy as np

from antiqmc.net import DigitalNet, GeneratingMatrix


def random_net(rng, b, s, m, max_rows=4, continuation=None):
    """Random matrices with 0..max_rows explicit rows; continuation drawn when asked."""
    mats = []
    for _ in range(s):
        R = int(rng.integers(0, max_rows + 1))
        rows = rng.integers(0, b, size=(R, m))
        cont = None
        if continuation or (continuation is None and rng.random() < 0.3):
            cont = rng.integers(0, b, size=m)
        mats.append(GeneratingMatrix(b, rows, cont))
    return DigitalNet(mats)
