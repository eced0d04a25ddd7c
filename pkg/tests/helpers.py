import math

import numpy as np

from atomcbs.angular import HalfInt
from atomcbs.kernels import ALL_CHANNELS, Channel
from atomcbs.transition import Transition

PHIS = (0.0, math.pi / 8, math.pi / 4, math.pi / 2)


def transitions_upto(twice_max):
    for tj in range(twice_max + 1):
        for dt in (2, 0, -2):
            if tj + dt < 0 or (tj == 0 and dt == 0):
                continue
            yield Transition(HalfInt(tj), HalfInt(tj + dt))


def channels_with_phi(phis=PHIS):
    for c in ALL_CHANNELS:
        if c.helicity:
            yield c
        else:
            for phi in phis:
                yield Channel(c.label, phi)


def random_cvec(rng):
    return rng.normal(size=3) + 1j * rng.normal(size=3)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_channel(rng):
    c = ALL_CHANNELS[int(rng.integers(4))]
    return Channel(c.label, float(rng.uniform(0, math.pi)))
