"""Brute-force reference implementations of the DE update steps.

Each sums the probability of every input tuple through the scalar kernels,
so they share nothing with the vectorised code under test.
"""

import itertools

import numpy as np

from faidlab.decoder import cnu, vnu


def cnu_oracle(q, d_c):
    s = (len(q) - 1) // 2
    out = np.zeros(len(q))
    for tup in itertools.product(range(-s, s + 1), repeat=d_c - 1):
        out[cnu(tup) + s] += np.prod([q[v + s] for v in tup])
    return out


def vnu_oracle(r, chan, lut):
    s, B = lut.alphabet.s, lut.alphabet.B
    out = np.zeros(len(r))
    for y in (-B, B):
        for tup in itertools.product(range(-s, s + 1), repeat=lut.arity):
            out[vnu(lut, tup, y) + s] += chan[y + s] * np.prod([r[v + s] for v in tup])
    return out


def app_oracle(r, chan, d_v, B, s_prime):
    s = (len(r) - 1) // 2
    out = np.zeros(2 * s_prime + 1)
    for y in (-B, B):
        for tup in itertools.product(range(-s, s + 1), repeat=d_v):
            out[sum(tup) + y + s_prime] += chan[y + s] * np.prod([r[v + s] for v in tup])
    return out


def random_pmf(rng, size):
    # mix of dense and sparse supports
    w = rng.exponential(size=size)
    if rng.random() < 0.3:
        w[rng.random(size) < 0.5] = 0.0
        if not w.any():
            w[rng.integers(size)] = 1.0
    return w / w.sum()
