"""Deterministic seed expansion.

A user seed s expands to per-task seeds with splitmix64: task k of stream
``name`` gets splitmix64(s ^ h(name) + k * golden), and that 64-bit value
seeds a numpy Generator.  Results therefore depend only on (seed, name, k),
never on scheduling order.
"""

import zlib

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x):
    x = (x + GOLDEN) & MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK
    return x ^ (x >> 31)


def task_seed(seed, name, k=0):
    if seed < 0:
        raise ValueError("seed must be an unsigned integer")
    base = (int(seed) ^ zlib.crc32(name.encode())) & MASK
    return splitmix64((base + k * GOLDEN) & MASK)


def task_rng(seed, name, k=0):
    return np.random.default_rng(task_seed(seed, name, k))
