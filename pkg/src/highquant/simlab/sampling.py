"""Seeded inverse-transform sampling.

Draws are ``X = q(E)`` with ``E = -log(V)`` standard exponential and ``V``
uniform on ``(0, 1]``.  ``V = 1 - u`` where ``u`` is a 53-bit double in
``[0, 1)`` from numpy's PCG64 bit generator, so ``V`` is never zero.

Per-replication streams come from ``numpy.random.SeedSequence`` with entropy
``(seed, model_index, n, replication)``; every replication can therefore be
regenerated on its own, in any order or process.
"""

from __future__ import annotations

import numpy as np

from ..models import TailModel

# bump when the draw procedure changes; part of the reproducibility contract
SAMPLER_VERSION = 1

__all__ = ["SAMPLER_VERSION", "replication_seed", "generator", "exponentials", "sample"]


def replication_seed(seed: int, model_index: int, n: int, replication: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([SAMPLER_VERSION, seed & (2**64 - 1), model_index, n, replication])


def generator(stream_seed) -> np.random.Generator:
    if not isinstance(stream_seed, np.random.SeedSequence):
        stream_seed = np.random.SeedSequence(int(stream_seed) & (2**64 - 1))
    return np.random.Generator(np.random.PCG64(stream_seed))


def exponentials(n: int, stream_seed) -> np.ndarray:
    """``n`` standard exponential draws ``-log(1 - u)``, ``u`` in ``[0, 1)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u = generator(stream_seed).random(n)
    return -np.log1p(-u)


def sample(model: TailModel, n: int, stream_seed) -> np.ndarray:
    """``n`` iid draws from ``model`` by inverse transform."""
    e = exponentials(n, stream_seed)
    q = model.q
    return np.fromiter((q(float(v)) for v in e), dtype=float, count=n)
