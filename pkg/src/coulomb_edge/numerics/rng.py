"""Reproducible random streams and the samplers built on them.

Stream layout
-------------
``RngStream(master_seed, stream_id)`` is a Philox-4x64-10 counter-based
generator (Salmon et al., SC'11; numpy's ``np.random.Philox``) whose 128-bit
key is

    key = master_seed + 2**64 * stream_id

i.e. key word 0 is the master seed and key word 1 is the replica index, with
the counter starting at zero. No state is shared between streams, so replica
``i`` of an experiment draws the same numbers whatever the thread count or
execution order. Floating-point variates come from numpy's ``Generator``
(53-bit uniforms, ziggurat normals) on top of that bit stream.
"""

import numpy as np

from ..errors import ParameterError

_U64 = 1 << 64


class RngStream:
    """Single-owner random stream keyed by ``(master_seed, stream_id)``."""

    __slots__ = ("master_seed", "stream_id", "_gen")

    def __init__(self, master_seed, stream_id=0):
        master_seed = int(master_seed)
        stream_id = int(stream_id)
        if not (0 <= master_seed < _U64 and 0 <= stream_id < _U64):
            raise ParameterError("master_seed and stream_id must be unsigned 64-bit integers")
        self.master_seed = master_seed
        self.stream_id = stream_id
        self._gen = np.random.Generator(np.random.Philox(key=master_seed + _U64 * stream_id))

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    def raw(self, size=None):
        """Raw 64-bit outputs of the underlying counter-based generator."""
        return self._gen.bit_generator.random_raw(size)

    def uniform(self, size=None):
        """Uniform variates on (0, 1] (never exactly zero, so logs are safe)."""
        return 1.0 - self._gen.random(size)

    def normal(self, size=None):
        return self._gen.standard_normal(size)


def substream(master_seed, replica_id):
    return RngStream(master_seed, replica_id)


def _gamma_at_least_one(shape, rng):
    # Marsaglia & Tsang (2000) squeeze-free version, shape >= 1.
    d = shape - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty_like(shape)
    pending = np.arange(shape.size)
    while pending.size:
        z = rng.normal(pending.size)
        u = rng.uniform(pending.size)
        dp, cp = d[pending], c[pending]
        v = 1.0 + cp * z
        ok = v > 0.0
        v3 = np.where(ok, v * v * v, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ok &= np.log(u) < 0.5 * z * z + dp - dp * v3 + dp * np.log(v3)
        out[pending[ok]] = dp[ok] * v3[ok]
        pending = pending[~ok]
    return out


def sample_gamma(shape, rng, size=None):
    """Gamma(shape, 1) draws; ``shape`` may be an array (one draw per entry).

    Shapes below one are boosted: ``G(s) = G(s + 1) * U**(1/s)``, with the
    boost uniforms drawn after all Marsaglia-Tsang variates.
    """
    shape = np.asarray(shape, dtype=float)
    if size is not None:
        shape = np.broadcast_to(shape, size)
    if np.any(~(shape > 0)):
        raise ParameterError("gamma shape must be positive")
    flat = np.ascontiguousarray(shape).ravel()
    boost = flat < 1.0
    g = _gamma_at_least_one(np.where(boost, flat + 1.0, flat), rng)
    if np.any(boost):
        u = rng.uniform(int(boost.sum()))
        g[boost] = np.exp(np.log(g[boost]) + np.log(u) / flat[boost])
    return g.reshape(shape.shape)[()]


def sample_beta(a, b, rng, size=None):
    """Beta(a, b) as ``Ga / (Ga + Gb)``; all ``Ga`` draws precede the ``Gb`` draws."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if size is None:
        size = np.broadcast_shapes(a.shape, b.shape)
    ga = sample_gamma(np.broadcast_to(a, size), rng)
    gb = sample_gamma(np.broadcast_to(b, size), rng)
    return (ga / (ga + gb))[()]


def sample_gaussian(mean, sd, rng, size=None):
    if np.any(np.asarray(sd) < 0):
        raise ParameterError("sd must be non-negative")
    return (mean + sd * rng.normal(size))[()]
