"""Seedable uniform [0,1) streams, splittable into disjoint substreams.

The generator is Philox4x64-10 keyed with (seed, stream_index): a counter
mode block cipher, so every substream owns a disjoint counter domain and
any position in a stream can be reached directly.  Draw i of a stream is
a pure function of (seed, stream_index, i), which is the whole
reproducibility story: no state handoff, no jump-ahead bookkeeping.

The 64-bit word at each position maps to a double as (word >> 11) * 2**-53,
the 53-bit mantissa construction on [0, 1).  This matches numpy's Philox
generator bit for bit, and the compiled kernel backend reimplements the
same cipher, so all backends emit identical sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend

U64_MAX = 2**64 - 1

_SCALAR_BUF = 256


@dataclass(frozen=True)
class StreamSpec:
    """Identity of one substream: (seed, stream_index) keys the generator."""

    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.seed <= U64_MAX:
            raise ValueError(f"seed must be in [0, 2**64), got {self.seed}")
        if not 0 <= self.stream_index <= U64_MAX:
            raise ValueError(
                f"stream_index must be in [0, 2**64), got {self.stream_index}")


class UnitStream:
    """Stateful cursor over the draws of one StreamSpec.

    ``position`` counts draws consumed so far; the sequence is a pure
    function of (spec, position), so two streams with equal spec stepped
    equally agree forever.
    """

    def __init__(self, spec: StreamSpec):
        self.spec = spec
        self._position = 0
        self._buf = None
        self._bufpos = 0

    @property
    def position(self) -> int:
        return self._position

    def next_unit(self) -> float:
        """Next draw in [0, 1); advances the stream by exactly one step."""
        if self._buf is None or self._bufpos >= self._buf.shape[0]:
            self._buf = backend.uniforms(
                self.spec.seed, self.spec.stream_index, self._position, _SCALAR_BUF)
            self._bufpos = 0
        value = float(self._buf[self._bufpos])
        self._bufpos += 1
        self._position += 1
        return value

    def take(self, count: int) -> np.ndarray:
        """Next ``count`` draws as a float64 array."""
        if count < 0:
            raise ValueError(f"count must be >= 0, got {count}")
        out = backend.uniforms(
            self.spec.seed, self.spec.stream_index, self._position, count)
        self._advance(count)
        return out

    def _advance(self, count: int):
        # used by fused kernels that consume this stream's draws directly
        self._position += count
        self._buf = None


def make_stream(seed: int, stream_index: int = 0) -> UnitStream:
    return UnitStream(StreamSpec(seed, stream_index))


def split(seed: int, k: int) -> list[StreamSpec]:
    """The first k substreams of a seed, stream_index 0..k-1; disjoint by construction."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return [StreamSpec(seed, i) for i in range(k)]
