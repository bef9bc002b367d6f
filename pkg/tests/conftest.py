"""Shared test configuration.

Hypothesis runs derandomized so the suite is reproducible run to run;
statistical tests all use fixed seeds for the same reason.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


class ScriptedStream:
    """Duck-typed stand-in for UnitStream that replays fixed values."""

    def __init__(self, values):
        self._values = list(values)
        self._pos = 0

    @property
    def position(self):
        return self._pos

    def next_unit(self):
        value = self._values[self._pos]
        self._pos += 1
        return value
