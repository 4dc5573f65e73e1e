"""Device and template channel identities.

A channel is (kind, index). Drive/measure/acquire channels are indexed by
qubit; control channels are indexed by the ordinal of a directed coupling
pair, resolved against either the device coupling map or a custom gate's
declared pair list. The short label mirrors common hardware naming:
"d0", "u1", "m0", "a2".
"""

from __future__ import annotations

from dataclasses import dataclass

from pulseguard.core.errors import PulseError

CHANNEL_KINDS = ("drive", "control", "measure", "acquire")

_PREFIX = {"drive": "d", "control": "u", "measure": "m", "acquire": "a"}
_KIND_OF_PREFIX = {v: k for k, v in _PREFIX.items()}
# Frame instructions sort ahead of occupying ones at equal (start, channel),
# and channel ordering itself follows this kind order.
_KIND_ORDER = {kind: i for i, kind in enumerate(CHANNEL_KINDS)}


@dataclass(frozen=True, slots=True)
class Channel:
    """One addressable control line.

    Args:
        kind: one of "drive", "control", "measure", "acquire".
        index: qubit index, or coupling-pair ordinal for control channels.
    """

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise PulseError(f"unknown channel kind {self.kind!r}")
        if not isinstance(self.index, int) or isinstance(self.index, bool):
            raise PulseError(f"channel index must be an int, got {self.index!r}")
        if self.index < 0:
            raise PulseError(f"channel index must be >= 0, got {self.index}")

    @property
    def label(self) -> str:
        return f"{_PREFIX[self.kind]}{self.index}"

    def sort_key(self) -> tuple[int, int]:
        return (_KIND_ORDER[self.kind], self.index)

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, label: str) -> "Channel":
        """Inverse of .label ("u3" -> Channel("control", 3))."""
        if not label or label[0] not in _KIND_OF_PREFIX:
            raise PulseError(f"cannot parse channel label {label!r}")
        try:
            index = int(label[1:])
        except ValueError:
            raise PulseError(f"cannot parse channel label {label!r}") from None
        return cls(_KIND_OF_PREFIX[label[0]], index)


def drive(qubit: int) -> Channel:
    return Channel("drive", qubit)


def control(pair_ordinal: int) -> Channel:
    return Channel("control", pair_ordinal)


def measure(qubit: int) -> Channel:
    return Channel("measure", qubit)


def acquire(qubit: int) -> Channel:
    return Channel("acquire", qubit)
