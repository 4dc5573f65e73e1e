"""Reversible edit records produced by every tamper pass.

A pass never mutates its input (everything is a frozen dataclass); it
returns the edited artifact plus a `TamperRecord` holding both versions
as canonical JSON text. Keeping text rather than objects makes records
trivially diffable and storable, and `restore()` round-trips exactly
because serialization is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from pulseguard.core import serialize
from pulseguard.core.errors import SchemaError


@dataclass(frozen=True, slots=True)
class TamperRecord:
    """What a tamper pass did, with enough state to undo it.

    Args:
        kind: pass identifier, e.g. "timing_mismatch".
        target: human-readable locus of the edit ("op 3 (coupling)",
            "d0 entry at t=160").
        before: canonical JSON of the artifact prior to the edit.
        after: canonical JSON of the edited artifact.
        params: pass-specific knobs, JSON-encodable plain values.
    """

    kind: str
    target: str
    before: str
    after: str
    params: dict[str, Any] = field(default_factory=dict)

    def restore(self) -> Any:
        """The artifact as it was before the edit."""
        return serialize.deserialize(self.before)

    def result(self) -> Any:
        """The artifact as the pass left it."""
        return serialize.deserialize(self.after)


def snapshot(artifact: Any) -> str:
    """Canonical JSON text of an artifact, for record fields."""
    return serialize.canonical_serialize(artifact).decode("utf-8")


def _decode_record(obj: dict, path: str) -> TamperRecord:
    for name in ("kind", "target", "before", "after"):
        if not isinstance(obj.get(name), str):
            raise SchemaError(f"{path}/{name}", f"expected a string, got {obj.get(name)!r}")
    params = serialize.decode(obj.get("params", {}), f"{path}/params")
    if not isinstance(params, dict):
        raise SchemaError(f"{path}/params", "expected a mapping")
    return TamperRecord(
        obj["kind"], obj["target"], obj["before"], obj["after"], params
    )


serialize.register(TamperRecord, "tamper_record", _decode_record)
