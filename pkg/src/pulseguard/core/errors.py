"""Exception types shared across the package."""


class PulseError(ValueError):
    """Invalid pulse-level value (channel, waveform, instruction, schedule)."""


class CalibrationError(ValueError):
    """Invalid or incomplete calibration data."""


class SchemaError(ValueError):
    """A document failed schema validation during deserialization.

    Attributes:
        path: location of the offending node, as a slash-joined string
            (e.g. "ops/3/waveform/amp").
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class LoweringError(ValueError):
    """Gate-to-pulse compilation failed (unknown gate, missing template)."""


class BindingError(LoweringError):
    """A custom gate's channel binding violates the active mode's rules."""


class OverlapError(LoweringError):
    """Two occupying instructions claim the same channel interval."""


class SimulationError(RuntimeError):
    """Schedule content the simulator cannot interpret in the selected mode."""


class AttackError(ValueError):
    """A tamper pass was asked to do something it cannot express."""


class StoreError(RuntimeError):
    """Trusted-store failure (missing record, integrity mismatch)."""


class QuarantineError(StoreError):
    """A stored record failed its integrity recheck and was quarantined."""
