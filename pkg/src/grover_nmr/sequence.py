"""Pulse-program data model and its line-oriented text format.

One event per line::

    rf 1,2 +x 3.141592653589793
    evolve 1/4J
    grad

Events run in file order (earliest first).  A leading ``# <label>`` line
carries the sequence label; other ``#`` lines and blank lines are ignored.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError

__all__ = ["PulseEvent", "PulseSequence", "rf", "evolve", "grad", "format_sequence", "parse_sequence"]

AXES = ("+x", "-x", "+y", "-y")


@dataclass(frozen=True)
class PulseEvent:
    """An rf rotation, a free-evolution delay (in units of 1/J), or a z-gradient."""

    kind: str
    spins: tuple[int, ...] = ()
    axis: str = ""
    angle: float = 0.0
    duration: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind == "rf":
            if not self.spins or any(s not in (1, 2) for s in self.spins) or len(set(self.spins)) != len(self.spins):
                raise ValidationError(f"rf pulse spins must be a non-empty subset of {{1, 2}}, got {self.spins}")
            if self.axis not in AXES:
                raise ValidationError(f"rf axis must be one of {AXES}, got {self.axis!r}")
            if self.angle != self.angle or abs(self.angle) == float("inf"):
                raise ValidationError("rf angle must be finite")
        elif self.kind == "evolve":
            if self.duration < 0:
                raise ValidationError(f"evolution time must be >= 0, got {self.duration}")
        elif self.kind != "grad":
            raise ValidationError(f"unknown event kind {self.kind!r}")

    def inverse(self) -> "PulseEvent":
        """The event undoing this one; only rf rotations can be inverted."""
        if self.kind == "rf":
            return PulseEvent("rf", self.spins, self.axis, -self.angle)
        if self.kind == "evolve" and self.duration == 0:
            return self
        raise ValidationError(f"cannot invert a {self.kind} event")

    def to_line(self) -> str:
        if self.kind == "rf":
            return f"rf {','.join(map(str, self.spins))} {self.axis} {self.angle!r}"
        if self.kind == "evolve":
            d = self.duration
            return f"evolve {d.numerator}/{d.denominator}J"
        return "grad"


def rf(spins: int | Iterable[int], axis: str, angle: float) -> PulseEvent:
    """Hard pulse ``[angle]_axis`` on one or both spins; ``axis`` may omit the sign."""
    spins = (spins,) if isinstance(spins, int) else tuple(spins)
    if axis in ("x", "y"):
        axis = "+" + axis
    return PulseEvent("rf", tuple(sorted(spins)), axis, float(angle))


def evolve(duration) -> PulseEvent:
    """Free evolution for ``duration / J`` seconds."""
    return PulseEvent("evolve", duration=Fraction(duration))


def grad() -> PulseEvent:
    return PulseEvent("grad")


@dataclass(frozen=True)
class PulseSequence:
    events: tuple[PulseEvent, ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __iter__(self) -> Iterator[PulseEvent]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        label = " | ".join(x for x in (self.label, other.label) if x)
        return PulseSequence(self.events + other.events, label)

    def inverse(self) -> "PulseSequence":
        """Reversed order with every event inverted."""
        label = f"({self.label})^-1" if self.label else ""
        return PulseSequence(tuple(e.inverse() for e in reversed(self.events)), label)

    def to_text(self) -> str:
        return format_sequence(self)


def format_sequence(seq: PulseSequence) -> str:
    lines = [f"# {seq.label}"] if seq.label else []
    lines.extend(e.to_line() for e in seq.events)
    return "\n".join(lines) + "\n"


def _parse_line(line: str, lineno: int) -> PulseEvent:
    parts = line.split()
    try:
        if parts[0] == "rf" and len(parts) == 4:
            return rf([int(s) for s in parts[1].split(",")], parts[2], float(parts[3]))
        if parts[0] == "evolve" and len(parts) == 2 and parts[1].endswith("J"):
            return evolve(Fraction(parts[1][:-1]))
        if parts == ["grad"]:
            return grad()
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"line {lineno}: {exc}") from exc
    raise ValidationError(f"line {lineno}: cannot parse {line!r}")


def parse_sequence(text: str) -> PulseSequence:
    label = ""
    events = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not events and not label:
                label = line[1:].strip()
            continue
        events.append(_parse_line(line, lineno))
    return PulseSequence(tuple(events), label)
