"""Pending-event queue keyed by (time to fire, microstep).

Times are stored relative to "now": the head entry's time is the exact
amount by which the clock must advance before its events are delivered.
Relative storage keeps queues with identical futures structurally equal
regardless of how much absolute time has already passed, which is what
lets the state-graph construction close cycles.

Entries at the same (time, microstep) are merged into one batch.  Within
a batch, at most one event per target port is kept: scheduling a second
event for a port that already has one at the same tag replaces the old
value (a diagnostic is logged, since this usually means two sources race
on one port).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyQueue, NotAtMicrostepBoundary, NotReady
from .model import PortRef
from .util import format_rational, time_amount
from .values import Value, value_key

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Event:
    target: PortRef  # absolute path, pointing at an input port
    value: Value

    def sort_key(self):
        return (self.target.actor, self.target.port, value_key(self.value))


@dataclass(frozen=True)
class QueueEntry:
    time: Fraction  # relative to now; non-negative
    microstep: int
    events: tuple  # sorted Events, unique per target port

    def tag(self):
        return (self.time, self.microstep)


def _merge(events, new: Event, where: str):
    """Insert ``new`` into a batch, replacing any event for the same port."""
    kept = []
    for ev in events:
        if ev.target == new.target:
            log.warning(
                "replacing event for %r at %s: %r superseded by %r",
                ev.target,
                where,
                ev.value,
                new.value,
            )
        else:
            kept.append(ev)
    kept.append(new)
    return tuple(sorted(kept, key=Event.sort_key))


@dataclass(frozen=True)
class EventQueue:
    entries: tuple = ()  # QueueEntry, strictly increasing (time, microstep)

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple(sorted(self.entries, key=QueueEntry.tag))
        )

    def is_empty(self) -> bool:
        return not self.entries

    def head_tag(self):
        if not self.entries:
            raise EmptyQueue()
        return self.entries[0].tag()

    def add(self, time, microstep: int, event: Event) -> "EventQueue":
        """Schedule one event ``time`` from now at the given microstep."""
        time = time_amount(time)
        if microstep < 0:
            raise ValueError("microstep must be non-negative")
        where = f"({format_rational(time)}, {microstep})"
        entries = []
        placed = False
        for entry in self.entries:
            if entry.tag() == (time, microstep):
                entries.append(
                    QueueEntry(time, microstep, _merge(entry.events, event, where))
                )
                placed = True
            else:
                entries.append(entry)
        if not placed:
            entries.append(QueueEntry(time, microstep, (event,)))
        return EventQueue(tuple(entries))

    def advance_time(self, dt) -> "EventQueue":
        """Let ``dt`` time pass.  Must not skip past the head entry.

        Decrements every entry's time to fire.  Advancing by a positive
        amount is only allowed from a microstep boundary: if the head
        entry is at time zero with a positive microstep, the pending
        microsteps have to be consumed first.
        """
        dt = time_amount(dt)
        if dt == 0:
            return self
        if self.entries:
            head = self.entries[0]
            if head.time == 0 and head.microstep > 0:
                raise NotAtMicrostepBoundary(
                    f"cannot advance time across pending microstep {head.microstep}"
                )
            if dt > head.time:
                raise NotReady(
                    f"cannot advance by {format_rational(dt)}: next event fires in "
                    f"{format_rational(head.time)}"
                )
        entries = tuple(
            QueueEntry(e.time - dt, e.microstep, e.events) for e in self.entries
        )
        return EventQueue(entries)

    def advance_microstep(self) -> "EventQueue":
        """Jump to the head entry's microstep (head must be at time zero)."""
        if not self.entries:
            raise EmptyQueue()
        head = self.entries[0]
        if head.time != 0 or head.microstep == 0:
            raise NotReady(f"head entry is at {head.tag()}, not at a pending microstep")
        n = head.microstep
        entries = tuple(
            QueueEntry(e.time, e.microstep - n, e.events) if e.time == 0 else e
            for e in self.entries
        )
        return EventQueue(entries)

    def pop_ready(self):
        """Remove and return the events due now (head tag must be (0, 0))."""
        if not self.entries:
            raise EmptyQueue()
        head = self.entries[0]
        if head.tag() != (Fraction(0), 0):
            raise NotReady(f"head entry is at {head.tag()}, not due yet")
        return head.events, EventQueue(self.entries[1:])

    def summary(self):
        """[(time, microstep, event count), ...] for traces and debugging."""
        return [(e.time, e.microstep, len(e.events)) for e in self.entries]


EMPTY_QUEUE = EventQueue()
