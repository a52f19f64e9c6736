"""Adaptive bisection questionnaire turning binary choices into intervals.

Each question offers a choice between a bet on an ambiguous event and an
objective lottery paying with probability q.  Choosing the bet reveals that
the respondent's matching probability for the event exceeds q; choosing the
lottery reveals the opposite.  Probing at the midpoint of the current bounds
halves the interval with every answer, so a depth-d session pins each of the
six events down to an interval of width exactly 2**-d.

To keep the incentive scheme credible the question selected for payout is
drawn before the first choice is recorded; only a digest of the session seed
is published at the start, and the seed itself is revealed at finalization so
the pre-commitment can be verified.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, TextIO

import numpy as np

from .core import EVENT_ORDER, EventPartition, moment_indices

COMMITMENT_VERSION = "elicitation-commitment:v1"


@dataclass(frozen=True)
class ChoiceRecord:
    """One answered question: the offered lottery probability and the choice."""

    session: str
    ordinal: int
    event: str
    q: float
    chose_bet: bool


@dataclass(frozen=True)
class MatchingInterval:
    """Elicited bounds on the matching probability of one event in one wave."""

    event: str
    wave: int | str
    lb: float
    ub: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lb <= self.ub <= 1.0):
            raise ValueError(f"invalid interval [{self.lb}, {self.ub}] for {self.event!r}")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lb + self.ub)

    @property
    def width(self) -> float:
        return self.ub - self.lb


@dataclass(frozen=True)
class PayoutResolution:
    """Outcome of the pre-committed payout question."""

    question: int
    event: str
    q: float
    chose_bet: bool
    outcome: str  # "lottery_won" | "lottery_lost" | "await_event_outcome"


@dataclass(frozen=True)
class SessionResult:
    intervals: tuple[MatchingInterval, ...]
    seed: int
    commitment: str
    payout: PayoutResolution
    records: tuple[ChoiceRecord, ...]


def commitment_digest(seed: int, respondent: str, wave: int | str, depth: int) -> str:
    """Digest binding the session seed to its identity, published at start."""
    payload = f"{COMMITMENT_VERSION}|seed={seed}|respondent={respondent}|wave={wave}|depth={depth}"
    return hashlib.sha256(payload.encode()).hexdigest()


class SessionError(RuntimeError):
    """Raised on out-of-order use of a session (finalize early, answer late)."""


@dataclass
class ElicitationSession:
    """Single-writer state machine of one respondent's questionnaire.

    Mutations must be externally serialized; distinct sessions are
    independent.  Construct via :func:`start_session`.
    """

    respondent: str
    wave: int | str
    partition: EventPartition
    depth: int
    seed: int
    schedule: tuple[str, ...]
    payout_index: int
    commitment: str
    _payout_uniform: float
    bounds: dict[str, list[float]]
    records: list[ChoiceRecord] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    finalized_at: float | None = None

    @property
    def session_id(self) -> str:
        return f"{self.respondent}:{self.wave}"

    @property
    def total_questions(self) -> int:
        return len(self.schedule)

    @property
    def answered(self) -> int:
        return len(self.records)

    @property
    def complete(self) -> bool:
        return self.answered == self.total_questions

    @property
    def status(self) -> str:
        return "complete" if self.complete else "in-progress"

    def next_question(self) -> tuple[str, float] | None:
        """The scheduled event and midpoint probe, or None when done."""
        if self.complete:
            return None
        event = self.schedule[self.answered]
        lb, ub = self.bounds[event]
        return event, 0.5 * (lb + ub)

    def record_choice(self, chose_bet: bool) -> None:
        """Apply one answer: bet raises the lower bound, lottery lowers the upper."""
        pending = self.next_question()
        if pending is None:
            raise SessionError("no outstanding question: session is complete")
        event, q = pending
        if chose_bet:
            self.bounds[event][0] = q
        else:
            self.bounds[event][1] = q
        self.records.append(
            ChoiceRecord(self.session_id, self.answered, event, q, bool(chose_bet))
        )

    def intervals(self) -> tuple[MatchingInterval, ...]:
        return tuple(
            MatchingInterval(e, self.wave, self.bounds[e][0], self.bounds[e][1])
            for e in EVENT_ORDER
        )

    def finalize(self) -> SessionResult:
        """Emit intervals, reveal the committed seed, resolve the payout question."""
        if not self.complete:
            raise SessionError(
                f"cannot finalize: {self.total_questions - self.answered} questions remain"
            )
        self.finalized_at = time.time()
        paid = self.records[self.payout_index]
        if paid.chose_bet:
            outcome = "await_event_outcome"
        else:
            outcome = "lottery_won" if self._payout_uniform < paid.q else "lottery_lost"
        payout = PayoutResolution(paid.ordinal, paid.event, paid.q, paid.chose_bet, outcome)
        return SessionResult(self.intervals(), self.seed, self.commitment, payout, tuple(self.records))


def start_session(
    partition: EventPartition,
    depth: int = 5,
    seed: int | None = None,
    respondent: str = "anonymous",
    wave: int | str = 1,
) -> ElicitationSession:
    """Create a session with shuffled schedule and pre-committed payout question.

    Equal seeds give identical schedules and payout draws.  The payout index
    and the uniform used to resolve a lottery payout are both drawn here,
    before any choice exists, so no sequence of answers can influence them.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if seed is None:
        seed = secrets.randbits(63)
    rng = np.random.default_rng(seed)
    flat = [event for event in EVENT_ORDER for _ in range(depth)]
    schedule = tuple(flat[i] for i in rng.permutation(len(flat)))
    payout_index = int(rng.integers(0, len(schedule)))
    payout_uniform = float(rng.random())
    return ElicitationSession(
        respondent=respondent,
        wave=wave,
        partition=partition,
        depth=depth,
        seed=seed,
        schedule=schedule,
        payout_index=payout_index,
        commitment=commitment_digest(seed, respondent, wave, depth),
        _payout_uniform=payout_uniform,
        bounds={event: [0.0, 1.0] for event in EVENT_ORDER},
    )


def run_session(
    session: ElicitationSession, responder: Callable[[str, float], bool]
) -> SessionResult:
    """Drive a session to completion with ``responder(event, q) -> chose_bet``."""
    while (pending := session.next_question()) is not None:
        event, q = pending
        session.record_choice(responder(event, q))
    return session.finalize()


# ---------------------------------------------------------------------------
# Transcript format: line-delimited JSON, one choice per line followed by one
# interval block per (respondent, wave).  The simulator emits the same format
# as live sessions, so downstream consumers cannot tell them apart.
# ---------------------------------------------------------------------------


def transcript_lines(respondent: str, result: SessionResult, wave: int | str) -> Iterator[str]:
    for rec in result.records:
        yield json.dumps(
            {
                "kind": "choice",
                "respondent": respondent,
                "wave": wave,
                "ordinal": rec.ordinal,
                "event": rec.event,
                "q": rec.q,
                "chose_bet": rec.chose_bet,
            },
            sort_keys=True,
        )
    yield json.dumps(
        {
            "kind": "intervals",
            "respondent": respondent,
            "wave": wave,
            "intervals": [
                {"event": iv.event, "lb": iv.lb, "ub": iv.ub} for iv in result.intervals
            ],
        },
        sort_keys=True,
    )


def write_transcript(fp: TextIO, respondent: str, result: SessionResult, wave: int | str) -> None:
    for line in transcript_lines(respondent, result, wave):
        fp.write(line + "\n")


def read_intervals(lines: Iterable[str]) -> dict[str, list[MatchingInterval]]:
    """Collect the interval blocks of a transcript, keyed by respondent."""
    out: dict[str, list[MatchingInterval]] = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        if rec.get("kind") != "intervals":
            continue
        ivs = out.setdefault(rec["respondent"], [])
        for item in rec["intervals"]:
            ivs.append(MatchingInterval(item["event"], rec["wave"], item["lb"], item["ub"]))
    return out


def interval_midpoints(intervals: Iterable[MatchingInterval]) -> dict[str, float]:
    """Midpoints keyed by event; a quick moment-estimation input for one wave."""
    return {iv.event: iv.midpoint for iv in intervals}


def midpoint_indices(intervals: Iterable[MatchingInterval]) -> tuple[float, float]:
    """Moment indices computed on interval midpoints of one wave."""
    return moment_indices(interval_midpoints(intervals))
