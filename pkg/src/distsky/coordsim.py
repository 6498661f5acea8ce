"""Deterministic simulation of the coordinator model.

s sites with private state talk to one coordinator in synchronized rounds:
the coordinator sends a down-message to some of the sites, each contacted
site sends one up-message back.  The engine charges every payload under a
word cost model (one word per scalar, two per point) and records the full
message log.

Site logics are driven one site at a time in ascending site order; because
sites share no state, this produces the same transcript any concurrent
schedule would, and the canonical (round, direction, site) assembly order
makes transcripts byte-reproducible.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any, Mapping, Protocol, Sequence

from .core import Point, Skyline

__all__ = [
    "DOWN",
    "UP",
    "Message",
    "Transcript",
    "CostReport",
    "ProtocolError",
    "DuplicateContactError",
    "RoundLimitExceeded",
    "word_cost",
    "run_protocol",
]

DOWN = "down"
UP = "up"


class ProtocolError(RuntimeError):
    """A protocol logic violated the engine's contract."""


class DuplicateContactError(ProtocolError):
    """The coordinator contacted the same site twice in one round."""


class RoundLimitExceeded(ProtocolError):
    """The hard round cap was hit; the protocol is probably not terminating."""


@dataclass(frozen=True, slots=True)
class Message:
    round: int
    direction: str
    site: int
    payload_words: int
    payload: Any


@dataclass
class Transcript:
    messages: list[Message]
    rounds_used: int

    def export(self) -> str:
        """Delimited text, one `round,direction,site,payload_words` line per message."""
        return "".join(
            f"{m.round},{m.direction},{m.site},{m.payload_words}\n" for m in self.messages
        )

    def words(self, direction: str | None = None) -> int:
        return sum(m.payload_words for m in self.messages if direction in (None, m.direction))

    def up_points(self) -> set[int]:
        """Distinct ids of Point payloads that travelled site -> coordinator."""
        ids: set[int] = set()
        for m in self.messages:
            if m.direction == UP:
                _collect_point_ids(m.payload, ids)
        return ids


def _collect_point_ids(payload: Any, out: set[int]) -> None:
    if isinstance(payload, Point):
        out.add(payload.id)
    elif isinstance(payload, (list, tuple)):
        for item in payload:
            _collect_point_ids(item, out)


@dataclass(frozen=True)
class CostReport:
    """Aggregated run metrics.

    total_words counts both directions; the model never states whether the
    coordinator's request words are free, so we charge them and report the
    sum.  Timings cover protocol logic only (site/coordinator construction,
    i.e. local skyline computation and sorting, is excluded).
    """

    total_words: int
    total_messages: int
    rounds: int
    recovered_points: int
    coordinator_time: float
    max_site_time: float


def word_cost(payload: Any) -> int:
    """Words charged for a payload.

    Scalars, ids, indices and flags cost 1 word; a Point costs 2 (x and y,
    id implied by context); sequences cost the sum of their parts; None is
    an empty contact and costs nothing.
    """
    if payload is None:
        return 0
    if isinstance(payload, Point):
        return 2
    if isinstance(payload, (int, float, str)):
        return 1
    if isinstance(payload, (list, tuple)):
        return sum(word_cost(item) for item in payload)
    raise TypeError(f"payload type {type(payload).__name__} has no word cost")


class SiteLogic(Protocol):
    def respond(self, payload: Any) -> Any: ...


class CoordinatorLogic(Protocol):
    def requests(self) -> Mapping[int, Any] | Sequence[tuple[int, Any]] | None: ...

    def receive(self, replies: dict[int, Any]) -> None: ...

    def result(self) -> Skyline: ...


def _as_contact_dict(reqs: Mapping[int, Any] | Sequence[tuple[int, Any]], n_sites: int) -> dict[int, Any]:
    if isinstance(reqs, Mapping):
        contacts = dict(reqs)
    else:
        contacts = {}
        for site, payload in reqs:
            if site in contacts:
                raise DuplicateContactError(f"site {site} contacted twice in one round")
            contacts[site] = payload
    if not contacts:
        raise ProtocolError("a round must contact at least one site (return None to finish)")
    for site in contacts:
        if not 0 <= site < n_sites:
            raise ProtocolError(f"site index {site} out of range [0, {n_sites})")
    return contacts


def run_protocol(
    coordinator: CoordinatorLogic,
    sites: Sequence[SiteLogic],
    *,
    round_cap: int,
) -> tuple[Skyline, Transcript, CostReport]:
    """Drive a coordinator/site protocol to completion.

    Rounds run until coordinator.requests() returns None; round_cap aborts
    runaway protocols (callers typically pass 10 * n).
    """
    messages: list[Message] = []
    site_time = [0.0] * len(sites)
    coord_time = 0.0
    rounds = 0
    while True:
        t0 = time.perf_counter()
        reqs = coordinator.requests()
        coord_time += time.perf_counter() - t0
        if reqs is None:
            break
        rounds += 1
        if rounds > round_cap:
            raise RoundLimitExceeded(f"exceeded round cap {round_cap}")
        contacts = _as_contact_dict(reqs, len(sites))
        replies: dict[int, Any] = {}
        for site in sorted(contacts):
            payload = contacts[site]
            messages.append(Message(rounds, DOWN, site, word_cost(payload), payload))
        for site in sorted(contacts):
            t0 = time.perf_counter()
            answer = sites[site].respond(contacts[site])
            site_time[site] += time.perf_counter() - t0
            replies[site] = answer
            messages.append(Message(rounds, UP, site, word_cost(answer), answer))
        t0 = time.perf_counter()
        coordinator.receive(replies)
        coord_time += time.perf_counter() - t0
    result = coordinator.result()
    transcript = Transcript(messages, rounds)
    recovered = getattr(coordinator, "recovered_count", None)
    report = CostReport(
        total_words=transcript.words(),
        total_messages=len(messages),
        rounds=rounds,
        recovered_points=recovered() if callable(recovered) else len(transcript.up_points()),
        coordinator_time=coord_time,
        max_site_time=max(site_time, default=0.0),
    )
    return result, transcript, report
