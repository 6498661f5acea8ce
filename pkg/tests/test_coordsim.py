import pytest

from distsky.core import Point, Skyline
from distsky.coordsim import (
    DuplicateContactError,
    ProtocolError,
    RoundLimitExceeded,
    run_protocol,
    word_cost,
)


def test_word_cost_points():
    pts = [Point(1, 0.0, 0.0), Point(2, 1.0, 1.0), Point(3, 2.0, 0.5)]
    assert word_cost(pts) == 6


def test_word_cost_half_point_pair():
    assert word_cost((7, 0.25)) == 2


def test_word_cost_request_with_indices_and_flag():
    assert word_cost((3, 5, "go")) == 3


def test_word_cost_empty_contact():
    assert word_cost(None) == 0
    assert word_cost(()) == 0


def test_word_cost_rejects_unknown_payloads():
    with pytest.raises(TypeError):
        word_cost(object())


class NoOpCoordinator:
    def requests(self):
        return None

    def receive(self, replies):
        raise AssertionError("never called")

    def result(self):
        return Skyline(())


class EchoSite:
    def __init__(self, value):
        self.value = value

    def respond(self, payload):
        return self.value


def test_noop_protocol():
    sky, transcript, report = run_protocol(NoOpCoordinator(), [EchoSite(1.0)], round_cap=10)
    assert len(sky) == 0
    assert report.rounds == 0
    assert report.total_words == 0
    assert report.total_messages == 0
    assert transcript.export() == ""


class OneRoundCoordinator:
    def __init__(self, reqs):
        self.reqs = reqs
        self.done = False
        self.seen = None

    def requests(self):
        if self.done:
            return None
        self.done = True
        return self.reqs

    def receive(self, replies):
        self.seen = replies

    def result(self):
        return Skyline(())


def test_duplicate_contact_is_engine_fault():
    coord = OneRoundCoordinator([(0, None), (0, None)])
    with pytest.raises(DuplicateContactError):
        run_protocol(coord, [EchoSite(1.0)], round_cap=10)


def test_empty_contact_set_is_engine_fault():
    coord = OneRoundCoordinator({})
    with pytest.raises(ProtocolError):
        run_protocol(coord, [EchoSite(1.0)], round_cap=10)


class LoopingCoordinator:
    def requests(self):
        return {0: None}

    def receive(self, replies):
        pass

    def result(self):
        return Skyline(())


def test_round_cap_aborts_runaway_protocols():
    with pytest.raises(RoundLimitExceeded):
        run_protocol(LoopingCoordinator(), [EchoSite(1.0)], round_cap=25)


class TwoRoundCoordinator:
    def __init__(self):
        self.round = 0

    def requests(self):
        if self.round == 2:
            return None
        return {0: (1, 2), 1: None} if self.round == 0 else {1: Point(9, 1.0, 2.0)}

    def receive(self, replies):
        self.round += 1

    def result(self):
        return Skyline(())


def test_transcript_export_format_and_accounting():
    sites = [EchoSite((1.5, 2.5)), EchoSite("empty")]
    sky, transcript, report = run_protocol(TwoRoundCoordinator(), sites, round_cap=10)
    assert transcript.export().splitlines() == [
        "1,down,0,2",
        "1,down,1,0",
        "1,up,0,2",
        "1,up,1,1",
        "2,down,1,2",
        "2,up,1,1",
    ]
    assert report.rounds == 2
    assert report.total_messages == 6
    assert report.total_words == 8
    # round structure: an up-message implies a down-message in the same round
    downs = {(m.round, m.site) for m in transcript.messages if m.direction == "down"}
    for m in transcript.messages:
        if m.direction == "up":
            assert (m.round, m.site) in downs


def test_transcripts_are_deterministic():
    runs = []
    for _ in range(2):
        _, transcript, _ = run_protocol(
            TwoRoundCoordinator(), [EchoSite((1.5, 2.5)), EchoSite("empty")], round_cap=10
        )
        runs.append(transcript.export())
    assert runs[0] == runs[1]


def test_recovered_points_counts_distinct_up_point_ids():
    class Coordinator:
        def __init__(self):
            self.round = 0

        def requests(self):
            if self.round == 2:
                return None
            return {0: None}

        def receive(self, replies):
            self.round += 1

        def result(self):
            return Skyline(())

    repeated = Point(4, 1.0, 1.0)
    _, _, report = run_protocol(Coordinator(), [EchoSite((repeated, Point(5, 2.0, 2.0)))], round_cap=10)
    assert report.recovered_points == 2
