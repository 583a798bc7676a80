import random

import pytest

from qduet.tonal import NoteWindow, current_parameter, similarity

TWELFTHS = {q / 12 for q in range(12)}


# ---------------------------------------------------------------- window

def test_push_onto_empty_window():
    w = NoteWindow()
    w.push(60)
    assert w.notes == (60,)


def test_push_beyond_capacity_evicts_oldest():
    w = NoteWindow(capacity=8)
    for note in range(60, 69):
        w.push(note)
    assert len(w) == 8
    assert w.notes == tuple(range(61, 69))


def test_push_preserves_order():
    w = NoteWindow()
    for note in (64, 60, 67):
        w.push(note)
    assert w.notes == (64, 60, 67)


def test_push_rejects_invalid_note():
    w = NoteWindow()
    with pytest.raises(ValueError):
        w.push(128)


def test_average_of_constant_window():
    w = NoteWindow()
    for _ in range(8):
        w.push(60)
    assert w.average() == 60.0


def test_average_of_two_notes():
    w = NoteWindow()
    w.push(60)
    w.push(62)
    assert w.average() == 61.0


def test_average_of_empty_window_is_absent():
    assert NoteWindow().average() is None


# ---------------------------------------------------------------- similarity

def test_identical_averages_give_zero():
    assert similarity(60, 60) == 0.0


def test_tritone_gap_gives_half():
    assert similarity(60, 66) == 0.5


def test_seven_semitone_gap():
    assert similarity(60, 67) == pytest.approx(7 / 12)


def test_octave_gap_wraps_to_zero():
    assert similarity(60, 72) == 0.0


def test_fractional_gap_rounds_half_up():
    assert similarity(60, 66.5) == pytest.approx(7 / 12)
    assert similarity(60, 66.4) == 0.5


def test_near_octave_gap_rounds_to_wrap():
    assert similarity(60, 71.6) == 0.0
    assert similarity(60.0, 71.5) == 0.0  # 11.5 rounds up to 12, wraps


def test_similarity_is_quantized_to_twelfths():
    rng = random.Random(8)
    for _ in range(10_000):
        a = rng.uniform(0, 127)
        b = rng.uniform(0, 127)
        assert similarity(a, b) in TWELFTHS


def test_similarity_is_symmetric():
    rng = random.Random(9)
    for _ in range(10_000):
        a = rng.uniform(0, 127)
        b = rng.uniform(0, 127)
        assert similarity(a, b) == similarity(b, a)


def test_widening_the_gap_by_an_octave_is_invariant():
    # gap and gap+12 land on the same parameter (octave equivalence)
    rng = random.Random(10)
    for _ in range(10_000):
        a = rng.uniform(0, 115)
        b = rng.uniform(0, 115)
        low, high = min(a, b), max(a, b)
        assert similarity(low, high) == similarity(low, high + 12)


def test_transposing_both_players_is_invariant():
    rng = random.Random(11)
    for _ in range(10_000):
        a = rng.uniform(0, 115)
        b = rng.uniform(0, 115)
        assert similarity(a, b) == pytest.approx(similarity(a + 12, b + 12))


# ---------------------------------------------------------------- parameter

def test_parameter_defaults_to_zero_when_empty():
    assert current_parameter(NoteWindow(), NoteWindow()) == 0.0
    half_empty = NoteWindow()
    half_empty.push(60)
    assert current_parameter(half_empty, NoteWindow()) == 0.0


def test_parameter_of_unison_windows():
    a, b = NoteWindow(), NoteWindow()
    for _ in range(8):
        a.push(60)
        b.push(60)
    assert current_parameter(a, b) == 0.0


def test_parameter_of_tritone_windows():
    a, b = NoteWindow(), NoteWindow()
    for _ in range(8):
        a.push(60)
        b.push(66)
    assert current_parameter(a, b) == 0.5


def test_parameter_depends_only_on_last_eight_notes():
    a, b = NoteWindow(), NoteWindow()
    for _ in range(20):
        a.push(20)  # flushed out below
    for _ in range(8):
        a.push(60)
        b.push(66)
    assert current_parameter(a, b) == 0.5
