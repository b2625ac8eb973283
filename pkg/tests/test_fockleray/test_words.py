import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockleray.words import (
    Word,
    all_words,
    count_orbits_brute_force,
    enumerate_orbit_reps,
    min_rotation_letters,
    necklace_count,
    orbit_of,
    period,
    primitive_root,
    rotate,
)


def _w(text: str, n: int = 3) -> Word:
    return Word.parse(n, text)


def test_rotate():
    assert rotate(_w("123"), 1) == _w("312")
    assert rotate(_w("12", 2), 2) == _w("12", 2)
    assert rotate(_w("1212", 2), 1) == _w("2121", 2)
    assert rotate(_w("1212", 2), 2) == _w("1212", 2)
    assert rotate(_w("123"), -1) == _w("231")

    with pytest.raises(ValueError):
        rotate(Word(2), 1)


words_strategy = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.integers(1, n), min_size=1, max_size=8).map(
        lambda letters: Word(n, tuple(letters))
    )
)


@given(words_strategy, st.integers(-20, 20), st.integers(-20, 20))
def test_rotate_composes(w: Word, a: int, b: int):
    assert rotate(rotate(w, a), b) == rotate(w, a + b)
    assert rotate(w, len(w)) == w


@given(words_strategy)
def test_orbit_stabilizer(w: Word):
    orbit = orbit_of(w)
    assert orbit.size * orbit.stabilizer_order == len(w)
    assert orbit.size == period(w)
    assert len(set(orbit.members)) == orbit.size
    assert all(orbit.representative <= member for member in orbit.members)
    # closed under R
    assert {rotate(member, 1) for member in orbit.members} == set(orbit.members)
    assert w in orbit.members


def test_orbit_of_examples():
    orbit = orbit_of(_w("112", 2))
    assert orbit.representative == _w("112", 2)
    assert set(orbit.members) == {_w("112", 2), _w("211", 2), _w("121", 2)}
    assert (orbit.size, orbit.stabilizer_order) == (3, 1)
    assert orbit.non_representatives() == (_w("211", 2), _w("121", 2))

    orbit = orbit_of(_w("1111", 2))
    assert orbit.members == (_w("1111", 2),)
    assert (orbit.size, orbit.stabilizer_order) == (1, 4)

    orbit = orbit_of(_w("2121", 2))
    assert orbit.representative == _w("1212", 2)
    assert (orbit.size, orbit.stabilizer_order) == (2, 2)

    with pytest.raises(ValueError):
        orbit_of(Word(2))


def test_primitive_root():
    assert primitive_root(_w("121212", 2)) == (_w("12", 2), 3)
    assert primitive_root(_w("112", 2)) == (_w("112", 2), 1)


def test_word_validation():
    with pytest.raises(ValueError):
        Word(2, (1, 3))
    with pytest.raises(ValueError):
        Word(0)
    assert str(Word(2)) == "ε"
    assert str(Word(12, (1, 11))) == "1.11"


def test_necklace_count():
    assert necklace_count(2, 3) == 4
    assert necklace_count(2, 6) == 14
    assert necklace_count(5, 1) == 5
    assert necklace_count(3, 3) == 11

    with pytest.raises(ValueError):
        necklace_count(2, 0)
    with pytest.raises(ValueError):
        necklace_count(0, 2)


def test_necklace_count_matches_brute_force():
    for n in range(1, 5):
        for k in range(1, 8):
            assert necklace_count(n, k) == count_orbits_brute_force(n, k), (n, k)


def test_enumerate_orbit_reps():
    assert [str(w) for w in enumerate_orbit_reps(2, 3)] == ["111", "112", "122", "222"]
    assert [str(w) for w in enumerate_orbit_reps(2, 2)] == ["11", "12", "22"]
    assert [str(w) for w in enumerate_orbit_reps(1, 5)] == ["11111"]


def test_enumerate_orbit_reps_against_filter():
    for n in range(1, 4):
        for k in range(1, 7):
            reps = [w.letters for w in enumerate_orbit_reps(n, k)]
            expected = sorted(
                w.letters
                for w in all_words(n, k)
                if min_rotation_letters(w.letters) == w.letters
            )
            assert reps == expected, (n, k)
            assert len(reps) == necklace_count(n, k)
