"""
Words over the alphabet [n] = {1, ..., n} and the action of the cyclic group Z_k on
words of length k.

The generator of the action is the cyclic permutation R, which moves the last letter to
the front: R(i_1 ... i_{k-1} i_k) = i_k i_1 ... i_{k-1}. Every other module uses this one
convention. An orbit [u] is identified by its lexicographically minimal member, its
canonical representative.

Internally most of the package works directly with tuples of letters (Letters) rather
than Word objects, as Words are mostly needed at the API boundary where the alphabet
size has to be carried around and validated.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Iterator, Tuple

Letters = Tuple[int, ...]


@dataclasses.dataclass(frozen=True, order=True)
class Word:
    """
    A finite sequence of letters in [1, n]. The empty word (epsilon) is allowed. Words
    with the same n are ordered lexicographically.
    """

    n: int
    letters: Letters = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"Alphabet size must be positive, got {self.n}")
        for letter in self.letters:
            if not 1 <= letter <= self.n:
                raise ValueError(
                    f"Letter {letter} in {self.letters} is outside of [1, {self.n}]"
                )

    @classmethod
    def parse(cls, n: int, text: str) -> Word:
        """
        Convenience for n <= 9 where every letter is one digit, e.g. Word.parse(2, "121")
        """
        return cls(n, tuple(int(c) for c in text))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "ε"
        if self.n <= 9:
            return "".join(str(letter) for letter in self.letters)
        return ".".join(str(letter) for letter in self.letters)


@dataclasses.dataclass(frozen=True)
class Orbit:
    """
    The orbit [u] of a nonempty word under the Z_k action generated by R.

    members[g] = R^g(representative) for g = 0, ..., size - 1, so members[0] is the
    representative and the members are pairwise distinct. size * stabilizer_order is
    always the word length k.
    """

    representative: Word
    size: int
    stabilizer_order: int
    members: Tuple[Word, ...]

    def non_representatives(self) -> Tuple[Word, ...]:
        """[u] \\ {u}, in the order R(u), R^2(u), ..."""
        return self.members[1:]


def rotate_letters(letters: Letters, g: int) -> Letters:
    """R^g on a nonempty tuple of letters, g taken mod the length"""
    k = len(letters)
    g = g % k
    if g == 0:
        return letters
    return letters[k - g :] + letters[: k - g]


def rotate(w: Word, g: int) -> Word:
    """Returns R^g(w). R is only defined on nonempty words."""
    if not w.letters:
        raise ValueError("The cyclic permutation R is not defined on the empty word")
    return Word(w.n, rotate_letters(w.letters, g))


def period_of_letters(letters: Letters) -> int:
    k = len(letters)
    # the period always divides k, so only divisors need to be tried
    for p in range(1, k + 1):
        if k % p == 0 and letters[p:] + letters[:p] == letters:
            return p
    raise ValueError("Programming error: every word is fixed by the full rotation")


def period(w: Word) -> int:
    """
    The least p >= 1 such that R^p(w) = w. This is also the size of the orbit of w, and
    the length of the primitive root of w.
    """
    if not w.letters:
        raise ValueError("The period is not defined for the empty word")
    return period_of_letters(w.letters)


def primitive_root(w: Word) -> Tuple[Word, int]:
    """Returns (v, m) such that w = v^m and v is not a power of a shorter word"""
    p = period(w)
    return Word(w.n, w.letters[:p]), len(w) // p


def min_rotation_letters(letters: Letters) -> Letters:
    return min(rotate_letters(letters, g) for g in range(len(letters)))


def orbit_of(w: Word) -> Orbit:
    if not w.letters:
        raise ValueError("Orbits are only defined for nonempty words")

    p = period_of_letters(w.letters)
    representative = min_rotation_letters(w.letters)
    members = tuple(Word(w.n, rotate_letters(representative, g)) for g in range(p))
    return Orbit(Word(w.n, representative), p, len(w) // p, members)


def _check_n_k(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")


def necklace_count(n: int, k: int) -> int:
    """
    |[n]^k / Z_k|, by Burnside's lemma: the rotation R^g fixes exactly n^gcd(g, k)
    words, so the number of orbits is (1/k) * sum_{g=1..k} n^gcd(g, k)
    """
    _check_n_k(n, k)
    total = sum(n ** math.gcd(g, k) for g in range(1, k + 1))
    count, remainder = divmod(total, k)
    if remainder != 0:
        raise ValueError(
            f"Programming error: Burnside sum {total} is not divisible by {k}"
        )
    return count


def enumerate_orbit_reps_letters(n: int, k: int) -> Iterator[Letters]:
    """
    Generates the lex-minimal representative of every orbit of [n]^k in lexicographic
    order, using the Fredricksen-Kessler-Maiorana algorithm: walk through the
    prenecklaces in lexicographic order and keep the ones whose longest Lyndon prefix
    length divides k. Only the current word is held in memory.
    """
    _check_n_k(n, k)

    # a[1..k] over the alphabet 0..n-1, a[0] is unused
    a = [0] * (k + 1)
    p = 1
    while True:
        if k % p == 0:
            yield tuple(letter + 1 for letter in a[1:])

        # find the successor prenecklace
        i = k
        while i > 0 and a[i] == n - 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, k + 1):
            a[j] = a[j - i]
        p = i


def enumerate_orbit_reps(n: int, k: int) -> Iterator[Word]:
    for letters in enumerate_orbit_reps_letters(n, k):
        yield Word(n, letters)


def all_words_letters(n: int, k: int) -> Iterator[Letters]:
    """All of [n]^k in lexicographic order. k = 0 yields just the empty word."""
    return itertools.product(range(1, n + 1), repeat=k)


def all_words(n: int, k: int) -> Iterator[Word]:
    for letters in all_words_letters(n, k):
        yield Word(n, letters)


def count_orbits_brute_force(n: int, k: int) -> int:
    """
    Counts orbits by materializing every word in [n]^k and collecting the distinct
    lex-min rotations. Exponential in k, only used as a cross-check for necklace_count
    """
    _check_n_k(n, k)
    return len({min_rotation_letters(letters) for letters in all_words_letters(n, k)})
