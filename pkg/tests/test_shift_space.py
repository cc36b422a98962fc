import itertools

import numpy as np
import pytest

from gibbslab.errors import NoPath, NotPrimitive, RowColumnEmpty, SizeGuard, ValidationError
from gibbslab.shift_space import (
    canonical_extension,
    connecting_word,
    enumerate_words,
    recode,
    validate,
    word_count,
)

FULL2 = validate(2, [[1, 1], [1, 1]], symbols=(1, 2))
GOLDEN = validate(2, [[1, 1], [1, 0]], symbols=(0, 1))


def brute_force_mixing_time(A, limit=60):
    A = np.asarray(A)
    P = np.eye(A.shape[0], dtype=np.int64)
    for m in range(1, limit + 1):
        P = (P @ A > 0).astype(np.int64)
        if P.all():
            return m
    return None


def test_full_shift_mixing_time():
    assert FULL2.mixing_time == 1


def test_golden_mixing_time_matches_brute_force():
    assert GOLDEN.mixing_time == 2
    assert brute_force_mixing_time([[1, 1], [1, 0]]) == 2


def test_identity_matrix_rejected():
    with pytest.raises(NotPrimitive):
        validate(2, [[1, 0], [0, 1]])


def test_zero_row_rejected():
    with pytest.raises(RowColumnEmpty):
        validate(2, [[0, 0], [1, 1]])
    with pytest.raises(RowColumnEmpty):
        validate(2, [[1, 0], [1, 0]])


def test_bad_entries_rejected():
    with pytest.raises(ValidationError):
        validate(2, [[1, 2], [1, 1]])
    with pytest.raises(ValidationError):
        validate(3, [[1, 1], [1, 1]])


def test_random_primitive_matrices_match_brute_force():
    rng = np.random.default_rng(7)
    seen = 0
    while seen < 25:
        n = int(rng.integers(2, 5))
        A = (rng.random((n, n)) < 0.55).astype(int)
        try:
            space = validate(n, A)
        except (RowColumnEmpty, NotPrimitive):
            continue
        seen += 1
        assert space.mixing_time == brute_force_mixing_time(A)
        assert space.mixing_time <= (n - 1) ** 2 + 1


def test_enumerate_full_shift():
    words = enumerate_words(FULL2, 3)
    assert len(words) == 8
    assert words == sorted(words)
    assert words[0] == (1, 1, 1)


def test_enumerate_golden_counts_against_filter_oracle():
    # oracle: all {0,1}^n tuples without adjacent 1s
    for n in range(1, 9):
        oracle = [
            w
            for w in itertools.product((0, 1), repeat=n)
            if not any(w[i] == 1 and w[i + 1] == 1 for i in range(n - 1))
        ]
        assert enumerate_words(GOLDEN, n) == oracle
    assert len(enumerate_words(GOLDEN, 3)) == 5
    assert len(enumerate_words(GOLDEN, 1)) == 2


def test_word_count_identity():
    for space in (FULL2, GOLDEN):
        for n in range(1, 13):
            assert len(enumerate_words(space, n)) == word_count(space, n)


def test_enumeration_cap(monkeypatch):
    with pytest.raises(SizeGuard):
        enumerate_words(FULL2, 4, cap=10)
    monkeypatch.setenv("GIBBSLAB_ENUM_CAP", "10")
    with pytest.raises(SizeGuard):
        enumerate_words(FULL2, 4)
    monkeypatch.setenv("GIBBSLAB_ENUM_CAP", "1000000")
    assert len(enumerate_words(FULL2, 4)) == 16


def test_connecting_word_examples():
    assert connecting_word(FULL2, 1, 2, 1) == (1,)
    assert connecting_word(GOLDEN, 1, 1, 2) == (1, 0)
    with pytest.raises(NoPath):
        connecting_word(GOLDEN, 1, 1, 1)


def test_connecting_word_properties():
    for space in (FULL2, GOLDEN):
        for i in space.symbols:
            for j in space.symbols:
                for m in range(space.mixing_time, 7):
                    w = connecting_word(space, i, j, m)
                    assert len(w) == m
                    assert w[0] == i
                    assert space.is_admissible(w + (j,))


def test_canonical_extension_examples():
    assert canonical_extension(GOLDEN, (1,), 3) == (1, 0, 0, 0)
    assert canonical_extension(FULL2, (2,), 2) == (2, 1, 1)
    assert canonical_extension(GOLDEN, (0, 1), 2) == (0, 1, 0, 0)
    with pytest.raises(ValidationError):
        canonical_extension(GOLDEN, (1, 1), 1)


def test_recode_identity():
    assert recode(GOLDEN, 1) is GOLDEN


def test_recode_golden_two_blocks():
    # oracle: states are admissible 2-words; transitions are admissible
    # 3-words (overlap rule), of which the golden mean shift has 5
    r = recode(GOLDEN, 2)
    assert r.symbols == ((0, 0), (0, 1), (1, 0))
    assert int(r.transitions.sum()) == len(enumerate_words(GOLDEN, 3)) == 5
    assert r.mixing_time == brute_force_mixing_time(r.transitions)


def test_recode_full_shift_two_blocks():
    r = recode(FULL2, 2)
    assert len(r.symbols) == 4
    assert int(r.transitions.sum()) == 8


def test_recode_word_count_correspondence():
    # j-words of the l-block presentation are (j + l - 1)-words downstairs
    for space in (FULL2, GOLDEN):
        for ell in (2, 3):
            r = recode(space, ell)
            for j in range(1, 8):
                assert word_count(r, j) == word_count(space, j + ell - 1)


def test_successors_sorted():
    assert GOLDEN.successors(0) == (0, 1)
    assert GOLDEN.successors(1) == (0,)
