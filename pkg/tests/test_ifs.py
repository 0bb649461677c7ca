import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wavewalk as ww
from wavewalk.ifs import DigitWord, PathSystem, frac


def test_frac_edges():
    assert frac(0.3) == pytest.approx(0.3)
    assert frac(-0.3) == pytest.approx(0.7)
    assert frac(1.0) == 0.0
    assert frac(-1e-20) == 0.0


def test_shift_examples():
    s2, s3 = PathSystem(2), PathSystem(3)
    assert s2.shift(0.3) == pytest.approx(0.6)
    assert s2.shift(0.75) == pytest.approx(0.5)
    assert s3.shift(0.9) == pytest.approx(0.7, abs=1e-14)


def test_branch_examples():
    assert PathSystem(2).branch(1, 0.0) == 0.5
    assert PathSystem(2).branch(0, 0.5) == 0.25
    assert PathSystem(4).branch(3, 0.2) == pytest.approx(0.8)
    with pytest.raises(ww.DigitOutOfRange):
        PathSystem(2).branch(2, 0.1)
    with pytest.raises(ww.DigitOutOfRange):
        PathSystem(2).branch(-1, 0.1)


def test_digits_of():
    s2, s3 = PathSystem(2), PathSystem(3)
    assert s2.digits_of(6).digits == (0, 1, 1)
    assert s2.digits_of(0).digits == ()
    assert s3.digits_of(5).digits == (2, 1)


def test_word_of_int_negative():
    s2 = PathSystem(2)
    assert s2.word_of_int(-1).digits == (1,)
    assert s2.word_of_int(-3).digits == (1, 0, 1)
    assert s2.word_of_int(4).digits == (0, 0, 1)


def test_word_of_int_negative_shape():
    # length n+1 with most significant digit N-1
    s3 = PathSystem(3)
    for k in range(-40, 0):
        w = s3.word_of_int(k)
        n = 0
        while 3**n < -k:
            n += 1
        assert len(w) == n + 1
        assert w.digits[-1] == 2


@given(k=st.integers(min_value=0, max_value=10**6), n=st.sampled_from([2, 3, 4]))
@settings(max_examples=200)
def test_digit_round_trip(k, n):
    sys_n = PathSystem(n)
    assert sys_n.word_to_int(sys_n.digits_of(k)) == k


def test_round_trip_exhaustive_small():
    for n in (2, 3, 4):
        sys_n = PathSystem(n)
        for k in range(2000):
            assert sys_n.word_to_int(sys_n.digits_of(k)) == k


@given(
    n=st.sampled_from([2, 3, 4]),
    j=st.integers(min_value=0, max_value=3),
    x=st.floats(min_value=0, max_value=1, exclude_max=True, allow_nan=False),
)
@settings(max_examples=200)
def test_shift_inverts_branch(n, j, x):
    sys_n = PathSystem(n)
    if j >= n:
        return
    d = abs(sys_n.shift(sys_n.branch(j, x)) - frac(x))
    assert min(d, 1.0 - d) < 1e-12


@given(
    n=st.sampled_from([2, 3]),
    digits=st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=10),
    x=st.floats(min_value=0, max_value=1, exclude_max=True, allow_nan=False),
)
@settings(max_examples=200)
def test_word_application_bridge(n, digits, x):
    # branch(i_n) o ... o branch(i_1) lands at (x + int(word)) / N**len
    sys_n = PathSystem(n)
    word = DigitWord(tuple(digits))
    direct = sys_n.apply_word(word, x)
    closed = (x + sys_n.word_to_int(word)) / n ** len(word)
    assert direct == pytest.approx(closed, abs=1e-15)


def test_apply_word_examples(system2):
    assert system2.apply_word(DigitWord((1,)), 0.0) == 0.5
    assert system2.apply_word(DigitWord((1, 1)), 0.0) == pytest.approx(0.75)
    assert system2.apply_word(DigitWord((0, 1)), 0.5) == pytest.approx(0.625)


def test_word_interval_examples(system2):
    assert system2.word_interval(DigitWord((1,))) == (0.5, 1.0)
    lo, hi = system2.word_interval(DigitWord((0, 1)))
    assert (lo, hi) == (pytest.approx(0.25), pytest.approx(0.5))
    lo, hi = PathSystem(3).word_interval(DigitWord((2, 0)))
    assert lo == pytest.approx(2 / 3)
    assert hi == pytest.approx(2 / 3 + 1 / 9)
    with pytest.raises(ww.EmptyWord):
        system2.word_interval(DigitWord(()))


def test_intervals_disjoint_unless_equal(system2):
    words = [DigitWord((a, b, c)) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    for w1 in words:
        for w2 in words:
            a = system2.word_interval(w1)
            b = system2.word_interval(w2)
            if w1 == w2:
                assert a == b
            else:
                assert a[1] <= b[0] or b[1] <= a[0]


@given(
    digits=st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=8),
    j=st.integers(min_value=0, max_value=1),
)
@settings(max_examples=100)
def test_interval_nesting(digits, j):
    system2 = PathSystem(2)
    w = DigitWord(tuple(digits))
    outer = system2.word_interval(w)
    inner = system2.word_interval(w.extended(j))
    assert outer[0] <= inner[0] and inner[1] <= outer[1] + 1e-15


def test_word_json_order(system2):
    # least significant digit first, matching the expansion order
    assert system2.digits_of(6).to_json() == [0, 1, 1]


def test_scale_validation():
    with pytest.raises(ValueError):
        PathSystem(1)
