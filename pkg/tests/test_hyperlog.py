import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvelog import (
    DomainError,
    HyperlogValue,
    PoleSet,
    ShuffleTensor,
    eval_L,
    eval_batch,
    is_admissible,
    loop_around,
    mzv,
    regularize,
    word_for_exponents,
    zero_label,
)

from oracles import LI2_HALF, LOG2, ZETA2, ZETA3, li2, li3, zeta

PS = PoleSet.of("0,1")


def test_zero_label_lookup():
    assert zero_label(PS) == "0"
    assert zero_label(PoleSet.of("1,0,2")) == "0"
    with pytest.raises(DomainError):
        zero_label(PoleSet.of("1,2"))


def test_admissibility():
    assert is_admissible(("1", "0"), PS)
    assert is_admissible((), PS)
    assert not is_admissible(("0", "1"), PS)


def test_regularize_trivial_cases():
    r = regularize(("1",), PS)
    assert r.parts == ((0, ShuffleTensor.from_word(("1",))),)
    assert r.max_log_power == 0
    r = regularize(("0",), PS)
    assert r.by_power == {1: ShuffleTensor.unit()}


def test_regularize_example():
    r = regularize(("0", "1"), PS)
    assert r.tensor(1) == ShuffleTensor.from_word(("1",))
    assert r.tensor(0) == ShuffleTensor.from_word(("1", "0"), -1)
    assert r.max_log_power == 1
    assert r.tensor(5).is_zero


def test_regularize_double_zero():
    r = regularize(("0", "0", "1"), PS)
    assert r.tensor(2) == ShuffleTensor.from_word(("1",), coeff="1/2")
    # every tensor in the split must be free of leading zeros
    for _, t in r.parts:
        for w in t.support():
            assert not w or w[0] != "0"


words01 = st.lists(st.sampled_from(["0", "1"]), max_size=4).map(tuple)


@given(words01)
def test_regularize_reassembles(word):
    assert regularize(word, PS).reassemble(PS) == ShuffleTensor.from_word(word)


def test_eval_log(tight):
    v = eval_L(("0",), 0.3, PS, cfg=tight)
    assert isinstance(v, HyperlogValue)
    assert v.path_class == "principal"
    assert abs(v.value - cmath.log(0.3)) < 1e-10
    assert abs(complex(v) - v.value) == 0.0
    # heading up-left from the reference point, the planned detour around the
    # origin bulges to the left of travel, i.e. below it, so the continued
    # logarithm lands one full turn under the principal branch
    v = eval_L(("0",), -0.4 + 0.1j, PS, cfg=tight)
    assert abs(v.value - (cmath.log(-0.4 + 0.1j) - 2j * math.pi)) < 1e-9


def test_eval_log_one_minus_z(tight):
    v = eval_L(("1",), 0.3, PS, cfg=tight)
    assert abs(v.value - math.log(0.7)) < 1e-10


def test_eval_dilog(tight):
    v = eval_L(("1", "0"), 0.5, PS, cfg=tight)
    assert abs(v.value - (-LI2_HALF)) < 1e-9
    z = 0.35 - 0.2j
    v = eval_L(("1", "0"), z, PS, cfg=tight)
    assert abs(v.value - (-li2(z))) < 1e-9


def test_eval_weight_three(tight):
    z = 0.45
    v = eval_L(("1", "0", "0"), z, PS, cfg=tight)
    assert abs(v.value - (-li3(z))) < 1e-9


def test_eval_divergent_word_uses_log_split(tight):
    # the word (0,1) carries one power of log z
    z = 0.3
    v = eval_L(("0", "1"), z, PS, cfg=tight)
    want = cmath.log(z) * math.log(1 - z) - (-li2(z))
    assert abs(v.value - want) < 1e-9


def test_eval_batch_matches_eval_L(tight):
    words = [("0",), ("1", "0")]
    pts = [0.3, 0.45 + 0.2j]
    rows = eval_batch(words, pts, PS, cfg=tight)
    assert len(rows) == 2
    for z, row in zip(pts, rows):
        for w in words:
            single = eval_L(w, z, PS, cfg=tight)
            assert abs(row[w] - single.value) < 1e-9


def test_eval_at_origin_rejected():
    with pytest.raises(DomainError):
        eval_L(("1",), 0.0, PS)
    with pytest.raises(DomainError):
        eval_batch([("1",)], [0.0], PS)


def test_shuffle_law_at_a_point(tight):
    z = 0.3
    rows = eval_batch([("0",), ("1",), ("0", "1"), ("1", "0")], [z], PS,
                      cfg=tight)
    row = rows[0]
    lhs = row[("0",)] * row[("1",)]
    rhs = row[("0", "1")] + row[("1", "0")]
    assert abs(lhs - rhs) < 1e-9


def test_loop_continuation_shifts_log(tight):
    z = 0.3
    lp = loop_around(PS, "0", z)
    v = eval_L(("0",), z, PS, cfg=tight, loop=lp)
    assert v.path_class == "principal*ccw(0)"
    assert abs(v.value - (cmath.log(z) + 2j * math.pi)) < 1e-9
    with pytest.raises(DomainError):
        eval_L(("0",), 0.6, PS, loop=lp)  # loop based elsewhere


def test_mzv_weight_two():
    assert abs(mzv(("1", "0")) - (-ZETA2)) < 1e-10
    assert abs(mzv(("1", "0")) - (-zeta(2))) < 1e-10


def test_mzv_weight_three():
    assert abs(mzv(("1", "0", "0")) - (-ZETA3)) < 1e-10
    # the depth-two sum zeta(2,1) collapses to zeta(3)
    assert abs(mzv(("1", "1", "0")) - ZETA3) < 1e-10


def test_mzv_weight_four():
    # zeta(4) = pi^4 / 90
    want = math.pi ** 4 / 90.0
    assert abs(mzv(("1", "0", "0", "0")) - (-want)) < 1e-9


def test_mzv_edge_cases():
    assert mzv(()) == 1.0
    with pytest.raises(DomainError):
        mzv(("1", "1"))
    with pytest.raises(DomainError):
        mzv(("2", "0"))


def test_word_for_exponents():
    assert word_for_exponents((2,)) == ("1", "0")
    assert word_for_exponents((3,)) == ("1", "0", "0")
    assert word_for_exponents((2, 1)) == ("1", "1", "0")
    assert word_for_exponents([3, 2]) == ("1", "0", "1", "0", "0")
    with pytest.raises(DomainError):
        word_for_exponents(())
    with pytest.raises(DomainError):
        word_for_exponents((0,))


def test_mzv_against_exponent_encoding():
    # depth one: mzv gives (-1)^1 * zeta(k)
    for k, ref in ((2, ZETA2), (3, ZETA3)):
        got = mzv(word_for_exponents((k,)))
        assert abs(got + ref) < 1e-10


def test_mzv_shuffle_relation():
    # zeta(2)^2 expands through the shuffle of (1,0) with itself:
    # [10] sh [10] = 2[1010] + 4[1100]
    z2 = mzv(("1", "0"))
    lhs = z2 * z2
    rhs = 2 * mzv(("1", "0", "1", "0")) + 4 * mzv(("1", "1", "0", "0"))
    assert abs(lhs - rhs) < 1e-9


def test_log2_via_hyperlog(tight):
    # L at the point 1/2 for the single letter 1 is log(1/2)
    v = eval_L(("1",), 0.5, PS, cfg=tight)
    assert abs(v.value + LOG2) < 1e-10
