import numpy as np
import pytest
from hypothesis import given, strategies as st

from branchlab.predictors.hashing import (folded_xor, folded_xor_array, four_hybrid12,
                                          four_hybrid12_array, hash7shift, hash_array,
                                          jenkins32, wang3shift, wang4shift)

# frozen outputs from an independent pure-Python transcription
ORACLE = {
    0: (0xcaa3caa3, 0xc0a9496a, 0x6b4ed927, 0x0, 0x5d0e0fb8),
    1: (0x12d60bf6, 0x27922c9d, 0xb48681b6, 0xc2b73583, 0x841d9bec),
    0xdeadbeef: (0x92da7565, 0x572e7c2d, 0x7ff0eada, 0x217a06c4, 0xf76ea39f),
    0xffffffff: (0xbd55fc18, 0x70f499d3, 0xfe64c182, 0xd5866458, 0x1109aa4e),
}


@pytest.mark.parametrize("x", sorted(ORACLE))
def test_frozen_values(x):
    w4, w3, jk, h7, hy = ORACLE[x]
    assert (wang4shift(x), wang3shift(x), jenkins32(x), hash7shift(x)) == (w4, w3, jk, h7)
    assert four_hybrid12(x, 1 << 32) == hy
    assert four_hybrid12(x, 256) == hy & 255


def test_folded_xor_examples():
    assert folded_xor(0x123456789ABCDEF0, 16) == 0
    assert folded_xor(0xFFFF0000FFFF0000, 16) == 0
    assert folded_xor(0x1234, 16) == 0x1234
    assert folded_xor(0xFF00, 8) == 0xFF
    with pytest.raises(ValueError):
        folded_xor(1, 12)


def segment_oracle(x, width):
    acc = 0
    for k in range(64 // width):
        acc ^= (x >> (k * width)) & ((1 << width) - 1)
    return acc


@given(st.integers(0, (1 << 64) - 1), st.sampled_from([8, 16, 32]))
def test_folded_xor_matches_segment_oracle(x, width):
    assert folded_xor(x, width) == segment_oracle(x, width)


def test_array_forms_agree_with_scalars():
    xs = np.random.default_rng(0).integers(0, 1 << 32, 500)
    for name, fn in [("wang4shift", wang4shift), ("wang3shift", wang3shift),
                     ("jenkins32", jenkins32), ("hash7shift", hash7shift)]:
        assert hash_array(name, xs).tolist() == [fn(int(x)) for x in xs]
    assert four_hybrid12_array(xs, 64).tolist() == [four_hybrid12(int(x), 64) for x in xs]
    u = xs.astype(np.uint64) << np.uint64(30)
    assert folded_xor_array(u, 16).tolist() == [segment_oracle(int(x), 16) for x in u]


def test_table_size_must_be_power_of_two():
    with pytest.raises(ValueError):
        four_hybrid12(5, 100)


def test_outputs_are_32_bit():
    xs = np.random.default_rng(1).integers(0, 1 << 32, 2000)
    for name in ("wang4shift", "wang3shift", "jenkins32", "hash7shift", "hybrid"):
        h = hash_array(name, xs)
        assert h.min() >= 0 and h.max() < (1 << 32)
