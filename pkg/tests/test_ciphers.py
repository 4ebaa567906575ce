import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.ciphers import (
    circular_encrypt,
    decrypt_image,
    decrypt_pipeline,
    dvsem_ct,
    dvsem_s,
    encrypt_image,
    encrypt_pipeline,
    evsem_ct,
    evsem_s,
    evsem_t,
    evsem_x,
    shift_encrypt,
    transpose,
)
from core.errors import ConfigurationError
from core.models import ChainSpec, GrayImage, Stage
from core.prng import MASK64, XorShiftGenerator, derive_seeds

LENGTHS = [0, 1, 2, 3, 255, 256, 257, 4095]

seeds = st.integers(min_value=0, max_value=MASK64)
passwords = st.one_of(st.binary(max_size=40), st.text(max_size=20))


def rotr(value, shift):
    return ((value >> shift) | (value << (8 - shift))) & 0xFF


# -------------------------------------------------------------------------
# Cas calculés à la main
# -------------------------------------------------------------------------

def test_transposition_hand_case():
    gen = XorShiftGenerator(3, 1)
    out = transpose(np.array([0, 1, 2, 3], dtype=np.uint8), gen)
    assert out.tolist() == [1, 0, 3, 2]
    assert gen.draws == 2
    assert evsem_t(bytes([0, 1, 2, 3]), 1) == bytes([1, 0, 3, 2])


def test_shift_single_byte_against_draws():
    gen = XorShiftGenerator(1, 1)
    jj = gen.next() & 0xFF
    j = gen.next() & 0x7
    assert jj == 0x41
    assert evsem_s(b"\x80", 1) == bytes([rotr(0x80, j) ^ jj])
    assert dvsem_s(evsem_s(b"\x80", 1), 1) == b"\x80"


def test_xor_single_byte_against_draw():
    assert evsem_x(b"\x00", 1) == bytes([0x41])


def test_circular_on_empty_buffer_draws_nothing():
    gen = XorShiftGenerator(3, 9)
    out = circular_encrypt(np.zeros(0, dtype=np.uint8), gen)
    assert len(out) == 0
    assert gen.draws == 0


def test_circular_draw_count():
    gen = XorShiftGenerator(3, 9)
    circular_encrypt(np.zeros(10, dtype=np.uint8), gen)
    assert gen.draws == 11


def test_circular_moves_then_xors():
    data = bytes(range(8))
    gen = XorShiftGenerator(3, 4)
    j1 = gen.range(0, 7)
    stream = [gen.range(0, 255) for _ in range(8)]
    expected = bytes(data[(i - j1) % 8] ^ stream[i] for i in range(8))
    assert evsem_ct(data, 4) == expected


def test_shift_draws_two_per_byte():
    gen = XorShiftGenerator(1, 3)
    shift_encrypt(np.zeros(50, dtype=np.uint8), gen)
    assert gen.draws == 100


# -------------------------------------------------------------------------
# Allers-retours
# -------------------------------------------------------------------------

MODULES = [
    ("x", evsem_x, evsem_x),
    ("t", evsem_t, evsem_t),
    ("s", evsem_s, dvsem_s),
    ("ct", evsem_ct, dvsem_ct),
]


@pytest.mark.parametrize("name,encrypt,decrypt", MODULES)
@pytest.mark.parametrize("length", LENGTHS)
def test_module_round_trip_on_fixed_lengths(name, encrypt, decrypt, length):
    rng = random.Random(f"{name}-{length}")
    for _ in range(100):
        buf = rng.randbytes(length)
        seed = rng.getrandbits(64)
        out = encrypt(buf, seed)
        assert len(out) == length
        assert decrypt(out, seed) == buf


@pytest.mark.parametrize("name,encrypt,decrypt", MODULES)
@given(buf=st.binary(max_size=600), seed=seeds)
def test_module_round_trip(name, encrypt, decrypt, buf, seed):
    assert decrypt(encrypt(buf, seed), seed) == buf


@pytest.mark.parametrize("name,encrypt,decrypt", MODULES)
def test_module_round_trip_one_mebibyte(name, encrypt, decrypt):
    rng = random.Random(name)
    for _ in range(2):
        buf = rng.randbytes(2**20)
        seed = rng.getrandbits(64)
        assert decrypt(encrypt(buf, seed), seed) == buf


@pytest.mark.slow
@pytest.mark.parametrize("name,encrypt,decrypt", MODULES)
def test_module_round_trip_one_mebibyte_hundred_cases(name, encrypt, decrypt):
    rng = random.Random(f"{name}-mio")
    for _ in range(100):
        buf = rng.randbytes(2**20)
        seed = rng.getrandbits(64)
        assert decrypt(encrypt(buf, seed), seed) == buf


@pytest.mark.parametrize("length", LENGTHS)
def test_pipeline_round_trip_on_fixed_lengths(length):
    rng = random.Random(length)
    for _ in range(100):
        buf = rng.randbytes(length)
        password = rng.randbytes(rng.randrange(0, 24))
        assert decrypt_pipeline(encrypt_pipeline(buf, password), password) == buf


@given(buf=st.binary(max_size=800), password=passwords)
def test_pipeline_round_trip(buf, password):
    assert decrypt_pipeline(encrypt_pipeline(buf, password), password) == buf


def test_pipeline_round_trip_one_mebibyte():
    buf = random.Random(1).randbytes(2**20)
    assert decrypt_pipeline(encrypt_pipeline(buf, "secret"), "secret") == buf


@pytest.mark.slow
def test_pipeline_round_trip_one_mebibyte_hundred_cases():
    rng = random.Random("chaine-mio")
    for _ in range(100):
        buf = rng.randbytes(2**20)
        password = rng.randbytes(rng.randrange(1, 24))
        assert decrypt_pipeline(encrypt_pipeline(buf, password), password) == buf


@given(
    buf=st.binary(min_size=1, max_size=3000),
    block_size=st.integers(min_value=1, max_value=700),
    mask=st.integers(min_value=1, max_value=15),
)
@settings(max_examples=50)
def test_pipeline_round_trip_in_blocks(buf, block_size, mask):
    chain = ChainSpec.from_bitmask(mask)
    encrypted = encrypt_pipeline(buf, "pw", chain, block_size)
    assert decrypt_pipeline(encrypted, "pw", chain, block_size) == buf


def test_xor_stream_continues_across_blocks():
    buf = bytes(5000)
    chain = ChainSpec.from_names("x")
    assert encrypt_pipeline(buf, "pw", chain, 1024) == encrypt_pipeline(buf, "pw", chain, 0)


# -------------------------------------------------------------------------
# Transposition
# -------------------------------------------------------------------------

def test_transposition_is_permutation_and_involution():
    rng = random.Random(2024)
    for _ in range(10_000):
        buf = rng.randbytes(rng.randrange(0, 48))
        seed = rng.getrandbits(64)
        out = evsem_t(buf, seed)
        assert sorted(out) == sorted(buf)
        assert evsem_t(out, seed) == buf


def test_transposition_moves_distinct_bytes():
    buf = bytes(range(256))
    out = evsem_t(buf, 123)
    assert sorted(out) == list(range(256))
    assert out != buf


@pytest.mark.parametrize("length", [2, 3, 17, 256, 4095])
def test_transposition_draws_match_between_directions(length):
    rng = random.Random(length)
    for _ in range(20):
        buf = np.frombuffer(rng.randbytes(length), dtype=np.uint8)
        seed = rng.getrandbits(64)
        forward = XorShiftGenerator(3, seed)
        out = transpose(buf, forward)
        backward = XorShiftGenerator(3, seed)
        transpose(out, backward)
        assert forward.draws == backward.draws
        assert 1 <= forward.draws <= length - 1


@given(length=st.integers(min_value=2, max_value=256), seed=seeds)
def test_transposition_pairs_are_disjoint(length, seed):
    # Octets distincts : la sortie est la permutation elle-même, qui doit être sa propre inverse
    perm = np.frombuffer(evsem_t(bytes(range(length)), seed), dtype=np.uint8).astype(np.intp)
    assert np.array_equal(perm[perm], np.arange(length))


# -------------------------------------------------------------------------
# Chaîne
# -------------------------------------------------------------------------

def test_single_stage_chains_use_their_seed():
    buf = bytes(range(200))
    seeds_ = derive_seeds("mot de passe")
    assert encrypt_pipeline(buf, "mot de passe", ChainSpec.from_names("x")) == evsem_x(buf, seeds_.s1)
    assert encrypt_pipeline(buf, "mot de passe", ChainSpec.from_names("t")) == evsem_t(buf, seeds_.s2)
    assert encrypt_pipeline(buf, "mot de passe", ChainSpec.from_names("s")) == evsem_s(buf, seeds_.s3)
    assert encrypt_pipeline(buf, "mot de passe", ChainSpec.from_names("ct")) == evsem_ct(buf, seeds_.s4)


def test_full_chain_is_composition_in_order():
    buf = bytes(range(100)) * 3
    s = derive_seeds("pw")
    expected = evsem_ct(evsem_s(evsem_t(evsem_x(buf, s.s1), s.s2), s.s3), s.s4)
    assert encrypt_pipeline(buf, "pw") == expected
    assert decrypt_pipeline(expected, "pw") == buf


def test_empty_chain_is_rejected():
    with pytest.raises(ConfigurationError):
        encrypt_pipeline(b"abc", "pw", ChainSpec(Stage(0)))


def test_pipeline_is_deterministic():
    buf = random.Random(3).randbytes(10_000)
    assert encrypt_pipeline(buf, "pw") == encrypt_pipeline(buf, "pw")
    assert encrypt_pipeline(buf, "pw") != encrypt_pipeline(buf, "pW")


def test_zero_plaintext_frequencies_are_near_uniform():
    out = np.frombuffer(encrypt_pipeline(bytes(2**20), "uniforme"), dtype=np.uint8)
    counts = np.bincount(out, minlength=256)
    expected = 2**20 / 256
    assert counts.min() >= 0.8 * expected
    assert counts.max() <= 1.2 * expected


def test_image_encryption_keeps_dimensions(landscape):
    enc = encrypt_image(landscape, "pw")
    assert (enc.width, enc.height) == (landscape.width, landscape.height)
    assert enc.pixels != landscape.pixels
    assert decrypt_image(enc, "pw") == landscape


def test_image_encryption_with_single_stage():
    img = GrayImage(2, 2, bytes([0, 1, 2, 3]))
    chain = ChainSpec.from_names("t")
    assert sorted(encrypt_image(img, "pw", chain).pixels) == [0, 1, 2, 3]


def test_wrong_password_does_not_recover_plaintext():
    rng = random.Random(77)
    for _ in range(100):
        buf = rng.randbytes(rng.randrange(16, 200))
        password = rng.randbytes(rng.randrange(1, 20))
        wrong = rng.randbytes(rng.randrange(1, 20))
        if derive_seeds(wrong) == derive_seeds(password):
            continue
        assert decrypt_pipeline(encrypt_pipeline(buf, password), wrong) != buf


def test_xor_chain_flip_changes_only_that_byte():
    chain = ChainSpec.from_names("x")
    rng = random.Random(5)
    buf = bytearray(rng.randbytes(1000))
    reference = encrypt_pipeline(bytes(buf), "mot de passe", chain)
    for k in (0, 1, 499, 999):
        flipped = bytearray(buf)
        flipped[k] ^= 0x10
        out = encrypt_pipeline(bytes(flipped), "mot de passe", chain)
        assert [i for i in range(len(buf)) if out[i] != reference[i]] == [k]
