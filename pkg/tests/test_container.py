import random

import pytest

from core.container import (
    CHECK_PLAINTEXT,
    HEADER_SIZE,
    MAGIC,
    VERSION,
    compute_check_block,
    container_payload,
    is_container,
    pack_container,
    parse_header,
    unpack_container,
)
from core.ciphers import encrypt_pipeline
from core.errors import AuthenticationError, ContainerFormatError, TruncatedContainerError
from core.models import ChainSpec


def test_header_layout():
    data = pack_container(b"hello", "pw")
    assert data[:4] == MAGIC
    assert data[4] == VERSION
    assert data[5] == 0x0F
    assert data[6:HEADER_SIZE] == encrypt_pipeline(CHECK_PLAINTEXT, "pw")
    assert len(data) == HEADER_SIZE + 5


def test_xor_only_chain_is_recorded_in_bitmask():
    data = pack_container(b"hello", "pw", ChainSpec.from_names("x"))
    assert data[5] == 0x01
    chain, plain = unpack_container(data, "pw")
    assert chain == ChainSpec.from_names("x")
    assert plain == b"hello"


@pytest.mark.parametrize("mask", range(1, 16))
def test_round_trip_for_every_chain(mask):
    chain = ChainSpec.from_bitmask(mask)
    payload = random.Random(mask).randbytes(1000)
    data = pack_container(payload, b"secret", chain)
    assert parse_header(data).chain == chain
    assert unpack_container(data, b"secret") == (chain, payload)


def test_empty_payload():
    assert unpack_container(pack_container(b"", "pw"), "pw")[1] == b""


def test_containers_are_deterministic():
    payload = random.Random(0).randbytes(5000)
    assert pack_container(payload, "pw") == pack_container(payload, "pw")


@pytest.mark.parametrize("data", [b"", b"PK\x03\x04rest-of-zip", b"VSEN" + bytes(20)])
def test_bad_magic(data):
    assert not is_container(data)
    with pytest.raises(ContainerFormatError, match="not a VSEM container"):
        parse_header(data)


@pytest.mark.parametrize("length", [1, 4, 6, 13])
def test_truncated_container(length):
    data = pack_container(b"payload", "pw")[:length]
    with pytest.raises(TruncatedContainerError):
        parse_header(data)


def test_unsupported_version():
    data = bytearray(pack_container(b"abc", "pw"))
    data[4] = 2
    with pytest.raises(ContainerFormatError, match="Version"):
        parse_header(bytes(data))


@pytest.mark.parametrize("mask", [0x00, 0x10, 0xFF])
def test_invalid_bitmask(mask):
    data = bytearray(pack_container(b"abc", "pw"))
    data[5] = mask
    with pytest.raises(ContainerFormatError):
        parse_header(bytes(data))


def test_wrong_password_is_rejected():
    data = pack_container(b"confidential", "correct horse")
    with pytest.raises(AuthenticationError, match="wrong password or corrupted"):
        unpack_container(data, "battery staple")


def test_no_false_accepts_over_random_wrong_passwords():
    rng = random.Random(8)
    chain = ChainSpec.full()
    reference = compute_check_block(b"the-right-one", chain)
    for _ in range(10_000):
        candidate = rng.randbytes(rng.randrange(1, 20))
        if candidate == b"the-right-one":
            continue
        assert compute_check_block(candidate, chain) != reference


def test_no_false_rejects_over_correct_opens():
    rng = random.Random(9)
    for _ in range(1000):
        password = rng.randbytes(rng.randrange(0, 20))
        payload = rng.randbytes(rng.randrange(0, 64))
        assert unpack_container(pack_container(payload, password), password)[1] == payload


def test_tampered_check_block_is_rejected():
    data = bytearray(pack_container(b"abc", "pw"))
    data[7] ^= 0x01
    with pytest.raises(AuthenticationError):
        unpack_container(bytes(data), "pw")


def test_container_payload_skips_header():
    data = pack_container(b"0123456789", "pw")
    assert container_payload(data) == data[HEADER_SIZE:]
