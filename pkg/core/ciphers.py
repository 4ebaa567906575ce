"""Modules de chiffrement VSEM et leur composition en chaîne.

Les quatre modules transforment un tampon d'octets sans en changer la longueur :

- X  : XOR avec un flux de clé (variante 1), involutif ;
- T  : transpositions par paires disjointes (variante 3), involutif ;
- S  : XOR puis rotation de chaque octet (variante 1) ;
- CT : rotation circulaire du tampon puis XOR (variante 3).
"""
from typing import Callable, Dict, Iterator, Optional, Tuple, Union

import numpy as np

from core.errors import ConfigurationError
from core.logger import get_vsem_logger
from core.models import ByteBuf, ChainSpec, GrayImage, Stage
from core.prng import XorShiftGenerator, derive_seeds

# Les tampons plus grands sont traités par blocs successifs de cette taille
BLOCK_SIZE = 4 * 2**20

Password = Union[bytes, str]
StageFn = Callable[[np.ndarray, XorShiftGenerator], np.ndarray]


def _as_array(buf: ByteBuf) -> np.ndarray:
    return np.frombuffer(bytes(buf), dtype=np.uint8)


def _rotate_left(values: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    wide = values.astype(np.uint16)
    shifts = shifts.astype(np.uint16)
    return (((wide << shifts) | (wide >> (8 - shifts))) & 0xFF).astype(np.uint8)


def _rotate_right(values: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    wide = values.astype(np.uint16)
    shifts = shifts.astype(np.uint16)
    return (((wide >> shifts) | (wide << (8 - shifts))) & 0xFF).astype(np.uint8)


# -------------------------------------------------------------------------
# Étages (tableau uint8 + générateur)
# -------------------------------------------------------------------------

def xor_stream(data: np.ndarray, gen: XorShiftGenerator) -> np.ndarray:
    """Octet i XOR octet de poids faible du i-ème tirage."""
    return data ^ gen.byte_block(len(data))


def transpose(data: np.ndarray, gen: XorShiftGenerator) -> np.ndarray:
    """
    Échange les octets selon un couplage aléatoire de positions.

    Pour chaque position i encore libre, un tirage choisit un partenaire dans
    [i+1, L-1] ; s'il est déjà pris, on cherche la première position libre
    après lui, puis avant lui (jusqu'à i+1). Un seul tirage par position libre
    visitée : le couplage ne dépend que de la graine et de L, ce qui rend
    l'opération involutive.
    """
    n = len(data)
    if n < 2:
        return data.copy()

    buf = bytearray(data.tobytes())
    block = gen.peek_block(n - 1)
    draws = block.tolist()
    free = bytearray(b"\x01") * n
    used = 0

    for i in range(n - 1):
        if not free[i]:
            continue
        ip = i + 1 + draws[used] % (n - 1 - i)
        used += 1

        if not free[ip]:
            j = ip + 1
            while j < n and not free[j]:
                j += 1
            if j == n:
                j = ip - 1
                while j > i and not free[j]:
                    j -= 1
                if j == i:
                    break
            ip = j

        buf[i], buf[ip] = buf[ip], buf[i]
        free[ip] = 0

    gen.consume(block, used)
    return np.frombuffer(bytes(buf), dtype=np.uint8)


def _shift_keys(n: int, gen: XorShiftGenerator) -> Tuple[np.ndarray, np.ndarray]:
    # Deux tirages par octet : jj dans [0, 255] puis j dans [0, 7]
    block = gen.next_block(2 * n)
    jj = (block[0::2] & np.uint64(0xFF)).astype(np.uint8)
    j = (block[1::2] & np.uint64(0x7)).astype(np.uint8)
    return jj, j


def shift_encrypt(data: np.ndarray, gen: XorShiftGenerator) -> np.ndarray:
    """c = rotation droite (p, j) XOR jj."""
    jj, j = _shift_keys(len(data), gen)
    return _rotate_right(data, j) ^ jj


def shift_decrypt(data: np.ndarray, gen: XorShiftGenerator) -> np.ndarray:
    """p = rotation gauche (c XOR jj, j)."""
    jj, j = _shift_keys(len(data), gen)
    return _rotate_left(data ^ jj, j)


def circular_encrypt(data: np.ndarray, gen: XorShiftGenerator) -> np.ndarray:
    """L'octet i passe en (i + j1) mod L, puis XOR avec un tirage par position."""
    n = len(data)
    if n == 0:
        return data.copy()
    j1 = gen.range(0, n - 1)
    return np.roll(data, j1) ^ gen.byte_block(n)


def circular_decrypt(data: np.ndarray, gen: XorShiftGenerator) -> np.ndarray:
    """XOR avec le même flux, puis retour de (i + j1) mod L vers i."""
    n = len(data)
    if n == 0:
        return data.copy()
    j1 = gen.range(0, n - 1)
    return np.roll(data ^ gen.byte_block(n), -j1)


ENCRYPTORS: Dict[Stage, StageFn] = {
    Stage.X: xor_stream,
    Stage.T: transpose,
    Stage.S: shift_encrypt,
    Stage.CT: circular_encrypt,
}

DECRYPTORS: Dict[Stage, StageFn] = {
    Stage.X: xor_stream,
    Stage.T: transpose,
    Stage.S: shift_decrypt,
    Stage.CT: circular_decrypt,
}


def _run_stage(fn: StageFn, stage: Stage, buf: ByteBuf, seed: int) -> bytes:
    gen = XorShiftGenerator(stage.variant, seed)
    return fn(_as_array(buf), gen).tobytes()


# -------------------------------------------------------------------------
# Opérations publiques (tampon + graine)
# -------------------------------------------------------------------------

def evsem_x(buf: ByteBuf, seed: int) -> bytes:
    """Module XOR (chiffrement et déchiffrement)."""
    return _run_stage(xor_stream, Stage.X, buf, seed)


def evsem_t(buf: ByteBuf, seed: int) -> bytes:
    """Module de transposition (chiffrement et déchiffrement)."""
    return _run_stage(transpose, Stage.T, buf, seed)


def evsem_s(buf: ByteBuf, seed: int) -> bytes:
    """Module de rotation d'octets, chiffrement."""
    return _run_stage(shift_encrypt, Stage.S, buf, seed)


def dvsem_s(buf: ByteBuf, seed: int) -> bytes:
    """Module de rotation d'octets, déchiffrement."""
    return _run_stage(shift_decrypt, Stage.S, buf, seed)


def evsem_ct(buf: ByteBuf, seed: int) -> bytes:
    """Module de transposition circulaire, chiffrement."""
    return _run_stage(circular_encrypt, Stage.CT, buf, seed)


def dvsem_ct(buf: ByteBuf, seed: int) -> bytes:
    """Module de transposition circulaire, déchiffrement."""
    return _run_stage(circular_decrypt, Stage.CT, buf, seed)


# -------------------------------------------------------------------------
# Chaîne complète
# -------------------------------------------------------------------------

def _block_bounds(length: int, block_size: int) -> Iterator[Tuple[int, int]]:
    if block_size <= 0 or length <= block_size:
        yield 0, length
        return
    for start in range(0, length, block_size):
        yield start, min(start + block_size, length)


def _run_chain(
    buf: ByteBuf,
    password: Password,
    chain: Optional[ChainSpec],
    block_size: int,
    decrypt: bool
) -> bytes:
    chain = chain or ChainSpec.full()
    if chain.is_empty:
        raise ConfigurationError("La chaîne d'étages est vide")

    seeds = derive_seeds(password)
    stages = chain.ordered()
    # Un générateur par étage, qui continue d'un bloc à l'autre
    gens = {
        stage: XorShiftGenerator(stage.variant, seeds.for_stage(stage))
        for stage in stages
    }
    functions = DECRYPTORS if decrypt else ENCRYPTORS
    if decrypt:
        stages = stages[::-1]

    data = _as_array(buf)
    if block_size > 0 and len(data) > block_size:
        get_vsem_logger().info(
            f"Traitement par blocs : {len(data)} octets, blocs de {block_size}"
        )

    out = np.empty_like(data)
    for start, stop in _block_bounds(len(data), block_size):
        block = data[start:stop]
        for stage in stages:
            block = functions[stage](block, gens[stage])
        out[start:stop] = block
    return out.tobytes()


def encrypt_pipeline(
    buf: ByteBuf,
    password: Password,
    chain: Optional[ChainSpec] = None,
    block_size: int = BLOCK_SIZE
) -> bytes:
    """
    Chiffre avec les étages sélectionnés, dans l'ordre X, T, S, CT.

    Args:
        buf: Texte clair
        password: Mot de passe (graines s1..s4)
        chain: Étages à appliquer (tous par défaut)
        block_size: Taille des blocs successifs ; 0 = tampon monolithique

    Raises:
        ConfigurationError: Si la chaîne est vide
    """
    return _run_chain(buf, password, chain, block_size, decrypt=False)


def decrypt_pipeline(
    buf: ByteBuf,
    password: Password,
    chain: Optional[ChainSpec] = None,
    block_size: int = BLOCK_SIZE
) -> bytes:
    """Inverse de encrypt_pipeline : étages inverses dans l'ordre CT, S, T, X."""
    return _run_chain(buf, password, chain, block_size, decrypt=True)


def encrypt_image(
    img: GrayImage,
    password: Password,
    chain: Optional[ChainSpec] = None
) -> GrayImage:
    """Chiffre les pixels d'une image ; les dimensions restent en clair."""
    return GrayImage(img.width, img.height, encrypt_pipeline(img.pixels, password, chain))


def decrypt_image(
    img: GrayImage,
    password: Password,
    chain: Optional[ChainSpec] = None
) -> GrayImage:
    """Inverse de encrypt_image."""
    return GrayImage(img.width, img.height, decrypt_pipeline(img.pixels, password, chain))
