"""Format de conteneur VSEM.

Disposition (octets) :
    0-3   magique "VSEM"
    4     version (0x01)
    5     masque des étages (bit0 X, bit1 T, bit2 S, bit3 CT)
    6-13  bloc de contrôle : "VSEMCHK\\0" chiffré seul avec la chaîne
    14-   charge utile chiffrée
"""
import hmac
from dataclasses import dataclass
from typing import Optional, Tuple

from core.ciphers import Password, decrypt_pipeline, encrypt_pipeline
from core.errors import (
    AuthenticationError,
    ConfigurationError,
    ContainerFormatError,
    TruncatedContainerError,
)
from core.logger import get_vsem_logger
from core.models import ByteBuf, ChainSpec

MAGIC = b"VSEM"
VERSION = 0x01
CHECK_PLAINTEXT = b"VSEMCHK\x00"
HEADER_SIZE = 14


@dataclass(frozen=True)
class ContainerHeader:
    """En-tête en clair d'un conteneur."""
    version: int
    chain: ChainSpec
    check_block: bytes


def is_container(data: bytes) -> bool:
    """Vérifie la présence du magique en tête."""
    return data[:len(MAGIC)] == MAGIC


def compute_check_block(password: Password, chain: ChainSpec) -> bytes:
    """Chiffre le bloc de contrôle comme un tampon indépendant de 8 octets."""
    return encrypt_pipeline(CHECK_PLAINTEXT, password, chain)


def pack_container(
    payload: ByteBuf,
    password: Password,
    chain: Optional[ChainSpec] = None
) -> bytes:
    """
    Chiffre une charge utile et la place dans un conteneur.

    Args:
        payload: Données en clair
        password: Mot de passe
        chain: Étages (tous par défaut)

    Returns:
        Conteneur complet (en-tête + charge chiffrée)
    """
    chain = chain or ChainSpec.full()
    header = MAGIC + bytes([VERSION, chain.bitmask]) + compute_check_block(password, chain)
    return header + encrypt_pipeline(payload, password, chain)


def parse_header(data: bytes) -> ContainerHeader:
    """
    Lit l'en-tête d'un conteneur.

    Raises:
        ContainerFormatError: Magique, version ou masque invalides
        TruncatedContainerError: Moins de HEADER_SIZE octets
    """
    head = data[:len(MAGIC)]
    if head != MAGIC[:len(head)] or not data:
        raise ContainerFormatError("not a VSEM container (magique absent)")
    if len(data) < HEADER_SIZE:
        raise TruncatedContainerError(
            f"Conteneur tronqué : {len(data)} octets, en-tête de {HEADER_SIZE} attendu"
        )

    version = data[4]
    if version != VERSION:
        raise ContainerFormatError(f"Version de conteneur non supportée : {version}")

    try:
        chain = ChainSpec.from_bitmask(data[5])
    except ConfigurationError as e:
        raise ContainerFormatError(str(e)) from e
    if chain.is_empty:
        raise ContainerFormatError("Masque de chaîne vide")

    return ContainerHeader(version=version, chain=chain, check_block=bytes(data[6:HEADER_SIZE]))


def verify_password(header: ContainerHeader, password: Password):
    """
    Compare le bloc de contrôle à celui recalculé avec le mot de passe.

    Raises:
        AuthenticationError: Si les blocs diffèrent
    """
    expected = compute_check_block(password, header.chain)
    if not hmac.compare_digest(expected, header.check_block):
        get_vsem_logger().warning("Bloc de contrôle invalide")
        raise AuthenticationError("wrong password or corrupted")


def unpack_container(data: bytes, password: Password) -> Tuple[ChainSpec, bytes]:
    """
    Vérifie puis déchiffre un conteneur.

    Returns:
        (chaîne lue dans l'en-tête, charge utile en clair)
    """
    header = parse_header(data)
    verify_password(header, password)
    return header.chain, decrypt_pipeline(data[HEADER_SIZE:], password, header.chain)


def container_payload(data: bytes) -> bytes:
    """Charge utile chiffrée, sans vérification du mot de passe."""
    parse_header(data)
    return bytes(data[HEADER_SIZE:])
