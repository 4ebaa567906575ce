"""Utilitaires pour la lecture et l'écriture d'images PGM binaires (P5)."""
from pathlib import Path
from typing import Tuple, Union

from core.errors import DimensionError, ImageParseError
from core.models import ByteBuf, GrayImage

PGM_MAGIC = b"P5"
PGM_MAXVAL = 255
_WHITESPACE = b" \t\n\r\v\f"


def _skip_separators(data: bytes, pos: int) -> int:
    """Saute blancs et commentaires (# jusqu'à la fin de ligne)."""
    while pos < len(data):
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == ord("#"):
            while pos < len(data) and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _read_number(data: bytes, pos: int, label: str) -> Tuple[int, int]:
    start = _skip_separators(data, pos)
    if start == pos:
        raise ImageParseError(f"Séparateur attendu avant {label}", pos)
    end = start
    while end < len(data) and data[end] not in _WHITESPACE and data[end] != ord("#"):
        end += 1
    token = data[start:end]
    if not token or not token.isdigit():
        raise ImageParseError(f"{label} invalide : {token!r}", start)
    return int(token), end


def read_pgm(content: bytes) -> GrayImage:
    """
    Décode un fichier PGM binaire (P5, maxval 255).

    Args:
        content: Contenu complet du fichier

    Returns:
        Image en niveaux de gris

    Raises:
        ImageParseError: Magique, en-tête, maxval ou données invalides
    """
    if content[:2] != PGM_MAGIC:
        raise ImageParseError(f"Magique PGM invalide : {bytes(content[:2])!r} (P5 attendu)", 0)

    pos = len(PGM_MAGIC)
    width, pos = _read_number(content, pos, "largeur")
    height, pos = _read_number(content, pos, "hauteur")
    maxval_offset = _skip_separators(content, pos)
    maxval, pos = _read_number(content, pos, "maxval")

    if maxval != PGM_MAXVAL:
        raise ImageParseError(f"maxval {maxval} non supporté (255 attendu)", maxval_offset)
    if width == 0 or height == 0:
        raise ImageParseError(f"Dimensions nulles : {width}x{height}", len(PGM_MAGIC))

    # Un seul blanc sépare l'en-tête des pixels
    if pos >= len(content) or content[pos] not in _WHITESPACE:
        raise ImageParseError("Séparateur attendu après maxval", pos)
    pos += 1

    needed = width * height
    pixels = content[pos:pos + needed]
    if len(pixels) < needed:
        raise ImageParseError(
            f"Données tronquées : {len(pixels)} octets sur {needed}", len(content)
        )
    return GrayImage(width=width, height=height, pixels=bytes(pixels))


def write_pgm(img: GrayImage) -> bytes:
    """Encode une image en PGM P5 canonique."""
    header = f"P5\n{img.width} {img.height}\n{PGM_MAXVAL}\n".encode("ascii")
    return header + img.pixels


def load_pgm(path: Union[str, Path]) -> GrayImage:
    """Lit une image PGM depuis le disque."""
    return read_pgm(Path(path).read_bytes())


def save_pgm(img: GrayImage, path: Union[str, Path]):
    """Écrit une image PGM sur le disque."""
    Path(path).write_bytes(write_pgm(img))


def image_as_bytes(img: GrayImage) -> bytes:
    """Pixels de l'image, ligne par ligne."""
    return img.pixels


def bytes_as_image(buf: ByteBuf, width: int, height: int) -> GrayImage:
    """
    Réinterprète un tampon comme une image width x height.

    Raises:
        DimensionError: Si la taille du tampon ne correspond pas
    """
    if len(buf) != width * height:
        raise DimensionError(
            f"Tampon de {len(buf)} octets pour une image {width}x{height}"
        )
    return GrayImage(width=width, height=height, pixels=bytes(buf))
