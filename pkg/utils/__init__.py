"""Utilitaires pour l'application."""

from .images import bytes_as_image, image_as_bytes, load_pgm, read_pgm, save_pgm, write_pgm

__all__ = [
    # PGM
    'read_pgm',
    'write_pgm',
    'load_pgm',
    'save_pgm',
    # Pont octets / image
    'image_as_bytes',
    'bytes_as_image',
]
