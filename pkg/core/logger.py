"""Logger abstrait partagé par les modules VSEM."""
import sys
from typing import Callable, Optional


def _stderr(prefix: str) -> Callable[[str], None]:
    return lambda msg: print(f"{prefix}: {msg}", file=sys.stderr)


class VsemLogger:
    """Logger à callbacks, remplaçable par l'interface qui l'utilise."""

    def __init__(
        self,
        info_callback: Optional[Callable[[str], None]] = None,
        warning_callback: Optional[Callable[[str], None]] = None,
        error_callback: Optional[Callable[[str], None]] = None
    ):
        self.info = info_callback or _stderr("INFO")
        self.warning = warning_callback or _stderr("WARNING")
        self.error = error_callback or _stderr("ERROR")


# Logger global
_vsem_logger = VsemLogger(info_callback=lambda msg: None)


def set_vsem_logger(logger: VsemLogger):
    """Configure le logger utilisé par tous les modules."""
    global _vsem_logger
    _vsem_logger = logger


def get_vsem_logger() -> VsemLogger:
    """Retourne le logger courant."""
    return _vsem_logger
