"""Adaptateurs pour brancher le logger VSEM sur la console."""
import sys

from core.logger import VsemLogger, set_vsem_logger


def setup_console_loggers(verbose: bool = False):
    """
    Configure le logger des modules pour écrire sur la sortie d'erreur.
    À appeler au démarrage de la CLI ; la sortie standard reste aux résultats.

    Args:
        verbose: Affiche aussi les messages INFO
    """
    def info(msg: str):
        if verbose:
            print(f"INFO: {msg}", file=sys.stderr)

    set_vsem_logger(VsemLogger(
        info_callback=info,
        warning_callback=lambda msg: print(f"WARNING: {msg}", file=sys.stderr),
        error_callback=lambda msg: print(f"ERROR: {msg}", file=sys.stderr),
    ))
