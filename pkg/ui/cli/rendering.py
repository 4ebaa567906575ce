"""Rendu des résultats sur la console."""
import json
import sys
from typing import Optional, Sequence, TextIO

from core.models import MetricsReport
from ui.base import UIRenderer

MASK = "********"


def mask_secret(secret: str, reveal: bool = False) -> str:
    """Secret en clair uniquement si reveal est demandé."""
    return secret if reveal else MASK


def format_report(report: MetricsReport) -> str:
    """Une ligne clé=valeur par mesure, dans l'ordre de to_dict."""
    lines = []
    for key, value in report.to_dict().items():
        if isinstance(value, float):
            lines.append(f"{key}={value:.6f}")
        else:
            lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


class ConsoleRenderer(UIRenderer):
    """Résultats sur la sortie standard, messages sur la sortie d'erreur."""

    def __init__(self, out: Optional[TextIO] = None, err: Optional[TextIO] = None):
        """
        Args:
            out: Flux des résultats (sys.stdout par défaut)
            err: Flux des messages (sys.stderr par défaut)
        """
        self.out = out or sys.stdout
        self.err = err or sys.stderr

    def render_info(self, message: str):
        print(message, file=self.err)

    def render_warning(self, message: str):
        print(f"WARNING: {message}", file=self.err)

    def render_error(self, error: str):
        print(f"ERROR: {error}", file=self.err)

    def render_text(self, text: str):
        self.out.write(text if text.endswith("\n") else text + "\n")

    def render_report(self, report: MetricsReport, as_json: bool = False, title: Optional[str] = None):
        """
        Affiche un rapport d'analyse.

        Args:
            report: Rapport EQ / CC
            as_json: Sortie JSON au lieu de clé=valeur
            title: Libellé (sélection d'étages) placé avant le rapport
        """
        if as_json:
            data = report.to_dict()
            if title is not None:
                data = {"selection": title, **data}
            self.render_text(json.dumps(data, indent=2))
            return
        if title is not None:
            self.render_text(f"[{title}]")
        self.render_text(format_report(report))

    def render_list(self, items: Sequence[str]):
        for item in items:
            print(item, file=self.out)
