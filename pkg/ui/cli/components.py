"""Composants d'entrée pour la console."""
import getpass
import os
from pathlib import Path
from typing import Callable, Dict, Optional, Union

from core.errors import UsageError
from ui.base import UIInput


class ConsoleInput(UIInput):
    """Secrets lus depuis une variable d'environnement, un fichier ou une invite."""

    def __init__(
        self,
        environ: Optional[Dict[str, str]] = None,
        prompt: Optional[Callable[[str], str]] = None
    ):
        """
        Args:
            environ: Variables d'environnement (os.environ par défaut)
            prompt: Saisie masquée (getpass par défaut)
        """
        self.environ = os.environ if environ is None else environ
        self.prompt = prompt or getpass.getpass

    def get_secret(
        self,
        label: str,
        env_var: Optional[str] = None,
        file_path: Optional[str] = None,
        confirm: bool = False
    ) -> Union[bytes, str]:
        """
        Récupère un secret, par ordre de priorité : variable, fichier, invite.

        Le fichier est lu en octets : sa première ligne est le secret, sans
        le saut de ligne.

        Args:
            label: Libellé de l'invite
            env_var: Nom de la variable d'environnement
            file_path: Fichier dont la première ligne est le secret
            confirm: Demande une seconde saisie identique (invite seulement)

        Raises:
            UsageError: Variable absente, saisie interrompue ou saisies différentes
        """
        if env_var:
            if env_var not in self.environ:
                raise UsageError(f"Variable d'environnement absente : {env_var}")
            return self.environ[env_var]

        if file_path:
            first_line = Path(file_path).read_bytes().split(b"\n", 1)[0]
            return first_line.rstrip(b"\r")

        secret = self._ask(f"{label} : ")
        if confirm and self._ask(f"{label} (confirmation) : ") != secret:
            raise UsageError("Les deux saisies diffèrent")
        return secret

    def _ask(self, text: str) -> str:
        try:
            return self.prompt(text)
        except EOFError:
            raise UsageError("Saisie interrompue (entrée standard fermée)")
