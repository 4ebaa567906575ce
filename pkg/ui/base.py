"""Interface abstraite pour les implémentations UI."""
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Union

from core.models import MetricsReport


class UIRenderer(ABC):
    """Interface abstraite pour le rendu UI."""

    @abstractmethod
    def render_info(self, message: str):
        """Affiche une information."""
        pass

    @abstractmethod
    def render_warning(self, message: str):
        """Affiche un avertissement."""
        pass

    @abstractmethod
    def render_error(self, error: str):
        """Affiche une erreur."""
        pass

    @abstractmethod
    def render_text(self, text: str):
        """Affiche un résultat brut (tableau, CSV, secret)."""
        pass

    @abstractmethod
    def render_report(self, report: MetricsReport, as_json: bool = False, title: Optional[str] = None):
        """Affiche un rapport d'analyse."""
        pass

    @abstractmethod
    def render_list(self, items: Sequence[str]):
        """Affiche une liste de noms."""
        pass


class UIInput(ABC):
    """Interface abstraite pour les entrées utilisateur."""

    @abstractmethod
    def get_secret(
        self,
        label: str,
        env_var: Optional[str] = None,
        file_path: Optional[str] = None,
        confirm: bool = False
    ) -> Union[bytes, str]:
        """Récupère un secret sans le faire passer par la ligne de commande."""
        pass


class UIApplication(ABC):
    """Interface abstraite pour l'application UI."""

    def __init__(self):
        self.renderer: UIRenderer = None
        self.input: UIInput = None

    @abstractmethod
    def run(self, argv: Optional[List[str]] = None) -> int:
        """Lance l'application et retourne le code de sortie."""
        pass
