"""Exceptions de la boîte à outils VSEM.

Chaque exception porte le code de sortie utilisé par la CLI :
1 usage/entrée, 2 authentification/intégrité, 3 entrées/sorties.
"""
from typing import Optional


class VsemError(Exception):
    """Erreur de base de la boîte à outils."""

    exit_code: int = 1


class ConfigurationError(VsemError, ValueError):
    """Paramètre invalide (variante de générateur, chaîne vide, config)."""


class RangeError(VsemError, ValueError):
    """Intervalle de tirage invalide (lo > hi)."""


class InputError(VsemError, ValueError):
    """Données d'entrée incompatibles avec l'opération demandée."""


class DimensionError(InputError):
    """Dimensions d'image incohérentes avec le nombre de pixels."""


class DegenerateSampleError(InputError):
    """Échantillon de variance nulle : le coefficient de corrélation est indéfini."""


class ImageParseError(VsemError, ValueError):
    """Fichier PGM invalide."""

    def __init__(self, message: str, offset: Optional[int] = None):
        """
        Args:
            message: Description de l'erreur
            offset: Position (octets) où l'erreur a été détectée
        """
        self.offset = offset
        if offset is not None:
            message = f"{message} (octet {offset})"
        super().__init__(message)


class NotFoundError(VsemError, KeyError):
    """Entrée absente du coffre."""

    def __str__(self) -> str:
        # KeyError entoure le message de guillemets
        return str(self.args[0]) if self.args else ""


class UsageError(VsemError):
    """Mauvaise utilisation de la ligne de commande."""


class ContainerFormatError(VsemError, ValueError):
    """Conteneur VSEM mal formé."""

    exit_code = 2


class TruncatedContainerError(ContainerFormatError):
    """Conteneur plus court que son en-tête."""


class AuthenticationError(VsemError):
    """Bloc de contrôle invalide : mauvais mot de passe ou données corrompues."""

    exit_code = 2


class CorruptionError(VsemError):
    """Contenu déchiffré illisible ou altéré."""

    exit_code = 2


class VaultLockedError(VsemError):
    """Le coffre est déjà ouvert par un autre processus."""

    exit_code = 3
