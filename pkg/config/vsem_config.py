"""Configuration de la boîte à outils VSEM depuis fichier YAML."""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from config.settings import VSEM_CONFIG
from core.errors import ConfigurationError
from core.logger import get_vsem_logger


@dataclass
class CipherConfig:
    """Configuration des chiffrements."""
    default_chain: List[str] = field(default_factory=lambda: ["x", "t", "s", "ct"])


@dataclass
class MetricsConfig:
    """Configuration de l'analyse de qualité."""
    sample_size: int = 1000  # Paires de pixels adjacents par direction
    sample_seed: int = 1
    include_original: bool = True


@dataclass
class BenchConfig:
    """Configuration des mesures de temps."""
    sizes: List[int] = field(default_factory=lambda: [280 * 1024, 2**20, 4 * 2**20])
    selections: List[str] = field(default_factory=lambda: ["x", "t", "s", "ct", "all"])
    reps: int = 5
    warmup: bool = True
    password: str = "bench-password"
    buffer_seed: int = 0x5EED
    measure_decrypt: bool = True


@dataclass
class VaultConfig:
    """Configuration du coffre."""
    password_length: int = 16
    blob_suffix: str = ".blobs"
    lock_suffix: str = ".lock"


@dataclass
class VsemConfig:
    """Configuration complète."""

    ciphers: CipherConfig = field(default_factory=CipherConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    vault: VaultConfig = field(default_factory=VaultConfig)

    def validate(self):
        """
        Vérifie la cohérence des valeurs.

        Raises:
            ConfigurationError: Si une valeur est hors domaine
        """
        if self.metrics.sample_size < 1:
            raise ConfigurationError("metrics.sample_size doit être >= 1")
        if self.bench.reps < 1:
            raise ConfigurationError("bench.reps doit être >= 1")
        if not self.bench.sizes or any(s < 0 for s in self.bench.sizes):
            raise ConfigurationError("bench.sizes doit contenir des tailles positives")
        if self.vault.password_length < 1:
            raise ConfigurationError("vault.password_length doit être >= 1")

    @classmethod
    def from_yaml(cls, yaml_path: str = VSEM_CONFIG) -> "VsemConfig":
        """Charge la configuration depuis un fichier YAML."""
        logger = get_vsem_logger()
        path = Path(yaml_path)

        if not path.exists():
            logger.info(f"Fichier {yaml_path} introuvable, utilisation des valeurs par défaut")
            return cls()

        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)

            if not data:
                logger.info(f"Fichier {yaml_path} vide, utilisation des valeurs par défaut")
                return cls()

            config = cls(
                ciphers=CipherConfig(**data.get('ciphers', {})),
                metrics=MetricsConfig(**data.get('metrics', {})),
                bench=BenchConfig(**data.get('bench', {})),
                vault=VaultConfig(**data.get('vault', {})),
            )
            config.validate()
            return config

        except (yaml.YAMLError, TypeError, ConfigurationError) as e:
            logger.error(f"Erreur lors du chargement de {yaml_path}: {e}")
            logger.warning("Utilisation des valeurs par défaut")
            return cls()

    def to_dict(self) -> Dict[str, Any]:
        """Convertit la configuration en dictionnaire."""
        return {
            'ciphers': self.ciphers.__dict__,
            'metrics': self.metrics.__dict__,
            'bench': self.bench.__dict__,
            'vault': self.vault.__dict__,
        }

    def save(self, yaml_path: str = VSEM_CONFIG):
        """Sauvegarde la configuration dans un fichier YAML."""
        with open(yaml_path, 'w', encoding='utf-8') as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False, allow_unicode=True)


# Instance globale de configuration
_vsem_config: Optional[VsemConfig] = None


def get_vsem_config(reload: bool = False) -> VsemConfig:
    """
    Récupère la configuration (singleton).

    Args:
        reload: Force le rechargement depuis le fichier

    Returns:
        Instance de VsemConfig
    """
    global _vsem_config
    if _vsem_config is None or reload:
        _vsem_config = VsemConfig.from_yaml()
    return _vsem_config
