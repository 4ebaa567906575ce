"""Classes de données pour la boîte à outils (UI-agnostic)."""
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from core.errors import ConfigurationError, DimensionError

# Texte clair ou chiffré : les quatre modules préservent la longueur L
ByteBuf = bytes


@dataclass(frozen=True)
class SeedSet:
    """Les quatre graines dérivées d'un mot de passe, une par étage."""
    s1: int
    s2: int
    s3: int
    s4: int

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.s1, self.s2, self.s3, self.s4)

    def for_stage(self, stage: "Stage") -> int:
        """Retourne la graine de l'étage (X → s1, T → s2, S → s3, CT → s4)."""
        return self.as_tuple()[stage.index]


class Stage(enum.IntFlag):
    """Étages VSEM ; la valeur est le bit du masque d'en-tête du conteneur."""
    X = 1
    T = 2
    S = 4
    CT = 8

    @property
    def index(self) -> int:
        return self.bit_length() - 1

    @property
    def variant(self) -> int:
        """Variante xorshift utilisée par l'étage."""
        return _STAGE_VARIANTS[self]

    @property
    def label(self) -> str:
        return self.name.lower()


_STAGE_VARIANTS = {Stage.X: 1, Stage.T: 3, Stage.S: 1, Stage.CT: 3}

# Ordre de chiffrement ; le déchiffrement le parcourt à l'envers
STAGE_ORDER: Tuple[Stage, ...] = (Stage.X, Stage.T, Stage.S, Stage.CT)
ALL_STAGES = Stage.X | Stage.T | Stage.S | Stage.CT


@dataclass(frozen=True)
class ChainSpec:
    """Sous-ensemble d'étages appliqués dans l'ordre fixe X, T, S, CT."""
    stages: Stage = ALL_STAGES

    @classmethod
    def full(cls) -> "ChainSpec":
        return cls(ALL_STAGES)

    @classmethod
    def from_bitmask(cls, mask: int) -> "ChainSpec":
        """
        Construit une chaîne depuis le masque d'en-tête.

        Raises:
            ConfigurationError: Si le masque contient des bits inconnus
        """
        if mask & ~int(ALL_STAGES):
            raise ConfigurationError(f"Masque de chaîne invalide : {mask:#04x}")
        return cls(Stage(mask))

    @classmethod
    def from_names(cls, names: Union[str, Iterable[str]]) -> "ChainSpec":
        """
        Construit une chaîne depuis des noms d'étages ("x,t,s,ct", "x+t" ou "all").

        Raises:
            ConfigurationError: Si un nom est inconnu
        """
        if isinstance(names, str):
            names = names.replace("+", ",").split(",")

        stages = Stage(0)
        for raw in names:
            name = raw.strip().lower()
            if not name:
                continue
            if name in ("all", "full"):
                stages |= ALL_STAGES
            elif name.upper() in Stage.__members__:
                stages |= Stage[name.upper()]
            else:
                raise ConfigurationError(f"Étage inconnu : {raw!r}")
        return cls(stages)

    @property
    def bitmask(self) -> int:
        return int(self.stages)

    @property
    def is_empty(self) -> bool:
        return not self.stages

    def ordered(self) -> List[Stage]:
        """Étages sélectionnés, dans l'ordre de chiffrement."""
        return [s for s in STAGE_ORDER if s in self.stages]

    @property
    def label(self) -> str:
        if self.stages == ALL_STAGES:
            return "all"
        return "+".join(s.label for s in self.ordered())


@dataclass(frozen=True)
class GrayImage:
    """Image en niveaux de gris, pixels 8 bits en ordre ligne par ligne."""
    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise DimensionError(
                f"Dimensions invalides : {self.width}x{self.height}"
            )
        if len(self.pixels) != self.width * self.height:
            raise DimensionError(
                f"{len(self.pixels)} pixels pour une image "
                f"{self.width}x{self.height}"
            )

    def as_array(self) -> np.ndarray:
        """Vue numpy (hauteur, largeur) en lecture seule."""
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width)


@dataclass(frozen=True)
class Histogram:
    """Nombre d'occurrences de chaque niveau de gris (256 cases)."""
    counts: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


class Direction(str, enum.Enum):
    """Direction du voisin d'un pixel ancre."""
    HORIZONTAL = "h"
    VERTICAL = "v"
    DIAGONAL = "d"
    ANTI_DIAGONAL = "ad"

    @property
    def offset(self) -> Tuple[int, int]:
        """Décalage (dx, dy) du voisin, y croissant vers le bas."""
        return _DIRECTION_OFFSETS[self]


_DIRECTION_OFFSETS = {
    Direction.HORIZONTAL: (1, 0),
    Direction.VERTICAL: (0, 1),
    Direction.DIAGONAL: (1, 1),
    Direction.ANTI_DIAGONAL: (1, -1),
}


@dataclass(frozen=True)
class PixelPairSample:
    """Échantillon de paires (pixel, voisin) dans une direction."""
    xs: Tuple[int, ...]
    ys: Tuple[int, ...]
    direction: Direction
    seed: int

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.xs, self.ys))

    def __len__(self) -> int:
        return len(self.xs)


@dataclass
class MetricsReport:
    """Résultats EQ + CC pour une image chiffrée."""
    eq: float
    cc: Dict[Direction, float]
    n: int
    width: int
    height: int
    cc_original: Optional[Dict[Direction, float]] = None

    def to_dict(self) -> Dict[str, Union[int, float]]:
        """Document plat (eq, cc_h, cc_v, cc_d, cc_ad, n, width, height)."""
        data: Dict[str, Union[int, float]] = {"eq": self.eq}
        for direction in Direction:
            data[f"cc_{direction.value}"] = self.cc[direction]
        data.update({"n": self.n, "width": self.width, "height": self.height})
        if self.cc_original is not None:
            for direction in Direction:
                data[f"orig_cc_{direction.value}"] = self.cc_original[direction]
        return data


@dataclass
class BenchResult:
    """Durée médiane de chiffrement d'une sélection d'étages."""
    module: str
    size: int
    reps: int
    duration_ms: float
    decrypt_ms: Optional[float] = None

    @property
    def throughput_mib_s(self) -> float:
        """Débit en MiB/s, cohérent avec duration_ms."""
        return (self.size / 2**20) / max(self.duration_ms / 1000.0, 1e-9)


@dataclass(frozen=True)
class FileEntry:
    """Fichier chiffré rangé dans le dossier de blobs du coffre."""
    name: str
    path: str
    password: str
    length: int
    sha256: str


@dataclass
class VaultStore:
    """Contenu logique d'un coffre : catégories de secrets et fichiers chiffrés."""
    categories: Dict[str, Dict[str, str]] = field(default_factory=dict)
    file_entries: List[FileEntry] = field(default_factory=list)
    version: int = 1
    path: Optional[Path] = field(default=None, compare=False, repr=False)
    master_password: bytes = field(default=b"", compare=False, repr=False)
