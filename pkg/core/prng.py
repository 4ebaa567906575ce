"""Générateurs xorshift 64 bits et dérivation des graines depuis un mot de passe."""
from functools import lru_cache
from typing import Tuple, Union

import numpy as np

from core.errors import ConfigurationError, RangeError
from core.models import SeedSet

MASK64 = (1 << 64) - 1

# Zéro est un point fixe de xorshift : on le remplace par cette constante
FALLBACK_STATE = 0x9E3779B97F4A7C15

# Triplets (gauche, droite logique, gauche) à période pleine
# Variante 1 : triplet publié avec le schéma ; 2 et 3 : liste de Marsaglia
SHIFT_TRIPLES = {
    1: (13, 7, 17),
    2: (21, 35, 4),
    3: (20, 41, 5),
}

SEED_BASE = 0xCAFEBDCDE
SEED_BASES = tuple(SEED_BASE + k * 0x1111111111 for k in range(4))

# Contribution d'un morceau vide (mots de passe de moins de quatre octets)
SEED_PADS = (
    0x5851F42D4C957F2D,
    0x14057B7EF767814F,
    0x2545F4914F6CDD1D,
    0x61C8864680B583EB,
)

# Nombre de lanes calculées pas à pas avant de sauter par blocs
JUMP_LANES = 4096


def _step(x: int, a: int, b: int, c: int) -> int:
    x ^= (x << a) & MASK64
    x ^= x >> b
    x ^= (x << c) & MASK64
    return x


def _apply(columns, x: int) -> int:
    """Applique une matrice GF(2) donnée par ses colonnes à un mot 64 bits."""
    result = 0
    j = 0
    while x:
        if x & 1:
            result ^= columns[j]
        x >>= 1
        j += 1
    return result


@lru_cache(maxsize=None)
def _jump_tables(variant_id: int, distance: int) -> np.ndarray:
    """
    Tables (8, 256) de la matrice M^distance, M étant le pas xorshift.

    Le pas est linéaire sur GF(2) : avancer un état de `distance` tirages
    revient à XORer huit entrées de table, une par octet de l'état.
    """
    a, b, c = SHIFT_TRIPLES[variant_id]
    base = [_step(1 << j, a, b, c) for j in range(64)]
    result = [1 << j for j in range(64)]

    n = distance
    while n:
        if n & 1:
            result = [_apply(base, col) for col in result]
        base = [_apply(base, col) for col in base]
        n >>= 1

    tables = np.zeros((8, 256), dtype=np.uint64)
    for p in range(8):
        for v in range(1, 256):
            low = (v & -v).bit_length() - 1
            tables[p, v] = int(tables[p, v & (v - 1)]) ^ result[8 * p + low]
    return tables


class XorShiftGenerator:
    """Générateur xorshift 64 bits (variantes 1, 2 et 3)."""

    def __init__(self, variant_id: int, seed: int):
        """
        Args:
            variant_id: Triplet de décalages (1, 2 ou 3)
            seed: Graine 64 bits ; zéro est remplacé par FALLBACK_STATE

        Raises:
            ConfigurationError: Si la variante est inconnue
        """
        if variant_id not in SHIFT_TRIPLES:
            raise ConfigurationError(
                f"Variante de générateur inconnue : {variant_id} (attendu 1, 2 ou 3)"
            )
        self.variant_id = variant_id
        self.triple = SHIFT_TRIPLES[variant_id]
        self.state = (seed & MASK64) or FALLBACK_STATE
        # Nombre de tirages consommés depuis l'initialisation
        self.draws = 0

    def next(self) -> int:
        """Avance d'un pas et retourne le nouvel état."""
        self.state = _step(self.state, *self.triple)
        self.draws += 1
        return self.state

    def range(self, lo: int, hi: int) -> int:
        """
        Tire un entier dans [lo, hi] (bornes incluses), en un seul tirage.

        Raises:
            RangeError: Si lo > hi
        """
        if lo > hi:
            raise RangeError(f"Intervalle vide : [{lo}, {hi}]")
        return lo + self.next() % (hi - lo + 1)

    def peek_block(self, n: int) -> np.ndarray:
        """
        Calcule les n prochains tirages sans avancer le générateur.

        Returns:
            Tableau uint64 identique à n appels successifs de next()
        """
        out = np.empty(n, dtype=np.uint64)
        if n == 0:
            return out

        lanes = min(n, JUMP_LANES)
        a, b, c = self.triple
        x = self.state
        first = []
        for _ in range(lanes):
            x = _step(x, a, b, c)
            first.append(x)
        out[:lanes] = np.array(first, dtype=np.uint64)

        if n > lanes:
            tables = _jump_tables(self.variant_id, JUMP_LANES)
            mask = np.uint64(0xFF)
            shifts = [np.uint64(8 * p) for p in range(8)]
            cur = out[:lanes].copy()
            pos = lanes
            while pos < n:
                nxt = tables[0][(cur & mask).astype(np.intp)]
                for p in range(1, 8):
                    nxt ^= tables[p][((cur >> shifts[p]) & mask).astype(np.intp)]
                take = min(lanes, n - pos)
                out[pos:pos + take] = nxt[:take]
                cur = nxt
                pos += take
        return out

    def consume(self, block: np.ndarray, count: int):
        """Valide les `count` premiers tirages d'un bloc obtenu par peek_block."""
        if count:
            self.state = int(block[count - 1])
            self.draws += count

    def next_block(self, n: int) -> np.ndarray:
        """Retourne les n prochains tirages (uint64) et avance le générateur."""
        block = self.peek_block(n)
        self.consume(block, n)
        return block

    def byte_block(self, n: int) -> np.ndarray:
        """n tirages réduits à [0, 255], équivalent à n appels range(0, 255)."""
        return (self.next_block(n) & np.uint64(0xFF)).astype(np.uint8)


def rng_new(variant_id: int, seed: int) -> XorShiftGenerator:
    """Crée un générateur initialisé avec la graine donnée."""
    return XorShiftGenerator(variant_id, seed)


def rng_next(gen: XorShiftGenerator) -> int:
    """Tirage suivant du générateur."""
    return gen.next()


def rng_range(gen: XorShiftGenerator, lo: int, hi: int) -> int:
    """Tirage dans [lo, hi] : lo + (next mod (hi - lo + 1))."""
    return gen.range(lo, hi)


def _fold(chunk: bytes) -> int:
    p = 0
    for byte in chunk:
        p = (p * 31 + byte) & MASK64
    return p


def split_password(password: Union[bytes, str]) -> Tuple[bytes, bytes, bytes, bytes]:
    """Découpe le mot de passe en quatre morceaux contigus (division arrondie au-dessus)."""
    if isinstance(password, str):
        password = password.encode("utf-8")
    size = -(-len(password) // 4)
    return tuple(password[k * size:(k + 1) * size] for k in range(4))


def derive_seeds(password: Union[bytes, str]) -> SeedSet:
    """
    Dérive les graines des quatre étages : s_k = BASE_k + p_k (modulo 2^64).

    Args:
        password: Mot de passe (str encodé en UTF-8), éventuellement vide

    Returns:
        SeedSet dont les quatre valeurs sont non nulles
    """
    seeds = []
    for k, chunk in enumerate(split_password(password)):
        p = _fold(chunk) if chunk else SEED_PADS[k]
        seeds.append(((SEED_BASES[k] + p) & MASK64) or FALLBACK_STATE)
    return SeedSet(*seeds)
