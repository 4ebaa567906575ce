"""Service d'analyse de la qualité de chiffrement (EQ, corrélation de pixels adjacents)."""
import csv
import io
import math
from typing import Dict, Optional, Sequence

import numpy as np

from config.vsem_config import get_vsem_config
from core.ciphers import Password, encrypt_image
from core.errors import DegenerateSampleError, InputError
from core.logger import get_vsem_logger
from core.models import ChainSpec, Direction, GrayImage, Histogram, MetricsReport, PixelPairSample
from core.prng import XorShiftGenerator

GREY_LEVELS = 256

# Sélections comparées par module_quality
QUALITY_SELECTIONS = ("x", "t", "s", "ct", "all")


def histogram(img: GrayImage) -> Histogram:
    """Compte les occurrences de chaque niveau de gris."""
    pixels = np.frombuffer(img.pixels, dtype=np.uint8)
    counts = np.bincount(pixels, minlength=GREY_LEVELS)
    return Histogram(tuple(int(c) for c in counts))


def eq_metric(h_orig: Histogram, h_enc: Histogram) -> float:
    """
    Qualité de chiffrement : somme des écarts absolus d'histogramme / 256.

    Raises:
        InputError: Si les histogrammes ne portent pas sur le même nombre de pixels
    """
    if h_orig.total != h_enc.total:
        raise InputError(
            f"Histogrammes incomparables : {h_orig.total} et {h_enc.total} pixels"
        )
    a = np.asarray(h_orig.counts, dtype=np.int64)
    b = np.asarray(h_enc.counts, dtype=np.int64)
    return int(np.abs(b - a).sum()) / GREY_LEVELS


def sample_adjacent_pairs(
    img: GrayImage,
    n: int,
    direction: Direction,
    sample_seed: int
) -> PixelPairSample:
    """
    Tire n pixels ancres (avec remise) et leur voisin dans la direction donnée.

    Les ancres sont les positions dont le voisin (+1,0), (0,+1), (+1,+1) ou
    (+1,-1) est dans l'image ; chaque ancre coûte un tirage de la variante 1.

    Raises:
        InputError: Si n < 1 ou si l'image n'a aucune ancre valide
    """
    if n < 1:
        raise InputError(f"Taille d'échantillon invalide : {n}")

    dx, dy = direction.offset
    nx = img.width - dx
    ny = img.height - abs(dy)
    if nx <= 0 or ny <= 0:
        raise InputError(
            f"Image {img.width}x{img.height} sans paire adjacente "
            f"en direction {direction.value}"
        )
    y0 = 1 if dy < 0 else 0

    gen = XorShiftGenerator(1, sample_seed)
    idx = (gen.next_block(n) % np.uint64(nx * ny)).astype(np.int64)
    ax = idx % nx
    ay = y0 + idx // nx

    grid = img.as_array()
    xs = grid[ay, ax]
    ys = grid[ay + dy, ax + dx]
    return PixelPairSample(
        xs=tuple(int(v) for v in xs),
        ys=tuple(int(v) for v in ys),
        direction=direction,
        seed=sample_seed,
    )


def cc_metric(sample: PixelPairSample) -> float:
    """
    Coefficient de corrélation Cov(x, y) / sqrt(D(x) D(y)), statistiques en 1/N.

    Raises:
        DegenerateSampleError: Si D(x) ou D(y) est nul
    """
    if len(sample) == 0:
        raise DegenerateSampleError("Échantillon vide")

    x = np.asarray(sample.xs, dtype=np.float64)
    y = np.asarray(sample.ys, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    var_x = float(np.mean(dx * dx))
    var_y = float(np.mean(dy * dy))
    if var_x == 0.0 or var_y == 0.0:
        raise DegenerateSampleError(
            f"Variance nulle (D(x)={var_x}, D(y)={var_y}) en direction "
            f"{sample.direction.value} : corrélation indéfinie"
        )

    cc = float(np.mean(dx * dy)) / math.sqrt(var_x * var_y)
    return min(1.0, max(-1.0, cc))


def adjacency_export(sample: PixelPairSample) -> str:
    """Données du nuage de points (pixel, voisin) au format CSV "x,y"."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "y"])
    writer.writerows(sample.pairs)
    return out.getvalue()


def sample_all_directions(
    img: GrayImage,
    n: int,
    sample_seed: int
) -> Dict[Direction, PixelPairSample]:
    """Un échantillon par direction, même graine pour les quatre."""
    return {d: sample_adjacent_pairs(img, n, d, sample_seed) for d in Direction}


def _cc_all(samples: Dict[Direction, PixelPairSample]) -> Dict[Direction, float]:
    return {d: cc_metric(s) for d, s in samples.items()}


def analyze(
    img_orig: GrayImage,
    img_enc: GrayImage,
    n: Optional[int] = None,
    sample_seed: Optional[int] = None,
    include_original: Optional[bool] = None
) -> MetricsReport:
    """
    EQ entre les deux images et CC dans les quatre directions.

    Args:
        img_orig: Image d'origine
        img_enc: Image chiffrée
        n: Paires par direction (config si None)
        sample_seed: Graine du tirage (config si None)
        include_original: Calcule aussi les CC de l'image d'origine

    Raises:
        InputError: Si les dimensions diffèrent
    """
    config = get_vsem_config().metrics
    if n is None:
        n = config.sample_size
    if sample_seed is None:
        sample_seed = config.sample_seed
    if include_original is None:
        include_original = config.include_original

    if (img_orig.width, img_orig.height) != (img_enc.width, img_enc.height):
        raise InputError(
            f"Dimensions différentes : {img_orig.width}x{img_orig.height} "
            f"et {img_enc.width}x{img_enc.height}"
        )

    eq = eq_metric(histogram(img_orig), histogram(img_enc))
    cc = _cc_all(sample_all_directions(img_enc, n, sample_seed))
    cc_original = None
    if include_original:
        cc_original = _cc_all(sample_all_directions(img_orig, n, sample_seed))

    get_vsem_logger().info(f"Analyse {img_orig.width}x{img_orig.height} : EQ={eq:.3f}")
    return MetricsReport(
        eq=eq,
        cc=cc,
        n=n,
        width=img_orig.width,
        height=img_orig.height,
        cc_original=cc_original,
    )


def module_quality(
    img: GrayImage,
    password: Password,
    selections: Sequence[str] = QUALITY_SELECTIONS,
    n: Optional[int] = None,
    sample_seed: Optional[int] = None
) -> Dict[str, MetricsReport]:
    """
    Compare les modules : EQ et CC de l'image chiffrée par chaque sélection.

    Returns:
        {sélection: rapport}
    """
    reports = {}
    for selection in selections:
        encrypted = encrypt_image(img, password, ChainSpec.from_names(selection))
        reports[selection] = analyze(
            img, encrypted, n=n, sample_seed=sample_seed, include_original=False
        )
    return reports
