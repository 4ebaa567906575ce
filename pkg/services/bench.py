"""Mesure des temps de chiffrement par module et par taille de tampon."""
import csv
import io
import re
import statistics
import time
from typing import Callable, Dict, List, Optional, Sequence

from config.vsem_config import get_vsem_config
from core.ciphers import Password, decrypt_pipeline, encrypt_pipeline
from core.errors import ConfigurationError
from core.logger import get_vsem_logger
from core.models import BenchResult, ChainSpec
from core.prng import XorShiftGenerator

_SIZE_PATTERN = re.compile(r"^\s*(\d+)\s*([KMG]?)(I?B)?\s*$", re.IGNORECASE)
_SIZE_UNITS = {"": 1, "K": 2**10, "M": 2**20, "G": 2**30}


def parse_size(text: str) -> int:
    """
    Convertit "280K", "1M", "4MiB" ou "4096" en nombre d'octets (puissances de 2).

    Raises:
        ConfigurationError: Si le texte n'est pas une taille
    """
    match = _SIZE_PATTERN.match(text)
    if not match:
        raise ConfigurationError(f"Taille invalide : {text!r}")
    return int(match.group(1)) * _SIZE_UNITS[match.group(2).upper()]


def format_size(size: int) -> str:
    """Libellé court d'une taille : 280K, 1M, 513."""
    for suffix, unit in (("G", 2**30), ("M", 2**20), ("K", 2**10)):
        if size >= unit and size % unit == 0:
            return f"{size // unit}{suffix}"
    return str(size)


def bench_buffer(size: int, buffer_seed: int) -> bytes:
    """Tampon pseudo-aléatoire reproductible (variante 1, graine buffer_seed)."""
    return XorShiftGenerator(1, buffer_seed).byte_block(size).tobytes()


def _median_ms(fn: Callable[[], object], reps: int, warmup: bool) -> float:
    if warmup:
        fn()
    durations = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        durations.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(durations)


def run_bench(
    sizes: Optional[Sequence[int]] = None,
    selections: Optional[Sequence[str]] = None,
    reps: Optional[int] = None,
    password: Optional[Password] = None,
    warmup: Optional[bool] = None,
    block_size: int = 0,
    buffer_seed: Optional[int] = None,
    measure_decrypt: Optional[bool] = None
) -> List[BenchResult]:
    """
    Chiffre un tampon par (taille, sélection) et garde la médiane des durées.

    Les paramètres absents sont lus dans la section bench de la configuration.

    Args:
        sizes: Tailles des tampons en octets
        selections: Sélections d'étages ("x", "t", "s", "ct", "all", "x+t"...)
        reps: Nombre de mesures par couple
        password: Mot de passe des graines
        warmup: Itération non mesurée avant les mesures
        block_size: Découpage en blocs ; 0 = tampon monolithique
        buffer_seed: Graine du tampon
        measure_decrypt: Mesure aussi le déchiffrement

    Returns:
        Un BenchResult par couple, taille par taille

    Raises:
        ConfigurationError: Si sizes est vide ou reps < 1
    """
    config = get_vsem_config().bench
    sizes = list(config.sizes if sizes is None else sizes)
    selections = list(config.selections if selections is None else selections)
    reps = config.reps if reps is None else reps
    password = config.password if password is None else password
    warmup = config.warmup if warmup is None else warmup
    buffer_seed = config.buffer_seed if buffer_seed is None else buffer_seed
    measure_decrypt = config.measure_decrypt if measure_decrypt is None else measure_decrypt

    if not sizes:
        raise ConfigurationError("Aucune taille de tampon à mesurer")
    if reps < 1:
        raise ConfigurationError(f"Nombre de répétitions invalide : {reps}")
    chains = {selection: ChainSpec.from_names(selection) for selection in selections}

    logger = get_vsem_logger()
    results = []
    for size in sizes:
        buf = bench_buffer(size, buffer_seed)
        for selection, chain in chains.items():
            logger.info(f"Mesure {selection} sur {format_size(size)} ({reps} répétitions)")
            encrypt_ms = _median_ms(
                lambda: encrypt_pipeline(buf, password, chain, block_size), reps, warmup
            )
            decrypt_ms = None
            if measure_decrypt:
                encrypted = encrypt_pipeline(buf, password, chain, block_size)
                decrypt_ms = _median_ms(
                    lambda: decrypt_pipeline(encrypted, password, chain, block_size),
                    reps,
                    warmup,
                )
            results.append(BenchResult(
                module=selection,
                size=size,
                reps=reps,
                duration_ms=encrypt_ms,
                decrypt_ms=decrypt_ms,
            ))
    return results


def format_table(results: Sequence[BenchResult], throughput: bool = False) -> str:
    """
    Tableau texte : une ligne par taille, une colonne par sélection.

    Args:
        results: Résultats de run_bench
        throughput: Affiche des Mio/s au lieu de millisecondes
    """
    modules: List[str] = []
    rows: Dict[int, Dict[str, BenchResult]] = {}
    for result in results:
        if result.module not in modules:
            modules.append(result.module)
        rows.setdefault(result.size, {})[result.module] = result

    unit = "MiB/s" if throughput else "ms"
    header = [f"size ({unit})"] + modules
    lines = [header]
    for size, by_module in rows.items():
        line = [format_size(size)]
        for module in modules:
            result = by_module.get(module)
            if result is None:
                line.append("-")
            elif throughput:
                line.append(f"{result.throughput_mib_s:.2f}")
            else:
                line.append(f"{result.duration_ms:.2f}")
        lines.append(line)

    widths = [max(len(row[i]) for row in lines) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        for row in lines
    ) + "\n"


def format_csv(results: Sequence[BenchResult]) -> str:
    """Une ligne CSV par mesure."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["module", "size", "reps", "encrypt_ms", "decrypt_ms", "throughput_mib_s"])
    for r in results:
        writer.writerow([
            r.module,
            r.size,
            r.reps,
            f"{r.duration_ms:.4f}",
            "" if r.decrypt_ms is None else f"{r.decrypt_ms:.4f}",
            f"{r.throughput_mib_s:.4f}",
        ])
    return out.getvalue()
