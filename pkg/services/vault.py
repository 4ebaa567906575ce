"""Coffre chiffré : catégories de secrets texte et fichiers chiffrés.

Le fichier du coffre est un conteneur VSEM (chaîne complète, mot de passe
maître) dont la charge utile est le magasin sérialisé :

    "VSTO"                    magique
    u16                       version
    u32                       nombre de catégories, puis pour chacune :
        str nom, u32 nombre d'entrées, puis (str nom, str secret) par entrée
    u32                       nombre de fichiers, puis pour chacun :
        str nom, str chemin, str mot de passe, u64 longueur, 32 octets SHA-256
    32 octets                 SHA-256 de tout ce qui précède

Entiers big-endian ; str = u32 longueur + UTF-8. Chaque fichier ajouté est
un conteneur "<jeton>.vsem" du dossier "<coffre>.blobs/".
"""
import hashlib
import os
import secrets
import string
import struct
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Union

from config.vsem_config import get_vsem_config
from core.container import is_container, pack_container, unpack_container
from core.errors import (
    AuthenticationError,
    ContainerFormatError,
    CorruptionError,
    InputError,
    NotFoundError,
    VaultLockedError,
)
from core.logger import get_vsem_logger
from core.models import FileEntry, VaultStore
from core.prng import XorShiftGenerator

STORE_MAGIC = b"VSTO"
STORE_VERSION = 1
DIGEST_SIZE = 32
PASSWORD_ALPHABET = string.ascii_letters + string.digits

PathLike = Union[str, Path]


# -------------------------------------------------------------------------
# Chemins et verrou
# -------------------------------------------------------------------------

def blob_dir(vault_path: PathLike) -> Path:
    """Dossier des fichiers chiffrés du coffre."""
    path = Path(vault_path)
    return path.with_name(path.name + get_vsem_config().vault.blob_suffix)


def lock_path(vault_path: PathLike) -> Path:
    """Fichier verrou du coffre."""
    path = Path(vault_path)
    return path.with_name(path.name + get_vsem_config().vault.lock_suffix)


class VaultLock:
    """Verrou consultatif : un seul processus écrit dans un coffre à la fois."""

    def __init__(self, vault_path: PathLike):
        self.path = lock_path(vault_path)
        self._held = False

    def acquire(self):
        """
        Crée le fichier verrou de façon exclusive.

        Raises:
            VaultLockedError: Si le verrou existe déjà
        """
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY, 0o600)
        except FileExistsError:
            raise VaultLockedError(
                f"Coffre verrouillé par un autre processus ({self.path})"
            ) from None
        with os.fdopen(fd, "w") as f:
            f.write(str(os.getpid()))
        self._held = True

    def release(self):
        """Supprime le fichier verrou s'il est détenu."""
        if self._held:
            self.path.unlink(missing_ok=True)
            self._held = False

    def __enter__(self) -> "VaultLock":
        self.acquire()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.release()


# -------------------------------------------------------------------------
# Sérialisation du magasin
# -------------------------------------------------------------------------

def _pack_str(value: str) -> bytes:
    raw = value.encode("utf-8")
    return struct.pack(">I", len(raw)) + raw


class _StoreReader:
    """Lecture séquentielle du magasin ; toute incohérence est une corruption."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if size < 0 or self.pos + size > len(self.data):
            raise CorruptionError(f"Magasin tronqué (octet {self.pos})")
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str) -> int:
        (value,) = struct.unpack(fmt, self.take(struct.calcsize(fmt)))
        return value

    def text(self) -> str:
        raw = self.take(self.unpack(">I"))
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CorruptionError(f"Texte invalide dans le magasin : {e}") from e


def serialize_store(store: VaultStore) -> bytes:
    """Encode le contenu logique du magasin (format décrit en tête de module)."""
    parts = [STORE_MAGIC, struct.pack(">HI", store.version, len(store.categories))]
    for category, records in store.categories.items():
        parts.append(_pack_str(category))
        parts.append(struct.pack(">I", len(records)))
        for name, secret in records.items():
            parts.append(_pack_str(name))
            parts.append(_pack_str(secret))

    parts.append(struct.pack(">I", len(store.file_entries)))
    for entry in store.file_entries:
        parts.append(_pack_str(entry.name))
        parts.append(_pack_str(entry.path))
        parts.append(_pack_str(entry.password))
        parts.append(struct.pack(">Q", entry.length))
        parts.append(bytes.fromhex(entry.sha256))

    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


def parse_store(data: bytes) -> VaultStore:
    """
    Décode un magasin sérialisé.

    Raises:
        CorruptionError: Empreinte, magique, version ou structure invalides
    """
    if len(data) < len(STORE_MAGIC) + DIGEST_SIZE:
        raise CorruptionError("Magasin trop court")
    body, digest = data[:-DIGEST_SIZE], data[-DIGEST_SIZE:]
    if hashlib.sha256(body).digest() != digest:
        raise CorruptionError("Empreinte du magasin invalide")

    reader = _StoreReader(body)
    if reader.take(len(STORE_MAGIC)) != STORE_MAGIC:
        raise CorruptionError("Magique du magasin invalide")
    version = reader.unpack(">H")
    if version != STORE_VERSION:
        raise CorruptionError(f"Version de magasin non supportée : {version}")

    store = VaultStore(version=version)
    for _ in range(reader.unpack(">I")):
        category = reader.text()
        if category in store.categories:
            raise CorruptionError(f"Catégorie en double : {category}")
        records = store.categories[category] = {}
        for _ in range(reader.unpack(">I")):
            name = reader.text()
            if name in records:
                raise CorruptionError(f"Entrée en double : {category}/{name}")
            records[name] = reader.text()

    for _ in range(reader.unpack(">I")):
        store.file_entries.append(FileEntry(
            name=reader.text(),
            path=reader.text(),
            password=reader.text(),
            length=reader.unpack(">Q"),
            sha256=reader.take(DIGEST_SIZE).hex(),
        ))

    if reader.pos != len(body):
        raise CorruptionError(f"{len(body) - reader.pos} octets en trop dans le magasin")
    return store


# -------------------------------------------------------------------------
# Cycle de vie du coffre
# -------------------------------------------------------------------------

def _master_bytes(master_password: Union[bytes, str]) -> bytes:
    if isinstance(master_password, str):
        return master_password.encode("utf-8")
    return bytes(master_password)


def _write_atomic(path: Path, data: bytes):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def vault_save(store: VaultStore):
    """
    Chiffre le magasin sous le mot de passe maître et remplace le fichier.

    Raises:
        InputError: Si le magasin n'est associé à aucun fichier
    """
    if store.path is None:
        raise InputError("Coffre sans chemin : utiliser vault_create")
    payload = serialize_store(store)
    _write_atomic(store.path, pack_container(payload, store.master_password))
    get_vsem_logger().info(f"Coffre enregistré : {store.path}")


def vault_create(path: PathLike, master_password: Union[bytes, str]) -> VaultStore:
    """
    Crée un coffre vide.

    Raises:
        InputError: Si le fichier existe déjà
    """
    path = Path(path)
    if path.exists():
        raise InputError(f"Le coffre existe déjà : {path}")
    store = VaultStore(path=path, master_password=_master_bytes(master_password))
    vault_save(store)
    return store


def vault_open(path: PathLike, master_password: Union[bytes, str]) -> VaultStore:
    """
    Ouvre un coffre : vérifie le bloc de contrôle puis décode le magasin.

    Raises:
        FileNotFoundError: Si le fichier n'existe pas
        ContainerFormatError: Si le fichier n'est pas un conteneur VSEM
        AuthenticationError: Mauvais mot de passe (magasin jamais décodé)
        CorruptionError: Magasin illisible après vérification
    """
    path = Path(path)
    data = path.read_bytes()
    if not is_container(data):
        raise ContainerFormatError(f"not a VSEM container : {path}")

    master = _master_bytes(master_password)
    _, payload = unpack_container(data, master)
    store = parse_store(payload)
    store.path = path
    store.master_password = master
    return store


@contextmanager
def vault_session(path: PathLike, master_password: Union[bytes, str]) -> Iterator[VaultStore]:
    """Ouvre le coffre sous verrou ; le verrou est libéré en sortie de bloc."""
    with VaultLock(path):
        yield vault_open(path, master_password)


# -------------------------------------------------------------------------
# Entrées texte
# -------------------------------------------------------------------------

def _check_name(label: str, value: str):
    if not value:
        raise InputError(f"Nom de {label} vide")


def vault_put_record(store: VaultStore, category: str, name: str, secret: str):
    """Ajoute ou remplace une entrée ; la catégorie est créée au besoin."""
    _check_name("catégorie", category)
    _check_name("entrée", name)
    store.categories.setdefault(category, {})[name] = secret


def vault_get_record(store: VaultStore, category: str, name: str) -> str:
    """
    Raises:
        NotFoundError: Catégorie ou entrée absente
    """
    records = store.categories.get(category)
    if records is None:
        raise NotFoundError(f"Catégorie introuvable : {category}")
    if name not in records:
        raise NotFoundError(f"Entrée introuvable : {category}/{name}")
    return records[name]


def vault_delete_record(store: VaultStore, category: str, name: str):
    """Supprime une entrée ; une catégorie vidée disparaît."""
    vault_get_record(store, category, name)
    del store.categories[category][name]
    if not store.categories[category]:
        del store.categories[category]


def vault_list(store: VaultStore, category: Optional[str] = None) -> List[str]:
    """
    Noms triés des catégories, ou des entrées d'une catégorie.

    Raises:
        NotFoundError: Catégorie absente
    """
    if category is None:
        return sorted(store.categories)
    if category not in store.categories:
        raise NotFoundError(f"Catégorie introuvable : {category}")
    return sorted(store.categories[category])


# -------------------------------------------------------------------------
# Fichiers chiffrés
# -------------------------------------------------------------------------

def generate_file_password(length: Optional[int] = None, seed: Optional[int] = None) -> str:
    """
    Mot de passe alphanumérique tiré d'un générateur variante 1.

    Args:
        length: Nombre de caractères (config si None)
        seed: Graine ; entropie système si None
    """
    if length is None:
        length = get_vsem_config().vault.password_length
    if seed is None:
        seed = secrets.randbits(64)
    gen = XorShiftGenerator(1, seed)
    last = len(PASSWORD_ALPHABET) - 1
    return "".join(PASSWORD_ALPHABET[gen.range(0, last)] for _ in range(length))


def vault_add_file(store: VaultStore, data: bytes, name: str) -> FileEntry:
    """
    Chiffre un fichier sous un mot de passe neuf et l'enregistre dans le magasin.

    Le magasin est modifié en mémoire ; vault_save le rend persistant.
    """
    _check_name("fichier", name)
    if store.path is None:
        raise InputError("Coffre sans chemin : impossible de stocker un fichier")

    password = generate_file_password()
    directory = blob_dir(store.path)
    directory.mkdir(exist_ok=True)
    relative = f"{secrets.token_hex(16)}.vsem"
    (directory / relative).write_bytes(pack_container(data, password))

    entry = FileEntry(
        name=name,
        path=relative,
        password=password,
        length=len(data),
        sha256=hashlib.sha256(data).hexdigest(),
    )
    store.file_entries.append(entry)
    get_vsem_logger().info(f"Fichier {name} ajouté ({len(data)} octets) : {relative}")
    return entry


def find_file(store: VaultStore, name: str) -> FileEntry:
    """
    Entrée de fichier par nom ; la plus récente si le nom est répété.

    Raises:
        NotFoundError: Aucun fichier de ce nom
    """
    for entry in reversed(store.file_entries):
        if entry.name == name:
            return entry
    raise NotFoundError(f"Fichier introuvable : {name}")


def vault_get_file(store: VaultStore, entry: FileEntry) -> bytes:
    """
    Déchiffre le fichier d'une entrée.

    Raises:
        CorruptionError: Fichier chiffré absent, altéré ou de longueur inattendue
    """
    if store.path is None:
        raise InputError("Coffre sans chemin")
    blob = blob_dir(store.path) / entry.path
    try:
        data = blob.read_bytes()
    except FileNotFoundError:
        raise CorruptionError(f"Fichier chiffré absent : {blob}") from None

    try:
        _, plain = unpack_container(data, entry.password)
    except (ContainerFormatError, AuthenticationError) as e:
        raise CorruptionError(f"Fichier chiffré altéré ({entry.name}) : {e}") from e

    if len(plain) != entry.length or hashlib.sha256(plain).hexdigest() != entry.sha256:
        raise CorruptionError(f"Contenu de {entry.name} altéré")
    return plain
