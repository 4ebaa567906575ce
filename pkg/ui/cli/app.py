##############################################################
# Application en ligne de commande VSEM
##############################################################
import argparse
from pathlib import Path
from typing import List, Optional

from config.settings import VSEM_VERBOSE
from config.vsem_config import get_vsem_config
from core.ciphers import BLOCK_SIZE, Password, decrypt_image, encrypt_image
from core.container import container_payload, is_container, pack_container, unpack_container
from core.errors import InputError, UsageError, VsemError
from core.models import ChainSpec, Direction, GrayImage
from services.bench import format_csv, format_table, parse_size, run_bench
from services.metrics import adjacency_export, analyze, module_quality, sample_adjacent_pairs
from services.vault import (
    VaultLock,
    find_file,
    vault_add_file,
    vault_create,
    vault_delete_record,
    vault_get_file,
    vault_get_record,
    vault_list,
    vault_put_record,
    vault_save,
    vault_session,
)
from ui.base import UIApplication
from ui.cli.adapters import setup_console_loggers
from ui.cli.components import ConsoleInput
from ui.cli.rendering import ConsoleRenderer, mask_secret
from utils.images import bytes_as_image, load_pgm, read_pgm, write_pgm

EXIT_OK = 0
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser qui lève UsageError au lieu de quitter avec le code 2."""

    def __init__(self, *args, **kwargs):
        # "--password" ne doit pas être accepté comme abréviation
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message: str):
        raise UsageError(message)


def _add_password_source(parser: argparse.ArgumentParser, prefix: str = "password"):
    group = parser.add_mutually_exclusive_group()
    group.add_argument(f"--{prefix}-env", metavar="VAR", help="Variable d'environnement contenant le secret")
    group.add_argument(f"--{prefix}-file", metavar="PATH", help="Fichier dont la première ligne est le secret")


def _add_chain(parser: argparse.ArgumentParser):
    parser.add_argument("--chain", help="Étages : x,t,s,ct ou all (config par défaut)")


def _decode_secret(secret: bytes) -> str:
    # Les entrées du coffre sont du texte
    try:
        return secret.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError("Le secret doit être du texte UTF-8")


class VsemCliApp(UIApplication):
    """Point d'entrée : encrypt, decrypt, analyze, bench, vault."""

    def __init__(self, renderer: Optional[ConsoleRenderer] = None, input: Optional[ConsoleInput] = None):
        super().__init__()
        self.renderer = renderer or ConsoleRenderer()
        self.input = input or ConsoleInput()
        self.config = get_vsem_config()
        self.parser = self.build_parser()

    # Analyse des arguments

    def build_parser(self) -> argparse.ArgumentParser:
        parser = _Parser(prog="vsem", description="Chiffrement VSEM, analyse de qualité, mesures et coffre")
        parser.add_argument("--verbose", action="store_true", help="Affiche les messages INFO")
        commands = parser.add_subparsers(dest="command", required=True)

        p = commands.add_parser("encrypt", help="Chiffre un fichier dans un conteneur VSEM")
        p.add_argument("input")
        p.add_argument("output")
        _add_chain(p)
        p.add_argument("--image", action="store_true", help="Chiffre seulement les pixels d'une image PGM")
        _add_password_source(p)
        p.set_defaults(handler=self.cmd_encrypt)

        p = commands.add_parser("decrypt", help="Déchiffre un conteneur VSEM")
        p.add_argument("input")
        p.add_argument("output")
        p.add_argument("--image", action="store_true", help="Déchiffre les pixels d'une image produite par encrypt --image (avec --chain)")
        _add_chain(p)
        _add_password_source(p)
        p.set_defaults(handler=self.cmd_decrypt)

        p = commands.add_parser("analyze", help="EQ et corrélation des pixels adjacents")
        p.add_argument("orig", help="Image d'origine (PGM)")
        p.add_argument("enc", nargs="?", help="Image chiffrée (PGM) ou conteneur ; absente = chiffrement à la volée")
        p.add_argument("-n", type=int, help="Paires par direction")
        p.add_argument("--seed", type=int, help="Graine du tirage des pixels")
        p.add_argument("--csv-dir", help="Dossier des nuages de points par direction")
        p.add_argument("--json", action="store_true", help="Rapport JSON")
        p.add_argument("--modules", action="store_true", help="Compare x, t, s, ct et la chaîne complète")
        _add_chain(p)
        _add_password_source(p)
        p.set_defaults(handler=self.cmd_analyze)

        p = commands.add_parser("bench", help="Temps de chiffrement par module et par taille")
        p.add_argument("--sizes", help="Tailles séparées par des virgules (280K,1M,4M)")
        p.add_argument("--chains", help="Sélections séparées par des virgules (x,t,s,ct,all)")
        p.add_argument("--reps", type=int, help="Mesures par couple (médiane)")
        p.add_argument("--csv", action="store_true", help="Sortie CSV")
        p.add_argument("--throughput", action="store_true", help="Ajoute le tableau en Mio/s")
        p.add_argument("--blocks", action="store_true", help="Traitement par blocs de 4 Mio")
        p.add_argument("--no-decrypt", action="store_true", help="Ne mesure pas le déchiffrement")
        p.set_defaults(handler=self.cmd_bench)

        self._build_vault_parser(commands)
        return parser

    def _build_vault_parser(self, commands):
        vault = commands.add_parser("vault", help="Coffre de secrets et de fichiers")
        actions = vault.add_subparsers(dest="vault_command", required=True)

        def action(name: str, help_text: str, handler):
            p = actions.add_parser(name, help=help_text)
            p.add_argument("vault", help="Fichier du coffre")
            _add_password_source(p)
            p.set_defaults(handler=handler)
            return p

        action("init", "Crée un coffre vide", self.cmd_vault_init)

        p = action("list", "Liste catégories, entrées et fichiers", self.cmd_vault_list)
        p.add_argument("--category", help="Seulement les entrées de cette catégorie")

        p = action("put", "Ajoute ou remplace une entrée", self.cmd_vault_put)
        p.add_argument("category")
        p.add_argument("name")
        _add_password_source(p, prefix="secret")

        p = action("get", "Lit une entrée", self.cmd_vault_get)
        p.add_argument("category")
        p.add_argument("name")
        p.add_argument("--reveal", action="store_true", help="Affiche le secret en clair")

        p = action("delete", "Supprime une entrée", self.cmd_vault_delete)
        p.add_argument("category")
        p.add_argument("name")

        p = action("add-file", "Chiffre un fichier dans le coffre", self.cmd_vault_add_file)
        p.add_argument("file")
        p.add_argument("--name", help="Nom affiché (nom du fichier par défaut)")

        p = action("get-file", "Extrait un fichier du coffre", self.cmd_vault_get_file)
        p.add_argument("name")
        p.add_argument("output")

    # Utilitaires

    def _password(self, args, label: str = "Mot de passe", confirm: bool = False) -> Password:
        return self.input.get_secret(
            label,
            env_var=args.password_env,
            file_path=args.password_file,
            confirm=confirm,
        )

    def _chain(self, args) -> ChainSpec:
        return ChainSpec.from_names(args.chain or self.config.ciphers.default_chain)

    # Commandes

    def cmd_encrypt(self, args):
        data = Path(args.input).read_bytes()
        chain = self._chain(args)
        password = self._password(args, confirm=True)
        if args.image:
            out = write_pgm(encrypt_image(read_pgm(data), password, chain))
        else:
            out = pack_container(data, password, chain)
        Path(args.output).write_bytes(out)
        self.renderer.render_info(f"{args.output} : {len(out)} octets ({chain.label})")

    def cmd_decrypt(self, args):
        if args.chain and not args.image:
            raise UsageError("--chain ne sert qu'avec --image : un conteneur porte ses étages dans l'en-tête")
        data = Path(args.input).read_bytes()
        password = self._password(args)
        if args.image:
            out = write_pgm(decrypt_image(read_pgm(data), password, self._chain(args)))
        else:
            _, out = unpack_container(data, password)
        Path(args.output).write_bytes(out)
        self.renderer.render_info(f"{args.output} : {len(out)} octets")

    def _encrypted_image(self, args, orig: GrayImage) -> GrayImage:
        if args.enc is None:
            return encrypt_image(orig, self._password(args), self._chain(args))

        data = Path(args.enc).read_bytes()
        if not is_container(data):
            return read_pgm(data)
        # Les W×H derniers octets chiffrés, posés sur la grille de l'original
        payload = container_payload(data)
        size = orig.width * orig.height
        if len(payload) < size:
            raise InputError(
                f"Conteneur de {len(payload)} octets : {size} attendus pour "
                f"{orig.width}x{orig.height}"
            )
        if len(payload) > size:
            self.renderer.render_warning(
                f"Conteneur : {len(payload) - size} premiers octets chiffrés ignorés (en-tête PGM)"
            )
        return bytes_as_image(payload[len(payload) - size:], orig.width, orig.height)

    def cmd_analyze(self, args):
        metrics = self.config.metrics
        n = metrics.sample_size if args.n is None else args.n
        seed = metrics.sample_seed if args.seed is None else args.seed
        if n < 1:
            raise UsageError(f"-n doit être >= 1 (reçu {n})")

        orig = load_pgm(args.orig)
        if args.modules:
            reports = module_quality(orig, self._password(args), n=n, sample_seed=seed)
            for selection, report in reports.items():
                self.renderer.render_report(report, as_json=args.json, title=selection)
            return

        enc = self._encrypted_image(args, orig)
        report = analyze(orig, enc, n=n, sample_seed=seed)
        self.renderer.render_report(report, as_json=args.json)

        if args.csv_dir:
            directory = Path(args.csv_dir)
            directory.mkdir(parents=True, exist_ok=True)
            for direction in Direction:
                for role, img in (("enc", enc), ("orig", orig)):
                    sample = sample_adjacent_pairs(img, n, direction, seed)
                    path = directory / f"{role}_{direction.value}.csv"
                    path.write_text(adjacency_export(sample), encoding="utf-8")
            self.renderer.render_info(f"Nuages de points écrits dans {directory}")

    def cmd_bench(self, args):
        if args.reps is not None and args.reps < 1:
            raise UsageError(f"--reps doit être >= 1 (reçu {args.reps})")
        sizes = [parse_size(s) for s in args.sizes.split(",")] if args.sizes else None
        selections = [s.strip() for s in args.chains.split(",")] if args.chains else None

        results = run_bench(
            sizes=sizes,
            selections=selections,
            reps=args.reps,
            block_size=BLOCK_SIZE if args.blocks else 0,
            measure_decrypt=False if args.no_decrypt else None,
        )
        if args.csv:
            self.renderer.render_text(format_csv(results))
            return
        self.renderer.render_text(format_table(results))
        if args.throughput:
            self.renderer.render_text(format_table(results, throughput=True))

    # Coffre

    def cmd_vault_init(self, args):
        password = self._password(args, label="Mot de passe maître", confirm=True)
        with VaultLock(args.vault):
            vault_create(args.vault, password)
        self.renderer.render_info(f"Coffre créé : {args.vault}")

    def cmd_vault_list(self, args):
        with vault_session(args.vault, self._password(args, label="Mot de passe maître")) as store:
            if args.category:
                self.renderer.render_list(vault_list(store, args.category))
                return
            lines = [
                f"{category}/{name}"
                for category in vault_list(store)
                for name in vault_list(store, category)
            ]
            lines += [f"[fichier] {e.name} ({e.length} octets)" for e in store.file_entries]
            self.renderer.render_list(lines)

    def cmd_vault_put(self, args):
        with vault_session(args.vault, self._password(args, label="Mot de passe maître")) as store:
            secret = self.input.get_secret(
                f"Secret {args.category}/{args.name}",
                env_var=args.secret_env,
                file_path=args.secret_file,
            )
            if isinstance(secret, bytes):
                secret = _decode_secret(secret)
            vault_put_record(store, args.category, args.name, secret)
            vault_save(store)

    def cmd_vault_get(self, args):
        with vault_session(args.vault, self._password(args, label="Mot de passe maître")) as store:
            secret = vault_get_record(store, args.category, args.name)
        self.renderer.render_text(mask_secret(secret, args.reveal))

    def cmd_vault_delete(self, args):
        with vault_session(args.vault, self._password(args, label="Mot de passe maître")) as store:
            vault_delete_record(store, args.category, args.name)
            vault_save(store)

    def cmd_vault_add_file(self, args):
        source = Path(args.file)
        data = source.read_bytes()
        with vault_session(args.vault, self._password(args, label="Mot de passe maître")) as store:
            entry = vault_add_file(store, data, args.name or source.name)
            vault_save(store)
        self.renderer.render_info(f"{entry.name} ajouté ({entry.length} octets)")

    def cmd_vault_get_file(self, args):
        with vault_session(args.vault, self._password(args, label="Mot de passe maître")) as store:
            data = vault_get_file(store, find_file(store, args.name))
        Path(args.output).write_bytes(data)

    # Exécution

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Exécute une commande.

        Args:
            argv: Arguments (sys.argv[1:] par défaut)

        Returns:
            0 succès, 1 usage ou entrée, 2 authentification ou intégrité, 3 entrées/sorties
        """
        try:
            args = self.parser.parse_args(argv)
        except UsageError as e:
            self.renderer.render_error(str(e))
            return e.exit_code
        except SystemExit as e:
            # --help
            return e.code if isinstance(e.code, int) else EXIT_OK

        setup_console_loggers(args.verbose or VSEM_VERBOSE)
        try:
            args.handler(args)
        except VsemError as e:
            self.renderer.render_error(str(e))
            return e.exit_code
        except OSError as e:
            self.renderer.render_error(str(e))
            return EXIT_IO
        return EXIT_OK
