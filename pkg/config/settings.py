"""Configuration de l'application."""
import os
from pathlib import Path

from dotenv import load_dotenv

# Charger les variables d'environnement
load_dotenv()

ROOT_DIR = Path(__file__).resolve().parent.parent

# Fichier YAML de configuration
VSEM_CONFIG = os.getenv("VSEM_CONFIG", str(ROOT_DIR / "vsem.yml"))

# Messages INFO sur la console
VSEM_VERBOSE = os.getenv("VSEM_VERBOSE", "false").lower() == "true"
