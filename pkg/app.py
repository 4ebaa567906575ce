import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent))
from ui.cli.app import VsemCliApp

if __name__ == "__main__":
    app = VsemCliApp()
    sys.exit(app.run())
