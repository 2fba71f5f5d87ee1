import sys
from pathlib import Path

root = Path(__file__).resolve().parents[2]
for extra in (root / "build", root / "python"):
    if extra.is_dir():
        sys.path.insert(0, str(extra))
