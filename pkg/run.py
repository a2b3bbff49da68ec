#!/usr/bin/env python
"""
Entry point for the Q-generic point set tools.

    python run.py construct --dim 2 --n 100 --form sphere -o points.json
    python run.py verify points.json
    python run.py serve
"""
import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent.absolute()
sys.path.insert(0, str(project_root))

if __name__ == "__main__":
    from app.cli import main

    sys.exit(main())
