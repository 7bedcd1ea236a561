#!/usr/bin/env python3
"""Run the R-CH laboratory from a source checkout.

Usage:
    python scripts/rch.py verify --omega 0.3
    python scripts/rch.py simulate --config configs/breaking.cfg
"""

import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from rch_lab.cli import main

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nAborted.")
        sys.exit(1)
