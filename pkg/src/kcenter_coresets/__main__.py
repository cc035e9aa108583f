"""
k-center coresets main entry point.

This module provides the main entry point for ``python -m kcenter_coresets``.
"""

import sys

from .cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
