"""
MahlerChamp - Module entry point for ``python -m mahlerchamp``.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com
"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main() or 0)
