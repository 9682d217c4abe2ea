"""Allow ``python -m predqueue.cli``."""

import sys

from .main import main

sys.exit(main())
