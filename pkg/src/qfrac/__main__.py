import sys

from qfrac.cli import main

sys.exit(main())
