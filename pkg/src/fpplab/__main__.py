import sys

from fpplab.cli import main

sys.exit(main())
