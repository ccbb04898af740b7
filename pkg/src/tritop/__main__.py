import sys

from tritop.cli import main

sys.exit(main())
