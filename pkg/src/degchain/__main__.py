import sys

from degchain.cli import main

sys.exit(main())
