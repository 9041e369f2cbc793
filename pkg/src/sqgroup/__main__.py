import sys

from sqgroup.cli import main

sys.exit(main())
