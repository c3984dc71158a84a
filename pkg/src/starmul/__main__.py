import sys

from starmul.cli import main

sys.exit(main())
