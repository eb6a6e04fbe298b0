import sys

from parametric_lp.cli import main

sys.exit(main())
