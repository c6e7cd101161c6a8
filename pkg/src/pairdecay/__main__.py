import sys

from pairdecay.cli import main

sys.exit(main())
