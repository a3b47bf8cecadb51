import sys

from pyschwa.cli import main

sys.exit(main())
