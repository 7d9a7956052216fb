import sys

from gpsbox.cli import main

sys.exit(main())
