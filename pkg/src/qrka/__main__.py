import sys

from qrka.cli import main

sys.exit(main())
