import sys

from mammocad.cli import main

if __name__ == "__main__":
    sys.exit(main())
