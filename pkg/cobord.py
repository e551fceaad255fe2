import sys

from fgl_cobord.main import main

if __name__ == "__main__":
    sys.exit(main())
