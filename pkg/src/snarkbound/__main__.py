"""Allow running as: python -m snarkbound"""

from .run import main

if __name__ == "__main__":
    raise SystemExit(main())
