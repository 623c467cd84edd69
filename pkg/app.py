"""DiffInvariants command-line entry point.

    python app.py invariant p1 --n 2
    python app.py verify minor-law 3 --n 2 --mode eval --trials 5 --seed 7
    python app.py signature data/curves/cusp.txt --t0 1 --group gl_affine
"""
import sys

from cli.commands import main
from config.logger_config import setup_logger

if __name__ == "__main__":
    setup_logger("diff_invariants")
    sys.exit(main())
