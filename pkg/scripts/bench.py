"""Time solve on growing instances and print the log-log slope.

    python3 scripts/bench.py                      # m = 2^16..2^21, span 256
    python3 scripts/bench.py --span 0 --runs 3    # random expanders

Same flags as ``edp3 bench``.
"""
import sys

from edp3.cli import main

if __name__ == "__main__":
    sys.exit(main(["bench", *sys.argv[1:]]))
