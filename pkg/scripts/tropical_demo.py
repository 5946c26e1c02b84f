"""Write val(g) on a box through +, -, min, max of val(f_i) and constants.

Usage: python3 scripts/tropical_demo.py [count]
"""

import sys
import time

from tropilat import demo_main_theorem, format_term
from tropilat.instances import demo_instances


def main(count=5):
    for k, (g, fs, B, M) in enumerate(demo_instances(0, count)):
        t0 = time.perf_counter()
        res = demo_main_theorem(g, fs, B, M)
        print(f"[{k}] g={g}  fs={len(fs)}  M={M}  ({time.perf_counter() - t0:.2f}s)")
        names = [f"val(f{i})" for i in range(len(fs))]
        print(f"     val(g) = {format_term(res.term, names)}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5)
