"""Rejection of the two-lines function and recovery through the full pipeline.

g = 0 on {x2 = 1} and g = x1 on {x2 = 2} (x1 >= 0) agrees pointwise with one
of (0, x1) but is no min/max combination of them.  The bounded variant (x1 in
[0, eps] with eps infinitesimal) is rejected the same way, yet it is
1-Lipschitz, so the pipeline writes it with +, -, min, max.
"""

from tropilat import format_term, synth_lipschitz, synth_min_max, term_equals_pwa
from tropilat.instances import two_lines
from tropilat.pwa import lipschitz_search


def main():
    for compact in (False, True):
        g, gens, D = two_lines(compact)
        res = synth_min_max(g, gens, D)
        label = "bounded" if compact else "unbounded"
        x, y = res.witness
        print(f"{label}: accepted={res.accepted} witness x={x} y={y}")
        rep = lipschitz_search(g, 64)
        print(f"  Lipschitz search: {rep.decided} M={rep.M}")
        if rep.decided == "lipschitz":
            t = synth_lipschitz(g, gens, D, rep.M)
            print(f"  term: {format_term(t)}")
            print(f"  verified: {term_equals_pwa(t, gens, g, D)[0]}")


if __name__ == "__main__":
    main()
