"""Lattice volumes of cubes and simplices, before and after a cut-and-paste map."""

from fractions import Fraction
from math import factorial

from tropilat import (
    LE, LT, AffineFunction, LinearConstraint, PolyhedralSet, Polyhedron, unimodular_transform, vol_n, vol_profile,
)


def simplex(n):
    xs = [AffineFunction.coordinate(i, n) for i in range(n)]
    total = sum(xs[1:], xs[0])
    return Polyhedron(n, [LinearConstraint(-x, LE) for x in xs]
                      + [LinearConstraint(total - AffineFunction.constant(1, n), LE)])


def main():
    for n in range(1, 5):
        cube = Polyhedron.box([0] * n, [1] * n)
        print(f"n={n}: cube {vol_n(cube, n)}, simplex {vol_n(simplex(n), n)} (1/n! = {Fraction(1, factorial(n))})")
    # cut the square along x0 = 1/2 and shear the right half far away
    S = Polyhedron.box([0, 0], [1, 1])
    x0 = AffineFunction.coordinate(0, 2)
    half = AffineFunction.constant(Fraction(1, 2), 2)
    left = S.intersect([LinearConstraint(x0 - half, LE)])
    right = S.intersect([LinearConstraint(half - x0, LT)])
    image = unimodular_transform(S, [(left, [[1, 0], [0, 1]], [0, 0]),
                                     (right, [[1, 2], [1, 3]], [100, 0])])
    print("square after cut-and-paste:", vol_n(image, 2))
    print("profile of square plus a far segment:",
          vol_profile(PolyhedralSet.of(S, Polyhedron.box([5, 0], [8, 0]))).entries)


if __name__ == "__main__":
    main()
