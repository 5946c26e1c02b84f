import random

from hypothesis import given, strategies as st

from tropilat import (
    EQ, LT, AffineFunction, LinearConstraint, PolyhedralSet, Polyhedron, PwaFunction, closed_cells,
    linear_decomposition, make_special, separating_function, separating_hyperplane,
)
from tropilat.celldecomp import holds_star, verify_separation, verify_special
from tropilat.instances import affine
from tropilat.polyhedra import closure, feasible, find_point, set_equal

x0, x1 = AffineFunction.coordinate(0, 2), AffineFunction.coordinate(1, 2)


def _check_partition(S, cells, fns):
    S = S if isinstance(S, PolyhedralSet) else PolyhedralSet.of(S)
    for i, c in enumerate(cells):
        assert S.contains(c.sample())
        for d in cells[i + 1:]:
            assert find_point(c.polyhedron() & d.polyhedron()) is None
        for f in fns:
            signs = [feasible(c.polyhedron().intersect(LinearConstraint(s, r)))
                     for s, r in ((f, LT), (f, EQ), (-f, LT))]
            assert sum(signs) == 1
    assert set_equal(PolyhedralSet(S.dim, [c.polyhedron() for c in cells], S.height), S)


def test_square_cut_by_diagonal():
    S = Polyhedron.box([0, 0], [1, 1])
    cells = linear_decomposition(S, [x0 - x1])
    _check_partition(S, cells, [x0 - x1])
    # 4 vertices, 5 edges (4 sides and the diagonal), 2 triangles
    assert sorted(c.dim for c in cells) == [0] * 4 + [1] * 5 + [2] * 2


def test_nonconvex_union_and_special():
    S = PolyhedralSet.of(Polyhedron.box([0, 0], [1, 1]), Polyhedron.box([1, 0], [3, 2]))
    cells = linear_decomposition(S)
    _check_partition(S, cells, [])
    D = make_special(cells)
    assert verify_special(list(D.cells)) is None
    closed = closed_cells(D)
    assert set_equal(PolyhedralSet(2, [c.polyhedron for c in closed], 1), closure(S))


@given(st.integers(0, 10 ** 6))
def test_random_decomposition_is_a_partition(seed):
    rng = random.Random(seed)
    S = Polyhedron.box([rng.randint(-2, 0), rng.randint(-2, 0)], [rng.randint(1, 3), rng.randint(1, 3)])
    fns = [affine(rng, 2) for _ in range(rng.randint(0, 2))]
    fns = [f for f in fns if any(f.coeffs)]
    _check_partition(S, linear_decomposition(S, fns), fns)


def _maximal(S):
    return closed_cells(make_special(linear_decomposition(S)))


def test_separating_hyperplane_between_touching_cells():
    S = PolyhedralSet.of(Polyhedron.box([-1, 0], [0, 1]), Polyhedron.box([0, 0], [1, 1]))
    cA, cB = sorted(_maximal(S), key=lambda c: c.cell.sample()[0])
    cert = separating_hyperplane(cA, cB)
    assert verify_separation(cert)
    assert cert.H.is_z_affine()


def test_separating_function_for_distant_cells():
    A, B = Polyhedron.box([-2], [-1]), Polyhedron.box([1], [2])
    cA, cB = sorted(_maximal(PolyhedralSet.of(A, B)), key=lambda c: c.cell.sample()[0])
    one, zero = AffineFunction.constant(1, 1), AffineFunction.zero(1)
    g = PwaFunction(1, [(A, one), (B, zero)])
    sf = separating_function(cA, cB, g, [one, zero])
    # neither value works on both cells, so a hyperplane-based function is needed
    assert sf.form[0] in ("slab", "shift")
    assert holds_star(sf.fn, cA.polyhedron, one, cB.polyhedron, zero)
