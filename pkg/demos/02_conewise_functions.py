"""Conewise polynomial functions: the structure sheaf of a fan.

The sections of the structure sheaf over a subfan are tuples of
polynomials, one per maximal cone, agreeing on shared faces.  On the fan
of the four orthants in the plane they form a free module with the
classical basis 1, |x|, |y|, |xy|.

Lifting the same fan to the boundary of a 3-dimensional cone makes the
module structure richer: the new vertical coordinate acts as |x| + |y|,
and the boundary sections need only the two generators 1 and |x| over
QQ[x,y,z] -- the cover of this module is what makes the g-polynomial of
the square equal to 1 + t.

Run:  python3 demos/02_conewise_functions.py
"""

from klsc.fans import Fan, StructureSections, face_lattice


def main():
    orthants = Fan.from_max_cones(
        2,
        [(1, 0), (0, 1), (-1, 0), (0, -1)],
        [(0, 1), (1, 2), (2, 3), (3, 0)],
    )
    ss = StructureSections(orthants, bound=4)
    print("four orthants in the plane:")
    print("  dims of conewise polynomials by degree:", ss.dims())
    print("  minimal generators over QQ[x,y]:", ss.generator_shape())
    print("  free module:", ss.is_free())
    print()

    square_cone = face_lattice([(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)], 3)
    sigma = [i for i in range(square_cone.n_cones()) if square_cone.dim_of(i) == 3][0]
    boundary = StructureSections(square_cone, square_cone.boundary_subfan(sigma), bound=4)
    print("boundary of the cone over the square, as a module over QQ[x,y,z]:")
    print("  dims by degree:", boundary.dims())
    print("  minimal generators:", boundary.generator_shape(), " (these are 1 and |x|)")
    print("  free module:", boundary.is_free(), " (not flabby: the fan is not simplicial)")


if __name__ == "__main__":
    main()
