"""Mod-p KL-polynomials of matroids and the triviality criterion.

Over GF(p) the same sheaf recursion runs, but boundary modules may need
generators at or above half the rank -- the degrees forbidden over the
rationals -- and the stalk Poincare polynomials change.  The subspace
lattice of GF(2)^3 (the Fano plane) is the showcase: its mod-p polynomial
is trivial if and only if p is not 2.

A purely combinatorial criterion predicts triviality: the lattice must be
modular and no rank-2 interval may have 1 mod p middle elements.

Run:  python3 demos/05_mod_p.py
"""

from klsc.field import GF, QQ
from klsc.matroids import Matroid, p_trivial_criterion
from klsc.matroid_ih import matroid_sheaf
from klsc.poly import UniPoly


def main():
    fano = Matroid.fano()
    print("Fano plane = subspace lattice of GF(2)^3:",
          f"{len(fano.flats())} flats, modular: {fano.is_modular()}")
    print("  P over QQ :", matroid_sheaf(fano, QQ).kl_polynomial())
    for p in (2, 3, 5):
        s = matroid_sheaf(fano, GF(p))
        print(f"  P mod {p}  : {s.kl_polynomial()}   Z mod {p}: {s.z_polynomial()}")
    print()

    print("the criterion (modular, no rank-2 interval with 1 mod p middles)")
    print("matches the computed sheaves:")
    one = UniPoly.one()
    corpus = [
        ("fano  ", fano),
        ("B3    ", Matroid.boolean(3)),
        ("U(2,3)", Matroid.uniform(2, 3)),
        ("U(3,4)", Matroid.uniform(3, 4)),
    ]
    for label, m in corpus:
        for p in (2, 3, 5):
            s = matroid_sheaf(m, GF(p))
            trivial = all(
                s.stalk_poincare(j) == one for j in range(len(s.flats))
            )
            predicted = p_trivial_criterion(m, p)
            print(f"  {label} p={p}: trivial={trivial}, predicted={predicted},"
                  f" agree={trivial == predicted}")
    print()

    print("the mod-p Z-polynomial still decomposes over flats and is palindromic:")
    for p in (2, 3):
        s = matroid_sheaf(fano, GF(p))
        total = UniPoly.zero()
        for j in range(len(s.flats)):
            total = total + s.stalk_poincare(j).shift(s.lattice.rank[j])
        print(f"  p={p}: sum over flats = {total} == Z: {total == s.z_polynomial()},"
              f" palindromic: {s.z_polynomial().reverse_check(fano.rank)}")


if __name__ == "__main__":
    main()
