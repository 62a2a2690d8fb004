"""Shared fixtures: small posets built by hand, independent of the library
code they are used to test."""

from itertools import combinations

from klsc.poset import RankedPoset


def square_cone_face_poset():
    """Face poset of the cone over a square, ordered by reverse inclusion
    and ranked by codimension: bottom = the 3-dimensional cone sigma,
    top = the origin.  Built by hand from the face combinatorics."""
    # elements: 0=sigma; 1..4 facets; 5..8 rays r0..r3; 9 = origin
    names = ["sigma", "F01", "F12", "F23", "F30", "r0", "r1", "r2", "r3", "0"]
    ranks = [0, 1, 1, 1, 1, 2, 2, 2, 2, 3]
    facet_rays = {1: (5, 6), 2: (6, 7), 3: (7, 8), 4: (8, 5)}
    covers = [(0, f) for f in (1, 2, 3, 4)]
    for f, rays in facet_rays.items():
        covers.extend((f, r) for r in rays)
    covers.extend((r, 9) for r in (5, 6, 7, 8))
    return RankedPoset(ranks, covers, names=names)


def simplex_cone_face_poset(d=3):
    """Face poset of a simplicial d-cone: subsets of d rays by reverse
    inclusion, ranked by codimension."""
    subsets = []
    for k in range(d + 1):
        subsets.extend(combinations(range(d), k))
    index = {s: i for i, s in enumerate(subsets)}
    ranks = [d - len(s) for s in subsets]
    covers = []
    for s in subsets:
        for t in subsets:
            if len(t) == len(s) - 1 and set(t) <= set(s):
                covers.append((index[s], index[t]))
    names = ["{" + ",".join(map(str, s)) + "}" for s in subsets]
    return RankedPoset(ranks, covers, names=names)


def uniform_flats_poset(k, n):
    """Lattice of flats of the uniform matroid U_{k,n}, by hand: subsets of
    size < k, plus the full ground set."""
    flats = []
    for size in range(k):
        flats.extend(frozenset(c) for c in combinations(range(n), size))
    flats.append(frozenset(range(n)))
    flats.sort(key=lambda f: (len(f), sorted(f)))
    index = {f: i for i, f in enumerate(flats)}
    ranks = [min(len(f), k) for f in flats]
    covers = []
    for f in flats:
        for g in flats:
            if ranks[index[g]] == ranks[index[f]] + 1 and f < g:
                covers.append((index[f], index[g]))
    names = ["{" + ",".join(map(str, sorted(f))) + "}" for f in flats]
    return RankedPoset(ranks, covers, names=names)


def brute_mobius(poset, x, y):
    """Independent Moebius recursion, straight from the definition."""
    if x == y:
        return 1
    total = 0
    for z in poset.interval(x, y):
        if z != y:
            total += brute_mobius(poset, x, z)
    return -total
