"""Matroids, their lattices of flats, and the graded Moebius algebra.

A matroid is carried by its rank oracle; flats are enumerated by closure
BFS and assembled into a geometric lattice (atomicity and semimodularity
are checked).  Contractions are materialized as genuine matroids on a
canonically relabelled ground set, which is what lets the sheaf machinery
memoize isomorphic contractions.

The graded Moebius algebra has basis y_F over the flats with

    y_F y_G = h^{rk F + rk G - rk(F v G)} y_{F v G},

where h is the degree-one equivariant parameter; y_F sits in half-degree
rk F.
"""

from __future__ import annotations

import itertools

from klsc.errors import InvalidInputError, NotGeometricError
from klsc.field import GF, QQ
from klsc.linalg import RowSpace
from klsc.poset import RankedPoset


class Matroid:
    """A loopless matroid given by a rank oracle on frozensets."""

    def __init__(self, n, rank_fn, tag=None, validate=True):
        self.n = n
        self._rank_fn = rank_fn
        self._rank_cache = {}
        self.tag = tag
        self.rank = self.rank_of(frozenset(range(n)))
        self._flats = None
        self._lattice = None
        if validate and self.rank_of(frozenset()) != 0:
            raise InvalidInputError("rank of the empty set must be 0")
        if validate and any(
            self.rank_of(frozenset([e])) == 0 for e in range(n)
        ):
            raise InvalidInputError("matroid has a loop")

    # -- construction ------------------------------------------------------------

    @staticmethod
    def from_bases(n, bases) -> "Matroid":
        bs = [frozenset(b) for b in bases]
        if not bs:
            raise InvalidInputError("empty list of bases")
        size = len(bs[0])
        if any(len(b) != size for b in bs):
            raise InvalidInputError("bases of unequal size")
        if any(not b <= frozenset(range(n)) for b in bs):
            raise InvalidInputError("basis element out of range")
        bset = set(bs)
        for b1 in bs:
            for b2 in bs:
                for x in b1 - b2:
                    if not any((b1 - {x}) | {y} in bset for y in b2 - b1):
                        raise InvalidInputError(
                            f"bases violate the exchange axiom at {sorted(b1)}, "
                            f"{sorted(b2)}, element {x}"
                        )

        def rank_fn(s):
            return max(len(s & b) for b in bs)

        return Matroid(n, rank_fn)

    @staticmethod
    def uniform(k, n) -> "Matroid":
        if not 1 <= k <= n:
            raise InvalidInputError("uniform matroid needs 1 <= k <= n")
        return Matroid(n, lambda s: min(len(s), k), tag=("uniform", k, n))

    @staticmethod
    def boolean(n) -> "Matroid":
        return Matroid(n, len, tag=("boolean", n))

    @staticmethod
    def from_matrix(columns, field=QQ) -> "Matroid":
        """Matroid of a point configuration: columns of a matrix over an
        exact field; rank = matrix rank of the chosen columns."""
        cols = [[field.parse(c) for c in col] for col in columns]
        n = len(cols)

        def rank_fn(s):
            space = RowSpace(field, len(cols[0]) if cols else 0)
            for i in sorted(s):
                space.add(list(cols[i]))
            return space.dim

        return Matroid(n, rank_fn)

    @staticmethod
    def from_flats(n, flats) -> "Matroid":
        """From an explicit list of {"set": [...], "rank": r} records."""
        by_set = {}
        for rec in flats:
            by_set[frozenset(rec["set"])] = int(rec["rank"])
        ground = frozenset(range(n))
        if ground not in by_set:
            raise InvalidInputError("the ground set must be a flat")
        if frozenset() not in by_set or by_set[frozenset()] != 0:
            raise InvalidInputError("the empty set must be a flat of rank 0")
        sets = sorted(by_set, key=lambda f: (len(f), sorted(f)))
        for a in sets:
            for b in sets:
                if a & b not in by_set:
                    raise InvalidInputError("flats are not closed under intersection")

        def closure(s):
            best = ground
            for f in sets:
                if s <= f and len(f) < len(best):
                    best = f
            return best

        def rank_fn(s):
            return by_set[closure(frozenset(s))]

        m = Matroid(n, rank_fn)
        if {frozenset(f) for f in m.flats()} != set(by_set):
            raise InvalidInputError("flat list is not the lattice of a matroid")
        return m

    @staticmethod
    def graphic(n_vertices, edges) -> "Matroid":
        """Cycle matroid of a graph; ground set = edge list indices."""
        edges = [tuple(e) for e in edges]

        def rank_fn(s):
            parent = list(range(n_vertices))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            r = 0
            for i in sorted(s):
                a, b = edges[i]
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
                    r += 1
            return r

        return Matroid(len(edges), rank_fn)

    @staticmethod
    def fano() -> "Matroid":
        """PG(2, 2): the subspace lattice of GF(2)^3, as the matroid of all
        seven nonzero vectors."""
        cols = [
            [b % 2, (b >> 1) % 2, (b >> 2) % 2]
            for b in range(1, 8)
        ]
        vecs = [[GF(2).from_int(c) for c in col] for col in cols]

        def rank_fn(s):
            space = RowSpace(GF(2), 3)
            for i in sorted(s):
                space.add(list(vecs[i]))
            return space.dim

        return Matroid(7, rank_fn, tag=("fano",))

    @staticmethod
    def projective_geometry(q, d) -> "Matroid":
        """The matroid of all points of PG(d-1, q), whose lattice of flats
        is the lattice of subspaces of GF(q)^d."""
        field = GF(q)
        seen = {}
        for vec in itertools.product(range(q), repeat=d):
            if not any(vec):
                continue
            lead = next(v for v in vec if v)
            scaled = tuple(field.div(field.from_int(v), field.from_int(lead)) for v in vec)
            seen.setdefault(scaled, vec)
        cols = sorted(seen)

        def rank_fn(s):
            space = RowSpace(field, d)
            for i in sorted(s):
                space.add(list(cols[i]))
            return space.dim

        return Matroid(len(cols), rank_fn, tag=("pg", q, d))

    # -- rank, closure, flats -------------------------------------------------------

    def rank_of(self, s):
        s = frozenset(s)
        if s not in self._rank_cache:
            self._rank_cache[s] = self._rank_fn(s)
        return self._rank_cache[s]

    def closure(self, s):
        s = frozenset(s)
        r = self.rank_of(s)
        return frozenset(
            e for e in range(self.n) if e in s or self.rank_of(s | {e}) == r
        )

    def flats(self):
        """All flats, sorted by (rank, sorted elements)."""
        if self._flats is None:
            bottom = self.closure(frozenset())
            if bottom:
                raise InvalidInputError("matroid has a loop")
            seen = {bottom}
            frontier = [bottom]
            while frontier:
                nxt = []
                for f in frontier:
                    for e in range(self.n):
                        if e in f:
                            continue
                        g = self.closure(f | {e})
                        if g not in seen:
                            seen.add(g)
                            nxt.append(g)
                frontier = nxt
            self._flats = sorted(seen, key=lambda f: (self.rank_of(f), sorted(f)))
        return self._flats

    def lattice(self) -> RankedPoset:
        """The lattice of flats as a ranked poset (validated geometric)."""
        if self._lattice is None:
            flats = self.flats()
            index = {f: i for i, f in enumerate(flats)}
            covers = []
            for i, f in enumerate(flats):
                rf = self.rank_of(f)
                for j, g in enumerate(flats):
                    if self.rank_of(g) == rf + 1 and f < g:
                        covers.append((i, j))
            names = ["{" + ",".join(map(str, sorted(f))) + "}" for f in flats]
            poset = RankedPoset(
                [self.rank_of(f) for f in flats], covers, names=names
            )
            if not poset.is_geometric_lattice():
                raise NotGeometricError("lattice of flats is not geometric")
            self._lattice = poset
        return self._lattice

    def flat_index(self, f):
        flats = self.flats()
        return flats.index(frozenset(f))

    # -- contraction --------------------------------------------------------------------

    def contract(self, f) -> tuple["Matroid", dict]:
        """Contract by the flat f; the new ground set is E - f relabelled
        order-isomorphically to 0..m-1.  Returns (matroid, old -> new map)."""
        f = frozenset(f)
        if self.closure(f) != f:
            raise InvalidInputError("can only contract by a flat")
        rest = sorted(set(range(self.n)) - f)
        relabel = {e: i for i, e in enumerate(rest)}
        base_rank = self.rank_of(f)
        parent = self

        def rank_fn(s):
            lifted = frozenset(rest[i] for i in s)
            return parent.rank_of(lifted | f) - base_rank

        tag = None
        if self.tag and self.tag[0] == "uniform":
            _, k, n = self.tag
            tag = ("uniform", k - base_rank, n - len(f))
        elif self.tag and self.tag[0] == "boolean":
            tag = ("boolean", self.n - len(f))
        return Matroid(len(rest), rank_fn, tag=tag), relabel

    def canonical_key(self):
        """Memoization key; equal keys mean equal labelled lattices."""
        if self.tag and self.tag[0] in ("uniform", "boolean"):
            return self.tag
        return ("flats", self.n, frozenset(self.flats()))

    # -- structure tests ------------------------------------------------------------------

    def is_modular(self):
        """Every interval of the lattice of flats has as many atoms as
        coatoms."""
        L = self.lattice()
        for x in L.elements():
            for y in L.elements():
                if not L.lt(x, y):
                    continue
                atoms = sum(1 for z in L.covers_up[x] if L.leq(z, y))
                coatoms = sum(1 for z in L.covers_down[y] if L.leq(x, z))
                if atoms != coatoms:
                    return False
        return True

    def __repr__(self):
        return f"Matroid(n={self.n}, rank={self.rank}, tag={self.tag})"


def flats_from_bases(n, bases) -> Matroid:
    """Build the matroid and its flats from a bases list (validated)."""
    m = Matroid.from_bases(n, bases)
    m.flats()
    return m


def p_trivial_criterion(matroid: Matroid, p: int) -> bool:
    """The combinatorial test for mod-p triviality of the sheaf: the
    lattice is modular and no rank-2 interval has exactly 1 mod p middle
    elements."""
    GF(p)
    if not matroid.is_modular():
        return False
    L = matroid.lattice()
    for x in L.elements():
        for y in L.elements():
            if L.leq(x, y) and L.rank[y] - L.rank[x] == 2:
                middles = sum(
                    1
                    for z in L.interval(x, y)
                    if z != x and z != y
                )
                if middles % p == 1 % p:
                    return False
    return True


class MobiusAlgebra:
    """The graded Moebius algebra of the lattice of flats."""

    def __init__(self, matroid: Matroid):
        self.matroid = matroid
        self.lattice = matroid.lattice()
        self.flats = matroid.flats()

    def join(self, i, j):
        return self.lattice.join(i, j)

    def product(self, i, j):
        """y_i y_j = h^power y_join; returns (power, join index)."""
        L = self.lattice
        k = L.join(i, j)
        power = L.rank[i] + L.rank[j] - L.rank[k]
        return power, k

    def rho(self, i):
        """Restriction to the fixed point of flat i: a table
        flat j -> exponent of h, or None for zero."""
        L = self.lattice
        return {
            j: (L.rank[j] if L.leq(j, i) else None) for j in L.elements()
        }

    def phi(self, i):
        """Restriction to the contraction at flat i: a table
        flat j -> (exponent of h, flat of the contraction as a frozenset)."""
        L = self.lattice
        out = {}
        for j in L.elements():
            power, k = self.product(i, j)
            out[j] = (power, self.flats[k] - self.flats[i])
        return out

    def check_commutative_associative(self):
        L = self.lattice
        n = L.n
        for i in range(n):
            for j in range(n):
                if self.product(i, j) != self.product(j, i):
                    return False
        for i, j, k in itertools.product(range(n), repeat=3):
            p1, a = self.product(i, j)
            p2, b = self.product(a, k)
            q1, c = self.product(j, k)
            q2, d = self.product(i, c)
            if (p1 + p2, b) != (q1 + q2, d):
                return False
        return True
