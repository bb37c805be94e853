"""Root data: Cartan matrices, weights, pairings, rho and related constants.

A :class:`RootDatum` packages a finite crystallographic root system embedded
in a character lattice X = Z^lattice_rank:

* ``simple_roots`` are vectors in lattice coordinates,
* ``simple_coroots`` are covectors (pairing is the plain dot product),
* positive roots/coroots are enumerated by reflection closure, ordered by
  height then lexicographically (stable IDs for caches and output).

Weights are plain integer tuples; rational weights (alcove barycenters and
half-sums) are tuples of :class:`fractions.Fraction`.  All arithmetic is
exact.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from ._intlinalg import canonical_solution, smith_normal_form, solve_int

__all__ = [
    "RootDatum",
    "build_root_datum",
    "pair",
    "add_weights",
    "sub_weights",
    "neg_weight",
    "scale_weight",
]

# Cartan matrices of the supported named types, indexed by (letter, rank).
_NAMED_CARTAN = {
    ("A", 1): [[2]],
    ("A", 2): [[2, -1], [-1, 2]],
    ("A", 3): [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    ("B", 2): [[2, -2], [-1, 2]],
    ("C", 2): [[2, -1], [-2, 2]],
    ("G", 2): [[2, -1], [-3, 2]],
    ("B", 3): [[2, -1, 0], [-1, 2, -2], [0, -1, 2]],
    ("C", 3): [[2, -1, 0], [-1, 2, -1], [0, -2, 2]],
}


def pair(weight, covector):
    """Exact pairing <weight, covector> (dot product; works for Fractions)."""
    return sum(a * b for a, b in zip(weight, covector))


def add_weights(x, y):
    return tuple(a + b for a, b in zip(x, y))


def sub_weights(x, y):
    return tuple(a - b for a, b in zip(x, y))


def neg_weight(x):
    return tuple(-a for a in x)


def scale_weight(c, x):
    return tuple(c * a for a in x)


class RootDatum:
    """Immutable root datum; see module docstring.

    Positive roots are stored as parallel lists ``positive_roots`` /
    ``positive_coroots`` (the coroot at index i corresponds to the root at
    index i), together with their heights.
    """

    def __init__(self, cartan, simple_roots, simple_coroots, lattice_rank, label=""):
        self.rank = len(cartan)
        self.cartan = tuple(tuple(row) for row in cartan)
        self.lattice_rank = lattice_rank
        self.simple_roots = tuple(tuple(r) for r in simple_roots)
        self.simple_coroots = tuple(tuple(c) for c in simple_coroots)
        self.label = label
        self._validate_cartan()
        self._close_positive_roots()
        self._compute_constants()
        self._hash_cache = None

    # -- construction -----------------------------------------------------

    def _validate_cartan(self):
        n = self.rank
        c = self.cartan
        for i in range(n):
            if c[i][i] != 2:
                raise ValueError("Cartan matrix diagonal must be 2")
            for j in range(n):
                if i != j:
                    if c[i][j] > 0:
                        raise ValueError("Cartan off-diagonal entries must be <= 0")
                    if (c[i][j] == 0) != (c[j][i] == 0):
                        raise ValueError("Cartan zero pattern must be symmetric")
        if len(self.simple_roots) != n or len(self.simple_coroots) != n:
            raise ValueError("need one simple root and coroot per Cartan row")
        for i in range(n):
            for j in range(n):
                # <alpha_j, alpha_i^vee> must equal cartan[i][j]
                if pair(self.simple_roots[j], self.simple_coroots[i]) != c[i][j]:
                    raise ValueError(
                        "pairing of simple roots and coroots does not match "
                        "the Cartan matrix at (%d, %d)" % (i, j)
                    )

    def _close_positive_roots(self):
        """Enumerate positive (root, coroot) pairs by reflection closure.

        Each root carries its coefficient vector over the simple roots, so
        positivity and height need no linear solving.
        """
        n = self.rank
        # state: (root, coroot, root_coeffs, coroot_coeffs)
        seen = {}
        frontier = []
        for i in range(n):
            rc = tuple(1 if k == i else 0 for k in range(n))
            item = (self.simple_roots[i], self.simple_coroots[i], rc, rc)
            seen[item[0]] = item
            frontier.append(item)
        steps = 0
        while frontier:
            steps += 1
            if steps > 10000:
                raise ValueError("root closure does not terminate: not finite type")
            root, coroot, rc, cc = frontier.pop()
            for i in range(n):
                a = pair(root, self.simple_coroots[i])
                b = pair(self.simple_roots[i], coroot)
                nroot = sub_weights(root, scale_weight(a, self.simple_roots[i]))
                ncoroot = sub_weights(coroot, scale_weight(b, self.simple_coroots[i]))
                nrc = tuple(rc[k] - (a if k == i else 0) for k in range(n))
                ncc = tuple(cc[k] - (b if k == i else 0) for k in range(n))
                if all(v >= 0 for v in nrc) and any(v > 0 for v in nrc):
                    if nroot not in seen:
                        item = (nroot, ncoroot, nrc, ncc)
                        seen[nroot] = item
                        frontier.append(item)
        items = sorted(
            seen.values(), key=lambda it: (sum(it[2]), it[2], it[0])
        )
        self.positive_roots = tuple(it[0] for it in items)
        self.positive_coroots = tuple(it[1] for it in items)
        self.root_heights = tuple(sum(it[2]) for it in items)
        self.coroot_heights = tuple(sum(it[3]) for it in items)
        self.root_coeffs = tuple(it[2] for it in items)

    def _compute_constants(self):
        m = self.lattice_rank
        self.rho = tuple(
            sum(Fraction(r[k]) for r in self.positive_roots) / 2 for k in range(m)
        )
        # Coxeter number: 1 + height of the highest root.
        self.coxeter_number = 1 + max(self.root_heights)
        # varsigma: integer weight pairing to 1 with every simple coroot.
        rows = [list(c) for c in self.simple_coroots]
        sol = canonical_solution(rows, [1] * self.rank)
        if sol is None:
            raise ValueError(
                "no integer weight pairs to 1 with every simple coroot; "
                "this lattice is not supported"
            )
        self.varsigma = tuple(sol)
        self.is_semisimple = self.rank == self.lattice_rank
        if self.is_semisimple:
            root_cols = [
                [self.simple_roots[j][i] for j in range(self.rank)]
                for i in range(self.rank)
            ]
            self._snf_d, self._snf_p = smith_normal_form(root_cols)
        else:
            self._snf_d = self._snf_p = None

    # -- queries -----------------------------------------------------------

    def pair_simple(self, weight, i):
        """<weight, alpha_i^vee> for the i-th simple coroot."""
        return pair(weight, self.simple_coroots[i])

    def in_root_lattice(self, weight):
        """True iff the integer weight lies in the lattice spanned by the roots."""
        cols = [
            [r[i] for r in self.simple_roots] for i in range(self.lattice_rank)
        ]
        return solve_int(cols, list(weight)) is not None

    def root_lattice_class(self, weight):
        """A hashable key identifying weight + (root lattice); semisimple only."""
        if not self.is_semisimple:
            raise ValueError("quotient classes need a semisimple datum")
        v = [sum(self._snf_p[i][j] * weight[j] for j in range(self.rank))
             for i in range(self.rank)]
        key = []
        for vi, di in zip(v, self._snf_d):
            if di == 0:
                key.append(vi)
            else:
                key.append(vi % di)
        return tuple(key)

    def quotient_representatives(self):
        """Representatives of X / (root lattice), semisimple case (finite)."""
        if not self.is_semisimple:
            raise ValueError("the quotient is infinite for non-semisimple data")
        if any(d == 0 for d in self._snf_d):
            raise ValueError("degenerate root span")
        # weight with root_lattice_class == key: solve p @ w == residues mod d
        reps = {}
        from itertools import product as _product
        for residues in _product(*[range(d) for d in self._snf_d]):
            target = list(residues)
            # p is unimodular: w = p^{-1} @ target (solve exactly over Z)
            sol = solve_int([list(row) for row in self._snf_p], target)
            w = tuple(sol[0])
            reps[self.root_lattice_class(w)] = w
        return [reps[k] for k in sorted(reps)]

    def weight_in_lattice_p_multiple(self, weight, p):
        """Return mu with weight == p * mu if one exists in X, else None."""
        if all(v % p == 0 for v in weight):
            return tuple(v // p for v in weight)
        return None

    @property
    def datum_hash(self):
        if self._hash_cache is None:
            payload = json.dumps(
                {
                    "cartan": self.cartan,
                    "roots": self.simple_roots,
                    "coroots": self.simple_coroots,
                    "lattice_rank": self.lattice_rank,
                },
                sort_keys=True,
                separators=(",", ":"),
            )
            self._hash_cache = hashlib.sha256(payload.encode()).hexdigest()
        return self._hash_cache

    def __repr__(self):
        return "RootDatum(%s)" % (self.label or self.datum_hash[:8])


def complexity_bounds(datum):
    """(lo, hi, improved) word-length bounds for the datum.

    lo = sum of positive-root heights = 2 <rho^vee, rho>; hi = 2*lo - N and
    improved = lo - N where N is the number of positive roots.
    """
    lo = sum(datum.root_heights)
    n_pos = len(datum.positive_roots)
    return (lo, 2 * lo - n_pos, lo - n_pos)


def rho(datum):
    """Half-sum of the positive roots (tuple of Fractions)."""
    return datum.rho


def varsigma(datum):
    """The canonical integer weight pairing to 1 with all simple coroots."""
    return datum.varsigma


def _simply_connected(cartan, label):
    n = len(cartan)
    # lattice = weight lattice: coroots are the standard covectors, so the
    # j-th simple root has coordinates (cartan[0][j], ..., cartan[n-1][j]).
    coroots = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
    roots = [[cartan[i][j] for i in range(n)] for j in range(n)]
    return RootDatum(cartan, roots, coroots, n, label=label)


def build_root_datum(spec):
    """Build a RootDatum from a config mapping.

    Schema: ``{"schema": 1, "type": "C2" | null, "cartan": [[...]] | null,
    "lattice": "simply_connected" | {"roots": [[...]], "coroots": [[...]]}}``.
    A bare type string is also accepted.
    """
    if isinstance(spec, str):
        spec = {"type": spec, "lattice": "simply_connected"}
    if spec.get("schema", 1) != 1:
        raise ValueError("unsupported config schema version")
    type_name = spec.get("type")
    cartan = spec.get("cartan")
    if type_name:
        name = type_name.rstrip("~")
        key = (name[0].upper(), int(name[1:]))
        if key not in _NAMED_CARTAN:
            raise ValueError("unknown type %r" % type_name)
        named = _NAMED_CARTAN[key]
        if cartan is not None and [list(r) for r in cartan] != named:
            raise ValueError("explicit Cartan matrix contradicts the named type")
        cartan = named
        label = name[0].upper() + name[1:]
    elif cartan is not None:
        label = "custom"
    else:
        raise ValueError("config must give a type or a Cartan matrix")
    lattice = spec.get("lattice", "simply_connected")
    if lattice == "simply_connected":
        return _simply_connected(cartan, label)
    if isinstance(lattice, dict):
        body = lattice.get("embedding", lattice)
        roots = body["roots"]
        coroots = body["coroots"]
        return RootDatum(cartan, roots, coroots, len(roots[0]), label=label)
    raise ValueError("unsupported lattice description %r" % (lattice,))
