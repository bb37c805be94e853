"""Finite, affine, and extended affine Weyl groups.

An element of the extended group W_ext = W_f x X (semidirect product) is
stored in the normal form ``w * t_lambda``: a finite-part matrix acting on
the lattice and an integer translation.  The affine group W is the subgroup
with translation in the root lattice; the length-zero elements form Omega,
canonically isomorphic to X / (root lattice).

Lengths come from the closed formula

    l(w t_lambda) = sum_{a > 0, w(a) > 0} |<lambda, a^vee>|
                  + sum_{a > 0, w(a) < 0} |1 + <lambda, a^vee>|

and reduced words (lexicographically minimal, with the affine generator
named s0 sorting first) are derived views used by the Bruhat order and the
Hecke-algebra recursions.
"""

from __future__ import annotations

from fractions import Fraction

from .rootdata import RootDatum, add_weights, neg_weight, pair, scale_weight, sub_weights

__all__ = [
    "ExtElem",
    "identity",
    "translation",
    "from_finite_matrix",
    "multiply",
    "invert",
    "length",
    "finite_generators",
    "affine_generators",
    "all_generators",
    "generator_names",
    "omega_decompose",
    "omega_of_weight",
    "omega_elements",
    "tau",
    "reduced_word",
    "finite_word",
    "bruhat_leq",
    "is_min_in_coset",
    "is_fW",
    "is_fWext",
    "longest_element",
    "is_restricted",
    "dot_p",
    "enumerate_W",
    "enumerate_fW",
    "enumerate_fWext",
    "to_text",
    "from_text",
    "sort_key",
]


# ---------------------------------------------------------------------------
# per-datum caches (matrices, words, Omega data)


def _cache(datum):
    c = getattr(datum, "_weyl_cache", None)
    if c is None:
        c = {
            "inv": {},          # matrix -> inverse matrix
            "word": {},         # element key -> reduced word (affine gens)
            "fword": {},        # matrix -> reduced word over finite gens
            "bruhat": {},       # (key, key) -> bool
            "omega_by_class": {},
            "gens": None,
            "longest": {},
        }
        datum._weyl_cache = c
    return c


def _identity_matrix(m):
    return tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))


def _mat_apply(mat, vec):
    return tuple(sum(row[c] * vec[c] for c in range(len(vec))) for row in mat)


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_inv(datum, mat):
    cache = _cache(datum)["inv"]
    if mat in cache:
        return cache[mat]
    n = len(mat)
    a = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        f = a[col][col]
        a[col] = [v / f for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                g = a[r][col]
                a[r] = [v - g * w for v, w in zip(a[r], a[col])]
    inv = tuple(tuple(int(a[i][n + j]) for j in range(n)) for i in range(n))
    cache[mat] = inv
    cache[inv] = mat
    return inv


def _reflection_matrix(datum, root, coroot):
    m = datum.lattice_rank
    return tuple(
        tuple((1 if r == c else 0) - root[r] * coroot[c] for c in range(m))
        for r in range(m)
    )


# ---------------------------------------------------------------------------
# elements


class ExtElem:
    """Element w * t_lambda of W_ext, acting on V by v -> w(v + lambda)."""

    __slots__ = ("datum", "fin", "trans", "_len", "_hash")

    def __init__(self, datum, fin, trans):
        self.datum = datum
        self.fin = fin
        self.trans = tuple(trans)
        self._len = None
        self._hash = None

    def key(self):
        return (self.fin, self.trans)

    def __eq__(self, other):
        return (
            isinstance(other, ExtElem)
            and self.fin == other.fin
            and self.trans == other.trans
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.fin, self.trans))
        return self._hash

    def apply(self, point):
        """Action on a (possibly rational) point: v -> fin(v + trans)."""
        return _mat_apply(self.fin, add_weights(point, self.trans))

    def is_identity(self):
        return self.trans == (0,) * self.datum.lattice_rank and \
            self.fin == _identity_matrix(self.datum.lattice_rank)

    def length(self):
        if self._len is None:
            self._len = length(self)
        return self._len

    def __repr__(self):
        return "ExtElem(%s)" % to_text(self)


def identity(datum):
    return ExtElem(datum, _identity_matrix(datum.lattice_rank),
                   (0,) * datum.lattice_rank)


def translation(datum, weight):
    return ExtElem(datum, _identity_matrix(datum.lattice_rank), weight)


def from_finite_matrix(datum, mat):
    return ExtElem(datum, mat, (0,) * datum.lattice_rank)


def multiply(x, y):
    """(w t_l)(w' t_m) = (w w') t_{w'^{-1}(l) + m}."""
    if x.datum is not y.datum:
        raise ValueError("elements over different root data")
    winv = _mat_inv(x.datum, y.fin)
    return ExtElem(
        x.datum,
        _mat_mul(x.fin, y.fin),
        add_weights(_mat_apply(winv, x.trans), y.trans),
    )


def invert(x):
    """(w t_l)^{-1} = w^{-1} t_{-w(l)}."""
    return ExtElem(
        x.datum, _mat_inv(x.datum, x.fin), neg_weight(_mat_apply(x.fin, x.trans))
    )


def multiply_all(elems):
    out = elems[0]
    for e in elems[1:]:
        out = multiply(out, e)
    return out


def length(x):
    """Closed length formula on W_ext (see module docstring)."""
    d = x.datum
    total = 0
    for root, coroot in zip(d.positive_roots, d.positive_coroots):
        n = pair(x.trans, coroot)
        image = _mat_apply(x.fin, root)
        if image in _positive_root_set(d):
            total += abs(n)
        else:
            total += abs(1 + n)
    return total


def _positive_root_set(datum):
    s = getattr(datum, "_posroot_set", None)
    if s is None:
        s = frozenset(datum.positive_roots)
        datum._posroot_set = s
    return s


# ---------------------------------------------------------------------------
# generators


def finite_generators(datum):
    """The simple reflections s_1 .. s_n as ExtElems (trivial translation)."""
    return [
        from_finite_matrix(
            datum, _reflection_matrix(datum, datum.simple_roots[i], datum.simple_coroots[i])
        )
        for i in range(datum.rank)
    ]


def _components(datum):
    """Connected components of the Cartan graph, as sorted index lists."""
    n = datum.rank
    seen = [False] * n
    comps = []
    for i in range(n):
        if seen[i]:
            continue
        comp, stack = [], [i]
        seen[i] = True
        while stack:
            j = stack.pop()
            comp.append(j)
            for k in range(n):
                if not seen[k] and datum.cartan[j][k] != 0:
                    seen[k] = True
                    stack.append(k)
        comps.append(sorted(comp))
    return comps


def affine_generators(datum):
    """One affine reflection t_theta s_theta per irreducible component.

    theta is the root whose coroot is the highest coroot of the component;
    in pair form the generator is (matrix of s_theta, -theta).
    """
    gens = []
    for comp in _components(datum):
        best = None
        for idx in range(len(datum.positive_roots)):
            if any(datum.root_coeffs[idx][i] for i in comp):
                h = datum.coroot_heights[idx]
                if best is None or h > datum.coroot_heights[best]:
                    best = idx
        root = datum.positive_roots[best]
        coroot = datum.positive_coroots[best]
        mat = _reflection_matrix(datum, root, coroot)
        gens.append(ExtElem(datum, mat, neg_weight(root)))
    return gens


def all_generators(datum):
    """The full generating set S, affine generators first (index order)."""
    c = _cache(datum)
    if c["gens"] is None:
        c["gens"] = tuple(affine_generators(datum) + finite_generators(datum))
    return c["gens"]


def generator_names(datum):
    n_aff = len(_components(datum))
    if n_aff == 1:
        names = ["s0"]
    else:
        names = ["s0_%d" % k for k in range(n_aff)]
    names += ["s%d" % (i + 1) for i in range(datum.rank)]
    return names


# ---------------------------------------------------------------------------
# Omega and decompositions


def _b0(datum):
    b = getattr(datum, "_b0", None)
    if b is None:
        h = datum.coxeter_number
        b = tuple(c / h for c in datum.rho)
        datum._b0 = b
    return b


def _affine_walls(datum):
    """(root, coroot) of the highest coroot per component (affine walls)."""
    walls = getattr(datum, "_aff_walls", None)
    if walls is None:
        walls = []
        for g in affine_generators(datum):
            root = neg_weight(g.trans)
            idx = datum.positive_roots.index(root)
            walls.append((root, datum.positive_coroots[idx]))
        datum._aff_walls = tuple(walls)
    return walls


def walk_to_fundamental(datum, point):
    """Return y in W with y(point) inside the closed fundamental alcove."""
    gens = all_generators(datum)
    n_aff = len(_components(datum))
    y = identity(datum)
    q = tuple(Fraction(c) for c in point)
    guard = 0
    while True:
        guard += 1
        if guard > 100000:
            raise RuntimeError("alcove walk does not terminate")
        moved = False
        for i in range(datum.rank):
            if pair(q, datum.simple_coroots[i]) < 0:
                g = gens[n_aff + i]
                q = g.apply(q)
                y = multiply(g, y)
                moved = True
                break
        if moved:
            continue
        for j, (_, coroot) in enumerate(_affine_walls(datum)):
            if pair(q, coroot) > 1:
                g = gens[j]
                q = g.apply(q)
                y = multiply(g, y)
                moved = True
                break
        if not moved:
            return y


def omega_of_weight(datum, weight):
    """(omega_lambda, x_lambda): x_lambda(A_fund) = lambda + A_fund in W,
    and omega_lambda = x_lambda^{-1} t_lambda has length zero."""
    weight = tuple(weight)
    memo = getattr(datum, "_omega_memo", None)
    if memo is None:
        memo = {}
        datum._omega_memo = memo
    if weight not in memo:
        y = walk_to_fundamental(datum, add_weights(weight, _b0(datum)))
        x_lambda = invert(y)
        omega = multiply(invert(x_lambda), translation(datum, weight))
        memo[weight] = (omega, x_lambda)
    return memo[weight]


def _in_root_lattice(datum, weight):
    if datum.is_semisimple:
        return all(v == 0 for v in datum.root_lattice_class(weight))
    return datum.in_root_lattice(weight)


def omega_decompose(x):
    """x = omega * w with l(omega) = 0 and w in W (trans in the root lattice).

    omega depends only on the class of trans(x) in X / (root lattice).
    """
    datum = x.datum
    cache = _cache(datum)["omega_by_class"]
    if datum.is_semisimple:
        cls = datum.root_lattice_class(x.trans)
    else:
        cls = x.trans  # no finite quotient; memoize per translation
    omega = cache.get(cls)
    if omega is None:
        omega, _ = omega_of_weight(datum, x.trans)
        if omega.length() != 0:
            raise RuntimeError("omega part has nonzero length")
        cache[cls] = omega
    w = multiply(invert(omega), x)
    return omega, w


def omega_elements(datum):
    """The finite group Omega, ordered by quotient-class key (semisimple)."""
    elems = getattr(datum, "_omega_elements", None)
    if elems is None:
        elems = tuple(
            omega_of_weight(datum, rep)[0]
            for rep in datum.quotient_representatives()
        )
        datum._omega_elements = elems
    return elems


def tau(datum, lam, w):
    """Conjugation by omega_lambda: a length-preserving permutation of S."""
    omega, _ = omega_of_weight(datum, lam)
    return multiply(multiply(omega, w), invert(omega))


# ---------------------------------------------------------------------------
# words, Bruhat order, enumeration


def reduced_word(x):
    """Lexicographically minimal reduced word of x in W over the names of S.

    Returns a tuple of generator indices into all_generators(x.datum).
    """
    datum = x.datum
    cache = _cache(datum)["word"]
    key = x.key()
    if key in cache:
        return cache[key]
    gens = all_generators(datum)
    chain = []
    cur = x
    path = []
    while True:
        ck = cur.key()
        if ck in cache:
            base = cache[ck]
            break
        lc = cur.length()
        if lc == 0:
            if not cur.is_identity():
                raise ValueError("element is not in the affine Weyl group")
            base = ()
            break
        for i, g in enumerate(gens):
            nxt = multiply(g, cur)
            if nxt.length() < lc:
                path.append((ck, i))
                cur = nxt
                break
        else:  # pragma: no cover - cannot happen for W elements
            raise RuntimeError("no descent found")
    cache[cur.key()] = base
    for ck, i in reversed(path):
        base = (i,) + base
        cache[ck] = base
    return cache[key]


def finite_word(datum, mat):
    """Reduced word of a finite Weyl group element over s_1 .. s_n (indices
    are 1-based simple-reflection numbers)."""
    cache = _cache(datum)["fword"]
    if mat in cache:
        return cache[mat]
    gens = finite_generators(datum)

    def n_inv(m):
        pos = _positive_root_set(datum)
        return sum(1 for r in datum.positive_roots if _mat_apply(m, r) not in pos)

    word = []
    cur = mat
    ln = n_inv(cur)
    while ln > 0:
        for i, g in enumerate(gens):
            nxt = _mat_mul(g.fin, cur)
            if n_inv(nxt) < ln:
                word.append(i + 1)
                cur = nxt
                ln -= 1
                break
        else:  # pragma: no cover
            raise RuntimeError("no finite descent found")
    out = tuple(word)
    cache[mat] = out
    return out


def bruhat_leq(x, y):
    """Bruhat order on W_ext.

    Returns True/False for elements in the same Omega-coset and None
    ("incomparable") otherwise.
    """
    ox, wx = omega_decompose(x)
    oy, wy = omega_decompose(y)
    if ox != oy:
        return None
    return _bruhat_w(wx, wy)


def _bruhat_w(u, w):
    datum = u.datum
    cache = _cache(datum)["bruhat"]
    key = (u.key(), w.key())
    if key in cache:
        return cache[key]
    if u.length() > w.length():
        res = False
    elif w.length() == 0:
        res = u.length() == 0
    else:
        gens = all_generators(datum)
        s = gens[reduced_word(w)[0]]  # a left descent of w
        sw = multiply(s, w)
        su = multiply(s, u)
        if su.length() < u.length():
            res = _bruhat_w(su, sw)
        else:
            res = _bruhat_w(u, sw)
    cache[key] = res
    return res


def is_min_in_coset(w, parabolic):
    """True iff l(g w) > l(w) for every generator g in the parabolic set."""
    lw = w.length()
    return all(multiply(g, w).length() > lw for g in parabolic)


def is_fW(w):
    """Minimal in W_f w and a member of W."""
    if not _in_root_lattice(w.datum, w.trans):
        return False
    return is_min_in_coset(w, finite_generators(w.datum))


def is_fWext(w):
    """Minimal in W_f w inside W_ext."""
    return is_min_in_coset(w, finite_generators(w.datum))


def longest_element(datum, indices=None):
    """Longest element of the standard parabolic of W_f given by 1-based
    simple-reflection indices (default: all of S_f)."""
    if indices is None:
        indices = tuple(range(1, datum.rank + 1))
    indices = tuple(sorted(indices))
    cache = _cache(datum)["longest"]
    if indices in cache:
        return cache[indices]
    gens = [finite_generators(datum)[i - 1] for i in indices]
    if not gens:
        out = identity(datum)
    else:
        seen = {identity(datum)}
        frontier = [identity(datum)]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = multiply(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
            if len(seen) > 10 ** 6:  # pragma: no cover
                raise RuntimeError("parabolic subgroup is not finite")
        out = max(seen, key=lambda e: e.length())
    cache[indices] = out
    return out


def dot_p(w, lam, p):
    """Dilated dot action: (u t_mu) dot_p lam = u(lam + p mu + varsigma) - varsigma."""
    d = w.datum
    inner = add_weights(add_weights(lam, scale_weight(p, w.trans)), d.varsigma)
    return sub_weights(_mat_apply(w.fin, inner), d.varsigma)


def is_restricted(w, datum=None):
    """True iff w dot_p 0 lies in the restricted box 0 <= <., a^vee> <= p-1.

    The verdict does not depend on p; it is evaluated at p0 = 2h + 1.
    """
    d = datum or w.datum
    p0 = 2 * d.coxeter_number + 1
    lam = dot_p(w, (0,) * d.lattice_rank, p0)
    return all(0 <= pair(lam, c) <= p0 - 1 for c in d.simple_coroots)


def enumerate_W(datum, max_len):
    """All W-elements of length <= max_len in (length, lex word) order."""
    gens = all_generators(datum)
    out = [identity(datum)]
    level = {identity(datum): ()}
    for ln in range(1, max_len + 1):
        nxt = {}
        for x, word in level.items():
            for i, g in enumerate(gens):
                y = multiply(x, g)
                if y.length() == ln and y not in nxt:
                    nxt[y] = None
        ordered = sorted(nxt, key=reduced_word)
        out.extend(ordered)
        level = {y: None for y in ordered}
    return out


def enumerate_fW(datum, max_len):
    return [w for w in enumerate_W(datum, max_len) if is_fW(w)]


def enumerate_fWext(datum, max_len):
    """Elements w*omega, w in fW with l(w) <= max_len, omega in Omega."""
    out = []
    for w in enumerate_fW(datum, max_len):
        for om in omega_elements(datum):
            out.append(multiply(w, om))
    return out


def sort_key(x):
    """Deterministic total order key on W_ext elements (semisimple data)."""
    omega, w = omega_decompose(x)
    if x.datum.is_semisimple:
        oix = omega_elements(x.datum).index(omega)
    else:
        oix = omega.trans
    return (x.length(), reduced_word(w), oix)


# ---------------------------------------------------------------------------
# text encoding: "w: s1 s2 | t: (a,b) | omega: k"


def to_text(x):
    """Canonical text form: finite word of the finite part plus translation."""
    parts = []
    fw = finite_word(x.datum, x.fin)
    if fw:
        parts.append("w: " + " ".join("s%d" % i for i in fw))
    if any(x.trans):
        parts.append("t: (%s)" % ",".join(str(v) for v in x.trans))
    if not parts:
        return "e"
    return " | ".join(parts)


def from_text(datum, text):
    """Parse the element text encoding (inverse of to_text; also accepts
    affine generators inside the word and an 'omega: k' factor)."""
    text = text.strip()
    if text == "e" or not text:
        return identity(datum)
    names = generator_names(datum)
    by_name = dict(zip(names, all_generators(datum)))
    result = identity(datum)
    for field in text.split("|"):
        field = field.strip()
        if field.startswith("w:"):
            for tok in field[2:].split():
                if tok not in by_name:
                    raise ValueError("unknown generator %r" % tok)
                result = multiply(result, by_name[tok])
        elif field.startswith("t:"):
            body = field[2:].strip()
            if not (body.startswith("(") and body.endswith(")")):
                raise ValueError("translation must look like (a,b)")
            coords = tuple(int(v) for v in body[1:-1].split(","))
            if len(coords) != datum.lattice_rank:
                raise ValueError("translation has wrong dimension")
            result = multiply(result, translation(datum, coords))
        elif field.startswith("omega:"):
            k = int(field[6:])
            result = multiply(result, omega_elements(datum)[k])
        else:
            raise ValueError("unknown field %r" % field)
    return result
