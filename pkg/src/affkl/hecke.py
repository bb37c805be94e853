"""Hecke algebras of the (extended) affine Weyl group.

* :class:`LaurentPoly`: sparse integer Laurent polynomials in v with the bar
  involution v -> v^{-1} and exact division.
* :class:`HeckeElem`: finitely supported Z[v, v^{-1}]-combinations of the
  standard basis (H_w), with the quadratic relation
  (H_s + v)(H_s - v^{-1}) = 0 and H_x H_y = H_{xy} when lengths add.
* Kazhdan-Lusztig basis via the right-descent recursion, memoized in memory
  and optionally in an append-only on-disk cache.
* Ingestion and validation of external tables for the characteristic-p
  canonical basis; the Kazhdan-Lusztig basis itself is the built-in
  "large p" instance.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import zlib

from . import weyl

__all__ = [
    "LaurentPoly",
    "v",
    "one",
    "HeckeElem",
    "unit",
    "standard",
    "mul",
    "bar",
    "kl_basis",
    "kl_poly",
    "p_kl_poly",
    "check_absorption",
    "finite_poincare",
    "box_normalizer",
    "PCanonicalTable",
    "TableValidationError",
    "builtin_kl_table",
    "load_pcanonical",
    "dump_pcanonical",
    "KLCache",
    "set_disk_cache",
]


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Sparse integer Laurent polynomial in v (exponent -> coefficient)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def term(cls, coeff, exp=0):
        return cls({exp: coeff})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.term(other)
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.term(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.term(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) - c
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.term(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def bar(self):
        """The involution v -> v^{-1}."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def coeff(self, exp):
        return self.coeffs.get(exp, 0)

    def evaluate_at_one(self):
        return sum(self.coeffs.values())

    def min_exp(self):
        return min(self.coeffs)

    def max_exp(self):
        return max(self.coeffs)

    def divide_exact(self, other):
        """Exact division in Z[v, v^{-1}]; returns None if not divisible."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly()
        rem = dict(self.coeffs)
        lo_e = other.min_exp()
        lo_c = other.coeffs[lo_e]
        quot = {}
        guard = 0
        while rem:
            guard += 1
            if guard > 10000:
                return None
            e = min(rem)
            c = rem[e]
            if c % lo_c != 0:
                return None
            q = c // lo_c
            qe = e - lo_e
            quot[qe] = q
            for oe, oc in other.coeffs.items():
                k = qe + oe
                nc = rem.get(k, 0) - q * oc
                if nc:
                    rem[k] = nc
                else:
                    rem.pop(k, None)
        return LaurentPoly(quot)

    def to_pairs(self):
        return sorted(self.coeffs.items())

    @classmethod
    def from_pairs(cls, pairs):
        return cls({int(e): int(c) for e, c in pairs})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                bits.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else str(c) + "*")
                bits.append("%sv^%d" % (head, e) if e != 1 else "%sv" % head)
        return " + ".join(bits).replace("+ -", "- ")


v = LaurentPoly.term(1, 1)
one = LaurentPoly.term(1)
vinv = LaurentPoly.term(1, -1)


def finite_poincare(datum):
    """sum over W_f of v^{2 l(x)}."""
    out = LaurentPoly()
    for x in _finite_elements(datum):
        out = out + LaurentPoly.term(1, 2 * x.length())
    return out


def box_normalizer(datum):
    """v^{-l(w_f)} * sum over W_f of v^{2 l(x)}: the exact divisor appearing
    in the alcove-basis normalization of the periodic module."""
    lw = weyl.longest_element(datum).length()
    return LaurentPoly.term(1, -lw) * finite_poincare(datum)


def _finite_elements(datum):
    cached = getattr(datum, "_finite_elements", None)
    if cached is None:
        gens = weyl.finite_generators(datum)
        seen = {weyl.identity(datum)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = weyl.multiply(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        cached = tuple(sorted(seen, key=weyl.sort_key))
        datum._finite_elements = cached
    return cached


# ---------------------------------------------------------------------------
# Hecke elements


class HeckeElem:
    """Finitely supported map W_ext -> Z[v, v^{-1}] in the standard basis."""

    __slots__ = ("datum", "support")

    def __init__(self, datum, support=None):
        self.datum = datum
        self.support = {w: p for w, p in (support or {}).items() if not p.is_zero()}

    def __eq__(self, other):
        return isinstance(other, HeckeElem) and self.support == other.support

    def is_zero(self):
        return not self.support

    def __add__(self, other):
        out = dict(self.support)
        for w, p in other.support.items():
            out[w] = out.get(w, LaurentPoly()) + p
        return HeckeElem(self.datum, out)

    def __sub__(self, other):
        out = dict(self.support)
        for w, p in other.support.items():
            out[w] = out.get(w, LaurentPoly()) - p
        return HeckeElem(self.datum, out)

    def scale(self, poly):
        return HeckeElem(self.datum, {w: p * poly for w, p in self.support.items()})

    def coeff(self, w):
        return self.support.get(w, LaurentPoly())

    def items_sorted(self):
        return sorted(self.support.items(), key=lambda kv: weyl.sort_key(kv[0]))

    def __repr__(self):
        if not self.support:
            return "HeckeElem(0)"
        bits = ["(%r)*H[%s]" % (p, weyl.to_text(w)) for w, p in self.items_sorted()]
        return " + ".join(bits)


def unit(datum):
    return HeckeElem(datum, {weyl.identity(datum): one})


def standard(w):
    return HeckeElem(w.datum, {w: one})


def _mul_gen(a, s):
    """Right multiplication by H_s for a generator s (length 1)."""
    out = {}
    for w, p in a.support.items():
        ws = weyl.multiply(w, s)
        if ws.length() > w.length():
            out[ws] = out.get(ws, LaurentPoly()) + p
        else:
            out[ws] = out.get(ws, LaurentPoly()) + p
            out[w] = out.get(w, LaurentPoly()) + p * (vinv - v)
    return HeckeElem(a.datum, out)


def _mul_omega(a, omega):
    return HeckeElem(a.datum, {weyl.multiply(w, omega): p for w, p in a.support.items()})


def mul_standard(a, y):
    """a * H_y for a single element y (factored as W-part then Omega-part)."""
    omega, u = weyl.omega_decompose(y)
    # H_y = H_{omega u} = H_{u'} H_omega with u' = omega u omega^{-1} in W
    uprime = weyl.multiply(weyl.multiply(omega, u), weyl.invert(omega))
    gens = weyl.all_generators(a.datum)
    out = a
    for i in weyl.reduced_word(uprime):
        out = _mul_gen(out, gens[i])
    if not omega.is_identity():
        out = _mul_omega(out, omega)
    return out


def mul(a, b):
    """Product in the extended Hecke algebra."""
    if a.datum is not b.datum:
        raise ValueError("elements over different root data")
    out = HeckeElem(a.datum)
    for y, p in b.support.items():
        out = out + mul_standard(a, y).scale(p)
    return out


def _bar_standard(datum, w):
    """bar(H_w) = (H_{w^{-1}})^{-1}, memoized; bar(H_omega) = H_omega."""
    cache = getattr(datum, "_bar_cache", None)
    if cache is None:
        cache = {}
        datum._bar_cache = cache
    if w in cache:
        return cache[w]
    omega, u = weyl.omega_decompose(w)
    uprime = weyl.multiply(weyl.multiply(omega, u), weyl.invert(omega))
    gens = weyl.all_generators(datum)
    out = unit(datum)
    for i in weyl.reduced_word(uprime):
        # bar(H_s) = H_s^{-1} = H_s + (v - v^{-1})
        out = _mul_gen(out, gens[i]) + out.scale(v - vinv)
    if not omega.is_identity():
        out = _mul_omega(out, omega)
    cache[w] = out
    return out


def bar(a):
    """The bar involution on the Hecke algebra."""
    out = HeckeElem(a.datum)
    for w, p in a.support.items():
        out = out + _bar_standard(a.datum, w).scale(p.bar())
    return out


# ---------------------------------------------------------------------------
# Kazhdan-Lusztig basis


_disk_cache = None


def set_disk_cache(cache):
    """Install a KLCache (or None) used by kl_basis for persistence."""
    global _disk_cache
    _disk_cache = cache


def _kl_memo(datum):
    memo = getattr(datum, "_kl_memo", None)
    if memo is None:
        memo = {}
        datum._kl_memo = memo
    return memo


def kl_basis(w):
    """The Kazhdan-Lusztig basis element attached to w.

    For w in W this is the unique bar-fixed H_w + sum_{y < w} h_{y,w} H_y
    with h_{y,w} in v Z[v]; for w = omega * u the extended element is
    H_omega * (KL element of u), i.e. a key shift.
    """
    datum = w.datum
    omega, u = weyl.omega_decompose(w)
    base = _kl_w(u)
    if omega.is_identity():
        return base
    return HeckeElem(datum, {weyl.multiply(omega, y): p for y, p in base.support.items()})


def _kl_w(u):
    datum = u.datum
    memo = _kl_memo(datum)
    if u in memo:
        return memo[u]
    if _disk_cache is not None:
        got = _disk_cache.get(datum, u)
        if got is not None:
            memo[u] = got
            return got
    gens = weyl.all_generators(datum)
    if u.length() == 0:
        out = unit(datum)
    else:
        word = weyl.reduced_word(u)
        s = gens[word[-1]]  # right descent of u
        uprev = weyl.multiply(u, s)
        prev = _kl_w(uprev)
        # (KL of u') * (H_s + v)
        cand = _mul_gen(prev, s) + prev.scale(v)
        # subtract mu-corrections at keys y with ys < y
        corr = HeckeElem(datum)
        for y, p in sorted(cand.support.items(),
                           key=lambda kv: -kv[0].length()):
            if y == u:
                continue
            if weyl.multiply(y, s).length() < y.length():
                # the KL part contributes no constant term at H_y, so the
                # constant term left after higher corrections is mu(y, u')
                mu = (p - corr.coeff(y)).coeff(0)
                if mu:
                    corr = corr + _kl_w(y).scale(LaurentPoly.term(mu))
        out = cand - corr
    memo[u] = out
    if _disk_cache is not None:
        _disk_cache.put(datum, u, out)
    return out


def kl_poly(y, w):
    """Coefficient of H_y in the KL element of w (zero when unsupported)."""
    return kl_basis(w).coeff(y)


def check_absorption(w, s):
    """For l(ws) < l(w): verify KL(w) * KL(s) == (v + v^{-1}) KL(w)."""
    if weyl.multiply(w, s).length() >= w.length():
        raise ValueError("absorption needs a right descent")
    lhs = mul(kl_basis(w), kl_basis(s))
    rhs = kl_basis(w).scale(v + vinv)
    return lhs == rhs


# ---------------------------------------------------------------------------
# persistent cache (append-only binary file)

_CACHE_MAGIC = b"AFKL"
_CACHE_VERSION = 1


class KLCache:
    """Append-only on-disk memo for KL elements.

    Layout: 4-byte magic, u32 version, 32-byte datum-hash (hex truncated to
    32 bytes of the digest), then records of the form
    ``u32 key_len | key | u32 val_len | val | u32 crc32(key + val)``.
    Keys are element texts; values are JSON support maps.  Torn or corrupted
    tail records are skipped (and recomputed), never trusted.
    """

    def __init__(self, path, datum):
        self.path = path
        self.datum = datum
        self.mem = {}
        self._load()

    def _header(self):
        return (
            _CACHE_MAGIC
            + struct.pack("<I", _CACHE_VERSION)
            + bytes.fromhex(self.datum.datum_hash)[:32]
        )

    def _load(self):
        if not os.path.exists(self.path):
            with open(self.path, "wb") as f:
                f.write(self._header())
            return
        with open(self.path, "rb") as f:
            blob = f.read()
        head = self._header()
        if not blob.startswith(head):
            # wrong datum or version: start over
            with open(self.path, "wb") as f:
                f.write(head)
            return
        pos = len(head)
        while pos + 4 <= len(blob):
            (klen,) = struct.unpack_from("<I", blob, pos)
            pos += 4
            if pos + klen + 4 > len(blob):
                break
            key = blob[pos:pos + klen]
            pos += klen
            (vlen,) = struct.unpack_from("<I", blob, pos)
            pos += 4
            if pos + vlen + 4 > len(blob):
                break
            val = blob[pos:pos + vlen]
            pos += vlen
            (crc,) = struct.unpack_from("<I", blob, pos)
            pos += 4
            if zlib.crc32(key + val) != crc:
                continue  # corrupted record: skip, will be recomputed
            try:
                self.mem[key.decode()] = json.loads(val.decode())
            except ValueError:
                continue

    def get(self, datum, u):
        raw = self.mem.get(weyl.to_text(u))
        if raw is None:
            return None
        return HeckeElem(datum, {
            weyl.from_text(datum, wt): LaurentPoly.from_pairs(pairs)
            for wt, pairs in raw.items()
        })

    def put(self, datum, u, elem):
        key = weyl.to_text(u)
        if key in self.mem:
            return  # write-once per key
        raw = {weyl.to_text(w): p.to_pairs() for w, p in elem.support.items()}
        self.mem[key] = raw
        kb = key.encode()
        vb = json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
        rec = (
            struct.pack("<I", len(kb)) + kb
            + struct.pack("<I", len(vb)) + vb
            + struct.pack("<I", zlib.crc32(kb + vb))
        )
        with open(self.path, "ab") as f:
            f.write(rec)


# ---------------------------------------------------------------------------
# p-canonical tables


class TableValidationError(ValueError):
    """Raised when an ingested table violates a structural invariant."""


class PCanonicalTable:
    """A (partial) table w -> {y -> poly} for a canonical basis.

    ``p`` is an integer or "infinity"; ``basis_kind`` is "H", "N" or "M"
    (algebra, antispherical or spherical coefficients).  The built-in
    instance is lazily backed by the Kazhdan-Lusztig basis.
    """

    def __init__(self, datum, p, basis_kind, entries=None, builtin=False, label=""):
        self.datum = datum
        self.p = p
        self.basis_kind = basis_kind
        self.entries = dict(entries or {})
        self.builtin = builtin
        self.label = label

    def has_column(self, w):
        return self.builtin or w in self.entries

    def column(self, w):
        """The column of w as a map y -> LaurentPoly."""
        if self.builtin:
            if self.basis_kind == "H":
                return dict(kl_basis(w).support)
            if self.basis_kind == "N":
                from . import parabolic
                return dict(parabolic.kl_N(w).support)
            from . import parabolic
            return dict(parabolic.kl_M(w).support)
        if w not in self.entries:
            raise KeyError("table has no column for %s" % weyl.to_text(w))
        return dict(self.entries[w])

    def as_hecke(self, w):
        if self.basis_kind != "H":
            raise ValueError("column is not an algebra element")
        return HeckeElem(self.datum, self.column(w))

    def value_at_one(self, y, w):
        col = self.column(w)
        p = col.get(y)
        return p.evaluate_at_one() if p is not None else 0

    @property
    def table_hash(self):
        if self.builtin:
            payload = "builtin:%s:%s:%s" % (self.datum.datum_hash, self.p, self.basis_kind)
            return hashlib.sha256(payload.encode()).hexdigest()
        body = {
            weyl.to_text(w): {
                weyl.to_text(y): p.to_pairs() for y, p in col.items()
            }
            for w, col in self.entries.items()
        }
        payload = json.dumps(
            {"datum": self.datum.datum_hash, "p": self.p,
             "basis": self.basis_kind, "entries": body},
            sort_keys=True, separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def builtin_kl_table(datum, basis_kind="H"):
    """The Kazhdan-Lusztig instance of the table (valid for p >> 0)."""
    return PCanonicalTable(datum, "infinity", basis_kind, builtin=True,
                           label="builtin-kl")


def _canonical_column(datum, basis_kind, y):
    if basis_kind == "H":
        return dict(kl_basis(y).support)
    from . import parabolic
    if basis_kind == "N":
        return dict(parabolic.kl_N(y).support)
    return dict(parabolic.kl_M(y).support)


def validate_table(table):
    """Check unitriangularity, bar self-duality and KL-positivity.

    Self-duality and positivity are checked together: the change of basis
    from each column to the Kazhdan-Lusztig basis (of the matching module)
    must have bar-symmetric coefficients with nonnegative integer entries.
    Raises TableValidationError naming the offending (y, w).
    """
    datum = table.datum
    for w in sorted(table.entries, key=weyl.sort_key):
        col = table.entries[w]
        diag = col.get(w)
        if diag is None or diag != one:
            raise TableValidationError(
                "unitriangularity fails at (%s, %s): diagonal entry is not 1"
                % (weyl.to_text(w), weyl.to_text(w))
            )
        for y in col:
            cmp = weyl.bruhat_leq(y, w)
            if cmp is not True:
                raise TableValidationError(
                    "unitriangularity fails at (%s, %s): support not below "
                    "the column index" % (weyl.to_text(y), weyl.to_text(w))
                )
        # greedy change of basis into the canonical (KL) family
        rem = {y: p for y, p in col.items() if not p.is_zero()}
        guard = 0
        while rem:
            guard += 1
            if guard > 100000:  # pragma: no cover
                raise TableValidationError("change of basis does not terminate")
            y = max(rem, key=weyl.sort_key)
            c = rem[y]
            if c != c.bar():
                raise TableValidationError(
                    "self-duality fails at (%s, %s): KL-coefficient %r is "
                    "not bar-symmetric" % (weyl.to_text(y), weyl.to_text(w), c)
                )
            if any(coef < 0 for coef in c.coeffs.values()):
                raise TableValidationError(
                    "positivity fails at (%s, %s): KL-coefficient %r has a "
                    "negative entry" % (weyl.to_text(y), weyl.to_text(w), c)
                )
            for z, p in _canonical_column(datum, table.basis_kind, y).items():
                npoly = rem.get(z, LaurentPoly()) - c * p
                if npoly.is_zero():
                    rem.pop(z, None)
                else:
                    rem[z] = npoly
    return True


def load_pcanonical(path, datum):
    """Load and eagerly validate a p-canonical table from JSON."""
    with open(path) as f:
        doc = json.load(f)
    return table_from_json(doc, datum)


def table_from_json(doc, datum):
    if doc.get("schema") != 1:
        raise TableValidationError("unsupported table schema version")
    datum_field = doc.get("datum", "")
    if datum_field and datum.datum_hash not in datum_field:
        raise TableValidationError("table was computed for a different datum")
    p = doc.get("p")
    if p != "infinity" and (not isinstance(p, int) or p < 2):
        raise TableValidationError("invalid p value %r" % (p,))
    basis = doc.get("basis", "H")
    if basis not in ("H", "N", "M"):
        raise TableValidationError("invalid basis kind %r" % (basis,))
    entries = {}
    for wt, col in doc.get("entries", {}).items():
        w = weyl.from_text(datum, wt)
        entries[w] = {
            weyl.from_text(datum, yt): LaurentPoly.from_pairs(pairs)
            for yt, pairs in col.items()
        }
    table = PCanonicalTable(datum, p, basis, entries,
                            label=doc.get("label", "file"))
    validate_table(table)
    return table


def dump_pcanonical(table):
    """Serialize a table to the JSON interchange form."""
    return {
        "schema": 1,
        "datum": "%s:%s" % (table.datum.label, table.datum.datum_hash),
        "p": table.p,
        "basis": table.basis_kind,
        "entries": {
            weyl.to_text(w): {
                weyl.to_text(y): p.to_pairs() for y, p in sorted(
                    col.items(), key=lambda kv: weyl.sort_key(kv[0]))
            }
            for w, col in sorted(table.entries.items(),
                                 key=lambda kv: weyl.sort_key(kv[0]))
        },
    }


def p_kl_poly(table, y, w):
    """The (y, w) entry of the table (zero when unsupported)."""
    if not table.has_column(w):
        raise KeyError("table has no column for %s" % weyl.to_text(w))
    return table.column(w).get(y, LaurentPoly())
