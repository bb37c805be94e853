"""The periodic module: a free Z[v, v^{-1}]-module on alcoves.

The right action of the non-extended Hecke algebra is governed by the
generic order on alcoves: for a KL generator attached to s,

    A . (H_s + v) = As + v A      if A is generically below As,
    A . (H_s + v) = As + v^{-1} A if As is generically below A.

Translation by a weight acts on alcoves directly; it is not linear over the
algebra action but twists it by the conjugation automorphism of the
generating set (tested as a law in the suite).

The canonical basis element attached to an alcove A is computed from
Lusztig's closed formula: take the box representative mu above A, act on the
explicit canonical element of the box by the KL basis element of the
translated-longest-element times the alcove label, and divide exactly by the
box normalizer (a Poincare polynomial in v^2).  The table-driven variant
substitutes the table column for the KL element.
"""

from __future__ import annotations

from . import alcoves, hecke, weyl
from .hecke import HeckeElem, LaurentPoly, one, v, vinv

__all__ = [
    "PeriodicElem",
    "periodic_standard",
    "per_act",
    "per_translate",
    "canonical_P_fund",
    "canonical_P",
    "p_canonical_P",
    "specialize_v1",
    "positivity_check",
    "PositivityWindowError",
]


class PositivityWindowError(ValueError):
    """The expansion window is too small to triangulate; not guessed."""


class PeriodicElem:
    """Finitely supported map Alcove -> Laurent polynomial."""

    __slots__ = ("datum", "support")

    def __init__(self, datum, support=None):
        self.datum = datum
        self.support = {a: p for a, p in (support or {}).items() if not p.is_zero()}

    def __eq__(self, other):
        return isinstance(other, PeriodicElem) and self.support == other.support

    def is_zero(self):
        return not self.support

    def __add__(self, other):
        out = dict(self.support)
        for a, p in other.support.items():
            out[a] = out.get(a, LaurentPoly()) + p
        return PeriodicElem(self.datum, out)

    def __sub__(self, other):
        out = dict(self.support)
        for a, p in other.support.items():
            out[a] = out.get(a, LaurentPoly()) - p
        return PeriodicElem(self.datum, out)

    def scale(self, poly):
        return PeriodicElem(self.datum, {a: p * poly for a, p in self.support.items()})

    def coeff(self, a):
        return self.support.get(a, LaurentPoly())

    def items_sorted(self):
        return sorted(self.support.items(),
                      key=lambda kv: weyl.sort_key(kv[0].elem))

    def __repr__(self):
        if not self.support:
            return "PeriodicElem(0)"
        return " + ".join("(%r)*[%r]" % (p, a) for a, p in self.items_sorted())


def periodic_standard(alcove):
    return PeriodicElem(alcove.datum, {alcove: one})


def _per_cache(datum):
    c = getattr(datum, "_periodic_cache", None)
    if c is None:
        c = {"wall": {}, "std": {}}
        datum._periodic_cache = c
    return c


def _wall_step(datum, a, gen_index):
    """(neighbor alcove, True iff a is generically below it), memoized."""
    cache = _per_cache(datum)["wall"]
    key = (a.elem, gen_index)
    if key not in cache:
        s = weyl.all_generators(datum)[gen_index]
        b = alcoves.act_right(a, s)
        cmp = alcoves.generic_leq(a, b)
        if cmp not in ("less-equal", "greater-equal"):  # pragma: no cover
            raise RuntimeError("wall neighbors are not comparable")
        cache[key] = (b, cmp == "less-equal")
    return cache[key]


def _act_kl_gen(x, gen_index):
    """Right action of the KL generator H_s + v, by the generic-order split."""
    out = {}

    def bump(a, p):
        if not p.is_zero():
            out[a] = out.get(a, LaurentPoly()) + p

    for a, p in x.support.items():
        b, below = _wall_step(x.datum, a, gen_index)
        bump(b, p)
        bump(a, p * (v if below else vinv))
    return PeriodicElem(x.datum, out)


def _act_standard_alcove(datum, a, u):
    """a . H_u for a single alcove, memoized along reduced-word prefixes."""
    cache = _per_cache(datum)["std"]
    word = weyl.reduced_word(u)
    key = (a.elem, word)
    if key not in cache:
        if not word:
            cache[key] = periodic_standard(a)
        else:
            gens = weyl.all_generators(datum)
            prefix = weyl.multiply(u, gens[word[-1]])
            prev = _act_standard_alcove(datum, a, prefix)
            # H_s = (H_s + v) - v
            cache[key] = _act_kl_gen(prev, word[-1]) - prev.scale(v)
    return cache[key]


def per_act(x, h):
    """Right action of an algebra element supported on the affine group."""
    if x.datum is not h.datum:
        raise ValueError("periodic element and algebra element disagree on datum")
    out = {}
    for y, q in h.support.items():
        omega, u = weyl.omega_decompose(y)
        if not omega.is_identity():
            raise ValueError(
                "the periodic action is defined for the non-extended algebra"
            )
        for a, p in x.support.items():
            for b, r in _act_standard_alcove(x.datum, a, u).support.items():
                acc = out.get(b, LaurentPoly()) + p * q * r
                if acc.is_zero():
                    out.pop(b, None)
                else:
                    out[b] = acc
    return PeriodicElem(x.datum, out)


def per_translate(x, mu):
    """Shift every alcove key by the weight mu."""
    return PeriodicElem(
        x.datum,
        {alcoves.translate(a, mu): p for a, p in x.support.items()},
    )


def canonical_P_fund(datum, mu):
    """The canonical element at the translated fundamental alcove:
    sum over the finite Weyl group of v^{l(x)} (x(A_fund) + mu)."""
    out = {}
    for x in hecke._finite_elements(datum):
        a = alcoves.translate(alcoves.from_weyl(x), mu)
        out[a] = LaurentPoly.term(1, x.length())
    return PeriodicElem(datum, out)


def _lusztig_formula(alcove, column_elem):
    """Shared body of canonical_P / p_canonical_P: act on the box canonical
    element by the given algebra element and divide by the normalizer."""
    datum = alcove.datum
    mu = alcoves.box_rep_above(alcove)
    base = canonical_P_fund(datum, mu)
    acted = per_act(base, column_elem)
    norm = hecke.box_normalizer(datum)
    out = {}
    for a, p in acted.support.items():
        q = p.divide_exact(norm)
        if q is None:
            raise RuntimeError(
                "normalizer division is not exact; internal consistency "
                "failure at %r" % a
            )
        out[a] = q
    return PeriodicElem(datum, out)


def _column_index(alcove):
    """(w_mu-bar * w) for A = (mu + A_fund) . w, with mu above A."""
    datum = alcove.datum
    mu = alcoves.box_rep_above(alcove)
    omega, x_mu = weyl.omega_of_weight(datum, mu)
    w = weyl.multiply(weyl.invert(x_mu), alcove.elem)
    # w must be minimal in its coset under the twisted finite parabolic
    twisted = [weyl.multiply(weyl.multiply(omega, s), weyl.invert(omega))
               for s in weyl.finite_generators(datum)]
    if not weyl.is_min_in_coset(w, twisted):
        raise RuntimeError(
            "alcove label is not coset-minimal; internal consistency failure"
        )
    w_mu_bar = weyl.multiply(
        weyl.multiply(omega, weyl.longest_element(datum)), weyl.invert(omega)
    )
    return weyl.multiply(w_mu_bar, w)


def canonical_P(alcove):
    """Lusztig's canonical basis element attached to an alcove."""
    return _lusztig_formula(alcove, hecke.kl_basis(_column_index(alcove)))


def p_canonical_P(table, alcove):
    """Table-driven canonical basis element attached to an alcove."""
    if table.basis_kind != "H":
        raise ValueError("periodic canonical elements need an algebra table")
    idx = _column_index(alcove)
    if not table.has_column(idx):
        raise KeyError("table has no column for %s" % weyl.to_text(idx))
    return _lusztig_formula(alcove, HeckeElem(table.datum, table.column(idx)))


def specialize_v1(x):
    """Evaluate every coefficient at v = 1; drops vanishing alcoves."""
    out = {}
    for a, p in x.support.items():
        val = p.evaluate_at_one()
        if val:
            out[a] = val
    return out


def _maximal_key(support):
    """A generically-maximal alcove among the keys, deterministically."""
    keys = sorted(support, key=lambda a: weyl.sort_key(a.elem))
    maximal = []
    for a in keys:
        if not any(
            alcoves.generic_leq(a, b) == "less-equal" for b in keys if b != a
        ):
            maximal.append(a)
    return maximal[0]


def positivity_check(table, window_alcoves, max_steps=2000):
    """Expand each table-driven canonical element over the window in the
    KL-canonical alcove family and report any negative coefficient.

    Returns a report dict; raises PositivityWindowError when the expansion
    needs alcoves outside the given window.
    """
    window = set(window_alcoves)
    report = {"checked": 0, "negative": []}
    for a in window_alcoves:
        target = p_canonical_P(table, a)
        rem = target
        steps = 0
        while not rem.is_zero():
            steps += 1
            if steps > max_steps:
                raise PositivityWindowError(
                    "window too small: expansion of the element at %r does "
                    "not terminate within the step budget" % a
                )
            b = _maximal_key(rem.support)
            if b not in window:
                raise PositivityWindowError(
                    "window too small: expansion of the element at %r needs "
                    "the alcove %r outside the window" % (a, b)
                )
            c = rem.coeff(b)
            if any(coef < 0 for coef in c.coeffs.values()):
                report["negative"].append(
                    {"A": repr(a), "B": repr(b), "coefficient": repr(c)}
                )
            rem = rem - canonical_P(b).scale(c)
        report["checked"] += 1
    report["ok"] = not report["negative"]
    return report
