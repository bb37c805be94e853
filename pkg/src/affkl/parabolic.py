"""Antispherical and spherical right modules over the extended Hecke algebra.

Both modules have standard bases indexed by the elements that are minimal in
their finite-Weyl-group coset.  The right action on a standard basis vector
indexed by w is, for a simple generator s:

* index ws (lengths add) if ws is still coset-minimal,
* index ws plus (v^{-1} - v) times the old vector if ws is shorter,
* multiplication by -v (antispherical) or +v^{-1} (spherical) if ws leaves
  the coset-minimal set.

The module also houses the comparison maps: xi (algebra onto antispherical),
zeta (spherical into the algebra, injective), the distinguished antispherical
canonical element attached to the translation by varsigma, and the central
morphism phi built from it.
"""

from __future__ import annotations

from . import hecke, weyl
from .hecke import HeckeElem, LaurentPoly, one, v, vinv

__all__ = [
    "ParabolicElem",
    "AsphElem",
    "SphElem",
    "asph_standard",
    "sph_standard",
    "asph_act",
    "sph_act",
    "xi",
    "zeta",
    "zeta_preimage",
    "kl_N",
    "kl_M",
    "p_N",
    "p_M",
    "uN_varsigma",
    "phi",
    "verify_main",
    "twisted_embed",
    "twisted_label",
    "NotInImageError",
]


class NotInImageError(ValueError):
    """An element is not in the image of the relevant module map."""


class ParabolicElem:
    """Finitely supported map (coset-minimal W_ext element) -> poly."""

    __slots__ = ("datum", "support")
    sign_case = None  # multiplier when ws leaves the minimal set

    def __init__(self, datum, support=None):
        self.datum = datum
        sup = {}
        for w, p in (support or {}).items():
            if p.is_zero():
                continue
            if not weyl.is_fWext(w):
                raise ValueError(
                    "standard basis is indexed by coset-minimal elements; "
                    "%s is not" % weyl.to_text(w)
                )
            sup[w] = p
        self.support = sup

    def __eq__(self, other):
        return type(self) is type(other) and self.support == other.support

    def is_zero(self):
        return not self.support

    def __add__(self, other):
        out = dict(self.support)
        for w, p in other.support.items():
            out[w] = out.get(w, LaurentPoly()) + p
        return type(self)(self.datum, out)

    def __sub__(self, other):
        out = dict(self.support)
        for w, p in other.support.items():
            out[w] = out.get(w, LaurentPoly()) - p
        return type(self)(self.datum, out)

    def scale(self, poly):
        return type(self)(self.datum, {w: p * poly for w, p in self.support.items()})

    def coeff(self, w):
        return self.support.get(w, LaurentPoly())

    def items_sorted(self):
        return sorted(self.support.items(), key=lambda kv: weyl.sort_key(kv[0]))

    def as_hecke(self):
        return HeckeElem(self.datum, dict(self.support))

    def specialize_v1(self):
        return {w: p.evaluate_at_one() for w, p in self.support.items()
                if p.evaluate_at_one() != 0}

    def __repr__(self):
        name = "N" if isinstance(self, AsphElem) else "M"
        if not self.support:
            return "%sElem(0)" % name
        return " + ".join(
            "(%r)*%s[%s]" % (p, name, weyl.to_text(w))
            for w, p in self.items_sorted()
        )


class AsphElem(ParabolicElem):
    pass


class SphElem(ParabolicElem):
    pass


def asph_standard(w):
    return AsphElem(w.datum, {w: one})


def sph_standard(w):
    return SphElem(w.datum, {w: one})


def _act_gen(x, s):
    """Right action of H_s on a parabolic element (s a length-1 generator)."""
    asph = isinstance(x, AsphElem)
    out = {}

    def bump(w, p):
        if not p.is_zero():
            out[w] = out.get(w, LaurentPoly()) + p

    for w, p in x.support.items():
        ws = weyl.multiply(w, s)
        if weyl.is_fWext(ws):
            if ws.length() > w.length():
                bump(ws, p)
            else:
                bump(ws, p)
                bump(w, p * (vinv - v))
        else:
            bump(w, p * (-v if asph else vinv))
    return type(x)(x.datum, out)


def _act_standard(x, y):
    """Right action of H_y for a single element y."""
    omega, u = weyl.omega_decompose(y)
    uprime = weyl.multiply(weyl.multiply(omega, u), weyl.invert(omega))
    gens = weyl.all_generators(x.datum)
    out = x
    for i in weyl.reduced_word(uprime):
        out = _act_gen(out, gens[i])
    if not omega.is_identity():
        out = type(x)(x.datum, {weyl.multiply(w, omega): p
                                for w, p in out.support.items()})
    return out


def _act(x, h):
    if x.datum is not h.datum:
        raise ValueError("module element and algebra element disagree on datum")
    out = type(x)(x.datum)
    for y, p in h.support.items():
        out = out + _act_standard(x, y).scale(p)
    return out


def asph_act(x, h):
    if not isinstance(x, AsphElem):
        raise TypeError("asph_act needs an antispherical element")
    return _act(x, h)


def sph_act(x, h):
    if not isinstance(x, SphElem):
        raise TypeError("sph_act needs a spherical element")
    return _act(x, h)


# ---------------------------------------------------------------------------
# comparison maps


def xi(h):
    """Projection of the algebra onto the antispherical module: N_e . h."""
    return _act(asph_standard(weyl.identity(h.datum)), h)


def zeta(m):
    """Embedding of the spherical module into the algebra:
    the image of the standard vector at w is KL(w_f) * H_w."""
    datum = m.datum
    wf = weyl.longest_element(datum)
    out = HeckeElem(datum)
    base = hecke.kl_basis(wf)
    for w, p in m.support.items():
        out = out + hecke.mul_standard(base, w).scale(p)
    return out


def zeta_preimage(h):
    """Inverse of zeta on its image; raises NotInImageError with a witness."""
    datum = h.datum
    wf = weyl.longest_element(datum)
    wf_inv = weyl.invert(wf)
    rem = h
    out = SphElem(datum)
    guard = 0
    while not rem.is_zero():
        guard += 1
        if guard > 100000:  # pragma: no cover
            raise NotInImageError("preimage extraction does not terminate")
        y = max(rem.support, key=weyl.sort_key)
        c = rem.coeff(y)
        w = weyl.multiply(wf_inv, y)
        if not weyl.is_fWext(w) or wf.length() + w.length() != y.length():
            raise NotInImageError(
                "not in the image of zeta: offending term H[%s] with "
                "coefficient %r" % (weyl.to_text(y), c)
            )
        out = out + sph_standard(w).scale(c)
        rem = rem - zeta(sph_standard(w).scale(c))
    return out


# ---------------------------------------------------------------------------
# canonical bases


def kl_N(w):
    """Canonical antispherical element: xi of the algebra KL element."""
    if not weyl.is_fWext(w):
        raise ValueError("index must be coset-minimal")
    return xi(hecke.kl_basis(w))


def kl_M(w):
    """Canonical spherical element, via the zeta preimage of KL(w_f * w)."""
    if not weyl.is_fWext(w):
        raise ValueError("index must be coset-minimal")
    wf = weyl.longest_element(w.datum)
    return zeta_preimage(hecke.kl_basis(weyl.multiply(wf, w)))


def p_N(table, w):
    """Table-driven antispherical canonical element."""
    if not weyl.is_fWext(w):
        raise ValueError("index must be coset-minimal")
    if table.basis_kind == "N":
        return AsphElem(table.datum, table.column(w))
    if table.basis_kind == "H":
        return xi(HeckeElem(table.datum, table.column(w)))
    raise ValueError("table of kind M cannot produce antispherical columns")


def p_M(table, w):
    """Table-driven spherical canonical element."""
    if not weyl.is_fWext(w):
        raise ValueError("index must be coset-minimal")
    if table.basis_kind == "M":
        return SphElem(table.datum, table.column(w))
    if table.basis_kind == "H":
        wf = weyl.longest_element(table.datum)
        return zeta_preimage(HeckeElem(
            table.datum, table.column(weyl.multiply(wf, w))))
    raise ValueError("table of kind N cannot produce spherical columns")


def uN_varsigma(datum, omega=None):
    """The canonical antispherical element at t_varsigma * omega.

    Asserts the closed form: the standard coefficients are v^{l(z)} over the
    finite Weyl group (right-translated by omega), and for omega trivial the
    element absorbs (v + v^{-1}) under every finite KL generator.
    """
    if omega is None:
        omega = weyl.identity(datum)
    if omega.length() != 0:
        raise ValueError("twist must have length zero")
    t_vs = weyl.translation(datum, datum.varsigma)
    elem = kl_N(weyl.multiply(t_vs, omega))
    expected = {}
    for z in hecke._finite_elements(datum):
        key = weyl.multiply(weyl.multiply(t_vs, z), omega)
        expected[key] = LaurentPoly.term(1, z.length())
    if elem.support != expected:
        raise AssertionError(
            "canonical element at t_varsigma does not have the predicted "
            "finite-orbit shape"
        )
    if omega.is_identity():
        for s in weyl.finite_generators(datum):
            lhs = _act(elem, hecke.kl_basis(s))
            if lhs != elem.scale(v + vinv):
                raise AssertionError(
                    "absorption fails for a finite generator"
                )
    return elem


def phi(m):
    """The central morphism from the spherical to the antispherical module:
    the spherical generator maps to the canonical element at t_varsigma."""
    if not isinstance(m, SphElem):
        raise TypeError("phi is defined on spherical elements")
    base = _uN_cached(m.datum)
    return _act(base, m.as_hecke())


def _uN_cached(datum):
    el = getattr(datum, "_uN_varsigma", None)
    if el is None:
        el = uN_varsigma(datum)
        datum._uN_varsigma = el
    return el


def verify_main(table, w):
    """Compare phi of the spherical canonical column at w with the
    antispherical canonical column at t_varsigma * w; returns a report dict."""
    datum = table.datum
    t_vs = weyl.translation(datum, datum.varsigma)
    lhs = phi(p_M(table, w))
    rhs = p_N(table, weyl.multiply(t_vs, w))
    diff = lhs - rhs
    report = {
        "w": weyl.to_text(w),
        "status": "equal" if diff.is_zero() else "DIFFERENT",
        "lhs_terms": len(lhs.support),
        "rhs_terms": len(rhs.support),
    }
    if not diff.is_zero():
        report["diff"] = {
            weyl.to_text(y): repr(p) for y, p in diff.items_sorted()
        }
    return report


# ---------------------------------------------------------------------------
# twisted spherical embeddings


def twisted_embed(datum, lam, support):
    """Embed a twisted spherical module element into the extended module.

    ``support`` maps W-elements (minimal in their twisted-parabolic coset)
    to polynomials; the embedding sends the vector at w to the standard
    vector at omega_lambda^{-1} * w.
    """
    omega, _ = weyl.omega_of_weight(datum, lam)
    oinv = weyl.invert(omega)
    out = {}
    for w, p in support.items():
        if not weyl._in_root_lattice(datum, w.trans):
            raise ValueError("twisted support must lie in the affine group")
        key = weyl.multiply(oinv, w)
        if not weyl.is_fWext(key):
            raise ValueError(
                "unsupported support: %s does not map to a coset-minimal "
                "element" % weyl.to_text(w)
            )
        out[key] = p
    return SphElem(datum, out)


def twisted_label(datum, lam, alcove):
    """The extended standard-basis index of the alcove-labelled vector:
    for A = (lam + A_fund) . w the index is omega_lambda^{-1} * w."""
    omega, x_lam = weyl.omega_of_weight(datum, lam)
    w = weyl.multiply(weyl.invert(x_lam), alcove.elem)
    return weyl.multiply(weyl.invert(omega), w)
