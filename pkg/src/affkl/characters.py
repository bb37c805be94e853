"""Multiplicity and character combinatorics for the first Frobenius kernel.

Everything here is a numerical shadow: baby Verma modules enter through
their (easy) characters, projective covers through the multiplicity rows
computed from a canonical-basis table, and simple modules through the
unitriangular inversion of those rows.  All operations refuse inputs outside
their hypotheses (singular weights, non-restricted labels, windows too small
to triangulate) instead of extrapolating.

Weights are integer tuples in lattice coordinates; formal characters are
maps weight -> multiplicity.
"""

from __future__ import annotations

from fractions import Fraction

from . import alcoves, hecke, periodic, weyl
from .rootdata import add_weights, neg_weight, pair, scale_weight, sub_weights

__all__ = [
    "MultiplicityTable",
    "block_multiplicity_table",
    "q_of_alcove",
    "q_via_coset_sum",
    "coset_constancy",
    "projective_multiplicities",
    "projective_multiplicities_weight",
    "reciprocity_invert",
    "baby_verma_character",
    "simple_character",
    "dominant_part",
    "tilting_to_projective",
    "projective_label_valid",
    "tilting_babyverma_mults",
    "block_position",
    "is_steinberg_type",
    "WindowError",
]


class WindowError(ValueError):
    """A triangular computation needs labels outside the given window."""


# ---------------------------------------------------------------------------
# the two routes to q_A


def q_of_alcove(table, a):
    """Baby-Verma multiplicities of the projective attached to an alcove:
    the v = 1 specialization of the table-driven canonical element at hat(A)."""
    return periodic.specialize_v1(periodic.p_canonical_P(table, alcoves.hat(a)))


def q_via_coset_sum(table, a):
    """The same multiplicities via the finite-coset sum over the column of
    w_f * w, after normalizing A into the box below zero."""
    datum = a.datum
    nu = alcoves.box_rep_below(a)
    a0 = alcoves.translate(a, neg_weight(nu))
    x0 = alcoves.to_weyl(a0)
    wf = weyl.longest_element(datum)
    w = weyl.multiply(weyl.invert(wf), x0)
    if not weyl.is_fW(w):
        raise RuntimeError(
            "normalized alcove label is not coset-minimal"
        )  # pragma: no cover
    col = table.column(x0)
    out = {}
    for z, poly in col.items():
        val = poly.evaluate_at_one()
        if val:
            key = alcoves.translate(alcoves.from_weyl(z), nu)
            out[key] = out.get(key, 0) + val
    return out


def _coset_minimum(z):
    """The minimal element of W_f * z."""
    gens = weyl.finite_generators(z.datum)
    cur = z
    changed = True
    while changed:
        changed = False
        for g in gens:
            nxt = weyl.multiply(g, cur)
            if nxt.length() < cur.length():
                cur = nxt
                changed = True
    return cur


def coset_constancy(table, w, _window=None):
    """True iff the v = 1 values of the column of w_f * w are constant on
    finite-Weyl-group cosets (including zeros in the coset closure)."""
    datum = w.datum
    if not weyl.is_fW(w):
        raise ValueError("index must be minimal in its finite coset")
    wf = weyl.longest_element(datum)
    col = table.column(weyl.multiply(wf, w))
    values = {z: p.evaluate_at_one() for z, p in col.items()}
    finite = hecke._finite_elements(datum)
    seen_reps = set()
    for z in values:
        rep = _coset_minimum(z)
        if rep in seen_reps:
            continue
        seen_reps.add(rep)
        coset_vals = {values.get(weyl.multiply(x, rep), 0) for x in finite}
        if len(coset_vals) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# block combinatorics


def is_steinberg_type(datum, lam, p):
    """True iff lam is congruent to (p-1) * varsigma modulo p * X."""
    diff = sub_weights(lam, scale_weight(p - 1, datum.varsigma))
    return datum.weight_in_lattice_p_multiple(diff, p) is not None


def _is_regular(datum, lam, p):
    shifted = add_weights(lam, datum.varsigma)
    return all(pair(shifted, c) % p != 0 for c in datum.positive_coroots)


def block_position(datum, lam, p):
    """(base, w): the unique weight of the block inside the fundamental
    p-alcove and the element with w dot_p base == lam.  Regular weights only."""
    if not _is_regular(datum, lam, p):
        raise ValueError("weight lies on a p-wall; its block is singular")
    point = tuple(Fraction(c, p) for c in add_weights(lam, datum.varsigma))
    y = weyl.walk_to_fundamental(datum, point)
    base = weyl.dot_p(y, lam, p)
    return base, weyl.invert(y)


def _normalizing_shift(datum, w, p):
    """mu with t_varsigma t_mu w restricted: pairings of w dot_p 0 + p*mu
    must land in [-p, -1] on every simple coroot."""
    lam0 = weyl.dot_p(w, (0,) * datum.lattice_rank, p)
    targets = []
    for c in datum.simple_coroots:
        r = pair(lam0, c)
        targets.append(-(r // p) - 1)
    from ._intlinalg import canonical_solution
    mu = canonical_solution([list(c) for c in datum.simple_coroots], targets)
    if mu is None:  # pragma: no cover - varsigma existence rules this out
        raise RuntimeError("no integer normalizing shift")
    return tuple(mu)


def projective_multiplicities(table, w):
    """Row of baby-Verma multiplicities of the projective cover indexed by w:
    y -> column-of-w entry at v = 1.

    Requires the shifted index t_varsigma * w to be coset-minimal and
    restricted (the hypotheses of the multiplicity theorem); refuses
    anything else rather than extrapolate.
    """
    datum = table.datum
    t_vs = weyl.translation(datum, datum.varsigma)
    shifted = weyl.multiply(t_vs, w)
    if not weyl.is_fWext(shifted):
        raise ValueError(
            "index violates the hypothesis: t_varsigma * w is not coset-minimal"
        )
    if not weyl.is_restricted(shifted):
        raise ValueError(
            "index violates the hypothesis: t_varsigma * w is not restricted"
        )
    col = table.column(w)
    return {y: p.evaluate_at_one() for y, p in col.items()
            if p.evaluate_at_one() != 0}


def projective_multiplicities_weight(table, lam, p):
    """Baby-Verma multiplicities of the projective cover of a weight:
    map (weight nu) -> (Q-hat(lam) : Z-hat(nu)).

    Steinberg-type weights give the single-entry row {lam: 1} (there the
    projective cover, the baby Verma and the simple module all coincide).
    Regular weights are normalized by a p X translation into the theorem's
    hypotheses; other singular weights are refused.
    """
    datum = table.datum
    lam = tuple(lam)
    if p < 2 * datum.coxeter_number - 1:
        raise ValueError("needs p >= 2h - 1")
    if is_steinberg_type(datum, lam, p):
        return {lam: 1}
    base, w = block_position(datum, lam, p)
    mu = _normalizing_shift(datum, w, p)
    w2 = weyl.multiply(weyl.translation(datum, mu), w)
    row = projective_multiplicities(table, w2)
    shift = scale_weight(p, mu)
    return {
        sub_weights(weyl.dot_p(y, base, p), shift): val
        for y, val in row.items()
    }


# ---------------------------------------------------------------------------
# reciprocity and characters


class MultiplicityTable:
    """Square integer table over a list of weight labels.

    ``entries[(row, col)]`` is the multiplicity (Q-hat_row : Z-hat_col),
    equal by reciprocity to [Z-hat_col : L-hat_row].
    """

    def __init__(self, labels, entries):
        self.labels = tuple(tuple(l) for l in labels)
        self.entries = {(tuple(r), tuple(c)): int(v)
                        for (r, c), v in entries.items() if v}

    def value(self, row, col):
        return self.entries.get((tuple(row), tuple(col)), 0)


def block_multiplicity_table(table, labels, p):
    """Build the MultiplicityTable of projective rows over a weight window.

    Checks that the window is downward closed: for every label, any lower
    weight of the same block whose projective row meets the label must be a
    label too (otherwise the reciprocity inversion would silently drop a
    composition factor).  Lower weights whose simple module has no dominant
    weight are exempt: they never contribute to dominant characters.
    Violations raise WindowError naming the weights.
    """
    datum = table.datum
    labels = [tuple(l) for l in labels]
    label_set = set(labels)
    entries = {}
    missing = set()
    for lam in labels:
        for nu, m in projective_multiplicities_weight(table, lam, p).items():
            entries[(lam, nu)] = m
    for c in labels:
        if is_steinberg_type(datum, c, p):
            continue
        base_label, _ = block_position(datum, c, p)
        for x in _lower_block_candidates(datum, c, p, base_label):
            if x in label_set:
                continue
            if (projective_multiplicities_weight(table, x, p).get(c, 0)
                    and _simple_has_dominant_weight(datum, x, p)):
                missing.add(x)
    if missing:
        raise WindowError(
            "window is not downward closed; missing labels: %s"
            % sorted(missing)
        )
    return MultiplicityTable(labels, entries)


def _weight_height(datum, lam):
    return sum(pair(lam, c) for c in datum.positive_coroots)


def reciprocity_invert(datum, mt):
    """Invert the reciprocity system: from [Z-hat : L-hat] numbers to the
    coefficients expressing each simple class in baby-Verma classes.

    Entries about baby Vermas outside the window are ignored (the inversion
    never needs them); a simple label occurring below a window column must
    itself be in the window, and missing ones are reported.
    """
    labels = set(mt.labels)
    missing = sorted(
        {r for (r, c) in mt.entries if c in labels and r not in labels}
    )
    if missing:
        raise WindowError("window is not closed; missing labels: %s" % missing)
    order = sorted(mt.labels, key=lambda l: (_weight_height(datum, l), l))
    n = len(order)
    for lab in order:
        if mt.value(lab, lab) != 1:
            raise ValueError("diagonal entries must be 1")
    # d[j][i] = [Z_j : L_i]; invert exactly over Q and check integrality
    d = [[Fraction(mt.value(order[i], order[j])) for i in range(n)]
         for j in range(n)]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for colix in range(n):
        piv = next(r for r in range(colix, n) if d[r][colix] != 0)
        d[colix], d[piv] = d[piv], d[colix]
        inv[colix], inv[piv] = inv[piv], inv[colix]
        f = d[colix][colix]
        d[colix] = [x / f for x in d[colix]]
        inv[colix] = [x / f for x in inv[colix]]
        for r in range(n):
            if r != colix and d[r][colix] != 0:
                g = d[r][colix]
                d[r] = [x - g * y for x, y in zip(d[r], d[colix])]
                inv[r] = [x - g * y for x, y in zip(inv[r], inv[colix])]
    entries = {}
    for i in range(n):
        for j in range(n):
            val = inv[i][j]  # [L_i] = sum_j val * [Z_j]
            if val.denominator != 1:
                raise ValueError("inverse is not integral")  # pragma: no cover
            if val:
                entries[(order[i], order[j])] = int(val)
    return MultiplicityTable(order, entries)


def baby_verma_character(datum, lam, p):
    """ch Z-hat(lam): e(lam) times the product over positive roots of
    (1 + e(-a) + ... + e(-(p-1)a)); total mass p^(number of positive roots)."""
    if p < 2:
        raise ValueError("p must be at least 2")
    char = {tuple(lam): 1}
    for root in datum.positive_roots:
        nxt = {}
        for wt, m in char.items():
            for k in range(p):
                nw = sub_weights(wt, scale_weight(k, root))
                nxt[nw] = nxt.get(nw, 0) + m
        char = nxt
    return char


def dominant_part(datum, char):
    return {
        wt: m for wt, m in char.items()
        if m and all(pair(wt, c) >= 0 for c in datum.simple_coroots)
    }


def _restricted_decomposition(datum, lam, p):
    """lam = lam'' + p mu with lam'' restricted dominant; regular weights."""
    targets = []
    for c in datum.simple_coroots:
        r = pair(lam, c)
        targets.append((r - (r % p)) // p)
    from ._intlinalg import canonical_solution
    mu = canonical_solution([list(c) for c in datum.simple_coroots], targets)
    if mu is None:  # pragma: no cover
        raise RuntimeError("no restricted decomposition")
    mu = tuple(mu)
    core = sub_weights(lam, scale_weight(p, mu))
    return core, mu


def _simple_has_dominant_weight(datum, lam, p):
    """Decide whether the simple module at lam has any dominant weight.

    True when some extremal weight (finite orbit of the restricted core,
    shifted by p mu) is dominant; False when the whole convex hull lies
    strictly below a dominant wall.  Anything in between is refused
    honestly (only arises beyond the tested ranks).
    """
    core, mu = _restricted_decomposition(datum, lam, p)
    shift = scale_weight(p, mu)
    orbit = [add_weights(weyl._mat_apply(x.fin, core), shift)
             for x in hecke._finite_elements(datum)]
    if any(all(pair(w, c) >= 0 for c in datum.simple_coroots) for w in orbit):
        return True
    for c in datum.simple_coroots:
        if max(pair(w, c) for w in orbit) < 0:
            return False
    raise WindowError(
        "cannot decide whether the simple module at %s has dominant weights"
        % (lam,)
    )


def simple_character(table, lam, p, _memo=None, _stack=None):
    """Dominant part of the character of the simple module at a weight.

    Accepts a weight tuple or an extended-group element (read as the label
    w dot_p 0).  Implements the unitriangular inversion of the projective
    rows: ch L-hat(lam) = ch Z-hat(lam) - sum over lower block weights x of
    (Q-hat(x) : Z-hat(lam)) * ch L-hat(x), restricted pointwise to dominant
    weights; corrections whose simple module has no dominant weight drop out.
    """
    datum = table.datum
    if isinstance(lam, weyl.ExtElem):
        lam = weyl.dot_p(lam, (0,) * datum.lattice_rank, p)
    lam = tuple(lam)
    if p < 2 * datum.coxeter_number - 1:
        raise ValueError("needs p >= 2h - 1")
    if is_steinberg_type(datum, lam, p):
        return dominant_part(datum, baby_verma_character(datum, lam, p))
    if not _is_regular(datum, lam, p):
        raise ValueError("singular non-Steinberg weights are not supported")
    memo = {} if _memo is None else _memo
    stack = set() if _stack is None else _stack
    if lam in memo:
        return memo[lam]
    if lam in stack:
        raise WindowError(
            "correction recursion cycles at %s; window insufficient" % (lam,)
        )
    stack.add(lam)
    base_label, _ = block_position(datum, lam, p)
    out = dominant_part(datum, baby_verma_character(datum, lam, p))
    for x in _lower_block_candidates(datum, lam, p, base_label):
        mult = projective_multiplicities_weight(table, x, p).get(lam, 0)
        if not mult:
            continue
        if not _simple_has_dominant_weight(datum, x, p):
            continue
        sub = simple_character(table, x, p, memo, stack)
        for wt, m in sub.items():
            out[wt] = out.get(wt, 0) - mult * m
    out = {wt: m for wt, m in out.items() if m}
    stack.discard(lam)
    memo[lam] = out
    return out


def _lower_block_candidates(datum, lam, p, base_label):
    """Regular weights of the same block strictly below lam within the
    weight support of the baby Verma at lam."""
    bounds = []
    total = [0] * datum.lattice_rank
    for root in datum.positive_roots:
        total = [t + (p - 1) * r for t, r in zip(total, root)]
    # enumerate x = lam - sum k_i alpha_i with 0 <= k_i <= (p-1) * c_i where
    # c_i is the coefficient of alpha_i in the sum of positive roots
    coeff_bound = [0] * datum.rank
    for cf in datum.root_coeffs:
        for i in range(datum.rank):
            coeff_bound[i] += (p - 1) * cf[i]
    from itertools import product as _product
    out = []
    for ks in _product(*[range(b + 1) for b in coeff_bound]):
        if not any(ks):
            continue
        x = lam
        for k, root in zip(ks, datum.simple_roots):
            x = sub_weights(x, scale_weight(k, root))
        if not _is_regular(datum, x, p):
            continue
        if block_position(datum, x, p)[0] != base_label:
            continue
        out.append(x)
    return sorted(out, key=lambda w: (-_weight_height(datum, w), w))


# ---------------------------------------------------------------------------
# tilting / projective bookkeeping


def projective_label_valid(w):
    """The hypothesis of the index translation: t_varsigma * w restricted."""
    t_vs = weyl.translation(w.datum, w.datum.varsigma)
    shifted = weyl.multiply(t_vs, w)
    return weyl.is_fWext(shifted) and weyl.is_restricted(shifted)


def tilting_to_projective(w):
    """The index translation between projective covers and tilting modules:
    w -> w_f * w (an involution on valid labels up to the same check)."""
    if not projective_label_valid(w):
        raise ValueError("index violates the restrictedness hypothesis")
    return weyl.multiply(weyl.longest_element(w.datum), w)


def tilting_babyverma_mults(datum, a):
    """Baby-Verma content of a v = 1 antispherical class: the image under
    the spherical embedding of the preimage under the central morphism.

    ``a`` maps extended elements to integers.  Raises NotInImageError (from
    the parabolic module) with a witness when a is not in the image.
    """
    from .parabolic import NotInImageError, kl_N

    t_vs_inv = weyl.translation(datum, neg_weight(datum.varsigma))
    wf = weyl.longest_element(datum)
    rem = {k: v for k, v in a.items() if v}
    coeffs = {}
    guard = 0
    while rem:
        guard += 1
        if guard > 100000:  # pragma: no cover
            raise NotInImageError("inversion does not terminate")
        y = max(rem, key=weyl.sort_key)
        w = weyl.multiply(t_vs_inv, y)
        if not weyl.is_fWext(w):
            raise NotInImageError(
                "class is not in the image: offending term at %s"
                % weyl.to_text(y)
            )
        c = rem[y]
        coeffs[w] = coeffs.get(w, 0) + c
        # subtract c * (canonical antispherical column at t_varsigma w) at v=1
        for z, p in kl_N(weyl.multiply(weyl.translation(datum, datum.varsigma),
                                       w)).support.items():
            val = p.evaluate_at_one()
            if not val:
                continue
            nv = rem.get(z, 0) - c * val
            if nv:
                rem[z] = nv
            else:
                rem.pop(z, None)
    out = {}
    for w, c in coeffs.items():
        for z, p in hecke.kl_basis(weyl.multiply(wf, w)).support.items():
            val = p.evaluate_at_one()
            if val:
                out[z] = out.get(z, 0) + c * val
    return {k: v for k, v in out.items() if v}
