"""PBW calculus in the enveloping algebra and the commuting charges.

Quadratic charges are mode coefficients of tr(B(x)^2); linear charges are
mode coefficients of the abstract series tr(M(x)B(x)) with symbolic weight
parameters.  Products are normal-ordered against the basis order: c first,
then modes ascending, with H before E before F at a tied mode.
"""

import time

from .exactalg import LaurentPoly, parameter, rat, spectral
from .kacmoody import BasisSymbol, _basis_bracket
from .currents import build_B, extract_mode
from .onsager import OnsElt, abstract_bracket, build_current, ons
from .report import finish_report

__all__ = [
    "UeaElt",
    "uea_mul",
    "uea_commutator",
    "lie_to_uea",
    "build_quadratic_charge",
    "build_linear_charge",
    "check_linear_charges",
    "check_quadratic_charges",
    "check_charge_commutativity",
    "note_mixed_commutator",
]


def _key(sym):
    if sym.type == "C":
        return (0, 0, 0)
    return (1, sym.mode, "HEF".index(sym.type))


def _as_coeff(c):
    return c if isinstance(c, LaurentPoly) else LaurentPoly.const(c)


class UeaElt:
    """Linear combination of normal-ordered words of basis symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for word, c in terms.items():
                c = _as_coeff(c)
                if not c.is_zero():
                    self.terms[word] = c

    @classmethod
    def one(cls):
        return cls({(): 1})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for word, c in other.terms.items():
            cur = out.get(word)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(word, None)
            else:
                out[word] = s
        e = UeaElt()
        e.terms = out
        return e

    def __neg__(self):
        e = UeaElt()
        e.terms = {w: -c for w, c in self.terms.items()}
        return e

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _as_coeff(c)
        if c.is_zero():
            return UeaElt()
        e = UeaElt()
        e.terms = {w: cc * c for w, cc in self.terms.items()}
        return e

    def __eq__(self, other):
        if not isinstance(other, UeaElt):
            return NotImplemented
        return (self - other).is_zero()

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for word in sorted(self.terms, key=lambda w: (len(w), tuple(map(_key, w)))):
            c = self.terms[word]
            name = "*".join(str(s) for s in word) if word else "1"
            bits.append(f"({c})*{name}")
        return " + ".join(bits)

    __repr__ = __str__


_NORMAL = {}


def _normal_word(word):
    """Normal-order a word, rewriting out-of-order adjacent pairs via the
    bracket; memoized on the word."""
    cached = _NORMAL.get(word)
    if cached is not None:
        return cached
    out = None
    for i in range(len(word) - 1):
        if _key(word[i]) > _key(word[i + 1]):
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2 :]
            out = _normal_word(swapped)
            for sym, k in _basis_bracket(word[i], word[i + 1]):
                sub = word[:i] + (sym,) + word[i + 2 :]
                out = out + _normal_word(sub).scale(k)
            break
    if out is None:
        out = UeaElt({word: 1})
    _NORMAL[word] = out
    return out


def uea_mul(a, b):
    out = UeaElt()
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            out = out + _normal_word(wa + wb).scale(ca * cb)
    return out


def uea_commutator(a, b):
    return uea_mul(a, b) - uea_mul(b, a)


def lie_to_uea(lie):
    return UeaElt({(sym,): c for sym, c in lie.terms.items()})


# -- quadratic charges --------------------------------------------------------------


def build_quadratic_charge(family, max_k):
    """Coefficients t_0..t_max_k of tr(B(x)^2), normal ordered."""
    window = max_k + 1
    b = build_B(family, window)
    meta = b.metas[0]
    prod = meta.multiplied(meta)
    assert prod.trunc_hi is None or prod.trunc_hi >= 2 * max_k, (
        "window too small for the requested charge"
    )
    out = {k: UeaElt() for k in range(max_k + 1)}
    dim = b.dim
    for i in range(dim):
        for j in range(dim):
            ca = b.entry(i, j)
            cb = b.entry(j, i)
            if not ca or not cb:
                continue
            for da, la in ca.items():
                for db, lb in cb.items():
                    d = da[0] + db[0]
                    if d < 0 or d % 2 or d // 2 > max_k:
                        continue
                    k = d // 2
                    out[k] = out[k] + uea_mul(lie_to_uea(la), lie_to_uea(lb))
    return out


# -- linear charges ---------------------------------------------------------------


_WEIGHTS = {
    "onsager": ("kappa", "kappastar", "mu"),
    "augmented": ("tau", "nu", "nustar"),
    "invariant": ("mu0", "mu1", "mu2"),
}


def _weight_series(family, window, x):
    """The abstract weighted series whose mode coefficients are the linear
    charges; weights stay symbolic."""
    names = _WEIGHTS[family]
    ctx = (x,) + tuple(parameter(n) for n in names)
    pvar = {n: LaurentPoly.var(parameter(n), ctx) for n in names}
    xv = LaurentPoly.var(x, ctx)
    xinv = LaurentPoly.monomial(ctx, (-2,) + (0,) * len(names), 1)
    one = LaurentPoly.const(1, ctx)
    if family == "onsager":
        ap = build_current(family, "A+", window, x)
        am = build_current(family, "A-", window, x)
        g = build_current(family, "G", window, x)
        return (
            ap.scale_poly(pvar["kappa"] + pvar["kappastar"] * xinv)
            + am.scale_poly(pvar["kappa"] + pvar["kappastar"] * xv)
            + g.scale_poly(pvar["mu"] * (xinv - xv))
        )
    if family == "augmented":
        kk = build_current(family, "K", window, x)
        zp = build_current(family, "Z+", window, x)
        zm = build_current(family, "Z-", window, x)
        return (
            kk.scale_poly(pvar["tau"])
            + zp.scale_poly(pvar["nu"] * (one + xinv))
            + zm.scale_poly(pvar["nustar"] * (xv + one))
        )
    assert family == "invariant"
    hh = build_current(family, "H", window, x)
    ee = build_current(family, "E", window, x)
    ff = build_current(family, "F", window, x)
    return (
        hh.scale_poly(pvar["mu0"])
        + ee.scale_poly(pvar["mu1"])
        + ff.scale_poly(pvar["mu2"])
    )


def build_linear_charge(family, k, variant="series"):
    """The k-th linear charge as an abstract element with symbolic weights.

    variant="series" reads the mode straight off the weighted series (the
    form the commutativity suite uses).  variant="formula" is the closed
    expression; at k=0 the augmented closed form drops the halving of the
    zero mode and is NOT proportional to the series value, so it fails to
    commute with the higher charges -- keep it out of suites.
    """
    assert k >= 0
    if variant == "series":
        x = spectral("x")
        series = _weight_series(family, k + 2, x)
        meta = series.metas[0]
        lo, hi = meta.exact_window()
        assert (lo is None or 2 * k >= lo) and (hi is None or 2 * k <= hi)
        return series.entry(0, 0).get((2 * k,), OnsElt.zero())
    assert variant == "formula"
    names = _WEIGHTS[family]
    w = {n: LaurentPoly.var(parameter(n)) for n in names}
    if family == "onsager":
        return (
            ons(family, "A", k, w["kappa"])
            + ons(family, "A", -k, w["kappa"])
            + ons(family, "A", k + 1, w["kappastar"])
            + ons(family, "A", -k + 1, w["kappastar"])
            + ons(family, "G", k + 1, w["mu"])
            - ons(family, "G", k - 1, w["mu"])
        )
    if family == "augmented":
        out = ons(family, "K", k, w["tau"])
        if k >= 1:  # the closed form reads Z+_0 and Z-_{-1} as absent
            out = out + ons(family, "Z+", k, w["nu"])
        out = out + ons(family, "Z+", k + 1, w["nu"])
        if k >= 1:
            out = out + ons(family, "Z-", k - 1, w["nustar"])
        out = out + ons(family, "Z-", k, w["nustar"])
        return out
    assert family == "invariant"
    return (
        ons(family, "H", k, w["mu0"])
        + ons(family, "E", k, w["mu1"])
        + ons(family, "F", k, w["mu2"])
    )


def check_linear_charges(family, max_k, variant="series", mutate=False):
    """All pairs of linear charges commute, with fully symbolic weights.

    mutate=True flips the sign of the diagonal-letter part of the second
    charge, which must break commutativity."""
    started = time.monotonic()
    charges = [build_linear_charge(family, k, variant) for k in range(max_k + 1)]
    if mutate and max_k >= 1:
        flip = {"onsager": "G", "augmented": "K", "invariant": "H"}[family]
        c1 = charges[1]
        charges[1] = OnsElt(
            {s: (-c if s.letter == flip else c) for s, c in c1.terms.items()}
        )
    witnesses = []
    count = 0
    for j in range(len(charges)):
        for k in range(j + 1, len(charges)):
            res = abstract_bracket(charges[j], charges[k])
            if res:
                count += len(res.terms)
                if len(witnesses) < 64:
                    witnesses.append((f"[I_{j}, I_{k}]", str(res)))
    return finish_report(
        f"linear_charges[{family}]"
        + (f"[{variant}]" if variant != "series" else "")
        + ("[mutated]" if mutate else ""),
        witnesses,
        count,
        f"symbolic weights, 0 <= j < k <= {max_k}",
        started,
    )


def check_quadratic_charges(family, max_k, mutate=False):
    """All pairs of quadratic charges commute in the enveloping algebra.

    mutate=True adds a stray degree-one term to t_1, which must fail."""
    started = time.monotonic()
    ts = build_quadratic_charge(family, max_k)
    if mutate and max_k >= 1:
        ts[1] = ts[1] + UeaElt({(BasisSymbol("E", 1),): 1})
    witnesses = []
    count = 0
    for j in range(max_k + 1):
        for k in range(j + 1, max_k + 1):
            res = uea_commutator(ts[j], ts[k])
            if res:
                count += len(res.terms)
                if len(witnesses) < 64:
                    witnesses.append((f"[t_{j}, t_{k}]", str(res)[:200]))
    return finish_report(
        f"quadratic_charges[{family}]" + ("[mutated]" if mutate else ""),
        witnesses,
        count,
        f"normal-ordered, 0 <= j < k <= {max_k}",
        started,
    )


def check_charge_commutativity(family, linear_max=6, quad_max=4):
    """Both charge hierarchies for one family; returns two reports."""
    return [
        check_linear_charges(family, linear_max),
        check_quadratic_charges(family, quad_max),
    ]


def note_mixed_commutator(family, j, k):
    """[t_j, image(I_k)] is generically nonzero; report its size as a note."""
    from .onsager import _image_elt

    ts = build_quadratic_charge(family, j)
    ik = build_linear_charge(family, k)
    res = uea_commutator(ts[j], lie_to_uea(_image_elt(family, ik)))
    size = "0" if res.is_zero() else f"{len(res.terms)} normal-ordered terms"
    return f"[t_{j}, b_{k}] for {family}: {size}"
