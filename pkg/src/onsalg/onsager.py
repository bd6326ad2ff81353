"""The three mode-symmetric subalgebra families and their presentations.

Each family is an abstract Lie algebra with countably many generators
subject to index symmetries; `morphism_image` realizes its generators
inside the mode algebra, and the checks confirm the defining relations,
their finite consequences, and the generating-series form of the bracket.
"""

import random
import time
from dataclasses import dataclass

from .exactalg import LaurentPoly, rat, spectral
from .kacmoody import C, E as me, F as mf, H as mh, LieElt, apply_map, bracket
from .currents import CurrentMat, SupportMeta, clear_and_compare, series_bracket
from .report import finish_report

__all__ = [
    "OnsSymbol",
    "OnsElt",
    "FAMILIES",
    "canonicalize",
    "ons",
    "abstract_bracket",
    "canonical_symbols",
    "morphism_image",
    "build_current",
    "check_morphism",
    "check_dolan_grady",
    "check_fixed_point",
    "check_jacobi",
    "check_jacobi_sampled",
    "check_kappa_isomorphism",
    "check_current_relations",
]

FAMILIES = ("onsager", "augmented", "invariant")

_LETTERS = {
    "onsager": ("A", "G"),
    "augmented": ("K", "Z+", "Z-"),
    "invariant": ("H", "E", "F"),
}


@dataclass(frozen=True, order=True)
class OnsSymbol:
    family: str
    letter: str
    mode: int

    def __post_init__(self):
        assert self.letter in _LETTERS[self.family], (self.family, self.letter)

    def __str__(self):
        return f"{self.letter}[{self.mode}]"

    __repr__ = __str__


def canonicalize(family, letter, mode):
    """Reduce a generator to its canonical index; returns (sign, symbol).

    The index symmetries are: A free and G odd under negation (G_0 = 0);
    K even, Z+ symmetric about 1/2, Z- symmetric about -1/2; H, E, F even.
    """
    if family == "onsager":
        if letter == "G":
            if mode == 0:
                return 0, None
            if mode < 0:
                return -1, OnsSymbol(family, "G", -mode)
        return 1, OnsSymbol(family, letter, mode)
    if family == "augmented":
        if letter == "K":
            mode = abs(mode)
        elif letter == "Z+":
            if mode < 1:
                mode = 1 - mode
        else:
            if mode < 0:
                mode = -mode - 1
        return 1, OnsSymbol(family, letter, mode)
    assert family == "invariant"
    return 1, OnsSymbol(family, letter, abs(mode))


def _as_coeff(c):
    if isinstance(c, LaurentPoly):
        return c
    return LaurentPoly.const(c)


class OnsElt:
    """Linear combination of canonical family generators.

    Coefficients are LaurentPolys in parameter variables, mirroring LieElt.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for sym, c in terms.items():
                c = _as_coeff(c)
                if not c.is_zero():
                    self.terms[sym] = c

    @classmethod
    def single(cls, family, letter, mode, coeff=1):
        sign, sym = canonicalize(family, letter, mode)
        if sign == 0:
            return cls()
        return cls({sym: sign * _as_coeff(coeff)})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for sym, c in other.terms.items():
            cur = out.get(sym)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(sym, None)
            else:
                out[sym] = s
        e = OnsElt()
        e.terms = out
        return e

    def __neg__(self):
        e = OnsElt()
        e.terms = {sym: -c for sym, c in self.terms.items()}
        return e

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _as_coeff(c)
        if c.is_zero():
            return OnsElt()
        e = OnsElt()
        e.terms = {sym: cc * c for sym, cc in self.terms.items()}
        return e

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, OnsElt):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset((s, c.canonical_key()) for s, c in self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for sym in sorted(self.terms):
            c = self.terms[sym]
            cs = str(c)
            if cs == "1":
                bits.append(str(sym))
            elif cs == "-1":
                bits.append(f"-{sym}")
            elif len(c.terms) > 1 or "*" in cs or "/" in cs:
                bits.append(f"({cs})*{sym}")
            else:
                bits.append(f"{cs}*{sym}")
        return " + ".join(bits).replace("+ -", "- ")

    __repr__ = __str__


def ons(family, letter, mode, coeff=1):
    return OnsElt.single(family, letter, mode, coeff)


def _pair_bracket(a, b):
    """Bracket of two canonical generators, as (coeff, letter, mode) triples."""
    fam = a.family
    assert fam == b.family
    la, lb, n, m = a.letter, b.letter, a.mode, b.mode
    if fam == "onsager":
        if la == "A" and lb == "A":
            return ((4, "G", n - m),)
        if la == "G" and lb == "A":
            return ((2, "A", n + m), (-2, "A", m - n))
        if la == "A" and lb == "G":
            return ((-2, "A", m + n), (2, "A", n - m))
        return ()
    if fam == "augmented":
        if la == lb:
            return ()
        if la == "K" and lb == "Z+":
            return ((2, "Z+", n + m), (2, "Z+", -n + m))
        if la == "K" and lb == "Z-":
            return ((-2, "Z-", n + m), (-2, "Z-", -n + m))
        if la == "Z+" and lb == "K":
            return ((-2, "Z+", m + n), (-2, "Z+", -m + n))
        if la == "Z-" and lb == "K":
            return ((2, "Z-", m + n), (2, "Z-", -m + n))
        if la == "Z+" and lb == "Z-":
            return ((4, "K", n + m), (4, "K", -n + m + 1))
        return ((-4, "K", m + n), (-4, "K", -m + n + 1))
    if la == lb:
        return ()
    if la == "H" and lb == "E":
        return ((2, "E", n + m), (2, "E", -n + m))
    if la == "E" and lb == "H":
        return ((-2, "E", m + n), (-2, "E", -m + n))
    if la == "H" and lb == "F":
        return ((-2, "F", n + m), (-2, "F", -n + m))
    if la == "F" and lb == "H":
        return ((2, "F", m + n), (2, "F", -m + n))
    if la == "E" and lb == "F":
        return ((1, "H", n + m), (1, "H", -n + m))
    return ((-1, "H", m + n), (-1, "H", -m + n))


def abstract_bracket(a, b):
    """Bilinear bracket of OnsElts via the family's defining relations."""
    out = OnsElt()
    for sa, ca in a.terms.items():
        for sb, cb in b.terms.items():
            c = ca * cb
            for k, letter, mode in _pair_bracket(sa, sb):
                out = out + OnsElt.single(sa.family, letter, mode, k * c)
    return out


def canonical_symbols(family, window):
    """All canonical generators with |mode| <= window, in a stable order."""
    syms = []
    if family == "onsager":
        syms += [OnsSymbol(family, "A", n) for n in range(-window, window + 1)]
        syms += [OnsSymbol(family, "G", n) for n in range(1, window + 1)]
    elif family == "augmented":
        syms += [OnsSymbol(family, "K", n) for n in range(window + 1)]
        syms += [OnsSymbol(family, "Z+", n) for n in range(1, window + 1)]
        syms += [OnsSymbol(family, "Z-", n) for n in range(window + 1)]
    else:
        for letter in ("H", "E", "F"):
            syms += [OnsSymbol(family, letter, n) for n in range(window + 1)]
    return syms


# -- realization inside the mode algebra ------------------------------------------

MORPHISM_FAMILIES = ("onsager", "augmented", "invariant", "kappa_minus")

# which involution of the mode algebra fixes which realization pointwise
FIXING_MAP = {
    "onsager": "theta1",
    "augmented": "theta2",
    "invariant": "lusztig_plus",
    "kappa_minus": "lusztig_minus",
}


def morphism_image(family, sym):
    """Image of a canonical generator in the mode algebra.

    The kappa_minus realization is a second embedding of the invariant
    family, shifted by the translation automorphism."""
    n = sym.mode
    if family == "onsager":
        if sym.letter == "A":
            return LieElt({me(n): _as_coeff(2), mf(-n): _as_coeff(2)})
        return LieElt({mh(n): _as_coeff(1)}) + LieElt({mh(-n): _as_coeff(-1)})
    if family == "augmented":
        if sym.letter == "Z+":
            return LieElt({me(n): _as_coeff(2)}) + LieElt({me(1 - n): _as_coeff(2)})
        if sym.letter == "Z-":
            return LieElt({mf(n): _as_coeff(2)}) + LieElt({mf(-n - 1): _as_coeff(2)})
        out = LieElt({mh(n): _as_coeff(1)}) + LieElt({mh(-n): _as_coeff(1)})
        if n == 0:
            out = out + LieElt({C: _as_coeff(1)})
        return out
    if family == "invariant":
        gen = {"E": me, "F": mf, "H": mh}[sym.letter]
        return LieElt({gen(n): _as_coeff(1)}) + LieElt({gen(-n): _as_coeff(1)})
    assert family == "kappa_minus"
    if sym.letter == "E":
        return LieElt({me(n + 1): _as_coeff(1)}) + LieElt({me(1 - n): _as_coeff(1)})
    if sym.letter == "F":
        return LieElt({mf(n - 1): _as_coeff(1)}) + LieElt({mf(-n - 1): _as_coeff(1)})
    out = LieElt({mh(n): _as_coeff(1)}) + LieElt({mh(-n): _as_coeff(1)})
    if n == 0:
        out = out + LieElt({C: _as_coeff(2)})
    return out


def _image_elt(family, elt):
    out = LieElt.zero()
    for sym, c in elt.terms.items():
        out = out + morphism_image(family, sym).scale(c)
    return out


def _abstract_family(family):
    return "invariant" if family == "kappa_minus" else family


def check_morphism(family, window, override=None):
    """The realization is a Lie algebra homomorphism on all generator pairs
    with |mode| <= window.  `override(sym)` replaces single images (returning
    None falls through), which is how a perturbed realization is checked."""
    started = time.monotonic()
    assert family in MORPHISM_FAMILIES

    def img(sym):
        if override is not None:
            alt = override(sym)
            if alt is not None:
                return alt
        return morphism_image(family, sym)

    syms = canonical_symbols(_abstract_family(family), window)
    witnesses = []
    count = 0
    for a in syms:
        ia = img(a)
        for b in syms:
            lhs = bracket(ia, img(b))
            rhs = LieElt.zero()
            ab = abstract_bracket(
                OnsElt({a: _as_coeff(1)}), OnsElt({b: _as_coeff(1)})
            )
            for sym, c in ab.terms.items():
                rhs = rhs + img(sym).scale(c)
            diff = lhs - rhs
            if diff:
                count += len(diff.terms)
                if len(witnesses) < 64:
                    witnesses.append((f"[{a}, {b}]", str(diff)))
    return finish_report(
        f"morphism[{family}]" + ("[override]" if override else ""),
        witnesses,
        count,
        f"generator pairs with |mode| <= {window}",
        started,
    )


def check_jacobi(family, window):
    """Jacobi identity for every triple of canonical generators up to the
    window; this is what makes the bracket tables an actual Lie algebra."""
    started = time.monotonic()
    syms = canonical_symbols(family, window)
    elts = {s: OnsElt({s: _as_coeff(1)}) for s in syms}
    witnesses = []
    count = 0
    n = len(syms)
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                a, b, c = elts[syms[i]], elts[syms[j]], elts[syms[k]]
                res = (
                    abstract_bracket(abstract_bracket(a, b), c)
                    + abstract_bracket(abstract_bracket(b, c), a)
                    + abstract_bracket(abstract_bracket(c, a), b)
                )
                if res:
                    count += len(res.terms)
                    if len(witnesses) < 64:
                        witnesses.append(
                            (f"({syms[i]}, {syms[j]}, {syms[k]})", str(res))
                        )
    return finish_report(
        f"jacobi[{family}]",
        witnesses,
        count,
        f"all generator triples with |mode| <= {window}",
        started,
    )


def check_jacobi_sampled(family, max_mode, seed, samples=40):
    """Jacobi identity on randomized generator triples with modes up to
    max_mode — a spot check beyond the exhaustive window."""
    started = time.monotonic()
    rng = random.Random(seed)
    syms = canonical_symbols(family, max_mode)
    witnesses = []
    count = 0
    for _ in range(samples):
        sa, sb, sc = (rng.choice(syms) for _ in range(3))
        a = OnsElt({sa: _as_coeff(1)})
        b = OnsElt({sb: _as_coeff(1)})
        c = OnsElt({sc: _as_coeff(1)})
        res = (
            abstract_bracket(abstract_bracket(a, b), c)
            + abstract_bracket(abstract_bracket(b, c), a)
            + abstract_bracket(abstract_bracket(c, a), b)
        )
        if res:
            count += len(res.terms)
            if len(witnesses) < 64:
                witnesses.append((f"({sa}, {sb}, {sc})", str(res)))
    return finish_report(
        f"jacobi_sampled[{family}]",
        witnesses,
        count,
        f"{samples} random triples with |mode| <= {max_mode}, seed {seed}",
        started,
    )


def check_dolan_grady(family):
    """The finite presentations: nested-commutator relations among the
    lowest generators that characterize each family."""
    started = time.monotonic()
    witnesses = []
    count = 0

    def expect(tag, got, want):
        nonlocal count
        diff = got - want
        if diff:
            count += len(diff.terms)
            if len(witnesses) < 64:
                witnesses.append((tag, str(diff)))

    br = abstract_bracket
    if family == "onsager":
        a0, a1 = ons(family, "A", 0), ons(family, "A", 1)
        expect(
            "[A0,[A0,[A0,A1]]] = 16 [A0,A1]",
            br(a0, br(a0, br(a0, a1))),
            br(a0, a1).scale(16),
        )
        expect(
            "[A1,[A1,[A1,A0]]] = 16 [A1,A0]",
            br(a1, br(a1, br(a1, a0))),
            br(a1, a0).scale(16),
        )
    elif family == "augmented":
        k0 = ons(family, "K", 0)
        zp, zm = ons(family, "Z+", 0), ons(family, "Z-", 0)
        expect("[K0,Z+0] = 4 Z+0", br(k0, zp), zp.scale(4))
        expect("[K0,Z-0] = -4 Z-0", br(k0, zm), zm.scale(-4))
        expect("[Z+0,[Z+0,[Z+0,Z-0]]] = 0", br(zp, br(zp, br(zp, zm))), OnsElt())
        expect("[Z-0,[Z-0,[Z-0,Z+0]]] = 0", br(zm, br(zm, br(zm, zp))), OnsElt())
    else:
        assert family == "invariant"
        h0, h1 = ons(family, "H", 0), ons(family, "H", 1)
        e0, e1 = ons(family, "E", 0), ons(family, "E", 1)
        f0, f1 = ons(family, "F", 0), ons(family, "F", 1)
        expect("[H0,E0] = 4 E0", br(h0, e0), e0.scale(4))
        expect("[H0,F0] = -4 F0", br(h0, f0), f0.scale(-4))
        expect("[E0,F0] = 2 H0", br(e0, f0), h0.scale(2))
        expect("[H0,E1] = 4 E1", br(h0, e1), e1.scale(4))
        expect("[H1,E0] = 4 E1", br(h1, e0), e1.scale(4))
        expect("[H0,F1] = -4 F1", br(h0, f1), f1.scale(-4))
        expect("[H1,F0] = -4 F1", br(h1, f0), f1.scale(-4))
        expect("[E0,F1] = 2 H1", br(e0, f1), h1.scale(2))
        expect("[E1,F0] = 2 H1", br(e1, f0), h1.scale(2))
        expect("[H1,[E1,F1]] = 0", br(h1, br(e1, f1)), OnsElt())
    return finish_report(
        f"dolan_grady[{family}]", witnesses, count, "lowest-mode relations", started
    )


def check_fixed_point(family, max_mode):
    """The family's distinguished involution fixes its realization pointwise."""
    started = time.monotonic()
    name = FIXING_MAP[family]
    witnesses = []
    count = 0
    for sym in canonical_symbols(_abstract_family(family), max_mode):
        img = morphism_image(family, sym)
        diff = apply_map(name, img) - img
        if diff:
            count += len(diff.terms)
            if len(witnesses) < 64:
                witnesses.append((str(sym), str(diff)))
    return finish_report(
        f"fixed_point[{family}, {name}]",
        witnesses,
        count,
        f"generators with |mode| <= {max_mode}",
        started,
    )


def check_kappa_isomorphism(window, correspondence_shift=0):
    """The translation automorphism carries the invariant realization onto
    the kappa_minus one generator by generator.  A nonzero
    correspondence_shift misaligns the modes and must fail."""
    started = time.monotonic()
    witnesses = []
    count = 0
    for sym in canonical_symbols("invariant", window):
        sign, target = canonicalize(
            "invariant", sym.letter, sym.mode + correspondence_shift
        )
        moved = apply_map("shift", morphism_image("invariant", sym))
        want = morphism_image("kappa_minus", target).scale(sign) if target else LieElt.zero()
        diff = moved - want
        if diff:
            count += len(diff.terms)
            if len(witnesses) < 64:
                witnesses.append((str(sym), str(diff)))
    return finish_report(
        "kappa_isomorphism"
        + (f"[shift {correspondence_shift:+d}]" if correspondence_shift else ""),
        witnesses,
        count,
        f"invariant generators with mode <= {window}",
        started,
    )


# -- generating series -------------------------------------------------------------


def build_current(family, letter, window, x=None):
    """Generating series of one family letter, truncated at degree window."""
    if x is None:
        x = spectral("x")
    coeffs = {}
    half = rat(1, 2)
    if family == "onsager":
        if letter == "G":
            for n in range(1, window + 1):
                coeffs[(2 * n,)] = OnsElt.single(family, "G", n)
            lo = 2
        elif letter == "A+":
            for n in range(1, window + 1):
                coeffs[(2 * n,)] = OnsElt.single(family, "A", n)
            lo = 2
        else:
            assert letter == "A-"
            for n in range(window + 1):
                coeffs[(2 * n,)] = OnsElt.single(family, "A", -n)
            lo = 0
    elif family == "augmented":
        if letter == "K":
            coeffs[(0,)] = OnsElt.single(family, "K", 0, half)
            for n in range(1, window + 1):
                coeffs[(2 * n,)] = OnsElt.single(family, "K", n)
            lo = 0
        elif letter == "Z+":
            for n in range(1, window + 1):
                coeffs[(2 * n,)] = OnsElt.single(family, "Z+", n)
            lo = 2
        else:
            assert letter == "Z-"
            for n in range(window + 1):
                coeffs[(2 * n,)] = OnsElt.single(family, "Z-", n)
            lo = 0
    else:
        assert family == "invariant" and letter in ("H", "E", "F")
        coeffs[(0,)] = OnsElt.single(family, letter, 0, half)
        for n in range(1, window + 1):
            coeffs[(2 * n,)] = OnsElt.single(family, letter, n)
        lo = 0
    meta = SupportMeta(lo, None, None, 2 * window)
    return CurrentMat(0, (x,), {(0, 0): coeffs}, (meta,))


def check_current_relations(family, window):
    """The full bracket table in generating-series form: every pairing of the
    family's currents equals its closed rational-coefficient combination."""
    started = time.monotonic()
    if window < 3:
        raise ValueError("window must be >= 3 to see past the index symmetries")
    x, y = spectral("x"), spectral("y")
    one = LaurentPoly.const(1, (x, y))
    xx = LaurentPoly.var(x, (x, y))
    yy = LaurentPoly.var(y, (x, y))
    xmy = xx - yy
    xym1 = xx * yy - one
    clearing = [xmy, xym1]
    letters = {"onsager": ("G", "A+", "A-"), "augmented": ("K", "Z+", "Z-")}.get(
        family, ("H", "E", "F")
    )
    cur_x = {l: build_current(family, l, window, x) for l in letters}
    raw_y = {l: build_current(family, l, window, y) for l in letters}
    cur_y = {l: raw_y[l].with_spectral_vars((x, y)) for l in letters}
    cx = {l: cur_x[l].with_spectral_vars((x, y)) for l in letters}

    def scalars(fam):
        g, ap, am = ("G", "A+", "A-") if fam == "onsager" else (None,) * 3
        if fam == "onsager":
            return {
                (g, g): [],
                (g, ap): [
                    ((2 * xx * (one - yy * yy), clearing), cur_y[ap]),
                    ((2 * yy, [xmy]), cx[ap]),
                    ((2 * xx * yy, [xym1]), cx[am]),
                ],
                (g, am): [
                    ((2 * xx * (yy * yy - one), clearing), cur_y[am]),
                    ((-2 * xx, [xmy]), cx[am]),
                    ((-2 * one, [xym1]), cx[ap]),
                ],
                (ap, ap): [((-4 * xx * yy, [xym1]), _gdiff(fam))],
                (ap, am): [((4 * xx, [xmy]), _gdiff(fam))],
                (am, am): [((4 * one, [xym1]), _gdiff(fam))],
            }
        if fam == "augmented":
            k, zp, zm = "K", "Z+", "Z-"
            return {
                (k, k): [],
                (zp, zp): [],
                (zm, zm): [],
                (k, zp): [
                    ((2 * yy * (xx + one) * (yy - one), clearing), cx[zp]),
                    ((-2 * yy * (xx * xx - one), clearing), cur_y[zp]),
                ],
                (k, zm): [
                    ((2 * yy * (xx * xx - one), clearing), cur_y[zm]),
                    ((-2 * xx * (xx + one) * (yy - one), clearing), cx[zm]),
                ],
                (zp, zm): [
                    ((4 * xx * (xx + one) * (yy - one), clearing), cx[k]),
                    ((-4 * xx * (xx - one) * (yy + one), clearing), cur_y[k]),
                ],
            }
        h, e, f = "H", "E", "F"
        return {
            (h, h): [],
            (e, e): [],
            (f, f): [],
            (h, e): [
                ((2 * xx * (yy * yy - one), clearing), cx[e]),
                ((-2 * yy * (xx * xx - one), clearing), cur_y[e]),
            ],
            (h, f): [
                ((-2 * xx * (yy * yy - one), clearing), cx[f]),
                ((2 * yy * (xx * xx - one), clearing), cur_y[f]),
            ],
            (e, f): [
                ((xx * (yy * yy - one), clearing), cx[h]),
                ((-yy * (xx * xx - one), clearing), cur_y[h]),
            ],
        }

    def _gdiff(fam):
        # G(x) - G(y), lifted to the shared variable pair
        return cx["G"] - cur_y["G"]

    witnesses = []
    count = 0
    regions = []
    for (la, lb), parts in scalars(family).items():
        lhs = series_bracket(cur_x[la], raw_y[lb], abstract_bracket)
        rep = clear_and_compare(lhs, parts, clearing, name=f"[{la}(x), {lb}(y)]")
        regions.append(rep.region)
        if not rep.passed:
            count += rep.residual_term_count
            witnesses.extend(
                (f"[{la}(x),{lb}(y)] {w}", d) for w, d in rep.witnesses
            )
    return finish_report(
        f"current_relations[{family}]",
        witnesses,
        count,
        regions[0] if regions else "",
        started,
    )
