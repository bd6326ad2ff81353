"""The affine sl2 Lie algebra in its mode basis, with exact brackets.

Basis symbols are e[n], f[n], h[n] for integer n plus the central c.
Brackets follow

    [e_n, e_m] = [f_n, f_m] = 0
    [h_n, e_m] = 2 e_{n+m}          [h_n, f_m] = -2 f_{n+m}
    [h_n, h_m] = 2 c n delta_{n+m}  [e_n, f_m] = h_{n+m} + c n delta_{n+m}

Elements carry coefficients that are polynomials in parameter variables,
so symbolic linear combinations stay exact.
"""

import time
from dataclasses import dataclass

from .exactalg import LaurentPoly, Rational
from .report import finish_report

__all__ = [
    "BasisSymbol",
    "LieElt",
    "E",
    "F",
    "H",
    "C",
    "bracket",
    "MAP_NAMES",
    "apply_map",
    "check_automorphism",
    "check_serre_chevalley",
]


@dataclass(frozen=True, order=True)
class BasisSymbol:
    """One basis vector: type in 'E','F','H','C'; C ignores its mode."""

    type: str
    mode: int = 0

    def __post_init__(self):
        assert self.type in ("E", "F", "H", "C")
        if self.type == "C":
            assert self.mode == 0

    def __str__(self):
        if self.type == "C":
            return "c"
        return f"{self.type.lower()}[{self.mode}]"


def E(n):
    return BasisSymbol("E", n)


def F(n):
    return BasisSymbol("F", n)


def H(n):
    return BasisSymbol("H", n)


C = BasisSymbol("C", 0)

_ONE = LaurentPoly.const(1)


def _as_coeff(c):
    if isinstance(c, LaurentPoly):
        return c
    return LaurentPoly.const(c)


class LieElt:
    """A finite linear combination of basis symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for sym, c in terms.items():
                c = _as_coeff(c)
                if c:
                    prev = clean.get(sym)
                    if prev is None:
                        clean[sym] = c
                    else:
                        s = prev + c
                        if s:
                            clean[sym] = s
                        else:
                            del clean[sym]
        self.terms = clean

    @classmethod
    def single(cls, sym, coeff=1):
        e = cls.__new__(cls)
        c = _as_coeff(coeff)
        e.terms = {sym: c} if c else {}
        return e

    @classmethod
    def zero(cls):
        e = cls.__new__(cls)
        e.terms = {}
        return e

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for sym, c in other.terms.items():
            prev = out.get(sym)
            if prev is None:
                out[sym] = c
            else:
                s = prev + c
                if s:
                    out[sym] = s
                else:
                    del out[sym]
        e = LieElt.__new__(LieElt)
        e.terms = out
        return e

    def __neg__(self):
        e = LieElt.__new__(LieElt)
        e.terms = {sym: -c for sym, c in self.terms.items()}
        return e

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        if isinstance(s, LieElt):
            raise TypeError("scale takes a scalar, not a LieElt")
        s = _as_coeff(s)
        if not s:
            return LieElt.zero()
        e = LieElt.__new__(LieElt)
        e.terms = {sym: c * s for sym, c in self.terms.items()}
        return e

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, LieElt):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[s] == c for s, c in self.terms.items())

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

    def __repr__(self):
        return f"LieElt({self})"


def _basis_bracket(a, b):
    """[a, b] for basis symbols, as a list of (symbol, int) pairs."""
    ta, tb = a.type, b.type
    if ta == "C" or tb == "C":
        return ()
    n, m = a.mode, b.mode
    if ta == tb:
        if ta == "H" and n + m == 0 and n != 0:
            return ((C, 2 * n),)
        return ()
    if ta == "H":
        if tb == "E":
            return ((E(n + m), 2),)
        return ((F(n + m), -2),)
    if tb == "H":
        if ta == "E":
            return ((E(n + m), -2),)
        return ((F(n + m), 2),)
    if ta == "E":  # [e_n, f_m]
        out = [(H(n + m), 1)]
        if n + m == 0 and n != 0:
            out.append((C, n))
        return tuple(out)
    # [f_n, e_m] = -[e_m, f_n]
    out = [(H(n + m), -1)]
    if n + m == 0 and m != 0:
        out.append((C, -m))
    return tuple(out)


def bracket(a, b):
    """Exact Lie bracket of two LieElts (bilinear over coefficient polys)."""
    out = {}
    for sa, ca in a.terms.items():
        for sb, cb in b.terms.items():
            pairs = _basis_bracket(sa, sb)
            if not pairs:
                continue
            c = ca * cb
            for sym, k in pairs:
                add = c * k
                prev = out.get(sym)
                if prev is None:
                    out[sym] = add
                else:
                    s = prev + add
                    if s:
                        out[sym] = s
                    else:
                        del out[sym]
    e = LieElt.__new__(LieElt)
    e.terms = {s: c for s, c in out.items() if c}
    return e


# -- the automorphism zoo -------------------------------------------------------


def _map_theta1(sym):
    t, n = sym.type, sym.mode
    if t == "E":
        return LieElt.single(F(-n))
    if t == "F":
        return LieElt.single(E(-n))
    if t == "H":
        return LieElt.single(H(-n), -1)
    return LieElt.single(C, -1)


def _map_theta2(sym):
    t, n = sym.type, sym.mode
    if t == "E":
        return LieElt.single(E(-n + 1))
    if t == "F":
        return LieElt.single(F(-n - 1))
    if t == "H":
        out = LieElt.single(H(-n))
        if n == 0:
            out = out + LieElt.single(C)
        return out
    return LieElt.single(C, -1)


def _map_lusztig_plus(sym):
    t, n = sym.type, sym.mode
    if t == "E":
        return LieElt.single(E(-n))
    if t == "F":
        return LieElt.single(F(-n))
    if t == "H":
        return LieElt.single(H(-n))
    return LieElt.single(C, -1)


def _map_lusztig_minus(sym):
    t, n = sym.type, sym.mode
    if t == "E":
        return LieElt.single(E(-n + 2))
    if t == "F":
        return LieElt.single(F(-n - 2))
    if t == "H":
        out = LieElt.single(H(-n))
        if n == 0:
            out = out + LieElt.single(C, 2)
        return out
    return LieElt.single(C, -1)


def _map_shift(sym):
    # one-step loop rotation; conjugates the plus/minus fixed subalgebras
    t, n = sym.type, sym.mode
    if t == "E":
        return LieElt.single(E(n + 1))
    if t == "F":
        return LieElt.single(F(n - 1))
    if t == "H":
        out = LieElt.single(H(n))
        if n == 0:
            out = out + LieElt.single(C)
        return out
    return LieElt.single(C)


_MAPS = {
    "theta1": _map_theta1,
    "theta2": _map_theta2,
    "lusztig_plus": _map_lusztig_plus,
    "lusztig_minus": _map_lusztig_minus,
    "shift": _map_shift,
}

MAP_NAMES = tuple(_MAPS)

_INVOLUTIVE = ("theta1", "theta2", "lusztig_plus", "lusztig_minus")


def apply_map(name, a, override=None):
    """Apply a named linear map to a LieElt.

    override, if given, is a callable BasisSymbol -> LieElt | None tried
    before the named map (used to verify that perturbed maps fail).
    """
    fn = _MAPS[name]
    out = LieElt.zero()
    for sym, c in a.terms.items():
        img = override(sym) if override else None
        if img is None:
            img = fn(sym)
        out = out + img.scale(c)
    return out


def _basis_range(window):
    syms = [C]
    for n in range(-window, window + 1):
        syms.extend((E(n), F(n), H(n)))
    return syms


def check_automorphism(name, window, override=None):
    """Verify the named map preserves brackets on all basis pairs with
    |mode| <= window, and squares to the identity when it should."""
    started = time.monotonic()
    syms = _basis_range(window)
    witnesses = []
    count = 0
    for a in syms:
        ea = LieElt.single(a)
        fa = apply_map(name, ea, override)
        for b in syms:
            eb = LieElt.single(b)
            lhs = apply_map(name, bracket(ea, eb), override)
            rhs = bracket(fa, apply_map(name, eb, override))
            diff = lhs - rhs
            if diff:
                count += len(diff.terms)
                witnesses.append((f"[{a}, {b}]", str(diff)))
    if name in _INVOLUTIVE:
        for a in syms:
            ea = LieElt.single(a)
            diff = apply_map(name, apply_map(name, ea, override), override) - ea
            if diff:
                count += len(diff.terms)
                witnesses.append((f"involution at {a}", str(diff)))
    return finish_report(
        f"automorphism[{name}]",
        witnesses,
        count,
        f"basis pairs with |mode| <= {window}",
        started,
    )


def check_serre_chevalley(window):
    """Verify the Chevalley-generator presentation inside the mode basis.

    Uses the standard images k1 -> h0, x1+ -> e0, x1- -> f0,
    k0 -> -c - h0, x0+ -> f[-1], x0- -> e[1]; the Cartan matrix is
    [[2,-2],[-2,2]] and [xi+, xj-] = kj exactly when i = j.
    """
    started = time.monotonic()
    k = {1: LieElt.single(H(0)), 0: LieElt.single(C, -1) + LieElt.single(H(0), -1)}
    xp = {1: LieElt.single(E(0)), 0: LieElt.single(F(-1))}
    xm = {1: LieElt.single(F(0)), 0: LieElt.single(E(1))}
    cart = {(0, 0): 2, (1, 1): 2, (0, 1): -2, (1, 0): -2}
    witnesses = []
    count = 0

    def expect(tag, got, want):
        nonlocal count
        diff = got - want
        if diff:
            count += len(diff.terms)
            witnesses.append((tag, str(diff)))

    expect("[k0, k1]", bracket(k[0], k[1]), LieElt.zero())
    for i in (0, 1):
        for j in (0, 1):
            a = cart[i, j]
            expect(f"[k{i}, x{j}+]", bracket(k[i], xp[j]), xp[j].scale(a))
            expect(f"[k{i}, x{j}-]", bracket(k[i], xm[j]), xm[j].scale(-a))
            want = k[j] if i == j else LieElt.zero()
            expect(f"[x{i}+, x{j}-]", bracket(xp[i], xm[j]), want)
    for i, j in ((0, 1), (1, 0)):
        for sgn, x in (("+", xp), ("-", xm)):
            cubic = bracket(x[i], bracket(x[i], bracket(x[i], x[j])))
            expect(f"serre [x{i}{sgn},[x{i}{sgn},[x{i}{sgn},x{j}{sgn}]]]", cubic, LieElt.zero())
    # the central element is k0 + k1 and must commute with everything in range
    central = k[0] + k[1]
    for b in _basis_range(window):
        expect(f"[k0+k1, {b}]", bracket(central, LieElt.single(b)), LieElt.zero())
    return finish_report(
        "serre_chevalley",
        witnesses,
        count,
        f"generator relations; centrality swept |mode| <= {window}",
        started,
    )
