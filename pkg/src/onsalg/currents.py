"""Truncated operator-valued currents and their exchange relations.

A CurrentMat is a matrix of formal series whose coefficients live in the
mode Lie algebra.  Each spectral variable carries a SupportMeta recording
where the truncated data is exact, so every comparison happens only on a
provably safe window; degrees are doubled like LaurentPoly exponents.
"""

import time
from dataclasses import dataclass

from .exactalg import LaurentPoly, rat, spectral
from .kacmoody import C, E, F, H, LieElt, bracket
from .report import finish_report
from .tensormat import build_boundary, build_r, build_rbar, leg_embed

__all__ = [
    "SupportMeta",
    "CurrentMat",
    "build_T",
    "build_B",
    "series_bracket",
    "clear_and_compare",
    "check_frt_relations",
    "check_exchange",
    "extract_mode",
    "B_FAMILIES",
]


def _nmin(a, b):
    if a is None or b is None:
        return None
    return min(a, b)


def _nmax(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


@dataclass(frozen=True)
class SupportMeta:
    """Exactness bookkeeping for one spectral variable (doubled degrees).

    natural_lo/hi bound the true series support (None = unbounded);
    trunc_lo/hi bound the region where stored coefficients are exact
    (None = exact arbitrarily far in that direction).
    """

    natural_lo: int = None
    natural_hi: int = None
    trunc_lo: int = None
    trunc_hi: int = None

    @property
    def kind(self):
        if self.trunc_lo is None and self.trunc_hi is None:
            return "full"
        if self.trunc_lo is None:
            return "below"
        if self.trunc_hi is None:
            return "above"
        return "window"

    def exact_window(self):
        """(lo, hi) of the informative comparison region; None = unbounded."""
        lo = self.natural_lo
        if self.trunc_lo is not None:
            lo = self.trunc_lo if lo is None else max(lo, self.trunc_lo)
        hi = self.natural_hi
        if self.trunc_hi is not None:
            hi = self.trunc_hi if hi is None else min(hi, self.trunc_hi)
        return lo, hi

    def require_nonvacuous(self, what):
        lo, hi = self.exact_window()
        if lo is not None and hi is not None and hi < lo:
            raise ValueError(
                f"{what}: safe comparison window is empty "
                f"(degrees [{lo/2:g}, {hi/2:g}]); increase the window"
            )

    def shifted(self, lo_shift, hi_shift):
        """Meta after multiplying by a scalar whose degrees span
        [lo_shift, hi_shift] in this variable."""
        return SupportMeta(
            None if self.natural_lo is None else self.natural_lo + lo_shift,
            None if self.natural_hi is None else self.natural_hi + hi_shift,
            None if self.trunc_lo is None else self.trunc_lo + hi_shift,
            None if self.trunc_hi is None else self.trunc_hi + lo_shift,
        )

    def added(self, other):
        return SupportMeta(
            _nmin(self.natural_lo, other.natural_lo),
            _nmax(self.natural_hi, other.natural_hi),
            other.trunc_lo
            if self.trunc_lo is None
            else (self.trunc_lo if other.trunc_lo is None else max(self.trunc_lo, other.trunc_lo)),
            other.trunc_hi
            if self.trunc_hi is None
            else (self.trunc_hi if other.trunc_hi is None else min(self.trunc_hi, other.trunc_hi)),
        )

    def multiplied(self, other):
        """Meta of a product of two series in the same variable."""
        hi_bounds = []
        if self.trunc_hi is not None:
            if other.natural_lo is None:
                raise ValueError("product with unbounded-below unknown tail")
            hi_bounds.append(self.trunc_hi + other.natural_lo)
        if other.trunc_hi is not None:
            if self.natural_lo is None:
                raise ValueError("product with unbounded-below unknown tail")
            hi_bounds.append(other.trunc_hi + self.natural_lo)
        lo_bounds = []
        if self.trunc_lo is not None:
            if other.natural_hi is None:
                raise ValueError("product with unbounded-above unknown tail")
            lo_bounds.append(self.trunc_lo + other.natural_hi)
        if other.trunc_lo is not None:
            if self.natural_hi is None:
                raise ValueError("product with unbounded-above unknown tail")
            lo_bounds.append(other.trunc_lo + self.natural_hi)
        return SupportMeta(
            None
            if self.natural_lo is None or other.natural_lo is None
            else self.natural_lo + other.natural_lo,
            None
            if self.natural_hi is None or other.natural_hi is None
            else self.natural_hi + other.natural_hi,
            max(lo_bounds) if lo_bounds else None,
            min(hi_bounds) if hi_bounds else None,
        )

    def inverted(self):
        def neg(v):
            return None if v is None else -v

        return SupportMeta(
            neg(self.natural_hi), neg(self.natural_lo),
            neg(self.trunc_hi), neg(self.trunc_lo),
        )

    def describe(self, name):
        lo, hi = self.exact_window()
        lo = "-inf" if lo is None else f"{lo/2:g}"
        hi = "+inf" if hi is None else f"{hi/2:g}"
        return f"{name}^[{lo}..{hi}]"


_FULL = SupportMeta()


class CurrentMat:
    """Matrix of truncated Lie-algebra-valued series.

    entries[(i, j)] maps doubled degree tuples (aligned with spectral_vars)
    to LieElt coefficients; metas holds one SupportMeta per spectral var.
    """

    __slots__ = ("legs", "spectral_vars", "entries", "metas")

    def __init__(self, legs, spectral_vars, entries=None, metas=None):
        self.legs = legs
        self.spectral_vars = tuple(spectral_vars)
        self.entries = {}
        if entries:
            for pos, coeffs in entries.items():
                cleaned = {deg: lie for deg, lie in coeffs.items() if lie}
                if cleaned:
                    self.entries[pos] = cleaned
        self.metas = tuple(metas) if metas is not None else (_FULL,) * len(self.spectral_vars)
        assert len(self.metas) == len(self.spectral_vars)

    @property
    def dim(self):
        return 2 ** self.legs

    def entry(self, i, j):
        return self.entries.get((i, j), {})

    def is_zero(self):
        return not self.entries

    def copy_with(self, entries=None, metas=None):
        return CurrentMat(
            self.legs,
            self.spectral_vars,
            self.entries if entries is None else entries,
            self.metas if metas is None else metas,
        )

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        assert isinstance(other, CurrentMat)
        assert other.legs == self.legs and other.spectral_vars == self.spectral_vars
        out = {pos: dict(coeffs) for pos, coeffs in self.entries.items()}
        for pos, coeffs in other.entries.items():
            tgt = out.setdefault(pos, {})
            for deg, lie in coeffs.items():
                cur = tgt.get(deg)
                s = lie if cur is None else cur + lie
                if s:
                    tgt[deg] = s
                else:
                    tgt.pop(deg, None)
            if not tgt:
                del out[pos]
        metas = tuple(a.added(b) for a, b in zip(self.metas, other.metas))
        return CurrentMat(self.legs, self.spectral_vars, out, metas)

    def __neg__(self):
        out = {
            pos: {deg: -lie for deg, lie in coeffs.items()}
            for pos, coeffs in self.entries.items()
        }
        return self.copy_with(entries=out)

    def __sub__(self, other):
        return self + (-other)

    def transpose(self):
        out = {(j, i): coeffs for (i, j), coeffs in self.entries.items()}
        return self.copy_with(entries=out)

    def invert_variable(self, v):
        i = self.spectral_vars.index(v)
        out = {}
        for pos, coeffs in self.entries.items():
            out[pos] = {
                deg[:i] + (-deg[i],) + deg[i + 1 :]: lie for deg, lie in coeffs.items()
            }
        metas = tuple(
            m.inverted() if k == i else m for k, m in enumerate(self.metas)
        )
        return CurrentMat(self.legs, self.spectral_vars, out, metas)

    # -- scalar polynomial action ------------------------------------------------

    def _split_poly(self, p):
        """Split poly terms into (degree shift over spectral_vars, leftover
        parameter monomial as a LaurentPoly)."""
        idx = {}
        for k, v in enumerate(p.variables):
            if v in self.spectral_vars:
                idx[k] = self.spectral_vars.index(v)
            else:
                assert v.kind == "parameter" or not p.uses(v), (
                    f"scalar uses foreign spectral variable {v.name}"
                )
        parts = []
        nvars = len(self.spectral_vars)
        for exps, c in p.terms.items():
            shift = [0] * nvars
            rest_exps = []
            for k, e in enumerate(exps):
                if k in idx:
                    shift[idx[k]] = e
                    rest_exps.append(0)
                else:
                    rest_exps.append(e)
            mono = LaurentPoly.monomial(p.variables, tuple(rest_exps), c)
            parts.append((tuple(shift), mono))
        return parts

    def _poly_span(self, p):
        spans = []
        for v in self.spectral_vars:
            if v in p.variables:
                rng = p.degree_range(v)
                spans.append((0, 0) if rng is None else rng)
            else:
                spans.append((0, 0))
        return spans

    def scale_poly(self, p):
        """Multiply every entry by a scalar LaurentPoly (spectral degrees
        shift the series; parameter content scales the coefficients)."""
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly.const(p)
        parts = self._split_poly(p)
        out = {}
        for pos, coeffs in self.entries.items():
            tgt = {}
            for deg, lie in coeffs.items():
                for shift, mono in parts:
                    nd = tuple(d + s for d, s in zip(deg, shift))
                    add = lie.scale(mono)
                    cur = tgt.get(nd)
                    s = add if cur is None else cur + add
                    if s:
                        tgt[nd] = s
                    else:
                        tgt.pop(nd, None)
            if tgt:
                out[pos] = tgt
        metas = tuple(
            m.shifted(lo, hi) for m, (lo, hi) in zip(self.metas, self._poly_span(p))
        )
        return CurrentMat(self.legs, self.spectral_vars, out, metas)

    def _mixed_mul(self, rows, current_on_left):
        """Product with a dense scalar matrix (list of lists of LaurentPoly)."""
        dim = self.dim
        assert len(rows) == dim
        split = [[None] * dim for _ in range(dim)]
        span = [(0, 0)] * len(self.spectral_vars)
        for i in range(dim):
            for j in range(dim):
                p = rows[i][j]
                if p is None or p.is_zero():
                    continue
                split[i][j] = self._split_poly(p)
                span = [
                    (min(a, c), max(b, d))
                    for (a, b), (c, d) in zip(span, self._poly_span(p))
                ]
        out = {}
        for (i, j), coeffs in self.entries.items():
            for k in range(dim):
                parts = split[j][k] if current_on_left else split[k][i]
                if parts is None:
                    continue
                pos = (i, k) if current_on_left else (k, j)
                tgt = out.setdefault(pos, {})
                for deg, lie in coeffs.items():
                    for shift, mono in parts:
                        nd = tuple(d + s for d, s in zip(deg, shift))
                        add = lie.scale(mono)
                        cur = tgt.get(nd)
                        s = add if cur is None else cur + add
                        if s:
                            tgt[nd] = s
                        else:
                            tgt.pop(nd, None)
        out = {pos: tgt for pos, tgt in out.items() if tgt}
        metas = tuple(
            m.shifted(lo, hi) for m, (lo, hi) in zip(self.metas, span)
        )
        return CurrentMat(self.legs, self.spectral_vars, out, metas)

    def poly_commutator(self, rows):
        """[self, rows] for a scalar polynomial matrix."""
        return self._mixed_mul(rows, True) - self._mixed_mul(rows, False)

    # -- reshaping -------------------------------------------------------------

    def with_spectral_vars(self, new_vars):
        new_vars = tuple(new_vars)
        pos_map = []
        for v in self.spectral_vars:
            pos_map.append(new_vars.index(v))
        out = {}
        n = len(new_vars)
        for pos, coeffs in self.entries.items():
            tgt = {}
            for deg, lie in coeffs.items():
                nd = [0] * n
                for p, d in zip(pos_map, deg):
                    nd[p] = d
                tgt[tuple(nd)] = lie
            out[pos] = tgt
        metas = [_FULL] * n
        for v, m in zip(self.spectral_vars, self.metas):
            metas[new_vars.index(v)] = m
        # a variable absent from the data is a finite constant in it
        for k, v in enumerate(new_vars):
            if v not in self.spectral_vars:
                metas[k] = SupportMeta(0, 0, None, None)
        return CurrentMat(self.legs, new_vars, out, metas)

    def embed(self, legs, total_legs):
        """Tensor with identities, acting on the listed legs (1-based)."""
        legs = tuple(legs)
        assert len(legs) == self.legs
        rest = [p for p in range(1, total_legs + 1) if p not in legs]

        def to_index(bits):
            idx = 0
            for p in range(1, total_legs + 1):
                idx = (idx << 1) | bits[p]
            return idx

        out = {}
        for (a, b), coeffs in self.entries.items():
            abits = [(a >> (self.legs - 1 - t)) & 1 for t in range(self.legs)]
            bbits = [(b >> (self.legs - 1 - t)) & 1 for t in range(self.legs)]
            for other in range(2 ** len(rest)):
                row_bits, col_bits = {}, {}
                for t, p in enumerate(legs):
                    row_bits[p] = abits[t]
                    col_bits[p] = bbits[t]
                for t, p in enumerate(rest):
                    bit = (other >> t) & 1
                    row_bits[p] = bit
                    col_bits[p] = bit
                out[(to_index(row_bits), to_index(col_bits))] = dict(coeffs)
        return CurrentMat(total_legs, self.spectral_vars, out, self.metas)

    def truncate(self, var, lo, hi):
        """Keep degrees of var within [lo, hi] (doubled) and tighten the meta."""
        i = self.spectral_vars.index(var)
        m = self.metas[i]
        if m.trunc_hi is not None and m.trunc_hi < hi:
            raise ValueError("cannot truncate beyond the exact region")
        if m.trunc_lo is not None and m.trunc_lo > lo:
            raise ValueError("cannot truncate beyond the exact region")
        out = {}
        for pos, coeffs in self.entries.items():
            tgt = {deg: lie for deg, lie in coeffs.items() if lo <= deg[i] <= hi}
            if tgt:
                out[pos] = tgt
        metas = list(self.metas)
        metas[i] = SupportMeta(
            m.natural_lo if m.natural_lo is not None else None,
            m.natural_hi,
            None if (m.natural_lo is not None and lo <= m.natural_lo) else lo,
            None if (m.natural_hi is not None and hi >= m.natural_hi) else hi,
        )
        return CurrentMat(self.legs, self.spectral_vars, out, metas)

    def trace(self):
        """Sum of diagonal entries, as a plain degree -> LieElt dict."""
        out = {}
        for i in range(self.dim):
            coeffs = self.entries.get((i, i))
            if not coeffs:
                continue
            for deg, lie in coeffs.items():
                cur = out.get(deg)
                s = lie if cur is None else cur + lie
                if s:
                    out[deg] = s
                else:
                    out.pop(deg, None)
        return out


def series_bracket(a, b, bracket_fn=bracket):
    """Entrywise bracket [a_1, b_2] of currents on independent legs.

    The result acts on a.legs + b.legs legs and its degree tuples
    concatenate the operands' (the spectral variables must be disjoint).
    bracket_fn defaults to the mode-algebra bracket; the abstract families
    pass their own.
    """
    assert not set(a.spectral_vars) & set(b.spectral_vars), (
        "series_bracket needs disjoint spectral variables"
    )
    dim_b = b.dim
    out = {}
    for (ia, ja), ca in a.entries.items():
        for (ib, jb), cb in b.entries.items():
            pos = (ia * dim_b + ib, ja * dim_b + jb)
            tgt = out.setdefault(pos, {})
            for da, la in ca.items():
                for db, lb in cb.items():
                    val = bracket_fn(la, lb)
                    if not val:
                        continue
                    deg = da + db
                    cur = tgt.get(deg)
                    s = val if cur is None else cur + val
                    if s:
                        tgt[deg] = s
                    else:
                        tgt.pop(deg, None)
            if not tgt:
                del out[pos]
    return CurrentMat(
        a.legs + b.legs,
        a.spectral_vars + b.spectral_vars,
        out,
        a.metas + b.metas,
    )


def extract_mode(m, degrees):
    """Coefficients at integer degree(s): dict (i, j) -> LieElt."""
    if isinstance(degrees, int):
        degrees = (degrees,)
    key = tuple(2 * d for d in degrees)
    out = {}
    for pos, coeffs in m.entries.items():
        lie = coeffs.get(key)
        if lie:
            out[pos] = lie
    return out


# -- concrete currents ----------------------------------------------------------


def build_T(sign, window, x=None):
    """The generating current T^+(x) or T^-(x), truncated at |degree| <= window."""
    assert sign in ("+", "-")
    assert window >= 0
    if x is None:
        x = spectral("x")
    half = rat(1, 2)
    ent = {}
    if sign == "+":
        ent[(0, 0)] = {(0,): LieElt.single(H(0), half)}
        ent[(0, 1)] = {(0,): LieElt.single(F(0), 2)}
        ent[(1, 0)] = {}
        ent[(1, 1)] = {(0,): LieElt.single(H(0), -half)}
        for n in range(1, window + 1):
            d = (2 * n,)
            ent[(0, 0)][d] = LieElt.single(H(n))
            ent[(0, 1)][d] = LieElt.single(F(n), 2)
            ent[(1, 0)][d] = LieElt.single(E(n), 2)
            ent[(1, 1)][d] = LieElt.single(H(n), -1)
        meta = SupportMeta(0, None, None, 2 * window)
    else:
        ent[(0, 0)] = {(0,): LieElt.single(H(0), -half)}
        ent[(0, 1)] = {}
        ent[(1, 0)] = {(0,): LieElt.single(E(0), -2)}
        ent[(1, 1)] = {(0,): LieElt.single(H(0), half)}
        for n in range(1, window + 1):
            d = (-2 * n,)
            ent[(0, 0)][d] = LieElt.single(H(-n), -1)
            ent[(0, 1)][d] = LieElt.single(F(-n), -2)
            ent[(1, 0)][d] = LieElt.single(E(-n), -2)
            ent[(1, 1)][d] = LieElt.single(H(-n))
        meta = SupportMeta(None, 0, -2 * window, None)
    return CurrentMat(1, (x,), ent, (meta,))


B_FAMILIES = {
    "onsager": ("U_diag", {"k": 1, "kstar": 1}),
    "augmented": ("U_offdiag", {"sign": -1}),
    "invariant": ("kappa_plus", None),
    "kappa_minus": ("kappa_minus", None),
}

_B_NATURAL_LO = {"onsager": 0, "augmented": 0, "invariant": 0, "kappa_minus": -2}


def boundary_for(family, x):
    fam, params = B_FAMILIES[family]
    return build_boundary(fam, dict(params) if params else None, x=x)


def build_B(family, window, x=None):
    """B(x) = T+(x) + k(x) T-(1/x)^t k(x)^-1 - c x k'(x) k(x)^-1, truncated.

    Keeps window+1 exact coefficients starting at the family's lowest degree.
    """
    assert family in B_FAMILIES, f"unknown family {family!r}"
    assert window >= 1
    if x is None:
        x = spectral("x")
    b = boundary_for(family, x)
    margin = window + 3
    tp = build_T("+", margin, x)
    tm = build_T("-", margin, x).invert_variable(x).transpose()
    k_rows = b.mat.nums
    kinv = b.inverse()
    assert kinv.den_factors == (), "boundary inverse must be polynomial"
    conj = tm._mixed_mul(k_rows, False)._mixed_mul(kinv.nums, True)
    total = tp + conj
    # central term: -c x k'(x) k(x)^-1
    xk = b.derivative() @ kinv
    assert xk.den_factors == ()
    cent = {}
    lo = hi = None
    for i in range(2):
        for j in range(2):
            p = LaurentPoly.var(x, (x,)) * xk.nums[i][j]
            if p.is_zero():
                continue
            xi = p.variables.index(x)
            for exps, cval in p.terms.items():
                d = exps[xi]
                cent.setdefault((i, j), {})[(d,)] = LieElt.single(C, -cval)
                lo = d if lo is None else min(lo, d)
                hi = d if hi is None else max(hi, d)
    if cent:
        c_meta = SupportMeta(lo, hi, None, None)
        total = total + CurrentMat(1, (x,), cent, (c_meta,))
    nat_lo = _B_NATURAL_LO[family]
    meta = total.metas[0]
    assert meta.trunc_hi is None or meta.trunc_hi >= nat_lo + 2 * window
    out = total.truncate(x, nat_lo, nat_lo + 2 * window)
    # nothing may live below the family's known lowest degree
    for pos, coeffs in out.entries.items():
        assert all(d[0] >= nat_lo for d in coeffs), (family, pos)
    metas = (SupportMeta(nat_lo, None, None, nat_lo + 2 * window),)
    return CurrentMat(1, (x,), out.entries, metas)


# -- clearing and comparison -------------------------------------------------------


def _clearing_product(clearing):
    prod = LaurentPoly.const(1)
    for f in clearing:
        prod = prod * f
    return prod


def _cleared_scalar(scalar, clearing):
    """scalar * prod(clearing) as a LaurentPoly.

    Accepts a LaurentPoly, a RatFun, or a (numerator, den_factors) pair;
    every denominator factor must be among the clearing factors."""
    from .exactalg import RatFun, factor_canonical

    if isinstance(scalar, LaurentPoly):
        return scalar * _clearing_product(clearing)
    if isinstance(scalar, RatFun):
        num, raw_factors = scalar.num, []
        if not (scalar.den == LaurentPoly.const(1)):
            raw_factors = [scalar.den]
    else:
        num, raw_factors = scalar
    remaining = list(clearing)
    for raw in raw_factors:
        inv_unit, factors = factor_canonical(raw)
        num = num * inv_unit
        for f in factors:
            key = f.canonical_key()
            for i, g in enumerate(remaining):
                if g.canonical_key() == key:
                    del remaining[i]
                    break
            else:
                raise ValueError(
                    f"denominator factor not covered by the clearing set: {f}"
                )
    return num * _clearing_product(remaining)


def compare_region(a, b):
    """Intersection of the operands' safe windows, per spectral variable."""
    assert a.spectral_vars == b.spectral_vars
    region = []
    for v, ma, mb in zip(a.spectral_vars, a.metas, b.metas):
        m = SupportMeta(
            _nmin(ma.natural_lo, mb.natural_lo),
            _nmax(ma.natural_hi, mb.natural_hi),
            ma.added(mb).trunc_lo,
            ma.added(mb).trunc_hi,
        )
        m.require_nonvacuous(f"variable {v.name}")
        region.append((v, m.exact_window()))
    return region


def clear_and_compare(lhs, rhs_scalar_parts, clearing, name="clear_and_compare"):
    """Verify lhs == sum(scalar_i * current_i) after clearing denominators.

    clearing is a list of polynomial factors; every scalar's denominator
    must divide their product (checked factor by factor).  The comparison
    runs over the intersection of safe windows and raises ValueError if
    that region is empty.  Returns a CheckReport.
    """
    started = time.monotonic()
    cleared = lhs.scale_poly(_clearing_product(clearing))
    rhs = None
    for scalar, cm in rhs_scalar_parts:
        part = cm.scale_poly(_cleared_scalar(scalar, clearing))
        rhs = part if rhs is None else rhs + part
    if rhs is None:
        rhs = CurrentMat(lhs.legs, lhs.spectral_vars, {}, cleared.metas)
    region = compare_region(cleared, rhs)
    diff = cleared - rhs
    witnesses, count = _collect_region_residual(diff, region)
    return finish_report(name, witnesses, count, _region_string(region), started)


def _fmt_window(v, w):
    lo, hi = w
    lo = "-inf" if lo is None else f"{lo // 2}" if lo % 2 == 0 else f"{lo}/2"
    hi = "+inf" if hi is None else f"{hi // 2}" if hi % 2 == 0 else f"{hi}/2"
    return f"{v.name} in [{lo}, {hi}]"


def _collect_region_residual(diff, region):
    windows = [w for _, w in region]
    witnesses = []
    count = 0
    for pos in sorted(diff.entries):
        coeffs = diff.entries[pos]
        for deg in sorted(coeffs):
            inside = all(
                (lo is None or d >= lo) and (hi is None or d <= hi)
                for d, (lo, hi) in zip(deg, windows)
            )
            if not inside:
                continue
            lie = coeffs[deg]
            count += len(lie.terms)
            if len(witnesses) < 64:
                nd = tuple(d / 2 if d % 2 else d // 2 for d in deg)
                witnesses.append((f"entry {pos}, degree {nd}", str(lie)))
    return witnesses, count


def _region_string(region):
    return ", ".join(_fmt_window(v, w) for v, w in region)


# -- the defining relations ----------------------------------------------------------


def _r_cleared(x, y):
    """(x - y) * r(x/y) as plain polynomial rows, 4x4."""
    u = spectral("u")
    r = build_r(u).substitute({u: LaurentPoly.monomial((x, y), (2, -2), 1)})
    assert len(r.den_factors) == 1
    return r.nums


def _xrprime_cleared(x, y):
    """(x - y)^2 * (x/y) * r'(x/y) as polynomial rows, 4x4."""
    u = spectral("u")
    r = build_r(u)
    den = r.den_factors[0]
    dden = den.derivative(u)
    uu = LaurentPoly.var(u, (u,))
    nums = [[(n.derivative(u) * den - n * dden) * uu for n in row] for row in r.nums]
    quot = LaurentPoly.monomial((x, y), (2, -2), 1)
    den_sub = den.substitute({u: quot})  # (x-y)/y after substitution
    from .exactalg import factor_canonical

    inv_unit, factors = factor_canonical(den_sub)
    assert len(factors) == 1
    unit2 = inv_unit * inv_unit
    return [[n.substitute({u: quot}) * unit2 for n in row] for row in nums]


def check_frt_relations(window, omit_central=False):
    """The three defining exchange relations of the double current algebra,
    including the central extension term (set omit_central to confirm the
    check catches its absence)."""
    started = time.monotonic()
    if window < 4:
        raise ValueError(
            "window must be >= 4: the mixed relation compares degrees of y in "
            f"[-window+2, 0], which is too thin at window {window}"
        )
    x, y = spectral("x"), spectral("y")
    tp_x, tm_x = build_T("+", window, x), build_T("-", window, x)
    tp_y, tm_y = build_T("+", window, y), build_T("-", window, y)
    vars2 = (x, y)
    xy = LaurentPoly.var(x, (x, y)) - LaurentPoly.var(y, (x, y))
    r_rows = _r_cleared(x, y)
    witnesses = []
    count = 0
    regions = []

    def one_relation(tag, ta, tb, central):
        nonlocal count
        lhs = series_bracket(ta, tb)
        t_sum = ta.embed((1,), 2).with_spectral_vars(vars2) + tb.embed(
            (2,), 2
        ).with_spectral_vars(vars2)
        if central is None:
            cleared = lhs.scale_poly(xy)
            rhs = t_sum.poly_commutator(r_rows)
        else:
            cleared = lhs.scale_poly(xy * xy)
            rows2 = [[n * xy for n in row] for row in r_rows]
            rhs = t_sum.poly_commutator(rows2)
            if not omit_central:
                rhs = rhs + central
        region = compare_region(cleared, rhs)
        regions.append(f"{tag}: {_region_string(region)}")
        w, c = _collect_region_residual(cleared - rhs, region)
        count += c
        witnesses.extend((f"{tag} {p}", r) for p, r in w)

    # central correction for the mixed relation: -2c (x/y) r'(x/y), cleared
    cent_rows = _xrprime_cleared(x, y)
    cent_entries = {}
    for i in range(4):
        for j in range(4):
            p = cent_rows[i][j]
            if p.is_zero():
                continue
            coeffs = {}
            for exps, cval in p.terms.items():
                dx = exps[p.variables.index(x)]
                dy = exps[p.variables.index(y)]
                coeffs[(dx, dy)] = LieElt.single(C, -2 * cval)
            cent_entries[(i, j)] = coeffs
    central = CurrentMat(
        2,
        vars2,
        cent_entries,
        (SupportMeta(0, 4, None, None), SupportMeta(0, 4, None, None)),
    )

    one_relation("[T+,T+]", tp_x, tp_y, None)
    one_relation("[T-,T-]", tm_x, tm_y, None)
    one_relation("[T+,T-]", tp_x, tm_y, central)

    # centrality of c against every stored coefficient
    for cur in (tp_x, tm_x):
        for pos, coeffs in cur.entries.items():
            for deg, lie in coeffs.items():
                res = bracket(lie, LieElt.single(C))
                if res:
                    count += len(res.terms)
                    witnesses.append((f"[T, c] at {pos} deg {deg}", str(res)))

    return finish_report(
        "frt_relations" + ("[no central term]" if omit_central else ""),
        witnesses,
        count,
        "; ".join(regions),
        started,
    )


def check_exchange(family, window, rbar_family=None):
    """[B1(x), B2(y)] = [rbar21(y,x), B1(x)] + [B2(y), rbar12(x,y)] on the
    safe window, after clearing (x - y)(xy - 1).

    rbar_family overrides which family's reflected r-matrix is used; any
    mismatch with the B family must make the check fail.
    """
    started = time.monotonic()
    if window < 4:
        raise ValueError("window must be >= 4 for a meaningful comparison")
    x, y = spectral("x"), spectral("y")
    bx = build_B(family, window, x)
    by = build_B(family, window, y)
    b = boundary_for(rbar_family or family, x)
    rbar = build_rbar(b, x, y)
    clearing = [
        LaurentPoly.var(x, (x, y)) - LaurentPoly.var(y, (x, y)),
        LaurentPoly.var(x, (x, y)) * LaurentPoly.var(y, (x, y))
        - LaurentPoly.const(1, (x, y)),
    ]
    keys = sorted(f.canonical_key() for f in clearing)
    rbar21 = leg_embed(
        rbar.substitute({x: LaurentPoly.var(y, (y,)), y: LaurentPoly.var(x, (x,))}),
        (2, 1),
        2,
    )

    def cleared_rows(mat):
        counts = {}
        for f in mat.den_factors:
            counts[f.canonical_key()] = counts.get(f.canonical_key(), 0) + 1
        comp = LaurentPoly.const(1)
        for f in clearing:
            k = f.canonical_key()
            have = counts.get(k, 0)
            if have:
                counts[k] -= 1
            else:
                comp = comp * f
        assert all(v == 0 for v in counts.values()), "rbar has foreign denominators"
        return [[n * comp for n in row] for row in mat.nums]

    r12_rows = cleared_rows(rbar)
    r21_rows = cleared_rows(rbar21)
    vars2 = (x, y)
    b1 = bx.embed((1,), 2).with_spectral_vars(vars2)
    b2 = by.embed((2,), 2).with_spectral_vars(vars2)
    lhs = series_bracket(bx, by).scale_poly(_clearing_product(clearing))
    rhs = (-b1.poly_commutator(r21_rows)) + b2.poly_commutator(r12_rows)
    region = compare_region(lhs, rhs)
    witnesses, count = _collect_region_residual(lhs - rhs, region)
    tag = f"exchange[{family}]"
    if rbar_family and rbar_family != family:
        tag += f"[rbar from {rbar_family}]"
    return finish_report(tag, witnesses, count, _region_string(region), started)
