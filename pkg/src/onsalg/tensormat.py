"""Matrices over exact rational functions on tensor products of C^2 legs.

A TensorMat keeps one shared denominator as a multiset of canonical
polynomial factors and a dense numerator array; sums take unions of
factor multisets, products concatenate them, and no gcd is ever needed.
All identity checks in this module are exact symbolic computations.
"""

import time

from .exactalg import (
    LaurentPoly,
    RatFun,
    Variable,
    factor_canonical,
    parameter,
    rat,
    spectral,
)
from .report import CheckReport, finish_report

__all__ = [
    "TensorMat",
    "BoundaryMat",
    "CheckReport",
    "build_r",
    "leg_embed",
    "partial_transpose",
    "trace_leg",
    "check_cybe",
    "check_r_symmetries",
    "build_boundary",
    "check_U_conditions",
    "check_reflection",
    "build_rbar",
    "check_nscybe",
    "check_M_condition",
    "BOUNDARY_FAMILIES",
]


def _merge_vars(a, b):
    return tuple(a) + tuple(v for v in b if v not in a)


def _factor_key(f):
    return f.canonical_key()


def _sort_factors(factors):
    return tuple(sorted(factors, key=_factor_key))


def _count_factors(factors):
    counts = {}
    for f in factors:
        counts.setdefault(_factor_key(f), [f, 0])[1] += 1
    return counts


def _product(polys, variables):
    out = LaurentPoly.const(1, variables)
    for p in polys:
        out = out * p
    return out


class TensorMat:
    """Square matrix on (C^2)^{legs} with RatFun entries.

    Stored as numerator polynomials over a shared factored denominator;
    the `entries` property exposes plain RatFun values.
    """

    __slots__ = ("legs", "variables", "nums", "den_factors")

    def __init__(self, legs, entries=None, variables=()):
        dim = 2 ** legs
        self.legs = legs
        self.variables = tuple(variables)
        if entries is None:
            self.nums = [[LaurentPoly.zero() for _ in range(dim)] for _ in range(dim)]
            self.den_factors = ()
            return
        assert len(entries) == dim and all(len(row) == dim for row in entries)
        # collect every entry as num / canonical factor multiset
        split = []
        all_counts = {}
        for row in entries:
            srow = []
            for e in row:
                if isinstance(e, RatFun):
                    num, den = e.num, e.den
                else:
                    num = e if isinstance(e, LaurentPoly) else LaurentPoly.const(e)
                    den = None
                if den is None or den == LaurentPoly.const(1):
                    srow.append((num, {}))
                else:
                    inv_unit, factors = factor_canonical(den)
                    counts = _count_factors(factors)
                    srow.append((num * inv_unit, counts))
                for key, (f, c) in srow[-1][1].items():
                    cur = all_counts.setdefault(key, [f, 0])
                    cur[1] = max(cur[1], c)
            split.append(srow)
        den = []
        for f, c in all_counts.values():
            den.extend([f] * c)
        self.den_factors = _sort_factors(den)
        self.nums = []
        for srow in split:
            row = []
            for num, counts in srow:
                comp = []
                for key, (f, c) in all_counts.items():
                    missing = c - counts.get(key, (None, 0))[1]
                    comp.extend([f] * missing)
                row.append(num * _product(comp, self.variables) if comp else num)
            self.nums.append(row)

    @classmethod
    def _raw(cls, legs, variables, nums, den_factors):
        m = cls.__new__(cls)
        m.legs = legs
        m.variables = tuple(variables)
        m.nums = nums
        m.den_factors = _sort_factors(den_factors)
        return m

    @property
    def dim(self):
        return 2 ** self.legs

    @property
    def entries(self):
        den = _product(self.den_factors, self.variables)
        return [[RatFun(n, den) for n in row] for row in self.nums]

    def entry(self, i, j):
        return RatFun(self.nums[i][j], _product(self.den_factors, self.variables))

    def is_zero(self):
        return all(n.is_zero() for row in self.nums for n in row)

    def term_count(self):
        return sum(len(n.terms) for row in self.nums for n in row)

    # -- ring operations --------------------------------------------------------

    def __neg__(self):
        return TensorMat._raw(
            self.legs,
            self.variables,
            [[-n for n in row] for row in self.nums],
            self.den_factors,
        )

    def __add__(self, other):
        assert isinstance(other, TensorMat) and other.legs == self.legs
        ca = _count_factors(self.den_factors)
        cb = _count_factors(other.den_factors)
        union = {}
        for key, (f, c) in list(ca.items()) + list(cb.items()):
            cur = union.setdefault(key, [f, 0])
            cur[1] = max(cur[1], c)
        comp_a, comp_b, den = [], [], []
        for key, (f, c) in union.items():
            den.extend([f] * c)
            comp_a.extend([f] * (c - ca.get(key, (None, 0))[1]))
            comp_b.extend([f] * (c - cb.get(key, (None, 0))[1]))
        variables = _merge_vars(self.variables, other.variables)
        pa = _product(comp_a, variables) if comp_a else None
        pb = _product(comp_b, variables) if comp_b else None
        dim = self.dim
        nums = []
        for i in range(dim):
            row = []
            for j in range(dim):
                a = self.nums[i][j] if pa is None else self.nums[i][j] * pa
                b = other.nums[i][j] if pb is None else other.nums[i][j] * pb
                row.append(a + b)
            nums.append(row)
        return TensorMat._raw(self.legs, variables, nums, den)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        assert isinstance(other, TensorMat) and other.legs == self.legs
        dim = self.dim
        variables = _merge_vars(self.variables, other.variables)
        nums = [[LaurentPoly.zero() for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            arow = self.nums[i]
            for k in range(dim):
                a = arow[k]
                if a.is_zero():
                    continue
                brow = other.nums[k]
                out = nums[i]
                for j in range(dim):
                    b = brow[j]
                    if not b.is_zero():
                        out[j] = out[j] + a * b
        return TensorMat._raw(
            self.legs, variables, nums, self.den_factors + other.den_factors
        )

    def scale(self, s):
        """Multiply by a scalar, LaurentPoly, or RatFun."""
        if isinstance(s, RatFun):
            num, den = s.num, s.den
        else:
            num, den = s, None
        nums = [[n * num for n in row] for row in self.nums]
        den_factors = self.den_factors
        if den is not None and den != LaurentPoly.const(1):
            inv_unit, factors = factor_canonical(den)
            nums = [[n * inv_unit for n in row] for row in nums]
            den_factors = den_factors + tuple(factors)
        variables = self.variables
        if isinstance(s, (RatFun, LaurentPoly)):
            extra = s.num.variables if isinstance(s, RatFun) else s.variables
            variables = _merge_vars(variables, extra)
        return TensorMat._raw(self.legs, variables, nums, den_factors)

    def commutator(self, other):
        return self @ other - other @ self

    # -- index gymnastics ---------------------------------------------------------

    def transpose(self):
        dim = self.dim
        nums = [[self.nums[j][i] for j in range(dim)] for i in range(dim)]
        return TensorMat._raw(self.legs, self.variables, nums, self.den_factors)

    def substitute(self, assign):
        """Monomial substitution applied to numerators and denominator factors."""
        nums = [[n.substitute(assign) for n in row] for row in self.nums]
        den = []
        variables = self.variables
        for f in self.den_factors:
            g = f.substitute(assign)
            inv_unit, factors = factor_canonical(g)
            if inv_unit != LaurentPoly.const(1):
                nums = [[n * inv_unit for n in row] for row in nums]
            den.extend(factors)
        for row in nums:
            for n in row:
                variables = _merge_vars(variables, n.variables)
        return TensorMat._raw(self.legs, variables, nums, den)

    def inverse_2x2(self):
        """Inverse of a one-leg matrix via the adjugate."""
        assert self.legs == 1
        (a, b), (c, d) = self.nums
        det = a * d - b * c
        assert not det.is_zero(), "singular matrix"
        inv_unit, factors = factor_canonical(det)
        dpoly = _product(self.den_factors, self.variables)
        adj = [[d, -b], [-c, a]]
        nums = [[e * dpoly * inv_unit for e in row] for row in adj]
        return TensorMat._raw(1, self.variables, nums, tuple(factors))

    def trace(self):
        t = LaurentPoly.zero(self.variables)
        for i in range(self.dim):
            t = t + self.nums[i][i]
        return RatFun(t, _product(self.den_factors, self.variables))


def leg_embed(m, legs, total_legs):
    """Embed m, acting on the listed legs (1-based), into total_legs spaces.

    legs may be any ordered tuple of distinct positions; a reversed pair
    realizes the swapped embedding, e.g. legs=(2, 1) turns r_12 into r_21.
    """
    legs = tuple(legs)
    assert len(legs) == m.legs and len(set(legs)) == len(legs)
    assert all(1 <= p <= total_legs for p in legs)
    dim = 2 ** total_legs
    rest = [p for p in range(1, total_legs + 1) if p not in legs]
    nums = [[LaurentPoly.zero() for _ in range(dim)] for _ in range(dim)]

    def bits_to_index(bits):
        # leg 1 owns the most significant bit (first Kronecker factor)
        idx = 0
        for p in range(1, total_legs + 1):
            idx = (idx << 1) | bits[p]
        return idx

    mdim = m.dim
    for a in range(mdim):
        abits = [(a >> (m.legs - 1 - t)) & 1 for t in range(m.legs)]
        for b in range(mdim):
            if m.nums[a][b].is_zero():
                continue
            bbits = [(b >> (m.legs - 1 - t)) & 1 for t in range(m.legs)]
            for other in range(2 ** len(rest)):
                row_bits = {}
                col_bits = {}
                for t, p in enumerate(legs):
                    row_bits[p] = abits[t]
                    col_bits[p] = bbits[t]
                for t, p in enumerate(rest):
                    bit = (other >> t) & 1
                    row_bits[p] = bit
                    col_bits[p] = bit
                nums[bits_to_index(row_bits)][bits_to_index(col_bits)] = m.nums[a][b]
    return TensorMat._raw(total_legs, m.variables, nums, m.den_factors)


def partial_transpose(m, leg):
    """Transpose the indices of one leg (1-based)."""
    assert 1 <= leg <= m.legs
    dim = m.dim
    shift = m.legs - leg
    mask = 1 << shift
    nums = [[LaurentPoly.zero() for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            if m.nums[i][j].is_zero():
                continue
            ni = (i & ~mask) | (j & mask)
            nj = (j & ~mask) | (i & mask)
            nums[ni][nj] = m.nums[i][j]
    return TensorMat._raw(m.legs, m.variables, nums, m.den_factors)


def trace_leg(m, leg):
    """Partial trace over one leg, producing a matrix on the remaining legs."""
    assert 1 <= leg <= m.legs
    shift = m.legs - leg
    mask = 1 << shift
    dim_out = 2 ** (m.legs - 1)

    def expand(idx, bit):
        lo = idx & (mask - 1)
        hi = (idx >> shift) << (shift + 1)
        return hi | (bit << shift) | lo

    nums = [[LaurentPoly.zero() for _ in range(dim_out)] for _ in range(dim_out)]
    for i in range(dim_out):
        for j in range(dim_out):
            acc = LaurentPoly.zero(m.variables)
            for b in (0, 1):
                acc = acc + m.nums[expand(i, b)][expand(j, b)]
            nums[i][j] = acc
    return TensorMat._raw(m.legs - 1, m.variables, nums, m.den_factors)


# -- the r-matrix ------------------------------------------------------------------


def build_r(u):
    """The 4x4 classical r-matrix r(u) with simple pole at u=1."""
    assert isinstance(u, Variable) and u.kind == "spectral"
    one = LaurentPoly.const(1, (u,))
    uu = LaurentPoly.var(u, (u,))
    half = rat(1, 2)
    z = LaurentPoly.zero((u,))
    nums = [
        [-half * (uu + one), z, z, z],
        [z, half * (uu + one), LaurentPoly.const(-2, (u,)), z],
        [z, -2 * uu, half * (uu + one), z],
        [z, z, z, -half * (uu + one)],
    ]
    return TensorMat._raw(2, (u,), nums, (uu - one,))


def _spectral_var(m):
    for v in m.variables:
        if v.kind == "spectral":
            return v
    raise ValueError("matrix has no spectral variable")


def _residual_report(name, mat, region, started):
    witnesses = []
    count = 0
    for i, row in enumerate(mat.nums):
        for j, n in enumerate(row):
            if n.is_zero():
                continue
            count += len(n.terms)
            if len(witnesses) < 64:
                s = str(n)
                if len(s) > 200:
                    s = s[:200] + " ..."
                witnesses.append((f"entry ({i},{j})", s))
    return finish_report(name, witnesses, count, region, started)


def check_cybe(r):
    """Verify [r13, r23] = [r13 + r23, r12] with arguments x1/x3, x2/x3, x1/x2."""
    started = time.monotonic()
    u = _spectral_var(r)
    x1, x2, x3 = spectral("x1"), spectral("x2"), spectral("x3")

    def at(i, j, vi, vj):
        quot = LaurentPoly.monomial((vi, vj), (2, -2), 1)
        return leg_embed(r.substitute({u: quot}), (i, j), 3)

    r13 = at(1, 3, x1, x3)
    r23 = at(2, 3, x2, x3)
    r12 = at(1, 2, x1, x2)
    delta = r13.commutator(r23) - (r13 + r23).commutator(r12)
    return _residual_report(
        "cybe", delta, "symbolic in x1,x2,x3 (exact)", started
    )


def check_r_symmetries(r):
    """Skew symmetry, transpose symmetry, tracelessness and the derivative
    identity [f13 + f23, r12] = [f13, r23] + [r13, f23] with f(u) = u r'(u)."""
    started = time.monotonic()
    u = _spectral_var(r)
    inv_u = LaurentPoly.monomial((u,), (-2,), 1)
    witnesses = []
    count = 0

    r_inv = r.substitute({u: inv_u})
    # r12(u) + r21(1/u) = 0
    sk = r + leg_embed(r_inv, (2, 1), 2)
    # r12(u) + r12(1/u)^{t1 t2} = 0
    tr2 = r + partial_transpose(partial_transpose(r_inv, 1), 2)
    for tag, mat in (("skew r21(1/u)", sk), ("transpose t1t2", tr2)):
        for i, row in enumerate(mat.nums):
            for j, n in enumerate(row):
                if not n.is_zero():
                    count += len(n.terms)
                    witnesses.append((f"{tag} entry ({i},{j})", str(n)))
    tr = r.trace()
    if not tr.is_zero():
        count += len(tr.num.terms)
        witnesses.append(("trace", str(tr)))

    # derivative identity; f = u r'(u) shares the CYBE argument pattern
    den = _product(r.den_factors, r.variables)
    dden = den.derivative(u)
    uu = LaurentPoly.var(u, (u,))
    f_nums = [
        [(n.derivative(u) * den - n * dden) * uu for n in row] for row in r.nums
    ]
    f = TensorMat._raw(2, r.variables, f_nums, r.den_factors + r.den_factors)
    x1, x2, x3 = spectral("x1"), spectral("x2"), spectral("x3")

    def at(m, i, j, vi, vj):
        quot = LaurentPoly.monomial((vi, vj), (2, -2), 1)
        return leg_embed(m.substitute({u: quot}), (i, j), 3)

    f13, f23 = at(f, 1, 3, x1, x3), at(f, 2, 3, x2, x3)
    r13, r23 = at(r, 1, 3, x1, x3), at(r, 2, 3, x2, x3)
    r12 = at(r, 1, 2, x1, x2)
    delta = (f13 + f23).commutator(r12) - f13.commutator(r23) - r13.commutator(f23)
    for i, row in enumerate(delta.nums):
        for j, n in enumerate(row):
            if not n.is_zero():
                count += len(n.terms)
                witnesses.append((f"derivative identity entry ({i},{j})", str(n)))
    return finish_report(
        "r_symmetries", witnesses, count, "symbolic (exact)", started
    )


# -- boundary matrices ---------------------------------------------------------------

BOUNDARY_FAMILIES = (
    "U_diag",
    "U_offdiag",
    "k_general",
    "kappa_plus",
    "kappa_minus",
    "M_ons",
    "M_aug",
    "M_inv",
)

_FAMILY_PARAMS = {
    "U_diag": ("k", "kstar"),
    "U_offdiag": (),
    "k_general": ("alpha", "beta", "gamma", "delta"),
    "kappa_plus": (),
    "kappa_minus": (),
    "M_ons": ("kappa", "kappastar", "mu"),
    "M_aug": ("tau", "nu", "nustar"),
    "M_inv": ("mu0", "mu1", "mu2"),
}


class BoundaryMat:
    """A 2x2 boundary matrix from one of the named families.

    Parameters default to symbolic; pass numbers in `params` to pin them.
    U_offdiag takes params={'sign': +1 or -1}; the minus sign is the default
    and is the variant whose transpose condition carries epsilon = -1.
    """

    __slots__ = ("family", "params", "mat", "x")

    def __init__(self, family, mat, x, params):
        self.family = family
        self.mat = mat
        self.x = x
        self.params = params

    @property
    def variables(self):
        return self.mat.variables

    @property
    def entries(self):
        return self.mat.entries

    def entry(self, i, j):
        return self.mat.entry(i, j)

    def inverse(self):
        return self.mat.inverse_2x2()

    def transpose(self):
        return self.mat.transpose()

    def substitute(self, assign):
        return self.mat.substitute(assign)

    def derivative(self):
        """Entrywise d/dx (our families carry no denominator factors)."""
        assert self.mat.den_factors == ()
        nums = [[n.derivative(self.x) for n in row] for row in self.mat.nums]
        return TensorMat._raw(1, self.mat.variables, nums, ())


def build_boundary(family, params=None, x=None):
    """Construct a named boundary matrix; see BOUNDARY_FAMILIES."""
    assert family in BOUNDARY_FAMILIES, f"unknown family {family!r}"
    params = dict(params or {})
    if x is None:
        x = spectral("x")

    def coeff(name):
        val = params.get(name)
        if val is None:
            v = parameter(name)
            params[name] = v
            return LaurentPoly.var(v, (v,))
        if isinstance(val, (LaurentPoly, Variable)):
            return LaurentPoly.var(val, (val,)) if isinstance(val, Variable) else val
        return LaurentPoly.const(val)

    xx = LaurentPoly.var(x, (x,))
    inv_x = LaurentPoly.monomial((x,), (-2,), 1)
    one = LaurentPoly.const(1, (x,))
    z = LaurentPoly.zero((x,))

    if family == "U_diag":
        k, ks = coeff("k"), coeff("kstar")
        rows = [[k, z], [z, -ks]]
    elif family == "U_offdiag":
        sign = params.setdefault("sign", -1)
        assert sign in (1, -1)
        half_up = LaurentPoly.monomial((x,), (1,), 1)  # x^(1/2)
        half_dn = LaurentPoly.monomial((x,), (-1,), 1)
        rows = [[z, half_dn], [sign * half_up, z]]
    elif family == "k_general":
        al, be, ga, de = (coeff(n) for n in ("alpha", "beta", "gamma", "delta"))
        sx = xx - inv_x
        rows = [[al * sx, be + ga * inv_x], [-(be + ga * xx), de * sx]]
    elif family == "kappa_plus":
        rows = [[z, one], [-one, z]]
    elif family == "kappa_minus":
        rows = [[z, inv_x], [-xx, z]]
    elif family == "M_ons":
        ka, ks, mu = (coeff(n) for n in ("kappa", "kappastar", "mu"))
        rows = [[mu * inv_x, ka + ks * inv_x], [ka + ks * xx, mu * xx]]
    elif family == "M_aug":
        ta, nu, ns = (coeff(n) for n in ("tau", "nu", "nustar"))
        rows = [[ta, nu * (one + inv_x)], [ns * (xx + one), z]]
    else:  # M_inv
        m0, m1, m2 = (coeff(n) for n in ("mu0", "mu1", "mu2"))
        rows = [[m0, m1], [m2, z]]

    variables = (x,)
    for row in rows:
        for p in row:
            variables = _merge_vars(variables, p.variables)
    mat = TensorMat._raw(1, variables, [list(r) for r in rows], ())
    return BoundaryMat(family, mat, x, params)


def check_U_conditions(b, epsilon):
    """U(x)^t = epsilon U(1/x) and [U1(x) U2(y), r12(x/y)] = 0."""
    started = time.monotonic()
    x = b.x
    y = spectral("y")
    witnesses = []
    count = 0

    inv_x = LaurentPoly.monomial((x,), (-2,), 1)
    t_cond = b.transpose() - b.substitute({x: inv_x}).scale(rat(epsilon))
    for i, row in enumerate(t_cond.nums):
        for j, n in enumerate(row):
            if not n.is_zero():
                count += len(n.terms)
                witnesses.append((f"transpose condition entry ({i},{j})", str(n)))

    u = spectral("u")
    r = build_r(u).substitute({u: LaurentPoly.monomial((x, y), (2, -2), 1)})
    u1 = leg_embed(b.mat, (1,), 2)
    u2 = leg_embed(b.substitute({x: LaurentPoly.var(y, (y,))}), (2,), 2)
    delta = (u1 @ u2).commutator(r)
    for i, row in enumerate(delta.nums):
        for j, n in enumerate(row):
            if not n.is_zero():
                count += len(n.terms)
                witnesses.append((f"r-commutation entry ({i},{j})", str(n)))
    return finish_report(
        f"U_conditions[{b.family}, eps={epsilon:+d}]",
        witnesses,
        count,
        "symbolic in x,y (exact)",
        started,
    )


def check_reflection(b):
    """r12(x/y) k1 k2 - k1 k2 r12(x/y) = k1 r12^{t2}(xy) k2 - k2 r12^{t2}(xy) k1."""
    started = time.monotonic()
    x = b.x
    y = spectral("y")
    u = spectral("u")
    r = build_r(u)
    r_quot = r.substitute({u: LaurentPoly.monomial((x, y), (2, -2), 1)})
    r_prod = partial_transpose(
        r.substitute({u: LaurentPoly.monomial((x, y), (2, 2), 1)}), 2
    )
    k1 = leg_embed(b.mat, (1,), 2)
    k2 = leg_embed(b.substitute({x: LaurentPoly.var(y, (y,))}), (2,), 2)
    lhs = r_quot @ k1 @ k2 - k1 @ k2 @ r_quot
    rhs = k1 @ r_prod @ k2 - k2 @ r_prod @ k1
    return _residual_report(
        f"reflection[{b.family}]",
        lhs - rhs,
        "symbolic in x,y; parameters symbolic (exact)",
        started,
    )


def build_rbar(b, x, y):
    """rbar_12(x,y) = r12(x/y) + k1(x) r12^{t1}(1/(xy)) k1(x)^{-1}.

    Returns a two-leg TensorMat whose first two variables are (x, y).
    """
    assert b.x == x, "boundary matrix must be built in the first variable"
    u = spectral("u")
    r = build_r(u)
    first = r.substitute({u: LaurentPoly.monomial((x, y), (2, -2), 1)})
    r_t1 = partial_transpose(
        r.substitute({u: LaurentPoly.monomial((x, y), (-2, -2), 1)}), 1
    )
    k1 = leg_embed(b.mat, (1,), 2)
    k1_inv = leg_embed(b.inverse(), (1,), 2)
    second = k1 @ r_t1 @ k1_inv
    out = first + second
    out.variables = _merge_vars((x, y), out.variables)
    return out


def _rbar_at(rbar, x, y, vi, vj, legs, total):
    sub = {x: LaurentPoly.var(vi, (vi,)), y: LaurentPoly.var(vj, (vj,))}
    return leg_embed(rbar.substitute(sub), legs, total)


def check_nscybe(rbar, label=None):
    """[rb13, rb23] = [rb21, rb13] + [rb23, rb12], arguments (x1,x3) etc."""
    started = time.monotonic()
    spect = [v for v in rbar.variables if v.kind == "spectral"]
    assert len(spect) >= 2, "rbar must depend on two spectral variables"
    x, y = spect[0], spect[1]
    x1, x2, x3 = spectral("x1"), spectral("x2"), spectral("x3")
    rb13 = _rbar_at(rbar, x, y, x1, x3, (1, 3), 3)
    rb23 = _rbar_at(rbar, x, y, x2, x3, (2, 3), 3)
    rb21 = _rbar_at(rbar, x, y, x2, x1, (2, 1), 3)
    rb12 = _rbar_at(rbar, x, y, x1, x2, (1, 2), 3)
    delta = rb13.commutator(rb23) - rb21.commutator(rb13) - rb23.commutator(rb12)
    name = "nscybe" if label is None else f"nscybe[{label}]"
    return _residual_report(
        name, delta, "symbolic in x1,x2,x3 (exact)", started
    )


def check_M_condition(m, rbar):
    """[tr_1(rbar_12(x,y) M_1(x)), M_2(y)] = 0."""
    started = time.monotonic()
    spect = [v for v in rbar.variables if v.kind == "spectral"]
    x, y = spect[0], spect[1]
    assert m.x == x, "M must be built in rbar's first spectral variable"
    m1 = leg_embed(m.mat, (1,), 2)
    m_y = m.substitute({x: LaurentPoly.var(y, (y,))})
    traced = trace_leg(rbar @ m1, 1)
    delta = traced.commutator(m_y)
    return _residual_report(
        f"M_condition[{m.family}]",
        delta,
        "symbolic in x,y; parameters symbolic (exact)",
        started,
    )
