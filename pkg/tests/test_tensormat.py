"""Tensor-leg matrices: the r-matrix, boundary matrices, and their checks."""

import pytest

from onsalg.exactalg import LaurentPoly, RatFun, parameter, rat, spectral
from onsalg.tensormat import (
    BoundaryMat,
    TensorMat,
    build_boundary,
    build_r,
    build_rbar,
    check_cybe,
    check_M_condition,
    check_nscybe,
    check_r_symmetries,
    check_reflection,
    check_U_conditions,
    leg_embed,
    partial_transpose,
    trace_leg,
)

U = spectral("u")
X = spectral("x")
Y = spectral("y")


def _pv(v):
    return LaurentPoly.var(v, (v,))


def _mutate_entry(m, i, j, fn):
    nums = [list(row) for row in m.nums]
    nums[i][j] = fn(nums[i][j])
    return TensorMat._raw(m.legs, m.variables, nums, m.den_factors)


def _altered_k():
    # the (1,2) entry changed from beta + gamma/x to beta + gamma*x,
    # which is not a reflection solution
    b = build_boundary("k_general", x=X)
    nums = [list(r) for r in b.mat.nums]
    be, ga = b.params["beta"], b.params["gamma"]
    nums[0][1] = _pv(be) + _pv(ga) * _pv(X)
    mat = TensorMat._raw(1, b.mat.variables, nums, b.mat.den_factors)
    return BoundaryMat("k_general", mat, X, b.params)


# -- the r-matrix itself -------------------------------------------------


def test_r_entries():
    r = build_r(U)
    uu = _pv(U)
    pole = uu - 1
    half = rat(1, 2)
    assert r.legs == 2
    expected = {
        (0, 0): RatFun(-half * (uu + 1), pole),
        (1, 1): RatFun(half * (uu + 1), pole),
        (1, 2): RatFun(-2, pole),
        (2, 1): RatFun(-2 * uu, pole),
        (2, 2): RatFun(half * (uu + 1), pole),
        (3, 3): RatFun(-half * (uu + 1), pole),
    }
    for i in range(4):
        for j in range(4):
            want = expected.get((i, j), RatFun(0))
            assert r.entry(i, j) == want, (i, j)


def test_r_derivative_cleared():
    # (u-1)^2 * u * r'(u) is polynomial with a single simple table
    r = build_r(U)
    uu = RatFun(_pv(U))
    pole2 = RatFun((_pv(U) - 1) * (_pv(U) - 1))
    table = {
        (0, 0): 1,
        (1, 1): -1,
        (1, 2): 2,
        (2, 1): 2,
        (2, 2): -1,
        (3, 3): 1,
    }
    for i in range(4):
        for j in range(4):
            got = r.entry(i, j).derivative(U) * pole2 * uu
            want = uu * table.get((i, j), 0)
            assert got == want, (i, j)


def test_cybe_passes():
    rep = check_cybe(build_r(U))
    assert rep.passed
    assert rep.residual_term_count == 0


def test_cybe_fails_on_doubled_entry():
    # entry (2,3) of the 4x4, i.e. zero-based (1,2), doubled
    bad = _mutate_entry(build_r(U), 1, 2, lambda p: 2 * p)
    rep = check_cybe(bad)
    assert not rep.passed
    assert rep.witnesses


def test_r_symmetries_pass():
    assert check_r_symmetries(build_r(U)).passed


def test_r_symmetries_fail_on_sign_flip():
    bad = _mutate_entry(build_r(U), 0, 0, lambda p: -1 * p)
    rep = check_r_symmetries(bad)
    assert not rep.passed
    assert rep.witnesses


# -- leg plumbing ---------------------------------------------------------


def test_leg_embed_uses_leg_one_as_high_bit():
    b = build_boundary("U_diag", params={"k": 2, "kstar": 3}).mat
    on1 = leg_embed(b, (1,), 2)
    on2 = leg_embed(b, (2,), 2)
    diag1 = [on1.entry(i, i) for i in range(4)]
    diag2 = [on2.entry(i, i) for i in range(4)]
    assert diag1 == [RatFun(2), RatFun(2), RatFun(-3), RatFun(-3)]
    assert diag2 == [RatFun(2), RatFun(-3), RatFun(2), RatFun(-3)]


def test_partial_transpose_commutes_with_disjoint_embed():
    b = build_boundary("U_offdiag").mat
    emb = leg_embed(b, (1,), 2)
    # transposing the identity leg changes nothing
    assert (partial_transpose(emb, 2) - emb).is_zero()
    # transposing the occupied leg is embedding the transpose
    want = leg_embed(b.transpose(), (1,), 2)
    assert (partial_transpose(emb, 1) - want).is_zero()


def test_trace_leg_of_embedding():
    b = build_boundary("U_diag").mat
    got = trace_leg(leg_embed(b, (1,), 2), 1)
    tr = b.trace()
    want = TensorMat(1, [[tr, RatFun(0)], [RatFun(0), tr]])
    assert (got - want).is_zero()


def test_inverse_2x2():
    b = build_boundary("k_general", x=X)
    prod = b.mat @ b.inverse()
    ident = TensorMat(1, [[1, 0], [0, 1]])
    assert (prod - ident).is_zero()


def test_k_general_determinant():
    # det k(x) = alpha*delta*(x - 1/x)^2 + (beta + gamma/x)(beta + gamma*x)
    b = build_boundary("k_general", x=X)
    (a, bb), (c, d) = b.mat.nums
    det = a * d - bb * c
    al, be, ga, de = (
        _pv(b.params[n]) for n in ("alpha", "beta", "gamma", "delta")
    )
    xx = _pv(X)
    inv_x = LaurentPoly.monomial((X,), (-2,), 1)
    sx = xx - inv_x
    want = al * de * sx * sx + (be + ga * inv_x) * (be + ga * xx)
    assert det == want


# -- boundary condition checks --------------------------------------------


def test_u_conditions_both_solutions():
    assert check_U_conditions(build_boundary("U_diag"), 1).passed
    assert check_U_conditions(build_boundary("U_offdiag"), -1).passed


def test_u_conditions_fail_with_wrong_sign():
    rep = check_U_conditions(build_boundary("U_diag"), -1)
    assert not rep.passed
    # the transpose condition residual is 2U on the diagonal
    assert any("transpose" in w["position"] for w in rep.witnesses)


def test_reflection_symbolic():
    rep = check_reflection(build_boundary("k_general"))
    assert rep.passed


@pytest.mark.parametrize("family", ["U_diag", "U_offdiag", "kappa_plus", "kappa_minus"])
def test_reflection_named_families(family):
    assert check_reflection(build_boundary(family, x=X)).passed


def test_reflection_fails_on_altered_entry():
    rep = check_reflection(_altered_k())
    assert not rep.passed
    assert rep.witnesses


# -- the non-standard r-matrix --------------------------------------------


@pytest.mark.parametrize(
    "family", ["U_diag", "U_offdiag", "kappa_plus", "kappa_minus", "k_general"]
)
def test_nscybe(family):
    b = build_boundary(family, x=X)
    rep = check_nscybe(build_rbar(b, X, Y), label=family)
    assert rep.passed, rep


def test_nscybe_fails_for_non_solution():
    rep = check_nscybe(build_rbar(_altered_k(), X, Y))
    assert not rep.passed
    assert rep.witnesses


def test_rbar_layout():
    b = build_boundary("U_diag", x=X)
    rbar = build_rbar(b, X, Y)
    assert rbar.legs == 2
    assert rbar.variables[:2] == (X, Y)


# -- the M matrices --------------------------------------------------------


def _rbar_for(current_family):
    pinned = {
        "onsager": ("U_diag", {"k": 1, "kstar": 1}),
        "augmented": ("U_offdiag", {"sign": -1}),
        "invariant": ("kappa_plus", None),
    }
    fam, params = pinned[current_family]
    return build_rbar(build_boundary(fam, params=params, x=X), X, Y)


@pytest.mark.parametrize(
    "m_family,current",
    [("M_ons", "onsager"), ("M_aug", "augmented"), ("M_inv", "invariant")],
)
def test_m_conditions(m_family, current):
    rep = check_M_condition(build_boundary(m_family, x=X), _rbar_for(current))
    assert rep.passed, rep


def test_m_ons_allows_equal_symbolic_weights():
    # the diagonal boundary weights must agree, but need not be numeric
    kv = parameter("k")
    b = build_boundary("U_diag", params={"k": kv, "kstar": kv}, x=X)
    rep = check_M_condition(build_boundary("M_ons", x=X), build_rbar(b, X, Y))
    assert rep.passed


def test_m_ons_needs_equal_weights():
    rep = check_M_condition(build_boundary("M_ons", x=X),
                            build_rbar(build_boundary("U_diag", x=X), X, Y))
    assert not rep.passed


def test_m_ons_fails_with_mismatched_rbar():
    rep = check_M_condition(build_boundary("M_ons", x=X), _rbar_for("augmented"))
    assert not rep.passed
    assert rep.witnesses
