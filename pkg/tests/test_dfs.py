import numpy as np
import pytest

from flipchain import (
    Cochain,
    CylinderFunction,
    DepthTooSmall,
    DfsTable,
    EMPTY_WORD,
    FlipWord,
    GroupoidElement,
    InvariantViolation,
    OrderUnsupported,
    Prefix,
    coboundary,
    cochain_delta,
    cochain_to_dfs,
    dfs_build,
    dfs_check,
    dfs_seed_extend,
    dfs_to_cochain,
    e,
    is_exact,
    random_cylinder,
    rng_for,
)


def build_random(n, depth, master=31, exact=False):
    seeds = []
    for k in range(n):
        rng = rng_for(master, k)
        if exact:
            vals = rng.integers(-5, 6, size=1 << depth).astype(np.int64)
            seeds.append(CylinderFunction(depth, vals))
        else:
            seeds.append(random_cylinder(rng, depth, complex_values=False))
    return dfs_build(n, seeds, depth)


def test_table_fills_missing_words():
    S = DfsTable(1, {e(1): CylinderFunction(1, np.array([1.0, -1.0]))})
    assert set(S.entries) == {EMPTY_WORD, e(1)}
    assert list(S.entry(EMPTY_WORD).values) == [0.0, 0.0]
    assert S.value(GroupoidElement(Prefix(1, 1), e(1))) == -1.0


def test_table_guards():
    with pytest.raises(InvariantViolation):
        DfsTable(1, {e(2): CylinderFunction.zero(2)})
    with pytest.raises(DepthTooSmall):
        DfsTable(2, {}, 1)
    with pytest.raises(InvariantViolation):
        DfsTable(1, {}, 1) + DfsTable(2, {}, 2)


def test_extension_constant_seeds_oracle():
    # two constant seeds; every table entry is forced by the chain rules
    S = dfs_build(2, [CylinderFunction.constant(1.0), CylinderFunction.constant(2.0)], 2)
    assert list(S.entry(EMPTY_WORD).values) == [0.0, 0.0, 0.0, 0.0]
    assert list(S.entry(e(1)).values) == [1.0, -1.0, 1.0, -1.0]
    assert list(S.entry(e(2)).values) == [2.0, 2.0, -2.0, -2.0]
    assert list(S.entry(FlipWord.from_sites([1, 2])).values) == [3.0, 1.0, -1.0, -3.0]


def test_build_checks_pass():
    S = build_random(3, 5)
    rep = dfs_check(S)
    assert rep["passed"] and rep["max_violation"] < 1e-12
    assert rep["n"] == 3 and rep["depth"] == 5
    assert not rep["exact_zero"]


def test_build_exact_integer_seeds():
    S = build_random(3, 4, exact=True)
    rep = dfs_check(S)
    assert rep["exact_zero"] is True
    assert rep["max_violation"] == 0.0
    assert S.exact


def test_build_guards():
    with pytest.raises(InvariantViolation):
        dfs_build(2, [CylinderFunction.constant(1.0)], 3)
    with pytest.raises(DepthTooSmall):
        dfs_build(2, [CylinderFunction.constant(1.0)] * 2, 1)


def test_check_catches_corruption():
    S = build_random(2, 4)
    entries = dict(S.entries)
    bad = entries[e(1)].values.copy()
    bad[3] += 0.5
    entries[e(1)] = CylinderFunction(4, bad)
    rep = dfs_check(DfsTable(2, entries, 4))
    assert not rep["passed"]
    assert rep["max_violation"] >= 0.5


def test_extend_validates_input():
    S = build_random(2, 4)
    entries = dict(S.entries)
    entries[e(2)] = entries[e(2)] + CylinderFunction.constant(1.0, 4)
    broken = DfsTable(2, entries, 4)
    with pytest.raises(InvariantViolation):
        dfs_seed_extend(broken, CylinderFunction.constant(0.0, 4))


def test_scale_and_add_stay_cocycles():
    A = build_random(2, 4, master=41)
    B = build_random(2, 4, master=42)
    assert dfs_check(A.scale(2.5) + B)["passed"]


def test_cochain_shapes():
    with pytest.raises(InvariantViolation):
        Cochain(1, 2, 3, np.zeros((3, 8)))
    c = Cochain.from_cylinder(CylinderFunction.zero(3), 2)
    assert c.order == 0 and c.depth == 3
    with pytest.raises(OrderUnsupported):
        cochain_to_dfs(c)


def test_dfs_cochain_roundtrip():
    S = build_random(2, 4, master=43)
    back = cochain_to_dfs(dfs_to_cochain(S))
    for w in S.entries:
        assert np.array_equal(back.entry(w).values, S.entry(w).values)


def test_coboundary_of_parity():
    H = Cochain.from_cylinder(CylinderFunction.psi(1, 2), 1)
    dH = coboundary(H)
    # flipping site 1 negates the parity: H(x ^ e1) - H(x) = -2 psi_1(x)
    assert list(dH.values[1]) == [-2.0, 2.0, -2.0, 2.0]
    assert list(dH.values[0]) == [0.0] * 4
    with pytest.raises(OrderUnsupported):
        coboundary(dH)


def test_differential_squares_to_zero():
    rng = rng_for(44, 0)
    H = Cochain.from_cylinder(
        CylinderFunction(4, rng.integers(-9, 10, size=16).astype(np.int64)), 2
    )
    dd = cochain_delta(cochain_delta(H))
    assert dd.order == 2
    assert dd.max_abs() == 0.0
    # and on order-1 cochains, including non-cocycles
    c1 = Cochain(1, 2, 4, rng.integers(-9, 10, size=(4, 16)).astype(np.int64))
    assert cochain_delta(cochain_delta(c1)).max_abs() == 0.0
    with pytest.raises(OrderUnsupported):
        cochain_delta(cochain_delta(cochain_delta(c1)))


def test_built_tables_are_cocycles():
    S = build_random(2, 4, master=45)
    assert cochain_delta(dfs_to_cochain(S)).max_abs() < 1e-12


def test_is_exact_reconstructs_gauge_potential():
    S = build_random(3, 5, master=46)
    H = is_exact(S)
    assert H is not None
    dev = coboundary(H) - dfs_to_cochain(S)
    assert dev.max_abs() < 1e-12


def test_is_exact_rejects_non_cocycle():
    S = build_random(2, 4, master=47)
    entries = dict(S.entries)
    entries[e(1)] = entries[e(1)] + CylinderFunction.psi(2, 4)
    assert is_exact(DfsTable(2, entries, 4)) is None


def test_is_exact_exact_arithmetic():
    S = build_random(2, 4, master=48, exact=True)
    H = is_exact(S)
    assert H is not None
    assert (coboundary(H) - dfs_to_cochain(S)).max_abs() == 0.0
