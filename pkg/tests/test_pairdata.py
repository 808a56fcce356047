import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_in_span
from sphereblock.errors import ConfigError, DomainError, InputError
from sphereblock.latticealg import Sublattice
from sphereblock.pairdata import PairDatum, builtin_pair, derive_invariants, restrict_to_C
from sphereblock.rootdata import build_root_datum, dot_act, weyl_group


def test_psl3_invariants():
    inv = derive_invariants(builtin_pair("psl_pso", 3))
    assert inv.K_full == Sublattice.span([[2, 0], [0, 2]], 2)
    assert inv.K_circ.is_full
    assert inv.C_group.invariant_factors == (2, 2)
    assert len(inv.W0) == 6
    assert inv.restrict_to_C((1, 0)) != inv.C_group.zero()
    assert inv.restrict_to_C((2, 4)) == inv.C_group.zero()


@pytest.mark.parametrize(
    "family,n,factors",
    [("psl_pso", 2, (2,)), ("sl_so", 3, (2, 2)), ("sl_so", 2, (2,)), ("pgl_po", 4, (2, 2, 2))],
)
def test_component_groups(family, n, factors):
    inv = derive_invariants(builtin_pair(family, n))
    assert inv.C_group.invariant_factors == factors
    assert len(inv.characters) == 2 ** (n - 1)


def test_theta_identity_has_trivial_w0():
    datum = build_root_datum("A", 2)
    inv = derive_invariants(PairDatum(datum, ((1, 0), (0, 1)), "T-stable"))
    assert inv.K_full.rank == 0
    assert inv.C_group.order == 1
    assert [w.word for w in inv.W0] == [()]
    with pytest.raises(DomainError):
        restrict_to_C(inv, (1, 0))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_theta_minus_one_gives_full_w0(n):
    inv = derive_invariants(builtin_pair("psl_pso", n))
    assert len(inv.W0) == len(weyl_group(inv.datum))


def test_w0_is_a_subgroup():
    # theta swapping the two simple roots of A2 (outer involution)
    datum = build_root_datum("A", 2)
    inv = derive_invariants(PairDatum(datum, ((0, 1), (1, 0)), "swap"))
    group = weyl_group(datum)
    keys = {w.matrix for w in inv.W0}
    for a in inv.W0:
        assert group.inverse(a).matrix in keys
        for b in inv.W0:
            assert group.multiply(a, b).matrix in keys
    # brute-force definition
    kc = [list(b) for b in inv.K_circ.basis]
    for w in group:
        stable = all(brute_in_span(w(b), kc) for b in kc)
        shift = tuple((np.array(w.matrix) @ np.array(datum.rho2) - np.array(datum.rho2)) // 2)
        assert (w.matrix in keys) == (stable and brute_in_span(shift, kc))


@given(st.sampled_from([("psl_pso", 3), ("psl_pso", 4), ("sl_so", 3), ("pgl_po", 3)]), st.data())
@settings(max_examples=40, deadline=None)
def test_dot_action_on_C_is_lift_independent(pair, data):
    inv = derive_invariants(builtin_pair(*pair))
    w = data.draw(st.sampled_from(inv.W0))
    c = data.draw(st.sampled_from(inv.characters))
    base = inv.C_group.lift(c)
    k = [data.draw(st.integers(-3, 3)) for _ in inv.K_full.basis]
    other = tuple(b + sum(x * v[i] for x, v in zip(k, inv.K_full.basis)) for i, b in enumerate(base))
    assert inv.restrict_to_C(other) == c
    assert inv.restrict_to_C(dot_act(inv.datum, w, base)) == inv.restrict_to_C(dot_act(inv.datum, w, other))


def test_errors():
    datum = build_root_datum("A", 2)
    with pytest.raises(InputError):
        PairDatum(datum, ((2, 0), (0, 1)))
    with pytest.raises(InputError):
        PairDatum(datum, ((1, 1), (0, -1)))  # involutive but not root preserving
    with pytest.raises(InputError):
        PairDatum(datum, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(ConfigError):
        builtin_pair("psl_pso", 1)
    with pytest.raises(ConfigError):
        builtin_pair("psl_pso", 10)
    with pytest.raises(ConfigError):
        builtin_pair("so_so", 3)


def test_little_weyl_must_lie_in_w0():
    datum = build_root_datum("A", 2)
    pair = PairDatum(datum, ((1, 0), (0, 1)))
    group = weyl_group(datum)
    with pytest.raises(InputError):
        derive_invariants(pair, [group.simple(0)])
    inv = derive_invariants(builtin_pair("psl_pso", 3), [group.simple(0)])
    assert inv.W_little == (group.simple(0),)
