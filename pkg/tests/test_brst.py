from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dofcount.brst import (
    BrstGenerator,
    EulerCharacteristic,
    brst_generators,
    dof_from_dual,
    dof_from_euler,
    dof_via_brst,
    dual_euler,
    euler_characteristic,
    min_shift,
    parse_factored,
    poincare_series,
)
from dofcount.catalog import maxwell_strength, proca_kg
from dofcount.resolution import two_sided_complex
from dofcount.system import DiffSystem, symbol

from randsys import random_homogeneous_system

MAXWELL_CHI = "(1-z^2)^8 (1-z)^-6 (1-z^3)^-2"


def counts(gens):
    out = {}
    for g in gens:
        out[(g.ghost_number, g.order)] = out.get((g.ghost_number, g.order), 0) + 1
    return out


def maxwell_cx():
    return two_sided_complex(maxwell_strength())


def test_maxwell_generators():
    gens = brst_generators(maxwell_cx(), 1)
    assert counts(gens) == {(0, 1): 6, (-1, 2): 8, (-2, 3): 2}
    assert [g.name for g in gens[:6]] == list(maxwell_strength().field_names)
    assert all(g.parity == g.ghost_number % 2 for g in gens)


def test_proca_symbol_generators():
    gens = brst_generators(two_sided_complex(symbol(proca_kg(4, 1))), 1)
    assert counts(gens) == {(0, 1): 4, (-1, 3): 4, (-1, 2): 1, (-2, 4): 1}


def test_zero_operator_generators():
    # T = 0 on one field: V = P, W = P, and the W side contributes a ghost
    sys = DiffSystem(4, ["phi"], [[0]], allow_zero_rows=True)
    gens = brst_generators(two_sided_complex(sys), 1)
    ghosts = sorted(g.ghost_number for g in gens)
    assert ghosts.count(0) == 1
    assert dof_from_euler(euler_characteristic(gens)) == 0


def test_shift_too_small():
    with pytest.raises(ValueError):
        brst_generators(maxwell_cx(), 0)


def test_maxwell_euler_characteristic():
    for c, expected in ((1, {2: 8, 1: -6, 3: -2}), (2, {3: 8, 2: -6, 4: -2}), (5, {6: 8, 5: -6, 7: -2})):
        chi = euler_characteristic(brst_generators(maxwell_cx(), c))
        assert chi.factors == expected
        assert dof_from_euler(chi) == 4
    chi = euler_characteristic(brst_generators(maxwell_cx(), 1))
    assert chi.to_string() == MAXWELL_CHI
    assert parse_factored("(1-z)^-6 (1-z^3)^-2 (1-z^2)^8") == chi.factors


def test_small_euler_characteristics():
    chi = euler_characteristic([BrstGenerator("phi", 0, 1)])
    assert chi == EulerCharacteristic({1: -1})
    # the limit of z (ln chi)' for (1 - z)^-1 is -1
    assert dof_from_euler(chi) == -1
    empty = euler_characteristic([])
    assert empty == EulerCharacteristic({}) and empty.to_string() == "1"
    assert dof_from_euler(empty) == 0


def test_poincare_series():
    gens = brst_generators(maxwell_cx(), 1)
    P = poincare_series(gens)
    assert P.to_string() == "(1+t*z^2)^8 (1-z)^-6 (1-t^2*z^3)^-2"
    assert P.at_t_minus_one() == euler_characteristic(gens)
    assert P(-1, Fraction(1, 3)) == euler_characteristic(gens)(Fraction(1, 3))
    assert poincare_series([]).to_string() == "1"
    assert poincare_series([BrstGenerator("a*", -1, 2)]).to_string() == "(1+t*z^2)"


def test_dual_euler():
    chi = euler_characteristic(brst_generators(maxwell_cx(), 1))
    chiB = dual_euler(chi, 4)
    assert dof_from_dual(chiB) == 4
    z = Fraction(1, 5)
    assert chiB(z) == chi(1 / z) / (1 - z) ** 4
    one = dual_euler(EulerCharacteristic({}), 4)
    assert one.factor_dict() == {1: -4} and one.zpow == 0
    assert dof_from_dual(one) == 0
    cx = two_sided_complex(symbol(proca_kg(4, 1)))
    chi = euler_characteristic(brst_generators(cx, min_shift(cx)))
    assert dof_from_dual(dual_euler(chi, 4)) == 6


def test_numeric_log_derivative():
    chi = euler_characteristic(brst_generators(maxwell_cx(), 1))
    approx = chi.log_derivative_times_z(1000)
    assert abs(approx - 4) / 4 < Fraction(1, 100)


def test_ghost_sign_convention_irrelevant():
    gens = brst_generators(maxwell_cx(), 3)
    assert euler_characteristic(gens) == euler_characteristic(gens, positive_labels=True)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_shift_independence_and_agreement(seed):
    sys = random_homogeneous_system(seed)
    cx = two_sided_complex(sys)
    c0 = min_shift(cx)
    values = {dof_from_euler(euler_characteristic(brst_generators(cx, c))) for c in (c0, c0 + 1, c0 + 5)}
    assert values == {int(-cx.qf.value_and_derivative_at_one()[1])}
    chi = euler_characteristic(brst_generators(cx, c0))
    assert dof_from_dual(dual_euler(chi, sys.dimension)) == dof_from_euler(chi)
    assert dof_via_brst(cx) == dof_from_euler(chi)
