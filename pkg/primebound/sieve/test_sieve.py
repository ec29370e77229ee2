from fractions import Fraction

import numpy as np
import pytest

from primebound.errors import BudgetExceededError, PreconditionError
from primebound.sieve.basis import PrimeBasis
from primebound.sieve.empirical import empirical_pi_l, sift_count
from primebound.sieve.large_sieve import (
    B_of,
    G_lower_bound,
    V_of,
    big_G,
    g_weight,
    large_sieve_bound,
    psi0,
    psi1,
)
from primebound.sieve.residues import (
    ResidueSystem,
    congruence_classes_a1_a2,
    order_l_residues,
    residue_system_theorem1,
    residue_system_theorem4,
)
from primebound.sieve.verification import (
    order_equivalence_check,
    random_construction,
    soundness_sweep,
)


def classes_of(system):
    return {p: set(r) for p, r in system.classes.items()}


def test_prime_basis():
    basis = PrimeBasis.parse("5,3")
    assert basis.primes == (3, 5)
    assert (basis.P, basis.phi_P, basis.size) == (15, 8, 2)
    assert 3 in basis
    assert str(basis) == "3,5"
    for bad in ("4", "3,3", "", "x"):
        with pytest.raises(PreconditionError):
            PrimeBasis.parse(bad)


@pytest.mark.parametrize(
    "r, l, expected", [(7, 3, {2, 4}), (11, 5, {3, 4, 5, 9}), (13, 2, {12})]
)
def test_order_l_residues(r, l, expected):
    assert order_l_residues(r, l) == expected


def test_order_l_residues_rejects_missing_classes():
    with pytest.raises(PreconditionError):
        order_l_residues(11, 3)


def test_residue_system_theorem1():
    assert classes_of(residue_system_theorem1(3, {7}, 10)) == {
        2: {0},
        3: {0},
        5: {0},
        7: {0, 2, 4},
    }
    assert classes_of(residue_system_theorem1(3, set(), 6)) == {2: {0}, 3: {0}, 5: {0}}
    system = residue_system_theorem1(5, {11}, 12)
    assert system.classes[11] == {0, 3, 4, 5, 9}
    assert system.rho[11] == 5


def test_residue_system_theorem1_rejects_bad_U():
    with pytest.raises(PreconditionError):
        residue_system_theorem1(3, {11}, 20)


@pytest.mark.parametrize("l, expected", [(3, (13, 7)), (5, (21, 31)), (7, (29, 15))])
def test_congruence_classes_a1_a2(l, expected):
    assert congruence_classes_a1_a2(l) == expected


def test_congruence_classes_reject_two():
    with pytest.raises(PreconditionError):
        congruence_classes_a1_a2(2)


def test_residue_system_theorem4():
    system = residue_system_theorem4(3, 14)
    assert system.classes[13] == {0, 3, 9}
    assert system.classes[7] == {0, 2, 4}
    assert all(system.classes[p] == {0} for p in (2, 3, 5, 11))
    assert all(r == {0} for r in classes_of(residue_system_theorem4(5, 20)).values())


def test_rho_bookkeeping():
    a1, a2 = congruence_classes_a1_a2(3)
    system = residue_system_theorem4(3, 500)
    for p, rho in system.rho.items():
        assert rho == (3 if p % 24 in (a1, a2) else 1)
        assert rho < p
    system = residue_system_theorem1(5, {11, 31, 41}, 100)
    assert {p for p, rho in system.rho.items() if rho == 5} == {11, 31, 41}


def test_residue_system_validation():
    with pytest.raises(PreconditionError):
        ResidueSystem(5, {2: {0, 1}})
    with pytest.raises(PreconditionError):
        ResidueSystem(5, {3: {3}})
    with pytest.raises(PreconditionError):
        ResidueSystem(5, {7: {0}})


def test_residue_system_text_format():
    system = residue_system_theorem1(3, {7}, 10)
    text = system.to_text()
    assert text.splitlines() == ["z: 10", "2: 0", "3: 0", "5: 0", "7: 0,2,4"]
    assert ResidueSystem.from_text(text) == system
    with pytest.raises(PreconditionError):
        ResidueSystem.from_text("7 0,2")


@pytest.mark.parametrize("p, rho, expected", [(3, 1, 0.5), (7, 3, 0.75), (2, 1, 1.0)])
def test_g_weight(p, rho, expected):
    assert g_weight(p, rho) == expected


def test_g_weight_rejects_full_rho():
    with pytest.raises(PreconditionError):
        g_weight(3, 3)


def test_big_G():
    system = ResidueSystem.uniform(5)
    assert big_G(system, 6) == 3
    assert big_G(system, 1) == 1
    assert big_G(system, 5) == 2.5
    assert big_G(system, 6, exact=True) == Fraction(3)


def test_big_G_node_budget():
    system = ResidueSystem.uniform(100)
    with pytest.raises(BudgetExceededError):
        big_G(system, 10**6, node_budget=50)


def test_big_G_exact_mode_limited():
    with pytest.raises(PreconditionError):
        big_G(ResidueSystem.uniform(150), 10, exact=True)


def test_big_G_exact_agrees_with_float():
    system = residue_system_theorem1(3, {7, 13, 19, 31}, 60)
    for T in (10, 1000, 10**6):
        assert big_G(system, T) == pytest.approx(float(big_G(system, T, exact=True)))


def test_V_of():
    assert V_of(ResidueSystem.uniform(5), exact=True) == Fraction(1, 3)
    system = ResidueSystem(8, {2: {0}, 3: {0}, 5: {0}, 7: {0, 2, 4}})
    assert V_of(system, exact=True) == Fraction(16, 105)
    assert V_of(system) == pytest.approx(16 / 105)


def test_B_of():
    assert B_of(ResidueSystem(3, {2: {0}})) == pytest.approx(0.31546, abs=1e-5)
    assert B_of(ResidueSystem.uniform(5)) == pytest.approx(0.44287, abs=1e-5)
    assert B_of(ResidueSystem(2)) == 0


def test_psi1():
    assert psi1(1.7, 1.7) == 0
    assert psi1(2.0, 0) == 2.0
    assert psi1(1.505, 7.538 / 2.000007) == pytest.approx(1.195993, abs=1e-5)
    assert psi1(2.01, 8.35 / (2 + 1e-7)) == pytest.approx(0.886840, abs=1e-5)


def test_psi0():
    assert psi0(0.5, 1.0, 2.0) == 0
    assert psi0(1.505, 7.538, 2.000007) == pytest.approx(0.697597, abs=1e-5)
    assert psi0(2.01, 8.35, 2 + 1e-7) == pytest.approx(0.588044, abs=1e-5)
    with pytest.raises(PreconditionError):
        psi0(2.0, 3.0, 2.0)


def test_psi0_monotone_in_v():
    values = [psi0(1.2, v, 2.0) for v in (2.4, 2.5, 3, 4, 8, 16, 64)]
    assert values == sorted(values)
    assert all(0 <= value < 1 for value in values)


def test_psi0_stays_below_one():
    assert psi0(0.0, 5.0, 2.0) < 1
    assert psi0(1.2, 10**6, 2.0) < 1
    assert psi0(1.2, 10**6, 2.0) == pytest.approx(1.0)


def test_large_sieve_bound_examples():
    system = ResidueSystem.uniform(5)
    report = large_sieve_bound(30, 5, system, empirical=sift_count(1, 30, system))
    assert report.G_value == 2.5
    assert report.bound == 22
    assert report.empirical == 10
    assert report.holds

    empty = large_sieve_bound(0, 5, system, empirical=sift_count(1, 0, system))
    assert empty.bound == 10
    assert empty.empirical == 0


def test_large_sieve_bound_theorem4_system():
    system = residue_system_theorem4(3, 7)
    report = large_sieve_bound(100, 7, system, empirical=sift_count(1, 100, system))
    assert report.G_value == 3.25
    assert report.bound == pytest.approx(149 / 3.25)
    assert report.empirical == 26
    assert report.holds


def test_large_sieve_bound_requires_z_at_least_w():
    with pytest.raises(PreconditionError):
        large_sieve_bound(10, 7, ResidueSystem.uniform(5))


def test_sift_count():
    assert sift_count(1, 30, ResidueSystem.uniform(5)) == 10
    assert sift_count(5, 17, ResidueSystem(10)) == 17
    assert sift_count(1, 100, residue_system_theorem1(3, {7}, 8)) == 16


def test_sift_count_budget():
    with pytest.raises(BudgetExceededError):
        sift_count(1, 1000, ResidueSystem.uniform(5), budget=999)


def test_sift_count_independent_of_workers():
    system = residue_system_theorem1(3, {7, 13, 19}, 40)
    assert sift_count(10**5, 3 * 10**5, system, workers=1) == sift_count(
        10**5, 3 * 10**5, system, workers=2
    )


def test_empirical_pi_l():
    assert empirical_pi_l(50, 3, {7}) == 11
    assert empirical_pi_l(100, 3, set()) == 25
    assert empirical_pi_l(100, 5, {11}) == 16
    assert empirical_pi_l(10**4, 3, {7, 13}, workers=2) == empirical_pi_l(
        10**4, 3, {7, 13}
    )


def test_empirical_pi_l_bounded_by_sift_count():
    x, l, U = 10**4, 3, {7, 13, 19}
    for w in (10, 30, 100):
        system = residue_system_theorem1(l, U, w)
        assert empirical_pi_l(x, l, U) <= sift_count(1, x, system) + w


def test_G_lower_bound():
    system = ResidueSystem.uniform(5)
    lower = G_lower_bound(system, 5**6, 2)
    assert lower == pytest.approx(2.8755, abs=1e-3)
    assert big_G(system, 5**3) >= lower

    system = ResidueSystem.uniform(7)
    assert V_of(system, exact=True) == Fraction(4, 15)
    lower = G_lower_bound(system, 7**8, 2)
    assert big_G(system, 7**4) >= lower


def test_psi0_vanishes_at_threshold():
    B = B_of(ResidueSystem.uniform(5))
    assert psi0(B, 2 * B, 2) == 0


def test_G_lower_bound_rejects_small_v():
    with pytest.raises(PreconditionError):
        G_lower_bound(ResidueSystem.uniform(30), 30**0.5, 2)


def test_order_equivalence_small():
    result = order_equivalence_check(500)
    assert result["ok"]
    assert result["checked"] > 0


@pytest.mark.slow
def test_order_equivalence_full():
    assert order_equivalence_check(10**4)["ok"]


def test_random_construction_mixes_both_kinds():
    rng = np.random.default_rng(1)
    draws = [random_construction(rng) for _ in range(60)]
    kinds = {kind for kind, _, _ in draws}
    assert kinds == {"theorem1", "theorem4"}
    assert max(system.z for _, _, system in draws) > 60
    for kind, l, system in draws:
        assert system.z <= 1000
        if kind == "theorem4":
            assert l != 2
        for p, residues in system.classes.items():
            assert 0 in residues
            assert len(residues) < p


def test_soundness_sweep():
    report = soundness_sweep(trials=25, seed=3, max_X=10**4, lower_bound_trials=10)
    assert report.ok, report.failures
    assert report.trials == 25
    assert report.sieve_checks == 25
    assert report.lower_bound_trials == 10
    assert sum(report.constructions.values()) == 25


@pytest.mark.slow
def test_large_sieve_sweep_full_scale():
    report = soundness_sweep(trials=500, seed=20240101, lower_bound_trials=0)
    assert report.ok, report.failures
    assert report.sieve_checks == 500
    assert report.constructions["theorem1"] > 0
    assert report.constructions["theorem4"] > 0


@pytest.mark.slow
def test_lower_bound_sweep_full_scale():
    report = soundness_sweep(trials=0, seed=20240101, lower_bound_trials=200)
    assert report.ok, report.failures
    assert report.lower_bound_trials == 200
    assert report.lower_bound_checks > 0
