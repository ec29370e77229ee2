import itertools
import math

import pytest
from sympy import nextprime, primerange

from primebound.bounds.audit import consistency_audit, derived_B2_B3
from primebound.bounds.logvalue import LogValue
from primebound.bounds.theorem1 import (
    C_zero,
    ConstantChain,
    L_of,
    Theorem1Inputs,
    eps_sweep,
    s_zero,
    solve_L,
    x_one,
)
from primebound.bounds.theorem4 import C_one, x_four, x_three
from primebound.bounds.trace import theorem1_pipeline_trace
from primebound.errors import PreconditionError
from primebound.sieve.basis import PrimeBasis

E18 = math.exp(18)
E133 = math.exp(13.3)


def basis(text):
    return PrimeBasis.parse(text)


def test_logvalue_algebra():
    a, b = LogValue(3.5), LogValue(-1.25)
    assert (a * b).ln == 3.5 + -1.25
    assert (a**4).ln == 14.0
    assert (a / b).ln == 4.75
    assert b < a
    assert max(a, b) == a
    assert LogValue.of(10**400).log10 == pytest.approx(400)


def test_logvalue_rendering():
    assert LogValue(E18).nested == "exp(exp(18))"
    assert LogValue(0).nested == "exp(0)"
    assert LogValue(2.5).to_dict() == {
        "ln": 2.5,
        "log10": 2.5 / math.log(10),
        "nested": "exp(2.5)",
    }


def test_logvalue_rejects_non_finite():
    with pytest.raises(PreconditionError):
        LogValue(math.inf)
    with pytest.raises(PreconditionError):
        LogValue.of(0)


@pytest.mark.parametrize(
    "s, n, primes, expected", [(1, 2, "3", 2), (0, 1, "3,5", 0), (2, 45, "3,5", 7)]
)
def test_s_zero(s, n, primes, expected):
    assert s_zero(s, n, basis(primes)) == expected


def test_x_one():
    assert x_one(2, 3, basis("3")).ln == pytest.approx(E18)
    assert x_one(10**20, 3, basis("3")).ln == pytest.approx(E18)
    with pytest.raises(PreconditionError):
        x_one(2, 5, basis("3"))


def test_L_of():
    assert L_of(1, 6) == pytest.approx(13.706, abs=1e-3)
    assert L_of(1, 2**10) == pytest.approx(339.644, abs=1e-3)
    for epsilon, n in ((1, 6), (1, 2**10), (0.01, 720), (3.0, 2**40)):
        L = L_of(epsilon, n)
        big_omega = {6: 2, 2**10: 10, 720: 7, 2**40: 40}[n]
        assert abs(big_omega - epsilon * L / math.log(L) ** 2) <= 1e-9 * big_omega


def test_L_of_tangency_and_clamp():
    # Ω(4)/ε = e²/4 exactly at the tangency point
    assert L_of(8 / math.e**2, 4) == pytest.approx(math.e**2, rel=1e-6)
    y, clamped = solve_L(10.0, 6)
    assert (y, clamped) == (2.0, True)
    with pytest.raises(PreconditionError):
        L_of(1, 1)


def test_C_zero_single_prime():
    result = C_zero(Theorem1Inputs(n=2, d=1, s=1, basis=basis("3")))
    expected = (35.24392 + 259.0428) * E18 / (2 * math.log(2))
    assert result.ln.ln == pytest.approx(expected)
    assert result.ln.ln == pytest.approx(1.3939e10, rel=1e-4)
    assert result.branch == "exp_term"
    assert result.l == 3
    assert any("P = 3" in warning for warning in result.warnings)


def test_C_zero_skips_vacuous_s_candidate():
    result = C_zero(Theorem1Inputs(n=3, d=2, s=0, basis=basis("3,7")))
    for entry in result.per_l:
        assert "2(d+1)s" not in entry["candidates"]
        assert set(entry["candidates"]) == {"x1_power", "L", "exp_term"}


def test_C_zero_two_primes():
    result = C_zero(Theorem1Inputs(n=2, d=1, s=1, basis=basis("3,5")))
    l3 = (17.62196 * 8 + 129.5214 * 2) * 2 * E18 / (2 * math.log(2))
    l5 = (17.62196 * 8 + 129.5214 * 4) * 2 * E18 / (4 * math.log(2))
    by_l = {entry["l"]: entry["ln"] for entry in result.per_l}
    assert by_l[3] == pytest.approx(l3)
    assert by_l[5] == pytest.approx(l5)
    assert result.l == 3
    assert result.ln.ln == pytest.approx(max(l3, l5))


@pytest.mark.parametrize("largest", [500, 1000])
def test_C_zero_rejects_bases_beyond_float_range(largest):
    huge = PrimeBasis(tuple(primerange(3, largest)))
    with pytest.raises(PreconditionError):
        C_zero(Theorem1Inputs(n=2, d=1, s=1, basis=huge))


def test_basis_logs():
    b = basis("3,5,7")
    assert b.ln_P == pytest.approx(math.log(105))
    assert b.ln_phi_P == pytest.approx(math.log(48))


def test_C_zero_monotonicity():
    ratios = [(2, 1), (3, 1), (5, 2), (7, 1)]
    values = [C_zero(Theorem1Inputs(n, d, 1, basis("3,5"))).ln.ln for n, d in ratios]
    by_ratio = sorted(zip((n / d for n, d in ratios), values))
    assert [v for _, v in by_ratio] == sorted((v for _, v in by_ratio), reverse=True)

    sizes = [
        C_zero(Theorem1Inputs(2, 1, 1, basis(primes))).ln.ln
        for primes in ("3", "3,5", "3,5,7", "3,5,7,11")
    ]
    assert sizes == sorted(sizes)


def test_theorem1_inputs_validation():
    with pytest.raises(PreconditionError):
        Theorem1Inputs(n=1, d=1, s=1, basis=basis("3"))
    with pytest.raises(PreconditionError):
        Theorem1Inputs(n=4, d=2, s=1, basis=basis("3"))
    with pytest.raises(PreconditionError):
        Theorem1Inputs(n=2, d=1, s=1, basis=basis("3"), epsilon=0)


def test_eps_sweep():
    sweep = eps_sweep(Theorem1Inputs(n=2, d=1, s=1, basis=basis("3")))
    assert [r["epsilon"] for r in sweep["sweep"]] == [1e-3, 1e-2, 1e-1, 1.0, 10.0]
    assert sweep["best_ln"] == min(r["ln"] for r in sweep["sweep"])


def test_constant_chain_defaults():
    chain = ConstantChain.for_l(basis("3,5"), 3)
    assert chain.kappa == 2 / 8
    assert chain.B2 == pytest.approx(8.81098)
    assert chain.B3 == pytest.approx(64.7607)
    with pytest.raises(PreconditionError):
        ConstantChain(kappa=1.0, v=4.0)


def test_x_three():
    assert x_three(3).ln == pytest.approx(E133)
    assert x_three(5).ln == pytest.approx(597195.6, abs=0.1)
    l = nextprime(int(E133 / 8))
    assert x_three(l).ln == 8 * l


def test_x_four():
    assert x_four(3).ln == pytest.approx(101 * E133)


def test_C_one():
    assert C_one(basis("3")).ln == pytest.approx(2310 * E133)
    assert C_one(basis("3")).ln == pytest.approx(1.37952e9, rel=1e-5)
    assert C_one(basis("3,5")).ln == pytest.approx(9240 * E133)
    assert C_one(basis("2")).ln == pytest.approx(2310 * E133)


def test_C_one_permutation_invariant():
    primes = [3, 5, 7, 11]
    values = {
        C_one(PrimeBasis(tuple(order))).ln for order in itertools.permutations(primes)
    }
    assert len(values) == 1


def test_consistency_audit_passes():
    report = consistency_audit()
    assert report.passed, report.to_dict()
    keys = [clause.key for clause in report.checks]
    assert keys == list("abcdefghijk")


def test_consistency_audit_margins():
    clauses = {clause.key: clause for clause in consistency_audit().checks}
    assert 1.5e-4 < clauses["e"].margin < 2e-4
    assert 0 < clauses["c"].margin < 1e-4
    assert clauses["c"].details["value"] == pytest.approx(16.657073, abs=2e-6)


def test_derived_B2_B3():
    B2, B3 = derived_B2_B3()
    assert B2 == pytest.approx(8.81098, rel=1e-4)
    assert B3 == pytest.approx(64.7607, rel=1e-4)


def test_pipeline_trace():
    inputs = Theorem1Inputs(n=2, d=1, s=1, basis=basis("3"))
    trace = theorem1_pipeline_trace(inputs, 3, math.log(100))
    assert trace["delta1"] == pytest.approx(math.sqrt(2))
    assert trace["kappa"] == 1.0
    integrals = trace["integrals"]
    assert integrals["short_range"] == pytest.approx(8.35**2 * (1 - 1 / 8.35) / math.log(100))
    assert integrals["tail"] == pytest.approx(8.35 / math.log(100))
    assert integrals["quadrature_agrees"]
    assert trace["bound_ln_q0"] == pytest.approx(trace["exp_term"], rel=1e-9)
    assert trace["bound_ln_q0_with_eps"] == pytest.approx(trace["bound_ln_q0"] + 1)
    assert trace["constants"]["A4"] < trace["constants"]["B1"]


def test_pipeline_trace_rejects_small_q0():
    inputs = Theorem1Inputs(n=2, d=1, s=1, basis=basis("3"))
    with pytest.raises(PreconditionError):
        theorem1_pipeline_trace(inputs, 3, 0.5)
