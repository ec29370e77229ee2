import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from primebound.ap.audit import AuditReport
from primebound.bounds.theorem4 import x_four, x_three
from primebound.constants import EULER_GAMMA, THEOREM1, THEOREM4
from primebound.sieve.large_sieve import psi0


@dataclass
class Clause:
    key: str
    description: str
    passed: bool
    margin: Optional[float] = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "key": self.key,
            "description": self.description,
            "passed": self.passed,
            "margin": self.margin,
            "details": self.details,
        }


def _exact(value):
    """A decimal constant as the exact rational its digits denote."""
    return Fraction(repr(value))


def _halves_clause():
    b2 = _exact(THEOREM1["B2_total"]) == 2 * _exact(THEOREM1["B2"])
    b3 = _exact(THEOREM1["B3_total"]) == 2 * _exact(THEOREM1["B3"])
    return Clause(
        "a",
        "17.62196 = 2*8.81098 and 129.5214 = 2*64.7607",
        b2 and b3,
        details={"B2": b2, "B3": b3},
    )


def _dimension_clause():
    v, B0, u = THEOREM1["v"], THEOREM1["B0"], THEOREM1["u"]
    return Clause("b", "v > B0*u", v > B0 * u, margin=v - B0 * u)


def _sieve_constant_clause():
    B, u, v = THEOREM4["B"], THEOREM4["u"], THEOREM4["v"]
    value = THEOREM4["V_constant"] * v**1.5 / psi0(B, v, u)
    with_slack = _exact(THEOREM4["sieve_constant"]) + _exact(THEOREM4["slack"])
    return Clause(
        "c",
        "0.56146 v^(3/2)/ψ0(B, v, u) <= 16.65708, and 16.65708 + 1e-5 = 16.65709",
        value <= THEOREM4["sieve_constant"]
        and with_slack == _exact(THEOREM4["pi_constant"]),
        margin=THEOREM4["sieve_constant"] - value,
        details={"value": value},
    )


def _product_constant_clause():
    return Clause(
        "d",
        "33.31418 = 2*16.65709",
        _exact(THEOREM4["product_constant"]) == 2 * _exact(THEOREM4["pi_constant"]),
    )


def _threshold_clause():
    root = math.sqrt(THEOREM4["C1_exponent"])
    rhs = root * math.log(2)
    # 2|𝒫|/C1 for |𝒫| = 1, as a logarithm: C1 >= x3^2310
    ln_correction = math.log(2) - THEOREM4["C1_exponent"] * x_three(3).ln
    return Clause(
        "e",
        "33.31418 <= sqrt(2310) log 2",
        THEOREM4["product_constant"] <= rhs,
        margin=rhs - THEOREM4["product_constant"],
        details={
            "rhs": rhs,
            "exponent_margin": math.log(2) - THEOREM4["product_constant"] / root,
            "ln_two_over_C1": ln_correction,
        },
    )


def _ratio_clause(grid_n=20, grid_d=10, grid_s=50):
    """(n/d)((2(d+1)s - 1)/(2(d+1)s))^s > sqrt(n/d) over a grid of n > d >= 1."""
    worst = None
    failures = []
    for d in range(1, grid_d + 1):
        for n in range(d + 1, grid_n + 1):
            if math.gcd(n, d) != 1:
                continue
            ln_ratio = math.log(n / d)
            for s in range(1, grid_s + 1):
                m = 2 * (d + 1) * s
                margin = ln_ratio + s * math.log1p(-1 / m) - ln_ratio / 2
                if worst is None or margin < worst["margin"]:
                    worst = {"n": n, "d": d, "s": s, "margin": margin}
                if margin <= 0:
                    failures.append({"n": n, "d": d, "s": s})
    return Clause(
        "f",
        "(n/d)((2(d+1)s-1)/(2(d+1)s))^s > sqrt(n/d)",
        not failures,
        margin=worst["margin"],
        details={"worst": worst, "failures": failures},
    )


def _class_share_clause():
    B = _exact(THEOREM4["B"])
    return Clause(
        "g",
        "B = 1 + 1.01/2",
        B == 1 + _exact(THEOREM4["class_log_sum_share"]) / 2,
    )


def _chain_clause():
    v, middle = THEOREM1["v"], THEOREM1["v_chain_middle"]
    B0u = THEOREM1["B0"] * THEOREM1["u"]
    return Clause(
        "h",
        "8.35 > 4.03 > B0*u",
        v > middle > B0u,
        margin=middle - B0u,
    )


def _V_constant_clause():
    ln_x3 = x_three(3).ln
    ln_x4 = x_four(3).ln
    value = (
        math.exp(-EULER_GAMMA)
        * (1 + 1 / ln_x4)
        * math.exp(THEOREM4["V_exp_numerator"] / ln_x3**2)
    )
    return Clause(
        "i",
        "e^-γ (1 + 1/log x4) exp(0.35/log² x3) < 0.56146",
        value < THEOREM4["V_constant"],
        margin=THEOREM4["V_constant"] - value,
        details={"value": value},
    )


def _C1_dominates_clause():
    lhs = THEOREM4["C1_exponent"]
    rhs = THEOREM4["x4_power"] * THEOREM4["v"]
    return Clause(
        "j",
        "C1 >= x4^7.538: 2310 |𝒫|² >= 101*7.538 at |𝒫| = 1",
        lhs >= rhs,
        margin=lhs - rhs,
    )


def derived_B2_B3():
    """B2 = A v/ξ and B3 = A v²(1 - 1/v)/ξ with A = e^(0.1+1e-8-γ), ξ = ψ0(2.01, 8.35, u)."""
    A = math.exp(THEOREM1["B1_offset"] - EULER_GAMMA)
    v = THEOREM1["v"]
    xi = psi0(THEOREM1["B0"], v, THEOREM1["u"])
    return A * v / xi, A * v**2 * (1 - 1 / v) / xi


def _reproduction_clause(rel_tol=1e-4):
    B2, B3 = derived_B2_B3()
    err2 = abs(B2 - THEOREM1["B2"]) / THEOREM1["B2"]
    err3 = abs(B3 - THEOREM1["B3"]) / THEOREM1["B3"]
    return Clause(
        "k",
        "B2 and B3 reproduced from ξ = ψ0(2.01, 8.35, 2+1e-7)",
        err2 <= rel_tol and err3 <= rel_tol,
        margin=rel_tol - max(err2, err3),
        details={"B2": B2, "B3": B3, "rel_err_B2": err2, "rel_err_B3": err3},
    )


def consistency_audit():
    """Every arithmetic identity and inequality the constants rely on."""
    return AuditReport(
        [
            _halves_clause(),
            _dimension_clause(),
            _sieve_constant_clause(),
            _product_constant_clause(),
            _threshold_clause(),
            _ratio_clause(),
            _class_share_clause(),
            _chain_clause(),
            _V_constant_clause(),
            _C1_dominates_clause(),
            _reproduction_clause(),
        ]
    )
