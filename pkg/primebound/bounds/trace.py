import math

from scipy.integrate import quad

from primebound.bounds.audit import derived_B2_B3
from primebound.bounds.theorem1 import ConstantChain, exp_term, s_zero, x_one
from primebound.constants import EULER_GAMMA, THEOREM1
from primebound.errors import PreconditionError

QUAD_REL_TOL = 1e-6


def short_range_integral(ln_q0, v):
    """∫ v²/(t log²t) dt over [q0, q0^v] = v²(1 - 1/v)/log q0."""
    return v**2 * (1 - 1 / v) / ln_q0


def tail_integral(ln_q0, v, kappa):
    """∫ v^(1+κ)/(t log^(1+κ)t log^(1-κ)q0) dt over [q0^v, ∞) = v/(κ log q0)."""
    return v / (kappa * ln_q0)


def _quadrature(ln_q0, v, kappa):
    """
    Both integrals after t = q0^r, where dt/t = log q0 dr.

    The short range becomes (v²/log q0) ∫_1^v r^-2 dr and the tail
    (v^(1+κ)/log q0) ∫_v^∞ r^-(1+κ) dr.
    """
    short, _ = quad(lambda r: r**-2, 1, v)
    tail, _ = quad(lambda r: r ** -(1 + kappa), v, math.inf)
    return v**2 * short / ln_q0, v ** (1 + kappa) * tail / ln_q0


def theorem1_pipeline_trace(inputs, l, ln_q0):
    """
    The chain δ1 → κ → x1 → the two integral contributions → the bound on
    log q0, evaluated at a hypothetical q0 = exp(ln_q0).
    """
    basis = inputs.basis
    if l not in basis:
        raise PreconditionError("l = {} is not in the basis {}".format(l, basis))
    if not ln_q0 > 1:
        raise PreconditionError("q0 must exceed e, got log q0 = {}".format(ln_q0))

    chain = ConstantChain.for_l(basis, l)
    ln_delta1 = inputs.ln_ratio / (2 * basis.size)
    s0 = s_zero(inputs.s, inputs.n, basis)
    ln_x1 = x_one(s0, l, basis).ln

    short = short_range_integral(ln_q0, chain.v)
    tail = tail_integral(ln_q0, chain.v, chain.kappa)
    short_quad, tail_quad = _quadrature(ln_q0, chain.v, chain.kappa)
    short_err = abs(short - short_quad) / short
    tail_err = abs(tail - tail_quad) / tail

    bound = (ln_x1 / ln_delta1) * (chain.B2 / chain.kappa + chain.B3)
    B2, B3 = derived_B2_B3()

    return {
        "l": l,
        "s0": s0,
        "ln_delta1": ln_delta1,
        "delta1": math.exp(ln_delta1),
        "kappa": chain.kappa,
        "ln_x1": ln_x1,
        "ln_q0": ln_q0,
        "u": chain.u,
        "v": chain.v,
        "integrals": {
            "short_range": short,
            "short_range_quad": short_quad,
            "tail": tail,
            "tail_quad": tail_quad,
            "quadrature_agrees": short_err <= QUAD_REL_TOL and tail_err <= QUAD_REL_TOL,
        },
        "constants": {
            "B1": math.exp(chain.B1_ln_factor) * ln_x1,
            "A4": math.exp(THEOREM1["A4_offset"] - EULER_GAMMA),
            "B2": chain.B2,
            "B3": chain.B3,
            "B2_derived": B2,
            "B3_derived": B3,
        },
        "bound_ln_q0": bound,
        "bound_ln_q0_with_eps": inputs.epsilon + bound,
        "exp_term": exp_term(inputs, l, ln_x1),
    }
