import numpy as np

EULER_GAMMA = float(np.euler_gamma)

# Run configuration
#
# Every key can be overridden from a key=value configuration file (upper-case
# names) or from the matching command-line flag.
#
#   scan_limit: Default upper limit of the special-form scans.
#   segment_size: Length of one σ segment (and one ledger entry).
#   sigma_table_budget: Largest limit a dense σ table may have.
#   node_budget: Maximum number of divisor-enumeration nodes in G_z(T).
#   sift_budget: Largest interval sift_count enumerates exhaustively.
#   trial_division_bound: Trial division stops here; rho takes over.
#   audit_limit: Default scan limit of the classical inequality audit.
#   spot_checks: Points of the full-range quasiperfect spot-check.
#   kishore_limit: Default range of the coprime pair search.
#   workers: Worker processes for range-sharded work (0 = all cores).
#   seed: Seed of every randomized sweep and spot-check.
#   verbose: Print progress and the configuration banner to stderr.
#   manifest_dir: Where run manifests are written ("" disables them).
DEFAULT_CONFIG = {
    "scan_limit": 10**6,
    "segment_size": 2**20,
    "sigma_table_budget": 10**8,
    "node_budget": 10**9,
    "sift_budget": 10**8,
    "trial_division_bound": 10**7,
    "audit_limit": 10**7,
    "spot_checks": 10**6,
    "kishore_limit": 10**6,
    "workers": 0,
    "seed": 20240101,
    "verbose": False,
    "manifest_dir": "manifests",
}

CONFIG_TYPES = {
    "scan_limit": int,
    "segment_size": int,
    "sigma_table_budget": int,
    "node_budget": int,
    "sift_budget": int,
    "trial_division_bound": int,
    "audit_limit": int,
    "spot_checks": int,
    "kishore_limit": int,
    "workers": int,
    "seed": int,
    "verbose": bool,
    "manifest_dir": str,
}

# n/d-perfect smallest prime factor bound (C0 chain)
#
#   B0: Upper bound of the sieve dimension B(z) for the order-l systems.
#   B1_offset: B1 = exp(B1_offset - γ) * log x1.
#   A4_offset: A4 = exp(A4_offset - γ). Differs from B1_offset in the
#     source (1e-9 against 1e-8); both are carried as given.
#   B2, B3: Per-integral constants; B2_total = 2*B2 and B3_total = 2*B3 are
#     the values that appear in the exponent of C0.
#   u, v: Sieve level and dimension ratio choice.
#   x1_*: The four branches of x1(l).
THEOREM1 = {
    "B0": 2.01,
    "B1_offset": 0.1 + 1e-8,
    "A4_offset": 0.1 + 1e-9,
    "B2": 8.81098,
    "B3": 64.7607,
    "B2_total": 17.62196,
    "B3_total": 129.5214,
    "u": 2 + 1e-7,
    "v": 8.35,
    "v_chain_middle": 4.03,
    "x1_linear_factor": 101,
    "x1_double_exp": 18.0,
    "x1_s0_factor": 10,
    "min_P": 21,
}

# quasiperfect, Kishore and amicable-type bounds (C1 chain)
#
#   B, u, v: Sieve parameters of the theorem-4 systems.
#   V_constant: e^{-γ}(1 + 1/log z) exp(0.35/log^2 x3) is below this.
#   sieve_constant, pi_constant: S(A, x^{1/u}) and π'_l(x) coefficients.
#   product_constant: Coefficient in the final ∏ p/(p-1) estimate.
#   C1_exponent: C1 = max_l x3(l)^(C1_exponent |P|^2).
#   x4_power: x4 = x3^x4_power.
THEOREM4 = {
    "B": 1.505,
    "u": 2.000007,
    "v": 7.538,
    "V_constant": 0.56146,
    "V_exp_numerator": 0.35,
    "sieve_constant": 16.65708,
    "pi_constant": 16.65709,
    "slack": 1e-5,
    "product_constant": 33.31418,
    "C1_exponent": 2310,
    "x3_linear_factor": 8,
    "x3_double_exp": 13.3,
    "x4_power": 101,
    "class_log_sum_share": 1.01,
}

# Constants consumed from the explicit prime-in-progression estimates.
# They are recorded, not verified: the threshold x0 = exp(exp(13.3)) is
# out of reach.
AP_CONSTANTS = {
    "A0": 0.2785,
    "theta_error": 0.279,
    "mertens_error": 0.7,
    "log_sum_x0_factor": 1.0016,
    "brun_titchmarsh_integral": 2.0015,
    "A2": 0.32,
    "x0_double_exp": 13.3,
}

# Threshold above which a LogValue is rendered as exp(exp(M)).
NESTED_RENDER_THRESHOLD = 1e6

# Significant digits of every float in the JSON output.
JSON_SIGNIFICANT_DIGITS = 17

EPS_SWEEP = [1e-3, 1e-2, 1e-1, 1.0, 10.0]

# Largest z for which G, V and B may be evaluated in exact rationals.
EXACT_MODE_MAX_Z = 100

# Moduli covered by the Brun-Titchmarsh audit.
AUDIT_MAX_MODULUS = 100

# Exit codes of the command-line interface.
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
