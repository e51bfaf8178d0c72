#pragma once

#include <span>
#include <vector>

#include "hema/model.hpp"

namespace hema {

struct SynthesisOptions {
    int t_points = 1000;
    double headroom = 1.1;  // factor applied to the smallest admissible M3 multiplier
    double gamma_gap = 1.0; // gamma2 = R + gamma_gap
};

struct Synthesis {
    std::vector<double> lambdas;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double threshold = 0.0;   // R: beyond it the M3 part of beta stays below epsilon
    double alpha_margin = 0.0;  // min_t alpha(gamma1, t) of the synthesized model
    double beta_margin = 0.0;   // max_t beta(gamma2, t)
};

/// Chooses multipliers lambda_k for given r_k, b, m_k, n_k so that
/// alpha(gamma1, t) > 0 > beta(gamma2, t) for all t, for exponent patterns with
/// m_k > 1 for all k, some 1 < m_j < n_j + 1 and some m_i > n_i + 1:
///   1. M3 multipliers large enough that the M3 part of alpha beats b at gamma1;
///   2. R past every M3 hump with the M3 part of beta (at max r_k) below epsilon, gamma2 > R;
///   3. M4/M5 multipliers small enough that their beta part at gamma2 stays below b_min - 2 epsilon.
/// Throws std::invalid_argument when the pattern does not hold or epsilon is not in (0, b_min).
Synthesis synthesize_lambdas(std::span<const PeriodicFn> r, const PeriodicFn& b, std::span<const double> m,
                             std::span<const double> n, double gamma1, double epsilon,
                             const SynthesisOptions& options = {});

/// Uses r_k, b, m_k, n_k of `base` (its multipliers are ignored).
Synthesis synthesize_lambdas(const Model& base, double gamma1, double epsilon, const SynthesisOptions& options = {});

/// Copy of `base` with the multipliers replaced.
Model with_lambdas(const Model& base, std::span<const double> lambdas);

}  // namespace hema
