#pragma once

// Distributional view of an intrinsic-volume sequence: the normalized
// sequence as a law on {0, ..., n}, its mean (central intrinsic volume),
// variance and entropy, plus the classical inequality checks.

#include <span>
#include <vector>

#include "ivlab/check.hpp"
#include "ivlab/sequence.hpp"

namespace ivlab {

struct IVDistribution {
    int n = 0;
    std::vector<double> probs;
    double mean = 0.0;
    double variance = 0.0;
    // Natural log, 0 log 0 = 0.
    double entropy = 0.0;
};

inline constexpr double kDefaultUlcTolerance = 1e-9;

double wills(const IVSequence& a);
double log_wills(const IVSequence& a);

IVDistribution normalize(const IVSequence& a);
// Same, from log V_j. Use when the linear sequence overflows.
IVDistribution normalize_log(std::span<const double> log_values);
// Distribution statistics for arbitrary probabilities on {0..n}.
IVDistribution distribution_from_probs(std::vector<double> probs);

double central_iv(const IVSequence& a);
// Closed form sum s_i / (1 + s_i); never overflows.
double central_iv_box(std::span<const double> lengths);
double variance(const IVSequence& a);
double intrinsic_entropy(const IVSequence& a);

// j V_j^2 >= (j+1) V_{j+1} V_{j-1} for j = 1..n-1, with slack rel_tol * max(1, j V_j^2).
std::vector<Check> ulc_check(const IVSequence& a, double rel_tol = kDefaultUlcTolerance);

// V_j <= V_1^j / j! for j = 1..n and W <= exp(V_1).
std::vector<Check> chevet_mcmullen_check(const IVSequence& a, double rel_tol = kDefaultUlcTolerance);

// W_j^{(n)} = kappa_j V_{n-j} / C(n, j), j = 0..n.
std::vector<double> quermassintegrals(const IVSequence& a);
std::vector<Check> quermass_log_concavity_check(const IVSequence& a, double rel_tol = kDefaultUlcTolerance);

// G(lambda) = sum_j lambda^j V_j.
double gf_eval(const IVSequence& a, double lambda);
// (log G)'(1) = G'(1) / G(1).
double gf_log_derivative_at_1(const IVSequence& a);

}  // namespace ivlab
