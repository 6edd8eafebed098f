#pragma once

// Stochastic oracles for intrinsic volumes.
//
// Every estimator here reaches the intrinsic volumes through a route that
// does not touch the exact sequence code: averaged projection volumes under
// Haar-random rotations, or integrals of functions of dist(x, K) over R^n.
//
// Sampling is split into fixed-size chunks; chunk k draws from its own
// RngStream(seed, k) and partial sums are merged in chunk order. Results are
// bit-identical for any thread count given the same (samples, chunk_size).

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ivlab/body.hpp"

namespace ivlab {

using Engine = std::mt19937_64;

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index) : seed_(seed), stream_index_(stream_index) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }
    Engine engine() const;

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
};

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::string estimator_id;

    // |value - exact| in units of std_error; 0 when both agree exactly.
    double se_distance(double exact) const;
    // |value - exact| <= k * std_error, with a 1e-12 relative floor for zero-variance cases.
    bool within(double exact, double k) const;
};

struct McOptions {
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    std::int64_t chunk_size = 8192;
    int threads = 1;
    // Override for the proposal scale; see each estimator for the default.
    std::optional<double> proposal_sigma;
    // kubota_estimate rejects boxes of higher ambient dimension.
    int kubota_max_dim = 12;
};

// Haar-distributed rotation (orthogonal, det +1).
Eigen::MatrixXd haar_rotation(int n, Engine& rng);

// Volume of the zonotope sum_i [0, g_i] for the columns g_i of a j x m matrix:
// sum over j-column subsets S of |det G_S|.
double zonotope_volume(const Eigen::MatrixXd& generators);

// Projection-mean (Kubota) estimate of V_j. Supports (scaled, translated)
// balls, where the projection volume is rotation-free, and axis-aligned
// boxes, where it is a zonotope volume. pre_rotation, when given, rotates the
// body before the Haar draw is applied.
MCEstimate kubota_estimate(const Body& body, int j, const McOptions& opts,
                           const std::optional<Eigen::MatrixXd>& pre_rotation = std::nullopt);

// Importance-sampling estimate of the integral of exp(-pi dist^2(x, K)), which is W(K).
// Gaussian proposal at the enclosing-ball center with sigma = radius + 1/sqrt(2 pi).
MCEstimate wills_estimate(const Body& body, const McOptions& opts);

// Integral of exp(-lambda^2 pi dist^2(x, K)) = lambda^{-n} G(lambda).
// Proposal sigma = radius + 1/(lambda sqrt(2 pi)).
MCEstimate gf_estimate(const Body& body, double lambda, const McOptions& opts);

// Self-normalized estimates of E H and E H^2, H = pi dist^2(y, K) for y ~ mu_K.
std::pair<MCEstimate, MCEstimate> h_moment_estimates(const Body& body, const McOptions& opts);

// One exact draw from mu_K for an axis-aligned box.
Eigen::VectorXd mu_sampler_product(const Body& body, Engine& rng);

struct MuSamplerStats {
    std::vector<MCEstimate> inside_fraction;  // per axis
    MCEstimate eh;                            // mean of pi dist^2
};

MuSamplerStats mu_sampler_stats(const Body& body, const McOptions& opts);

struct SteinerCheck {
    MCEstimate mc_volume;
    double polynomial_value;
};

// Hit-or-miss volume of {x : dist(x, K) <= lambda} over the bounding box
// inflated by lambda, against sum_j lambda^{n-j} kappa_{n-j} V_j.
SteinerCheck steiner_check(const Body& body, double lambda, const McOptions& opts);
double steiner_polynomial(const Body& body, double lambda);

struct BetaCheck {
    MCEstimate mc;
    double exact;
};

// Integral of (1 + lambda dist(x, K))^{-(n+1)} against
// kappa_n lambda^{-n} sum_j lambda^j V_j(K) / V_j(B_n). Radial beta-prime
// proposal with scale radius + 1/lambda.
BetaCheck beta_integral_check(const Body& body, double lambda, const McOptions& opts);
double beta_integral_exact(const Body& body, double lambda);

}  // namespace ivlab
