#pragma once

// Exact intrinsic-volume sequences V_0..V_n.
//
// Sequences live in linear scale. Every closed form here is a product or
// convolution of nonnegative numbers, so there is no cancellation. For
// regimes where values overflow a double (large cubes, W = (1+s)^n), the
// log_* functions compute log V_j directly.

#include <span>
#include <vector>

#include "ivlab/body.hpp"

namespace ivlab {

class IVSequence {
public:
    IVSequence() : values_{1.0} {}
    explicit IVSequence(std::vector<double> values);

    // Ambient dimension n; there are n + 1 entries.
    int dim() const { return static_cast<int>(values_.size()) - 1; }
    double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
    std::span<const double> values() const { return values_; }

    friend bool operator==(const IVSequence&, const IVSequence&) = default;

private:
    std::vector<double> values_;
};

// Volume of the unit ball in R^n.
double kappa(int n);
double log_kappa(int n);
// Surface area of the unit sphere in R^n, n * kappa(n).
double omega(int n);
double log_binomial(int n, int k);
double binomial(int n, int k);

IVSequence ball_sequence(int n, double radius);
// Elementary symmetric polynomials of the side lengths.
IVSequence box_sequence(std::span<const double> lengths);
// Coefficients of the product of the two generating polynomials.
IVSequence product_sequence(const IVSequence& a, const IVSequence& b);
IVSequence scale_sequence(const IVSequence& a, double factor);
IVSequence embed_sequence(const IVSequence& a, int extra_dims);

IVSequence sequence_of(const Body& body);

// log V_j, with -inf for vanishing entries.
std::vector<double> log_ball_sequence(int n, double radius);
std::vector<double> log_box_sequence(std::span<const double> lengths);
std::vector<double> log_product_sequence(std::span<const double> a, std::span<const double> b);
std::vector<double> log_sequence_of(const Body& body);

double log_sum_exp(std::span<const double> logs);

}  // namespace ivlab
