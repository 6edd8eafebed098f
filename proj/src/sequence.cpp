#include "ivlab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ivlab/detail/overloaded.hpp"
#include "ivlab/errors.hpp"

namespace ivlab {

using detail::overloaded;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

IVSequence::IVSequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("an intrinsic-volume sequence needs at least V_0");
    for (double v : values_)
        if (!(v >= 0.0)) throw InputError("intrinsic volumes must be nonnegative");
}

double log_kappa(int n) {
    if (n < 0) throw InputError("kappa needs n >= 0");
    const double half = 0.5 * n;
    return half * std::log(std::numbers::pi) - std::lgamma(1.0 + half);
}

double kappa(int n) {
    // Exact values for the low dimensions that dominate the corpus.
    switch (n) {
        case 0: return 1.0;
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        default: return std::exp(log_kappa(n));
    }
}

double omega(int n) { return n * kappa(n); }

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return kNegInf;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_sum_exp(std::span<const double> logs) {
    double hi = kNegInf;
    for (double v : logs) hi = std::max(hi, v);
    if (hi == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

IVSequence ball_sequence(int n, double radius) {
    const auto logs = log_ball_sequence(n, radius);
    std::vector<double> v(logs.size());
    v[0] = 1.0;
    for (std::size_t j = 1; j < logs.size(); ++j) v[j] = std::exp(logs[j]);
    return IVSequence(std::move(v));
}

std::vector<double> log_ball_sequence(int n, double radius) {
    if (n < 1) throw InputError("ball dimension must be >= 1");
    if (!(radius >= 0.0)) throw InputError("ball radius must be nonnegative");
    std::vector<double> out(static_cast<std::size_t>(n) + 1, kNegInf);
    out[0] = 0.0;
    if (radius == 0.0) return out;
    const double log_r = std::log(radius);
    const double log_kn = log_kappa(n);
    for (int j = 1; j <= n; ++j)
        out[static_cast<std::size_t>(j)] = log_binomial(n, j) + log_kn - log_kappa(n - j) + j * log_r;
    return out;
}

IVSequence box_sequence(std::span<const double> lengths) {
    std::vector<double> e(lengths.size() + 1, 0.0);
    e[0] = 1.0;
    // Multiply in (1 + s_i x) one factor at a time, updating from the top down.
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double s = lengths[i];
        if (!(s >= 0.0)) throw InputError("box side lengths must be nonnegative");
        for (std::size_t j = i + 1; j >= 1; --j) e[j] += s * e[j - 1];
    }
    return IVSequence(std::move(e));
}

std::vector<double> log_box_sequence(std::span<const double> lengths) {
    std::vector<double> le(lengths.size() + 1, kNegInf);
    le[0] = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double s = lengths[i];
        if (!(s >= 0.0)) throw InputError("box side lengths must be nonnegative");
        if (s == 0.0) continue;
        const double log_s = std::log(s);
        for (std::size_t j = i + 1; j >= 1; --j) le[j] = log_add(le[j], log_s + le[j - 1]);
    }
    return le;
}

IVSequence product_sequence(const IVSequence& a, const IVSequence& b) {
    std::vector<double> c(static_cast<std::size_t>(a.dim() + b.dim()) + 1, 0.0);
    for (int i = 0; i <= a.dim(); ++i)
        for (int k = 0; k <= b.dim(); ++k) c[static_cast<std::size_t>(i + k)] += a[i] * b[k];
    return IVSequence(std::move(c));
}

std::vector<double> log_product_sequence(std::span<const double> a, std::span<const double> b) {
    std::vector<double> c(a.size() + b.size() - 1, kNegInf);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) c[i + k] = log_add(c[i + k], a[i] + b[k]);
    return c;
}

IVSequence scale_sequence(const IVSequence& a, double factor) {
    if (!(factor >= 0.0)) throw InputError("scale factor must be nonnegative");
    std::vector<double> v(a.values().begin(), a.values().end());
    double p = 1.0;
    for (std::size_t j = 1; j < v.size(); ++j) {
        p *= factor;
        v[j] *= p;
    }
    return IVSequence(std::move(v));
}

IVSequence embed_sequence(const IVSequence& a, int extra_dims) {
    if (extra_dims < 0) throw InputError("embedding needs a nonnegative number of extra dimensions");
    std::vector<double> v(a.values().begin(), a.values().end());
    v.resize(v.size() + static_cast<std::size_t>(extra_dims), 0.0);
    return IVSequence(std::move(v));
}

IVSequence sequence_of(const Body& body) {
    return std::visit(
        overloaded{
            [](const shape::Point& p) { return embed_sequence(IVSequence{}, p.dim); },
            [](const shape::Ball& p) { return ball_sequence(p.dim, p.radius); },
            [](const shape::Box& p) { return box_sequence(p.lengths); },
            [](const shape::Product& p) { return product_sequence(sequence_of(p.left), sequence_of(p.right)); },
            [](const shape::Scaled& p) { return scale_sequence(sequence_of(p.inner), p.factor); },
            [](const shape::Translated& p) { return sequence_of(p.inner); },
            [](const shape::Embedded& p) { return embed_sequence(sequence_of(p.inner), p.extra_dims); },
        },
        body.node().shape);
}

std::vector<double> log_sequence_of(const Body& body) {
    return std::visit(
        overloaded{
            [](const shape::Point& p) {
                std::vector<double> v(static_cast<std::size_t>(p.dim) + 1, kNegInf);
                v[0] = 0.0;
                return v;
            },
            [](const shape::Ball& p) { return log_ball_sequence(p.dim, p.radius); },
            [](const shape::Box& p) { return log_box_sequence(p.lengths); },
            [](const shape::Product& p) {
                return log_product_sequence(log_sequence_of(p.left), log_sequence_of(p.right));
            },
            [](const shape::Scaled& p) {
                auto v = log_sequence_of(p.inner);
                if (p.factor == 0.0) {
                    std::fill(v.begin() + 1, v.end(), kNegInf);
                    return v;
                }
                const double log_f = std::log(p.factor);
                for (std::size_t j = 1; j < v.size(); ++j)
                    if (v[j] != kNegInf) v[j] += static_cast<double>(j) * log_f;
                return v;
            },
            [](const shape::Translated& p) { return log_sequence_of(p.inner); },
            [](const shape::Embedded& p) {
                auto v = log_sequence_of(p.inner);
                v.resize(v.size() + static_cast<std::size_t>(p.extra_dims), kNegInf);
                return v;
            },
        },
        body.node().shape);
}

}  // namespace ivlab
