#include "ivlab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "ivlab/errors.hpp"
#include "ivlab/sequence.hpp"

namespace ivlab {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// Running mean and co-moment matrix of a small vector of per-sample quantities.
// Merging follows the pairwise update, so chunk-order merges are reproducible.
struct CoMoments {
    std::int64_t count = 0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd m2;

    explicit CoMoments(Eigen::Index width = 0)
        : mean(Eigen::VectorXd::Zero(width)), m2(Eigen::MatrixXd::Zero(width, width)) {}

    void add(const Eigen::VectorXd& x) {
        ++count;
        const Eigen::VectorXd delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean).transpose();
    }

    void merge(const CoMoments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        const Eigen::VectorXd delta = other.mean - mean;
        mean += delta * (nb / n);
        m2 += other.m2 + delta * delta.transpose() * (na * nb / n);
        count += other.count;
    }

    double var(Eigen::Index i, Eigen::Index k) const {
        return count > 1 ? m2(i, k) / static_cast<double>(count - 1) : 0.0;
    }
};

void validate(const McOptions& o) {
    if (o.samples < 1) throw InputError("samples must be >= 1");
    if (o.chunk_size < 1) throw InputError("chunk size must be >= 1");
    if (o.threads < 1) throw InputError("threads must be >= 1");
    if (o.proposal_sigma && !(*o.proposal_sigma > 0.0)) throw InputError("proposal sigma must be positive");
}

// Fn: void(Engine&, std::int64_t count, CoMoments& acc)
template <class Fn>
CoMoments run_chunks(const McOptions& o, Eigen::Index width, Fn&& fn) {
    validate(o);
    const std::int64_t n_chunks = (o.samples + o.chunk_size - 1) / o.chunk_size;
    std::vector<CoMoments> parts(static_cast<std::size_t>(n_chunks), CoMoments(width));

    auto do_chunk = [&](std::int64_t k) {
        Engine rng = RngStream(o.seed, static_cast<std::uint64_t>(k)).engine();
        const std::int64_t count = std::min(o.chunk_size, o.samples - k * o.chunk_size);
        fn(rng, count, parts[static_cast<std::size_t>(k)]);
    };

    const auto workers = static_cast<std::int64_t>(o.threads);
    if (workers <= 1 || n_chunks <= 1) {
        for (std::int64_t k = 0; k < n_chunks; ++k) do_chunk(k);
    } else {
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        std::vector<std::thread> pool;
        for (std::int64_t w = 0; w < std::min(workers, n_chunks); ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::int64_t k = next++; k < n_chunks && !failed; k = next++) do_chunk(k);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    CoMoments total(width);
    for (const auto& p : parts) total.merge(p);
    return total;
}

MCEstimate mean_estimate(const CoMoments& m, Eigen::Index i, const McOptions& o, std::string id) {
    MCEstimate e;
    e.value = m.mean[i];
    e.std_error = std::sqrt(std::max(0.0, m.var(i, i)) / static_cast<double>(m.count));
    e.samples = m.count;
    e.seed = o.seed;
    e.estimator_id = std::move(id);
    return e;
}

// Ratio mean[num] / mean[den] with a delta-method standard error.
MCEstimate ratio_estimate(const CoMoments& m, Eigen::Index num, Eigen::Index den, const McOptions& o,
                          std::string id) {
    MCEstimate e;
    const double r = m.mean[num] / m.mean[den];
    const double v = m.var(num, num) - 2.0 * r * m.var(num, den) + r * r * m.var(den, den);
    e.value = r;
    e.std_error = std::sqrt(std::max(0.0, v) / static_cast<double>(m.count)) / m.mean[den];
    e.samples = m.count;
    e.seed = o.seed;
    e.estimator_id = std::move(id);
    return e;
}

std::string param_id(const std::string& base, const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s[%s=%g]", base.c_str(), name, v);
    return buf;
}

struct GaussianProposal {
    Eigen::VectorXd center;
    double sigma;

    Eigen::VectorXd draw(Engine& rng) const {
        std::normal_distribution<double> normal;
        Eigen::VectorXd x(center.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = center[i] + sigma * normal(rng);
        return x;
    }

    double log_density(const Eigen::VectorXd& x) const {
        const double n = static_cast<double>(center.size());
        return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma * sigma) -
               (x - center).squaredNorm() / (2.0 * sigma * sigma);
    }
};

GaussianProposal gaussian_proposal(const Body& body, double lambda, const McOptions& o) {
    const auto ball = enclosing_ball(body);
    const double sigma = o.proposal_sigma ? *o.proposal_sigma : ball.radius + kInvSqrt2Pi / lambda;
    return {ball.center, sigma};
}

void require_positive(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be positive and finite");
}

}  // namespace

Engine RngStream::engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(stream_index_), static_cast<std::uint32_t>(stream_index_ >> 32),
                      0x9e3779b9u};
    return Engine(seq);
}

double MCEstimate::se_distance(double exact) const {
    const double gap = std::abs(value - exact);
    if (gap == 0.0) return 0.0;
    return std_error > 0.0 ? gap / std_error : std::numeric_limits<double>::infinity();
}

bool MCEstimate::within(double exact, double k) const {
    return std::abs(value - exact) <= k * std_error + 1e-12 * std::max(1.0, std::abs(exact));
}

Eigen::MatrixXd haar_rotation(int n, Engine& rng) {
    if (n < 1) throw InputError("rotation dimension must be >= 1");
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) g(r, c) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // Fix the signs so that R has a positive diagonal; this makes Q Haar on O(n).
    const Eigen::VectorXd diag = qr.matrixQR().diagonal();
    for (int i = 0; i < n; ++i)
        if (diag[i] < 0.0) q.col(i) *= -1.0;
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    return q;
}

double zonotope_volume(const Eigen::MatrixXd& generators) {
    const auto j = generators.rows();
    const auto m = generators.cols();
    if (j == 0) return 1.0;
    if (m < j) return 0.0;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < j; ++i) idx[static_cast<std::size_t>(i)] = i;
    Eigen::MatrixXd block(j, j);
    double vol = 0.0;
    while (true) {
        for (Eigen::Index c = 0; c < j; ++c) block.col(c) = generators.col(idx[static_cast<std::size_t>(c)]);
        vol += std::abs(block.determinant());
        // Next j-subset in lexicographic order.
        Eigen::Index pos = j - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - j + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (Eigen::Index c = pos + 1; c < j; ++c)
            idx[static_cast<std::size_t>(c)] = idx[static_cast<std::size_t>(c - 1)] + 1;
    }
    return vol;
}

MCEstimate kubota_estimate(const Body& body, int j, const McOptions& opts,
                           const std::optional<Eigen::MatrixXd>& pre_rotation) {
    validate(opts);
    const int n = ambient_dim(body);
    if (j < 0 || j > n) throw InputError("index j must lie in [0, n]");
    const double constant = binomial(n, j) * kappa(n) / (kappa(j) * kappa(n - j));
    const std::string id = "kubota[j=" + std::to_string(j) + "]";

    if (const auto ball = as_ball(body)) {
        // Every projection of a ball is a j-ball of the same radius.
        MCEstimate e;
        e.value = constant * kappa(j) * std::pow(ball->radius, j);
        e.samples = opts.samples;
        e.seed = opts.seed;
        e.estimator_id = id;
        return e;
    }

    const auto box = as_axis_box(body);
    if (!box) throw CapabilityError("kubota_estimate supports balls and axis-aligned boxes only");
    if (n > opts.kubota_max_dim)
        throw CapabilityError("kubota_estimate is capped at ambient dimension " +
                              std::to_string(opts.kubota_max_dim));
    if (pre_rotation && (pre_rotation->rows() != n || pre_rotation->cols() != n))
        throw InputError("pre-rotation has wrong shape");

    const Eigen::VectorXd sides = box->upper - box->lower;
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < n; ++i)
        if (sides[i] > 0.0) live.push_back(i);

    auto acc = run_chunks(opts, 1, [&](Engine& rng, std::int64_t count, CoMoments& m) {
        Eigen::MatrixXd gens(j, static_cast<Eigen::Index>(live.size()));
        Eigen::VectorXd y(1);
        for (std::int64_t s = 0; s < count; ++s) {
            Eigen::MatrixXd q = haar_rotation(n, rng);
            if (pre_rotation) q = q * *pre_rotation;
            for (std::size_t c = 0; c < live.size(); ++c)
                gens.col(static_cast<Eigen::Index>(c)) = sides[live[c]] * q.col(live[c]).head(j);
            y[0] = constant * zonotope_volume(gens);
            m.add(y);
        }
    });
    return mean_estimate(acc, 0, opts, id);
}

MCEstimate gf_estimate(const Body& body, double lambda, const McOptions& opts) {
    require_positive(lambda);
    const auto prop = gaussian_proposal(body, lambda, opts);
    const double rate = lambda * lambda * std::numbers::pi;
    auto acc = run_chunks(opts, 1, [&](Engine& rng, std::int64_t count, CoMoments& m) {
        Eigen::VectorXd y(1);
        for (std::int64_t s = 0; s < count; ++s) {
            const Eigen::VectorXd x = prop.draw(rng);
            y[0] = std::exp(-rate * squared_distance(body, x) - prop.log_density(x));
            m.add(y);
        }
    });
    return mean_estimate(acc, 0, opts, param_id("gf", "lambda", lambda));
}

MCEstimate wills_estimate(const Body& body, const McOptions& opts) {
    auto e = gf_estimate(body, 1.0, opts);
    e.estimator_id = "wills";
    return e;
}

std::pair<MCEstimate, MCEstimate> h_moment_estimates(const Body& body, const McOptions& opts) {
    const auto prop = gaussian_proposal(body, 1.0, opts);
    // Columns: w, w h, w h^2 with w the importance weight of exp(-h).
    auto acc = run_chunks(opts, 3, [&](Engine& rng, std::int64_t count, CoMoments& m) {
        Eigen::VectorXd y(3);
        for (std::int64_t s = 0; s < count; ++s) {
            const Eigen::VectorXd x = prop.draw(rng);
            const double h = std::numbers::pi * squared_distance(body, x);
            const double w = std::exp(-h - prop.log_density(x));
            y << w, w * h, w * h * h;
            m.add(y);
        }
    });
    return {ratio_estimate(acc, 1, 0, opts, "hmoment.eh"), ratio_estimate(acc, 2, 0, opts, "hmoment.eh2")};
}

Eigen::VectorXd mu_sampler_product(const Body& body, Engine& rng) {
    const auto box = as_axis_box(body);
    if (!box) throw CapabilityError("mu_sampler_product needs an axis-aligned box");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> half_gauss(0.0, kInvSqrt2Pi);
    const auto n = box->lower.size();
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lo = box->lower[i];
        const double hi = box->upper[i];
        const double s = hi - lo;
        // Per axis, exp(-pi dist^2) has mass s inside and 1/2 on each side.
        if (unif(rng) * (1.0 + s) < s) {
            x[i] = lo + s * unif(rng);
        } else {
            const double t = std::abs(half_gauss(rng));
            x[i] = unif(rng) < 0.5 ? lo - t : hi + t;
        }
    }
    return x;
}

MuSamplerStats mu_sampler_stats(const Body& body, const McOptions& opts) {
    const auto box = as_axis_box(body);
    if (!box) throw CapabilityError("mu_sampler_product needs an axis-aligned box");
    const auto n = box->lower.size();
    auto acc = run_chunks(opts, n + 1, [&](Engine& rng, std::int64_t count, CoMoments& m) {
        Eigen::VectorXd y(n + 1);
        for (std::int64_t s = 0; s < count; ++s) {
            const Eigen::VectorXd x = mu_sampler_product(body, rng);
            for (Eigen::Index i = 0; i < n; ++i)
                y[i] = (x[i] >= box->lower[i] && x[i] <= box->upper[i]) ? 1.0 : 0.0;
            y[n] = std::numbers::pi * squared_distance(body, x);
            m.add(y);
        }
    });
    MuSamplerStats out;
    for (Eigen::Index i = 0; i < n; ++i)
        out.inside_fraction.push_back(
            mean_estimate(acc, i, opts, "mu_sampler.inside[axis=" + std::to_string(i) + "]"));
    out.eh = mean_estimate(acc, n, opts, "mu_sampler.eh");
    return out;
}

double steiner_polynomial(const Body& body, double lambda) {
    const auto v = sequence_of(body);
    const int n = v.dim();
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) acc += std::pow(lambda, n - j) * kappa(n - j) * v[j];
    return acc;
}

SteinerCheck steiner_check(const Body& body, double lambda, const McOptions& opts) {
    require_positive(lambda);
    auto region = bounding_box(body);
    region.lower.array() -= lambda;
    region.upper.array() += lambda;
    const double vol = region.volume();
    const double r2 = lambda * lambda;
    const Eigen::VectorXd width = region.upper - region.lower;
    auto acc = run_chunks(opts, 1, [&](Engine& rng, std::int64_t count, CoMoments& m) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Eigen::VectorXd x(width.size());
        Eigen::VectorXd y(1);
        for (std::int64_t s = 0; s < count; ++s) {
            for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = region.lower[i] + width[i] * unif(rng);
            y[0] = squared_distance(body, x) <= r2 ? vol : 0.0;
            m.add(y);
        }
    });
    return {mean_estimate(acc, 0, opts, param_id("steiner", "lambda", lambda)), steiner_polynomial(body, lambda)};
}

double beta_integral_exact(const Body& body, double lambda) {
    require_positive(lambda);
    const auto v = sequence_of(body);
    const int n = v.dim();
    const auto ball = ball_sequence(n, 1.0);
    double acc = 0.0;
    for (int j = 0; j <= n; ++j) acc += std::pow(lambda, j) * v[j] / ball[j];
    return kappa(n) * std::pow(lambda, -n) * acc;
}

BetaCheck beta_integral_check(const Body& body, double lambda, const McOptions& opts) {
    require_positive(lambda);
    validate(opts);
    const auto ball = enclosing_ball(body);
    const auto n = ball.center.size();
    const double dn = static_cast<double>(n);
    const double scale = opts.proposal_sigma ? *opts.proposal_sigma : ball.radius + 1.0 / lambda;
    const double log_norm = -log_kappa(static_cast<int>(n)) - dn * std::log(scale);
    auto acc = run_chunks(opts, 1, [&](Engine& rng, std::int64_t count, CoMoments& m) {
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Eigen::VectorXd dir(n);
        Eigen::VectorXd y(1);
        for (std::int64_t s = 0; s < count; ++s) {
            for (Eigen::Index i = 0; i < n; ++i) dir[i] = normal(rng);
            dir.normalize();
            // Radius / scale is beta-prime(n, 1): CDF (rho / (1 + rho))^n.
            const double root = std::pow(unif(rng), 1.0 / dn);
            const double rho = root / (1.0 - root);
            const Eigen::VectorXd x = ball.center + scale * rho * dir;
            const double log_q = log_norm - (dn + 1.0) * std::log1p(rho);
            const double log_f = -(dn + 1.0) * std::log1p(lambda * distance(body, x));
            y[0] = std::exp(log_f - log_q);
            m.add(y);
        }
    });
    return {mean_estimate(acc, 0, opts, param_id("beta", "lambda", lambda)), beta_integral_exact(body, lambda)};
}

}  // namespace ivlab
