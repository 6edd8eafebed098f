#include "ivlab/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ivlab/errors.hpp"

namespace ivlab {

namespace {

Check le_check(std::string id, double lhs, double rhs, double slack) {
    return Check{std::move(id), lhs <= rhs + slack, lhs, rhs};
}

}  // namespace

double wills(const IVSequence& a) {
    double w = 0.0;
    for (double v : a.values()) w += v;
    return w;
}

double log_wills(const IVSequence& a) {
    const double w = wills(a);
    if (std::isfinite(w)) return std::log(w);
    std::vector<double> logs;
    for (double v : a.values()) logs.push_back(std::log(v));
    return log_sum_exp(logs);
}

IVDistribution distribution_from_probs(std::vector<double> probs) {
    IVDistribution d;
    d.n = static_cast<int>(probs.size()) - 1;
    double mean = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) mean += static_cast<double>(j) * probs[j];
    double var = 0.0;
    double ent = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double dev = static_cast<double>(j) - mean;
        var += dev * dev * probs[j];
        if (probs[j] > 0.0) ent -= probs[j] * std::log(probs[j]);
    }
    d.probs = std::move(probs);
    d.mean = mean;
    d.variance = var;
    d.entropy = ent > 0.0 ? ent : 0.0;
    return d;
}

IVDistribution normalize(const IVSequence& a) {
    const double w = wills(a);
    if (!std::isfinite(w)) {
        std::vector<double> logs;
        for (double v : a.values()) {
            if (!std::isfinite(v)) throw InputError("sequence overflowed; normalize log V_j with normalize_log instead");
            logs.push_back(std::log(v));
        }
        return normalize_log(logs);
    }
    std::vector<double> p(a.values().begin(), a.values().end());
    for (double& x : p) x /= w;
    return distribution_from_probs(std::move(p));
}

IVDistribution normalize_log(std::span<const double> log_values) {
    if (log_values.empty()) throw InputError("empty sequence");
    const double lw = log_sum_exp(log_values);
    std::vector<double> p(log_values.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::exp(log_values[j] - lw);
    return distribution_from_probs(std::move(p));
}

double central_iv(const IVSequence& a) { return normalize(a).mean; }

double central_iv_box(std::span<const double> lengths) {
    double d = 0.0;
    for (double s : lengths) d += s / (1.0 + s);
    return d;
}

double variance(const IVSequence& a) { return normalize(a).variance; }

double intrinsic_entropy(const IVSequence& a) { return normalize(a).entropy; }

std::vector<Check> ulc_check(const IVSequence& a, double rel_tol) {
    if (!(rel_tol >= 0.0)) throw InputError("tolerance must be nonnegative");
    std::vector<Check> out;
    for (int j = 1; j <= a.dim() - 1; ++j) {
        const double lhs = j * a[j] * a[j];
        const double rhs = (j + 1) * a[j + 1] * a[j - 1];
        const double slack = rel_tol * std::max(1.0, lhs);
        out.push_back(Check{"ulc[" + std::to_string(j) + "]", lhs >= rhs - slack, lhs, rhs});
    }
    return out;
}

std::vector<Check> chevet_mcmullen_check(const IVSequence& a, double rel_tol) {
    std::vector<Check> out;
    const double v1 = a.dim() >= 1 ? a[1] : 0.0;
    for (int j = 1; j <= a.dim(); ++j) {
        // V_1^j / j! in log space; V_1 = 0 forces every V_j = 0.
        const double rhs = v1 > 0.0 ? std::exp(j * std::log(v1) - std::lgamma(j + 1.0)) : 0.0;
        out.push_back(le_check("chevet_mcmullen[" + std::to_string(j) + "]", a[j], rhs,
                               rel_tol * std::max(1.0, rhs)));
    }
    const double w = wills(a);
    const double bound = std::exp(v1);
    out.push_back(le_check("wills_le_exp_v1", w, bound, rel_tol * std::max(1.0, bound)));
    return out;
}

std::vector<double> quermassintegrals(const IVSequence& a) {
    const int n = a.dim();
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) w[static_cast<std::size_t>(j)] = kappa(j) * a[n - j] / binomial(n, j);
    return w;
}

std::vector<Check> quermass_log_concavity_check(const IVSequence& a, double rel_tol) {
    const auto w = quermassintegrals(a);
    std::vector<Check> out;
    for (std::size_t j = 1; j + 1 < w.size(); ++j) {
        const double lhs = w[j] * w[j];
        const double rhs = w[j + 1] * w[j - 1];
        out.push_back(Check{"quermass_lc[" + std::to_string(j) + "]",
                            lhs >= rhs - rel_tol * std::max(1.0, lhs), lhs, rhs});
    }
    return out;
}

double gf_eval(const IVSequence& a, double lambda) {
    if (!(lambda > 0.0)) throw InputError("generating function argument must be positive");
    double acc = 0.0;
    for (int j = a.dim(); j >= 0; --j) acc = acc * lambda + a[j];
    return acc;
}

double gf_log_derivative_at_1(const IVSequence& a) {
    double g = 0.0;
    double dg = 0.0;
    for (int j = 0; j <= a.dim(); ++j) {
        g += a[j];
        dg += j * a[j];
    }
    return dg / g;
}

}  // namespace ivlab
