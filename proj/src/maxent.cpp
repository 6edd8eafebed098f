#include "ivlab/maxent.hpp"

#include <algorithm>
#include <cmath>

#include "ivlab/errors.hpp"
#include "ivlab/stats.hpp"

namespace ivlab {

BinomialDist binomial_dist(int n, double p) {
    if (n < 0) throw InputError("binomial needs n >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("binomial needs p in [0, 1]");
    BinomialDist b{n, p, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0)};
    if (p == 0.0 || p == 1.0) {
        b.probs[p == 0.0 ? 0 : static_cast<std::size_t>(n)] = 1.0;
        return b;
    }
    if (n <= 200) {
        for (int j = 0; j <= n; ++j)
            b.probs[static_cast<std::size_t>(j)] = binomial(n, j) * std::pow(p, j) * std::pow(1.0 - p, n - j);
        return b;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (int j = 0; j <= n; ++j)
        b.probs[static_cast<std::size_t>(j)] = std::exp(log_binomial(n, j) + j * lp + (n - j) * lq);
    return b;
}

double s_for_target(double d, int n) {
    if (n < 1) throw InputError("dimension must be >= 1");
    if (!(d >= 0.0) || !(d < n)) throw InputError("target central intrinsic volume must lie in [0, n)");
    return d / (n - d);
}

double binomial_entropy(int n, double p) {
    const auto b = binomial_dist(n, p);
    double h = 0.0;
    for (double q : b.probs)
        if (q > 0.0) h -= q * std::log(q);
    return h > 0.0 ? h : 0.0;
}

bool is_ulc_of_order_n(const IVSequence& a, double rel_tol) {
    const int n = a.dim();
    for (int j = 1; j < n; ++j) {
        const double c = binomial(n, j);
        const double lhs = a[j] * a[j] / (c * c);
        const double rhs = a[j + 1] * a[j - 1] / (binomial(n, j + 1) * binomial(n, j - 1));
        if (lhs < rhs - rel_tol * std::max(lhs, rhs)) return false;
    }
    return true;
}

MaxentReport maxent_check(const IVSequence& a) {
    const auto dist = normalize(a);
    MaxentReport r;
    r.n = a.dim();
    r.delta = dist.mean;
    r.p = std::clamp(r.delta / r.n, 0.0, 1.0);
    r.entropy = dist.entropy;
    r.matched_cube_entropy = binomial_entropy(r.n, r.p);
    r.unit_cube_entropy = binomial_entropy(r.n, 0.5);
    r.gap_to_matched = r.matched_cube_entropy - r.entropy;
    r.gap_to_unit = r.unit_cube_entropy - r.entropy;
    r.ulc_order_n = is_ulc_of_order_n(a);

    r.checks.push_back(Check{"entropy_le_matched_cube", r.entropy <= r.matched_cube_entropy + kEntropySlack,
                             r.entropy, r.matched_cube_entropy});
    r.checks.push_back(Check{"matched_cube_le_unit_cube",
                             r.matched_cube_entropy <= r.unit_cube_entropy + kEntropySlack,
                             r.matched_cube_entropy, r.unit_cube_entropy});
    r.checks.push_back(Check{"entropy_le_unit_cube", r.entropy <= r.unit_cube_entropy + kEntropySlack, r.entropy,
                             r.unit_cube_entropy});
    for (auto& c : ulc_check(a)) {
        c.id = "maxent_hypothesis." + c.id;
        r.checks.push_back(std::move(c));
    }
    return r;
}

}  // namespace ivlab
