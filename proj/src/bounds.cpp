#include "ivlab/bounds.hpp"

#include <cmath>
#include <string>

#include "ivlab/errors.hpp"
#include "ivlab/stats.hpp"

namespace ivlab {

namespace {

std::string fmt_arg(const char* name, double v) { return std::string(name) + "=" + std::to_string(v); }

Check le(std::string id, double lhs, double rhs, double rel = 1e-12) {
    return Check{std::move(id), lhs <= rhs + rel * std::max(1.0, std::abs(rhs)), lhs, rhs};
}

Check eq(std::string id, double lhs, double rhs, double rel = 1e-12) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return Check{std::move(id), std::abs(lhs - rhs) <= rel * scale, lhs, rhs};
}

void require_t(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("tail parameter t must be finite and >= 0");
}

double lower_arg(int n, double ez, double t) {
    const double s = -t / (n + ez);
    if (s <= -1.0)
        throw InputError("lower tail needs t < n + EZ (" + fmt_arg("t", t) + ", " + fmt_arg("n+EZ", n + ez) + ")");
    return s;
}

// The closed forms below cancel to second order at the origin; near zero
// their Taylor series are summed instead. |x| < 0.1 makes 30 terms ample.
constexpr double kSeriesCutoff = 0.1;

template <class Term>
double series_from_2(double x, Term term) {
    double sum = 0.0, power = x * x;
    for (int k = 2; k < 32; ++k) {
        sum += term(k) * power;
        power *= x;
    }
    return sum;
}

}  // namespace

double psi(double theta) {
    if (std::abs(theta) < kSeriesCutoff) {
        // sum (2 theta)^k / (2 k!)
        double fact = 2.0;
        return series_from_2(2.0 * theta, [&](int k) {
            if (k > 2) fact *= k;
            return 1.0 / (2.0 * fact);
        });
    }
    return (std::expm1(2.0 * theta) - 2.0 * theta) / 2.0;
}

double psi_star(double s) {
    if (!(s > -1.0)) throw InputError("psi_star needs s > -1");
    // sum (-1)^k s^k / (2 k (k-1))
    if (std::abs(s) < kSeriesCutoff)
        return series_from_2(s, [](int k) { return (k % 2 ? -1.0 : 1.0) / (2.0 * k * (k - 1)); });
    return ((1.0 + s) * std::log1p(s) - s) / 2.0;
}

double phi(double beta) {
    if (!(beta < 1.0)) throw InputError("phi needs beta < 1");
    // sum beta^k / k
    if (std::abs(beta) < kSeriesCutoff) return series_from_2(beta, [](int k) { return 1.0 / k; });
    return -beta - std::log1p(-beta);
}

ConcentrationStats h_moments_from_sequence(const IVSequence& a) {
    const auto dist = normalize(a);
    const int n = a.dim();
    double e_gap = 0.0;   // E(n - Z)
    double e_gap2 = 0.0;  // E(n - Z)^2
    for (int j = 0; j <= n; ++j) {
        const double gap = n - j;
        e_gap += gap * dist.probs[static_cast<std::size_t>(j)];
        e_gap2 += gap * gap * dist.probs[static_cast<std::size_t>(j)];
    }
    ConcentrationStats s;
    s.n = n;
    s.ez = dist.mean;
    s.var_z = dist.variance;
    s.eh = e_gap / 2.0;
    s.eh2 = (e_gap2 + 2.0 * e_gap) / 4.0;
    return s;
}

VarianceBounds variance_bound(const ConcentrationStats& stats) {
    return {2.0 * (stats.n + stats.ez), 4.0 * stats.n};
}

double variance_bound_sharp(const ConcentrationStats& stats) { return 2.0 * (stats.n - stats.ez); }

double bennett_tail(int n, double ez, double t, TailSide side) {
    require_t(t);
    const double m = n + ez;
    const double s = side == TailSide::upper ? t / m : lower_arg(n, ez, t);
    return std::exp(-m * psi_star(s));
}

double bernstein_tail(int n, double ez, double t, TailSide side) {
    require_t(t);
    const double m = n + ez;
    if (side == TailSide::lower) lower_arg(n, ez, t);
    const double denom = side == TailSide::upper ? m + t / 3.0 : m - t / 3.0;
    return std::exp(-(t * t / 4.0) / denom);
}

double bernstein_two_sided(int n, double ez, double t) {
    require_t(t);
    return 2.0 * std::exp(-(t * t / 4.0) / (n + ez + t / 3.0));
}

double headline_tail(int n, double t) {
    require_t(t);
    if (t > n) throw InputError("headline tail bound holds for 0 <= t <= n");
    return 2.0 * std::exp(-3.0 * t * t / (28.0 * n));
}

double log_mgf_lhs(const IVSequence& a, double theta) {
    const auto dist = normalize(a);
    std::vector<double> terms;
    terms.reserve(dist.probs.size());
    for (std::size_t j = 0; j < dist.probs.size(); ++j)
        terms.push_back(std::log(dist.probs[j]) + theta * (static_cast<double>(j) - dist.mean));
    return log_sum_exp(terms);
}

double mgf_lhs(const IVSequence& a, double theta) { return std::exp(log_mgf_lhs(a, theta)); }

double log_mgf_bound(int n, double ez, double theta) { return psi(theta) * (n + ez); }

double mgf_bound(int n, double ez, double theta) { return std::exp(log_mgf_bound(n, ez, theta)); }

std::vector<double> default_tail_grid(int n) {
    std::vector<double> g;
    for (int k = 1; k <= 2 * n; ++k) g.push_back(0.5 * k);
    return g;
}

std::vector<double> default_theta_grid() {
    std::vector<double> g;
    for (int k = -4; k <= 4; ++k) g.push_back(0.5 * k);
    return g;
}

TailReport tail_report(const IVSequence& a, const std::vector<double>& grid) {
    const auto dist = normalize(a);
    TailReport rep;
    rep.n = a.dim();
    rep.ez = dist.mean;
    const int n = rep.n;
    const double ez = rep.ez;
    // Boundary atoms are counted in the event so rounding in EZ can only enlarge a mass.
    const double fuzz = 1e-12 * std::max(1, n);

    for (double t : grid) {
        require_t(t);
        TailRow row;
        row.t = t;
        for (int j = 0; j <= n; ++j) {
            const double p = dist.probs[static_cast<std::size_t>(j)];
            const double dev = j - ez;
            const bool up = dev >= t - fuzz;
            const bool down = -dev >= t - fuzz;
            if (up) row.upper_mass += p;
            if (down) row.lower_mass += p;
            if (up || down) row.two_sided_mass += p;
        }
        row.bennett_upper = bennett_tail(n, ez, t, TailSide::upper);
        row.bernstein_upper = bernstein_tail(n, ez, t, TailSide::upper);
        if (t < n + ez) {
            row.bennett_lower = bennett_tail(n, ez, t, TailSide::lower);
            row.bernstein_lower = bernstein_tail(n, ez, t, TailSide::lower);
        }
        row.bernstein_two_sided = bernstein_two_sided(n, ez, t);
        if (t <= n) row.headline = headline_tail(n, t);

        const std::string at = "[t=" + std::to_string(t) + "]";
        rep.checks.push_back(le("upper_mass_le_bennett" + at, row.upper_mass, row.bennett_upper));
        rep.checks.push_back(le("bennett_le_bernstein_upper" + at, row.bennett_upper, row.bernstein_upper));
        if (row.bennett_lower) {
            rep.checks.push_back(le("lower_mass_le_bennett" + at, row.lower_mass, *row.bennett_lower));
            rep.checks.push_back(
                le("bennett_le_bernstein_lower" + at, *row.bennett_lower, *row.bernstein_lower));
            rep.checks.push_back(le("two_sided_mass_le_bennett_sum" + at, row.two_sided_mass,
                                    row.bennett_upper + *row.bennett_lower));
        } else {
            // t >= n + EZ > EZ, so {Z <= EZ - t} is empty.
            rep.checks.push_back(Check{"lower_mass_zero_outside_domain" + at, row.lower_mass == 0.0,
                                       row.lower_mass, 0.0});
        }
        if (row.headline) {
            rep.checks.push_back(le("two_sided_mass_le_headline" + at, row.two_sided_mass, *row.headline));
            rep.checks.push_back(
                le("bernstein_two_sided_le_headline" + at, row.bernstein_two_sided, *row.headline));
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<Check> concentration_checks(const IVSequence& a, const std::vector<double>& theta_grid) {
    const auto s = h_moments_from_sequence(a);
    const int n = s.n;
    std::vector<Check> out;
    out.push_back(eq("ez_eq_n_minus_2eh", s.ez, n - 2.0 * s.eh));
    out.push_back(eq("varz_eq_4(varh_minus_eh)", s.var_z, 4.0 * (s.var_h() - s.eh)));
    out.push_back(le("eh_nonnegative", 0.0, s.eh, 0.0));
    out.push_back(le("varentropy_le_n", s.var_h(), static_cast<double>(n)));
    const auto vb = variance_bound(s);
    out.push_back(le("varz_le_2(n+ez)", s.var_z, vb.two_n_plus));
    out.push_back(le("2(n+ez)_le_4n", vb.two_n_plus, vb.four_n));
    out.push_back(le("varz_le_2(n-ez)_sharp", s.var_z, variance_bound_sharp(s)));
    for (double theta : theta_grid) {
        out.push_back(le("log_mgf_le_bound[theta=" + std::to_string(theta) + "]", log_mgf_lhs(a, theta),
                         log_mgf_bound(n, s.ez, theta)));
    }
    return out;
}

}  // namespace ivlab
