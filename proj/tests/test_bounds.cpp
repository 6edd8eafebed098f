#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ivlab/bounds.hpp"
#include "ivlab/corpus.hpp"
#include "ivlab/errors.hpp"
#include "ivlab/parse.hpp"
#include "ivlab/stats.hpp"

using namespace ivlab;

namespace {

IVSequence seq(const char* text) { return sequence_of(parse_body(text)); }

// Tail masses straight from binomial coefficients, for the unit cube.
double cube_two_sided(int n, double t) {
    double m = 0.0;
    for (int j = 0; j <= n; ++j)
        if (std::abs(j - n / 2.0) >= t) m += binomial(n, j) / std::pow(2.0, n);
    return m;
}

}  // namespace

TEST_CASE("scalar functions") {
    CHECK(psi(0) == 0.0);
    CHECK(psi_star(0) == 0.0);
    CHECK(phi(0) == 0.0);
    CHECK(psi_star(1) == doctest::Approx((2 * std::log(2.0) - 1) / 2).epsilon(1e-15));
    CHECK(psi_star(1) == doctest::Approx(0.1931).epsilon(1e-3));
    CHECK(phi(0.5) == doctest::Approx(-0.5 + std::log(2.0)).epsilon(1e-15));
    CHECK(psi(1) == doctest::Approx((std::exp(2.0) - 3) / 2).epsilon(1e-15));
    // Small arguments keep full relative accuracy.
    CHECK(psi(1e-8) == doctest::Approx(1e-16).epsilon(1e-6));
    CHECK(psi_star(1e-8) == doctest::Approx(0.25e-16).epsilon(1e-6));
    CHECK(psi_star(-0.999999) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK_THROWS_AS(psi_star(-1), InputError);
    CHECK_THROWS_AS(psi_star(-1.5), InputError);
    CHECK_THROWS_AS(phi(1.0), InputError);
}

TEST_CASE("psi_star dominates the Bernstein quadratic") {
    for (int k = -99; k <= 1000; ++k) {
        const double s = k / 100.0;
        INFO("s = " << s);
        CHECK(psi_star(s) >= (s * s / 4) / (1 + s / 3));
    }
}

TEST_CASE("series and closed forms agree across the switch") {
    for (double x : {-0.0999999, -0.05, -1e-3, 1e-3, 0.05, 0.0999999}) {
        INFO("x = " << x);
        CHECK(psi(x) == doctest::Approx((std::expm1(2 * x) - 2 * x) / 2).epsilon(1e-9));
        CHECK(psi_star(x) == doctest::Approx(((1 + x) * std::log1p(x) - x) / 2).epsilon(1e-9));
        CHECK(phi(x) == doctest::Approx(-x - std::log1p(-x)).epsilon(1e-9));
    }
    // Continuity at the cutoff to near machine precision.
    for (double c : {-0.1, 0.1}) {
        const double below = std::nextafter(c, 0.0);
        CHECK(psi(below) == doctest::Approx(psi(c)).epsilon(1e-14));
        CHECK(psi_star(below) == doctest::Approx(psi_star(c)).epsilon(1e-14));
        CHECK(phi(below) == doctest::Approx(phi(c)).epsilon(1e-14));
    }
    CHECK(psi_star(1e-20) == doctest::Approx(0.25e-40).epsilon(1e-14));
    CHECK(phi(1e-20) == doctest::Approx(0.5e-40).epsilon(1e-14));
    CHECK(psi(1e-20) == doctest::Approx(1e-40).epsilon(1e-14));
}

TEST_CASE("psi_star is the Legendre conjugate of psi") {
    // sup_theta (s theta - psi(theta)) is attained at theta = log(1+s)/2.
    for (double s : {-0.9, -0.5, 0.0, 0.3, 1.0, 4.0}) {
        const double theta = std::log1p(s) / 2;
        CHECK(s * theta - psi(theta) == doctest::Approx(psi_star(s)).epsilon(1e-12));
        for (double d : {-0.1, 0.1}) CHECK(s * (theta + d) - psi(theta + d) <= psi_star(s) + 1e-15);
    }
}

TEST_CASE("h-moments from sequences") {
    for (int n : {1, 3, 5}) {
        const auto s = h_moments_from_sequence(embed_sequence(IVSequence{}, n));
        CHECK(s.ez == 0.0);
        CHECK(s.eh == doctest::Approx(n / 2.0).epsilon(1e-15));
        // H is Gamma(n/2, 1) for a point: variance n/2.
        CHECK(s.var_h() == doctest::Approx(n / 2.0).epsilon(1e-14));
    }
    CHECK(h_moments_from_sequence(seq("cube:2")).eh == doctest::Approx(0.5).epsilon(1e-15));
    const auto b = h_moments_from_sequence(seq("box:1,2,3"));
    CHECK(b.eh == doctest::Approx(13.0 / 24).epsilon(1e-15));
    CHECK(b.eh2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("variance bounds") {
    const auto c = h_moments_from_sequence(seq("cube:4"));
    CHECK(c.var_z == doctest::Approx(1.0).epsilon(1e-15));
    const auto vb = variance_bound(c);
    CHECK(vb.two_n_plus == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(vb.four_n == 16.0);
    CHECK(vb.two_n_plus / c.var_z == doctest::Approx(12.0).epsilon(1e-14));

    const auto p = h_moments_from_sequence(seq("point:3"));
    CHECK(p.var_z == 0.0);
    CHECK(variance_bound_sharp(p) == 6.0);

    // Large cubes: the sharp bound and the variance both vanish.
    const auto big = h_moments_from_sequence(scale_sequence(seq("cube:3"), 1e6));
    CHECK(variance_bound_sharp(big) < 1e-5);
    CHECK(big.var_z < 1e-5);
    CHECK(big.var_z <= variance_bound_sharp(big));
}

TEST_CASE("Bennett and Bernstein examples") {
    CHECK(bennett_tail(4, 2, 0, TailSide::upper) == 1.0);
    CHECK(bennett_tail(4, 2, 0, TailSide::lower) == 1.0);
    CHECK(bennett_tail(4, 2, 6, TailSide::upper) == doctest::Approx(std::exp(-6 * psi_star(1))).epsilon(1e-15));
    CHECK(bennett_tail(4, 2, 6, TailSide::upper) == doctest::Approx(0.3138).epsilon(1e-3));
    CHECK(bernstein_tail(4, 2, 6, TailSide::upper) == doctest::Approx(std::exp(-9.0 / 8)).epsilon(1e-15));
    CHECK(bernstein_tail(4, 2, 6, TailSide::upper) == doctest::Approx(0.3247).epsilon(1e-3));
    CHECK(bernstein_tail(4, 2, 6, TailSide::upper) >= bennett_tail(4, 2, 6, TailSide::upper));

    CHECK_THROWS_AS(bennett_tail(4, 2, 6, TailSide::lower), InputError);
    CHECK_THROWS_AS(bernstein_tail(4, 2, 6, TailSide::lower), InputError);
    CHECK_THROWS_AS(bennett_tail(4, 2, -1, TailSide::upper), InputError);

    double prev = 2.0;
    for (double t = 0; t <= 20; t += 0.25) {
        const double b = bennett_tail(10, 4, t, TailSide::upper);
        CHECK(b <= prev);
        prev = b;
    }
}

TEST_CASE("Bennett is dominated by Bernstein, and two-sided Bernstein by the headline bound") {
    for (int n = 1; n <= 30; ++n)
        for (double frac : {0.0, 0.1, 0.5, 0.9, 0.999}) {
            const double ez = frac * n;
            for (double t = 0; t <= n; t += 0.25) {
                CHECK(bennett_tail(n, ez, t, TailSide::upper) <= bernstein_tail(n, ez, t, TailSide::upper) * (1 + 1e-15));
                if (t < n + ez)
                    CHECK(bennett_tail(n, ez, t, TailSide::lower) <= bernstein_tail(n, ez, t, TailSide::lower) * (1 + 1e-15));
                CHECK(bernstein_two_sided(n, ez, t) <= headline_tail(n, t) * (1 + 1e-15));
            }
        }
}

TEST_CASE("headline bound") {
    CHECK(headline_tail(7, 0) == 2.0);
    CHECK(headline_tail(100, 10) == doctest::Approx(2 * std::exp(-3.0 / 28)).epsilon(1e-15));
    CHECK(headline_tail(100, 10) == doctest::Approx(1.79).epsilon(1e-2));
    CHECK_THROWS_AS(headline_tail(5, 5.5), InputError);
    CHECK_THROWS_AS(headline_tail(5, -1), InputError);
}

TEST_CASE("moment generating function") {
    const auto c = seq("cube:2");
    CHECK(mgf_lhs(c, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mgf_bound(2, 1, 0) == 1.0);
    CHECK(mgf_lhs(c, 1) == doctest::Approx(std::exp(-1.0) * (1 + 2 * std::exp(1.0) + std::exp(2.0)) / 4).epsilon(1e-14));
    CHECK(mgf_lhs(c, 1) == doctest::Approx(std::cosh(0.5) * std::cosh(0.5)).epsilon(1e-14));
    CHECK(log_mgf_lhs(c, 1) == doctest::Approx(std::log(mgf_lhs(c, 1))).epsilon(1e-14));
    CHECK(log_mgf_bound(2, 1, 1) == doctest::Approx(psi(1) * 3).epsilon(1e-15));
    for (const auto& e : builtin_corpus()) {
        const auto a = sequence_of(e.body);
        const auto st = h_moments_from_sequence(a);
        for (double th : default_theta_grid()) CHECK(log_mgf_lhs(a, th) <= log_mgf_bound(st.n, st.ez, th) + 1e-12);
    }
}

TEST_CASE("tail report") {
    const auto cube = tail_report(seq("cube:10"), {3.0});
    REQUIRE(cube.rows.size() == 1);
    const auto& r = cube.rows[0];
    CHECK(r.two_sided_mass == doctest::Approx(2.0 * (1 + 10 + 45) / 1024).epsilon(1e-14));
    CHECK(r.two_sided_mass == doctest::Approx(0.109375).epsilon(1e-14));
    CHECK(r.upper_mass == doctest::Approx(56.0 / 1024).epsilon(1e-14));
    CHECK(r.bennett_upper + *r.bennett_lower > r.two_sided_mass);
    CHECK(all_pass(cube.checks));
    for (double t = 0.5; t <= 10; t += 0.5)
        CHECK(tail_report(seq("cube:10"), {t}).rows[0].two_sided_mass == doctest::Approx(cube_two_sided(10, t)).epsilon(1e-14));

    const auto pt = tail_report(seq("point:4"), default_tail_grid(4));
    for (const auto& row : pt.rows) {
        CHECK(row.upper_mass == 0.0);
        // EZ = 0: the lower tail is empty and lies outside the Bennett domain from t = n on.
        CHECK(row.lower_mass == 0.0);
    }
    CHECK(all_pass(pt.checks));

    const auto box = tail_report(seq("box:1,2,3"), {1.0});
    // Z - 23/12 >= 1 only at Z = 3; Z - 23/12 <= -1 at Z = 0.
    CHECK(box.rows[0].upper_mass == doctest::Approx(6.0 / 24).epsilon(1e-15));
    CHECK(box.rows[0].lower_mass == doctest::Approx(1.0 / 24).epsilon(1e-15));
    CHECK(all_pass(box.checks));

    // Grid points outside the headline range get no headline value.
    const auto wide = tail_report(seq("cube:2"), {3.0});
    CHECK_FALSE(wide.rows[0].headline.has_value());
    CHECK_THROWS_AS(tail_report(seq("cube:2"), {-1.0}), InputError);

    auto grid = default_tail_grid(3);
    CHECK(grid == std::vector<double>{0.5, 1, 1.5, 2, 2.5, 3});
}

TEST_CASE("corpus-wide concentration checks") {
    for (const auto& e : builtin_corpus()) {
        INFO(e.text);
        const auto a = sequence_of(e.body);
        const auto st = h_moments_from_sequence(a);
        CHECK(st.ez == doctest::Approx(st.n - 2 * st.eh).epsilon(1e-12));
        CHECK(st.var_z == doctest::Approx(4 * (st.var_h() - st.eh)).epsilon(1e-12).scale(1.0));
        CHECK(st.var_h() <= st.n);
        CHECK(st.var_z <= variance_bound(st).two_n_plus);
        CHECK(variance_bound(st).two_n_plus <= variance_bound(st).four_n);
        CHECK(st.var_z <= variance_bound_sharp(st) + 1e-12);
        CHECK(all_pass(concentration_checks(a, default_theta_grid())));
        CHECK(all_pass(tail_report(a, default_tail_grid(a.dim())).checks));
    }
}
