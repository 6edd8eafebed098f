#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ivlab/corpus.hpp"
#include "ivlab/errors.hpp"
#include "ivlab/parse.hpp"
#include "ivlab/stats.hpp"

using namespace ivlab;

namespace {

constexpr double pi = std::numbers::pi;

IVSequence seq(const char* text) { return sequence_of(parse_body(text)); }

bool failed_at(const std::vector<Check>& checks, const std::string& id) {
    for (const auto& c : checks)
        if (c.id == id) return !c.pass;
    return false;
}

}  // namespace

TEST_CASE("wills functional") {
    CHECK(wills(seq("box:1,2,3")) == 24.0);
    CHECK(wills(seq("point:3")) == 1.0);
    for (int n = 1; n <= 8; ++n)
        for (double s : {0.1, 0.5, 1.0, 2.0, 10.0})
            CHECK(wills(scale_sequence(seq(("cube:" + std::to_string(n)).c_str()), s)) ==
                  doctest::Approx(std::pow(1 + s, n)).epsilon(1e-13));
    CHECK(log_wills(seq("box:1,2,3")) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
}

TEST_CASE("normalization") {
    const auto d = normalize(seq("box:1,2,3"));
    const std::vector<double> want{1.0 / 24, 6.0 / 24, 11.0 / 24, 6.0 / 24};
    for (int j = 0; j <= 3; ++j) CHECK(d.probs[static_cast<std::size_t>(j)] == doctest::Approx(want[j]).epsilon(1e-15));
    CHECK(d.mean == doctest::Approx(23.0 / 12).epsilon(1e-15));

    const auto p = normalize(seq("point:4"));
    CHECK(p.probs == std::vector<double>{1, 0, 0, 0, 0});
    CHECK(p.entropy == 0.0);
    CHECK(p.variance == 0.0);

    // W overflows while every entry is finite: the sum alone moves to log space.
    const auto wide = normalize(IVSequence(std::vector<double>{1.0, 1e308, 1e308}));
    CHECK(wide.probs[1] == doctest::Approx(0.5).epsilon(1e-13));
    // Entries themselves overflow: only the log-domain path works.
    CHECK_THROWS_AS(normalize(seq("cube:400,10")), InputError);
    const auto huge = normalize_log(log_sequence_of(parse_body("cube:400,10")));
    CHECK(huge.mean == doctest::Approx(400 * 10.0 / 11).epsilon(1e-12));
    CHECK(huge.variance == doctest::Approx(400 * 10.0 / 121).epsilon(1e-10));
}

TEST_CASE("central intrinsic volume, variance, entropy") {
    CHECK(central_iv(seq("box:1,2,3")) == doctest::Approx(23.0 / 12).epsilon(1e-15));
    CHECK(central_iv_box(std::vector<double>{1, 2, 3}) == doctest::Approx(23.0 / 12).epsilon(1e-15));
    for (int n = 1; n <= 10; ++n)
        for (double s : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            const auto a = scale_sequence(box_sequence(std::vector<double>(static_cast<std::size_t>(n), 1.0)), s);
            CHECK(central_iv(a) == doctest::Approx(n * s / (1 + s)).epsilon(1e-13));
            CHECK(variance(a) == doctest::Approx(n * s / ((1 + s) * (1 + s))).epsilon(1e-11));
        }
    CHECK(intrinsic_entropy(seq("cube:1")) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(intrinsic_entropy(seq("point:5")) == 0.0);
    CHECK(variance(seq("cube:4")) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("central intrinsic volume is additive over products") {
    const char* parts[] = {"box:1,2", "ball:2,1", "ball:3,0.5", "cube:3,2", "point:1"};
    for (const char* a : parts)
        for (const char* b : parts) {
            const auto pa = seq(a), pb = seq(b);
            CHECK(central_iv(product_sequence(pa, pb)) ==
                  doctest::Approx(central_iv(pa) + central_iv(pb)).epsilon(1e-12));
        }
}

TEST_CASE("large sets: delta / n increases toward 1") {
    double prev = 0.0;
    for (double s : {0.5, 1.0, 4.0, 16.0, 64.0, 256.0}) {
        const double frac = central_iv(scale_sequence(seq("cube:5"), s)) / 5.0;
        CHECK(frac > prev);
        prev = frac;
    }
    CHECK(prev > 0.99);
    prev = 0.0;
    for (double r : {0.5, 1.0, 4.0, 16.0, 64.0}) {
        const double frac = central_iv(ball_sequence(4, r)) / 4.0;
        CHECK(frac > prev);
        CHECK(frac < 1.0);
        prev = frac;
    }
    CHECK(prev > 0.95);
}

TEST_CASE("ULC check") {
    CHECK(all_pass(ulc_check(seq("cube:4"))));
    const auto box = ulc_check(seq("box:1,2,3"));
    CHECK(all_pass(box));
    for (const auto& c : box)
        if (c.id == "ulc[2]") {
            CHECK(c.lhs == 242.0);
            CHECK(c.rhs == 108.0);
        }
    const auto bad = ulc_check(IVSequence({1, 1, 10}));
    CHECK(failed_at(bad, "ulc[1]"));
    CHECK_FALSE(all_pass(bad));
    // Binomials hit equality: the check must not be tripped by rounding.
    for (int n = 2; n <= 40; ++n) CHECK(all_pass(ulc_check(box_sequence(std::vector<double>(static_cast<std::size_t>(n), 1.0)))));
}

TEST_CASE("Chevet-McMullen") {
    const auto box = chevet_mcmullen_check(seq("box:1,2,3"));
    CHECK(all_pass(box));
    for (const auto& c : box)
        if (c.id == "chevet_mcmullen[2]") {
            CHECK(c.lhs == 11.0);
            CHECK(c.rhs == doctest::Approx(18.0).epsilon(1e-15));
        }
    const auto pt = chevet_mcmullen_check(seq("point:2"));
    CHECK(all_pass(pt));
    CHECK(all_pass(chevet_mcmullen_check(seq("ball:2,1"))));
    CHECK(seq("ball:2,1")[2] <= pi * pi / 2);
    CHECK_FALSE(all_pass(chevet_mcmullen_check(IVSequence({1, 1, 10}))));
}

TEST_CASE("quermassintegrals") {
    for (const char* t : {"box:1,2,3", "ball:4,1", "product(box:1,2;ball:2,1)"}) {
        const auto a = seq(t);
        const auto w = quermassintegrals(a);
        const int n = a.dim();
        CHECK(w[0] == doctest::Approx(a[n]).epsilon(1e-14));
        CHECK(w[static_cast<std::size_t>(n)] == doctest::Approx(kappa(n)).epsilon(1e-14));
        CHECK(all_pass(quermass_log_concavity_check(a)));
    }
    CHECK(quermassintegrals(seq("cube:2"))[1] == doctest::Approx(2.0).epsilon(1e-15));
    // For a ball every quermassintegral is kappa_n r^{n-j}.
    const auto w = quermassintegrals(ball_sequence(3, 2.0));
    for (int j = 0; j <= 3; ++j) CHECK(w[static_cast<std::size_t>(j)] == doctest::Approx(kappa(3) * std::pow(2.0, 3 - j)).epsilon(1e-13));
}

TEST_CASE("generating function") {
    CHECK(gf_eval(seq("box:1,2,3"), 1.0) == 24.0);
    for (double s : {0.5, 2.0, 7.0}) CHECK(gf_eval(seq("cube:4"), s) == doctest::Approx(std::pow(1 + s, 4)).epsilon(1e-14));
    CHECK(gf_log_derivative_at_1(seq("box:1,2,3")) == doctest::Approx(23.0 / 12).epsilon(1e-15));
    CHECK_THROWS(gf_eval(seq("cube:2"), 0.0));
    for (const auto& e : builtin_corpus()) {
        const auto a = sequence_of(e.body);
        for (double l : {0.1, 0.5, 1.0, 2.0, 10.0})
            CHECK(gf_eval(a, l) == doctest::Approx(wills(scale_sequence(a, l))).epsilon(1e-12));
        CHECK(gf_log_derivative_at_1(a) == doctest::Approx(central_iv(a)).epsilon(1e-12));
    }
}

TEST_CASE("corpus-wide distribution invariants") {
    for (const auto& e : builtin_corpus()) {
        INFO(e.text);
        const auto a = sequence_of(e.body);
        const auto d = normalize(a);
        double total = 0.0;
        for (double p : d.probs) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
        CHECK(a[0] == 1.0);
        CHECK(d.mean >= 0.0);
        CHECK(d.mean < d.n);
        CHECK(d.variance >= 0.0);
        CHECK(d.entropy >= 0.0);
        for (int j = intrinsic_dim(e.body) + 1; j <= a.dim(); ++j) CHECK(a[j] == 0.0);
        CHECK(all_pass(ulc_check(a)));
        CHECK(all_pass(chevet_mcmullen_check(a)));
        CHECK(all_pass(quermass_log_concavity_check(a)));
    }
}
