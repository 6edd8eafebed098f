#include "ivlab/corpus.hpp"

#include <cmath>

#include "ivlab/bounds.hpp"
#include "ivlab/maxent.hpp"
#include "ivlab/parse.hpp"
#include "ivlab/stats.hpp"

namespace ivlab {

std::vector<CorpusEntry> builtin_corpus() {
    std::vector<std::string> texts{"point:3"};
    for (int n = 1; n <= 8; ++n) texts.push_back("cube:" + std::to_string(n));
    for (const char* s : {"0.1", "0.5", "1", "2", "10"}) texts.push_back(std::string("cube:6,") + s);
    texts.push_back("box:1,2,3");
    texts.push_back("box:0.5,0.5,4,4");
    for (int n = 2; n <= 6; ++n)
        for (const char* r : {"0.5", "1", "2"}) texts.push_back("ball:" + std::to_string(n) + "," + r);
    texts.push_back("product(box:1,2;ball:2,1)");
    texts.push_back("embed(cube:3;2)");

    std::vector<CorpusEntry> out;
    out.reserve(texts.size());
    for (auto& t : texts) {
        Body b = parse_body(t);
        out.push_back({std::move(t), std::move(b)});
    }
    return out;
}

std::vector<Check> exact_checks(const IVSequence& a) {
    std::vector<Check> out;
    auto append = [&](std::vector<Check> more) {
        for (auto& c : more) out.push_back(std::move(c));
    };
    const int n = a.dim();
    const auto dist = normalize(a);

    double total = 0.0;
    bool nonneg = true;
    for (double p : dist.probs) {
        total += p;
        nonneg = nonneg && p >= 0.0;
    }
    out.push_back(Check{"probs_sum_to_one", std::abs(total - 1.0) <= 1e-12, total, 1.0});
    out.push_back(Check{"probs_nonnegative", nonneg, 0.0, 0.0});
    out.push_back(Check{"v0_is_one", a[0] == 1.0, a[0], 1.0});
    out.push_back(Check{"delta_in_[0,n)", dist.mean >= 0.0 && dist.mean < n, dist.mean, static_cast<double>(n)});

    const double g1 = gf_log_derivative_at_1(a);
    out.push_back(Check{"gf_log_derivative_eq_delta", std::abs(g1 - dist.mean) <= 1e-12 * std::max(1.0, g1), g1,
                        dist.mean});
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double g = gf_eval(a, lambda);
        const double w = wills(scale_sequence(a, lambda));
        out.push_back(Check{"gf_eq_scaled_wills[lambda=" + std::to_string(lambda) + "]",
                            std::abs(g - w) <= 1e-12 * std::max(1.0, w), g, w});
    }

    append(ulc_check(a));
    append(chevet_mcmullen_check(a));
    append(quermass_log_concavity_check(a));
    append(concentration_checks(a, default_theta_grid()));
    append(tail_report(a, default_tail_grid(n)).checks);
    append(maxent_check(a).checks);
    return out;
}

}  // namespace ivlab
