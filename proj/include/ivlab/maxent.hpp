#pragma once

// Binomial reference laws and the maximum-entropy comparison against
// scaled cubes.

#include <vector>

#include "ivlab/check.hpp"
#include "ivlab/sequence.hpp"

namespace ivlab {

struct BinomialDist {
    int n = 0;
    double p = 0.0;
    std::vector<double> probs;
};

BinomialDist binomial_dist(int n, double p);

// Side length s of the cube s Q_n whose central intrinsic volume is d: d / (n - d).
double s_for_target(double d, int n);

// Shannon entropy (natural log) of Bin(n, p) by direct summation.
double binomial_entropy(int n, double p);

struct MaxentReport {
    int n = 0;
    double delta = 0.0;
    double p = 0.0;  // delta / n
    double entropy = 0.0;
    double matched_cube_entropy = 0.0;  // entropy of Bin(n, delta/n)
    double unit_cube_entropy = 0.0;     // entropy of Bin(n, 1/2)
    double gap_to_matched = 0.0;        // matched - entropy
    double gap_to_unit = 0.0;           // unit - entropy
    // Whether V_j / C(n, j) is log-concave. The binomial maximum-entropy
    // property is known under this condition; the index-only ULC condition
    // checked below is weaker, and balls satisfy it while exceeding the
    // matched binomial entropy. Reported, not checked.
    bool ulc_order_n = false;
    std::vector<Check> checks;
};

inline constexpr double kEntropySlack = 1e-12;

MaxentReport maxent_check(const IVSequence& a);

// a_j^2 / C(n,j)^2 >= a_{j+1} a_{j-1} / (C(n,j+1) C(n,j-1)) for j = 1..n-1, with relative slack.
bool is_ulc_of_order_n(const IVSequence& a, double rel_tol = 1e-9);

}  // namespace ivlab
