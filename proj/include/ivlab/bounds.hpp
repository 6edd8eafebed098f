#pragma once

// Concentration of the intrinsic-volume random variable Z.
//
// Z is tied to the information content H = pi dist^2(y, K) of the
// log-concave density proportional to exp(-pi dist^2(., K)):
//
//     E Z   = n - 2 E H
//     Var Z = 4 (Var H - E H)
//
// Both moments of H are recovered exactly from the sequence, and the
// Bennett, Bernstein and headline tail bounds are evaluated against exact
// tail masses of the normalized sequence. The tail coordinate t is always
// in index units (a deviation of Z itself).

#include <optional>
#include <vector>

#include "ivlab/check.hpp"
#include "ivlab/sequence.hpp"

namespace ivlab {

enum class TailSide { upper, lower };

struct ConcentrationStats {
    int n = 0;
    double ez = 0.0;
    double var_z = 0.0;
    double eh = 0.0;
    double eh2 = 0.0;

    double var_h() const { return eh2 - eh * eh; }
};

// psi(theta) = (e^{2 theta} - 2 theta - 1) / 2.
double psi(double theta);
// Legendre conjugate of psi: ((1+s) log(1+s) - s) / 2 for s > -1.
double psi_star(double s);
// phi(beta) = -beta - log(1 - beta) for beta < 1.
double phi(double beta);

ConcentrationStats h_moments_from_sequence(const IVSequence& a);

struct VarianceBounds {
    double two_n_plus;  // 2 (n + E Z)
    double four_n;      // 4 n
};

VarianceBounds variance_bound(const ConcentrationStats& stats);
// 2 (n - E Z).
double variance_bound_sharp(const ConcentrationStats& stats);

// exp{-(n + EZ) psi*(+-t / (n + EZ))}. The lower side needs t < n + EZ.
double bennett_tail(int n, double ez, double t, TailSide side);
// exp{-(t^2/4) / (n + EZ +- t/3)}. Same domain as bennett_tail.
double bernstein_tail(int n, double ez, double t, TailSide side);
// 2 exp{-(t^2/4) / (n + EZ + t/3)}, the two sides combined.
double bernstein_two_sided(int n, double ez, double t);
// 2 exp{-3 t^2 / (28 n)} for 0 <= t <= n.
double headline_tail(int n, double t);

// E exp{theta (Z - EZ)} by direct summation over the exact law.
double mgf_lhs(const IVSequence& a, double theta);
double log_mgf_lhs(const IVSequence& a, double theta);
double mgf_bound(int n, double ez, double theta);
double log_mgf_bound(int n, double ez, double theta);

struct TailRow {
    double t = 0.0;
    double upper_mass = 0.0;
    double lower_mass = 0.0;
    double two_sided_mass = 0.0;
    double bennett_upper = 0.0;
    std::optional<double> bennett_lower;  // empty where t >= n + EZ
    double bernstein_upper = 0.0;
    std::optional<double> bernstein_lower;
    double bernstein_two_sided = 0.0;
    std::optional<double> headline;  // empty where t > n, outside the range of the bound
};

struct TailReport {
    int n = 0;
    double ez = 0.0;
    std::vector<TailRow> rows;
    std::vector<Check> checks;
};

// Grid points must be >= 0. Masses use closed events {Z - EZ >= t}.
TailReport tail_report(const IVSequence& a, const std::vector<double>& grid);
// 0.5, 1, ..., n.
std::vector<double> default_tail_grid(int n);

// Identity chain, varentropy, variance bounds and mgf bound over theta_grid.
std::vector<Check> concentration_checks(const IVSequence& a, const std::vector<double>& theta_grid);
// -2, -1.5, ..., 2.
std::vector<double> default_theta_grid();

}  // namespace ivlab
