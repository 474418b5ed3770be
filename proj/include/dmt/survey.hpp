#pragma once

// Desk-scale equidistribution survey: exhaustive (or sampled) enumeration of
// elliptic curves y^2 = x^3 + Ax + B over F_q, Frobenius classes on the
// etale p^n-torsion via unit roots, frequency reports against the predicted
// 1/#Z(alpha) = 1/(p^n - p^(n-1)), and the O(1/sqrt(q)) decay fit.
// Genus-2 utilities: Cartier-Manin p-rank and the unit-root factor of the
// Weil polynomial.

#include <string>
#include <vector>

#include "dmt/scalar.hpp"

namespace dmt {

struct SurveyConfig {
    u64 p = 3;                 // prime >= 3 (p = 2 unsupported: short Weierstrass form)
    std::vector<u64> degrees;  // field degrees e, fields F_{p^e}
    u64 n = 1;                 // torsion level, n <= 3
    bool sampled = false;      // exhaustive by default
    u64 sample_count = 0;      // draws per field in sampled mode
    u64 seed = 0;              // sampling seed (counter-based generator)
    u64 threads = 1;
};

struct FrequencyReport {
    u64 q = 0, n = 1;
    std::vector<u64> classes;  // residues of (Z/p^n)^x, increasing
    std::vector<u64> counts;   // observed ordinary counts per class
    u64 total_ordinary = 0;
    u64 total_supersingular = 0;
    u64 total_curves = 0;  // nonsingular (A,B) pairs seen
    double predicted = 0;  // 1/(p^n - p^(n-1))
    double max_abs_deviation = 0;
    double chi_square = 0;
};

// Exact #E(F_q) for y^2 = x^3 + Ax + B, including the point at infinity,
// via the quadratic-character sum.  Throws on singular curves.
u64 point_count(const Ring& K, const Elem& A, const Elem& B);

// Unit-root Frobenius class of an ordinary curve (p does not divide a) on
// the rank-1 etale p^n-torsion.
u64 frobenius_class(i64 a, u64 q, u64 p, u64 n);

// One report per field degree; deterministic and thread-count independent.
// Exhaustive mode requires q <= 2000.
std::vector<FrequencyReport> run_survey(const SurveyConfig& cfg);

// Least-squares fit of log(max_abs_deviation) against log q; returns
// (slope, intercept).  Deviations are floored at 1/(2 * total_ordinary).
std::pair<double, double> decay_fit(const std::vector<FrequencyReport>& reports);

// ---- genus 2 (y^2 = f(x), deg f in {5, 6}, squarefree) ----

// p-rank in {0,1,2} via the stable rank of the Cartier-Manin semilinear
// iterate.  Requires p >= 3 and q <= 49.
u64 genus2_prank(const Ring& K, const std::vector<Elem>& f);

// Monic unit-root factor of the degree-4 Weil polynomial, coefficients
// mod p^n (low-to-high, length = p-rank + 1).  Requires p-rank >= 1.
std::vector<u64> genus2_frobenius_charpoly(const Ring& K, const std::vector<Elem>& f, u64 n);

// #C(F_q) for the smooth projective model of y^2 = f(x).
u64 genus2_point_count(const Ring& K, const std::vector<Elem>& f);

// CSV emitters.
std::string report_csv(const FrequencyReport& r);
std::string summary_csv(const std::vector<FrequencyReport>& reports, double slope,
                        double intercept);
std::string plot_data(const std::vector<FrequencyReport>& reports);

}  // namespace dmt
