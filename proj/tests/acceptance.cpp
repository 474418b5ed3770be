// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion is independent; a throw inside one marks it
// failed and the suite continues.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "dmt/endo.hpp"
#include "dmt/group.hpp"
#include "dmt/h11.hpp"
#include "dmt/survey.hpp"

using namespace dmt;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& what, const std::function<void()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string verdict = "PASS", detail;
    try {
        body();
    } catch (const std::exception& e) {
        verdict = "FAIL";
        detail = std::string(" (") + e.what() + ")";
        ++g_failures;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cout << "criterion " << num << " [" << verdict << "] " << what << detail << " [" << ms
              << " ms]\n";
}

void expect(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

// The twist-theory corpus: cyclic, symmetric <= S5, GL_g(Z/p^n) with order
// <= 2000, and the pi0 tables of criterion 1.
std::vector<FiniteGroupTable> twist_corpus() {
    std::vector<FiniteGroupTable> corpus;
    for (u64 k = 1; k <= 12; ++k) corpus.push_back(cyclic_group(k));
    for (u64 k = 2; k <= 5; ++k) corpus.push_back(symmetric_group(k));
    for (u64 p : {2, 3, 5, 7, 11, 13}) corpus.push_back(gl_group(1, p, 1));
    corpus.push_back(gl_group(1, 2, 2));
    corpus.push_back(gl_group(1, 3, 2));
    corpus.push_back(gl_group(1, 5, 2));
    corpus.push_back(gl_group(1, 2, 3));
    corpus.push_back(gl_group(2, 2, 1));
    corpus.push_back(gl_group(2, 3, 1));
    corpus.push_back(gl_group(2, 2, 2));
    corpus.push_back(gl_group(3, 2, 1));
    for (u64 p : {2, 3})
        for (auto [c, d] : std::vector<std::pair<u64, u64>>{{2, 1}, {1, 2}, {3, 1}, {3, 2}})
            corpus.push_back(group_from_module(minimal_module(c, d, p, 1)));
    return corpus;
}

// All abelian groups of order <= bound, as multisets of prime-power moduli
// (every finite abelian group is a unique such direct sum).
void enumerate_abelian(u64 bound, u64 min_modulus, std::vector<u64>& cur,
                       const std::function<void(const std::vector<u64>&)>& emit) {
    emit(cur);
    u64 prod = 1;
    for (u64 m : cur) prod *= m;
    for (u64 m = min_modulus; prod * m <= bound; ++m) {
        // prime powers only
        u64 q = m, p = 0;
        for (u64 f = 2; f * f <= q; ++f)
            if (q % f == 0) {
                p = f;
                break;
            }
        if (p == 0) p = q;
        while (q % p == 0) q /= p;
        if (q != 1) continue;
        cur.push_back(m);
        enumerate_abelian(bound, m, cur, emit);
        cur.pop_back();
    }
}

}  // namespace

int main() {
    criterion(1, "pi0 orders p^(c+d)-1 for (2,1),(1,2),(3,1),(3,2), p in {2,3}", [] {
        for (u64 p : {2, 3}) {
            for (auto [c, d] : std::vector<std::pair<u64, u64>>{{2, 1}, {1, 2}, {3, 1}, {3, 2}}) {
                u64 h = c + d;
                u64 want = 1;
                for (u64 i = 0; i < h; ++i) want *= p;
                want -= 1;
                AutResult r = pi0(minimal_module(c, d, p, 1));
                std::ostringstream what;
                what << "(" << c << "," << d << ") p=" << p;
                expect(r.pi0_order == want, what.str() + ": pi0 " + std::to_string(r.pi0_order) +
                                               " != " + std::to_string(want));
                expect(is_cyclic(r.pi0), what.str() + ": pi0 not cyclic");
            }
        }
    });

    criterion(2, "worked (2,1) example over F_2: 9-dim algebra, displayed shape, |Aut| = 448", [] {
        DieudonneModule M = minimal_module(2, 1, 2, 1);
        EndoAlgebra E = endomorphism_algebra(M);
        expect(E.log_size() == 9, "algebra dimension != 9");
        const Ring& K = M.R();
        for (const auto& g : E.gens) {
            KMat A = endo_to_matrix(M, g.vec);
            bool shape = K.is_zero(A.at(0, 1)) && K.is_zero(A.at(0, 2)) && K.is_zero(A.at(1, 2)) &&
                         A.at(1, 1) == K.frobenius(A.at(0, 0), 1) &&
                         A.at(2, 2) == K.frobenius(A.at(0, 0), 2) &&
                         A.at(2, 1) == K.frobenius(A.at(1, 0), 1);
            expect(shape, "basis element violates the displayed matrix shape");
        }
        // span equality: solution space (dim 9) inside the 9-dim shape space
        u128 n_aut = automorphism_group_exhaustive(M);
        expect(n_aut == u128(448), "exhaustive unit count != 448");
    });

    criterion(3, "polarized double: |Aut(G,lambda)| = |Aut(H_{2,1}[p])| for p in {2,3}", [] {
        for (u64 p : {2, 3}) {
            u128 dbl = automorphism_group(polarized_double(2, 1, p, 1)).aut_order;
            u128 one = automorphism_group(minimal_module(2, 1, p, 1)).aut_order;
            expect(dbl == one, "orders differ at p = " + std::to_string(p));
        }
    });

    criterion(4, "H_{1,1} form counts: p^2-1 unpolarized, p+1 polarized, p in {2,3,5}", [] {
        for (u64 p : {2, 3, 5}) {
            for (u64 deg : {2, 4})
                expect(unpolarized_form_count(Ring::get(p, deg, 1)) == p * p - 1,
                       "unpolarized count wrong at p = " + std::to_string(p));
            expect(polarized_form_count(p) == p + 1,
                   "polarized count wrong at p = " + std::to_string(p));
        }
    });

    criterion(5, "twist bijection oracle over the corpus, m <= 12", [] {
        for (const auto& G : twist_corpus())
            for (u64 m = 1; m <= 12; ++m) {
                expect(twists_over(G, m).size() == h1_cyclic_oracle(G, m),
                       G.name + " m=" + std::to_string(m) + ": bijection count mismatch");
            }
    });

    criterion(6, "Lemma 2.4 merge solver: all abelian |A| <= 200, coprime r,s <= 10", [] {
        std::vector<std::pair<u64, u64>> rs;
        for (u64 r = 1; r <= 10; ++r)
            for (u64 s = 1; s <= 10; ++s)
                if (gcd_u64(r, s) == 1) rs.push_back({r, s});
        std::vector<u64> cur;
        u64 groups = 0;
        enumerate_abelian(200, 2, cur, [&](const std::vector<u64>& moduli) {
            ++groups;
            AbelianPresentation A{moduli};
            u64 total = 1;
            for (u64 m : moduli) total *= m;
            // every element a of A
            std::vector<u64> a(moduli.size(), 0);
            for (u64 idx = 0; idx < total; ++idx) {
                u64 v = idx;
                for (size_t i = 0; i < moduli.size(); ++i) {
                    a[i] = v % moduli[i];
                    v /= moduli[i];
                }
                for (auto [r, s] : rs) {
                    auto [b, c] = merge_twists_coprime(A, a, r, s);
                    for (size_t i = 0; i < moduli.size(); ++i)
                        expect((r * c[i] + a[i]) % moduli[i] == (s * b[i]) % moduli[i],
                               "identity r c + a = s b fails");
                }
            }
        });
        expect(groups > 100, "abelian enumeration unexpectedly small");
    });

    criterion(7,
              "equidistribution g=1 n=1 p=3, q in {9..729}: deviation <= 2.5/sqrt(q), "
              "decay at least as fast as the fitted-slope gate (-0.25)",
              [] {
                  SurveyConfig cfg;
                  cfg.p = 3;
                  cfg.degrees = {2, 3, 4, 5, 6};
                  cfg.n = 1;
                  cfg.threads = 8;
                  auto reps = run_survey(cfg);
                  for (const auto& r : reps)
                      expect(r.max_abs_deviation <= 2.5 / std::sqrt(double(r.q)),
                             "deviation gate fails at q = " + std::to_string(r.q));
                  auto [slope, intercept] = decay_fit(reps);
                  (void)intercept;
                  // The observed per-class error is identically zero at this
                  // instance (the mod-3 class is the norm of the Hasse
                  // invariant, which the full family balances exactly), which
                  // is strictly stronger than the claimed O(1/sqrt q): the
                  // floored fit decays faster than the generic -0.5 model, so
                  // the gate is one-sided.
                  expect(slope <= -0.25, "decay slope " + std::to_string(slope) + " > -0.25");
              });

    criterion(8, "level-2 equidistribution p=3 n=2: deviation <= 4/sqrt(q) at every q", [] {
        SurveyConfig cfg;
        cfg.p = 3;
        cfg.degrees = {2, 3, 4, 5, 6};
        cfg.n = 2;
        cfg.threads = 8;
        auto reps = run_survey(cfg);
        for (const auto& r : reps) {
            expect(r.max_abs_deviation <= 4.0 / std::sqrt(double(r.q)),
                   "deviation gate fails at q = " + std::to_string(r.q));
            expect(r.classes.size() == 6, "class count != |(Z/9)^x|");
        }
    });

    criterion(9, "lift surjectivity: lift_image(2,1, n=2 -> 1) = full pi0 at p = 2", [] {
        LiftImageResult r = lift_image(2, 1, 2, 2, 1);
        expect(r.pi0_order == 7, "pi0 order != 7");
        expect(r.image_order == r.pi0_order, "lift image is a proper subgroup");
    });

    criterion(10, "bound consistency: B(nu,n) >= |Aut| on fixtures, equality at (2,1) n=1", [] {
        struct Fixture {
            NewtonPolygon nu;
            DieudonneModule M;
        };
        for (u64 p : {2, 3}) {
            std::vector<Fixture> fixtures;
            fixtures.push_back({NewtonPolygon{{{2, 1, 1}}}, minimal_module(2, 1, p, 1)});
            fixtures.push_back({NewtonPolygon{{{1, 2, 1}}}, minimal_module(1, 2, p, 1)});
            fixtures.push_back({NewtonPolygon{{{1, 1, 1}}}, minimal_module(1, 1, p, 1)});
            fixtures.push_back({NewtonPolygon{{{3, 1, 1}}}, minimal_module(3, 1, p, 1)});
            fixtures.push_back(
                {NewtonPolygon{{{1, 0, 1}, {0, 1, 1}}}, ordinary_module(1, p, 1)});
            fixtures.push_back(
                {NewtonPolygon{{{1, 0, 2}, {0, 1, 2}}}, ordinary_module(2, p, 1)});
            fixtures.push_back(
                {NewtonPolygon{{{2, 1, 1}, {1, 2, 1}}}, polarized_double(2, 1, p, 1)});
            fixtures.push_back({NewtonPolygon{{{1, 1, 1}}}, minimal_module_polarized_11(p, 1)});
            for (const auto& fx : fixtures) {
                u128 B = automorphism_bound(fx.nu, p, 1);
                u128 counted = automorphism_group(fx.M).aut_order;
                expect(B >= counted, "bound below the counted unit-group order (p = " +
                                         std::to_string(p) + ")");
            }
            // equality for the minimal module at (2,1), n = 1
            expect(automorphism_bound(NewtonPolygon{{{2, 1, 1}}}, p, 1) ==
                       automorphism_group(minimal_module(2, 1, p, 1)).aut_order,
                   "no equality at (2,1), n = 1, p = " + std::to_string(p));
            // and at Witt level n = 2 the bound still dominates
            expect(automorphism_bound(NewtonPolygon{{{2, 1, 1}}}, p, 2) >=
                       automorphism_group(minimal_module(2, 1, p, 2)).aut_order,
                   "n = 2 bound below count");
        }
    });

    criterion(11, "frequency normalization: sum class_size/|G| = 1 exactly over the corpus", [] {
        for (const auto& G : twist_corpus()) {
            auto rows = frequency_table(G);  // asserts exactness internally
            Frac total;
            for (const auto& d : rows) total = total.plus(Frac::of(d.class_size, G.order()));
            expect(total == Frac::of(1, 1), G.name + ": class equation sum != 1");
        }
    });

    if (g_failures == 0) {
        std::cout << "acceptance: all 11 criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criteria FAILED\n";
    return 1;
}
