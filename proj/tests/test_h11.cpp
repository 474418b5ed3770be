#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dmt/h11.hpp"
#include "doctest.h"

using namespace dmt;

namespace {

std::vector<Elem> all_units(const Ring& K) {
    std::vector<Elem> out;
    Elem t = K.gen();
    Elem x = K.one();
    for (u64 i = 0; i + 1 < K.q; ++i) {
        out.push_back(x);
        x = K.mul(x, t);
    }
    return out;
}

}  // namespace

TEST_CASE("tau is a homomorphism with kernel F_{p^2}^x") {
    const Ring& K = Ring::get(3, 4, 1);  // F_81
    auto units = all_units(K);
    REQUIRE(units.size() == 80);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Elem& a = units[rng() % units.size()];
        const Elem& b = units[rng() % units.size()];
        CHECK(tau(K, K.mul(a, b)) == K.mul(tau(K, a), tau(K, b)));
    }
    // kernel: tau(a) = 1 iff sigma^2(a) = a iff a in F_9
    size_t kernel = 0;
    for (const Elem& a : units)
        if (tau(K, a) == K.one()) {
            ++kernel;
            CHECK(K.frobenius(a, 2) == a);
        }
    CHECK(kernel == 8);  // |F_9^x|
    CHECK_THROWS_AS(tau(K, K.zero()), UsageError);
}

TEST_CASE("tau image index is p^2 - 1 for every even-degree field") {
    CHECK(tau_image_index(Ring::get(3, 2, 1)) == 8);
    CHECK(tau_image_index(Ring::get(3, 4, 1)) == 8);
    CHECK(tau_image_index(Ring::get(2, 2, 1)) == 3);
    CHECK(tau_image_index(Ring::get(2, 4, 1)) == 3);
    CHECK(tau_image_index(Ring::get(5, 2, 1)) == 24);
    CHECK(tau_image_index(Ring::get(5, 4, 1)) == 24);
    CHECK_THROWS_AS(tau_image_index(Ring::get(3, 3, 1)), UsageError);  // odd degree
}

TEST_CASE("discrete_log inverts powers of the generator") {
    const Ring& K = Ring::get(3, 4, 1);
    Elem t = K.gen();
    for (u64 k : {0, 1, 5, 17, 40, 79}) CHECK(discrete_log(K, K.pow(t, k)) == k);
}

TEST_CASE("form_class is independent of the chosen generator") {
    const Ring& K = Ring::get(3, 4, 1);
    auto units = all_units(K);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        CyclicGenModule M = make_cyclic_gen_module(K, units[rng() % units.size()]);
        u64 base = form_class(M, K.one(), K.zero());
        for (int i = 0; i < 5; ++i) {
            const Elem& b = units[rng() % units.size()];
            Elem c(K.h);
            for (auto& cc : c) cc = rng() % K.p;
            CHECK(form_class(M, b, c) == base);
        }
    }
}

TEST_CASE("form_class labels: lambda multiplied by a tau value keeps the label") {
    const Ring& K = Ring::get(3, 4, 1);  // tau(K^x) has order 10 here, nontrivial
    auto units = all_units(K);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        const Elem& lam = units[rng() % units.size()];
        const Elem& a = units[rng() % units.size()];
        CyclicGenModule M1 = make_cyclic_gen_module(K, lam);
        CyclicGenModule M2 = make_cyclic_gen_module(K, K.mul(lam, tau(K, a)));
        CHECK(form_class(M1, K.one(), K.zero()) == form_class(M2, K.one(), K.zero()));
    }
}

TEST_CASE("form counts: p^2 - 1 unpolarized, p + 1 polarized") {
    for (u64 p : {2, 3, 5}) {
        for (u64 deg : {2, 4}) {
            const Ring& K = Ring::get(p, deg, 1);
            CHECK(unpolarized_form_count(K) == p * p - 1);
        }
        CHECK(polarized_form_count(p) == p + 1);  // cross-checks |pi0| internally
    }
}

TEST_CASE("distinct form labels are exhausted by cyclic-generator modules") {
    // Over F_9, the p^2 - 1 = 8 lambda-cosets give 8 distinct labels.
    const Ring& K = Ring::get(3, 2, 1);
    auto units = all_units(K);
    std::vector<bool> seen(8, false);
    size_t distinct = 0;
    for (const Elem& lam : units) {
        u64 lbl = form_class(make_cyclic_gen_module(K, lam), K.one(), K.zero());
        REQUIRE(lbl < 8);
        if (!seen[lbl]) {
            seen[lbl] = true;
            ++distinct;
        }
    }
    CHECK(distinct == 8);
}

TEST_CASE("census CSV: header plus (p^2 - 1) + (p + 1) rows") {
    for (u64 p : {2, 3}) {
        std::string csv = h11_census_csv(p, 2);
        size_t lines = 0;
        for (char c : csv)
            if (c == '\n') ++lines;
        CHECK(lines == 1 + (p * p - 1) + (p + 1));
        CHECK(csv.rfind("p,field_degree,form_label,polarized", 0) == 0);
    }
    CHECK_THROWS_AS(h11_census_csv(3, 3), UsageError);
}
