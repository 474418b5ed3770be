#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dmt/endo.hpp"
#include "dmt/group.hpp"
#include "doctest.h"

using namespace dmt;

TEST_CASE("exact fractions") {
    CHECK(Frac::of(2, 4) == Frac::of(1, 2));
    CHECK(Frac::of(1, 6).plus(Frac::of(1, 3)) == Frac::of(1, 2));
    CHECK(Frac::of(1, 2).str() == "1/2");
    CHECK_THROWS_AS(Frac::of(1, 0), UsageError);
}

TEST_CASE("group constructors and orders") {
    CHECK(cyclic_group(12).order() == 12);
    CHECK(symmetric_group(3).order() == 6);
    CHECK(symmetric_group(5).order() == 120);
    CHECK(gl_group(1, 5, 1).order() == 4);
    CHECK(gl_group(2, 2, 1).order() == 6);
    CHECK(gl_group(2, 3, 1).order() == 48);
    CHECK(gl_group(1, 2, 2).order() == 2);  // (Z/4)^x
    CHECK(gl_group(2, 2, 2).order() == 96);
    CHECK_THROWS_AS(gl_group(3, 3, 1), UsageError);  // order 11232 > 2000
    for (const auto& G : {cyclic_group(7), symmetric_group(4), gl_group(2, 3, 1)})
        validate_finite_group(G);
}

TEST_CASE("conjugacy classes: S3 and GL2(F3)") {
    auto cls = conjugacy_classes(symmetric_group(3));
    REQUIRE(cls.size() == 3);
    CHECK(cls[0].class_size == 1);
    CHECK(cls[0].centralizer_order == 6);
    CHECK(cls[0].distinguished);
    CHECK(cls[1].class_size == 2);
    CHECK(cls[2].class_size == 3);
    for (const auto& d : cls) CHECK(d.class_size * d.centralizer_order == 6);
    // GL2(F3): 8 conjugacy classes
    CHECK(conjugacy_classes(gl_group(2, 3, 1)).size() == 8);
}

TEST_CASE("centralizer of diag(1,-1) in GL2(F3) is the diagonal torus, order 4") {
    auto G = gl_group(2, 3, 1);
    u32 rep = 0;
    bool found = false;
    for (u32 i = 0; i < G.order(); ++i)
        if (G.labels[i] == "[1,0,0,2]") {
            rep = i;
            found = true;
        }
    REQUIRE(found);
    CHECK(twist_aut_order(G, rep) == 4);
}

TEST_CASE("twist bijection: |twists_over| equals the brute-force H^1 count") {
    std::vector<FiniteGroupTable> corpus;
    for (u64 k : {1, 2, 3, 6, 12}) corpus.push_back(cyclic_group(k));
    for (u64 k : {3, 4}) corpus.push_back(symmetric_group(k));
    corpus.push_back(gl_group(2, 2, 1));
    corpus.push_back(gl_group(2, 3, 1));
    corpus.push_back(gl_group(1, 7, 1));
    corpus.push_back(group_from_module(minimal_module(2, 1, 2, 1)));
    for (const auto& G : corpus)
        for (u64 m = 1; m <= 12; ++m) CHECK(twists_over(G, m).size() == h1_cyclic_oracle(G, m));
}

TEST_CASE("twists_over: distinguished class and degree filtering") {
    auto S3 = symmetric_group(3);
    auto tw2 = twists_over(S3, 2);
    REQUIRE(tw2.size() == 2);
    CHECK((tw2[0].distinguished || tw2[1].distinguished));
    for (const auto& d : twists_over(S3, 3)) {
        // every representative is killed by m = 3
        u32 x = d.rep;
        u32 acc = S3.tab.at(x, S3.tab.at(x, x));
        CHECK(acc == S3.tab.id);
    }
    // gl:1:5:1 at degree 4: all 4 classes survive
    CHECK(twists_over(gl_group(1, 5, 1), 4).size() == 4);
}

TEST_CASE("base_change_twist is compatible with powers") {
    auto G = symmetric_group(4);
    for (u32 x : {0u, 5u, 11u, 17u}) {
        u32 x2 = base_change_twist(G, x, 2);
        CHECK(base_change_twist(G, x2, 3) == base_change_twist(G, x, 6));
        CHECK(base_change_twist(G, x, 1) == x);
    }
}

TEST_CASE("merge_twists_coprime: identity r c + a = s b, spot checks") {
    AbelianPresentation A{{4}};
    auto [b, c] = merge_twists_coprime(A, {1}, 3, 2);
    CHECK((3 * c[0] + 1) % 4 == (2 * b[0]) % 4);
    AbelianPresentation B{{6, 10}};
    for (u64 a1 : {0, 1, 5})
        for (u64 a2 : {0, 3, 9}) {
            auto [bb, cc] = merge_twists_coprime(B, {a1, a2}, 7, 9);
            CHECK((7 * cc[0] + a1) % 6 == (9 * bb[0]) % 6);
            CHECK((7 * cc[1] + a2) % 10 == (9 * bb[1]) % 10);
        }
    CHECK_THROWS_AS(merge_twists_coprime(A, {1}, 2, 4), UsageError);  // not coprime
}

TEST_CASE("frequency tables sum to one exactly") {
    for (const auto& G : {symmetric_group(4), gl_group(2, 3, 1), cyclic_group(9)}) {
        auto rows = frequency_table(G);  // asserts the exact sum internally
        Frac total;
        for (const auto& d : rows) total = total.plus(Frac::of(d.class_size, G.order()));
        CHECK(total == Frac::of(1, 1));
    }
}

TEST_CASE("group_from_module: pi0 tables of minimal modules are cyclic") {
    auto G = group_from_module(minimal_module(2, 1, 2, 1));
    CHECK(G.order() == 7);
    CHECK(is_cyclic(G.tab));
    auto H = group_from_module(minimal_module_polarized_11(3, 1));
    CHECK(H.order() == 4);
    CHECK(is_cyclic(H.tab));
}

TEST_CASE("twists_csv has a header and one row per descriptor") {
    auto G = symmetric_group(3);
    auto rows = twists_over(G, 2);
    std::string csv = twists_csv(G, rows);
    size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == rows.size() + 1);
    CHECK(csv.rfind("class_rep,class_size,centralizer_order,predicted_frequency", 0) == 0);
}
