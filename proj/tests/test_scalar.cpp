#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <random>

#include "dmt/scalar.hpp"
#include "doctest.h"

using namespace dmt;

namespace {

// All elements of the ring, by counting coordinates.
std::vector<Elem> all_elems(const Ring& K) {
    std::vector<Elem> out;
    u64 total = 1;
    for (u64 i = 0; i < K.h; ++i) total *= K.pn;
    for (u64 idx = 0; idx < total; ++idx) {
        Elem e(K.h);
        u64 v = idx;
        for (u64 k = 0; k < K.h; ++k) {
            e[k] = v % K.pn;
            v /= K.pn;
        }
        out.push_back(e);
    }
    return out;
}

// Remainder of X^(p^h - 1) - 1 by the monic polynomial with low-to-high
// non-leading coefficients `f`, over Z/m.  Returns true iff it divides.
bool divides_cyclotomic_like(const std::vector<u64>& f, u64 m, u64 order) {
    size_t h = f.size();
    std::vector<u64> r(order + 1, 0);
    r[order] = 1;
    r[0] = (m - 1) % m;  // X^order - 1
    for (size_t i = order + 1; i-- > h;) {
        u64 c = r[i] % m;
        if (c == 0) continue;
        r[i] = 0;
        for (size_t k = 0; k < h; ++k) r[i - h + k] = (r[i - h + k] + (m - c % m) * f[k]) % m;
    }
    for (size_t i = 0; i < h; ++i)
        if (r[i] % m != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("lift_modulus: h = 1 gives the Teichmuller lift of a primitive root") {
    // p = 3, n = 2: the generator must be the order-2 Teichmuller unit
    // t = 8 mod 9, so the modulus is X + 1.
    auto f = lift_modulus(3, 1, 2);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == 1);  // X + 1
    const Ring& K = Ring::get(3, 1, 2);
    CHECK(K.mult_order(K.gen()) == 2);
}

TEST_CASE("lift_modulus: n = 1 returns the primitive polynomial itself") {
    CHECK(lift_modulus(2, 2, 1) == find_primitive_poly(2, 2));
    CHECK(find_primitive_poly(2, 2) == std::vector<u64>({1, 1}));  // x^2 + x + 1
}

TEST_CASE("lift_modulus: p=2 h=2 n=2 divides X^3 - 1 and reduces correctly") {
    auto f = lift_modulus(2, 2, 2);
    REQUIRE(f.size() == 2);
    CHECK(divides_cyclotomic_like(f, 4, 3));
    CHECK(f[0] % 2 == 1);
    CHECK(f[1] % 2 == 1);
}

TEST_CASE("lift_modulus: truncation compatibility") {
    auto f2 = lift_modulus(2, 2, 2);
    auto f1 = lift_modulus(2, 2, 1);
    for (size_t i = 0; i < f1.size(); ++i) CHECK(f2[i] % 2 == f1[i]);
    auto g3 = lift_modulus(3, 2, 3);
    auto g2 = lift_modulus(3, 2, 2);
    for (size_t i = 0; i < g2.size(); ++i) CHECK(g3[i] % 9 == g2[i]);
    CHECK(divides_cyclotomic_like(g3, 27, 8));
}

TEST_CASE("lift_modulus rejects non-prime p") {
    CHECK_THROWS_AS(lift_modulus(4, 1, 1), UsageError);
}

TEST_CASE("frobenius: p-power map at n = 1, order h, negative exponents") {
    const Ring& K = Ring::get(2, 3, 1);
    for (const Elem& x : all_elems(K)) {
        CHECK(K.frobenius(x, 1) == K.pow(x, K.p));
        CHECK(K.frobenius(x, i64(K.h)) == x);
        CHECK(K.frobenius(K.frobenius(x, 1), -1) == x);
    }
}

TEST_CASE("frobenius is a ring homomorphism on W_2(F_4)") {
    const Ring& K = Ring::get(2, 2, 2);
    auto elems = all_elems(K);
    CHECK(K.frobenius(K.gen(), 1) == K.mul(K.gen(), K.gen()));  // sigma(t) = t^2 reduced
    CHECK(K.frobenius(K.frobenius(K.gen(), 1), 1) == K.gen());  // sigma^2 = id
    for (const Elem& x : elems)
        for (const Elem& y : elems) {
            CHECK(K.frobenius(K.add(x, y), 1) == K.add(K.frobenius(x, 1), K.frobenius(y, 1)));
            CHECK(K.frobenius(K.mul(x, y), 1) == K.mul(K.frobenius(x, 1), K.frobenius(y, 1)));
        }
}

TEST_CASE("ring axioms on random triples, p^(hn) <= 2^16") {
    std::mt19937_64 rng(12345);
    for (auto [p, h, n] : {std::tuple<u64, u64, u64>{2, 4, 2}, {3, 3, 2}, {5, 2, 2}, {7, 1, 3}}) {
        const Ring& K = Ring::get(p, h, n);
        auto rand_elem = [&]() {
            Elem e(K.h);
            for (auto& c : e) c = rng() % K.pn;
            return e;
        };
        for (int i = 0; i < 50; ++i) {
            Elem a = rand_elem(), b = rand_elem(), c = rand_elem();
            CHECK(K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c)));
            CHECK(K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c)));
            CHECK(K.add(a, b) == K.add(b, a));
            CHECK(K.mul(a, b) == K.mul(b, a));
            CHECK(K.mul(a, K.one()) == a);
            CHECK(K.add(a, K.neg(a)) == K.zero());
            if (K.is_unit(a)) CHECK(K.mul(a, K.inv(a)) == K.one());
        }
    }
}

TEST_CASE("teichmuller: fixed points, generator, multiplicativity on F_4 at n = 2") {
    const Ring& K = Ring::get(2, 2, 2);
    CHECK(K.teichmuller(K.zero()) == K.zero());
    CHECK(K.teichmuller(K.one()) == K.one());
    CHECK(K.teichmuller(K.gen()) == K.gen());
    auto elems = all_elems(K);
    for (const Elem& a : elems)
        for (const Elem& b : elems) {
            // teichmuller reads coordinates mod p, so this is the F_4 check
            Elem wa = K.teichmuller(a), wb = K.teichmuller(b);
            CHECK(K.teichmuller(K.mul(a, b)) == K.mul(wa, wb));
        }
    // w(a)^(p^h) = w(a)
    for (const Elem& a : elems) {
        Elem w = K.teichmuller(a);
        CHECK(K.pow(w, K.q) == w);
    }
}

TEST_CASE("unit_root: examples and truncation compatibility") {
    CHECK(unit_root(1, 5, 5, 1) == 1);
    CHECK(unit_root(1, 5, 5, 2) == 21);
    CHECK(unit_root(1, 5, 5, 3) % 25 == 21);
    CHECK_THROWS_AS(unit_root(2, 4, 2, 1), UsageError);
    // x^2 - ax + q vanishes at the returned root
    for (i64 a : {1, 2, 4, -1, -4}) {
        u64 u = unit_root(a, 9, 3, 3);
        u64 m = 27;
        u64 am = u64(((a % i64(m)) + i64(m)) % i64(m));
        CHECK((u * u % m + 9) % m == am * u % m);
        CHECK(unit_root(a, 9, 3, 3) % 9 == unit_root(a, 9, 3, 2));
        CHECK(unit_root(a, 9, 3, 2) % 3 == unit_root(a, 9, 3, 1));
    }
}

TEST_CASE("embedding: F_4 into F_16 preserves arithmetic") {
    const Ring& S = Ring::get(2, 2, 1);
    const Ring& D = Ring::get(2, 4, 1);
    Embedding e = make_embedding(S, D);
    for (const Elem& x : all_elems(S))
        for (const Elem& y : all_elems(S)) {
            CHECK(embed(e, S.mul(x, y)) == D.mul(embed(e, x), embed(e, y)));
            CHECK(embed(e, S.add(x, y)) == D.add(embed(e, x), embed(e, y)));
        }
}

TEST_CASE("size guard on oversized rings") {
    CHECK_THROWS_AS(Ring::get(2, 11, 3), SizeGuardError);
}
