#pragma once

// Twist theory over finite fields: conjugacy classes and centralizers of
// explicit finite groups, the twist bijection for cyclic extensions, base
// change of twists, the coprime merging solver and predicted frequency
// tables.  Groups are represented by explicit multiplication tables up to
// order 2000 with a canonical element indexing.

#include <optional>
#include <string>
#include <vector>

#include "dmt/dieudonne.hpp"
#include "dmt/grouptab.hpp"

namespace dmt {

// Exact nonnegative rational, kept normalized.
struct Frac {
    u64 num = 0, den = 1;

    static Frac of(u64 n, u64 d);
    Frac plus(const Frac& o) const;
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
    std::string str() const;
};

struct FiniteGroupTable {
    GroupTable tab;
    std::vector<std::string> labels;  // one per element
    std::string name;

    size_t order() const { return tab.n; }
};

// Validation per size: exhaustive associativity for |G| <= 512, randomized
// spot checks (deterministic seed) above.  Throws on failure.
void validate_finite_group(const FiniteGroupTable& G);

FiniteGroupTable cyclic_group(u64 k);
FiniteGroupTable symmetric_group(u64 k);          // k <= 6
FiniteGroupTable gl_group(u64 g, u64 p, u64 n);   // GL_g(Z/p^n), order <= 2000
// pi0 of the module at its splitting level, as an explicit table.
FiniteGroupTable group_from_module(const DieudonneModule& M);
FiniteGroupTable group_from_group_table(const GroupTable& T, const std::string& name);

struct TwistDescriptor {
    u32 rep = 0;  // least element index in the class
    u64 class_size = 0;
    u64 centralizer_order = 0;
    Frac predicted_frequency;    // 1 / centralizer_order
    bool distinguished = false;  // the identity class (the split form)
};

// Conjugacy classes ordered by (class_size, least element index);
// class_size * centralizer_order = |G| for each descriptor.
std::vector<TwistDescriptor> conjugacy_classes(const FiniteGroupTable& G);

// Forms over the degree-m extension: classes whose representative satisfies
// alpha^m = id.  The identity class is included and flagged distinguished.
std::vector<TwistDescriptor> twists_over(const FiniteGroupTable& G, u64 m);

// Twist after base extension of degree r: alpha^r.
u32 base_change_twist(const FiniteGroupTable& G, u32 alpha, u64 r);

// |Z_G(alpha)|.
u64 twist_aut_order(const FiniteGroupTable& G, u32 alpha);

// A = direct sum of Z/m_i.
struct AbelianPresentation {
    std::vector<u64> moduli;
};

// Solves r*c + a = s*b in A for coprime (r, s); returns (b, c).
// The identity is asserted before returning.
std::pair<std::vector<u64>, std::vector<u64>> merge_twists_coprime(const AbelianPresentation& A,
                                                                   const std::vector<u64>& a,
                                                                   u64 r, u64 s);

// Frequency table over G, or over the subgroup `restrict_to` (element list)
// when given; asserts sum over classes of class_size/|G| = 1 exactly.
std::vector<TwistDescriptor> frequency_table(const FiniteGroupTable& G,
                                             const std::vector<u32>* restrict_to = nullptr);

// Brute-force H^1(Z/m, G) class count: elements killed by m, modulo
// conjugation.  Guards: |G| <= 2000, m <= 12.
u64 h1_cyclic_oracle(const FiniteGroupTable& G, u64 m);

// CSV with header: class_rep, class_size, centralizer_order,
// predicted_frequency (exact fraction string).
std::string twists_csv(const FiniteGroupTable& G, const std::vector<TwistDescriptor>& rows);

}  // namespace dmt
