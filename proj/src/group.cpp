#include "dmt/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "dmt/endo.hpp"

namespace dmt {

Frac Frac::of(u64 n, u64 d) {
    require(d != 0, "Frac: zero denominator");
    u64 g = std::gcd(n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
}

Frac Frac::plus(const Frac& o) const {
    u64 g = std::gcd(den, o.den);
    u64 l = den / g * o.den;
    check_internal(l / (den / g) == o.den, "Frac: denominator overflow");
    u64 n = num * (l / den) + o.num * (l / o.den);
    return Frac::of(n, l);
}

std::string Frac::str() const {
    std::ostringstream os;
    if (den == 1)
        os << num;
    else
        os << num << "/" << den;
    return os.str();
}

void validate_finite_group(const FiniteGroupTable& G) {
    const GroupTable& T = G.tab;
    check_internal(T.mul.size() == T.n * T.n, "finite group: table size");
    check_internal(G.labels.size() == T.n, "finite group: label count");
    for (u32 a = 0; a < T.n; ++a) {
        check_internal(T.at(T.id, a) == a && T.at(a, T.id) == a, "finite group: identity");
        T.inv(a);
    }
    if (T.n <= 512) {
        for (u32 a = 0; a < T.n; ++a)
            for (u32 b = 0; b < T.n; ++b)
                for (u32 c = 0; c < T.n; ++c)
                    check_internal(T.at(T.at(a, b), c) == T.at(a, T.at(b, c)),
                                   "finite group: associativity");
    } else {
        std::mt19937_64 rng(0xa550c1a7ULL ^ T.n);
        for (int k = 0; k < 20000; ++k) {
            u32 a = u32(rng() % T.n), b = u32(rng() % T.n), c = u32(rng() % T.n);
            check_internal(T.at(T.at(a, b), c) == T.at(a, T.at(b, c)),
                           "finite group: associativity (sampled)");
        }
    }
}

FiniteGroupTable cyclic_group(u64 k) {
    require(k >= 1 && k <= 2000, "cyclic_group: order must be in [1, 2000]");
    FiniteGroupTable G;
    G.tab = cyclic_group_table(k);
    for (u64 i = 0; i < k; ++i) G.labels.push_back(std::to_string(i));
    G.name = "cyclic:" + std::to_string(k);
    validate_finite_group(G);
    return G;
}

FiniteGroupTable symmetric_group(u64 k) {
    require(k >= 1 && k <= 6, "symmetric_group: k must be in [1, 6]");
    std::vector<std::vector<u32>> perms;
    std::vector<u32> base(k);
    std::iota(base.begin(), base.end(), 0);
    std::vector<u32> cur = base;
    do {
        perms.push_back(cur);
    } while (std::next_permutation(cur.begin(), cur.end()));
    std::map<std::vector<u32>, u32> index;
    for (u32 i = 0; i < perms.size(); ++i) index[perms[i]] = i;
    FiniteGroupTable G;
    G.tab.n = perms.size();
    G.tab.id = index.at(base);
    G.tab.mul.resize(G.tab.n * G.tab.n);
    for (u32 a = 0; a < G.tab.n; ++a)
        for (u32 b = 0; b < G.tab.n; ++b) {
            std::vector<u32> ab(k);
            for (u64 x = 0; x < k; ++x) ab[x] = perms[a][perms[b][x]];
            G.tab.mul[size_t(a) * G.tab.n + b] = index.at(ab);
        }
    for (const auto& pm : perms) {
        std::string s = "(";
        for (u64 x = 0; x < k; ++x) s += std::to_string(pm[x]) + (x + 1 < k ? " " : ")");
        G.labels.push_back(s);
    }
    G.name = "sym:" + std::to_string(k);
    validate_finite_group(G);
    return G;
}

FiniteGroupTable gl_group(u64 g, u64 p, u64 n) {
    require(g >= 1 && g <= 4 && n >= 1 && is_prime(p), "gl_group: need 1 <= g <= 4, prime p, n >= 1");
    u64 m = checked_pow(p, n, u64(1) << 31, "gl_group modulus");
    u64 cells = g * g;
    double bits = double(cells) * std::log2(double(m));
    require(bits <= 24.0, "gl_group: matrix space exceeds the 2^24 guard");
    u64 total = 1;
    for (u64 i = 0; i < cells; ++i) total *= m;
    std::vector<std::vector<u32>> elems;
    for (u64 code = 0; code < total; ++code) {
        std::vector<u32> mat(cells);
        u64 c = code;
        for (u64 i = 0; i < cells; ++i) {
            mat[i] = u32(c % m);
            c /= m;
        }
        // invertible over Z/p^n iff invertible mod p
        FpMat M(g, g);
        for (u64 i = 0; i < cells; ++i) M.a[i] = mat[i] % u32(p);
        if (fp_rank(M, u32(p)) == g) {
            elems.push_back(mat);
            require(elems.size() <= 2000, "gl_group: order exceeds 2000");
        }
    }
    std::map<std::vector<u32>, u32> index;
    for (u32 i = 0; i < elems.size(); ++i) index[elems[i]] = i;
    FiniteGroupTable G;
    G.tab.n = elems.size();
    G.tab.mul.resize(G.tab.n * G.tab.n);
    {
        std::vector<u32> idm(cells, 0);
        for (u64 i = 0; i < g; ++i) idm[i * g + i] = 1;
        G.tab.id = index.at(idm);
    }
    for (u32 a = 0; a < G.tab.n; ++a)
        for (u32 b = 0; b < G.tab.n; ++b) {
            std::vector<u32> ab(cells, 0);
            for (u64 i = 0; i < g; ++i)
                for (u64 j = 0; j < g; ++j) {
                    u64 s = 0;
                    for (u64 t = 0; t < g; ++t)
                        s += u64(elems[a][i * g + t]) * elems[b][t * g + j] % m;
                    ab[i * g + j] = u32(s % m);
                }
            G.tab.mul[size_t(a) * G.tab.n + b] = index.at(ab);
        }
    for (const auto& mat : elems) {
        std::string s = "[";
        for (u64 i = 0; i < cells; ++i) s += std::to_string(mat[i]) + (i + 1 < cells ? "," : "]");
        G.labels.push_back(s);
    }
    G.name = "gl:" + std::to_string(g) + ":" + std::to_string(p) + ":" + std::to_string(n);
    validate_finite_group(G);
    return G;
}

FiniteGroupTable group_from_group_table(const GroupTable& T, const std::string& name) {
    FiniteGroupTable G;
    G.tab = T;
    for (u32 i = 0; i < T.n; ++i) G.labels.push_back(std::to_string(i));
    G.name = name;
    validate_finite_group(G);
    return G;
}

FiniteGroupTable group_from_module(const DieudonneModule& M) {
    auto a = pi0(M);
    require(a.pi0.n <= 2000, "group_from_module: pi0 exceeds order 2000");
    return group_from_group_table(a.pi0, "pi0");
}

std::vector<TwistDescriptor> conjugacy_classes(const FiniteGroupTable& G) {
    const GroupTable& T = G.tab;
    std::vector<u32> invtab(T.n);
    for (u32 a = 0; a < T.n; ++a) invtab[a] = T.inv(a);
    std::vector<i64> cls(T.n, -1);
    std::vector<TwistDescriptor> out;
    for (u32 x = 0; x < T.n; ++x) {
        if (cls[x] >= 0) continue;
        std::set<u32> orbit;
        u64 cent = 0;
        for (u32 gg = 0; gg < T.n; ++gg) {
            u32 y = T.at(T.at(gg, x), invtab[gg]);
            orbit.insert(y);
            if (y == x) ++cent;
        }
        for (u32 y : orbit) cls[y] = i64(out.size());
        TwistDescriptor d;
        d.rep = *orbit.begin();  // least index
        d.class_size = orbit.size();
        d.centralizer_order = cent;
        check_internal(d.class_size * d.centralizer_order == T.n,
                       "conjugacy_classes: orbit-stabilizer failure");
        d.predicted_frequency = Frac::of(1, cent);
        d.distinguished = (orbit.count(T.id) != 0);
        out.push_back(d);
    }
    std::sort(out.begin(), out.end(), [](const TwistDescriptor& a, const TwistDescriptor& b) {
        if (a.class_size != b.class_size) return a.class_size < b.class_size;
        return a.rep < b.rep;
    });
    return out;
}

std::vector<TwistDescriptor> twists_over(const FiniteGroupTable& G, u64 m) {
    require(m >= 1, "twists_over: m >= 1");
    auto classes = conjugacy_classes(G);
    std::vector<TwistDescriptor> out;
    for (const auto& d : classes) {
        // alpha^m = id is a class function; test on the representative
        u32 x = G.tab.id;
        for (u64 i = 0; i < m; ++i) x = G.tab.at(x, d.rep);
        if (x == G.tab.id) out.push_back(d);
    }
    check_internal(std::any_of(out.begin(), out.end(),
                               [](const TwistDescriptor& d) { return d.distinguished; }),
                   "twists_over: identity class missing");
    return out;
}

u32 base_change_twist(const FiniteGroupTable& G, u32 alpha, u64 r) {
    require(alpha < G.tab.n, "base_change_twist: element out of range");
    require(r >= 1, "base_change_twist: r >= 1");
    u32 x = G.tab.id;
    for (u64 i = 0; i < r; ++i) x = G.tab.at(x, alpha);
    return x;
}

u64 twist_aut_order(const FiniteGroupTable& G, u32 alpha) {
    require(alpha < G.tab.n, "twist_aut_order: element out of range");
    u64 cent = 0;
    for (u32 gg = 0; gg < G.tab.n; ++gg)
        if (G.tab.at(gg, alpha) == G.tab.at(alpha, gg)) ++cent;
    return cent;
}

std::pair<std::vector<u64>, std::vector<u64>> merge_twists_coprime(const AbelianPresentation& A,
                                                                   const std::vector<u64>& a,
                                                                   u64 r, u64 s) {
    require(gcd_u64(r, s) == 1, "merge_twists_coprime: gcd(r, s) must be 1");
    require(a.size() == A.moduli.size(), "merge_twists_coprime: element size mismatch");
    // extended Euclid: find u, v with s*v - r*u = 1
    i64 g0 = i64(s), g1 = i64(r);
    i64 v0 = 1, v1 = 0;  // coefficients of s
    while (g1 != 0) {
        i64 qq = g0 / g1;
        std::swap(g0 -= qq * g1, g1);
        std::swap(v0 -= qq * v1, v1);
    }
    check_internal(g0 == 1 || g0 == -1, "merge_twists_coprime: euclid failure");
    // g0 = s*v0 + r*w for some w; want s*v - r*u = 1
    i64 v = (g0 == 1) ? v0 : -v0;
    i64 u = 0;
    // solve s*v - 1 = r*u
    check_internal(r != 0 && (i64(s) * v - 1) % i64(r) == 0, "merge_twists_coprime: bezout");
    u = (i64(s) * v - 1) / i64(r);
    std::vector<u64> b(a.size()), c(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        i64 mi = i64(A.moduli[i]);
        require(mi >= 1 && a[i] < u64(mi), "merge_twists_coprime: element out of range");
        auto mod = [&](i64 x) { return u64(((x % mi) + mi) % mi); };
        b[i] = mod(v * i64(a[i]));
        c[i] = mod(u * i64(a[i]));
        // verify r*c + a = s*b in Z/m_i
        check_internal(mod(i64(r) * i64(c[i]) + i64(a[i])) == mod(i64(s) * i64(b[i])),
                       "merge_twists_coprime: verification failed");
    }
    return {b, c};
}

std::vector<TwistDescriptor> frequency_table(const FiniteGroupTable& G,
                                             const std::vector<u32>* restrict_to) {
    const FiniteGroupTable* target = &G;
    FiniteGroupTable sub;
    if (restrict_to) {
        // verify subgroup and build the restricted table
        std::set<u32> sset(restrict_to->begin(), restrict_to->end());
        require(sset.count(G.tab.id), "frequency_table: restriction must contain the identity");
        for (u32 x : sset) {
            require(x < G.tab.n, "frequency_table: restriction element out of range");
            for (u32 y : sset)
                require(sset.count(G.tab.at(x, y)), "frequency_table: restriction not closed");
        }
        std::map<u32, u32> reindex;
        for (u32 x : sset) reindex[x] = u32(reindex.size());
        sub.tab.n = sset.size();
        sub.tab.id = reindex.at(G.tab.id);
        sub.tab.mul.resize(sub.tab.n * sub.tab.n);
        for (u32 x : sset)
            for (u32 y : sset)
                sub.tab.mul[size_t(reindex.at(x)) * sub.tab.n + reindex.at(y)] =
                    reindex.at(G.tab.at(x, y));
        for (u32 x : sset) sub.labels.push_back(G.labels[x]);
        sub.name = G.name + ":restricted";
        validate_finite_group(sub);
        target = &sub;
    }
    auto out = conjugacy_classes(*target);
    Frac total{0, 1};
    for (const auto& d : out) total = total.plus(Frac::of(d.class_size, target->tab.n));
    check_internal(total == Frac::of(1, 1), "frequency_table: class sizes do not sum to |G|");
    return out;
}

u64 h1_cyclic_oracle(const FiniteGroupTable& G, u64 m) {
    require(G.tab.n <= 2000 && m >= 1 && m <= 12, "h1_cyclic_oracle: guards |G| <= 2000, m <= 12");
    const GroupTable& T = G.tab;
    std::vector<u32> killed;
    for (u32 x = 0; x < T.n; ++x) {
        u32 y = T.id;
        for (u64 i = 0; i < m; ++i) y = T.at(y, x);
        if (y == T.id) killed.push_back(x);
    }
    std::vector<u32> invtab(T.n);
    for (u32 a = 0; a < T.n; ++a) invtab[a] = T.inv(a);
    std::set<u32> left(killed.begin(), killed.end());
    u64 classes = 0;
    while (!left.empty()) {
        u32 x = *left.begin();
        for (u32 gg = 0; gg < T.n; ++gg) left.erase(T.at(T.at(gg, x), invtab[gg]));
        ++classes;
    }
    return classes;
}

std::string twists_csv(const FiniteGroupTable& G, const std::vector<TwistDescriptor>& rows) {
    std::ostringstream os;
    os << "class_rep,class_size,centralizer_order,predicted_frequency\n";
    for (const auto& d : rows)
        os << G.labels[d.rep] << "," << d.class_size << "," << d.centralizer_order << ","
           << d.predicted_frequency.str() << "\n";
    return os.str();
}

}  // namespace dmt
