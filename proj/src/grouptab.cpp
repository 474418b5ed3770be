#include "dmt/grouptab.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dmt {

u32 GroupTable::inv(u32 a) const {
    for (u32 b = 0; b < n; ++b)
        if (at(a, b) == id) return b;
    throw InternalError("GroupTable: element has no inverse");
}

u64 GroupTable::elem_order(u32 a) const {
    u64 o = 1;
    u32 x = a;
    while (x != id) {
        x = at(x, a);
        ++o;
        check_internal(o <= n, "GroupTable: order exceeds group size");
    }
    return o;
}

GroupTable trivial_group_table() {
    GroupTable G;
    G.n = 1;
    G.id = 0;
    G.mul = {0};
    return G;
}

GroupTable cyclic_group_table(u64 k) {
    check_internal(k >= 1, "cyclic_group_table: k >= 1");
    GroupTable G;
    G.n = size_t(k);
    G.id = 0;
    G.mul.resize(G.n * G.n);
    for (size_t a = 0; a < G.n; ++a)
        for (size_t b = 0; b < G.n; ++b) G.mul[a * G.n + b] = u32((a + b) % k);
    return G;
}

void validate_group_table(const GroupTable& G) {
    check_internal(G.mul.size() == G.n * G.n, "group table: wrong size");
    for (u32 a = 0; a < G.n; ++a) {
        check_internal(G.at(G.id, a) == a && G.at(a, G.id) == a, "group table: bad identity");
        G.inv(a);  // throws if missing
    }
    for (u32 a = 0; a < G.n; ++a)
        for (u32 b = 0; b < G.n; ++b)
            for (u32 c = 0; c < G.n; ++c)
                check_internal(G.at(G.at(a, b), c) == G.at(a, G.at(b, c)),
                               "group table: not associative");
}

std::vector<u32> generated_subgroup(const GroupTable& G, const std::vector<u32>& gens) {
    std::set<u32> sub = {G.id};
    std::vector<u32> frontier = {G.id};
    for (u32 g : gens)
        if (sub.insert(g).second) frontier.push_back(g);
    // Closure under multiplication by generators and existing elements.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<u32> cur(sub.begin(), sub.end());
        for (u32 a : cur)
            for (u32 b : cur) {
                u32 z = G.at(a, b);
                if (sub.insert(z).second) changed = true;
            }
    }
    return {sub.begin(), sub.end()};
}

std::vector<u32> op_subgroup(const GroupTable& G, u64 p) {
    auto is_ppow = [&](u64 o) {
        while (o % p == 0) o /= p;
        return o == 1;
    };
    std::vector<u32> invtab(G.n);
    for (u32 a = 0; a < G.n; ++a) invtab[a] = G.inv(a);
    std::vector<u32> good;
    for (u32 x = 0; x < G.n; ++x) {
        if (!is_ppow(G.elem_order(x))) continue;
        // Normal closure of x.
        std::set<u32> clo = {x};
        std::vector<u32> frontier = {x};
        while (!frontier.empty()) {
            u32 y = frontier.back();
            frontier.pop_back();
            for (u32 g = 0; g < G.n; ++g) {
                u32 z = G.at(G.at(g, y), invtab[g]);
                if (clo.insert(z).second) frontier.push_back(z);
            }
        }
        auto sub = generated_subgroup(G, {clo.begin(), clo.end()});
        if (is_ppow(sub.size())) good.push_back(x);
    }
    auto out = generated_subgroup(G, good);
    check_internal(is_ppow(out.size()), "op_subgroup: generated subgroup is not a p-group");
    return out;
}

GroupTable quotient_table(const GroupTable& G, const std::vector<u32>& N,
                          std::vector<u32>* coset_of) {
    std::set<u32> nset(N.begin(), N.end());
    check_internal(nset.count(G.id) == 1, "quotient_table: N must contain identity");
    check_internal(G.n % N.size() == 0, "quotient_table: |N| must divide |G|");
    // Canonical coset label: the least element of aN.
    std::vector<u32> canon(G.n);
    for (u32 a = 0; a < G.n; ++a) {
        u32 least = a;
        for (u32 s : N) least = std::min(least, G.at(a, s));
        canon[a] = least;
    }
    // Normality check: aN must equal Na as partitions (canonical labels agree
    // under conjugation of N representatives).
    for (u32 a = 0; a < G.n; ++a) {
        for (u32 s : N) {
            u32 left = canon[G.at(a, s)];
            u32 right = canon[G.at(s, a)];
            check_internal(left == canon[a] && right == canon[a],
                           "quotient_table: subgroup not normal");
        }
    }
    std::map<u32, u32> index;
    index[canon[G.id]] = 0;
    for (u32 a = 0; a < G.n; ++a)
        if (!index.count(canon[a])) index[canon[a]] = u32(index.size());
    GroupTable Q;
    Q.n = index.size();
    Q.id = 0;
    Q.mul.assign(Q.n * Q.n, 0);
    std::vector<u32> rep(Q.n);
    for (auto& [c, i] : index) rep[i] = c;
    for (size_t a = 0; a < Q.n; ++a)
        for (size_t b = 0; b < Q.n; ++b)
            Q.mul[a * Q.n + b] = index.at(canon[G.at(rep[a], rep[b])]);
    if (coset_of) {
        coset_of->resize(G.n);
        for (u32 a = 0; a < G.n; ++a) (*coset_of)[a] = index.at(canon[a]);
    }
    return Q;
}

bool is_abelian(const GroupTable& G) {
    for (u32 a = 0; a < G.n; ++a)
        for (u32 b = 0; b < u32(a); ++b)
            if (G.at(a, b) != G.at(b, a)) return false;
    return true;
}

bool is_cyclic(const GroupTable& G) {
    for (u32 a = 0; a < G.n; ++a)
        if (G.elem_order(a) == G.n) return true;
    return G.n == 1;
}

}  // namespace dmt
