#include "dmt/survey.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dmt/linalg.hpp"

namespace dmt {

namespace {

// ---------- field lookup tables ----------

struct FieldTables {
    const Ring* K = nullptr;
    u64 q = 0, h = 0;
    u32 p = 0;
    std::vector<u16> add, mul;  // q x q
    std::vector<i8> chi;        // quadratic character, chi[0] = 0
    std::vector<u16> cube;      // x -> x^3
    u16 idx4 = 0, idx27 = 0;
};

Elem elem_of(const Ring& K, u64 idx) {
    Elem e(K.h, 0);
    for (u64 k = 0; k < K.h; ++k) {
        e[k] = idx % K.p;
        idx /= K.p;
    }
    return e;
}

u64 idx_of(const Ring& K, const Elem& e) {
    u64 idx = 0;
    for (u64 k = K.h; k-- > 0;) idx = idx * K.p + e[k] % K.p;
    return idx;
}

const FieldTables& field_tables(const Ring& K) {
    static std::map<const Ring*, FieldTables> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(&K);
    if (it != cache.end()) return it->second;
    require(K.n == 1, "field_tables: level-1 field required");
    require(K.q <= 2401, "field_tables: field exceeds the q <= 2401 table guard");
    FieldTables T;
    T.K = &K;
    T.q = K.q;
    T.h = K.h;
    T.p = u32(K.p);
    u64 q = T.q;
    T.add.resize(q * q);
    T.mul.resize(q * q);
    // addition is digitwise mod p in the index encoding
    for (u64 a = 0; a < q; ++a) {
        for (u64 b = 0; b < q; ++b) {
            u64 x = a, y = b, pw = 1, s = 0;
            for (u64 k = 0; k < T.h; ++k) {
                s += ((x % T.p) + (y % T.p)) % T.p * pw;
                x /= T.p;
                y /= T.p;
                pw *= T.p;
            }
            T.add[a * q + b] = u16(s);
        }
    }
    std::vector<Elem> elems(q);
    for (u64 a = 0; a < q; ++a) elems[a] = elem_of(K, a);
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b <= a; ++b) {
            u16 m = u16(idx_of(K, K.mul(elems[a], elems[b])));
            T.mul[a * q + b] = m;
            T.mul[b * q + a] = m;
        }
    T.chi.assign(q, -1);
    T.chi[0] = 0;
    for (u64 a = 1; a < q; ++a) T.chi[T.mul[a * q + a]] = 1;
    T.cube.resize(q);
    for (u64 a = 0; a < q; ++a) T.cube[a] = T.mul[u64(T.mul[a * q + a]) * q + a];
    T.idx4 = u16(idx_of(K, K.from_int(4 % K.p)));
    T.idx27 = u16(idx_of(K, K.from_int(27 % K.p)));
    return cache.emplace(&K, std::move(T)).first->second;
}

// Curve families.  For p >= 5 the short form y^2 = x^3 + Ax + B covers both
// strata.  In characteristic 3 every curve of that shape is supersingular
// (the Hasse invariant, the x^2-coefficient of x^3 + Ax + B, vanishes), so
// the survey family at p = 3 is the ordinary-capable model
// y^2 = x^3 + A x^2 + B, smooth iff A != 0 and B != 0 (j = -A^3/B != 0;
// every member is ordinary: a = q + 1 - #E satisfies a = N_{F_q/F_3}(A)
// mod 3, a nonzero norm).  Because the trace class mod 3 is that exact
// norm, the two level-1 residue classes balance *exactly* over the full
// (A, B) range: the empirical error term of the equidistribution statement
// is identically zero at p = 3, n = 1, strictly inside the O(1/sqrt q)
// bound.  Level n = 2 exhibits nonzero deviations.
i64 curve_trace(const FieldTables& T, u64 Ai, u64 Bi, bool char3_family) {
    // a = q + 1 - #E = -sum_x chi(f(x))
    const u64 q = T.q;
    i64 s = 0;
    if (char3_family) {
        for (u64 x = 0; x < q; ++x) {
            u64 ax2 = T.mul[Ai * q + T.mul[x * q + x]];
            u64 v = T.add[u64(T.add[u64(T.cube[x]) * q + ax2]) * q + Bi];
            s += T.chi[v];
        }
    } else {
        for (u64 x = 0; x < q; ++x) {
            u64 v = T.add[u64(T.add[u64(T.cube[x]) * q + T.mul[Ai * q + x]]) * q + Bi];
            s += T.chi[v];
        }
    }
    return -s;
}

bool is_singular(const FieldTables& T, u64 Ai, u64 Bi, bool char3_family) {
    const u64 q = T.q;
    if (char3_family) return Ai == 0 || Bi == 0;
    u64 a3 = T.mul[u64(T.mul[Ai * q + Ai]) * q + Ai];
    u64 d1 = T.mul[u64(T.idx4) * q + a3];
    u64 b2 = T.mul[Bi * q + Bi];
    u64 d2 = T.mul[u64(T.idx27) * q + b2];
    return T.add[d1 * q + d2] == 0;
}

u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// ---------- F_p[x] helpers (low-to-high coefficients) ----------

using Poly = std::vector<u32>;

Poly fpp_trim(Poly f, u32 p) {
    for (auto& c : f) c %= p;
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly fpp_mul(const Poly& a, const Poly& b, u32 p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = u32((c[i + j] + u64(a[i]) * b[j]) % p);
    return fpp_trim(c, p);
}

Poly fpp_add(const Poly& a, const Poly& b, u32 p) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        u32 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
        c[i] = (x + y) % p;
    }
    return fpp_trim(c, p);
}

Poly fpp_smul(u32 s, const Poly& a, u32 p) {
    Poly c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = u32(u64(s) * a[i] % p);
    return fpp_trim(c, p);
}

// a = q*b + r with deg r < deg b (b nonzero).
std::pair<Poly, Poly> fpp_divmod(Poly a, const Poly& b, u32 p) {
    a = fpp_trim(a, p);
    check_internal(!b.empty(), "fpp_divmod: division by zero");
    u32 lcinv = fp_inv(b.back(), p);
    Poly qpoly;
    if (a.size() >= b.size()) qpoly.assign(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size()) {
        u32 c = u32(u64(a.back()) * lcinv % p);
        size_t shift = a.size() - b.size();
        qpoly[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = u32((a[shift + i] + u64(p - u32(u64(c) * b[i] % p))) % p);
        a = fpp_trim(a, p);
        if (a.empty()) break;
    }
    return {fpp_trim(qpoly, p), a};
}

// g = gcd (monic), with sa*A + sb*B = g.
void fpp_ext_gcd(const Poly& A, const Poly& B, u32 p, Poly& g, Poly& sa, Poly& sb) {
    Poly r0 = fpp_trim(A, p), r1 = fpp_trim(B, p);
    Poly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        auto [qq, rr] = fpp_divmod(r0, r1, p);
        Poly s2 = fpp_add(s0, fpp_smul(p - 1, fpp_mul(qq, s1, p), p), p);
        Poly t2 = fpp_add(t0, fpp_smul(p - 1, fpp_mul(qq, t1, p), p), p);
        r0 = r1;
        r1 = rr;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    check_internal(!r0.empty(), "fpp_ext_gcd: zero inputs");
    u32 lcinv = fp_inv(r0.back(), p);
    g = fpp_smul(lcinv, r0, p);
    sa = fpp_smul(lcinv, s0, p);
    sb = fpp_smul(lcinv, t0, p);
}

// ---------- K[x] helpers ----------

using KPoly = std::vector<Elem>;  // low-to-high

KPoly kp_trim(const Ring& K, KPoly f) {
    while (!f.empty() && K.is_zero(f.back())) f.pop_back();
    return f;
}

KPoly kp_mul(const Ring& K, const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return {};
    KPoly c(a.size() + b.size() - 1, K.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = K.add(c[i + j], K.mul(a[i], b[j]));
    return kp_trim(K, c);
}

KPoly kp_deriv(const Ring& K, const KPoly& f) {
    KPoly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(K.smul(i % K.p, f[i]));
    return kp_trim(K, d);
}

KPoly kp_mod(const Ring& K, KPoly a, const KPoly& b) {
    a = kp_trim(K, a);
    check_internal(!b.empty(), "kp_mod: division by zero");
    Elem lcinv = K.inv(b.back());
    while (a.size() >= b.size()) {
        Elem c = K.mul(a.back(), lcinv);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = K.sub(a[shift + i], K.mul(c, b[i]));
        a = kp_trim(K, a);
        if (a.empty()) break;
    }
    return a;
}

bool kp_coprime(const Ring& K, KPoly a, KPoly b) {
    a = kp_trim(K, a);
    b = kp_trim(K, b);
    while (!b.empty()) {
        KPoly r = kp_mod(K, a, b);
        a = b;
        b = r;
    }
    return a.size() == 1;
}

Elem kp_eval(const Ring& K, const KPoly& f, const Elem& x) {
    Elem acc = K.zero();
    for (size_t i = f.size(); i-- > 0;) acc = K.add(K.mul(acc, x), f[i]);
    return acc;
}

// 2x2 matrices over K
using K22 = std::array<Elem, 4>;

K22 k22_mul(const Ring& K, const K22& A, const K22& B) {
    K22 C;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            C[i * 2 + j] =
                K.add(K.mul(A[i * 2 + 0], B[0 * 2 + j]), K.mul(A[i * 2 + 1], B[1 * 2 + j]));
    return C;
}

u64 k22_rank(const Ring& K, const K22& A) {
    Elem det = K.sub(K.mul(A[0], A[3]), K.mul(A[1], A[2]));
    if (!K.is_zero(det)) return 2;
    for (const auto& e : A)
        if (!K.is_zero(e)) return 1;
    return 0;
}

}  // namespace

u64 point_count(const Ring& K, const Elem& A, const Elem& B) {
    require(K.p >= 3, "point_count: p >= 3 required (short Weierstrass form)");
    const FieldTables& T = field_tables(K);
    u64 Ai = idx_of(K, A), Bi = idx_of(K, B);
    require(!is_singular(T, Ai, Bi, false), "point_count: singular curve (4A^3 + 27B^2 = 0)");
    i64 a = curve_trace(T, Ai, Bi, false);
    return u64(i64(K.q) + 1 - a);
}

u64 frobenius_class(i64 a, u64 q, u64 p, u64 n) { return unit_root(a, q, p, n); }

std::vector<FrequencyReport> run_survey(const SurveyConfig& cfg) {
    require(is_prime(cfg.p) && cfg.p >= 3, "run_survey: p must be an odd prime");
    require(cfg.n >= 1 && cfg.n <= 3, "run_survey: n must be in [1, 3]");
    require(!cfg.degrees.empty(), "run_survey: empty degree list");
    u64 pn = checked_pow(cfg.p, cfg.n, u64(1) << 31, "run_survey p^n");
    std::vector<FrequencyReport> out;
    for (u64 e : cfg.degrees) {
        u64 q = checked_pow(cfg.p, e, u64(1) << 31, "run_survey q");
        if (!cfg.sampled)
            require(q <= 2000, "run_survey: exhaustive mode requires q <= 2000");
        const Ring& K = Ring::get(cfg.p, e, 1);
        const FieldTables& T = field_tables(K);
        FrequencyReport rep;
        rep.q = q;
        rep.n = cfg.n;
        std::vector<i64> classidx(pn, -1);
        for (u64 r = 1; r < pn; ++r)
            if (r % cfg.p != 0) {
                classidx[r] = i64(rep.classes.size());
                rep.classes.push_back(r);
            }
        size_t nc = rep.classes.size();
        rep.predicted = 1.0 / double(nc);
        u64 nthreads = std::max<u64>(1, cfg.threads);
        struct Partial {
            std::vector<u64> counts;
            u64 ss = 0, curves = 0;
        };
        std::vector<Partial> partials(nthreads);
        // unit roots depend only on the trace; memoized per worker
        auto work = [&](u64 tid, u64 lo, u64 hi) {
            Partial& P = partials[tid];
            P.counts.assign(nc, 0);
            std::map<i64, u64> root_memo;
            bool char3 = (cfg.p == 3);
            auto record = [&](u64 Ai, u64 Bi) {
                if (is_singular(T, Ai, Bi, char3)) return;
                ++P.curves;
                i64 a = curve_trace(T, Ai, Bi, char3);
                check_internal(a * a <= i64(4 * q), "run_survey: Weil bound violated");
                if (a % i64(cfg.p) == 0) {
                    ++P.ss;
                    return;
                }
                auto it = root_memo.find(a);
                u64 cls;
                if (it != root_memo.end())
                    cls = it->second;
                else {
                    cls = unit_root(a, q, cfg.p, cfg.n);
                    root_memo[a] = cls;
                }
                check_internal(classidx[cls] >= 0, "run_survey: unit root not a unit");
                ++P.counts[size_t(classidx[cls])];
            };
            if (!cfg.sampled) {
                for (u64 Ai = lo; Ai < hi; ++Ai)
                    for (u64 Bi = 0; Bi < q; ++Bi) record(Ai, Bi);
            } else {
                // counter-based: pre-mix the stream key so that nearby seeds
                // do not merely permute the counter range
                u64 stream = splitmix64(cfg.seed ^ (e << 32));
                for (u64 i = lo; i < hi; ++i) {
                    u64 r = splitmix64(stream + i * 0x9e3779b97f4a7c15ULL);
                    record(r % q, (r >> 32) % q);
                }
            }
        };
        u64 domain = cfg.sampled ? cfg.sample_count : q;
        std::vector<std::thread> pool;
        for (u64 t = 0; t < nthreads; ++t) {
            u64 lo = domain * t / nthreads, hi = domain * (t + 1) / nthreads;
            pool.emplace_back(work, t, lo, hi);
        }
        for (auto& th : pool) th.join();
        rep.counts.assign(nc, 0);
        for (const auto& P : partials) {
            for (size_t c = 0; c < nc; ++c) rep.counts[c] += P.counts[c];
            rep.total_supersingular += P.ss;
            rep.total_curves += P.curves;
        }
        for (u64 c : rep.counts) rep.total_ordinary += c;
        check_internal(rep.total_ordinary + rep.total_supersingular == rep.total_curves,
                       "run_survey: bucket totals disagree");
        if (!cfg.sampled) {
            // closed-form nonsingular pair counts per family
            u64 expect = (cfg.p == 3) ? (q - 1) * (q - 1) : q * q - q;
            check_internal(rep.total_curves == expect,
                           "run_survey: nonsingular pair count mismatch");
        }
        rep.max_abs_deviation = 0;
        rep.chi_square = 0;
        double tot = double(rep.total_ordinary);
        for (size_t c = 0; c < nc; ++c) {
            double obs = double(rep.counts[c]) / tot;
            rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(obs - rep.predicted));
            double exp = tot * rep.predicted;
            rep.chi_square += (double(rep.counts[c]) - exp) * (double(rep.counts[c]) - exp) / exp;
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::pair<double, double> decay_fit(const std::vector<FrequencyReport>& reports) {
    require(reports.size() >= 3, "decay_fit: need at least 3 reports");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = double(reports.size());
    for (const auto& r : reports) {
        double floor_dev = 1.0 / (2.0 * double(std::max<u64>(1, r.total_ordinary)));
        double x = std::log(double(r.q));
        double y = std::log(std::max(r.max_abs_deviation, floor_dev));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

u64 genus2_point_count(const Ring& K, const std::vector<Elem>& f) {
    KPoly ff = kp_trim(K, f);
    require(ff.size() == 6 || ff.size() == 7, "genus2: f must have degree 5 or 6");
    const FieldTables& T = field_tables(K);
    i64 s = 0;
    for (u64 x = 0; x < K.q; ++x) {
        Elem v = kp_eval(K, ff, elem_of(K, x));
        s += T.chi[idx_of(K, v)];
    }
    u64 pts = u64(i64(K.q) + s);
    // points at infinity: 1 for deg 5; 1 + chi(leading coefficient) for deg 6
    if (ff.size() == 6)
        pts += 1;
    else
        pts += u64(1 + T.chi[idx_of(K, ff.back())]);
    return pts;
}

u64 genus2_prank(const Ring& K, const std::vector<Elem>& f) {
    require(K.n == 1 && K.p >= 3 && K.q <= 49, "genus2_prank: p >= 3, q <= 49, level 1");
    KPoly ff = kp_trim(K, f);
    require(ff.size() == 6 || ff.size() == 7, "genus2_prank: f must have degree 5 or 6");
    require(kp_coprime(K, ff, kp_deriv(K, ff)), "genus2_prank: f must be squarefree");
    // h = f^((p-1)/2); Cartier-Manin matrix M[i][j] = coeff_{i p - j}(h)
    KPoly hh = {K.one()};
    for (u64 i = 0; i < (K.p - 1) / 2; ++i) hh = kp_mul(K, hh, ff);
    auto coeff = [&](u64 k) { return k < hh.size() ? hh[k] : K.zero(); };
    K22 M = {coeff(1 * K.p - 1), coeff(1 * K.p - 2), coeff(2 * K.p - 1), coeff(2 * K.p - 2)};
    // q-power composite: sigma^(e-1)(M) * ... * sigma(M) * M
    K22 C = M;
    for (u64 k = 1; k < K.h; ++k) {
        K22 Mk;
        for (int t = 0; t < 4; ++t) Mk[t] = K.frobenius(M[t], i64(k));
        C = k22_mul(K, Mk, C);
    }
    K22 C2 = k22_mul(K, C, C);
    K22 C4 = k22_mul(K, C2, C2);
    u64 r = k22_rank(K, C2);
    check_internal(r == k22_rank(K, C4), "genus2_prank: semilinear iterate did not stabilize");
    return r;
}

std::vector<u64> genus2_frobenius_charpoly(const Ring& K, const std::vector<Elem>& f, u64 n) {
    require(K.n == 1 && K.p >= 3 && K.q <= 49, "genus2_frobenius_charpoly: p >= 3, q <= 49");
    require(n >= 1 && n <= 6, "genus2_frobenius_charpoly: n in [1, 6]");
    u64 q = K.q;
    u64 N1 = genus2_point_count(K, f);
    // embed f into F_{q^2}
    const Ring& K2 = Ring::get(K.p, 2 * K.h, 1);
    auto emb = make_embedding(K, K2);
    std::vector<Elem> f2;
    for (const auto& c : f) f2.push_back(embed(emb, c));
    u64 N2 = genus2_point_count(K2, f2);
    i64 s1 = i64(q) + 1 - i64(N1);
    i64 s2 = i64(q) * i64(q) + 1 - i64(N2);
    i64 two_e2 = s1 * s1 - s2;
    check_internal(two_e2 % 2 == 0, "genus2_frobenius_charpoly: parity failure");
    i64 e1 = s1, e2 = two_e2 / 2;
    // Weil polynomial x^4 - e1 x^3 + e2 x^2 - q e1 x + q^2
    u64 pn = checked_pow(K.p, n, u64(1) << 62, "genus2 p^n");
    auto modpn = [&](i64 x) { return u64(((x % i64(pn)) + i64(pn)) % i64(pn)); };
    std::vector<u64> chi = {modpn(i64(q) * i64(q)), modpn(-i64(q) * e1), modpn(e2), modpn(-e1),
                            1};
    u32 p = u32(K.p);
    u64 prank = (modpn(e2) % p != 0) ? 2 : ((modpn(e1) % p != 0) ? 1 : 0);
    require(prank >= 1, "genus2_frobenius_charpoly: p-rank 0 (no unit-root factor)");
    // mod-p factorization chi = x^(4 - prank) * u0
    Poly g = {0, 0, 1};  // x^2
    Poly u;
    if (prank == 2)
        u = fpp_trim({u32(modpn(e2) % p), u32(modpn(-e1) % p), 1}, p);
    else {
        g = {0, 0, 0, 1};  // x^3
        u = fpp_trim({u32(modpn(-e1) % p), 1}, p);
    }
    Poly gg, sa, sb;
    fpp_ext_gcd(g, u, p, gg, sa, sb);
    check_internal(gg.size() == 1, "genus2_frobenius_charpoly: factors not coprime mod p");
    // Hensel lift chi = G * U from mod p to mod p^n; G, U tracked mod p^n.
    std::vector<u64> G(g.begin(), g.end()), U(u.begin(), u.end());
    u64 pk = p;
    for (u64 k = 1; k < n; ++k) {
        // E = (chi - G U) / p^k mod p
        std::vector<u64> GU(G.size() + U.size() - 1, 0);
        for (size_t i = 0; i < G.size(); ++i)
            for (size_t j = 0; j < U.size(); ++j)
                GU[i + j] = (GU[i + j] + (u128(G[i]) * U[j]) % pn) % pn;
        Poly E(chi.size(), 0);
        for (size_t i = 0; i < chi.size(); ++i) {
            u64 diff = (chi[i] + pn - (i < GU.size() ? GU[i] : 0)) % pn;
            check_internal(diff % pk == 0, "genus2_frobenius_charpoly: Hensel residual");
            E[i] = u32((diff / pk) % p);
        }
        E = fpp_trim(E, p);
        // corrections: s = (sb * E) mod g ; t = (E - s*u) / g
        Poly s = fpp_divmod(fpp_mul(sb, E, p), g, p).second;
        Poly num = fpp_add(E, fpp_smul(p - 1, fpp_mul(s, u, p), p), p);
        auto [t, rem] = fpp_divmod(num, g, p);
        check_internal(rem.empty(), "genus2_frobenius_charpoly: Hensel division");
        for (size_t i = 0; i < s.size(); ++i) G[i] = (G[i] + u128(pk) * s[i]) % pn;
        for (size_t i = 0; i < t.size(); ++i) U[i] = (U[i] + u128(pk) * t[i]) % pn;
        pk *= p;
    }
    check_internal(U.size() == prank + 1 && U.back() == 1,
                   "genus2_frobenius_charpoly: unit factor not monic of degree p-rank");
    check_internal(U[0] % p != 0, "genus2_frobenius_charpoly: constant term not a unit");
    return U;
}

std::string report_csv(const FrequencyReport& r) {
    std::ostringstream os;
    os << "q,n,class,observed_count,observed_freq,predicted_freq,deviation\n";
    double tot = double(std::max<u64>(1, r.total_ordinary));
    for (size_t c = 0; c < r.classes.size(); ++c) {
        double obs = double(r.counts[c]) / tot;
        os << r.q << "," << r.n << "," << r.classes[c] << "," << r.counts[c] << "," << obs << ","
           << r.predicted << "," << (obs - r.predicted) << "\n";
    }
    return os.str();
}

std::string summary_csv(const std::vector<FrequencyReport>& reports, double slope,
                        double intercept) {
    std::ostringstream os;
    os << "q,max_abs_deviation,ss_fraction,slope,intercept\n";
    for (const auto& r : reports) {
        double ssf = double(r.total_supersingular) / double(std::max<u64>(1, r.total_curves));
        os << r.q << "," << r.max_abs_deviation << "," << ssf << "," << slope << "," << intercept
           << "\n";
    }
    return os.str();
}

std::string plot_data(const std::vector<FrequencyReport>& reports) {
    std::ostringstream os;
    for (const auto& r : reports) {
        double floor_dev = 1.0 / (2.0 * double(std::max<u64>(1, r.total_ordinary)));
        os << std::log(double(r.q)) << " "
           << std::log(std::max(r.max_abs_deviation, floor_dev)) << "\n";
    }
    return os.str();
}

}  // namespace dmt
