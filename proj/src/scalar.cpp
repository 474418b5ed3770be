#include "dmt/scalar.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace dmt {
namespace {

// ---- dense polynomial helpers over Z/m, coefficients low-to-high ----

using Poly = std::vector<u64>;

Poly trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly poly_mul(const Poly& a, const Poly& b, u64 m) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    }
    return trim(r);
}

Poly poly_sub(const Poly& a, const Poly& b, u64 m) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        r[i] = (x + m - y) % m;
    }
    return trim(r);
}

u64 inv_mod_prime(u64 a, u64 p) {
    // Fermat; p is prime and a != 0 mod p.
    u64 r = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r;
}

// Division with remainder by a polynomial whose leading coefficient is a
// unit mod m (here always monic or unit-led over a prime field).
void poly_divmod(const Poly& a, const Poly& b, u64 m, Poly& quot, Poly& rem) {
    check_internal(!b.empty(), "poly_divmod: zero divisor");
    u64 lead = b.back();
    u64 lead_inv = 1;
    if (lead != 1) lead_inv = inv_mod_prime(lead, m);  // used only over F_p
    rem = a;
    rem = trim(rem);
    quot.assign(rem.size() > b.size() ? rem.size() - b.size() + 1 : 1, 0);
    while (rem.size() >= b.size() && !rem.empty()) {
        size_t shift = rem.size() - b.size();
        u64 c = rem.back() * lead_inv % m;
        if (c != 0) {
            quot[shift] = (quot[shift] + c) % m;
            for (size_t i = 0; i < b.size(); ++i) {
                size_t k = shift + i;
                rem[k] = (rem[k] + m - c * b[i] % m) % m;
            }
        }
        rem.pop_back();
        rem = trim(rem);
    }
    quot = trim(quot);
}

// Extended gcd over F_p for coprime monic f, g: returns (u, v) with
// u f + v g = 1.
void poly_bezout(const Poly& f, const Poly& g, u64 p, Poly& u, Poly& v) {
    Poly r0 = trim(f), r1 = trim(g);
    Poly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!r1.empty()) {
        Poly q, r2;
        poly_divmod(r0, r1, p, q, r2);
        Poly s2 = poly_sub(s0, poly_mul(q, s1, p), p);
        Poly t2 = poly_sub(t0, poly_mul(q, t1, p), p);
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    check_internal(r0.size() == 1, "poly_bezout: inputs not coprime");
    u64 c = inv_mod_prime(r0[0], p);
    u = poly_mul(r0.empty() ? Poly{} : s0, {c}, p);
    v = poly_mul(t0, {c}, p);
}

// X^(q-1) - 1 over Z/m.
Poly cyclo_all(u64 qm1, u64 m) {
    Poly g(qm1 + 1, 0);
    g[0] = m - 1;
    g[qm1] = 1;
    return g;
}

std::vector<u64> prime_divisors(u64 v) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

// Multiplication in F_p[x]/(f) with f monic of degree h given by its low
// coefficients.  Small helper for the primitivity search.
Poly modpoly_mul(const Poly& a, const Poly& b, const std::vector<u64>& f, u64 p) {
    u64 h = f.size();
    std::vector<u64> r(2 * h, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    for (size_t i = 2 * h; i-- > h;) {
        u64 c = r[i];
        if (c) {
            r[i] = 0;
            for (u64 j = 0; j < h; ++j)
                r[i - h + j] = (r[i - h + j] + (p - c) * f[j] % p) % p;
        }
    }
    r.resize(h);
    return r;
}

Poly modpoly_pow(Poly a, u64 e, const std::vector<u64>& f, u64 p) {
    u64 h = f.size();
    Poly r(h, 0);
    r[0] = 1;
    while (e) {
        if (e & 1) r = modpoly_mul(r, a, f, p);
        a = modpoly_mul(a, a, f, p);
        e >>= 1;
    }
    return r;
}

bool is_one(const Poly& a) {
    if (a.empty() || a[0] != 1) return false;
    for (size_t i = 1; i < a.size(); ++i)
        if (a[i]) return false;
    return true;
}

}  // namespace

std::vector<u64> find_primitive_poly(u64 p, u64 h) {
    require(is_prime(p), "find_primitive_poly: p must be prime");
    require(h >= 1, "find_primitive_poly: h must be >= 1");
    u64 q = checked_pow(p, h, u64(1) << 32, "find_primitive_poly");
    auto divisors = prime_divisors(q - 1);
    // The constant term is forced: the norm of a root t is (-1)^h c_0, and a
    // primitive t has norm of exact order p - 1 in F_p^x.  Skipping the other
    // c_0 blocks prunes the lexicographic scan without changing its result.
    std::vector<bool> c0_ok(p, false);
    for (u64 c0 = 0; c0 < p; ++c0) {
        u64 nrm = (h % 2 == 0) ? c0 : (p - c0) % p;
        if (nrm == 0) continue;
        u64 o = 1, cur = nrm;
        while (cur != 1) {
            cur = cur * nrm % p;
            ++o;
        }
        if (o == p - 1) c0_ok[c0] = true;
    }
    u64 total = q;  // p^h coefficient tuples
    for (u64 idx = 0; idx < total; ++idx) {
        // Decode idx into coefficients (c_0 .. c_{h-1}), c_0 most significant,
        // so candidates are visited in lexicographic order on (c_0, ..).
        std::vector<u64> f(h);
        u64 v = idx;
        for (u64 i = h; i-- > 0;) {
            f[i] = v % p;
            v /= p;
        }
        if (!c0_ok[f[0]]) {
            // jump to the end of this constant-term block
            u64 block = total / p;
            idx = (idx / block + 1) * block - 1;
            continue;
        }
        Poly t(h, 0);
        if (h == 1)
            t[0] = (p - f[0] % p) % p;
        else
            t[1] = 1;
        if (!is_one(modpoly_pow(t, q - 1, f, p))) continue;
        bool primitive = true;
        for (u64 ell : divisors) {
            if (is_one(modpoly_pow(t, (q - 1) / ell, f, p))) {
                primitive = false;
                break;
            }
        }
        if (primitive) return f;
    }
    throw InternalError("find_primitive_poly: no primitive polynomial found");
}

std::vector<u64> lift_modulus(u64 p, u64 h, u64 n) {
    require(is_prime(p), "lift_modulus: p must be prime");
    require(h >= 1 && n >= 1, "lift_modulus: need h >= 1, n >= 1");
    checked_pow(p, h * n, u64(1) << 32, "lift_modulus");
    auto fbar = find_primitive_poly(p, h);
    if (n == 1) return fbar;

    u64 q = 1;
    for (u64 i = 0; i < h; ++i) q *= p;
    u64 qm1 = q - 1;

    Poly f(fbar);
    f.push_back(1);  // monic, degree h
    Poly gbar, rem;
    poly_divmod(cyclo_all(qm1, p), f, p, gbar, rem);
    check_internal(rem.empty(), "lift_modulus: primitive polynomial does not divide X^(q-1)-1");
    Poly u, v;
    poly_bezout(f, gbar, p, u, v);  // u f + v g = 1 mod p

    Poly g = gbar;
    u64 pk = p;  // p^k, current level k starts at 1
    for (u64 k = 1; k < n; ++k) {
        u64 mod_hi = pk * p;  // p^(k+1)
        // defect e = (X^(q-1) - 1 - f g) / p^k  mod p
        Poly fg = poly_mul(f, g, mod_hi);
        Poly diff = poly_sub(cyclo_all(qm1, mod_hi), fg, mod_hi);
        Poly e(diff.size(), 0);
        for (size_t i = 0; i < diff.size(); ++i) {
            check_internal(diff[i] % pk == 0, "lift_modulus: defect not divisible by p^k");
            e[i] = diff[i] / pk % p;
        }
        e = trim(e);
        // Correction: f += p^k * (v e mod fbar), g += p^k * (u e + (v e div fbar) gbar)
        Poly ve = poly_mul(v, e, p);
        Poly quo, df;
        Poly fbar_monic(fbar);
        fbar_monic.push_back(1);
        poly_divmod(ve, fbar_monic, p, quo, df);
        Poly dg = poly_mul(u, e, p);
        {
            Poly t2 = poly_mul(quo, gbar, p);
            Poly sum(std::max(dg.size(), t2.size()), 0);
            for (size_t i = 0; i < sum.size(); ++i) {
                u64 x = i < dg.size() ? dg[i] : 0;
                u64 y = i < t2.size() ? t2[i] : 0;
                sum[i] = (x + y) % p;
            }
            dg = trim(sum);
        }
        f.resize(std::max(f.size(), df.size() + 0), 0);
        for (size_t i = 0; i < df.size(); ++i) f[i] = (f[i] + pk * df[i]) % mod_hi;
        g.resize(std::max(g.size(), dg.size()), 0);
        for (size_t i = 0; i < dg.size(); ++i) g[i] = (g[i] + pk * dg[i]) % mod_hi;
        pk = mod_hi;
    }
    // Verify f g = X^(q-1) - 1 mod p^n.
    check_internal(poly_sub(poly_mul(f, g, pk), cyclo_all(qm1, pk), pk).empty(),
                   "lift_modulus: lifted factorization check failed");
    check_internal(f.size() == h + 1 && f[h] == 1, "lift_modulus: lift not monic of degree h");
    f.pop_back();
    return f;
}

u64 unit_root(i64 a, u64 q, u64 p, u64 n) {
    require(is_prime(p), "unit_root: p must be prime");
    require(q % p == 0, "unit_root: p must divide q");
    u64 pn = checked_pow(p, n, u64(1) << 32, "unit_root");
    u64 am = u64(((a % i64(pn)) + i64(pn)) % i64(pn));
    require(am % p != 0, "unit_root: p divides a (supersingular, no unit root)");
    u64 x = am % p;
    u64 pk = p;
    for (u64 k = 1; k < n; ++k) {
        u64 mod_hi = pk * p;
        u128 fx = (u128(x) * x + q) % mod_hi;
        fx = (fx + mod_hi - u128(am % mod_hi) * x % mod_hi) % mod_hi;
        check_internal(u64(fx) % pk == 0, "unit_root: Hensel defect not divisible");
        u64 e = u64(fx) / pk % p;
        u64 fpx = (2 * x % p + p - am % p) % p;  // f'(x) = 2x - a mod p
        check_internal(fpx != 0, "unit_root: derivative not a unit");
        u64 delta = (p - e) % p * inv_mod_prime(fpx, p) % p;
        x = (x + delta % p * pk) % mod_hi;
        pk = mod_hi;
    }
    check_internal((u128(x) * x + q) % pn == u128(am) * x % pn, "unit_root: result is not a root");
    return x;
}

Ring::Ring(u64 p_, u64 h_, u64 n_) : p(p_), h(h_), n(n_) {
    require(is_prime(p), "Ring: p must be prime");
    require(h >= 1 && n >= 1, "Ring: need h >= 1 and n >= 1");
    checked_pow(p, h * n, u64(1) << 32, "Ring");
    pn = 1;
    for (u64 i = 0; i < n; ++i) pn *= p;
    q = 1;
    for (u64 i = 0; i < h; ++i) q *= p;
    modulus = lift_modulus(p, h, n);

    // Reduction rows: t^(h+i) for i = 0..h-2.
    red_.assign(h > 0 ? h - 1 : 0, std::vector<u64>(h, 0));
    std::vector<u64> cur(h, 0);  // t^h = -modulus
    for (u64 j = 0; j < h; ++j) cur[j] = (pn - modulus[j]) % pn;
    for (u64 i = 0; i + 1 < h; ++i) {
        red_[i] = cur;
        // multiply by t
        std::vector<u64> nxt(h, 0);
        u64 carry = cur[h - 1];
        for (u64 j = h; j-- > 1;) nxt[j] = cur[j - 1];
        nxt[0] = 0;
        if (carry)
            for (u64 j = 0; j < h; ++j)
                nxt[j] = (nxt[j] + carry * ((pn - modulus[j]) % pn)) % pn;
        cur = nxt;
    }

    // sigma^k matrices: column j = coordinates of t^(j p^k).
    sigma_.assign(h, std::vector<u64>(h * h, 0));
    for (u64 j = 0; j < h; ++j) sigma_[0][j * h + j] = 1;  // identity
    if (h > 1) {
        // sigma^1: t^j -> t^(jp) = (t^p)^j, computed by repeated multiplication.
        Elem t_to_p = one();
        {
            Elem base = gen();
            u64 e = p;
            while (e) {
                if (e & 1) t_to_p = mul(t_to_p, base);
                base = mul(base, base);
                e >>= 1;
            }
        }
        Elem col = one();
        for (u64 j = 0; j < h; ++j) {
            for (u64 i = 0; i < h; ++i) sigma_[1][i * h + j] = col[i];
            col = mul(col, t_to_p);
        }
        for (u64 k = 2; k < h; ++k) {
            // sigma^k = sigma^(k-1) * sigma^1 (matrix product)
            for (u64 i = 0; i < h; ++i)
                for (u64 j = 0; j < h; ++j) {
                    u64 s = 0;
                    for (u64 l = 0; l < h; ++l)
                        s = (s + sigma_[k - 1][i * h + l] * sigma_[1][l * h + j]) % pn;
                    sigma_[k][i * h + j] = s;
                }
        }
    }
}

const Ring& Ring::get(u64 p, u64 h, u64 n) {
    static std::map<std::tuple<u64, u64, u64>, Ring> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, h, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, Ring(p, h, n)).first;
    return it->second;
}

Elem Ring::one() const {
    Elem e(h, 0);
    e[0] = 1;
    return e;
}

Elem Ring::gen() const {
    Elem e(h, 0);
    if (h == 1)
        e[0] = (pn - modulus[0]) % pn;  // t = -c_0
    else
        e[1] = 1;
    return e;
}

Elem Ring::from_int(u64 c) const {
    Elem e(h, 0);
    e[0] = c % pn;
    return e;
}

bool Ring::is_zero(const Elem& x) const {
    for (u64 v : x)
        if (v % pn) return false;
    return true;
}

Elem Ring::add(const Elem& a, const Elem& b) const {
    Elem r(h);
    for (u64 i = 0; i < h; ++i) r[i] = (a[i] + b[i]) % pn;
    return r;
}

Elem Ring::sub(const Elem& a, const Elem& b) const {
    Elem r(h);
    for (u64 i = 0; i < h; ++i) r[i] = (a[i] + pn - b[i] % pn) % pn;
    return r;
}

Elem Ring::neg(const Elem& a) const {
    Elem r(h);
    for (u64 i = 0; i < h; ++i) r[i] = (pn - a[i] % pn) % pn;
    return r;
}

Elem Ring::smul(u64 c, const Elem& a) const {
    Elem r(h);
    c %= pn;
    for (u64 i = 0; i < h; ++i) r[i] = a[i] % pn * c % pn;
    return r;
}

Elem Ring::mul(const Elem& a, const Elem& b) const {
    std::vector<u64> prod(2 * h - 1, 0);
    for (u64 i = 0; i < h; ++i) {
        if (a[i] == 0) continue;
        for (u64 j = 0; j < h; ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % pn;
    }
    Elem r(h);
    for (u64 i = 0; i < h; ++i) r[i] = prod[i];
    for (u64 i = h; i < 2 * h - 1; ++i) {
        u64 c = prod[i];
        if (c == 0) continue;
        const auto& row = red_[i - h];
        for (u64 j = 0; j < h; ++j) r[j] = (r[j] + c * row[j]) % pn;
    }
    return r;
}

Elem Ring::pow(const Elem& a, u128 e) const {
    Elem r = one();
    Elem base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

Elem Ring::frobenius(const Elem& x, i64 k) const {
    i64 kk = ((k % i64(h)) + i64(h)) % i64(h);
    if (kk == 0) return x;
    const auto& M = sigma_[size_t(kk)];
    Elem r(h, 0);
    for (u64 i = 0; i < h; ++i) {
        u64 s = 0;
        for (u64 j = 0; j < h; ++j) s = (s + M[i * h + j] * (x[j] % pn)) % pn;
        r[i] = s;
    }
    return r;
}

bool Ring::is_unit(const Elem& x) const {
    for (u64 v : x)
        if (v % p) return true;
    return false;
}

Elem Ring::inv(const Elem& x) const {
    require(is_unit(x), "Ring::inv: element is not a unit");
    // Unit group of W_n(F_q) has order (q - 1) * q^(... ) ; rather than track
    // the exact order, use x^-1 = x^(m-1) with m = |units| = (q-1) * p^(h(n-1)).
    u128 m = q - 1;
    for (u64 i = 0; i < h * (n - 1); ++i) m *= p;
    Elem r = pow(x, m - 1);
    check_internal(is_zero(sub(mul(r, x), one())), "Ring::inv: inverse check failed");
    return r;
}

Elem Ring::reduce_level(const Elem& x, const Ring& target) const {
    check_internal(target.p == p && target.h == h && target.n <= n,
                   "Ring::reduce_level: incompatible target");
    Elem r(h);
    for (u64 i = 0; i < h; ++i) r[i] = x[i] % target.pn;
    return r;
}

Elem Ring::teichmuller(const Elem& a) const {
    Elem x(h);
    for (u64 i = 0; i < h; ++i) x[i] = a[i] % p;  // coordinate-wise lift
    for (u64 it = 0; it < n; ++it) x = pow(x, q);
    check_internal(x == pow(x, q), "teichmuller: lift did not stabilize");
    return x;
}

u64 Ring::mult_order(const Elem& x) const {
    require(is_unit(x), "mult_order: not a unit");
    Elem cur = x;
    u64 o = 1;
    Elem id = one();
    u64 bound = pn;
    for (u64 i = 1; i < h; ++i) bound *= pn;
    while (cur != id) {
        cur = mul(cur, x);
        ++o;
        check_internal(o <= bound, "mult_order: runaway order");
    }
    return o;
}

Embedding make_embedding(const Ring& src, const Ring& dst) {
    require(src.p == dst.p && src.n == dst.n && dst.h % src.h == 0,
            "make_embedding: target must be an extension at the same level");
    if (src.h == dst.h) return {&src, &dst, dst.gen()};
    // Roots of the source modulus among Teichmuller elements of dst:
    // candidates are powers t_dst^(j * (Q-1)/(q-1)).
    u64 step = (dst.q - 1) / (src.q - 1);
    Elem base = dst.pow(dst.gen(), step);
    Elem cand = base;
    for (u64 j = 1; j < src.q; ++j) {
        // Evaluate the (monic) source modulus at cand.
        Elem val = dst.zero();
        Elem powc = dst.one();
        for (u64 i = 0; i < src.h; ++i) {
            val = dst.add(val, dst.smul(src.modulus[i], powc));
            powc = dst.mul(powc, cand);
        }
        val = dst.add(val, powc);  // leading term
        if (dst.is_zero(val)) return {&src, &dst, cand};
        cand = dst.mul(cand, base);
    }
    throw InternalError("make_embedding: no root of source modulus found");
}

Elem embed(const Embedding& e, const Elem& x) {
    const Ring& S = *e.src;
    const Ring& D = *e.dst;
    Elem val = D.zero();
    Elem powu = D.one();
    for (u64 i = 0; i < S.h; ++i) {
        val = D.add(val, D.smul(x[i], powu));
        powu = D.mul(powu, e.image_of_t);
    }
    return val;
}

}  // namespace dmt
