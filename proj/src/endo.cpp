#include "dmt/endo.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace dmt {

u64 EndoAlgebra::log_size() const {
    u64 s = 0;
    for (const auto& g : gens) s += g.order_exp;
    return s;
}

size_t EndoAlgebra::mod_p_dim() const {
    size_t c = 0;
    for (const auto& g : gens)
        if (g.order_exp == n) ++c;
    return c;
}

namespace {

constexpr u64 kSEnumGuard = u64(1) << 24;
constexpr size_t kTableCap = 4096;
constexpr u64 kUnitaryGuard = u64(1) << 22;
constexpr u64 kExhaustiveGuard = u64(1) << 24;

size_t amb_index(size_t rank, size_t h, size_t i, size_t j, size_t k) {
    return (i * rank + j) * h + k;
}

std::vector<u64> flatten_mat(const Ring& K, const KMat& A) {
    std::vector<u64> v(A.rows * A.cols * K.h, 0);
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t j = 0; j < A.cols; ++j)
            for (size_t k = 0; k < K.h; ++k)
                v[amb_index(A.cols, K.h, i, j, k)] = A.at(i, j)[k] % K.pn;
    return v;
}

KMat unflatten_mat(const Ring& K, size_t rank, const std::vector<u64>& v) {
    KMat A(rank, rank, K.zero());
    for (size_t i = 0; i < rank; ++i)
        for (size_t j = 0; j < rank; ++j) {
            Elem e(K.h, 0);
            for (size_t k = 0; k < K.h; ++k) e[k] = v[amb_index(rank, K.h, i, j, k)] % K.pn;
            A.at(i, j) = e;
        }
    return A;
}

KMat unflatten_mat_p(const Ring& K1, size_t rank, const std::vector<u32>& v) {
    std::vector<u64> w(v.begin(), v.end());
    return unflatten_mat(K1, rank, w);
}

FpMat fp_matmul(const FpMat& A, const FpMat& B, u32 p) {
    check_internal(A.cols == B.rows, "fp_matmul: shape mismatch");
    FpMat C(A.rows, B.cols);
    std::vector<u64> row(B.cols);
    for (size_t i = 0; i < A.rows; ++i) {
        std::fill(row.begin(), row.end(), 0);
        for (size_t k = 0; k < A.cols; ++k) {
            u64 a = A.at(i, k) % p;
            if (!a) continue;
            const u32* brow = &B.a[k * B.cols];
            for (size_t j = 0; j < B.cols; ++j) row[j] += a * brow[j];
        }
        for (size_t j = 0; j < B.cols; ++j) C.at(i, j) = u32(row[j] % p);
    }
    return C;
}

// ---------- level-1 algebra engine ----------

class AlgebraFp {
  public:
    const Ring* K1;  // n = 1 ring
    size_t rank, h, ambient, d;
    u32 p;
    std::vector<u32> R;        // d x ambient echelon basis (row-major)
    std::vector<size_t> piv;   // pivot column per row
    std::vector<u32> idco;     // coordinates of the identity
    std::vector<FpMat> L;      // regular representation, built by build_L()

    AlgebraFp(const Ring& K, size_t rank_, const std::vector<std::vector<u32>>& basis)
        : K1(&K), rank(rank_), h(K.h), ambient(rank_ * rank_ * K.h), p(u32(K.p)) {
        check_internal(K.n == 1, "AlgebraFp: level-1 ring required");
        FpMat B(basis.size(), ambient);
        for (size_t i = 0; i < basis.size(); ++i) {
            check_internal(basis[i].size() == ambient, "AlgebraFp: basis size mismatch");
            for (size_t j = 0; j < ambient; ++j) B.at(i, j) = basis[i][j] % p;
        }
        auto pv = fp_rref(B, p);
        d = pv.size();
        piv = pv;
        R.resize(d * ambient);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < ambient; ++j) R[i * ambient + j] = B.at(i, j);
        // identity coordinates
        std::vector<u32> idamb(ambient, 0);
        for (size_t i = 0; i < rank; ++i) idamb[amb_index(rank, h, i, i, 0)] = 1;
        auto c = try_coords(idamb);
        check_internal(c.has_value(), "AlgebraFp: identity not in the algebra");
        idco = *c;
    }

    std::optional<std::vector<u32>> try_coords(std::vector<u32> v) const {
        check_internal(v.size() == ambient, "AlgebraFp: ambient size mismatch");
        std::vector<u32> co(d, 0);
        for (size_t i = 0; i < d; ++i) {
            u32 c = v[piv[i]] % p;
            if (!c) continue;
            co[i] = c;
            const u32* row = &R[i * ambient];
            for (size_t t = 0; t < ambient; ++t) v[t] = u32((v[t] + u64(p - c) * row[t]) % p);
        }
        for (size_t t = 0; t < ambient; ++t)
            if (v[t] % p) return std::nullopt;
        return co;
    }

    std::vector<u32> coords(const std::vector<u32>& v) const {
        auto c = try_coords(v);
        check_internal(c.has_value(), "AlgebraFp: vector not in the algebra");
        return *c;
    }

    std::vector<u32> to_ambient(const std::vector<u32>& co) const {
        std::vector<u64> acc(ambient, 0);
        for (size_t i = 0; i < d; ++i) {
            u64 c = co[i] % p;
            if (!c) continue;
            const u32* row = &R[i * ambient];
            for (size_t t = 0; t < ambient; ++t) acc[t] += c * row[t];
        }
        std::vector<u32> out(ambient);
        for (size_t t = 0; t < ambient; ++t) out[t] = u32(acc[t] % p);
        return out;
    }

    std::vector<u32> mul_ambient(const std::vector<u32>& a, const std::vector<u32>& b) const {
        KMat A = unflatten_mat_p(*K1, rank, a);
        KMat B = unflatten_mat_p(*K1, rank, b);
        KMat C = kmat_mul(*K1, A, B);
        auto v = flatten_mat(*K1, C);
        return std::vector<u32>(v.begin(), v.end());
    }

    void build_L() {
        if (!L.empty()) return;
        L.assign(d, FpMat(d, d));
        for (size_t i = 0; i < d; ++i) {
            std::vector<u32> bi(R.begin() + i * ambient, R.begin() + (i + 1) * ambient);
            for (size_t j = 0; j < d; ++j) {
                std::vector<u32> bj(R.begin() + j * ambient, R.begin() + (j + 1) * ambient);
                auto co = coords(mul_ambient(bi, bj));
                for (size_t r = 0; r < d; ++r) L[i].at(r, j) = co[r];
            }
        }
    }

    FpMat lmat(const std::vector<u32>& co) const {
        check_internal(!L.empty(), "AlgebraFp: build_L() first");
        FpMat M(d, d);
        std::vector<u64> acc(d * d, 0);
        for (size_t i = 0; i < d; ++i) {
            u64 c = co[i] % p;
            if (!c) continue;
            for (size_t t = 0; t < d * d; ++t) acc[t] += c * L[i].a[t];
        }
        for (size_t t = 0; t < d * d; ++t) M.a[t] = u32(acc[t] % p);
        return M;
    }

    std::vector<u32> apply(const FpMat& M, const std::vector<u32>& v) const {
        std::vector<u32> out(d);
        for (size_t r = 0; r < d; ++r) {
            u64 acc = 0;
            const u32* row = &M.a[r * d];
            for (size_t c = 0; c < d; ++c) acc += u64(row[c]) * v[c];
            out[r] = u32(acc % p);
        }
        return out;
    }

    // Product in coordinates via the regular representation.
    std::vector<u32> mul_coords(const std::vector<u32>& a, const std::vector<u32>& b) const {
        std::vector<u64> acc(d, 0);
        for (size_t i = 0; i < d; ++i) {
            u64 c = a[i] % p;
            if (!c) continue;
            const FpMat& Li = L[i];
            for (size_t r = 0; r < d; ++r) {
                u64 s = 0;
                const u32* row = &Li.a[r * d];
                for (size_t t = 0; t < d; ++t) s += u64(row[t]) * b[t];
                acc[r] += c * (s % p);
            }
        }
        std::vector<u32> out(d);
        for (size_t r = 0; r < d; ++r) out[r] = u32(acc[r] % p);
        return out;
    }
};

// ---------- subspace utilities over coordinates ----------

// Rows of a matrix kept in reduced echelon form with incremental insertion.
struct EchelonSpace {
    size_t width;
    u32 p;
    std::vector<std::vector<u32>> rows;
    std::vector<size_t> piv;

    EchelonSpace(size_t w, u32 p_) : width(w), p(p_) {}

    // Reduce v by the current rows; returns the residue.
    std::vector<u32> reduce(std::vector<u32> v) const {
        for (size_t i = 0; i < rows.size(); ++i) {
            u32 c = v[piv[i]] % p;
            if (!c) continue;
            for (size_t t = 0; t < width; ++t)
                v[t] = u32((v[t] + u64(p - c) * rows[i][t]) % p);
        }
        return v;
    }

    bool insert(std::vector<u32> v) {
        v = reduce(std::move(v));
        size_t pc = width;
        for (size_t t = 0; t < width; ++t)
            if (v[t] % p) {
                pc = t;
                break;
            }
        if (pc == width) return false;
        u32 inv = fp_inv(v[pc], p);
        for (size_t t = 0; t < width; ++t) v[t] = u32(u64(v[t]) * inv % p);
        for (size_t i = 0; i < rows.size(); ++i) {
            u32 c = rows[i][pc] % p;
            if (!c) continue;
            for (size_t t = 0; t < width; ++t)
                rows[i][t] = u32((rows[i][t] + u64(p - c) * v[t]) % p);
        }
        size_t pos = 0;
        while (pos < piv.size() && piv[pos] < pc) ++pos;
        rows.insert(rows.begin() + pos, std::move(v));
        piv.insert(piv.begin() + pos, pc);
        return true;
    }

    size_t dim() const { return rows.size(); }
    bool contains(const std::vector<u32>& v) const {
        auto r = reduce(v);
        for (u32 x : r)
            if (x % p) return false;
        return true;
    }
};

// ---------- radical (Friedl-Ronyai, characteristic p) ----------

struct DenseAlgebra {
    u32 p;
    size_t d;
    const std::vector<FpMat>* L;  // regular representation of the basis
};

FpMat dense_lmat(const DenseAlgebra& A, const std::vector<u32>& co) {
    FpMat M(A.d, A.d);
    std::vector<u64> acc(A.d * A.d, 0);
    for (size_t i = 0; i < A.d; ++i) {
        u64 c = co[i] % A.p;
        if (!c) continue;
        for (size_t t = 0; t < A.d * A.d; ++t) acc[t] += c * (*A.L)[i].a[t];
    }
    for (size_t t = 0; t < A.d * A.d; ++t) M.a[t] = u32(acc[t] % A.p);
    return M;
}

// One run of the stage chain.  cur is a list of coordinate vectors spanning
// the current subspace; returns the final subspace basis.
std::vector<std::vector<u32>> radical_stages(const DenseAlgebra& A, bool heuristic, u64 seed) {
    u32 p = A.p;
    size_t d = A.d;
    // current basis as echelon rows
    EchelonSpace cur(d, p);
    for (size_t i = 0; i < d; ++i) {
        std::vector<u32> e(d, 0);
        e[i] = 1;
        cur.insert(e);
    }
    // Stage 0: trace bilinear form (rigorous and cheap).
    {
        std::vector<std::vector<u64>> T(d, std::vector<u64>(d, 0));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j <= i; ++j) {
                u64 s = 0;
                for (size_t r = 0; r < d; ++r)
                    for (size_t c = 0; c < d; ++c)
                        s += u64((*A.L)[i].at(r, c)) * (*A.L)[j].at(c, r);
                T[i][j] = T[j][i] = s % p;
            }
        size_t dc = cur.dim();
        FpMat G(dc, dc);
        for (size_t a = 0; a < dc; ++a)
            for (size_t b = 0; b < dc; ++b) {
                u64 s = 0;
                for (size_t i = 0; i < d; ++i) {
                    if (!(cur.rows[a][i] % p)) continue;
                    u64 partial = 0;
                    for (size_t j = 0; j < d; ++j) partial += T[i][j] * cur.rows[b][j] % p;
                    s += u64(cur.rows[a][i]) * (partial % p);
                }
                G.at(a, b) = u32(s % p);
            }
        auto kb = fp_kernel(G, p);
        EchelonSpace next(d, p);
        for (const auto& a : kb) {
            std::vector<u32> v(d, 0);
            for (size_t t = 0; t < cur.dim(); ++t) {
                if (!(a[t] % p)) continue;
                for (size_t i = 0; i < d; ++i)
                    v[i] = u32((v[i] + u64(a[t]) * cur.rows[t][i]) % p);
            }
            next.insert(v);
        }
        cur = next;
    }
    // Stages i >= 1: characteristic polynomial coefficient functionals.
    std::mt19937_64 rng(seed ^ (u64(d) * 0x9e3779b97f4a7c15ULL) ^ p);
    u64 pi = 1;
    for (u64 stage = 1; pi <= d / p; ++stage) {
        pi *= p;
        if (cur.dim() == 0) break;
        size_t dc = cur.dim();
        // Sample set of y's (all basis rows when small or rigorous).
        std::vector<std::vector<u32>> ys;
        size_t T = 12;
        if (!heuristic || dc <= T) {
            ys = cur.rows;
        } else {
            for (size_t s = 0; s < T; ++s) {
                std::vector<u32> y(d, 0);
                bool nz = false;
                while (!nz) {
                    for (size_t t = 0; t < dc; ++t) {
                        u32 c = u32(rng() % p);
                        if (c) nz = true;
                        for (size_t i = 0; i < d; ++i)
                            y[i] = u32((y[i] + u64(c) * cur.rows[t][i]) % p);
                    }
                }
                ys.push_back(std::move(y));
            }
        }
        std::vector<FpMat> Lys;
        Lys.reserve(ys.size());
        for (const auto& y : ys) Lys.push_back(dense_lmat(A, y));
        FpMat M(ys.size(), dc);
        size_t cidx = d - size_t(pi);
        for (size_t j = 0; j < dc; ++j) {
            FpMat Lx = dense_lmat(A, cur.rows[j]);
            for (size_t s = 0; s < ys.size(); ++s) {
                FpMat prod = fp_matmul(Lx, Lys[s], p);
                auto cp = fp_charpoly(prod, p);
                M.at(s, j) = cp[cidx];
            }
        }
        auto kb = fp_kernel(M, p);
        EchelonSpace next(d, p);
        for (const auto& a : kb) {
            std::vector<u32> v(d, 0);
            for (size_t t = 0; t < dc; ++t) {
                if (!(a[t] % p)) continue;
                for (size_t i = 0; i < d; ++i)
                    v[i] = u32((v[i] + u64(a[t]) * cur.rows[t][i]) % p);
            }
            next.insert(v);
        }
        cur = next;
    }
    return cur.rows;
}

bool radical_certify(const DenseAlgebra& A, const std::vector<std::vector<u32>>& J);

std::vector<std::vector<u32>> radical_dense(const DenseAlgebra& A, u64 seed) {
    auto J = radical_stages(A, /*heuristic=*/true, seed);
    if (radical_certify(A, J)) return J;
    J = radical_stages(A, /*heuristic=*/false, seed);
    check_internal(radical_certify(A, J), "radical: rigorous chain failed certification");
    return J;
}

// Certifies that J is a nilpotent two-sided ideal with semisimple quotient,
// which proves J = rad(A).
bool radical_certify(const DenseAlgebra& A, const std::vector<std::vector<u32>>& J) {
    u32 p = A.p;
    size_t d = A.d;
    EchelonSpace js(d, p);
    for (const auto& v : J) js.insert(v);
    // Two-sided ideal.
    std::vector<FpMat> Ljs;
    for (const auto& j : js.rows) Ljs.push_back(dense_lmat(A, j));
    for (size_t bi = 0; bi < d; ++bi) {
        std::vector<u32> e(d, 0);
        e[bi] = 1;
        for (size_t k = 0; k < js.rows.size(); ++k) {
            // e_bi * j: column of L_bi applied to j
            std::vector<u32> left(d);
            for (size_t r = 0; r < d; ++r) {
                u64 s = 0;
                for (size_t t = 0; t < d; ++t) s += u64((*A.L)[bi].at(r, t)) * js.rows[k][t];
                left[r] = u32(s % p);
            }
            if (!js.contains(left)) return false;
            // j * e_bi: column bi of lmat(j)
            std::vector<u32> right(d);
            for (size_t r = 0; r < d; ++r) right[r] = Ljs[k].at(r, bi);
            if (!js.contains(right)) return false;
        }
    }
    // Nilpotent: powers strictly decrease to zero.
    std::vector<std::vector<u32>> power = js.rows;
    size_t guard = 0;
    while (!power.empty()) {
        if (++guard > d + 1) return false;
        EchelonSpace next(d, p);
        for (const auto& Lj : Ljs)
            for (const auto& v : power) {
                std::vector<u32> w(d);
                for (size_t r = 0; r < d; ++r) {
                    u64 s = 0;
                    for (size_t t = 0; t < d; ++t) s += u64(Lj.at(r, t)) * v[t];
                    w[r] = u32(s % p);
                }
                next.insert(w);
            }
        if (next.dim() >= power.size() && next.dim() > 0) return false;
        power = next.rows;
    }
    // Semisimple quotient: the quotient algebra has zero radical (rigorous
    // chain on the small quotient).
    std::set<size_t> jpiv(js.piv.begin(), js.piv.end());
    std::vector<size_t> freeco;
    for (size_t i = 0; i < d; ++i)
        if (!jpiv.count(i)) freeco.push_back(i);
    size_t dq = freeco.size();
    if (dq == 0) return true;
    auto project = [&](const std::vector<u32>& full) {
        auto red = js.reduce(full);
        std::vector<u32> q(dq);
        for (size_t a = 0; a < dq; ++a) q[a] = red[freeco[a]];
        return q;
    };
    std::vector<FpMat> LQ(dq, FpMat(dq, dq));
    for (size_t a = 0; a < dq; ++a) {
        for (size_t b = 0; b < dq; ++b) {
            // e_{freeco[a]} * e_{freeco[b]} = column freeco[b] of L_{freeco[a]}
            std::vector<u32> prod(d);
            for (size_t r = 0; r < d; ++r) prod[r] = (*A.L)[freeco[a]].at(r, freeco[b]);
            auto q = project(prod);
            for (size_t r = 0; r < dq; ++r) LQ[a].at(r, b) = q[r];
        }
    }
    DenseAlgebra Q{p, dq, &LQ};
    auto rq = radical_stages(Q, /*heuristic=*/false, 0);
    return rq.empty();
}

// ---------- structured automorphism computation ----------

struct SAutCtx {
    size_t dim_e = 0, dim_j = 0;
    u64 sunit_count = 0;  // |S^x| (unpolarized) or |image of U in S^x| (polarized)
    u128 aut_order = 0;   // |E^x| at n=1, or |U| when pairing present
    // pi0 machinery: sunits are S-section coordinate vectors (full d-length,
    // supported on free coordinates).
    std::vector<std::vector<u32>> sunits;
    std::map<std::vector<u32>, u32> sindex;
    std::vector<u32> coset_of;  // sunit index -> pi0 element
    GroupTable pi0;
    // context needed to classify further elements
    EchelonSpace jspace{0, 2};
    std::vector<size_t> freeco;
};

u128 u128_pow(u64 p, u64 e) {
    u128 r = 1;
    for (u64 i = 0; i < e; ++i) {
        check_internal(r <= (u128(1) << 120) / p, "u128_pow: overflow");
        r *= p;
    }
    return r;
}

// c * p^e, or 0 when the product exceeds 2^120 (the caller documents 0 as
// "does not fit"; component-group data never depends on this value).
u128 u128_mul_pow_or_zero(u64 c, u64 p, u64 e) {
    u128 r = c;
    for (u64 i = 0; i < e; ++i) {
        if (r > (u128(1) << 120) / p) return 0;
        r *= p;
    }
    return r;
}

SAutCtx struct_aut(AlgebraFp& A, const std::optional<KMat>& pairing) {
    const u32 p = A.p;
    const size_t d = A.d;
    A.build_L();
    DenseAlgebra DA{p, d, &A.L};
    auto J = radical_dense(DA, 0x0d1e0d0eULL);
    SAutCtx ctx;
    ctx.dim_e = d;
    ctx.dim_j = J.size();
    ctx.jspace = EchelonSpace(d, p);
    for (const auto& v : J) ctx.jspace.insert(v);
    std::set<size_t> jpiv(ctx.jspace.piv.begin(), ctx.jspace.piv.end());
    for (size_t i = 0; i < d; ++i)
        if (!jpiv.count(i)) ctx.freeco.push_back(i);
    size_t dimS = ctx.freeco.size();
    auto reduceJ = [&](const std::vector<u32>& v) { return ctx.jspace.reduce(v); };

    // Enumerate the semisimple section.
    {
        double bits = double(dimS) * std::log2(double(p));
        require(bits <= 24.0, "automorphism_group: semisimple section exceeds the 2^24 guard");
    }
    u64 scount = 1;
    for (size_t i = 0; i < dimS; ++i) scount *= p;
    auto smul = [&](const std::vector<u32>& a, const std::vector<u32>& b) {
        return reduceJ(A.mul_coords(a, b));
    };
    std::vector<std::vector<u32>> units;
    {
        std::vector<u32> co(d, 0);
        for (u64 code = 0; code < scount; ++code) {
            u64 c = code;
            for (size_t i = 0; i < dimS; ++i) {
                co[ctx.freeco[i]] = u32(c % p);
                c /= p;
            }
            if (code == 0) continue;
            // unit in S iff left multiplication on the section has full rank
            FpMat Ms(dimS, dimS);
            bool zero = true;
            for (size_t b = 0; b < dimS; ++b) {
                std::vector<u32> eb(d, 0);
                eb[ctx.freeco[b]] = 1;
                auto pr = smul(co, eb);
                for (size_t r = 0; r < dimS; ++r) {
                    Ms.at(r, b) = pr[ctx.freeco[r]];
                    if (pr[ctx.freeco[r]]) zero = false;
                }
            }
            if (zero) continue;
            if (fp_rank(Ms, p) == dimS) units.push_back(co);
        }
    }

    if (!pairing) {
        ctx.sunit_count = units.size();
        ctx.aut_order = u128_mul_pow_or_zero(units.size(), p, ctx.dim_j);
        ctx.sunits = units;
    } else {
        // star(x) = P^-1 x^T P as a linear map on coordinates
        const Ring& K1 = *A.K1;
        auto Pinv = kmat_inv(K1, *pairing);
        check_internal(Pinv.has_value(), "struct_aut: pairing not invertible");
        std::vector<std::vector<u32>> starL(d);
        for (size_t i = 0; i < d; ++i) {
            std::vector<u32> bi(A.R.begin() + i * A.ambient, A.R.begin() + (i + 1) * A.ambient);
            KMat X = unflatten_mat_p(K1, A.rank, bi);
            KMat S = kmat_mul(K1, *Pinv, kmat_mul(K1, kmat_transpose(X), *pairing));
            auto v = flatten_mat(K1, S);
            std::vector<u32> amb(v.begin(), v.end());
            auto co = A.try_coords(amb);
            check_internal(co.has_value(), "struct_aut: adjoint leaves the algebra");
            starL[i] = *co;
        }
        auto star = [&](const std::vector<u32>& co) {
            std::vector<u64> acc(d, 0);
            for (size_t i = 0; i < d; ++i) {
                u64 c = co[i] % p;
                if (!c) continue;
                for (size_t r = 0; r < d; ++r) acc[r] += c * starL[i][r];
            }
            std::vector<u32> out(d);
            for (size_t r = 0; r < d; ++r) out[r] = u32(acc[r] % p);
            return out;
        };
        // Radical filtration J^1, J^2, ...
        std::vector<std::vector<std::vector<u32>>> filt;
        filt.push_back(ctx.jspace.rows);
        std::vector<FpMat> Ljs;
        for (const auto& j : ctx.jspace.rows) Ljs.push_back(A.lmat(j));
        while (!filt.back().empty()) {
            EchelonSpace next(d, p);
            for (const auto& Lj : Ljs)
                for (const auto& v : filt.back()) next.insert(A.apply(Lj, v));
            filt.push_back(next.rows);
            check_internal(filt.size() <= d + 2, "struct_aut: radical filtration too long");
        }
        // Level 0: unitary units of the section mod J.
        std::vector<std::vector<u32>> Lset;
        for (const auto& u : units) {
            auto diff = A.mul_coords(star(u), u);
            for (size_t r = 0; r < d; ++r) diff[r] = u32((diff[r] + u64(p) - A.idco[r]) % p);
            auto red = reduceJ(diff);
            bool z = true;
            for (u32 x : red)
                if (x % p) z = false;
            if (z) Lset.push_back(u);
        }
        // Lift level by level through J^k / J^(k+1).
        for (size_t k = 1; k < filt.size(); ++k) {
            const auto& qbasis = filt[k - 1];  // basis of J^k (spans J^k/J^(k+1) redundantly)
            const auto& nk1 = filt[k];         // J^(k+1)
            if (qbasis.empty()) break;
            EchelonSpace n1(d, p);
            for (const auto& v : nk1) n1.insert(v);
            auto redN1 = [&](const std::vector<u32>& v) { return n1.reduce(v); };
            std::vector<std::vector<u32>> newL;
            std::set<std::vector<u32>> seen;
            for (const auto& Aco : Lset) {
                auto sA = star(Aco);
                auto e = A.mul_coords(sA, Aco);
                for (size_t r = 0; r < d; ++r)
                    e[r] = u32((u64(A.idco[r]) + p - e[r]) % p);  // e = 1 - A* A
                // columns: star(y) A + star(A) y for y in qbasis
                FpMat M(d, qbasis.size());
                for (size_t b = 0; b < qbasis.size(); ++b) {
                    auto val = A.mul_coords(star(qbasis[b]), Aco);
                    auto val2 = A.mul_coords(sA, qbasis[b]);
                    for (size_t r = 0; r < d; ++r) val[r] = u32((val[r] + val2[r]) % p);
                    auto red = redN1(val);
                    for (size_t r = 0; r < d; ++r) M.at(r, b) = red[r];
                }
                auto target = redN1(e);
                auto part = fp_solve(M, target, p);
                if (!part) continue;
                auto kb = fp_kernel(M, p);
                // enumerate the affine solution set
                std::vector<u32> coeffs(kb.size(), 0);
                while (true) {
                    std::vector<u32> sol = *part;
                    for (size_t t = 0; t < kb.size(); ++t)
                        if (coeffs[t])
                            for (size_t b = 0; b < sol.size(); ++b)
                                sol[b] = u32((sol[b] + u64(coeffs[t]) * kb[t][b]) % p);
                    // y = sum sol_b qbasis[b]
                    std::vector<u32> newco = Aco;
                    for (size_t b = 0; b < qbasis.size(); ++b) {
                        if (!(sol[b] % p)) continue;
                        for (size_t r = 0; r < d; ++r)
                            newco[r] = u32((newco[r] + u64(sol[b]) * qbasis[b][r]) % p);
                    }
                    auto key = redN1(newco);
                    if (!seen.count(key)) {
                        seen.insert(key);
                        newL.push_back(newco);
                        require(newL.size() <= kUnitaryGuard,
                                "automorphism_group: unitary enumeration exceeds guard");
                    }
                    // next coefficient vector
                    size_t t = 0;
                    while (t < coeffs.size()) {
                        if (++coeffs[t] < p) break;
                        coeffs[t] = 0;
                        ++t;
                    }
                    if (t == coeffs.size()) break;
                }
            }
            Lset = std::move(newL);
        }
        // Final exact filter.
        std::vector<std::vector<u32>> U;
        for (const auto& Aco : Lset) {
            auto prod = A.mul_coords(star(Aco), Aco);
            bool ok = true;
            for (size_t r = 0; r < d; ++r)
                if (prod[r] % p != A.idco[r] % p) ok = false;
            if (ok) U.push_back(Aco);
        }
        ctx.aut_order = U.size();
        std::set<std::vector<u32>> img;
        for (const auto& Aco : U) img.insert(reduceJ(Aco));
        ctx.sunits.assign(img.begin(), img.end());
        ctx.sunit_count = ctx.sunits.size();
        units = ctx.sunits;
    }

    // pi0: quotient of the S-image group by O_p.
    const auto& elems = ctx.sunits;
    require(elems.size() <= kTableCap, "pi0: unit table exceeds the table cap");
    for (u32 i = 0; i < elems.size(); ++i) ctx.sindex[elems[i]] = i;
    GroupTable G;
    G.n = elems.size();
    G.mul.resize(G.n * G.n);
    auto idred2 = reduceJ(A.idco);
    auto idit = ctx.sindex.find(idred2);
    check_internal(idit != ctx.sindex.end(), "pi0: identity missing from unit table");
    G.id = idit->second;
    for (size_t a = 0; a < G.n; ++a)
        for (size_t b = 0; b < G.n; ++b) {
            auto prod = smul(elems[a], elems[b]);
            auto it = ctx.sindex.find(prod);
            check_internal(it != ctx.sindex.end(), "pi0: unit table not closed");
            G.mul[a * G.n + b] = it->second;
        }
    auto N = op_subgroup(G, p);
    ctx.pi0 = quotient_table(G, N, &ctx.coset_of);
    return ctx;
}

DieudonneModule reduce_level_module(const DieudonneModule& M) {
    const Ring& K = M.R();
    const Ring& K1 = Ring::get(K.p, K.h, 1);
    auto red = [&](const KMat& A) {
        KMat B(A.rows, A.cols, K1.zero());
        for (size_t i = 0; i < A.a.size(); ++i) {
            Elem e(K.h, 0);
            for (size_t k = 0; k < K.h; ++k) e[k] = A.a[i][k] % K.p;
            B.a[i] = e;
        }
        return B;
    };
    DieudonneModule out;
    out.ring = &K1;
    out.rank = M.rank;
    out.F = {red(M.F.matrix), 1};
    out.V = {red(M.V.matrix), -1};
    if (M.pairing) out.pairing = red(*M.pairing);
    out.blocks = M.blocks;
    validate_module(out);
    return out;
}

}  // namespace

EndoAlgebra endomorphism_algebra(const DieudonneModule& M, bool pairing_compatible) {
    require(!pairing_compatible || M.pairing.has_value(),
            "endomorphism_algebra: pairing_compatible requires a pairing");
    const Ring& K = M.R();
    size_t r = M.rank, h = K.h;
    bool graded = pairing_compatible && M.blocks.size() > 1;
    std::vector<std::pair<size_t, size_t>> entries;
    if (graded) {
        for (auto [off, sz] : M.blocks) {
            require(off + sz <= r, "endomorphism_algebra: block out of range");
            for (size_t i = off; i < off + sz; ++i)
                for (size_t j = off; j < off + sz; ++j) entries.emplace_back(i, j);
        }
    } else {
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) entries.emplace_back(i, j);
    }
    size_t U = entries.size() * h;
    size_t Namb = r * r * h;
    // Residuals for the single-entry unknown A = c E_{ij}:
    //   R1 = A F - F A^sigma, R2 = A V - V A^(sigma^-1), flattened.
    std::vector<u64> cols(2 * Namb * U, 0);
    for (size_t u = 0; u < U; ++u) {
        size_t ei = entries[u / h].first, ej = entries[u / h].second, k = u % h;
        Elem c(h, 0);
        c[k] = 1;
        Elem cs = K.frobenius(c, 1);
        Elem csi = K.frobenius(c, -1);
        for (size_t b = 0; b < r; ++b) {
            // (A F)_{ei, b} = c * F_{ej, b} ; (F A^sigma)_{a, ej} = F_{a, ei} sigma(c)
            Elem af = K.mul(c, M.F.matrix.at(ej, b));
            for (size_t kk = 0; kk < h; ++kk)
                cols[(amb_index(r, h, ei, b, kk)) * U + u] =
                    (cols[(amb_index(r, h, ei, b, kk)) * U + u] + af[kk]) % K.pn;
            Elem av = K.mul(c, M.V.matrix.at(ej, b));
            for (size_t kk = 0; kk < h; ++kk)
                cols[(Namb + amb_index(r, h, ei, b, kk)) * U + u] =
                    (cols[(Namb + amb_index(r, h, ei, b, kk)) * U + u] + av[kk]) % K.pn;
        }
        for (size_t a = 0; a < r; ++a) {
            Elem fa = K.mul(M.F.matrix.at(a, ei), cs);
            for (size_t kk = 0; kk < h; ++kk) {
                size_t idx = amb_index(r, h, a, ej, kk) * U + u;
                cols[idx] = (cols[idx] + K.pn - fa[kk] % K.pn) % K.pn;
            }
            Elem va = K.mul(M.V.matrix.at(a, ei), csi);
            for (size_t kk = 0; kk < h; ++kk) {
                size_t idx = (Namb + amb_index(r, h, a, ej, kk)) * U + u;
                cols[idx] = (cols[idx] + K.pn - va[kk] % K.pn) % K.pn;
            }
        }
    }
    EndoAlgebra E;
    E.p = K.p;
    E.h = K.h;
    E.n = K.n;
    E.rank = r;
    E.graded = graded;
    auto expand = [&](const std::vector<u64>& sol) {
        std::vector<u64> full(Namb, 0);
        for (size_t u = 0; u < U; ++u) {
            size_t ei = entries[u / h].first, ej = entries[u / h].second, k = u % h;
            full[amb_index(r, h, ei, ej, k)] = sol[u] % K.pn;
        }
        return full;
    };
    if (K.n == 1) {
        FpMat sys(2 * Namb, U);
        for (size_t i = 0; i < 2 * Namb; ++i)
            for (size_t u = 0; u < U; ++u) sys.at(i, u) = u32(cols[i * U + u] % K.p);
        auto kb = fp_kernel(sys, u32(K.p));
        for (const auto& v : kb) {
            std::vector<u64> sol(v.begin(), v.end());
            E.gens.push_back({expand(sol), 1});
        }
    } else {
        auto kb = zpn_kernel(2 * Namb, U, cols, K.p, K.n);
        for (const auto& g : kb) E.gens.push_back({expand(g.vec), g.order_exp});
    }
    return E;
}

KMat endo_to_matrix(const DieudonneModule& M, const std::vector<u64>& vec) {
    return unflatten_mat(M.R(), M.rank, vec);
}

AutResult automorphism_group(const DieudonneModule& M, u64 m) {
    DieudonneModule Mb = base_change(M, m);
    const Ring& K = Mb.R();
    bool pair = Mb.pairing.has_value();
    EndoAlgebra E = endomorphism_algebra(Mb, pair);
    AutResult out;
    if (K.n == 1) {
        std::vector<std::vector<u32>> basis;
        for (const auto& g : E.gens) basis.emplace_back(g.vec.begin(), g.vec.end());
        AlgebraFp A(K, Mb.rank, basis);
        auto ctx = struct_aut(A, pair ? Mb.pairing : std::nullopt);
        out.aut_order = ctx.aut_order;
        out.pi0 = ctx.pi0;
        out.pi0_order = ctx.pi0.n;
        out.dim_e = ctx.dim_e;
        out.dim_j = ctx.dim_j;
        return out;
    }
    const Ring& K1 = Ring::get(K.p, K.h, 1);
    if (!pair) {
        // |Aut| = |B^x| * p^(L - dim B) with B the mod-p image algebra.
        std::vector<std::vector<u32>> basisB;
        for (const auto& g : E.gens)
            if (g.order_exp == K.n) {
                std::vector<u32> v(g.vec.size());
                for (size_t i = 0; i < v.size(); ++i) v[i] = u32(g.vec[i] % K.p);
                basisB.push_back(std::move(v));
            }
        AlgebraFp B(K1, Mb.rank, basisB);
        auto ctx = struct_aut(B, std::nullopt);
        u64 L = E.log_size();
        check_internal(L >= B.d, "automorphism_group: module size below image dimension");
        out.aut_order = u128_mul_pow_or_zero(ctx.sunit_count, K.p, ctx.dim_j + (L - B.d));
        out.pi0 = ctx.pi0;
        out.pi0_order = ctx.pi0.n;
        out.dim_e = ctx.dim_e;
        out.dim_j = ctx.dim_j;
        return out;
    }
    // Pairing over W_n: exhaustive unitary enumeration (small guarded cases),
    // with pi0 read off in the mod-p fiber.
    u64 L = E.log_size();
    require(u128_pow(K.p, L) <= kUnitaryGuard,
            "automorphism_group: Witt-level unitary enumeration exceeds guard");
    DieudonneModule M1 = reduce_level_module(Mb);
    EndoAlgebra E1 = endomorphism_algebra(M1, true);
    std::vector<std::vector<u32>> basis1;
    for (const auto& g : E1.gens) basis1.emplace_back(g.vec.begin(), g.vec.end());
    AlgebraFp A1(K1, M1.rank, basis1);
    auto ctx1 = struct_aut(A1, M1.pairing);
    // enumerate E_n elements
    std::vector<u64> radix;
    for (const auto& g : E.gens) {
        u64 pe = 1;
        for (u64 i = 0; i < g.order_exp; ++i) pe *= K.p;
        radix.push_back(pe);
    }
    u64 total = 1;
    for (u64 rdx : radix) total *= rdx;
    const KMat& P = *Mb.pairing;
    auto Pinv = kmat_inv(K, P);
    check_internal(Pinv.has_value(), "automorphism_group: pairing not invertible");
    KMat Id = kmat_identity(K, Mb.rank);
    u64 count = 0;
    std::set<std::vector<u32>> img;
    std::vector<u64> digits(radix.size(), 0);
    for (u64 code = 0; code < total; ++code) {
        std::vector<u64> vec(Mb.rank * Mb.rank * K.h, 0);
        for (size_t g = 0; g < digits.size(); ++g) {
            u64 cg = digits[g];
            if (cg)
                for (size_t t = 0; t < vec.size(); ++t)
                    vec[t] = (vec[t] + cg * E.gens[g].vec[t]) % K.pn;
        }
        // advance digits for next iteration
        for (size_t g = 0; g < digits.size(); ++g) {
            if (++digits[g] < radix[g]) break;
            digits[g] = 0;
        }
        KMat X = unflatten_mat(K, Mb.rank, vec);
        KMat st = kmat_mul(K, *Pinv, kmat_mul(K, kmat_transpose(X), P));
        if (!kmat_eq(K, kmat_mul(K, st, X), Id)) continue;
        ++count;
        std::vector<u32> v1(vec.size());
        for (size_t t = 0; t < vec.size(); ++t) v1[t] = u32(vec[t] % K.p);
        auto co = A1.try_coords(v1);
        check_internal(co.has_value(), "automorphism_group: reduction leaves mod-p algebra");
        img.insert(ctx1.jspace.reduce(*co));
    }
    out.aut_order = count;
    out.dim_e = ctx1.dim_e;
    out.dim_j = ctx1.dim_j;
    // pi0 = image subgroup in the mod-p pi0, quotiented by its O_p.
    std::set<u32> classes;
    for (const auto& rep : img) {
        auto it = ctx1.sindex.find(rep);
        check_internal(it != ctx1.sindex.end(), "automorphism_group: image outside unit table");
        classes.insert(ctx1.coset_of[it->second]);
    }
    auto sub = generated_subgroup(ctx1.pi0, {classes.begin(), classes.end()});
    // restrict pi0 table to the subgroup
    std::map<u32, u32> reindex;
    for (u32 s : sub) reindex[s] = u32(reindex.size());
    GroupTable Gs;
    Gs.n = sub.size();
    Gs.id = reindex.at(ctx1.pi0.id);
    Gs.mul.resize(Gs.n * Gs.n);
    for (size_t a = 0; a < sub.size(); ++a)
        for (size_t b = 0; b < sub.size(); ++b)
            Gs.mul[a * Gs.n + b] = reindex.at(ctx1.pi0.at(sub[a], sub[b]));
    auto N = op_subgroup(Gs, K.p);
    out.pi0 = quotient_table(Gs, N, nullptr);
    out.pi0_order = out.pi0.n;
    return out;
}

u64 splitting_degree(const DieudonneModule& M) {
    std::map<u64, u64> memo;
    auto order_at = [&](u64 m) {
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
        u64 o = automorphism_group(M, m).pi0_order;
        memo[m] = o;
        return o;
    };
    for (u64 m = 1; m <= 12; ++m) {
        if (order_at(m) == order_at(2 * m) && order_at(m) == order_at(4 * m)) return m;
    }
    throw SizeGuardError("splitting_degree: no stabilization within the cap m <= 12");
}

AutResult pi0(const DieudonneModule& M) { return automorphism_group(M, splitting_degree(M)); }

LiftImageResult lift_image(u64 c, u64 d, u64 p, u64 n_high, u64 n_low, bool polarized) {
    require(n_high > n_low && n_low >= 1, "lift_image: need n_high > n_low >= 1");
    if (polarized) {
        require(c == 1 && d == 1, "lift_image: polarized path requires (c, d) = (1, 1)");
        require(n_low == 1, "lift_image: polarized path requires n_low = 1");
        DieudonneModule Mh = minimal_module_polarized_11(p, n_high);
        DieudonneModule M1 = minimal_module_polarized_11(p, 1);
        const Ring& K = Mh.R();
        const Ring& K1 = M1.R();
        EndoAlgebra Eh = endomorphism_algebra(Mh, true);
        EndoAlgebra E1 = endomorphism_algebra(M1, true);
        std::vector<std::vector<u32>> basis1;
        for (const auto& g : E1.gens) basis1.emplace_back(g.vec.begin(), g.vec.end());
        AlgebraFp A1(K1, 2, basis1);
        auto ctx1 = struct_aut(A1, M1.pairing);
        u64 L = Eh.log_size();
        require(u128_pow(p, L) <= kUnitaryGuard, "lift_image: enumeration exceeds guard");
        std::vector<u64> radix;
        for (const auto& g : Eh.gens) {
            u64 pe = 1;
            for (u64 i = 0; i < g.order_exp; ++i) pe *= p;
            radix.push_back(pe);
        }
        u64 total = 1;
        for (u64 rdx : radix) total *= rdx;
        const KMat& P = *Mh.pairing;
        auto Pinv = kmat_inv(K, P);
        KMat Id = kmat_identity(K, 2);
        std::set<u32> classes;
        std::vector<u64> digits(radix.size(), 0);
        for (u64 code = 0; code < total; ++code) {
            std::vector<u64> vec(2 * 2 * K.h, 0);
            for (size_t g = 0; g < digits.size(); ++g) {
                u64 cg = digits[g];
                if (cg)
                    for (size_t t = 0; t < vec.size(); ++t)
                        vec[t] = (vec[t] + cg * Eh.gens[g].vec[t]) % K.pn;
            }
            for (size_t g = 0; g < digits.size(); ++g) {
                if (++digits[g] < radix[g]) break;
                digits[g] = 0;
            }
            KMat X = unflatten_mat(K, 2, vec);
            KMat st = kmat_mul(K, *Pinv, kmat_mul(K, kmat_transpose(X), P));
            if (!kmat_eq(K, kmat_mul(K, st, X), Id)) continue;
            std::vector<u32> v1(vec.size());
            for (size_t t = 0; t < vec.size(); ++t) v1[t] = u32(vec[t] % p);
            auto co = A1.try_coords(v1);
            check_internal(co.has_value(), "lift_image: reduction leaves mod-p algebra");
            auto rep = ctx1.jspace.reduce(*co);
            auto it = ctx1.sindex.find(rep);
            check_internal(it != ctx1.sindex.end(), "lift_image: image outside unit table");
            classes.insert(ctx1.coset_of[it->second]);
        }
        return {u64(classes.size()), u64(ctx1.pi0.n)};
    }
    DieudonneModule Mh = minimal_module(c, d, p, n_high);
    DieudonneModule Ml = minimal_module(c, d, p, n_low);
    const Ring& K1 = Ring::get(p, c + d, 1);
    EndoAlgebra Eh = endomorphism_algebra(Mh);
    EndoAlgebra El = endomorphism_algebra(Ml);
    auto mod_p_basis = [&](const EndoAlgebra& E, u64 level) {
        std::vector<std::vector<u32>> basis;
        for (const auto& g : E.gens)
            if (g.order_exp == level) {
                std::vector<u32> v(g.vec.size());
                for (size_t i = 0; i < v.size(); ++i) v[i] = u32(g.vec[i] % p);
                basis.push_back(std::move(v));
            }
        return basis;
    };
    AlgebraFp Bl(K1, c + d, mod_p_basis(El, n_low));
    auto ctx = struct_aut(Bl, std::nullopt);
    auto bh = mod_p_basis(Eh, n_high);
    size_t dimBh = 0;
    {
        FpMat T(bh.size(), bh.empty() ? 1 : bh[0].size());
        for (size_t i = 0; i < bh.size(); ++i)
            for (size_t j = 0; j < bh[i].size(); ++j) T.at(i, j) = bh[i][j];
        dimBh = fp_rank(T, u32(p));
    }
    require(u128_pow(p, dimBh) <= kUnitaryGuard, "lift_image: enumeration exceeds guard");
    u64 total = 1;
    for (size_t i = 0; i < bh.size(); ++i) total *= p;
    std::set<u32> classes;
    for (u64 code = 1; code < total; ++code) {
        u64 cc = code;
        std::vector<u32> vec(bh[0].size(), 0);
        for (size_t g = 0; g < bh.size(); ++g) {
            u32 cg = u32(cc % p);
            cc /= p;
            if (cg)
                for (size_t t = 0; t < vec.size(); ++t)
                    vec[t] = u32((vec[t] + u64(cg) * bh[g][t]) % p);
        }
        KMat X = unflatten_mat_p(K1, c + d, vec);
        if (!kmat_inv(K1, X)) continue;
        auto co = Bl.try_coords(vec);
        check_internal(co.has_value(), "lift_image: B_high not inside B_low");
        auto rep = ctx.jspace.reduce(*co);
        auto it = ctx.sindex.find(rep);
        check_internal(it != ctx.sindex.end(), "lift_image: image outside unit table");
        classes.insert(ctx.coset_of[it->second]);
    }
    classes.insert(ctx.coset_of[ctx.sindex.at(ctx.jspace.reduce(Bl.idco))]);
    auto sub = generated_subgroup(ctx.pi0, {classes.begin(), classes.end()});
    return {u64(sub.size()), u64(ctx.pi0.n)};
}

u128 automorphism_group_exhaustive(const DieudonneModule& M, bool pairing) {
    const Ring& K = M.R();
    EndoAlgebra E = endomorphism_algebra(M, pairing && M.pairing.has_value());
    u64 L = E.log_size();
    require(u128_pow(K.p, L) <= kExhaustiveGuard,
            "automorphism_group_exhaustive: enumeration exceeds guard");
    std::vector<u64> radix;
    for (const auto& g : E.gens) {
        u64 pe = 1;
        for (u64 i = 0; i < g.order_exp; ++i) pe *= K.p;
        radix.push_back(pe);
    }
    u64 total = 1;
    for (u64 rdx : radix) total *= rdx;
    KMat Id = kmat_identity(K, M.rank);
    std::optional<KMat> Pinv;
    if (pairing && M.pairing) {
        Pinv = *kmat_inv(K, *M.pairing);
    }
    u128 count = 0;
    std::vector<u64> digits(radix.size(), 0);
    for (u64 code = 0; code < total; ++code) {
        std::vector<u64> vec(M.rank * M.rank * K.h, 0);
        for (size_t g = 0; g < digits.size(); ++g) {
            u64 cg = digits[g];
            if (cg)
                for (size_t t = 0; t < vec.size(); ++t)
                    vec[t] = (vec[t] + cg * E.gens[g].vec[t]) % K.pn;
        }
        for (size_t g = 0; g < digits.size(); ++g) {
            if (++digits[g] < radix[g]) break;
            digits[g] = 0;
        }
        KMat X = unflatten_mat(K, M.rank, vec);
        if (!kmat_inv(K, X)) continue;
        if (Pinv) {
            KMat st = kmat_mul(K, *Pinv, kmat_mul(K, kmat_transpose(X), *M.pairing));
            if (!kmat_eq(K, kmat_mul(K, st, X), Id)) continue;
        }
        ++count;
    }
    return count;
}

}  // namespace dmt
