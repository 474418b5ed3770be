#include "dmt/dieudonne.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dmt/linalg.hpp"

namespace dmt {

KMat kmat_identity(const Ring& K, size_t r) {
    KMat M(r, r, K.zero());
    for (size_t i = 0; i < r; ++i) M.at(i, i) = K.one();
    return M;
}

KMat kmat_zero(const Ring& K, size_t r, size_t c) { return KMat(r, c, K.zero()); }

KMat kmat_mul(const Ring& K, const KMat& A, const KMat& B) {
    check_internal(A.cols == B.rows, "kmat_mul: shape mismatch");
    KMat C(A.rows, B.cols, K.zero());
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t k = 0; k < A.cols; ++k) {
            const Elem& x = A.at(i, k);
            if (K.is_zero(x)) continue;
            for (size_t j = 0; j < B.cols; ++j) {
                if (K.is_zero(B.at(k, j))) continue;
                C.at(i, j) = K.add(C.at(i, j), K.mul(x, B.at(k, j)));
            }
        }
    return C;
}

KMat kmat_add(const Ring& K, const KMat& A, const KMat& B) {
    check_internal(A.rows == B.rows && A.cols == B.cols, "kmat_add: shape mismatch");
    KMat C(A.rows, A.cols, K.zero());
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = K.add(A.a[i], B.a[i]);
    return C;
}

KMat kmat_sub(const Ring& K, const KMat& A, const KMat& B) {
    check_internal(A.rows == B.rows && A.cols == B.cols, "kmat_sub: shape mismatch");
    KMat C(A.rows, A.cols, K.zero());
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = K.sub(A.a[i], B.a[i]);
    return C;
}

KMat kmat_smul(const Ring& K, u64 c, const KMat& A) {
    KMat C(A.rows, A.cols, K.zero());
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = K.smul(c, A.a[i]);
    return C;
}

KMat kmat_transpose(const KMat& A) {
    KMat C(A.cols, A.rows, A.a.empty() ? Elem{} : A.a[0]);
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t j = 0; j < A.cols; ++j) C.at(j, i) = A.at(i, j);
    return C;
}

KMat kmat_frob(const Ring& K, const KMat& A, i64 k) {
    KMat C(A.rows, A.cols, K.zero());
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = K.frobenius(A.a[i], k);
    return C;
}

bool kmat_eq(const Ring& K, const KMat& A, const KMat& B) {
    if (A.rows != B.rows || A.cols != B.cols) return false;
    for (size_t i = 0; i < A.a.size(); ++i)
        if (!K.is_zero(K.sub(A.a[i], B.a[i]))) return false;
    return true;
}

std::optional<KMat> kmat_inv(const Ring& K, const KMat& A) {
    check_internal(A.rows == A.cols, "kmat_inv: not square");
    size_t r = A.rows;
    KMat M = A;
    KMat I = kmat_identity(K, r);
    for (size_t c = 0; c < r; ++c) {
        size_t piv = c;
        while (piv < r && !K.is_unit(M.at(piv, c))) ++piv;
        if (piv == r) return std::nullopt;  // no unit pivot: singular over local ring
        if (piv != c)
            for (size_t j = 0; j < r; ++j) {
                std::swap(M.at(piv, j), M.at(c, j));
                std::swap(I.at(piv, j), I.at(c, j));
            }
        Elem inv = K.inv(M.at(c, c));
        for (size_t j = 0; j < r; ++j) {
            M.at(c, j) = K.mul(inv, M.at(c, j));
            I.at(c, j) = K.mul(inv, I.at(c, j));
        }
        for (size_t i = 0; i < r; ++i) {
            if (i == c) continue;
            Elem f = M.at(i, c);
            if (K.is_zero(f)) continue;
            for (size_t j = 0; j < r; ++j) {
                M.at(i, j) = K.sub(M.at(i, j), K.mul(f, M.at(c, j)));
                I.at(i, j) = K.sub(I.at(i, j), K.mul(f, I.at(c, j)));
            }
        }
    }
    return I;
}

void validate_module(const DieudonneModule& M) {
    const Ring& K = M.R();
    check_internal(M.F.twist == 1 && M.V.twist == -1, "module: wrong twists");
    KMat pid = kmat_smul(K, K.p, kmat_identity(K, M.rank));
    // F(V(x)) = [F] sigma([V]) x ; V(F(x)) = [V] sigma^-1([F]) x.
    KMat FV = kmat_mul(K, M.F.matrix, kmat_frob(K, M.V.matrix, 1));
    KMat VF = kmat_mul(K, M.V.matrix, kmat_frob(K, M.F.matrix, -1));
    require(kmat_eq(K, FV, pid), "module: F V != p Id");
    require(kmat_eq(K, VF, pid), "module: V F != p Id");
    if (M.pairing) {
        const KMat& P = *M.pairing;
        require(P.rows == M.rank && P.cols == M.rank, "pairing: wrong shape");
        for (size_t i = 0; i < M.rank; ++i) {
            require(K.is_zero(P.at(i, i)), "pairing: diagonal not zero");
            for (size_t j = 0; j < M.rank; ++j)
                require(K.is_zero(K.add(P.at(i, j), P.at(j, i))), "pairing: not alternating");
        }
        require(kmat_inv(K, P).has_value(), "pairing: not invertible");
        // <F e_b, e_c> = sigma <e_b, V e_c>  <=>  [F]^T P = sigma(P [V]).
        KMat lhs = kmat_mul(K, kmat_transpose(M.F.matrix), P);
        KMat rhs = kmat_frob(K, kmat_mul(K, P, M.V.matrix), 1);
        require(kmat_eq(K, lhs, rhs), "pairing: pqp compatibility failed");
    }
}

DieudonneModule minimal_module(u64 c, u64 d, u64 p, u64 n) {
    require(c >= 1 && d >= 1, "minimal_module: need c, d >= 1");
    require(gcd_u64(c, d) == 1, "minimal_module: gcd(c, d) must be 1");
    u64 h = c + d;
    const Ring& K = Ring::get(p, h, n);
    DieudonneModule M;
    M.ring = &K;
    M.rank = h;
    M.F = {kmat_zero(K, h, h), 1};
    M.V = {kmat_zero(K, h, h), -1};
    for (u64 i = 0; i < h; ++i) {
        // F e_i = e_{i+d}; e_{j+h} = p e_j.
        if (i + d < h)
            M.F.matrix.at(i + d, i) = K.one();
        else
            M.F.matrix.at(i + d - h, i) = K.from_int(p);
        if (i + c < h)
            M.V.matrix.at(i + c, i) = K.one();
        else
            M.V.matrix.at(i + c - h, i) = K.from_int(p);
    }
    validate_module(M);
    return M;
}

DieudonneModule minimal_module_polarized_11(u64 p, u64 n) {
    DieudonneModule M = minimal_module(1, 1, p, n);
    const Ring& K = M.R();
    // lambda = w(t) - sigma(w(t)) satisfies sigma(lambda) = -lambda and is a
    // unit (mod p it is t - t^p != 0).
    Elem w = K.teichmuller(K.gen());
    Elem lambda = K.sub(w, K.frobenius(w, 1));
    check_internal(K.is_unit(lambda), "polarized H_{1,1}: lambda not a unit");
    KMat P = kmat_zero(K, 2, 2);
    P.at(0, 1) = lambda;
    P.at(1, 0) = K.neg(lambda);
    M.pairing = P;
    validate_module(M);
    return M;
}

DieudonneModule polarized_double(u64 c, u64 d, u64 p, u64 n) {
    require(gcd_u64(c, d) == 1, "polarized_double: gcd(c, d) must be 1");
    if (c == 1 && d == 1) return minimal_module_polarized_11(p, n);
    u64 h = c + d;
    DieudonneModule A = minimal_module(c, d, p, n);
    DieudonneModule B = minimal_module(d, c, p, n);
    DieudonneModule M = direct_sum(A, B);
    const Ring& K = M.R();
    // Evaluation pairing for the dual-basis identification H_{d,c} = H_{c,d}^D:
    // P = [[0, J], [-J, 0]] with J the antidiagonal.
    KMat P = kmat_zero(K, 2 * h, 2 * h);
    for (u64 i = 0; i < h; ++i) {
        P.at(i, h + (h - 1 - i)) = K.one();
        P.at(h + (h - 1 - i), i) = K.neg(K.one());
    }
    M.pairing = P;
    M.blocks = {{0, h}, {h, h}};
    validate_module(M);
    return M;
}

DieudonneModule ordinary_module(u64 g, u64 p, u64 n, bool with_pairing) {
    require(g >= 1, "ordinary_module: g >= 1");
    const Ring& K = Ring::get(p, 1, n);
    DieudonneModule M;
    M.ring = &K;
    M.rank = 2 * g;
    M.F = {kmat_zero(K, 2 * g, 2 * g), 1};
    M.V = {kmat_zero(K, 2 * g, 2 * g), -1};
    for (u64 i = 0; i < g; ++i) {
        M.F.matrix.at(i, i) = K.from_int(p);  // toric: F = p sigma
        M.V.matrix.at(i, i) = K.one();        //        V = sigma^-1
        M.F.matrix.at(g + i, g + i) = K.one();        // etale: F = sigma
        M.V.matrix.at(g + i, g + i) = K.from_int(p);  //        V = p sigma^-1
    }
    if (with_pairing) {
        KMat P = kmat_zero(K, 2 * g, 2 * g);
        for (u64 i = 0; i < g; ++i) {
            P.at(i, g + i) = K.one();
            P.at(g + i, i) = K.neg(K.one());
        }
        M.pairing = P;
    }
    M.blocks = {{0, g}, {g, g}};
    validate_module(M);
    return M;
}

DieudonneModule etale_line(u64 p) { return twisted_etale(p, {0}); }

DieudonneModule twisted_etale(u64 p, const std::vector<size_t>& perm) {
    const Ring& K = Ring::get(p, 1, 1);
    size_t r = perm.size();
    DieudonneModule M;
    M.ring = &K;
    M.rank = r;
    M.F = {kmat_zero(K, r, r), 1};
    M.V = {kmat_zero(K, r, r), -1};
    for (size_t i = 0; i < r; ++i) {
        require(perm[i] < r, "twisted_etale: bad permutation");
        M.F.matrix.at(perm[i], i) = K.one();
    }
    validate_module(M);
    return M;
}

namespace {

// Flatten a semilinear map to an F_p-linear matrix on the rank*h F_p-space.
FpMat flatten_semilinear(const DieudonneModule& M, const SemilinearMap& S) {
    const Ring& K = M.R();
    check_internal(K.n == 1, "flatten_semilinear: field level only");
    size_t r = M.rank, h = K.h;
    FpMat out(r * h, r * h);
    for (size_t j = 0; j < r; ++j)
        for (size_t k = 0; k < h; ++k) {
            // basis vector: e_j * t^k
            std::vector<Elem> v(r, K.zero());
            Elem tk(h, 0);
            tk[k] = 1;
            v[j] = K.frobenius(tk, S.twist);
            for (size_t i = 0; i < r; ++i) {
                Elem acc = K.zero();
                for (size_t l = 0; l < r; ++l)
                    acc = K.add(acc, K.mul(S.matrix.at(i, l), l == j ? v[j] : K.zero()));
                for (size_t b = 0; b < h; ++b) out.at(i * h + b, j * h + k) = u32(acc[b] % K.p);
            }
        }
    return out;
}

}  // namespace

bool bt1_check(const DieudonneModule& M) {
    require(M.R().n == 1, "bt1_check: defined over a field (n = 1) only");
    const Ring& K = M.R();
    FpMat Fm = flatten_semilinear(M, M.F);
    FpMat Vm = flatten_semilinear(M, M.V);
    size_t N = M.rank * K.h;
    // im F and ker V both have F(V(x)) = 0 ambientally (V F = p = 0), so the
    // two equalities im F = ker V and im V = ker F reduce to the rank identity.
    return fp_rank(Fm, u32(K.p)) + fp_rank(Vm, u32(K.p)) == N;
}

DieudonneModule direct_sum(const DieudonneModule& A, const DieudonneModule& B) {
    check_internal(A.ring == B.ring, "direct_sum: mismatched rings");
    const Ring& K = A.R();
    DieudonneModule M;
    M.ring = A.ring;
    M.rank = A.rank + B.rank;
    M.F = {kmat_zero(K, M.rank, M.rank), 1};
    M.V = {kmat_zero(K, M.rank, M.rank), -1};
    for (size_t i = 0; i < A.rank; ++i)
        for (size_t j = 0; j < A.rank; ++j) {
            M.F.matrix.at(i, j) = A.F.matrix.at(i, j);
            M.V.matrix.at(i, j) = A.V.matrix.at(i, j);
        }
    for (size_t i = 0; i < B.rank; ++i)
        for (size_t j = 0; j < B.rank; ++j) {
            M.F.matrix.at(A.rank + i, A.rank + j) = B.F.matrix.at(i, j);
            M.V.matrix.at(A.rank + i, A.rank + j) = B.V.matrix.at(i, j);
        }
    if (A.pairing && B.pairing) {
        KMat P = kmat_zero(K, M.rank, M.rank);
        for (size_t i = 0; i < A.rank; ++i)
            for (size_t j = 0; j < A.rank; ++j) P.at(i, j) = A.pairing->at(i, j);
        for (size_t i = 0; i < B.rank; ++i)
            for (size_t j = 0; j < B.rank; ++j)
                P.at(A.rank + i, A.rank + j) = B.pairing->at(i, j);
        M.pairing = P;
    }
    validate_module(M);
    return M;
}

DieudonneModule base_change(const DieudonneModule& M, u64 m) {
    require(m >= 1, "base_change: m >= 1");
    if (m == 1) return M;
    const Ring& K = M.R();
    const Ring& L = Ring::get(K.p, K.h * m, K.n);
    Embedding emb = make_embedding(K, L);
    auto lift = [&](const KMat& A) {
        KMat B(A.rows, A.cols, L.zero());
        for (size_t i = 0; i < A.a.size(); ++i) B.a[i] = embed(emb, A.a[i]);
        return B;
    };
    DieudonneModule out;
    out.ring = &L;
    out.rank = M.rank;
    out.F = {lift(M.F.matrix), 1};
    out.V = {lift(M.V.matrix), -1};
    if (M.pairing) out.pairing = lift(*M.pairing);
    out.blocks = M.blocks;
    validate_module(out);
    return out;
}

DieudonneModule conjugate_module(const DieudonneModule& M, const KMat& C) {
    const Ring& K = M.R();
    auto Cinv = kmat_inv(K, C);
    require(Cinv.has_value(), "conjugate_module: C not invertible");
    DieudonneModule out;
    out.ring = M.ring;
    out.rank = M.rank;
    out.F = {kmat_mul(K, *Cinv, kmat_mul(K, M.F.matrix, kmat_frob(K, C, 1))), 1};
    out.V = {kmat_mul(K, *Cinv, kmat_mul(K, M.V.matrix, kmat_frob(K, C, -1))), -1};
    if (M.pairing)
        out.pairing = kmat_mul(K, kmat_transpose(C), kmat_mul(K, *M.pairing, C));
    validate_module(out);
    return out;
}

std::string serialize_module(const DieudonneModule& M) {
    const Ring& K = M.R();
    std::ostringstream os;
    os << K.p << ' ' << K.h << ' ' << K.n << ' ' << M.rank << '\n';
    auto emit = [&](const KMat& A) {
        for (size_t i = 0; i < A.rows; ++i) {
            for (size_t j = 0; j < A.cols; ++j) {
                if (j) os << ' ';
                const Elem& e = A.at(i, j);
                for (size_t k = 0; k < K.h; ++k) {
                    if (k) os << ',';
                    os << e[k] % K.pn;
                }
            }
            os << '\n';
        }
    };
    emit(M.F.matrix);
    emit(M.V.matrix);
    if (M.pairing) {
        os << "pairing\n";
        emit(*M.pairing);
    } else {
        os << "none\n";
    }
    if (!M.blocks.empty()) {
        os << "blocks";
        for (const auto& [off, sz] : M.blocks) os << ' ' << off << ' ' << sz;
        os << '\n';
    }
    return os.str();
}

DieudonneModule deserialize_module(const std::string& text) {
    std::istringstream is(text);
    u64 p, h, n, rank;
    if (!(is >> p >> h >> n >> rank)) throw UsageError("deserialize_module: bad header");
    const Ring& K = Ring::get(p, h, n);
    auto read_mat = [&](size_t r, size_t c) {
        KMat A(r, c, K.zero());
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) {
                std::string tok;
                if (!(is >> tok)) throw UsageError("deserialize_module: truncated matrix");
                Elem e(h, 0);
                size_t pos = 0;
                for (size_t k = 0; k < h; ++k) {
                    size_t comma = tok.find(',', pos);
                    std::string part = tok.substr(pos, comma == std::string::npos
                                                           ? std::string::npos
                                                           : comma - pos);
                    e[k] = std::stoull(part) % K.pn;
                    pos = comma == std::string::npos ? tok.size() : comma + 1;
                }
                A.at(i, j) = e;
            }
        return A;
    };
    DieudonneModule M;
    M.ring = &K;
    M.rank = rank;
    M.F = {read_mat(rank, rank), 1};
    M.V = {read_mat(rank, rank), -1};
    std::string tag;
    if (!(is >> tag)) throw UsageError("deserialize_module: missing pairing tag");
    if (tag == "pairing")
        M.pairing = read_mat(rank, rank);
    else if (tag != "none")
        throw UsageError("deserialize_module: bad pairing tag");
    if (is >> tag) {
        if (tag != "blocks") throw UsageError("deserialize_module: bad trailer");
        u64 off, sz;
        while (is >> off >> sz) M.blocks.emplace_back(off, sz);
    }
    validate_module(M);
    return M;
}

bool newton_admissible(const NewtonPolygon& nu) {
    if (nu.segments.empty()) return false;
    for (const auto& s : nu.segments) {
        if (s.m < 1) return false;
        if (s.c == 0 && s.d == 0) return false;
        if (gcd_u64(s.c, s.d) != 1 && !(s.c == 0 || s.d == 0)) return false;
        if ((s.c == 0 && s.d != 1) || (s.d == 0 && s.c != 1)) return false;
    }
    return true;
}

bool newton_symmetric(const NewtonPolygon& nu) {
    std::map<std::pair<u64, u64>, u64> mult;
    for (const auto& s : nu.segments) mult[{s.c, s.d}] += s.m;
    for (const auto& [cd, m] : mult) {
        auto it = mult.find({cd.second, cd.first});
        if (it == mult.end() || it->second != m) return false;
    }
    return true;
}

u128 automorphism_bound(const NewtonPolygon& nu, u64 p, u64 n) {
    require(newton_admissible(nu), "automorphism_bound: inadmissible polygon");
    require(n >= 1, "automorphism_bound: n >= 1");
    // For a symmetric (polarizable) polygon the bound is for Aut(G, lambda):
    // a polarized automorphism is determined by its action on one member of
    // each dual pair of slopes {c/h, d/h}, so each pair contributes a single
    // GL-type factor (self-dual slope-1/2 segments contribute once as well).
    // Non-symmetric polygons get the full unpolarized product.
    std::vector<NewtonSegment> segs;
    if (newton_symmetric(nu)) {
        std::map<std::pair<u64, u64>, u64> mult;
        for (const auto& s : nu.segments) mult[{s.c, s.d}] += s.m;
        for (const auto& [cd, m] : mult)
            if (cd.first >= cd.second) segs.push_back({cd.first, cd.second, m});
    } else {
        segs = nu.segments;
    }
    u128 B = 1;
    for (const auto& s : segs) {
        u64 h = s.c + s.d;
        u128 Q = 1;
        for (u64 i = 0; i < h; ++i) Q *= p;  // p^h
        // #GL_m(F_Q) = prod_{i<m} (Q^m - Q^i)
        u128 Qm = 1;
        for (u64 i = 0; i < s.m; ++i) Qm *= Q;
        for (u64 i = 0; i < s.m; ++i) {
            u128 Qi = 1;
            for (u64 k = 0; k < i; ++k) Qi *= Q;
            B *= (Qm - Qi);
        }
        // p^(h m^2 (h n - 1))
        u64 e = h * s.m * s.m * (h * n - 1);
        for (u64 i = 0; i < e; ++i) B *= p;
    }
    return B;
}

}  // namespace dmt
