#include "dmt/linalg.hpp"

#include <algorithm>

namespace dmt {

u32 fp_inv(u32 a, u32 p) {
    check_internal(a % p != 0, "fp_inv: zero has no inverse");
    u64 r = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return u32(r);
}

std::vector<size_t> fp_rref(FpMat& M, u32 p) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < M.cols && r < M.rows; ++c) {
        size_t pr = r;
        while (pr < M.rows && M.at(pr, c) % p == 0) ++pr;
        if (pr == M.rows) continue;
        if (pr != r)
            for (size_t j = 0; j < M.cols; ++j) std::swap(M.at(pr, j), M.at(r, j));
        u64 inv = fp_inv(M.at(r, c), p);
        for (size_t j = 0; j < M.cols; ++j) M.at(r, j) = u32(M.at(r, j) * inv % p);
        for (size_t i = 0; i < M.rows; ++i) {
            if (i == r) continue;
            u64 f = M.at(i, c) % p;
            if (!f) continue;
            for (size_t j = 0; j < M.cols; ++j)
                M.at(i, j) = u32((M.at(i, j) + (p - f) * M.at(r, j)) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

size_t fp_rank(FpMat M, u32 p) { return fp_rref(M, p).size(); }

std::vector<std::vector<u32>> fp_kernel(const FpMat& M, u32 p) {
    FpMat R = M;
    auto piv = fp_rref(R, p);
    std::vector<i64> where(M.cols, -1);
    for (size_t i = 0; i < piv.size(); ++i) where[piv[i]] = i64(i);
    std::vector<std::vector<u32>> out;
    for (size_t c = 0; c < M.cols; ++c) {
        if (where[c] >= 0) continue;
        std::vector<u32> v(M.cols, 0);
        v[c] = 1;
        for (size_t j = 0; j < M.cols; ++j)
            if (where[j] >= 0) v[j] = (p - R.at(size_t(where[j]), c) % p) % p;
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<std::vector<u32>> fp_solve(const FpMat& M, const std::vector<u32>& b, u32 p) {
    check_internal(b.size() == M.rows, "fp_solve: size mismatch");
    FpMat Aug(M.rows, M.cols + 1);
    for (size_t i = 0; i < M.rows; ++i) {
        for (size_t j = 0; j < M.cols; ++j) Aug.at(i, j) = M.at(i, j);
        Aug.at(i, M.cols) = b[i] % p;
    }
    auto piv = fp_rref(Aug, p);
    for (size_t c : piv)
        if (c == M.cols) return std::nullopt;
    std::vector<u32> x(M.cols, 0);
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = Aug.at(i, M.cols);
    return x;
}

std::vector<u32> fp_charpoly(const FpMat& M, u32 p) {
    check_internal(M.rows == M.cols, "fp_charpoly: matrix not square");
    size_t d = M.rows;
    FpMat H = M;
    for (size_t i = 0; i < H.a.size(); ++i) H.a[i] %= p;
    // Hessenberg reduction by similarity transforms.
    for (size_t j = 0; j + 2 < d; ++j) {
        size_t piv = 0;
        bool found = false;
        for (size_t i = j + 1; i < d; ++i)
            if (H.at(i, j) % p) {
                piv = i;
                found = true;
                break;
            }
        if (!found) continue;
        if (piv != j + 1) {
            for (size_t c = 0; c < d; ++c) std::swap(H.at(j + 1, c), H.at(piv, c));
            for (size_t r = 0; r < d; ++r) std::swap(H.at(r, j + 1), H.at(r, piv));
        }
        u64 inv = fp_inv(H.at(j + 1, j), p);
        for (size_t i = j + 2; i < d; ++i) {
            u64 f = H.at(i, j) % p * inv % p;
            if (!f) continue;
            for (size_t c = 0; c < d; ++c)
                H.at(i, c) = u32((H.at(i, c) + (p - f) * H.at(j + 1, c)) % p);
            for (size_t r = 0; r < d; ++r)
                H.at(r, j + 1) = u32((H.at(r, j + 1) + f * H.at(r, i)) % p);
        }
    }
    // Characteristic polynomials of leading principal Hessenberg blocks.
    std::vector<std::vector<u64>> polys;
    polys.push_back({1});
    for (size_t k = 1; k <= d; ++k) {
        std::vector<u64> Pk(k + 1, 0);
        const auto& prev = polys[k - 1];
        for (size_t i = 0; i < prev.size(); ++i) {
            Pk[i + 1] = (Pk[i + 1] + prev[i]) % p;  // x * P_{k-1}
            Pk[i] = (Pk[i] + (p - H.at(k - 1, k - 1) % p) * prev[i]) % p;
        }
        u64 prod = 1;
        for (size_t i = k - 1; i >= 1; --i) {
            prod = prod * (H.at(i, i - 1) % p) % p;
            u64 term = H.at(i - 1, k - 1) % p * prod % p;
            if (term) {
                const auto& Pi = polys[i - 1];
                for (size_t c = 0; c < Pi.size(); ++c)
                    Pk[c] = (Pk[c] + (p - term) * Pi[c]) % p;
            }
            if (prod == 0) break;
        }
        polys.push_back(std::move(Pk));
    }
    std::vector<u32> out(d + 1);
    for (size_t i = 0; i <= d; ++i) out[i] = u32(polys[d][i] % p);
    return out;
}

namespace {

u64 valuation(u64 x, u64 p, u64 n) {
    if (x == 0) return n;
    u64 v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return std::min(v, n);
}

u64 inv_unit_zpn(u64 a, u64 p, u64 pn) {
    // a is a unit mod p^n; Newton lift of the mod-p inverse.
    u64 x = fp_inv(u32(a % p), u32(p));
    u64 mod = p;
    while (mod < pn) {
        mod = std::min(pn, mod * mod);
        // x <- x (2 - a x) mod `mod`
        u128 ax = u128(a % mod) * x % mod;
        u128 two_minus = (2 + mod - u64(ax % mod)) % mod;
        x = u64(u128(x) * two_minus % mod);
    }
    return x % pn;
}

}  // namespace

std::vector<ZpnKernelGen> zpn_kernel(size_t rows, size_t cols, const std::vector<u64>& Min,
                                     u64 p, u64 n) {
    check_internal(Min.size() == rows * cols, "zpn_kernel: size mismatch");
    u64 pn = 1;
    for (u64 i = 0; i < n; ++i) pn *= p;
    std::vector<u64> A = Min;
    for (auto& x : A) x %= pn;
    auto at = [&](size_t i, size_t j) -> u64& { return A[i * cols + j]; };

    // Column-operation mirror: variable change x = W x'.
    std::vector<u64> W(cols * cols, 0);
    for (size_t j = 0; j < cols; ++j) W[j * cols + j] = 1;
    auto wat = [&](size_t i, size_t j) -> u64& { return W[i * cols + j]; };

    size_t kmax = std::min(rows, cols);
    std::vector<u64> pivot_exp;  // valuation of k-th diagonal pivot
    size_t k = 0;
    for (; k < kmax; ++k) {
        // Global minimum valuation in the remaining submatrix.
        u64 best_v = n;
        size_t bi = k, bj = k;
        for (size_t i = k; i < rows; ++i)
            for (size_t j = k; j < cols; ++j) {
                u64 v = valuation(at(i, j), p, n);
                if (v < best_v) {
                    best_v = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best_v >= n) break;  // submatrix is zero
        if (bi != k)
            for (size_t j = 0; j < cols; ++j) std::swap(at(bi, j), at(k, j));
        if (bj != k) {
            for (size_t i = 0; i < rows; ++i) std::swap(at(i, bj), at(i, k));
            for (size_t i = 0; i < cols; ++i) std::swap(wat(i, bj), wat(i, k));
        }
        // Normalize pivot to p^v by scaling the row with the unit part inverse.
        u64 pv = 1;
        for (u64 i = 0; i < best_v; ++i) pv *= p;
        u64 unit = at(k, k) / pv;  // not exactly: at = unit * p^v mod p^n
        // Recover unit part: at(k,k) = u * p^v with u a unit mod p^(n-v).
        unit = at(k, k) / pv % pn;
        u64 uinv = inv_unit_zpn(unit % pn == 0 ? 1 : unit, p, pn);
        for (size_t j = 0; j < cols; ++j) at(k, j) = u64(u128(at(k, j)) * uinv % pn);
        check_internal(at(k, k) == pv % pn, "zpn_kernel: pivot normalization failed");
        // Clear column k with row operations.
        for (size_t i = 0; i < rows; ++i) {
            if (i == k || at(i, k) == 0) continue;
            check_internal(at(i, k) % pv == 0, "zpn_kernel: pivot not minimal in column");
            u64 f = at(i, k) / pv % pn;
            for (size_t j = 0; j < cols; ++j)
                at(i, j) = u64((u128(at(i, j)) + u128(pn - f % pn) * at(k, j)) % pn);
        }
        // Clear row k with column operations (column k is p^v e_k now).
        for (size_t j = 0; j < cols; ++j) {
            if (j == k || at(k, j) == 0) continue;
            check_internal(at(k, j) % pv == 0, "zpn_kernel: pivot not minimal in row");
            u64 f = at(k, j) / pv % pn;
            at(k, j) = 0;
            for (size_t i = 0; i < cols; ++i)
                wat(i, j) = u64((u128(wat(i, j)) + u128(pn - f % pn) * wat(i, k)) % pn);
        }
        pivot_exp.push_back(best_v);
    }

    std::vector<ZpnKernelGen> out;
    for (size_t i = 0; i < pivot_exp.size(); ++i) {
        u64 v = pivot_exp[i];
        if (v == 0) continue;  // unit pivot: coordinate forced to zero
        u64 scale = 1;
        for (u64 e = 0; e < n - v; ++e) scale *= p;
        ZpnKernelGen g;
        g.order_exp = v;
        g.vec.resize(cols);
        for (size_t r = 0; r < cols; ++r) g.vec[r] = u64(u128(wat(r, i)) * scale % pn);
        out.push_back(std::move(g));
    }
    for (size_t j = k; j < cols; ++j) {
        ZpnKernelGen g;
        g.order_exp = n;
        g.vec.resize(cols);
        for (size_t r = 0; r < cols; ++r) g.vec[r] = wat(r, j);
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace dmt
