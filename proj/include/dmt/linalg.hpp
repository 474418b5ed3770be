#pragma once

// Dense linear algebra over F_p and Z/p^n used by the semilinear solvers.

#include <optional>
#include <vector>

#include "dmt/base.hpp"

namespace dmt {

// Row-major matrix over F_p (entries reduced mod p).
struct FpMat {
    size_t rows = 0, cols = 0;
    std::vector<u32> a;

    FpMat() = default;
    FpMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
    u32& at(size_t i, size_t j) { return a[i * cols + j]; }
    u32 at(size_t i, size_t j) const { return a[i * cols + j]; }
};

u32 fp_inv(u32 a, u32 p);

// In-place reduced row echelon form; returns pivot column indices.
std::vector<size_t> fp_rref(FpMat& M, u32 p);

size_t fp_rank(FpMat M, u32 p);

// Basis of the right kernel {x : M x = 0}.
std::vector<std::vector<u32>> fp_kernel(const FpMat& M, u32 p);

// One solution of M x = b, or nullopt if inconsistent.
std::optional<std::vector<u32>> fp_solve(const FpMat& M, const std::vector<u32>& b, u32 p);

// Characteristic polynomial of a square matrix via Hessenberg reduction.
// Returned low-to-high: c[0] + c[1] x + ... + c[d] x^d with c[d] = 1.
std::vector<u32> fp_charpoly(const FpMat& M, u32 p);

// Generator of the kernel of a matrix over Z/p^n, as an abelian group:
// the element `vec` has additive order p^(order_exp).
struct ZpnKernelGen {
    std::vector<u64> vec;
    u64 order_exp;
};

// Right kernel of the rows x cols matrix M (row-major, entries mod p^n),
// computed by local Smith reduction.  The returned generators are
// independent: the kernel is the direct sum of the cyclic groups they
// generate.
std::vector<ZpnKernelGen> zpn_kernel(size_t rows, size_t cols, const std::vector<u64>& M,
                                     u64 p, u64 n);

}  // namespace dmt
