#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fflab/util.hpp"

namespace fflab {

/// A finite subset of B^n with B abstract; labels are arbitrary integers.
/// Elements are kept sorted and deduplicated, so fibers over a leading-index
/// prefix are contiguous runs.
struct GridSet {
    int n = 0;
    std::vector<std::vector<int>> elems;

    static GridSet make(int n, std::vector<std::vector<int>> rows);
    std::size_t size() const { return elems.size(); }
    bool operator==(const GridSet&) const = default;
};

/// Image of T under the coordinate projection given by a strictly ascending,
/// non-empty list of 0-based indices.
GridSet project(const GridSet& T, const std::vector<int>& indices);

/// Sizes of the n omit-one projections |Pr_{0..ĵ..n-1}(T)|, j = 0..n-1.
std::vector<long long> facet_sizes(const GridSet& T);

/// (prod_j |Pr_omit-j(T)|)^(1/(n-1)); equals |T| exactly when the product
/// equals |T|^(n-1) as integers, in which case |T| is returned exactly.
double lw_bound(const GridSet& T);

struct RefineCertificate {
    long long N = 0;          // max omit-one projection size of T
    int m = 0;
    long long t0 = 0, t1 = 0, t2 = 0;
    long long removal_constant = 0;  // c in the U_j threshold, default 100n
    long long min_aj = 0;            // min fiber-projection count on T2 (m <= n-2)
    long long max_fiber = 0, min_fiber = 0;  // extreme Pr_{0..m-1}-fiber sizes of T2
    long long fiber_count = 0;               // |Pr_{0..m-1}(T2)|
    std::array<bool, 4> bounds_ok{true, true, true, true};
    bool all_ok() const { return bounds_ok[0] && bounds_ok[1] && bounds_ok[2] && bounds_ok[3]; }
    bool operator==(const RefineCertificate&) const = default;
};

/// Two-stage refinement with explicit constants. Case m = n returns T as is;
/// case m = n-1 keeps the fibers of size >= |T|/(2N); case m <= n-2 first
/// removes the fibers caught by any U_j (threshold constant c, default
/// 100n) and then keeps fibers of size >= |T1|/(2 * #fibers(T1)). All
/// threshold comparisons are exact integer cross-multiplications.
std::pair<GridSet, RefineCertificate> refine(const GridSet& T, int m, long long c = 0);

struct CertReport {
    bool c1 = true, c2 = true, c3 = true, c4 = true;
    long long min_aj = 0, min_fiber = 0, max_fiber = 0;
    long long image_size = 0;      // |Pr_{0..m-1}(T2)|
    long long max_dropped_image = 0;  // max_j |Pr_{0..ĵ..m-1}(T2)|
    bool all_ok() const { return c1 && c2 && c3 && c4; }
    bool operator==(const CertReport&) const = default;
};

/// Recomputes the four conclusion inequalities from scratch for a claimed
/// refinement T2 of T, with t = |T|, k = n-m and the fixed constant 100n:
///   (1) k>=2: a_j(y) * (100nN)^(k-1) >= t^(k-1) for all surviving y, j > m
///   (3) 200 * |fiber| * (100n)^(k-1) * N^k >= 99 * t^k
///   (2) |Pr_{0..m-1}(T2)| * t^(k-1) <= (100n)^(k-1) * N^k
///   (4) 99 * |Pr_{0..ĵ..m-1}(T2)| * t^k <= 200 * (100n)^(k-1) * N^(k+1)
CertReport verify_certificate(const GridSet& T, const GridSet& T2, int m, long long N);

}  // namespace fflab
