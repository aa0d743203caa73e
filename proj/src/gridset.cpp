#include "fflab/gridset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace fflab {

namespace {

std::vector<int> drop_coord(const std::vector<int>& row, int j) {
    std::vector<int> out;
    out.reserve(row.size() - 1);
    for (int i = 0; i < static_cast<int>(row.size()); ++i)
        if (i != j) out.push_back(row[i]);
    return out;
}

long long omit_one_size(const GridSet& T, int j) {
    std::set<std::vector<int>> img;
    for (const auto& row : T.elems) img.insert(drop_coord(row, j));
    return static_cast<long long>(img.size());
}

// Fibers over the first m coordinates: contiguous runs of the sorted elems.
struct Fiber {
    std::size_t begin = 0, end = 0;  // [begin, end) into elems
    std::size_t size() const { return end - begin; }
};

std::vector<Fiber> fibers_over_prefix(const GridSet& T, int m) {
    std::vector<Fiber> out;
    std::size_t i = 0;
    while (i < T.elems.size()) {
        std::size_t j = i + 1;
        while (j < T.elems.size() &&
               std::equal(T.elems[j].begin(), T.elems[j].begin() + m, T.elems[i].begin()))
            ++j;
        out.push_back({i, j});
        i = j;
    }
    return out;
}

// a_j over a fiber: distinct omit-j projections of the fiber's rows.
long long fiber_aj(const GridSet& T, const Fiber& fib, int j) {
    std::set<std::vector<int>> img;
    for (std::size_t i = fib.begin; i < fib.end; ++i) img.insert(drop_coord(T.elems[i], j));
    return static_cast<long long>(img.size());
}

}  // namespace

GridSet GridSet::make(int n, std::vector<std::vector<int>> rows) {
    if (n < 1) throw std::invalid_argument("GridSet: arity must be >= 1");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("GridSet: element arity mismatch");
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return {n, std::move(rows)};
}

GridSet project(const GridSet& T, const std::vector<int>& indices) {
    if (indices.empty()) throw std::invalid_argument("project: empty index list");
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= T.n)
            throw std::invalid_argument("project: index out of range");
        if (i > 0 && indices[i] <= indices[i - 1])
            throw std::invalid_argument("project: indices must be strictly ascending");
    }
    std::vector<std::vector<int>> rows;
    rows.reserve(T.elems.size());
    for (const auto& row : T.elems) {
        std::vector<int> r;
        r.reserve(indices.size());
        for (int i : indices) r.push_back(row[i]);
        rows.push_back(std::move(r));
    }
    return GridSet::make(static_cast<int>(indices.size()), std::move(rows));
}

std::vector<long long> facet_sizes(const GridSet& T) {
    std::vector<long long> out(T.n);
    for (int j = 0; j < T.n; ++j) out[j] = omit_one_size(T, j);
    return out;
}

double lw_bound(const GridSet& T) {
    if (T.n < 2) throw std::invalid_argument("lw_bound: arity must be >= 2");
    auto sizes = facet_sizes(T);
    u128 prod = 1;
    for (long long s : sizes) prod = mul_sat(prod, static_cast<u128>(s));
    const u128 tpow = pow_sat(static_cast<u128>(T.size()), static_cast<unsigned>(T.n - 1));
    if (prod == tpow) return static_cast<double>(T.size());
    long double lp = 0;
    for (long long s : sizes) lp += std::log(static_cast<long double>(s));
    return static_cast<double>(std::exp(lp / (T.n - 1)));
}

std::pair<GridSet, RefineCertificate> refine(const GridSet& T, int m, long long c) {
    const int n = T.n;
    if (T.elems.empty()) throw std::invalid_argument("refine: empty set");
    if (m < 1 || m > n) throw std::invalid_argument("refine: m out of range");
    if (c == 0) c = 100ll * n;
    if (c < 1) throw std::invalid_argument("refine: removal constant must be positive");

    RefineCertificate cert;
    cert.m = m;
    cert.removal_constant = c;
    cert.t0 = static_cast<long long>(T.size());
    auto sizes = facet_sizes(T);
    cert.N = *std::max_element(sizes.begin(), sizes.end());
    const long long t = cert.t0;
    const long long N = cert.N;

    auto finish = [&](const GridSet& T2) {
        cert.t2 = static_cast<long long>(T2.size());
        auto fibs = fibers_over_prefix(T2, m);
        cert.fiber_count = static_cast<long long>(fibs.size());
        cert.min_fiber = 0;
        cert.max_fiber = 0;
        for (const auto& fib : fibs) {
            long long s = static_cast<long long>(fib.size());
            cert.max_fiber = std::max(cert.max_fiber, s);
            cert.min_fiber = cert.min_fiber == 0 ? s : std::min(cert.min_fiber, s);
        }
        cert.min_aj = 0;
        if (m <= n - 2) {
            for (const auto& fib : fibs)
                for (int j = m; j < n; ++j) {
                    long long a = fiber_aj(T2, fib, j);
                    cert.min_aj = cert.min_aj == 0 ? a : std::min(cert.min_aj, a);
                }
        }
        auto rep = verify_certificate(T, T2, m, N);
        cert.bounds_ok = {rep.c1, rep.c2, rep.c3, rep.c4};
    };

    if (m == n) {
        cert.t1 = t;
        finish(T);
        return {T, cert};
    }

    if (m == n - 1) {
        // Single stage: keep fibers of size >= t/(2N).
        cert.t1 = t;
        auto fibs = fibers_over_prefix(T, m);
        std::vector<std::vector<int>> keep;
        for (const auto& fib : fibs) {
            if (2 * N * static_cast<long long>(fib.size()) >= t)
                for (std::size_t i = fib.begin; i < fib.end; ++i) keep.push_back(T.elems[i]);
        }
        GridSet T2{n, std::move(keep)};
        finish(T2);
        return {T2, cert};
    }

    const unsigned kp = static_cast<unsigned>(n - m - 1);
    auto fibs = fibers_over_prefix(T, m);
    std::vector<std::vector<long long>> aj(fibs.size(), std::vector<long long>(n - m));
    for (std::size_t fi = 0; fi < fibs.size(); ++fi)
        for (int j = m; j < n; ++j) aj[fi][j - m] = fiber_aj(T, fibs[fi], j);

    // U_j: (prod_l a_l)^(1/(n-m-1)) <= a_j * t / (cN), cross-multiplied.
    std::vector<std::vector<int>> kept1;
    std::vector<std::size_t> kept_fibers;
    const u128 cn_pow = pow_sat(static_cast<u128>(c) * static_cast<u128>(N), kp);
    for (std::size_t fi = 0; fi < fibs.size(); ++fi) {
        u128 prod = 1;
        for (long long a : aj[fi]) prod = mul_sat(prod, static_cast<u128>(a));
        bool removed = false;
        for (int j = m; j < n && !removed; ++j) {
            const u128 lhs = mul_sat(prod, cn_pow);
            const u128 rhs = pow_sat(static_cast<u128>(aj[fi][j - m]) * static_cast<u128>(t), kp);
            if (lhs <= rhs) removed = true;
        }
        if (!removed) kept_fibers.push_back(fi);
    }
    for (std::size_t fi : kept_fibers)
        for (std::size_t i = fibs[fi].begin; i < fibs[fi].end; ++i) kept1.push_back(T.elems[i]);
    cert.t1 = static_cast<long long>(kept1.size());

    // Mass rule: keep fibers of size >= |T1| / (2 * #fibers(T1)).
    const long long t1 = cert.t1;
    const long long f1 = static_cast<long long>(kept_fibers.size());
    std::vector<std::vector<int>> kept2;
    for (std::size_t fi : kept_fibers) {
        if (2 * f1 * static_cast<long long>(fibs[fi].size()) >= t1)
            for (std::size_t i = fibs[fi].begin; i < fibs[fi].end; ++i) kept2.push_back(T.elems[i]);
    }
    GridSet T2{n, std::move(kept2)};
    finish(T2);
    return {T2, cert};
}

CertReport verify_certificate(const GridSet& T, const GridSet& T2, int m, long long N) {
    const int n = T.n;
    if (T2.n != n) throw std::invalid_argument("verify_certificate: arity mismatch");
    if (m < 1 || m > n) throw std::invalid_argument("verify_certificate: m out of range");
    if (!std::includes(T.elems.begin(), T.elems.end(), T2.elems.begin(), T2.elems.end()))
        throw std::invalid_argument("verify_certificate: T2 is not a subset of T");

    CertReport rep;
    if (m == n || T2.elems.empty()) return rep;

    const long long t = static_cast<long long>(T.size());
    const int k = n - m;
    const unsigned kp = static_cast<unsigned>(k - 1);
    const u128 hundred_n = static_cast<u128>(100ll * n);

    auto fibs = fibers_over_prefix(T2, m);
    rep.image_size = static_cast<long long>(fibs.size());
    for (const auto& fib : fibs) {
        long long s = static_cast<long long>(fib.size());
        rep.max_fiber = std::max(rep.max_fiber, s);
        rep.min_fiber = rep.min_fiber == 0 ? s : std::min(rep.min_fiber, s);
    }

    // (1) fiber richness, k >= 2 only.
    if (k >= 2) {
        const u128 lhs_scale = pow_sat(hundred_n * static_cast<u128>(N), kp);
        const u128 rhs = pow_sat(static_cast<u128>(t), kp);
        for (const auto& fib : fibs)
            for (int j = m; j < n; ++j) {
                long long a = fiber_aj(T2, fib, j);
                rep.min_aj = rep.min_aj == 0 ? a : std::min(rep.min_aj, a);
                if (mul_sat(static_cast<u128>(a), lhs_scale) < rhs) rep.c1 = false;
            }
    }

    // (3) fiber size: 200 * |fiber| * (100n)^(k-1) * N^k >= 99 * t^k.
    {
        const u128 scale = mul_sat(pow_sat(hundred_n, kp),
                                   pow_sat(static_cast<u128>(N), static_cast<unsigned>(k)));
        const u128 rhs = mul_sat(u128{99}, pow_sat(static_cast<u128>(t), static_cast<unsigned>(k)));
        for (const auto& fib : fibs)
            if (mul_sat(mul_sat(u128{200}, static_cast<u128>(fib.size())), scale) < rhs)
                rep.c3 = false;
    }

    // (2) image bound: |Pr_{0..m-1}(T2)| * t^(k-1) <= (100n)^(k-1) * N^k.
    {
        const u128 lhs = mul_sat(static_cast<u128>(rep.image_size),
                                 pow_sat(static_cast<u128>(t), kp));
        const u128 rhs = mul_sat(pow_sat(hundred_n, kp),
                                 pow_sat(static_cast<u128>(N), static_cast<unsigned>(k)));
        if (lhs > rhs) rep.c2 = false;
    }

    // (4) coordinate-dropped image: 99 * |Pr_{0..ĵ..m-1}(T2)| * t^k <= 200 * (100n)^(k-1) * N^(k+1).
    {
        const u128 rhs = mul_sat(mul_sat(u128{200}, pow_sat(hundred_n, kp)),
                                 pow_sat(static_cast<u128>(N), static_cast<unsigned>(k + 1)));
        for (int j = 0; j < m; ++j) {
            long long img;
            if (m == 1) {
                img = T2.elems.empty() ? 0 : 1;  // empty index list projects to a single 0-tuple
            } else {
                std::set<std::vector<int>> prs;
                for (const auto& fib : fibs) {
                    std::vector<int> y(T2.elems[fib.begin].begin(), T2.elems[fib.begin].begin() + m);
                    prs.insert(drop_coord(y, j));
                }
                img = static_cast<long long>(prs.size());
            }
            rep.max_dropped_image = std::max(rep.max_dropped_image, img);
            const u128 lhs = mul_sat(mul_sat(u128{99}, static_cast<u128>(img)),
                                     pow_sat(static_cast<u128>(t), static_cast<unsigned>(k)));
            if (lhs > rhs) rep.c4 = false;
        }
    }
    return rep;
}

}  // namespace fflab
