// Acceptance suite: one line per criterion, exit code = number of failures.
// Every tolerance is exact-integer unless a criterion explicitly logs a ratio.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "fflab/constructions.hpp"
#include "fflab/field.hpp"
#include "fflab/geometry.hpp"
#include "fflab/gridset.hpp"
#include "fflab/incidence.hpp"
#include "oracles.hpp"

using namespace fflab;

namespace {

struct Criterion {
    int id = 0;
    bool pass = true;
    double seconds = 0;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void log(const std::string& s) { notes.push_back(s); }
};

template <typename F>
Criterion run(int id, F&& body) {
    Criterion c;
    c.id = id;
    auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

std::vector<Point> sample_points(const Field& f, int n, std::size_t want, std::mt19937& rng) {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= f.q();
    std::vector<Point> universe;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Point p(n);
        std::uint64_t t = idx;
        for (int i = 0; i < n; ++i) {
            p[i] = f.from_index(t % f.q());
            t /= f.q();
        }
        universe.push_back(std::move(p));
    }
    std::vector<Point> out;
    std::sample(universe.begin(), universe.end(), std::back_inserter(out),
                std::min(want, universe.size()), rng);
    std::sort(out.begin(), out.end());
    return out;
}

GridSet random_grid(std::mt19937& rng, int n, int labels, int max_rows) {
    std::uniform_int_distribution<int> nrows(1, max_rows);
    std::uniform_int_distribution<int> lab(0, labels - 1);
    int rows = nrows(rng);
    std::vector<std::vector<int>> elems;
    for (int i = 0; i < rows; ++i) {
        std::vector<int> row(n);
        for (int j = 0; j < n; ++j) row[j] = lab(rng);
        elems.push_back(std::move(row));
    }
    return GridSet::make(n, std::move(elems));
}

GridSet cube(int b, int n) {
    std::vector<std::vector<int>> rows;
    std::vector<int> row(n, 0);
    while (true) {
        rows.push_back(row);
        int c = n - 1;
        while (c >= 0 && ++row[c] == b) row[c--] = 0;
        if (c < 0) break;
    }
    return GridSet::make(n, std::move(rows));
}

}  // namespace

int main() {
    std::vector<Criterion> results;

    // 1. Delta-system suite: exact coverage across primes and prime powers.
    results.push_back(run(1, [](Criterion& c) {
        for (long long p : {5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                            47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97}) {
            DeltaSystem d = build_delta(Field(p));
            const long long size = static_cast<long long>(d.delta.size());
            c.require((size - 1) * (size - 1) < p || size * size <= p,
                      "|Delta| <= sqrt(p)+1 at p=" + std::to_string(p));
            DeltaReport rep = verify_delta(d);
            c.require(rep.coverage, "mu*Delta - Delta = F_p at p=" + std::to_string(p));
        }
        for (std::uint64_t q : {4, 8, 9, 16, 25, 27, 32}) {
            long long p = 2;
            while (q % p) ++p;
            int m = 0;
            std::uint64_t rest = q;
            while (rest % p == 0) { rest /= p; ++m; }
            DeltaSystem d = build_delta(Field(p, m), 2.0);
            DeltaReport rep = verify_delta(d);
            c.require(rep.coverage, "mu*Delta - Delta = F_q at q=" + std::to_string(q));
            if (q == 16 || q == 25 || q == 32) {
                std::size_t good = 0;
                for (const auto& [size, count] : rep.sumset_histogram)
                    if (static_cast<std::uint64_t>(size) * size <= 64 * q) good += count;
                c.require(good >= 2, "at least 2 multipliers with |xD+D| <= 8 sqrt(q) at q=" +
                                         std::to_string(q));
            }
        }
    }));

    // 2. compute_L ground truth on F_7.
    results.push_back(run(2, [](Criterion& c) {
        DeltaSystem d = build_delta(Field(7));
        c.require(d.mu.v == 4, "mu = 4 on F_7");
        c.require(compute_L(d, 7).count == 6, "L(7) = 6");
        LCountResult l5 = compute_L(d, 5);
        c.require(l5.count == 3, "L(5) = 3");
        std::vector<std::uint32_t> xs;
        for (FieldElem x : l5.xs) xs.push_back(x.v);
        c.require(xs == std::vector<std::uint32_t>{0, 1, 6}, "L(5) multipliers are {0,1,6}");
    }));

    // 3. Prime-field construction across (p, n).
    results.push_back(run(3, [](Criterion& c) {
        for (long long p : {11, 13, 17, 19, 23}) {
            DeltaSystem d = build_delta(Field(p));
            MultiplierSet X = build_X(d, Rational(1, 2), 1.0);
            for (int n : {2, 3}) {
                FurstenbergInstance inst = build_prime_furstenberg(p, n, Rational(1, 2), 1.0);
                CheckReport rep = furstenberg_check(inst, inst.witness_threshold);
                c.require(rep.covered, "coverage at threshold |X| for p=" + std::to_string(p) +
                                           " n=" + std::to_string(n));
                u128 bound = static_cast<u128>(n) * X.xs.size();
                for (int i = 0; i < n - 1; ++i) bound *= X.max_sumset;
                c.require(static_cast<u128>(inst.points.size()) <= bound,
                          "|S| <= n |X| max_sumset^(n-1) for p=" + std::to_string(p) +
                              " n=" + std::to_string(n));
                const double expo = (n - 1) / 2.0 + (n + 1) / 4.0;
                char buf[128];
                std::snprintf(buf, sizeof buf, "p=%lld n=%d |S|=%zu ratio=%.3f", p, n,
                              inst.points.size(),
                              inst.points.size() / std::pow(static_cast<double>(p), expo));
                c.log(buf);
            }
        }
    }));

    // 4. F_{p^2} construction.
    results.push_back(run(4, [](Criterion& c) {
        for (auto [p, n] : {std::pair<long long, int>{3, 2}, {5, 2}, {7, 2}, {3, 3}}) {
            FurstenbergInstance inst = build_psquare(p, n);
            for (const auto& [dir, wit] : inst.witnesses)
                c.require(wit.count >= p, "witness count >= p for p=" + std::to_string(p) +
                                              " n=" + std::to_string(n));
            std::uint64_t bound = static_cast<std::uint64_t>(n) * (p + 1);
            for (int i = 0; i < n - 1; ++i) bound *= p;
            c.require(inst.points.size() <= bound,
                      "|S| <= n(p+1)p^(n-1) for p=" + std::to_string(p) + " n=" + std::to_string(n));
            const std::uint64_t dcount = (pow_sat(inst.field.q(), n) - 1) / (inst.field.q() - 1);
            c.require(inst.witnesses.size() == dcount,
                      "every direction witnessed for p=" + std::to_string(p) +
                          " n=" + std::to_string(n));
        }
    }));

    // 5. Pair-count certificate on every instance from 3 and 4.
    results.push_back(run(5, [](Criterion& c) {
        for (long long p : {11, 13, 17, 19, 23})
            for (int n : {2, 3}) {
                PairCountReport rep =
                    pair_count_certificate(build_prime_furstenberg(p, n, Rational(1, 2), 1.0));
                c.require(rep.holds, "pair count for prime p=" + std::to_string(p) +
                                         " n=" + std::to_string(n));
            }
        for (auto [p, n] : {std::pair<long long, int>{3, 2}, {5, 2}, {7, 2}, {3, 3}}) {
            PairCountReport rep = pair_count_certificate(build_psquare(p, n));
            c.require(rep.holds,
                      "pair count for psquare p=" + std::to_string(p) + " n=" + std::to_string(n));
        }
    }));

    // 6. LW refinement suite on random grids, exact comparisons throughout.
    results.push_back(run(6, [](Criterion& c) {
        std::mt19937 rng(660660);
        for (int n = 3; n <= 5; ++n) {
            for (int m = 1; m <= n; ++m) {
                for (int trial = 0; trial < 500; ++trial) {
                    GridSet T = random_grid(rng, n, 6, n == 5 ? 1200 : (n == 4 ? 600 : 200));
                    auto [T2, cert] = refine(T, m);
                    if (!(100 * cert.t1 >= 99 * cert.t0) || !(2 * cert.t2 > cert.t1) ||
                        !cert.all_ok() || !verify_certificate(T, T2, m, cert.N).all_ok()) {
                        c.require(false, "refinement certificate at n=" + std::to_string(n) +
                                             " m=" + std::to_string(m) +
                                             " trial=" + std::to_string(trial));
                        return;
                    }
                    u128 prod = 1;
                    for (long long s : facet_sizes(T)) prod = mul_sat(prod, static_cast<u128>(s));
                    if (prod < pow_sat(static_cast<u128>(T.size()), static_cast<unsigned>(n - 1))) {
                        c.require(false, "lw_bound >= |T| at n=" + std::to_string(n));
                        return;
                    }
                }
            }
        }
        c.log("500 grids per (n, m), n in {3,4,5}, all m: all certificates exact");
    }));

    // 7. LW equality case: full cubes.
    results.push_back(run(7, [](Criterion& c) {
        for (int b : {2, 3, 4})
            for (int n : {3, 4}) {
                GridSet T = cube(b, n);
                c.require(lw_bound(T) == static_cast<double>(T.size()),
                          "lw_bound equals |T| exactly on the " + std::to_string(b) + "^" +
                              std::to_string(n) + " cube");
                for (int m = 1; m <= n; ++m) {
                    auto [T2, cert] = refine(T, m);
                    c.require(T2 == T, "refine keeps the cube at m=" + std::to_string(m));
                    c.require(cert.all_ok(), "cube certificate at m=" + std::to_string(m));
                }
            }
    }));

    // 8. Pipeline smoke + forced bounds.
    results.push_back(run(8, [](Criterion& c) {
        for (long long p : {7, 11, 13}) {
            FurstenbergInstance inst = build_prime_furstenberg(p, 3, Rational(1, 2), 1.0);
            PipelineConfig cfg;
            cfg.p = p;
            cfg.n = 3;
            PipelineReport rep = run_pipeline(cfg, inst);
            c.require(rep.completed, "pipeline completes at p=" + std::to_string(p));
            c.require(rep.s1_bound_pass, "S1 removal bound at p=" + std::to_string(p));
            c.require(rep.s2_mass_pass, "triple-mass retention at p=" + std::to_string(p));
            c.require(rep.pair_certs.size() == 3,
                      "certificate per coordinate pair at p=" + std::to_string(p));
            for (const auto& pc : rep.pair_certs)
                c.require(pc.all_ok(), "grid certificate (" + std::to_string(pc.j1) + "," +
                                           std::to_string(pc.j2) + ") at p=" + std::to_string(p));
            c.require(rep.transport_exact && rep.transport_checked > 0,
                      "transported incidences preserved exactly at p=" + std::to_string(p));
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "p=%lld: M=%lld |S1|=%lld |S2|=%lld r=%lld grid N=%lld mode=%s", p,
                          rep.M, rep.s1_size, rep.s2_size, rep.counted, rep.grid_N,
                          rep.selection_mode.c_str());
            c.log(buf);
        }
    }));

    // 9. Oracle cross-checks.
    results.push_back(run(9, [](Criterion& c) {
        std::mt19937 rng(909090);
        for (auto [p, m] : {std::pair<long long, int>{3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
            Field f = m == 1 ? Field(p) : Field(p, m);
            for (int n : {2, 3}) {
                std::vector<Point> s = sample_points(f, n, 45, rng);
                FurstenbergInstance inst{f, n, Rational(1, 2), 1.0, s, {}, 0};
                CheckReport rep = furstenberg_check(inst, 1);
                for (const auto& [dir, dr] : rep.per_direction) {
                    if (dr.count != oracles::direction_max_naive(f, n, s, dir)) {
                        c.require(false, "direction maxima differ at q=" + std::to_string(f.q()) +
                                             " n=" + std::to_string(n));
                        return;
                    }
                }
            }
        }
        for (long long p : {2, 3, 5, 7}) {
            Field f(p);
            auto dirs = enumerate_directions(f, 3);
            for (int trial = 0; trial < 30; ++trial) {
                std::vector<Direction> sub;
                std::sample(dirs.begin(), dirs.end(), std::back_inserter(sub),
                            std::min<std::size_t>(1 + rng() % 14, dirs.size()), rng);
                if (classify_hyperplanar(f, 3, sub, 1).max_coplanar !=
                    oracles::max_coplanar_all_normals(f, 3, sub)) {
                    c.require(false, "coplanarity maxima differ at p=" + std::to_string(p));
                    return;
                }
            }
        }
        c.log("direction maxima and coplanarity maxima agree with the naive oracles");
    }));

    int failures = 0;
    for (const auto& c : results) {
        std::printf("criterion %d: %s (%.2fs)\n", c.id, c.pass ? "PASS" : "FAIL", c.seconds);
        for (const auto& note : c.notes) std::printf("    %s\n", note.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures;
}
