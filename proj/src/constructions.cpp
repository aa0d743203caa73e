#include "fflab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace fflab {

namespace {

bool covers(const Field& f, const std::vector<FieldElem>& delta, FieldElem mu) {
    std::vector<bool> seen(f.q(), false);
    std::size_t hit = 0;
    for (FieldElem d : delta) {
        FieldElem md = f.mul(mu, d);
        for (FieldElem d2 : delta) {
            FieldElem y = f.sub(md, d2);
            if (!seen[y.v]) {
                seen[y.v] = true;
                ++hit;
            }
        }
    }
    return hit == f.q();
}

DeltaSystem build_delta_prime(const Field& f) {
    const long long p = f.p();
    const long long s = ceil_sqrt(p);
    std::set<FieldElem> dset;
    for (long long x = 1; x <= s; ++x)
        dset.insert(f.from_index(static_cast<std::uint64_t>(x % p)));
    std::vector<FieldElem> delta(dset.begin(), dset.end());
    FieldElem mu = f.from_index(static_cast<std::uint64_t>((s + 1) % p));
    bool fallback = false;
    if (!covers(f, delta, mu)) {
        // mu = s+1 misses residues for most p >= 11; mu = s always covers,
        // so the scan terminates.
        fallback = true;
        bool found = false;
        for (std::uint64_t i = 0; i < f.q() && !found; ++i) {
            FieldElem cand = f.from_index(i);
            if (covers(f, delta, cand)) {
                mu = cand;
                found = true;
            }
        }
        if (!found) throw std::logic_error("build_delta: no covering multiplier");
    }
    return {f, std::move(delta), mu, fallback};
}

}  // namespace

DeltaSystem build_delta(const Field& f, double K) {
    (void)K;  // enters only through build_X / verify_delta thresholds
    if (f.m() == 1) return build_delta_prime(f);
    const long long p = f.p();
    const int m = f.m();
    const int h = m / 2;
    std::uint64_t ph = 1;
    for (int i = 0; i < h; ++i) ph *= static_cast<std::uint64_t>(p);
    if (m % 2 == 0) {
        // All polynomials of degree < h; mu = x^h. Products stay below degree
        // m, so coverage is the high/low coefficient split.
        std::vector<FieldElem> delta;
        delta.reserve(ph);
        for (std::uint64_t i = 0; i < ph; ++i) delta.push_back(f.from_index(i));
        std::vector<int> cm(m, 0);
        cm[h] = 1;
        return {f, std::move(delta), f.from_coeffs(cm), false};
    }
    DeltaSystem base = build_delta_prime(Field(p));
    std::vector<FieldElem> delta;
    delta.reserve(ph * base.delta.size());
    for (std::uint64_t hi = 0; hi < ph; ++hi)
        for (FieldElem a0 : base.delta)
            delta.push_back(f.from_index(hi * static_cast<std::uint64_t>(p) + a0.v));
    std::sort(delta.begin(), delta.end());
    std::vector<int> cm(m, 0);
    cm[h] = 1;
    cm[0] = static_cast<int>(base.mu.v);
    return {f, std::move(delta), f.from_coeffs(cm), base.mu_fallback};
}

std::size_t sumset_size(const DeltaSystem& d, FieldElem x) {
    const Field& f = d.field;
    std::vector<bool> seen(f.q(), false);
    std::size_t count = 0;
    for (FieldElem e : d.delta) {
        FieldElem xe = f.mul(x, e);
        for (FieldElem e2 : d.delta) {
            FieldElem s = f.add(xe, e2);
            if (!seen[s.v]) {
                seen[s.v] = true;
                ++count;
            }
        }
    }
    return count;
}

DeltaReport verify_delta(const DeltaSystem& d) {
    DeltaReport rep;
    rep.delta_size = d.delta.size();
    rep.coverage = covers(d.field, d.delta, d.mu);
    rep.sqrt_q = std::sqrt(static_cast<double>(d.field.q()));
    for (std::uint64_t i = 0; i < d.field.q(); ++i)
        rep.sumset_histogram[sumset_size(d, d.field.from_index(i))]++;
    return rep;
}

LCountResult compute_L(const DeltaSystem& d, long long r) {
    if (d.field.m() != 1)
        throw std::invalid_argument("compute_L: defined for prime fields only");
    LCountResult out;
    FieldElem banned = d.field.neg(d.mu);
    for (std::uint64_t i = 0; i < d.field.q(); ++i) {
        FieldElem x = d.field.from_index(i);
        if (x == banned) continue;
        if (static_cast<long long>(sumset_size(d, x)) <= r) out.xs.push_back(x);
    }
    out.count = static_cast<long long>(out.xs.size());
    return out;
}

MultiplierSet build_X(const DeltaSystem& d, const Rational& beta, double K) {
    const Field& f = d.field;
    if (f.m() != 1) throw std::invalid_argument("build_X: defined for prime fields only");
    if (K <= 0) throw std::invalid_argument("build_X: K must be positive");
    MultiplierSet out;
    out.beta = beta;
    out.K = K;
    out.requested = ceil_k_q_beta(rational_from_double(K), f.q(), beta);
    out.excluded_neg_mu = f.neg(d.mu);
    out.excluded_neg_mu_inv = f.neg(f.inv(d.mu));
    std::vector<std::pair<std::size_t, FieldElem>> eligible;
    for (std::uint64_t i = 0; i < f.q(); ++i) {
        FieldElem x = f.from_index(i);
        if (x == out.excluded_neg_mu || x == out.excluded_neg_mu_inv) continue;
        eligible.emplace_back(sumset_size(d, x), x);
    }
    if (eligible.empty()) throw std::domain_error("build_X: no non-degenerate multipliers");
    std::sort(eligible.begin(), eligible.end(),
              [](const auto& a, const auto& b) {
                  return a.first != b.first ? a.first < b.first : a.second < b.second;
              });
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(out.requested), eligible.size());
    for (std::size_t i = 0; i < take; ++i) {
        out.xs.push_back(eligible[i].second);
        out.max_sumset = std::max(out.max_sumset, eligible[i].first);
    }
    std::sort(out.xs.begin(), out.xs.end());
    return out;
}

namespace {

Point transposed(Point pt, int i) {
    std::swap(pt[0], pt[i]);
    return pt;
}

// y -> (u, v) in Delta^2 with v*mu - u = y, first match in enumeration order.
std::vector<std::pair<FieldElem, FieldElem>> coverage_table(const DeltaSystem& d) {
    const Field& f = d.field;
    std::vector<std::pair<FieldElem, FieldElem>> tab(f.q());
    std::vector<bool> have(f.q(), false);
    std::size_t found = 0;
    for (FieldElem v : d.delta) {
        FieldElem vm = f.mul(v, d.mu);
        for (FieldElem u : d.delta) {
            FieldElem y = f.sub(vm, u);
            if (!have[y.v]) {
                have[y.v] = true;
                tab[y.v] = {u, v};
                ++found;
            }
        }
    }
    if (found != f.q())
        throw std::logic_error("coverage table incomplete: delta system does not cover");
    return tab;
}

// Shared witness machinery: given S and per-coordinate anchors over the
// "pivot-0" form, produce one witness line per direction via the 1<->pivot
// transposition, with the measured |line ∩ S|.
std::map<Direction, Witness> build_witnesses(
    const Field& f, int n, const std::vector<Point>& sorted_points,
    const std::vector<std::pair<FieldElem, FieldElem>>& table) {
    std::map<Direction, Witness> out;
    auto contains = [&](const Point& pt) {
        return std::binary_search(sorted_points.begin(), sorted_points.end(), pt);
    };
    for (const Direction& dir : enumerate_directions(f, n)) {
        Point sd = transposed(dir.vector, dir.pivot);
        Point anchor(n, f.zero());
        for (int j = 1; j < n; ++j) anchor[j] = table[sd[j].v].first;
        anchor = transposed(std::move(anchor), dir.pivot);
        Line line = line_through(f, anchor, dir);
        long long count = 0;
        for (const Point& pt : points_on_line(f, line))
            if (contains(pt)) ++count;
        out.emplace(dir, Witness{std::move(line), count});
    }
    return out;
}

}  // namespace

FurstenbergInstance build_prime_furstenberg(long long p, int n, const Rational& beta, double K) {
    if (n < 2) throw std::invalid_argument("build_prime_furstenberg: n must be >= 2");
    if (beta.num < 0 || beta.num > beta.den)
        throw std::invalid_argument("build_prime_furstenberg: beta must lie in [0, 1]");
    if (beta.num == beta.den && K > 1.0)
        throw std::invalid_argument("build_prime_furstenberg: beta = 1 requires K <= 1");
    Field f(p);
    DeltaSystem d = build_delta(f);
    MultiplierSet X = build_X(d, beta, K);

    const int r = n - 1;
    std::set<Point> pts;
    std::vector<FieldElem> uv(2 * r);
    for (FieldElem a : X.xs) {
        FieldElem den = f.add(f.mul(a, d.mu), f.one());
        FieldElem dinv = f.inv(den);  // a != -mu^{-1} was excluded
        // Iterate u, v in Delta^(2(n-1)) with an odometer.
        std::vector<std::size_t> idx(2 * r, 0);
        while (true) {
            for (int i = 0; i < 2 * r; ++i) uv[i] = d.delta[idx[i]];
            Point e1(n);
            e1[0] = dinv;
            for (int j = 0; j < r; ++j) {
                FieldElem num = f.mul(f.add(f.mul(a, uv[j]), uv[r + j]), d.mu);
                e1[j + 1] = f.mul(num, dinv);
            }
            for (int i = 0; i < n; ++i) pts.insert(transposed(e1, i));
            int c = 2 * r - 1;
            while (c >= 0 && ++idx[c] == d.delta.size()) idx[c--] = 0;
            if (c < 0) break;
        }
    }

    FurstenbergInstance inst{f, n, beta, K, {pts.begin(), pts.end()}, {}, 0};
    inst.witness_threshold = static_cast<long long>(X.xs.size());
    inst.witnesses = build_witnesses(f, n, inst.points, coverage_table(d));
    for (const auto& [dir, w] : inst.witnesses) {
        if (w.count < inst.witness_threshold)
            throw std::logic_error("build_prime_furstenberg: witness below threshold");
    }
    return inst;
}

FurstenbergInstance build_psquare(long long p, int n) {
    if (n < 2) throw std::invalid_argument("build_psquare: n must be >= 2");
    Field f(p, 2);
    std::vector<int> mu_c(2, 0);
    mu_c[1] = 1;
    const FieldElem mu = f.from_coeffs(mu_c);

    const int r = n - 1;
    std::set<Point> pts;
    for (long long a = 0; a < p; ++a) {
        for (long long b = 0; b < p; ++b) {
            if (a == 0 && b == 0) continue;
            FieldElem ae = f.from_index(static_cast<std::uint64_t>(a));
            FieldElem be = f.from_index(static_cast<std::uint64_t>(b));
            FieldElem den = f.add(f.mul(ae, mu), be);  // nonzero: mu is not in F_p
            FieldElem dinv = f.inv(den);
            Point e1(n);
            e1[0] = f.mul(be, dinv);
            std::vector<long long> cs(r, 0);
            while (true) {
                for (int j = 0; j < r; ++j) {
                    FieldElem ce = f.from_index(static_cast<std::uint64_t>(cs[j]));
                    e1[j + 1] = f.mul(f.mul(ce, mu), dinv);
                }
                for (int i = 0; i < n; ++i) pts.insert(transposed(e1, i));
                int c = r - 1;
                while (c >= 0 && ++cs[c] == p) cs[c--] = 0;
                if (c < 0) break;
            }
        }
    }

    // Coverage table over (F_p, mu = x̄): y = y1*x + y0 gives v = y1, u = -y0.
    std::vector<std::pair<FieldElem, FieldElem>> table(f.q());
    for (std::uint64_t i = 0; i < f.q(); ++i) {
        auto c = f.coeffs(f.from_index(i));
        FieldElem u = f.neg(f.from_coeffs({c[0], 0}));
        FieldElem v = f.from_coeffs({c[1], 0});
        table[i] = {u, v};
    }

    FurstenbergInstance inst{f, n, Rational(1, 2), 1.0, {pts.begin(), pts.end()}, {}, p};
    inst.witnesses = build_witnesses(f, n, inst.points, table);
    for (const auto& [dir, w] : inst.witnesses) {
        if (w.count < p) throw std::logic_error("build_psquare: witness below threshold");
    }
    return inst;
}

}  // namespace fflab
