#include "fflab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace fflab {

namespace {

std::vector<std::uint32_t> key_of(const Point& pt) {
    std::vector<std::uint32_t> k(pt.size());
    for (std::size_t i = 0; i < pt.size(); ++i) k[i] = pt[i].v;
    return k;
}

bool contains(const std::vector<Point>& sorted, const Point& pt) {
    return std::binary_search(sorted.begin(), sorted.end(), pt);
}

}  // namespace

IncidenceSystem make_strong_system(const FurstenbergInstance& inst) {
    const Field& f = inst.field;
    if (f.m() != 1) throw std::invalid_argument("make_strong_system: prime fields only");
    const long long want = ceil_sqrt(f.p());
    const std::uint64_t dir_count =
        (pow_sat(f.q(), static_cast<unsigned>(inst.n)) - 1) / (f.q() - 1);
    if (inst.witnesses.size() != dir_count)
        throw std::invalid_argument("make_strong_system: instance must witness every direction");
    IncidenceSystem sys{f, inst.n, inst.points, {}, {}};
    for (const auto& [dir, wit] : inst.witnesses) {
        std::vector<Point> sl;
        for (const Point& pt : points_on_line(f, wit.line)) {
            if (contains(inst.points, pt)) {
                sl.push_back(pt);
                if (static_cast<long long>(sl.size()) == want) break;
            }
        }
        if (static_cast<long long>(sl.size()) < want)
            throw std::invalid_argument(
                "make_strong_system: witness line has fewer than ceil(sqrt p) points; "
                "instance must be built at beta = 1/2");
        std::sort(sl.begin(), sl.end());
        sys.lines.push_back(wit.line);
        sys.strong.emplace(wit.line, std::move(sl));
    }
    std::sort(sys.lines.begin(), sys.lines.end());
    return sys;
}

CheckReport furstenberg_check(const FurstenbergInstance& inst, long long threshold, int jobs) {
    if (jobs < 1) throw std::invalid_argument("furstenberg_check: jobs must be >= 1");
    const Field& f = inst.field;
    const auto dirs = enumerate_directions(f, inst.n);
    std::vector<DirectionRichness> results(dirs.size());

    auto work = [&](std::size_t lo, std::size_t hi) {
        std::unordered_map<std::vector<std::uint32_t>, long long, U32VecHash> buckets;
        for (std::size_t di = lo; di < hi; ++di) {
            const Direction& d = dirs[di];
            buckets.clear();
            for (const Point& pt : inst.points) buckets[key_of(line_base_key(f, pt, d))]++;
            long long best = 0;
            std::vector<std::uint32_t> best_key;
            for (const auto& [k, c] : buckets) {
                if (c > best || (c == best && (best_key.empty() || k < best_key))) {
                    best = c;
                    best_key = k;
                }
            }
            Point base(inst.n, f.zero());
            if (!best_key.empty())
                for (int i = 0; i < inst.n; ++i) base[i] = FieldElem{best_key[i]};
            results[di] = {Line{d, std::move(base)}, best};
        }
    };

    const int threads = std::min<int>(jobs, static_cast<int>(dirs.size()));
    if (threads <= 1) {
        work(0, dirs.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (dirs.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = t * chunk, hi = std::min(dirs.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    CheckReport rep;
    rep.threshold = threshold;
    rep.covered = true;
    bool first = true;
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        rep.per_direction.emplace(dirs[di], results[di]);
        if (results[di].count < threshold) rep.covered = false;
        if (first || results[di].count < rep.worst_max) {
            rep.worst = dirs[di];
            rep.worst_max = results[di].count;
            first = false;
        }
    }
    return rep;
}

PairCountReport pair_count_certificate(const FurstenbergInstance& inst) {
    if (inst.witnesses.empty())
        throw std::invalid_argument("pair_count_certificate: witnesses required");
    PairCountReport rep;
    rep.direction_count = static_cast<long long>(inst.witnesses.size());
    rep.min_witness = inst.witnesses.begin()->second.count;
    for (const auto& [dir, wit] : inst.witnesses)
        rep.min_witness = std::min(rep.min_witness, wit.count);
    const unsigned long long s = inst.points.size();
    rep.pair_count = s * (s - 1);
    rep.witness_pairs = static_cast<unsigned long long>(rep.direction_count) *
                        static_cast<unsigned long long>(rep.min_witness) *
                        static_cast<unsigned long long>(rep.min_witness - 1);
    if (rep.min_witness == 0) rep.witness_pairs = 0;
    rep.holds = rep.pair_count >= rep.witness_pairs;
    rep.implied_lower_bound = std::sqrt(static_cast<double>(rep.witness_pairs));
    return rep;
}

long long count_incidences(const Field& f, const std::vector<Point>& points,
                           const std::vector<Line>& lines) {
    long long total = 0;
    for (const Line& l : lines) {
        for (const Point& pt : points)
            if (line_base_key(f, pt, l.dir) == l.base) ++total;
    }
    return total;
}

long long count_strong_incidences(const IncidenceSystem& sys) {
    long long total = 0;
    for (const auto& [l, sl] : sys.strong) total += static_cast<long long>(sl.size());
    return total;
}

S1Result refine_s1(const IncidenceSystem& sys) {
    const long long M = static_cast<long long>(sys.points.size());
    std::uint64_t pn = 1;
    for (int i = 0; i < sys.n; ++i) pn *= static_cast<std::uint64_t>(sys.field.q());
    std::map<Point, long long> deg;
    S1Result out;
    for (const auto& [l, sl] : sys.strong) {
        out.total_strong += sl.size();
        for (const Point& pt : sl) deg[pt]++;
    }
    // Keep deg(x) <= 100*W*M / p^n, cross-multiplied.
    const u128 rhs = static_cast<u128>(100) * out.total_strong * static_cast<u128>(M);
    for (const Point& pt : sys.points) {
        auto it = deg.find(pt);
        const long long dx = it == deg.end() ? 0 : it->second;
        if (static_cast<u128>(dx) * pn <= rhs) out.s1.push_back(pt);
    }
    out.removed = M - static_cast<long long>(out.s1.size());
    out.bound_pass = static_cast<u128>(out.removed) * 100 * static_cast<u128>(M) <= pn;
    return out;
}

S2Result refine_s2(const IncidenceSystem& sys, const std::vector<Point>& s1) {
    const long long M = static_cast<long long>(sys.points.size());
    S2Result out;
    std::map<Point, unsigned long long> weight;
    for (const auto& [l, sl] : sys.strong) {
        unsigned long long inside = 0;
        for (const Point& pt : sl)
            if (contains(s1, pt)) ++inside;
        out.triple_mass += inside * inside;
        for (const Point& pt : sl)
            if (contains(s1, pt)) weight[pt] += inside;
    }
    for (const Point& pt : s1) {
        auto it = weight.find(pt);
        const unsigned long long w = it == weight.end() ? 0 : it->second;
        if (2 * static_cast<u128>(M) * w >= out.triple_mass) {
            out.s2.push_back(pt);
            out.retained += w;
        }
    }
    out.mass_pass = 2 * out.retained >= out.triple_mass;
    return out;
}

HyperplanarResult classify_hyperplanar(const Field& f, int n,
                                       const std::vector<Direction>& dirs,
                                       long long threshold) {
    if (n == 2)
        throw std::domain_error("classify_hyperplanar: unsupported in the plane");
    if (n < 3) throw std::invalid_argument("classify_hyperplanar: n must be >= 3");
    HyperplanarResult out;
    const long long count = static_cast<long long>(dirs.size());
    if (count <= n - 1) {
        out.max_coplanar = count;
        out.hyperplanar = out.max_coplanar >= threshold;
        return out;
    }
    std::vector<Point> all;
    all.reserve(dirs.size());
    for (const auto& d : dirs) all.push_back(d.vector);
    if (matrix_rank(f, all) <= n - 1) {
        out.max_coplanar = count;
        out.hyperplanar = out.max_coplanar >= threshold;
        return out;
    }
    // Any n-1 directions lie in some hyperplane; a strictly larger coplanar
    // family is spanned by n-1 of its own members.
    out.max_coplanar = n - 1;
    std::vector<int> idx(n - 1);
    for (int i = 0; i < n - 1; ++i) idx[i] = i;
    while (true) {
        std::vector<Point> rows;
        rows.reserve(n - 1);
        for (int i : idx) rows.push_back(dirs[i].vector);
        if (auto normal = hyperplane_normal(f, rows)) {
            long long c = 0;
            for (const auto& d : dirs)
                if (dot(f, normal->vector, d.vector).v == 0) ++c;
            out.max_coplanar = std::max(out.max_coplanar, c);
        }
        int pos = n - 2;
        while (pos >= 0 && idx[pos] == static_cast<int>(dirs.size()) - (n - 1 - pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < n - 1; ++i) idx[i] = idx[i - 1] + 1;
    }
    out.hyperplanar = out.max_coplanar >= threshold;
    return out;
}

namespace {

struct SmallBitset {
    std::vector<std::uint64_t> words;
    explicit SmallBitset(std::size_t bits = 0) : words((bits + 63) / 64, 0) {}
    void set(std::size_t i) { words[i / 64] |= (1ull << (i % 64)); }
    bool test(std::size_t i) const { return words[i / 64] & (1ull << (i % 64)); }
    long long count_and(const SmallBitset& o) const {
        long long c = 0;
        for (std::size_t w = 0; w < words.size(); ++w)
            c += __builtin_popcountll(words[w] & o.words[w]);
        return c;
    }
    void and_with(const SmallBitset& o) {
        for (std::size_t w = 0; w < words.size(); ++w) words[w] &= o.words[w];
    }
    long long count() const {
        long long c = 0;
        for (auto w : words) c += __builtin_popcountll(w);
        return c;
    }
};

}  // namespace

bool PipelineReport::all_pass() const {
    if (!completed || !s1_bound_pass || !s2_mass_pass || !transport_exact) return false;
    for (const auto& pc : pair_certs)
        if (!pc.all_ok()) return false;
    return true;
}

PipelineReport run_pipeline(const PipelineConfig& cfg, const FurstenbergInstance& inst) {
    const Field& f = inst.field;
    if (cfg.n < 3) throw std::invalid_argument("run_pipeline: n must be >= 3");
    if (cfg.n != inst.n || cfg.p != f.p() || f.m() != 1)
        throw std::invalid_argument("run_pipeline: config does not match the instance");
    if (cfg.s1_constant != 100 || cfg.s2_constant != 2)
        throw std::invalid_argument("run_pipeline: refinement constants are pinned to 100 and 2");
    if (cfg.jobs < 1) throw std::invalid_argument("run_pipeline: jobs must be >= 1");
    const int n = cfg.n;
    const long long p = cfg.p;

    PipelineReport rep;
    rep.p = p;
    rep.n = n;
    rep.M = static_cast<long long>(inst.points.size());
    rep.strong_size = ceil_sqrt(p);

    IncidenceSystem sys = make_strong_system(inst);
    for (const auto& [l, sl] : sys.strong) rep.triples_s += sl.size() * sl.size();

    S1Result s1 = refine_s1(sys);
    rep.W = s1.total_strong;
    rep.s1_threshold_num = 100 * s1.total_strong * static_cast<unsigned long long>(rep.M);
    rep.s1_threshold_den = 1;
    for (int i = 0; i < n; ++i) rep.s1_threshold_den *= static_cast<unsigned long long>(p);
    rep.s1_size = static_cast<long long>(s1.s1.size());
    rep.s1_removed = s1.removed;
    rep.s1_bound_pass = s1.bound_pass;

    S2Result s2 = refine_s2(sys, s1.s1);
    rep.s2_threshold_num = s2.triple_mass;
    rep.s2_threshold_den = 2 * static_cast<unsigned long long>(rep.M);
    rep.grid_constant_used = cfg.grid_constant ? cfg.grid_constant : 100ll * n;
    rep.triples_s1 = s2.triple_mass;
    rep.retained_mass = s2.retained;
    rep.s2_mass_pass = s2.mass_pass;
    rep.s2_size = static_cast<long long>(s2.s2.size());
    for (const auto& [l, sl] : sys.strong) {
        unsigned long long inside = 0;
        for (const Point& pt : sl)
            if (contains(s2.s2, pt)) ++inside;
        rep.triples_s2 += inside * inside;
    }

    // Strong lines through each point, by line index.
    std::map<Point, std::vector<int>> lines_of;
    for (int li = 0; li < static_cast<int>(sys.lines.size()); ++li)
        for (const Point& pt : sys.strong.at(sys.lines[li])) lines_of[pt].push_back(li);

    // Hyperplanar split of S2.
    rep.delta = cfg.delta_coefficient * std::pow(static_cast<double>(p), -1.0 / n);
    const double thr_real =
        rep.delta * std::pow(static_cast<double>(p), n - 0.5) / static_cast<double>(rep.M);
    rep.hyperplanar_threshold = std::max<long long>(1, static_cast<long long>(std::ceil(thr_real)));
    std::vector<Point> s3, s4;
    for (const Point& pt : s2.s2) {
        std::set<Direction> ds;
        for (int li : lines_of[pt]) ds.insert(sys.lines[li].dir);
        std::vector<Direction> dirs(ds.begin(), ds.end());
        auto h = classify_hyperplanar(f, n, dirs, rep.hyperplanar_threshold);
        (h.hyperplanar ? s3 : s4).push_back(pt);
    }
    rep.s3_size = static_cast<long long>(s3.size());
    rep.s4_size = static_cast<long long>(s4.size());
    rep.hyperplanar_fraction =
        s2.s2.empty() ? 0.0 : static_cast<double>(s3.size()) / static_cast<double>(s2.s2.size());
    if (s3.empty() && s4.empty()) throw std::domain_error("run_pipeline: S2 is empty");

    const std::vector<Point>& pool = s4.empty() ? s2.s2 : s4;
    rep.s4_empty_fallback = s4.empty();

    // Co-occurrence within S1 through strong sets.
    std::map<Point, std::set<Point>> G;
    for (const auto& [l, sl] : sys.strong) {
        std::vector<Point> inside;
        for (const Point& pt : sl)
            if (contains(s1.s1, pt)) inside.push_back(pt);
        for (const Point& a : inside)
            for (const Point& b : inside) G[a].insert(b);
    }
    std::vector<Point> cand;
    {
        std::set<Point> cs;
        for (const Point& x : pool) {
            auto it = G.find(x);
            if (it != G.end()) cs.insert(it->second.begin(), it->second.end());
        }
        cand.assign(cs.begin(), cs.end());
    }
    rep.candidate_count = static_cast<long long>(cand.size());
    if (static_cast<int>(cand.size()) < n) {
        rep.note = "not enough tuple candidates: no strong co-occurrence in the pool";
        return rep;
    }

    // mask[c] = pool members seeing candidate c through a strong line.
    std::vector<SmallBitset> mask(cand.size(), SmallBitset(pool.size()));
    for (std::size_t ci = 0; ci < cand.size(); ++ci) {
        const auto& gc = G[cand[ci]];
        for (std::size_t pi = 0; pi < pool.size(); ++pi)
            if (gc.count(pool[pi])) mask[ci].set(pi);
    }

    auto span_count = [&](const std::vector<int>& tuple_idx, const SmallBitset& seen) {
        long long r = 0;
        for (std::size_t pi = 0; pi < pool.size(); ++pi) {
            if (!seen.test(pi)) continue;
            const Point& x = pool[pi];
            bool is_member = false;
            std::vector<Point> rows;
            for (int ti : tuple_idx) {
                if (cand[ti] == x) { is_member = true; break; }
                Point dv(n);
                for (int j = 0; j < n; ++j) dv[j] = f.sub(cand[ti][j], x[j]);
                rows.push_back(std::move(dv));
            }
            if (is_member) continue;
            if (matrix_rank(f, rows) == n) ++r;
        }
        return r;
    };

    std::vector<int> best_tuple;
    long long best_r = -1;
    double tuple_space = std::pow(static_cast<double>(cand.size()), n);

    // Greedy incumbent first: per-coordinate argmax of the seeing-all count.
    {
        std::vector<int> chosen;
        SmallBitset current(pool.size());
        for (auto& w : current.words) w = ~0ull;
        for (int step = 0; step < n; ++step) {
            int best_c = -1;
            long long best_cnt = -1;
            for (std::size_t ci = 0; ci < cand.size(); ++ci) {
                if (std::find(chosen.begin(), chosen.end(), static_cast<int>(ci)) != chosen.end())
                    continue;
                long long cnt = current.count_and(mask[ci]);
                if (cnt > best_cnt) {
                    best_cnt = cnt;
                    best_c = static_cast<int>(ci);
                }
            }
            chosen.push_back(best_c);
            current.and_with(mask[best_c]);
        }
        std::sort(chosen.begin(), chosen.end());
        best_tuple = chosen;
        best_r = span_count(chosen, current);
        rep.selection_mode = "greedy";
        rep.seeing_all = current.count();
    }

    if (tuple_space <= 1e7) {
        // Exhaustive over candidate combinations, popcount-pruned.
        rep.selection_mode = "exhaustive";
        std::vector<SmallBitset> prefix(n + 1, SmallBitset(pool.size()));
        for (auto& w : prefix[0].words) w = ~0ull;
        std::vector<int> stack;
        std::function<void(int, int)> walk = [&](int depth, int start) {
            if (depth == n) {
                long long r = span_count(stack, prefix[n]);
                if (r > best_r) {
                    best_r = r;
                    best_tuple = stack;
                    rep.seeing_all = prefix[n].count();
                }
                return;
            }
            for (int ci = start; ci < static_cast<int>(cand.size()); ++ci) {
                prefix[depth + 1] = prefix[depth];
                prefix[depth + 1].and_with(mask[ci]);
                if (prefix[depth + 1].count() <= best_r) continue;
                stack.push_back(ci);
                walk(depth + 1, ci + 1);
                stack.pop_back();
            }
        };
        walk(0, 0);
        SmallBitset seen(pool.size());
        for (auto& w : seen.words) w = ~0ull;
        for (int ci : best_tuple) seen.and_with(mask[ci]);
        rep.seeing_all = seen.count();
    }

    rep.counted = best_r;
    for (int ci : best_tuple) rep.tuple.push_back(cand[ci]);
    if (best_r <= 0) {
        rep.note = "no spanning tuple found; transport skipped";
        return rep;
    }

    // Counted points: pool members seeing the whole tuple with spanning lines.
    std::vector<Point> counted;
    {
        SmallBitset seen(pool.size());
        for (auto& w : seen.words) w = ~0ull;
        for (int ci : best_tuple) seen.and_with(mask[ci]);
        for (std::size_t pi = 0; pi < pool.size(); ++pi) {
            if (!seen.test(pi)) continue;
            const Point& x = pool[pi];
            if (std::find(rep.tuple.begin(), rep.tuple.end(), x) != rep.tuple.end()) continue;
            std::vector<Point> rows;
            for (const Point& t : rep.tuple) {
                Point dv(n);
                for (int j = 0; j < n; ++j) dv[j] = f.sub(t[j], x[j]);
                rows.push_back(std::move(dv));
            }
            if (matrix_rank(f, rows) == n) counted.push_back(x);
        }
    }

    ProjectiveMap P = build_map_to_infinity(f, rep.tuple);

    // Transport counted points; anything landing at infinity is dropped with a count.
    std::map<Point, Point> image_of;
    for (const Point& x : counted) {
        ProjectedPoint y = apply_projective(f, P, x);
        if (y.at_infinity) {
            ++rep.dropped_at_infinity;
            continue;
        }
        image_of.emplace(x, y.value);
    }

    // Axis-parallel families: images of the strong lines through tuple point j.
    std::vector<std::vector<int>> family(n);
    std::vector<std::vector<Line>> family_img(n);
    for (int j = 0; j < n; ++j) {
        auto it = lines_of.find(rep.tuple[j]);
        if (it == lines_of.end()) continue;
        for (int li : it->second) {
            if (auto img = map_line(f, P, sys.lines[li])) {
                family[j].push_back(li);
                family_img[j].push_back(*img);
            }
        }
        rep.family_sizes.push_back(static_cast<long long>(family[j].size()));
    }

    // Grid embedding: label each image point by the unique family line through it.
    std::vector<std::vector<int>> rows;
    std::map<std::vector<int>, Point> row_to_image;
    bool embed_ok = true;
    for (const auto& [x, y] : image_of) {
        std::vector<int> label(n, -1);
        for (int j = 0; j < n && embed_ok; ++j) {
            int hit = -1;
            for (int k = 0; k < static_cast<int>(family_img[j].size()); ++k) {
                const Line& img = family_img[j][k];
                if (line_base_key(f, y, img.dir) == img.base) {
                    if (hit >= 0) { embed_ok = false; break; }
                    hit = k;
                }
            }
            if (hit < 0) embed_ok = false;
            label[j] = hit;
        }
        if (!embed_ok) break;
        rows.push_back(label);
        row_to_image.emplace(label, y);
    }
    if (!embed_ok || rows.empty()) {
        rep.note = "grid embedding failed";
        return rep;
    }
    GridSet T = GridSet::make(n, rows);
    if (T.size() != image_of.size()) {
        rep.note = "grid embedding is not injective";
        return rep;
    }
    rep.grid_size = static_cast<long long>(T.size());
    rep.grid_facets = facet_sizes(T);
    rep.grid_N = *std::max_element(rep.grid_facets.begin(), rep.grid_facets.end());

    // One LW refinement certificate per coordinate pair, with that pair leading.
    std::map<std::pair<int, int>, GridSet> refined;
    for (int j1 = 0; j1 < n; ++j1) {
        for (int j2 = j1 + 1; j2 < n; ++j2) {
            std::vector<int> order{j1, j2};
            for (int k = 0; k < n; ++k)
                if (k != j1 && k != j2) order.push_back(k);
            std::vector<std::vector<int>> perm;
            perm.reserve(T.size());
            for (const auto& row : T.elems) {
                std::vector<int> r2(n);
                for (int k = 0; k < n; ++k) r2[k] = row[order[k]];
                perm.push_back(std::move(r2));
            }
            GridSet Tp = GridSet::make(n, std::move(perm));
            auto [T2, cert] = refine(Tp, 2, cfg.grid_constant);
            GridPairCertificate pc;
            pc.j1 = j1;
            pc.j2 = j2;
            pc.cert = cert;
            pc.check = verify_certificate(Tp, T2, 2, cert.N);
            if (2 == n - 1) {
                const long long t = cert.t0;
                pc.fiber_bound_pass = cert.min_fiber > 0 && 2 * cert.N * cert.min_fiber >= t;
                pc.mass_bound_pass = 2 * cert.t2 >= t;
                for (int jd = 0; jd < 2; ++jd) {
                    std::set<int> img;
                    for (const auto& row : T2.elems) img.insert(row[1 - jd]);
                    if (static_cast<long long>(img.size()) * t > 2 * cert.N * cert.N)
                        pc.dropped_image_pass = false;
                }
            }
            rep.pair_certs.push_back(pc);
            // un-permute the refined rows for the 2-D stage
            std::vector<std::vector<int>> back;
            back.reserve(T2.size());
            for (const auto& row : T2.elems) {
                std::vector<int> r2(n);
                for (int k = 0; k < n; ++k) r2[order[k]] = row[k];
                back.push_back(std::move(r2));
            }
            refined.emplace(std::make_pair(j1, j2), GridSet::make(n, std::move(back)));
        }
    }

    // Selected lines: strong lines with a counted incidence; best pair by
    // non-vertical count.
    std::set<int> selected;
    for (const Point& x : counted) {
        if (!image_of.count(x)) continue;
        for (int li : lines_of[x]) selected.insert(li);
    }
    rep.selected_lines = static_cast<long long>(selected.size());
    std::map<int, Line> sel_img;
    for (int li : selected) {
        if (auto img = map_line(f, P, sys.lines[li])) sel_img.emplace(li, *img);
    }
    int bj1 = 0, bj2 = 1;
    long long best_nv = -1;
    for (int j1 = 0; j1 < n; ++j1) {
        for (int j2 = j1 + 1; j2 < n; ++j2) {
            long long nv = 0;
            for (const auto& [li, img] : sel_img)
                if (img.dir.vector[j1].v != 0 || img.dir.vector[j2].v != 0) ++nv;
            if (nv > best_nv) {
                best_nv = nv;
                bj1 = j1;
                bj2 = j2;
            }
        }
    }
    rep.best_j1 = bj1;
    rep.best_j2 = bj2;
    rep.nonvertical_lines = best_nv;

    // 2-D statistics on the survivors of the best pair's refinement.
    const GridSet& keep = refined.at({bj1, bj2});
    std::set<Point> pts2;
    for (const auto& row : keep.elems) pts2.insert(orthogonal_project(row_to_image.at(row), bj1, bj2));
    rep.points2d = static_cast<long long>(pts2.size());
    std::set<Line> lines2;
    for (const auto& [li, img] : sel_img) {
        if (img.dir.vector[bj1].v == 0 && img.dir.vector[bj2].v == 0) continue;
        Point d2 = orthogonal_project(img.dir.vector, bj1, bj2);
        Point b2 = orthogonal_project(img.base, bj1, bj2);
        lines2.insert(line_through(f, b2, canonical_direction(f, d2)));
    }
    for (const Line& l2 : lines2) {
        long long rich = 0;
        for (const Point& pt : pts2)
            if (line_base_key(f, pt, l2.dir) == l2.base) ++rich;
        rep.richness_histogram[rich]++;
        rep.incidences_2d += static_cast<unsigned long long>(rich);
    }
    {
        const double np = static_cast<double>(pts2.size());
        const double nl = static_cast<double>(lines2.size());
        rep.cs_baseline = std::min(np * std::sqrt(nl) + nl, nl * std::sqrt(np) + np);
    }

    // Transport soundness: every counted strong incidence survives exactly.
    rep.transport_exact = true;
    for (const Point& x : counted) {
        auto it = image_of.find(x);
        if (it == image_of.end()) continue;
        for (int li : lines_of[x]) {
            ++rep.transport_checked;
            auto img = map_line(f, P, sys.lines[li]);
            if (!img || line_base_key(f, it->second, img->dir) != img->base)
                rep.transport_exact = false;
        }
    }

    rep.completed = true;
    return rep;
}

}  // namespace fflab
