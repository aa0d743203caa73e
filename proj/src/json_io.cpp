#include "fflab/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace fflab {

json field_to_json(const Field& f) {
    json j;
    j["p"] = f.p();
    j["m"] = f.m();
    if (f.m() > 1) j["modulus"] = f.modulus();
    return j;
}

Field field_from_json(const json& j) {
    long long p = j.at("p").get<long long>();
    int m = j.at("m").get<int>();
    if (m == 1) return Field(p);
    return Field(p, m, j.at("modulus").get<std::vector<int>>());
}

json elem_to_json(const Field& f, FieldElem e) {
    if (f.m() == 1) return json(e.v);
    return json(f.coeffs(e));
}

FieldElem elem_from_json(const Field& f, const json& j) {
    if (f.m() == 1) {
        std::uint64_t v = j.get<std::uint64_t>();
        return f.from_index(v);
    }
    return f.from_coeffs(j.get<std::vector<int>>());
}

json point_to_json(const Field& f, const Point& pt) {
    json j = json::array();
    for (FieldElem e : pt) j.push_back(elem_to_json(f, e));
    return j;
}

Point point_from_json(const Field& f, const json& j) {
    Point pt;
    for (const auto& e : j) pt.push_back(elem_from_json(f, e));
    return pt;
}

json direction_to_json(const Field& f, const Direction& d) {
    return point_to_json(f, d.vector);
}

Direction direction_from_json(const Field& f, const json& j) {
    return canonical_direction(f, point_from_json(f, j));
}

json line_to_json(const Field& f, const Line& l) {
    json j;
    j["base"] = point_to_json(f, l.base);
    j["dir"] = direction_to_json(f, l.dir);
    return j;
}

Line line_from_json(const Field& f, const json& j) {
    Direction d = direction_from_json(f, j.at("dir"));
    Point base = point_from_json(f, j.at("base"));
    return line_through(f, base, d);
}

json delta_to_json(const DeltaSystem& d) {
    json j;
    j["field"] = field_to_json(d.field);
    json arr = json::array();
    for (FieldElem e : d.delta) arr.push_back(elem_to_json(d.field, e));
    j["delta"] = arr;
    j["mu"] = elem_to_json(d.field, d.mu);
    j["mu_fallback"] = d.mu_fallback;
    return j;
}

DeltaSystem delta_from_json(const json& j) {
    DeltaSystem d{field_from_json(j.at("field")), {}, {}, j.at("mu_fallback").get<bool>()};
    for (const auto& e : j.at("delta")) d.delta.push_back(elem_from_json(d.field, e));
    d.mu = elem_from_json(d.field, j.at("mu"));
    return d;
}

json delta_report_to_json(const DeltaReport& r) {
    json j;
    j["delta_size"] = r.delta_size;
    j["coverage"] = r.coverage;
    j["sqrt_q"] = r.sqrt_q;
    json hist = json::array();
    for (const auto& [size, count] : r.sumset_histogram)
        hist.push_back(json::array({size, count}));
    j["sumset_histogram"] = hist;
    return j;
}

DeltaReport delta_report_from_json(const json& j) {
    DeltaReport r;
    r.delta_size = j.at("delta_size").get<std::size_t>();
    r.coverage = j.at("coverage").get<bool>();
    r.sqrt_q = j.at("sqrt_q").get<double>();
    for (const auto& row : j.at("sumset_histogram"))
        r.sumset_histogram[row.at(0).get<std::size_t>()] = row.at(1).get<std::size_t>();
    return r;
}

json instance_to_json(const FurstenbergInstance& inst) {
    json j;
    j["field"] = field_to_json(inst.field);
    j["n"] = inst.n;
    j["beta"] = format_rational(inst.beta);
    j["K"] = inst.K;
    json pts = json::array();
    for (const Point& pt : inst.points) pts.push_back(point_to_json(inst.field, pt));
    j["points"] = pts;
    json wits = json::array();
    for (const auto& [dir, wit] : inst.witnesses) {
        json w;
        w["dir"] = direction_to_json(inst.field, dir);
        w["line"] = line_to_json(inst.field, wit.line);
        w["count"] = wit.count;
        wits.push_back(w);
    }
    j["witnesses"] = wits;
    j["witness_threshold"] = inst.witness_threshold;
    return j;
}

FurstenbergInstance instance_from_json(const json& j) {
    FurstenbergInstance inst{field_from_json(j.at("field")),
                             j.at("n").get<int>(),
                             parse_rational(j.at("beta").get<std::string>()),
                             j.at("K").get<double>(),
                             {},
                             {},
                             j.at("witness_threshold").get<long long>()};
    if (inst.n < 2) throw std::invalid_argument("instance: dimension must be >= 2");
    for (const auto& pt : j.at("points")) {
        Point p = point_from_json(inst.field, pt);
        if (static_cast<int>(p.size()) != inst.n)
            throw std::invalid_argument("instance: point arity mismatch");
        inst.points.push_back(std::move(p));
    }
    std::sort(inst.points.begin(), inst.points.end());
    for (const auto& w : j.at("witnesses")) {
        Direction dir = direction_from_json(inst.field, w.at("dir"));
        Line line = line_from_json(inst.field, w.at("line"));
        if (static_cast<int>(dir.vector.size()) != inst.n ||
            static_cast<int>(line.base.size()) != inst.n)
            throw std::invalid_argument("instance: witness arity mismatch");
        inst.witnesses.emplace(dir, Witness{std::move(line), w.at("count").get<long long>()});
    }
    return inst;
}

json grid_to_json(const GridSet& g) {
    json j;
    j["n"] = g.n;
    j["elements"] = g.elems;
    return j;
}

GridSet grid_from_json(const json& j) {
    return GridSet::make(j.at("n").get<int>(),
                         j.at("elements").get<std::vector<std::vector<int>>>());
}

json certificate_to_json(const RefineCertificate& c) {
    json j;
    j["N"] = c.N;
    j["m"] = c.m;
    j["t0"] = c.t0;
    j["t1"] = c.t1;
    j["t2"] = c.t2;
    j["removal_constant"] = c.removal_constant;
    j["min_aj"] = c.min_aj;
    j["max_fiber"] = c.max_fiber;
    j["min_fiber"] = c.min_fiber;
    j["fiber_count"] = c.fiber_count;
    j["bounds_ok"] = c.bounds_ok;
    return j;
}

RefineCertificate certificate_from_json(const json& j) {
    RefineCertificate c;
    c.N = j.at("N").get<long long>();
    c.m = j.at("m").get<int>();
    c.t0 = j.at("t0").get<long long>();
    c.t1 = j.at("t1").get<long long>();
    c.t2 = j.at("t2").get<long long>();
    c.removal_constant = j.at("removal_constant").get<long long>();
    c.min_aj = j.at("min_aj").get<long long>();
    c.max_fiber = j.at("max_fiber").get<long long>();
    c.min_fiber = j.at("min_fiber").get<long long>();
    c.fiber_count = j.at("fiber_count").get<long long>();
    auto b = j.at("bounds_ok").get<std::vector<bool>>();
    for (int i = 0; i < 4; ++i) c.bounds_ok[i] = b.at(i);
    return c;
}

json check_report_to_json(const Field& f, const CheckReport& r) {
    json j;
    j["covered"] = r.covered;
    j["threshold"] = r.threshold;
    j["worst_dir"] = direction_to_json(f, r.worst);
    j["worst_max"] = r.worst_max;
    json per = json::array();
    for (const auto& [dir, dr] : r.per_direction) {
        json e;
        e["dir"] = direction_to_json(f, dir);
        e["line"] = line_to_json(f, dr.best_line);
        e["count"] = dr.count;
        per.push_back(e);
    }
    j["per_direction"] = per;
    return j;
}

CheckReport check_report_from_json(const Field& f, const json& j) {
    CheckReport r;
    r.covered = j.at("covered").get<bool>();
    r.threshold = j.at("threshold").get<long long>();
    r.worst = direction_from_json(f, j.at("worst_dir"));
    r.worst_max = j.at("worst_max").get<long long>();
    for (const auto& e : j.at("per_direction")) {
        Direction dir = direction_from_json(f, e.at("dir"));
        r.per_direction.emplace(
            dir, DirectionRichness{line_from_json(f, e.at("line")), e.at("count").get<long long>()});
    }
    return r;
}

json pair_count_to_json(const PairCountReport& r) {
    json j;
    j["holds"] = r.holds;
    j["pair_count"] = r.pair_count;
    j["witness_pairs"] = r.witness_pairs;
    j["direction_count"] = r.direction_count;
    j["min_witness"] = r.min_witness;
    j["implied_lower_bound"] = r.implied_lower_bound;
    return j;
}

PairCountReport pair_count_from_json(const json& j) {
    PairCountReport r;
    r.holds = j.at("holds").get<bool>();
    r.pair_count = j.at("pair_count").get<unsigned long long>();
    r.witness_pairs = j.at("witness_pairs").get<unsigned long long>();
    r.direction_count = j.at("direction_count").get<long long>();
    r.min_witness = j.at("min_witness").get<long long>();
    r.implied_lower_bound = j.at("implied_lower_bound").get<double>();
    return r;
}

namespace {

json pair_cert_to_json(const GridPairCertificate& pc) {
    json j;
    j["j1"] = pc.j1;
    j["j2"] = pc.j2;
    j["certificate"] = certificate_to_json(pc.cert);
    json chk;
    chk["c1"] = pc.check.c1;
    chk["c2"] = pc.check.c2;
    chk["c3"] = pc.check.c3;
    chk["c4"] = pc.check.c4;
    chk["min_aj"] = pc.check.min_aj;
    chk["min_fiber"] = pc.check.min_fiber;
    chk["max_fiber"] = pc.check.max_fiber;
    chk["image_size"] = pc.check.image_size;
    chk["max_dropped_image"] = pc.check.max_dropped_image;
    j["check"] = chk;
    j["fiber_bound_pass"] = pc.fiber_bound_pass;
    j["mass_bound_pass"] = pc.mass_bound_pass;
    j["dropped_image_pass"] = pc.dropped_image_pass;
    return j;
}

GridPairCertificate pair_cert_from_json(const json& j) {
    GridPairCertificate pc;
    pc.j1 = j.at("j1").get<int>();
    pc.j2 = j.at("j2").get<int>();
    pc.cert = certificate_from_json(j.at("certificate"));
    const json& chk = j.at("check");
    pc.check.c1 = chk.at("c1").get<bool>();
    pc.check.c2 = chk.at("c2").get<bool>();
    pc.check.c3 = chk.at("c3").get<bool>();
    pc.check.c4 = chk.at("c4").get<bool>();
    pc.check.min_aj = chk.at("min_aj").get<long long>();
    pc.check.min_fiber = chk.at("min_fiber").get<long long>();
    pc.check.max_fiber = chk.at("max_fiber").get<long long>();
    pc.check.image_size = chk.at("image_size").get<long long>();
    pc.check.max_dropped_image = chk.at("max_dropped_image").get<long long>();
    pc.fiber_bound_pass = j.at("fiber_bound_pass").get<bool>();
    pc.mass_bound_pass = j.at("mass_bound_pass").get<bool>();
    pc.dropped_image_pass = j.at("dropped_image_pass").get<bool>();
    return pc;
}

}  // namespace

json pipeline_report_to_json(const Field& f, const PipelineReport& r) {
    json j;
    j["p"] = r.p;
    j["n"] = r.n;
    j["M"] = r.M;
    j["strong_size"] = r.strong_size;
    j["W"] = r.W;
    j["s1_size"] = r.s1_size;
    j["s2_size"] = r.s2_size;
    j["s3_size"] = r.s3_size;
    j["s4_size"] = r.s4_size;
    j["s1_removed"] = r.s1_removed;
    j["s1_bound_pass"] = r.s1_bound_pass;
    j["s1_threshold_num"] = r.s1_threshold_num;
    j["s1_threshold_den"] = r.s1_threshold_den;
    j["s2_threshold_num"] = r.s2_threshold_num;
    j["s2_threshold_den"] = r.s2_threshold_den;
    j["grid_constant_used"] = r.grid_constant_used;
    j["triples_s"] = r.triples_s;
    j["triples_s1"] = r.triples_s1;
    j["triples_s2"] = r.triples_s2;
    j["retained_mass"] = r.retained_mass;
    j["s2_mass_pass"] = r.s2_mass_pass;
    j["delta"] = r.delta;
    j["hyperplanar_threshold"] = r.hyperplanar_threshold;
    j["hyperplanar_fraction"] = r.hyperplanar_fraction;
    j["s4_empty_fallback"] = r.s4_empty_fallback;
    j["selection_mode"] = r.selection_mode;
    json tup = json::array();
    for (const Point& pt : r.tuple) tup.push_back(point_to_json(f, pt));
    j["tuple"] = tup;
    j["candidate_count"] = r.candidate_count;
    j["seeing_all"] = r.seeing_all;
    j["counted"] = r.counted;
    j["dropped_at_infinity"] = r.dropped_at_infinity;
    j["family_sizes"] = r.family_sizes;
    j["grid_size"] = r.grid_size;
    j["grid_facets"] = r.grid_facets;
    j["grid_N"] = r.grid_N;
    json certs = json::array();
    for (const auto& pc : r.pair_certs) certs.push_back(pair_cert_to_json(pc));
    j["pair_certificates"] = certs;
    j["best_j1"] = r.best_j1;
    j["best_j2"] = r.best_j2;
    j["selected_lines"] = r.selected_lines;
    j["nonvertical_lines"] = r.nonvertical_lines;
    j["points2d"] = r.points2d;
    json hist = json::array();
    for (const auto& [rich, cnt] : r.richness_histogram) hist.push_back(json::array({rich, cnt}));
    j["richness_histogram"] = hist;
    j["incidences_2d"] = r.incidences_2d;
    j["cs_baseline"] = r.cs_baseline;
    j["transport_checked"] = r.transport_checked;
    j["transport_exact"] = r.transport_exact;
    j["completed"] = r.completed;
    j["note"] = r.note;
    j["all_pass"] = r.all_pass();
    return j;
}

PipelineReport pipeline_report_from_json(const Field& f, const json& j) {
    PipelineReport r;
    r.p = j.at("p").get<long long>();
    r.n = j.at("n").get<int>();
    r.M = j.at("M").get<long long>();
    r.strong_size = j.at("strong_size").get<long long>();
    r.W = j.at("W").get<unsigned long long>();
    r.s1_size = j.at("s1_size").get<long long>();
    r.s2_size = j.at("s2_size").get<long long>();
    r.s3_size = j.at("s3_size").get<long long>();
    r.s4_size = j.at("s4_size").get<long long>();
    r.s1_removed = j.at("s1_removed").get<long long>();
    r.s1_bound_pass = j.at("s1_bound_pass").get<bool>();
    r.s1_threshold_num = j.at("s1_threshold_num").get<unsigned long long>();
    r.s1_threshold_den = j.at("s1_threshold_den").get<unsigned long long>();
    r.s2_threshold_num = j.at("s2_threshold_num").get<unsigned long long>();
    r.s2_threshold_den = j.at("s2_threshold_den").get<unsigned long long>();
    r.grid_constant_used = j.at("grid_constant_used").get<long long>();
    r.triples_s = j.at("triples_s").get<unsigned long long>();
    r.triples_s1 = j.at("triples_s1").get<unsigned long long>();
    r.triples_s2 = j.at("triples_s2").get<unsigned long long>();
    r.retained_mass = j.at("retained_mass").get<unsigned long long>();
    r.s2_mass_pass = j.at("s2_mass_pass").get<bool>();
    r.delta = j.at("delta").get<double>();
    r.hyperplanar_threshold = j.at("hyperplanar_threshold").get<long long>();
    r.hyperplanar_fraction = j.at("hyperplanar_fraction").get<double>();
    r.s4_empty_fallback = j.at("s4_empty_fallback").get<bool>();
    r.selection_mode = j.at("selection_mode").get<std::string>();
    for (const auto& pt : j.at("tuple")) r.tuple.push_back(point_from_json(f, pt));
    r.candidate_count = j.at("candidate_count").get<long long>();
    r.seeing_all = j.at("seeing_all").get<long long>();
    r.counted = j.at("counted").get<long long>();
    r.dropped_at_infinity = j.at("dropped_at_infinity").get<long long>();
    r.family_sizes = j.at("family_sizes").get<std::vector<long long>>();
    r.grid_size = j.at("grid_size").get<long long>();
    r.grid_facets = j.at("grid_facets").get<std::vector<long long>>();
    r.grid_N = j.at("grid_N").get<long long>();
    for (const auto& pc : j.at("pair_certificates")) r.pair_certs.push_back(pair_cert_from_json(pc));
    r.best_j1 = j.at("best_j1").get<int>();
    r.best_j2 = j.at("best_j2").get<int>();
    r.selected_lines = j.at("selected_lines").get<long long>();
    r.nonvertical_lines = j.at("nonvertical_lines").get<long long>();
    r.points2d = j.at("points2d").get<long long>();
    for (const auto& row : j.at("richness_histogram"))
        r.richness_histogram[row.at(0).get<long long>()] = row.at(1).get<long long>();
    r.incidences_2d = j.at("incidences_2d").get<unsigned long long>();
    r.cs_baseline = j.at("cs_baseline").get<double>();
    r.transport_checked = j.at("transport_checked").get<long long>();
    r.transport_exact = j.at("transport_exact").get<bool>();
    r.completed = j.at("completed").get<bool>();
    r.note = j.at("note").get<std::string>();
    return r;
}

std::string histogram_to_csv(const std::map<long long, long long>& h) {
    std::ostringstream out;
    out << "richness,line_count\n";
    for (const auto& [rich, cnt] : h) out << rich << "," << cnt << "\n";
    return out.str();
}

}  // namespace fflab
