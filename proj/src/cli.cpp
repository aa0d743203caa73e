#include "fflab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fflab/json_io.hpp"

namespace fflab {

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

// q = p^m with p its smallest prime factor; rejects anything else.
std::pair<long long, int> factor_prime_power(long long q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
    long long p = q;
    for (long long d = 2; d * d <= q; ++d)
        if (q % d == 0) { p = d; break; }
    int m = 0;
    long long rest = q;
    while (rest % p == 0) { rest /= p; ++m; }
    if (rest != 1) throw std::invalid_argument("q is not a prime power");
    return {p, m};
}

double parse_positive(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size() || v <= 0)
        throw std::invalid_argument(std::string(what) + " must be a positive number");
    return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"exact Furstenberg-set constructions, Loomis-Whitney refinement "
                 "certificates, and incidence experiments over finite fields"};
    app.require_subcommand(1);

    // construct prime|psquare
    auto* construct = app.add_subcommand("construct", "build a point set with witness lines");
    construct->require_subcommand(1);
    long long c_p = 0;
    int c_n = 0;
    std::string c_beta = "1/2", c_K = "1", c_out;
    auto* prime = construct->add_subcommand("prime", "prime-field construction");
    prime->add_option("--p", c_p, "prime field order")->required();
    prime->add_option("--n", c_n, "dimension")->required();
    prime->add_option("--beta", c_beta, "exact rational in [0,1], e.g. 1/2");
    prime->add_option("--K", c_K, "richness constant (decimal, up to 3 places)");
    prime->add_option("--out", c_out, "output path (default stdout)");
    auto* psq = construct->add_subcommand("psquare", "construction over F_{p^2}");
    psq->add_option("--p", c_p, "prime p, field order p^2")->required();
    psq->add_option("--n", c_n, "dimension")->required();
    psq->add_option("--out", c_out, "output path (default stdout)");

    // delta
    auto* delta = app.add_subcommand("delta", "build and verify a (Delta, mu) system");
    long long d_q = 0;
    std::string d_K = "1", d_out;
    delta->add_option("--q", d_q, "prime power field order")->required();
    delta->add_option("--K", d_K, "richness constant");
    delta->add_option("--out", d_out, "output path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "exhaustive direction coverage + pair count");
    std::string v_in, v_out;
    long long v_threshold = 0;
    int v_jobs = 1;
    verify->add_option("--in", v_in, "instance JSON")->required();
    verify->add_option("--threshold", v_threshold, "required points per witness line")->required();
    verify->add_option("--jobs", v_jobs, "worker threads (1 = serial)");
    verify->add_option("--out", v_out, "output path (default stdout)");

    // refine
    auto* refine_cmd = app.add_subcommand("refine", "Loomis-Whitney refinement certificate");
    std::string r_in, r_out;
    int r_m = 0;
    long long r_constant = 0;
    refine_cmd->add_option("--in", r_in, "grid JSON")->required();
    refine_cmd->add_option("--m", r_m, "leading coordinate count")->required();
    refine_cmd->add_option("--constant", r_constant, "removal constant (default 100n)");
    refine_cmd->add_option("--out", r_out, "output path (default stdout)");

    // lab
    auto* lab = app.add_subcommand("lab", "run the full incidence pipeline");
    long long l_p = 0;
    int l_n = 0, l_jobs = 1;
    double l_coeff = 0.1;
    std::string l_out, l_csv;
    lab->add_option("--p", l_p, "prime field order")->required();
    lab->add_option("--n", l_n, "dimension (>= 3)")->required();
    lab->add_option("--delta-coeff", l_coeff, "hyperplanar delta coefficient (default 0.1)");
    lab->add_option("--jobs", l_jobs, "worker threads (1 = serial)");
    lab->add_option("--out", l_out, "report path (default stdout)");
    lab->add_option("--csv", l_csv, "richness histogram CSV path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (prime->parsed()) {
            Rational beta = parse_rational(c_beta);
            double K = parse_positive(c_K, "--K");
            rational_from_double(K);  // reject values the threshold math cannot lift
            auto inst = build_prime_furstenberg(c_p, c_n, beta, K);
            emit(dump(instance_to_json(inst)), c_out);
            return 0;
        }
        if (psq->parsed()) {
            auto inst = build_psquare(c_p, c_n);
            emit(dump(instance_to_json(inst)), c_out);
            return 0;
        }
        if (delta->parsed()) {
            auto [p, m] = factor_prime_power(d_q);
            double K = parse_positive(d_K, "--K");
            Field f = m == 1 ? Field(p) : Field(p, m);
            DeltaSystem sys = build_delta(f, K);
            DeltaReport rep = verify_delta(sys);
            json j;
            j["system"] = delta_to_json(sys);
            j["report"] = delta_report_to_json(rep);
            emit(dump(j), d_out);
            return rep.coverage ? 0 : 1;
        }
        if (verify->parsed()) {
            if (v_jobs < 1) throw std::invalid_argument("--jobs must be a positive integer");
            FurstenbergInstance inst = instance_from_json(load_json(v_in));
            CheckReport check = furstenberg_check(inst, v_threshold, v_jobs);
            PairCountReport pairs = pair_count_certificate(inst);
            json j;
            j["check"] = check_report_to_json(inst.field, check);
            j["pair_count"] = pair_count_to_json(pairs);
            emit(dump(j), v_out);
            return check.covered && pairs.holds ? 0 : 1;
        }
        if (refine_cmd->parsed()) {
            GridSet grid = grid_from_json(load_json(r_in));
            auto [refined, cert] = refine(grid, r_m, r_constant);
            json j;
            j["certificate"] = certificate_to_json(cert);
            j["refined"] = grid_to_json(refined);
            emit(dump(j), r_out);
            return cert.all_ok() ? 0 : 1;
        }
        if (lab->parsed()) {
            if (l_jobs < 1) throw std::invalid_argument("--jobs must be a positive integer");
            auto inst = build_prime_furstenberg(l_p, l_n, Rational(1, 2), 1.0);
            PipelineConfig cfg;
            cfg.p = l_p;
            cfg.n = l_n;
            cfg.delta_coefficient = l_coeff;
            cfg.jobs = l_jobs;
            PipelineReport rep = run_pipeline(cfg, inst);
            emit(dump(pipeline_report_to_json(inst.field, rep)), l_out);
            if (!l_csv.empty()) emit(histogram_to_csv(rep.richness_histogram), l_csv);
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace fflab
