// Command-line front end: Gram-matrix assembly and cross-checks, single
// instance condition reports, randomized verification campaigns, and the
// log-type depth sweep.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyadic/campaign.hpp"
#include "dyadic/conditions.hpp"
#include "dyadic/halfplane.hpp"
#include "dyadic/paraproduct.hpp"
#include "dyadic/report_io.hpp"
#include "dyadic/symbol_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dyadic;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::uint32_t> parse_depths(const std::string& text) {
    std::vector<std::uint32_t> out;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto lo = std::stoul(text.substr(0, colon));
        const auto hi = std::stoul(text.substr(colon + 1));
        if (hi < lo) throw std::invalid_argument("--depths: empty range " + text);
        for (auto d = lo; d <= hi; ++d) out.push_back(static_cast<std::uint32_t>(d));
        return out;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        out.push_back(static_cast<std::uint32_t>(
            std::stoul(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos))));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("--depths: no depths in " + text);
    return out;
}

struct SharedArgs {
    std::uint32_t depth = 2;
    std::string b_spec = "const:1";
    std::string d_spec = "const:1";
    std::string out_dir = ".";
    double tol = 1e-10;
    std::int64_t seed = -1;

    // Resolve the two symbol specs; --seed fills in random generators that
    // did not pin their own seed (b on the even substream, d on the odd).
    std::pair<GeneratorSpec, GeneratorSpec> generators() const {
        GeneratorSpec gb = parse_generator_spec(b_spec);
        GeneratorSpec gd = parse_generator_spec(d_spec);
        if (seed >= 0) {
            const auto s = static_cast<std::uint64_t>(seed);
            if (gb.kind == GeneratorSpec::Kind::Random && !gb.seed_explicit) gb.seed = 2 * s;
            if (gd.kind == GeneratorSpec::Kind::Random && !gd.seed_explicit) gd.seed = 2 * s + 1;
        }
        return {gb, gd};
    }
};

void add_shared(CLI::App* cmd, SharedArgs& args) {
    cmd->add_option("--depth", args.depth, "tree depth D (levels 0..D)");
    cmd->add_option("--b", args.b_spec,
                    "b symbol: zero | const:<c> | log | random:seed=<n>[,gamma=<g>][,dist=<x>] | file:<path>");
    cmd->add_option("--d", args.d_spec, "d symbol, same forms as --b");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--tol", args.tol, "tolerance for the printed discrepancy checks");
    cmd->add_option("--seed", args.seed, "default seed for random symbols without seed=");
}

int cmd_gram(const SharedArgs& args) {
    const Tree tree(args.depth);
    const auto [gb, gd] = args.generators();
    const Symbol b = realize(gb, tree);
    const Symbol d = realize(gd, tree);

    const OperatorMatrix closed = composition_gram_closed(b, d);
    const OperatorMatrix direct = composition_gram_direct(b, d);
    const OperatorMatrix tclosed = t_gram_closed(b, d);
    const OperatorMatrix tdirect = t_gram_direct(b, d);

    fs::create_directories(args.out_dir);
    const std::string stem =
        "_D" + std::to_string(args.depth) + "_b" + symbol_hash(b) + "_d" + symbol_hash(d) + ".csv";
    const auto dump = [&](const char* name, const OperatorMatrix& m) {
        std::ofstream out(fs::path(args.out_dir) / (name + stem));
        if (!out) throw std::runtime_error("cannot write matrix CSV in " + args.out_dir);
        write_matrix_csv(m, out);
    };
    dump("composition_closed", closed);
    dump("composition_direct", direct);
    dump("t_closed", tclosed);
    dump("t_direct", tdirect);

    const double d1 = normalized_diff(closed, direct);
    const double d2 = normalized_diff(tclosed, scaled(closed, 2.0));
    const double d3 = normalized_diff(tclosed, tdirect);
    std::printf("max |closed - direct| / max-entry      = %.3e  (tol %.1e)\n", d1, args.tol);
    std::printf("max |T - 2 P| / max-entry              = %.3e  (tol %.1e)\n", d2, args.tol);
    std::printf("max |T_closed - T_direct| / max-entry  = %.3e  (tol %.1e)\n", d3, args.tol);
    const bool ok = d1 <= args.tol && d2 <= args.tol && d3 <= args.tol;
    std::printf("%s\n", ok ? "all Gram identities within tolerance" : "TOLERANCE BREACH");
    return ok ? 0 : 2;
}

int cmd_conditions(const SharedArgs& args) {
    const Tree tree(args.depth);
    const auto [gb, gd] = args.generators();
    const Symbol b = realize(gb, tree);
    const Symbol d = realize(gd, tree);

    ConditionsReport r = full_report(b, d, gb.kind == GeneratorSpec::Kind::Random ? gb.seed : 0);
    nlohmann::ordered_json j = report_to_json(r);
    j["b_spec"] = gb.text;
    j["d_spec"] = gd.text;
    const std::string text = j.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);

    fs::create_directories(args.out_dir);
    write_text(fs::path(args.out_dir) / ("conditions_D" + std::to_string(args.depth) + "_b" +
                                         symbol_hash(b) + "_d" + symbol_hash(d) + ".json"),
               text);
    return 0;
}

int cmd_verify(const CampaignConfig& cfg) {
    const CampaignResult res = run_verify_campaign(cfg);

    fs::create_directories(cfg.out_dir);
    write_text(fs::path(cfg.out_dir) / "campaign.csv", campaign_csv(res));
    nlohmann::ordered_json summary = campaign_summary(cfg, res);
    if (cfg.timestamp) {
        const auto now = std::chrono::system_clock::now();
        summary["generated_at"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    write_text(fs::path(cfg.out_dir) / "summary.json", summary.dump(2) + "\n");

    if (res.no_data) {
        std::printf("no data: campaign had no trials\n");
        return 0;
    }
    for (const auto& inv : res.invariants) {
        std::printf("%-32s %s  worst %.3e  bound %.3e%s%s\n", inv.name.c_str(),
                    inv.pass ? "pass" : "FAIL", inv.worst, inv.bound, inv.detail.empty() ? "" : "  @ ",
                    inv.detail.c_str());
    }
    std::printf("instances %zu  ratio [%.6g, %.6g]  kappa %.6g  kappa' %.6g\n", res.rows.size(),
                res.ratio_min, res.ratio_max, res.kappa, res.kappa_prime);
    if (!res.pass()) {
        for (const auto& inv : res.invariants)
            if (!inv.pass)
                std::fprintf(stderr, "verification failure: %s (%s)\n", inv.name.c_str(),
                             inv.detail.c_str());
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::vector<std::uint32_t>& depths, const std::string& out_dir) {
    std::string csv = "D,A,B,C,sum_ABC,op_norm,ratio,bmo_product\n";
    std::printf("%5s %12s %12s %12s %12s %12s %10s %12s\n", "D", "A", "B", "C", "A+B+C", "op_norm",
                "ratio", "bmo_b*bmo_d");
    double prev_op = -1.0;
    bool monotone = true;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto depth : depths) {
        const Tree tree(depth);
        const Symbol b = make_log_type(tree);
        const ConditionsReport r = full_report(b, b);
        const double sum = r.A + r.B + r.C;
        csv += std::to_string(depth) + ',' + format_g17(r.A) + ',' + format_g17(r.B) + ',' +
               format_g17(r.C) + ',' + format_g17(sum) + ',' + format_g17(r.op_norm) + ',' +
               format_g17(r.ratio) + ',' + format_g17(r.bmo_b * r.bmo_d) + '\n';
        std::printf("%5u %12.6g %12.6g %12.6g %12.6g %12.6g %10.6g %12.6g\n", depth, r.A, r.B, r.C,
                    sum, r.op_norm, r.ratio, r.bmo_b * r.bmo_d);
        if (prev_op >= 0.0 && r.op_norm <= prev_op) monotone = false;
        prev_op = r.op_norm;
        if (r.ratio > 0.0) {
            rmin = std::min(rmin, r.ratio);
            rmax = std::max(rmax, r.ratio);
        }
    }
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / ("sweep_D" + std::to_string(depths.front()) + "_" +
                                    std::to_string(depths.back()) + ".csv"),
               csv);
    std::printf("op_norm strictly increasing: %s\n", monotone ? "yes" : "no");
    if (rmin > 0.0 && rmax > 0.0)
        std::printf("ratio window across sweep: %.6g (campaign bound %.6g)\n", rmax / rmin,
                    kEquivalenceWindowBound);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic paraproduct composition toolkit"};
    app.require_subcommand(1);

    SharedArgs gram_args, cond_args;
    auto* gram = app.add_subcommand("gram", "assemble the four Gram matrices and check the identities");
    add_shared(gram, gram_args);
    auto* cond = app.add_subcommand("conditions", "testing constants and operator norm for one instance");
    add_shared(cond, cond_args);

    auto* verify = app.add_subcommand("verify", "randomized verification campaign");
    std::string config_path, verify_depths, verify_out;
    int verify_trials = -1;
    std::int64_t verify_seed = -1;
    double verify_gamma = -1.0, verify_tol = -1.0, inject = 0.0;
    std::string verify_dist;
    bool verify_timestamp = false;
    verify->add_option("--config", config_path, "campaign config JSON (flags override)");
    verify->add_option("--depths", verify_depths, "depth list 2:6 or 2,3,4");
    verify->add_option("--trials", verify_trials, "trials per depth");
    verify->add_option("--seed", verify_seed, "base trial seed");
    verify->add_option("--gamma", verify_gamma, "random symbol decay exponent");
    verify->add_option("--dist", verify_dist, "normal | uniform");
    verify->add_option("--tol", verify_tol, "structural tolerance override");
    verify->add_option("--out", verify_out, "output directory");
    verify->add_flag("--timestamp", verify_timestamp, "embed a timestamp in the summary");
    verify->add_option("--inject-gram-error", inject, "")->group("");  // test hook

    auto* sweep = app.add_subcommand("sweep", "depth sweep of the log-type family b = d, b_I = sqrt|I|");
    std::string sweep_depths = "2:8", sweep_out = ".";
    sweep->add_option("--depths", sweep_depths, "depth list 2:8 or 2,3,4");
    sweep->add_option("--out", sweep_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gram->parsed()) return cmd_gram(gram_args);
        if (cond->parsed()) return cmd_conditions(cond_args);
        if (verify->parsed()) {
            CampaignConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw std::runtime_error("cannot open config " + config_path);
                cfg = config_from_json(nlohmann::json::parse(in));
            }
            if (!verify_depths.empty()) cfg.depths = parse_depths(verify_depths);
            if (verify_trials >= 0) cfg.trials = verify_trials;
            if (verify_seed >= 0) cfg.seed = static_cast<std::uint64_t>(verify_seed);
            if (verify_gamma >= 0.0) cfg.gamma = verify_gamma;
            if (!verify_dist.empty())
                cfg.dist = verify_dist == "uniform" ? Distribution::Uniform : Distribution::Normal;
            if (verify_tol > 0.0) cfg.tol.structural = verify_tol;
            if (!verify_out.empty()) cfg.out_dir = verify_out;
            cfg.timestamp = verify_timestamp;
            cfg.inject_gram_error = inject;
            return cmd_verify(cfg);
        }
        if (sweep->parsed()) return cmd_sweep(parse_depths(sweep_depths), sweep_out);
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
