#include "spooky/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "spooky/analysis.hpp"
#include "spooky/box_policies.hpp"
#include "spooky/errors.hpp"
#include "spooky/maker_engine.hpp"

namespace spooky {

namespace {

constexpr std::uint64_t kBreakerStream = 0x627265616b6572ULL;

std::string fmt(double v, const char* spec = "%.10g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct PlayOptions {
    std::uint32_t n = 200;
    double p = 0.2;
    std::uint32_t b = 2;
    double eps = 0.5;
    std::optional<double> delta;
    std::optional<double> ell_degree;
    std::optional<double> ell_nbhd;
    std::string ell = "default";
    std::uint64_t seed = 1;
    std::string breaker = "random";
    std::uint32_t target = 0;
    std::string maker = "potential";
    bool breaker_first = false;
    bool strict = false;
};

void add_game_options(CLI::App& cmd, PlayOptions& o) {
    cmd.add_option("--n", o.n, "number of vertices");
    cmd.add_option("--p", o.p, "edge probability of Γ");
    cmd.add_option("--eps", o.eps, "epsilon");
    cmd.add_option("--delta", o.delta, "override delta (default 1e-6 eps^2)");
    cmd.add_option("--ell-degree", o.ell_degree, "override the degree game slack");
    cmd.add_option("--ell-nbhd", o.ell_nbhd, "override the neighbourhood game slack");
    cmd.add_option("--ell", o.ell, "default | auto (raise slack to ell_min)")
        ->check(CLI::IsMember({"default", "auto"}));
    cmd.add_option("--breaker", o.breaker, "null | random | vertex-focus | triangle-blocker | k4-blocker");
    cmd.add_option("--target,--v0", o.target, "focus vertex / v0 of the Breaker strategy");
    cmd.add_option("--maker", o.maker, "potential | random | greedy");
    cmd.add_flag("--breaker-first", o.breaker_first, "Breaker opens the game");
    cmd.add_flag("--strict", o.strict, "reject configs where the box-game preconditions fail");
}

RealGameParams to_params(const PlayOptions& o, std::uint32_t b, std::uint64_t seed) {
    RealGameParams params;
    params.n = o.n;
    params.p = o.p;
    params.b = b;
    params.epsilon = o.eps;
    params.delta = o.delta;
    params.ell_degree = o.ell_degree;
    params.ell_nbhd = o.ell_nbhd;
    params.ell_auto = o.ell == "auto";
    params.seed = seed;
    params.breaker_first = o.breaker_first;
    params.strict = o.strict;
    params.maker = parse_maker_kind(o.maker);
    validate(params);
    if (o.target >= o.n) throw ConfigError("target vertex out of range");
    return params;
}

std::unique_ptr<BreakerStrategy> breaker_for(const PlayOptions& o, std::uint64_t seed) {
    try {
        return make_breaker(o.breaker, o.target, mix64(seed, kBreakerStream));
    } catch (const InvalidArgument& ex) {
        throw ConfigError(ex.what());
    }
}

bool guaranteed(const ResolvedParams& r) {
    return r.degree_parameters.preconditions_ok && r.nbhd_parameters.preconditions_ok;
}

nlohmann::json play_config_json(const PlayOptions& o) {
    return {{"n", o.n},       {"p", o.p},         {"eps", o.eps},       {"ell", o.ell},
            {"breaker", o.breaker}, {"target", o.target}, {"maker", o.maker},
            {"breaker_first", o.breaker_first}, {"strict", o.strict}};
}

int cmd_play(const PlayOptions& o, const std::string& transcript_path, const std::string& report_path,
             std::ostream& out, std::ostream& err) {
    const RealGameParams params = to_params(o, o.b, o.seed);
    auto breaker = breaker_for(o, o.seed);
    GameResult result = run_game(params, *breaker);
    for (const auto& w : result.resolved.warnings) err << "warning: " << w << '\n';

    const bool tripped = params.maker == MakerKind::Potential && result.diagnostics.tripped(guaranteed(result.resolved));
    nlohmann::json report = result.report.to_json();
    report["code_version"] = kCodeVersion;
    report["config"] = result.transcript.header["params"];
    report["breaker"] = result.transcript.header.value("breaker", nlohmann::json::object());
    report["guaranteed"] = guaranteed(result.resolved);
    report["invariants_tripped"] = tripped;
    report["diagnostics"] = {{"nbhd_overflow_dropped", result.diagnostics.nbhd_overflow_dropped},
                             {"feed_over_bias", result.diagnostics.feed_over_bias},
                             {"maker_proposals", result.diagnostics.maker_proposals},
                             {"degree_game_violations", result.diagnostics.games[0].violations},
                             {"nbhd_game_violations", result.diagnostics.games[1].violations},
                             {"degree_game_potential_monotone", result.diagnostics.games[0].potential_monotone},
                             {"nbhd_game_potential_monotone", result.diagnostics.games[1].potential_monotone}};
    write_text_file(transcript_path, to_json_text(result.transcript));
    write_text_file(report_path, report.dump(2) + "\n");

    out << "hash " << result.report.transcript_hash << "  min_degree " << result.report.min_maker_degree
        << "  triangle_free " << (result.report.triangle_free ? "true" : "false") << "  k4_free_at_v0 "
        << (result.report.k4_free_at_v0 ? "true" : "false") << '\n';
    if (tripped) {
        err << "runtime invariant tripped (see report diagnostics)\n";
        return kExitFailure;
    }
    return kExitOk;
}

struct BoxOptions {
    std::uint32_t m = 1;
    std::uint32_t b = 2;
    std::uint32_t vertices = 200;
    std::uint32_t e = 16;
    std::uint32_t M = 64;
    std::uint32_t max_size = 0;
    std::string ell = "auto";
    std::string ghost = "random";
    std::string breaker = "random";
    std::uint64_t seed = 1;
    bool strict = false;
};

int cmd_boxgame(const BoxOptions& o, const std::string& transcript_path, std::ostream& out, std::ostream& err) {
    BoxGameConfig cfg{o.m, o.b, o.vertices, o.e, o.M, 0.0, o.strict};
    if (o.ell == "auto") {
        cfg.ell = derive_parameters({o.m, o.b, o.vertices, o.e, o.M, 0.0, false}).ell_min;
    } else {
        try {
            std::size_t used = 0;
            cfg.ell = std::stod(o.ell, &used);
            if (used != o.ell.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("--ell must be a number or 'auto'");
        }
    }
    if (o.vertices == 0) throw ConfigError("vertex count must be positive");
    const std::uint32_t size_cap = o.max_size ? std::min(o.max_size, o.M) : o.M;

    std::unique_ptr<GhostPolicy> ghost;
    if (o.ghost == "null") ghost = std::make_unique<NullGhost>();
    else if (o.ghost == "always-haunt") ghost = std::make_unique<AlwaysHauntGhost>();
    else if (o.ghost == "random") ghost = std::make_unique<RandomGhost>(mix64(o.seed, 1));
    else if (o.ghost == "spiteful") ghost = std::make_unique<SpitefulGhost>(mix64(o.seed, 1));
    else throw ConfigError("unknown ghost policy '" + o.ghost + "'");

    std::unique_ptr<BoxBreakerPolicy> breaker;
    if (o.breaker == "null") breaker = std::make_unique<NullBoxBreaker>();
    else if (o.breaker == "random") breaker = std::make_unique<RandomBoxBreaker>(mix64(o.seed, 2));
    else if (o.breaker == "greedy-concentrate") breaker = std::make_unique<GreedyConcentrateBreaker>();
    else throw ConfigError("unknown box breaker policy '" + o.breaker + "'");

    const auto boxes = random_boxes(o.vertices, o.e, size_cap, mix64(o.seed, 3));
    BoxGameRun run = run_box_game(cfg, boxes, *ghost, *breaker);
    run.transcript.header["code_version"] = kCodeVersion;
    run.transcript.header["seed"] = o.seed;
    write_text_file(transcript_path, to_json_text(run.transcript));

    nlohmann::json summary = {{"code_version", kCodeVersion},
                              {"rounds", run.rounds},
                              {"lambda", run.parameters.lambda},
                              {"tau", run.parameters.tau},
                              {"ell", cfg.ell},
                              {"ell_min", run.parameters.ell_min},
                              {"guaranteed", run.parameters.preconditions_ok},
                              {"max_deficit", run.max_deficit},
                              {"violations", run.violations},
                              {"potential_monotone", run.potential_monotone},
                              {"transcript_hash", hex16(run.transcript.hash())}};
    out << summary.dump(2) << '\n';
    const bool failed = !run.potential_monotone || (run.parameters.preconditions_ok && run.violations > 0);
    if (failed) err << "box game invariant failed\n";
    return failed ? kExitFailure : kExitOk;
}

struct SweepRow {
    GameReport report;
    std::uint64_t seed = 0;
    std::string error;
    int error_code = 0;
};

int cmd_sweep(const PlayOptions& o, const std::string& b_text, const std::string& seed_text, unsigned threads,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    std::vector<std::uint64_t> biases;
    std::vector<std::uint64_t> seeds;
    try {
        biases = parse_int_list(b_text);
        seeds = parse_int_list(seed_text);
    } catch (const InvalidArgument& ex) {
        throw ConfigError(ex.what());
    }
    if (biases.empty() || seeds.empty()) throw ConfigError("empty bias or seed range");
    for (auto b : biases) {
        if (b == 0 || b > 0xffffffffULL) throw ConfigError("bias out of range");
    }
    // Validate once up front so a bad config fails before any work.
    to_params(o, static_cast<std::uint32_t>(biases.front()), seeds.front());
    breaker_for(o, seeds.front());

    std::vector<std::pair<std::uint32_t, std::uint64_t>> jobs;
    for (auto b : biases) {
        for (auto s : seeds) jobs.emplace_back(static_cast<std::uint32_t>(b), s);
    }
    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            auto& row = rows[i];
            row.seed = jobs[i].second;
            try {
                const auto params = to_params(o, jobs[i].first, jobs[i].second);
                auto breaker = breaker_for(o, jobs[i].second);
                row.report = run_game(params, *breaker).report;
            } catch (const ConfigError& ex) {
                row.error = ex.what();
                row.error_code = kExitUsage;
            } catch (const std::exception& ex) {
                row.error = ex.what();
                row.error_code = kExitFailure;
            }
        }
    };
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kExitOk;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty()) {
            err << "b=" << jobs[i].first << " seed=" << jobs[i].second << ": " << rows[i].error << '\n';
            code = std::max(code, rows[i].error_code);
        }
    }
    if (code != kExitOk) return code;

    nlohmann::json config = play_config_json(o);
    config["b"] = biases;
    config["seeds"] = seeds;
    std::ostringstream csv;
    csv << "# " << kCodeVersion << ' ' << config.dump() << '\n';
    csv << "n,p,b,eps,seed,min_degree,min_nbhd_edges,max_deficit_degree_game,max_deficit_nbhd_game,triangle_free,"
           "k4_free_at_v0,transcript_hash\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        csv << r.n << ',' << fmt(r.p, "%.17g") << ',' << r.b << ',' << fmt(r.epsilon, "%.17g") << ',' << row.seed
            << ',' << r.min_maker_degree << ',' << r.min_gamma_nbhd_edges << ',' << fmt(r.max_deficit_degree_game)
            << ',' << fmt(r.max_deficit_nbhd_game) << ',' << (r.triangle_free ? "true" : "false") << ','
            << (r.k4_free_at_v0 ? "true" : "false") << ',' << r.transcript_hash << '\n';
    }
    if (out_path.empty() || out_path == "-") {
        out << csv.str();
    } else {
        write_text_file(out_path, csv.str());
    }
    return kExitOk;
}

int cmd_verify(const std::string& path, bool json, std::ostream& out, std::ostream& err) {
    if (!std::filesystem::is_regular_file(path)) throw ConfigError("cannot read transcript '" + path + "'");
    const Transcript t = read_transcript_file(path);
    const InvariantReport report = verify_transcript(t);
    if (json) {
        out << report.to_json().dump(2) << '\n';
    } else {
        out << "verdict " << (report.verdict ? "pass" : "fail") << "  events " << report.events << "  hash "
            << report.transcript_hash << '\n';
        for (const auto& c : report.checks) {
            out << (c.passed ? "  ok   " : (c.enforced ? "  FAIL " : "  warn ")) << c.name;
            if (!c.passed) out << "  (" << c.occurrences << "x, first: " << c.witness << ')';
            out << '\n';
        }
    }
    if (!report.verdict) {
        for (const auto& c : report.checks) {
            if (!c.passed && c.enforced) {
                err << "first failure: " << c.name << ": " << c.witness << '\n';
                break;
            }
        }
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace

std::vector<std::uint64_t> parse_int_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    auto number = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
            throw InvalidArgument("bad integer '" + s + "' in '" + text + "'");
        }
        return std::stoull(s);
    };
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(number(item));
            continue;
        }
        std::string hi_text = item.substr(dots + 2);
        bool geometric = false;
        if (const auto colon = hi_text.find(":x2"); colon != std::string::npos && colon + 3 == hi_text.size()) {
            geometric = true;
            hi_text.resize(colon);
        }
        const std::uint64_t lo = number(item.substr(0, dots));
        const std::uint64_t hi = number(hi_text);
        if (lo > hi || (geometric && lo == 0) || hi - lo > 1000000) throw InvalidArgument("bad range '" + item + "'");
        for (std::uint64_t v = lo; v <= hi; v = geometric ? v * 2 : v + 1) out.push_back(v);
    }
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Biased Maker-Breaker game engine"};
    app.require_subcommand(1);

    PlayOptions play;
    std::string transcript_path = "transcript.json";
    std::string report_path = "report.json";
    auto* play_cmd = app.add_subcommand("play", "run one real game");
    add_game_options(*play_cmd, play);
    play_cmd->add_option("--b", play.b, "Breaker bias");
    play_cmd->add_option("--seed", play.seed, "seed for Γ and the Breaker");
    play_cmd->add_option("--transcript", transcript_path, "transcript output path");
    play_cmd->add_option("--report", report_path, "report output path");

    BoxOptions box;
    std::string box_transcript = "boxgame.json";
    auto* box_cmd = app.add_subcommand("boxgame", "run one SpookyBox game on random boxes");
    box_cmd->add_option("--m", box.m, "Maker claims per round");
    box_cmd->add_option("--b", box.b, "Breaker claims per round");
    box_cmd->add_option("--vertices", box.vertices, "size of V");
    box_cmd->add_option("--e", box.e, "number of boxes");
    box_cmd->add_option("--M", box.M, "maximum box size");
    box_cmd->add_option("--max-initial", box.max_size, "maximum initial box size (default M)");
    box_cmd->add_option("--ell", box.ell, "slack, or 'auto' for ell_min");
    box_cmd->add_option("--ghost", box.ghost, "null | always-haunt | random | spiteful");
    box_cmd->add_option("--breaker", box.breaker, "null | random | greedy-concentrate");
    box_cmd->add_option("--seed", box.seed, "seed");
    box_cmd->add_flag("--strict", box.strict, "reject configs where the preconditions fail");
    box_cmd->add_option("--transcript", box_transcript, "transcript output path");

    PlayOptions sweep;
    std::string b_text = "1..8";
    std::string seed_text = "1,2,3";
    unsigned threads = 0;
    std::string csv_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid of games over biases and seeds, as CSV");
    add_game_options(*sweep_cmd, sweep);
    sweep_cmd->add_option("--b", b_text, "biases: list '1,2,4', range '1..8' or doubling range '1..16:x2'");
    sweep_cmd->add_option("--seeds", seed_text, "seeds, same syntax");
    sweep_cmd->add_option("--threads", threads, "worker threads (0: all cores)");
    sweep_cmd->add_option("--out", csv_path, "CSV path (default stdout)");

    std::string verify_path;
    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "replay a transcript and check every invariant");
    verify_cmd->add_option("transcript", verify_path, "transcript file")->required();
    verify_cmd->add_flag("--json", verify_json, "print the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*play_cmd) return cmd_play(play, transcript_path, report_path, out, err);
        if (*box_cmd) return cmd_boxgame(box, box_transcript, out, err);
        if (*sweep_cmd) return cmd_sweep(sweep, b_text, seed_text, threads, csv_path, out, err);
        if (*verify_cmd) return cmd_verify(verify_path, verify_json, out, err);
    } catch (const ConfigError& ex) {
        err << ex.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& ex) {
        err << "parse error at byte " << ex.byte_offset() << ": " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& ex) {
        err << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace spooky
