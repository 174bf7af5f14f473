#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "geostat/analytics.hpp"
#include "geostat/geodesics.hpp"
#include "geostat/montecarlo.hpp"
#include "geostat/sampling.hpp"

using nlohmann::json;
using namespace geostat;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitUsage = 2;
constexpr int kExitConsistency = 3;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json make_manifest(const std::string& command, std::uint64_t seed,
                   json parameters, std::vector<std::string> outputs) {
    return json{{"command", command},
                {"version", kVersion},
                {"seed", seed},
                {"parameters", std::move(parameters)},
                {"outputs", std::move(outputs)},
                {"timestamp", iso_timestamp()}};
}

// Atomic file writes: temp file in the target directory, then rename, so
// an interrupted run never leaves a partial output.
void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open output file " + tmp.string());
        os << content;
        if (!os) throw Error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

void write_json_atomic(const std::string& path, const json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Per-command context: CLI flags win, then --config JSON values, then the
// GEOSTAT_SEED environment variable (for the seed), then defaults.
struct CommandCtx {
    CLI::App* cmd = nullptr;
    std::string config_path;
    std::string format = "table";
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
    json config;  // null when absent

    void add_common(CLI::App* c) {
        cmd = c;
        c->add_option("--config", config_path,
                      "JSON config file; keys match option names");
        seed_opt = c->add_option("--seed", seed, "root RNG seed");
        c->add_option("--format", format, "stdout format")
            ->check(CLI::IsMember({"json", "csv", "table"}));
    }

    void load_config() {
        if (config_path.empty()) return;
        std::ifstream is(config_path);
        if (!is) throw Error("cannot read config file " + config_path);
        try {
            is >> config;
        } catch (const json::exception& e) {
            throw Error("bad config JSON: " + std::string(e.what()));
        }
        if (!config.is_object()) throw Error("config must be a JSON object");
    }

    template <class T>
    void resolve(CLI::Option* opt, const char* key, T& value) const {
        if (opt->count() > 0) return;
        if (!config.is_null() && config.contains(key))
            value = config.at(key).get<T>();
    }

    void resolve_seed() {
        if (seed_opt->count() > 0) return;
        if (!config.is_null() && config.contains("seed")) {
            seed = config.at("seed").get<std::uint64_t>();
            return;
        }
        if (const char* env = std::getenv("GEOSTAT_SEED"))
            seed = std::strtoull(env, nullptr, 10);
    }
};

struct ScenarioOpts {
    double lambda = 0.0, r0 = 0.0, L = 0.0;
    CLI::Option *lambda_opt = nullptr, *r0_opt = nullptr, *L_opt = nullptr;

    void add(CLI::App* cmd) {
        lambda_opt = cmd->add_option("--lambda", lambda, "vehicle density per unit length");
        r0_opt = cmd->add_option("--r0", r0, "communication range");
        L_opt = cmd->add_option("--L", L, "source-destination distance");
    }
    void resolve(const CommandCtx& ctx) {
        ctx.resolve(lambda_opt, "lambda", lambda);
        ctx.resolve(r0_opt, "r0", r0);
        ctx.resolve(L_opt, "L", L);
    }
    bool any_given(const CommandCtx& ctx) const {
        auto given = [&](CLI::Option* o, const char* k) {
            return o->count() > 0 || (!ctx.config.is_null() && ctx.config.contains(k));
        };
        return given(lambda_opt, "lambda") || given(r0_opt, "r0") || given(L_opt, "L");
    }
    void require_all(const CommandCtx& ctx) const {
        auto given = [&](CLI::Option* o, const char* k) {
            return o->count() > 0 || (!ctx.config.is_null() && ctx.config.contains(k));
        };
        if (!given(lambda_opt, "lambda") || !given(r0_opt, "r0") || !given(L_opt, "L"))
            throw Error("need --lambda, --r0 and --L (flags or config file)");
    }
    Scenario make() const { return Scenario(lambda, r0, L); }
};

std::vector<double> parse_grid(const std::string& text) {
    // comma-separated values; "a:b" expands to integers a..b
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            out.push_back(std::stod(tok));
        } else {
            const long a = std::stol(tok.substr(0, colon));
            const long b = std::stol(tok.substr(colon + 1));
            for (long v = a; v <= b; ++v) out.push_back(static_cast<double>(v));
        }
    }
    return out;
}

// ---------------------------------------------------------------- analytic

struct MomentRow {
    std::string quantity;
    std::string provenance;
    MomentPolynomial poly;
};

int run_analytic(CommandCtx& ctx, ScenarioOpts& sopts, double big_lambda,
                 CLI::Option* bl_opt, int k_in, CLI::Option* k_opt,
                 const std::string& out_path) {
    ctx.resolve(bl_opt, "big_lambda", big_lambda);
    int k_val = k_in;
    ctx.resolve(k_opt, "k", k_val);
    const bool have_bl = bl_opt->count() > 0 ||
                         (!ctx.config.is_null() && ctx.config.contains("big_lambda"));
    const bool have_k =
        k_opt->count() > 0 || (!ctx.config.is_null() && ctx.config.contains("k"));

    int k = 0;
    double lam = 0.0;
    json params;
    if (have_bl || have_k) {
        if (sopts.any_given(ctx))
            throw Error("give either (--lambda, --r0, --L) or (--big-lambda, --k), not both");
        if (!(have_bl && have_k))
            throw Error("--big-lambda and --k go together");
        if (!(big_lambda >= 0.0)) throw Error("--big-lambda must be >= 0");
        if (k_val < 2)
            throw Error("--k must be >= 2 (a direct link has exactly one geodesic)");
        k = k_val;
        lam = big_lambda;
        params = json{{"big_lambda", lam}, {"k", k}};
    } else {
        sopts.require_all(ctx);
        sopts.resolve(ctx);
        const Scenario s = sopts.make();
        if (s.degenerate())
            throw DegenerateScenario("L is an exact multiple of r0 (lens width 0)");
        k = s.hop_count();
        if (k == 1)
            throw DirectConnection("L <= r0: source and destination connect directly");
        lam = s.big_lambda();
        params = json{{"lambda", s.lambda}, {"r0", s.r0}, {"L", s.L}};
    }

    std::vector<MomentRow> rows;
    rows.push_back({"mean", "paper", mean_sigma(k)});
    if (k == 3 || k == 4)
        rows.push_back({"variance", "paper", variance_sigma_paper(k)});
    if (k >= 2)
        rows.push_back({"variance", k <= 7 ? "mecke" : "recursion",
                        variance_sigma_oracle(k)});
    if (k == 3) {
        rows.push_back({"third_central_moment", "paper", third_central_moment_paper()});
        rows.push_back({"third_central_moment", "mecke", mecke_central_moment(3, 3)});
    }

    json report{{"k", k}, {"big_lambda", lam}};
    json moments = json::array();
    for (const auto& r : rows)
        moments.push_back(json{{"quantity", r.quantity},
                               {"provenance", r.provenance},
                               {"value", r.poly.evaluate(lam)},
                               {"polynomial", r.poly.to_json()},
                               {"polynomial_str", r.poly.str()}});
    report["moments"] = moments;

    if (ctx.format == "json") {
        std::cout << report.dump(2) << "\n";
    } else if (ctx.format == "csv") {
        std::cout << "k,big_lambda,quantity,provenance,value\n";
        for (const auto& r : rows)
            std::cout << k << ',' << fmt17(lam) << ',' << r.quantity << ','
                      << r.provenance << ',' << fmt17(r.poly.evaluate(lam)) << "\n";
    } else {
        std::cout << "k = " << k << "\nLambda_k = " << fmt6(lam) << "\n";
        for (const auto& r : rows)
            std::cout << r.quantity << " [" << r.provenance
                      << "] = " << fmt6(r.poly.evaluate(lam)) << "   ("
                      << r.poly.str() << ")\n";
    }

    if (!out_path.empty()) {
        report["manifest"] = make_manifest("analytic", ctx.seed, params, {out_path});
        write_json_atomic(out_path, report);
    }
    return 0;
}

// ---------------------------------------------------------------- simulate

int run_simulate(CommandCtx& ctx, ScenarioOpts& sopts, std::uint64_t trials,
                 CLI::Option* trials_opt, std::string algorithm,
                 CLI::Option* algo_opt, unsigned workers, CLI::Option* workers_opt,
                 const std::string& out_path, const std::string& dump_trials_path) {
    sopts.require_all(ctx);
    sopts.resolve(ctx);
    ctx.resolve(trials_opt, "trials", trials);
    ctx.resolve(algo_opt, "algorithm", algorithm);
    ctx.resolve(workers_opt, "workers", workers);
    if (trials < 1) throw Error("--trials must be >= 1");

    EnsembleConfig cfg{sopts.make()};
    cfg.trials = trials;
    cfg.root_seed = ctx.seed;
    cfg.algorithm = algorithm_from_name(algorithm);
    cfg.parallelism = workers;

    const EnsembleSummary summary = run_ensemble(cfg);
    const ComparisonReport report = compare_to_analytic(summary);

    const json params{{"lambda", cfg.scenario.lambda}, {"r0", cfg.scenario.r0},
                      {"L", cfg.scenario.L},           {"trials", trials},
                      {"seed", ctx.seed},              {"algorithm", algorithm},
                      {"workers", workers}};

    if (ctx.format == "json") {
        json doc = summary.to_json();
        doc["comparison"] = report.to_json();
        std::cout << doc.dump(2) << "\n";
    } else if (ctx.format == "csv") {
        std::cout << "k,big_lambda,trials,mean,variance,m3,se_mean,zero_fraction\n"
                  << summary.k << ',' << fmt17(summary.big_lambda) << ','
                  << summary.trials << ',' << fmt17(summary.mean) << ','
                  << fmt17(summary.variance) << ','
                  << fmt17(summary.central_moment_3) << ','
                  << fmt17(summary.se_mean) << ',' << fmt17(summary.zero_fraction)
                  << "\n";
    } else {
        std::cout << "k = " << summary.k
                  << "  Lambda_k = " << fmt6(summary.big_lambda)
                  << "  trials = " << summary.trials << "\n"
                  << "mean = " << fmt6(summary.mean)
                  << "  (se " << fmt6(summary.se_mean) << ")\n"
                  << "variance = " << fmt6(summary.variance)
                  << "  (se " << fmt6(summary.se_variance) << ")\n"
                  << "m3 = " << fmt6(summary.central_moment_3)
                  << "  zero_fraction = " << fmt6(summary.zero_fraction) << "\n";
        for (const auto& e : report.entries)
            std::cout << e.quantity << " vs " << e.provenance << ": analytic "
                      << fmt6(e.analytic) << ", z = " << fmt6(e.z) << " ["
                      << (e.pass ? "ok" : "off") << "]\n";
    }

    if (!out_path.empty()) {
        json doc = summary.to_json();
        doc["comparison"] = report.to_json();
        doc["manifest"] = make_manifest("simulate", ctx.seed, params, {out_path});
        write_json_atomic(out_path, doc);
    }
    if (!dump_trials_path.empty()) {
        std::ostringstream os;
        write_trials_csv(os, cfg);
        write_file_atomic(dump_trials_path, os.str());
        write_json_atomic(dump_trials_path + ".manifest.json",
                          make_manifest("simulate", ctx.seed, params,
                                        {dump_trials_path}));
    }
    return report.mean_pass ? 0 : kExitConsistency;
}

// --------------------------------------------------------------------- pmf

int run_pmf(CommandCtx& ctx, ScenarioOpts& sopts, std::uint64_t trials,
            CLI::Option* trials_opt, std::uint64_t max_sigma,
            CLI::Option* max_sigma_opt, unsigned workers, CLI::Option* workers_opt,
            const std::string& out_path) {
    sopts.require_all(ctx);
    sopts.resolve(ctx);
    ctx.resolve(trials_opt, "trials", trials);
    ctx.resolve(max_sigma_opt, "max_sigma", max_sigma);
    ctx.resolve(workers_opt, "workers", workers);
    if (trials < 1) throw Error("--trials must be >= 1");

    EnsembleConfig cfg{sopts.make()};
    cfg.trials = trials;
    cfg.root_seed = ctx.seed;
    cfg.parallelism = workers;

    // 0 = no pooling: keep every observed bin
    const std::uint64_t effective_max =
        max_sigma == 0 ? std::numeric_limits<std::uint64_t>::max() - 1 : max_sigma;
    const PmfEstimate est = estimate_pmf(cfg, effective_max);

    std::ostringstream csv;
    csv << "sigma,freq,ci_lo,ci_hi\n";
    for (const auto& b : est.bins)
        csv << b.sigma << ',' << fmt17(b.freq) << ',' << fmt17(b.ci_lo) << ','
            << fmt17(b.ci_hi) << "\n";

    if (ctx.format == "csv") {
        std::cout << csv.str();
    } else if (ctx.format == "json") {
        json bins = json::array();
        for (const auto& b : est.bins)
            bins.push_back(json{{"sigma", b.sigma},
                                {"overflow", b.overflow},
                                {"count", b.count},
                                {"freq", b.freq},
                                {"ci_lo", b.ci_lo},
                                {"ci_hi", b.ci_hi}});
        json doc{{"trials", est.trials}, {"bins", bins},
                 {"mean", est.summary.mean}, {"k", est.summary.k},
                 {"big_lambda", est.summary.big_lambda}};
        std::cout << doc.dump(2) << "\n";
    } else {
        double total = 0.0;
        for (const auto& b : est.bins) total += b.freq;
        std::cout << "k = " << est.summary.k
                  << "  Lambda_k = " << fmt6(est.summary.big_lambda)
                  << "  trials = " << est.trials << "\n"
                  << "bins = " << est.bins.size() << "  total mass = "
                  << fmt17(total) << "\n"
                  << "histogram mean = " << fmt6(est.summary.mean)
                  << "  analytic mean = "
                  << fmt6(mean_sigma(est.summary.k).evaluate(est.summary.big_lambda))
                  << "\n";
    }

    if (!out_path.empty()) {
        const json params{{"lambda", cfg.scenario.lambda}, {"r0", cfg.scenario.r0},
                          {"L", cfg.scenario.L},           {"trials", trials},
                          {"seed", ctx.seed},              {"max_sigma", max_sigma},
                          {"workers", workers}};
        write_file_atomic(out_path, csv.str());
        write_json_atomic(out_path + ".manifest.json",
                          make_manifest("pmf", ctx.seed, params, {out_path}));
    }
    return 0;
}

// ------------------------------------------------------------------- sweep

int run_cmd_sweep(CommandCtx& ctx, int k, CLI::Option* k_opt, std::string grid_text,
                  CLI::Option* grid_opt, std::string combos_text,
                  CLI::Option* combos_opt, double r0, CLI::Option* r0_opt,
                  std::uint64_t trials, CLI::Option* trials_opt, unsigned workers,
                  CLI::Option* workers_opt, const std::string& out_path) {
    ctx.resolve(k_opt, "k", k);
    ctx.resolve(grid_opt, "grid", grid_text);
    ctx.resolve(combos_opt, "combos", combos_text);
    ctx.resolve(r0_opt, "r0", r0);
    ctx.resolve(trials_opt, "trials", trials);
    ctx.resolve(workers_opt, "workers", workers);

    SweepSpec spec;
    spec.k = k;
    spec.big_lambda_grid = parse_grid(grid_text);
    spec.lambdas = parse_grid(combos_text);
    spec.r0 = r0;
    spec.trials = trials;
    spec.root_seed = ctx.seed;
    spec.parallelism = workers;
    if (spec.big_lambda_grid.empty() || spec.lambdas.empty())
        throw Error("empty sweep grid");

    const auto rows = run_sweep(spec);
    if (rows.empty()) throw Error("sweep grid is entirely infeasible");

    std::ostringstream csv;
    write_sweep_csv(csv, rows);

    if (ctx.format == "csv") {
        std::cout << csv.str();
    } else if (ctx.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"big_lambda", r.big_lambda}, {"lambda", r.lambda},
                               {"r0", r.r0},                 {"L", r.L},
                               {"mean_mc", r.mean_mc},       {"var_mc", r.var_mc},
                               {"mean_an", r.mean_an},
                               {"var_an_paper", r.var_an_paper},
                               {"var_an_mecke", r.var_an_mecke},
                               {"se_mean", r.se_mean}});
        std::cout << json{{"rows", arr}}.dump(2) << "\n";
    } else {
        std::cout << "sweep k=" << k << ": " << rows.size() << " feasible rows, "
                  << trials << " trials each\n";
        for (const auto& r : rows)
            std::cout << "Lambda " << fmt6(r.big_lambda) << "  lambda "
                      << fmt6(r.lambda) << "  mean_mc " << fmt6(r.mean_mc)
                      << "  mean_an " << fmt6(r.mean_an) << "\n";
    }

    if (!out_path.empty()) {
        const json params{{"k", k},       {"grid", grid_text},
                          {"combos", combos_text}, {"r0", r0},
                          {"trials", trials},      {"seed", ctx.seed},
                          {"workers", workers}};
        write_file_atomic(out_path, csv.str());
        write_json_atomic(out_path + ".manifest.json",
                          make_manifest("sweep", ctx.seed, params, {out_path}));
    }
    return 0;
}

// ------------------------------------------------------------- rebroadcast

int run_rebroadcast(CommandCtx& ctx, ScenarioOpts& sopts, double target,
                    CLI::Option* target_opt, const std::string& out_path) {
    sopts.require_all(ctx);
    sopts.resolve(ctx);
    ctx.resolve(target_opt, "target", target);
    if (!(target > 0.0)) throw Error("--target must be > 0");

    RebroadcastQuery q{target, sopts.make()};
    const RebroadcastResult r = rebroadcast_probability(q);

    json doc{{"nu", r.nu},
             {"nu_raw", r.nu_raw},
             {"clamped", r.clamped},
             {"target", target},
             {"target_check", r.target_check},
             {"k", r.k},
             {"big_lambda", r.big_lambda}};

    if (ctx.format == "json") {
        std::cout << doc.dump(2) << "\n";
    } else if (ctx.format == "csv") {
        std::cout << "nu,nu_raw,clamped,target,target_check,k,big_lambda\n"
                  << fmt17(r.nu) << ',' << fmt17(r.nu_raw) << ','
                  << (r.clamped ? 1 : 0) << ',' << fmt17(target) << ','
                  << fmt17(r.target_check) << ',' << r.k << ','
                  << fmt17(r.big_lambda) << "\n";
    } else {
        std::cout << "k = " << r.k << "  Lambda_k = " << fmt6(r.big_lambda) << "\n"
                  << "re-broadcast probability nu = " << fmt6(r.nu)
                  << (r.clamped ? "  (clamped from " + fmt6(r.nu_raw) + ")" : "")
                  << "\n"
                  << "self-check: E[sigma] at nu*Lambda = " << fmt6(r.target_check)
                  << " (target " << fmt6(target) << ")\n";
    }

    if (!out_path.empty()) {
        const json params{{"lambda", q.scenario.lambda},
                          {"r0", q.scenario.r0},
                          {"L", q.scenario.L},
                          {"target", target}};
        doc["manifest"] = make_manifest("rebroadcast", ctx.seed, params, {out_path});
        write_json_atomic(out_path, doc);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic multihop path statistics for 1D road networks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // analytic ------------------------------------------------------------
    auto* analytic = app.add_subcommand("analytic", "closed-form moments");
    CommandCtx a_ctx;
    a_ctx.add_common(analytic);
    ScenarioOpts a_scen;
    a_scen.add(analytic);
    double a_bl = 0.0;
    int a_k = 0;
    std::string a_out;
    auto* a_bl_opt = analytic->add_option("--big-lambda", a_bl, "Lambda_k directly");
    auto* a_k_opt = analytic->add_option("--k", a_k, "hop count (with --big-lambda)");
    analytic->add_option("--out", a_out, "write JSON report here");

    // simulate ------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble");
    CommandCtx s_ctx;
    s_ctx.add_common(simulate);
    ScenarioOpts s_scen;
    s_scen.add(simulate);
    std::uint64_t s_trials = 1'000'000;
    std::string s_algo = "lens_chains";
    unsigned s_workers = 0;
    std::string s_out, s_dump;
    auto* s_trials_opt = simulate->add_option("--trials", s_trials, "number of realisations");
    auto* s_algo_opt = simulate->add_option("--algorithm", s_algo, "counting algorithm")
                           ->check(CLI::IsMember({"lens_chains", "bfs", "both"}));
    auto* s_workers_opt = simulate->add_option("--workers", s_workers,
                                               "worker threads (0 = hardware)");
    simulate->add_option("--out", s_out, "write summary JSON here");
    simulate->add_option("--dump-trials", s_dump, "write per-trial CSV here");

    // pmf -----------------------------------------------------------------
    auto* pmf = app.add_subcommand("pmf", "empirical pmf of sigma");
    CommandCtx p_ctx;
    p_ctx.add_common(pmf);
    ScenarioOpts p_scen;
    p_scen.add(pmf);
    std::uint64_t p_trials = 1'000'000;
    std::uint64_t p_max_sigma = 0;
    unsigned p_workers = 0;
    std::string p_out;
    auto* p_trials_opt = pmf->add_option("--trials", p_trials, "number of realisations");
    auto* p_max_opt = pmf->add_option("--max-sigma", p_max_sigma,
                                      "pool mass above this sigma (0 = no pooling)");
    auto* p_workers_opt = pmf->add_option("--workers", p_workers, "worker threads");
    pmf->add_option("--out", p_out, "write CSV here");

    // sweep ---------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Lambda sweep vs closed forms");
    CommandCtx w_ctx;
    w_ctx.add_common(sweep);
    int w_k = 3;
    std::string w_grid = "1:20";
    std::string w_combos = "10,20,50";
    double w_r0 = 1.0;
    std::uint64_t w_trials = 100'000;
    unsigned w_workers = 0;
    std::string w_out;
    auto* w_k_opt = sweep->add_option("--k", w_k, "hop count");
    auto* w_grid_opt = sweep->add_option("--big-lambda-grid", w_grid,
                                         "Lambda grid, e.g. 1:20 or 2,5,10");
    auto* w_combos_opt = sweep->add_option("--combos", w_combos,
                                           "comma-separated lambda values");
    auto* w_r0_opt = sweep->add_option("--r0", w_r0, "communication range");
    auto* w_trials_opt = sweep->add_option("--trials", w_trials, "trials per row");
    auto* w_workers_opt = sweep->add_option("--workers", w_workers, "worker threads");
    sweep->add_option("--out", w_out, "write CSV here");

    // rebroadcast ----------------------------------------------------------
    auto* rebroadcast = app.add_subcommand("rebroadcast",
                                           "thinning probability for a target path count");
    CommandCtx r_ctx;
    r_ctx.add_common(rebroadcast);
    ScenarioOpts r_scen;
    r_scen.add(rebroadcast);
    double r_target = 0.0;
    std::string r_out;
    auto* r_target_opt = rebroadcast->add_option("--target", r_target,
                                                 "target expected path count");
    rebroadcast->add_option("--out", r_out, "write JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (analytic->parsed()) {
            a_ctx.load_config();
            a_ctx.resolve_seed();
            return run_analytic(a_ctx, a_scen, a_bl, a_bl_opt, a_k, a_k_opt, a_out);
        }
        if (simulate->parsed()) {
            s_ctx.load_config();
            s_ctx.resolve_seed();
            return run_simulate(s_ctx, s_scen, s_trials, s_trials_opt, s_algo,
                                s_algo_opt, s_workers, s_workers_opt, s_out, s_dump);
        }
        if (pmf->parsed()) {
            p_ctx.load_config();
            p_ctx.resolve_seed();
            return run_pmf(p_ctx, p_scen, p_trials, p_trials_opt, p_max_sigma,
                           p_max_opt, p_workers, p_workers_opt, p_out);
        }
        if (sweep->parsed()) {
            w_ctx.load_config();
            w_ctx.resolve_seed();
            return run_cmd_sweep(w_ctx, w_k, w_k_opt, w_grid, w_grid_opt, w_combos,
                                 w_combos_opt, w_r0, w_r0_opt, w_trials,
                                 w_trials_opt, w_workers, w_workers_opt, w_out);
        }
        if (rebroadcast->parsed()) {
            r_ctx.load_config();
            r_ctx.resolve_seed();
            return run_rebroadcast(r_ctx, r_scen, r_target, r_target_opt, r_out);
        }
    } catch (const AlgorithmMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
