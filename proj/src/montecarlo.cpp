#include "geostat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "geostat/analytics.hpp"
#include "geostat/geodesics.hpp"
#include "geostat/sampling.hpp"

namespace geostat {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::lens_chains: return "lens_chains";
        case Algorithm::bfs: return "bfs";
        case Algorithm::both: return "both";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "lens_chains") return Algorithm::lens_chains;
    if (name == "bfs") return Algorithm::bfs;
    if (name == "both") return Algorithm::both;
    throw InvalidScenario("unknown algorithm '" + name + "'");
}

namespace {

constexpr std::uint64_t kHugeSigmaKey = std::numeric_limits<std::uint64_t>::max();

// Fill `out` with one PPP realisation, identical draw sequence to
// sample_ppp but into a reusable buffer.
void fill_ppp(TrialRng& rng, double rate, double lo, double hi,
              std::vector<double>& out) {
    out.clear();
    const double len = hi - lo;
    if (rate <= 0.0 || len <= 0.0) return;
    const std::uint64_t n = rng.poisson(rate * len);
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        out.push_back(lo + rng.next_unit() * len);
    std::sort(out.begin(), out.end());
}

// Exact integer accumulators; merging partial accumulators is associative
// and commutative, so the totals cannot depend on the thread layout.
struct Accum {
    explicit Accum(std::size_t batches)
        : batch_s1(batches), batch_s2(batches), batch_s3(batches),
          batch_n(batches, 0) {}

    mpz_class s1, s2, s3;
    std::uint64_t zero_count = 0;
    std::map<std::uint64_t, std::uint64_t> hist;
    std::vector<mpz_class> batch_s1, batch_s2, batch_s3;
    std::vector<std::uint64_t> batch_n;
    mpz_class tmp;  // scratch

    void add_small(std::size_t b, std::uint64_t sigma) {
        if (sigma == 0) ++zero_count;
        ++hist[sigma];
        add_powers(s1, s2, s3, sigma);
        add_powers(batch_s1[b], batch_s2[b], batch_s3[b], sigma);
        ++batch_n[b];
    }

    void add_big(std::size_t b, const mpz_class& sigma) {
        if (mpz_fits_ulong_p(sigma.get_mpz_t())) {
            add_small(b, mpz_get_ui(sigma.get_mpz_t()));
            return;
        }
        ++hist[kHugeSigmaKey];
        add_powers_big(s1, s2, s3, sigma);
        add_powers_big(batch_s1[b], batch_s2[b], batch_s3[b], sigma);
        ++batch_n[b];
    }

    void merge(const Accum& o) {
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        zero_count += o.zero_count;
        for (const auto& [k, v] : o.hist) hist[k] += v;
        for (std::size_t b = 0; b < batch_n.size(); ++b) {
            batch_s1[b] += o.batch_s1[b];
            batch_s2[b] += o.batch_s2[b];
            batch_s3[b] += o.batch_s3[b];
            batch_n[b] += o.batch_n[b];
        }
    }

  private:
    void add_powers(mpz_class& p1, mpz_class& p2, mpz_class& p3, std::uint64_t s) {
        mpz_add_ui(p1.get_mpz_t(), p1.get_mpz_t(), s);
        mpz_set_ui(tmp.get_mpz_t(), s);
        mpz_addmul_ui(p2.get_mpz_t(), tmp.get_mpz_t(), s);
        mpz_mul_ui(tmp.get_mpz_t(), tmp.get_mpz_t(), s);
        mpz_addmul_ui(p3.get_mpz_t(), tmp.get_mpz_t(), s);
    }
    void add_powers_big(mpz_class& p1, mpz_class& p2, mpz_class& p3,
                        const mpz_class& s) {
        p1 += s;
        tmp = s * s;
        p2 += tmp;
        tmp *= s;
        p3 += tmp;
    }
};

// Per-thread trial runner for one config (k >= 2, non-degenerate).
struct TrialCounter {
    TrialCounter(const EnsembleConfig& cfg, const LensDecomposition& decomp)
        : cfg_(cfg), decomp_(decomp), lens_buf_(decomp.lenses.size()),
          ptrs_(decomp.lenses.size()) {
        for (std::size_t i = 0; i < lens_buf_.size(); ++i) ptrs_[i] = &lens_buf_[i];
    }

    // sigma for one trial; result in (small, big, is_big)
    void run(std::uint64_t trial, std::uint64_t& small, mpz_class& big,
             bool& is_big) {
        const SampleSeed seed{cfg_.root_seed, trial};
        is_big = false;
        switch (cfg_.algorithm) {
            case Algorithm::lens_chains: {
                sample_all_lenses(seed);
                count_chains(small, big, is_big);
                return;
            }
            case Algorithm::bfs: {
                sample_road_points(seed);
                count_bfs_road(small, big, is_big);
                return;
            }
            case Algorithm::both: {
                sample_road_points(seed);
                filter_road_into_lenses();
                std::uint64_t cs = 0, bs = 0;
                mpz_class cb, bb;
                bool c_big = false, b_big = false;
                count_chains(cs, cb, c_big);
                count_bfs_road(bs, bb, b_big);
                const bool equal = (!c_big && !b_big)
                                       ? cs == bs
                                       : mpz_class(c_big ? cb : mpz_class(cs)) ==
                                             mpz_class(b_big ? bb : mpz_class(bs));
                if (!equal) throw mismatch(trial, cs, cb, c_big, bs, bb, b_big);
                small = cs;
                big = cb;
                is_big = c_big;
                return;
            }
        }
    }

  private:
    void sample_all_lenses(SampleSeed seed) {
        for (std::size_t i = 0; i < decomp_.lenses.size(); ++i) {
            TrialRng rng(seed, rng_stream::kLensBase + i);
            fill_ppp(rng, cfg_.scenario.lambda, decomp_.lenses[i].lo,
                     decomp_.lenses[i].hi, lens_buf_[i]);
        }
    }

    void sample_road_points(SampleSeed seed) {
        TrialRng rng(seed, rng_stream::kRoad);
        fill_ppp(rng, cfg_.scenario.lambda, 0.0, cfg_.scenario.L, road_buf_);
    }

    void filter_road_into_lenses() {
        for (std::size_t i = 0; i < decomp_.lenses.size(); ++i) {
            const auto& lens = decomp_.lenses[i];
            auto first = std::lower_bound(road_buf_.begin(), road_buf_.end(), lens.lo);
            auto last = std::upper_bound(road_buf_.begin(), road_buf_.end(), lens.hi);
            lens_buf_[i].assign(first, last);
        }
    }

    void count_chains(std::uint64_t& small, mpz_class& big, bool& is_big) {
        try {
            small = detail::chain_count<detail::CheckedU64>(decomp_.r0, ptrs_).v;
        } catch (const CountOverflow&) {
            big = detail::chain_count<mpz_class>(decomp_.r0, ptrs_);
            is_big = true;
        }
    }

    void count_bfs_road(std::uint64_t& small, mpz_class& big, bool& is_big) {
        try {
            small = detail::bfs_count<detail::CheckedU64>(road_buf_, decomp_.r0,
                                                          cfg_.scenario.L, decomp_.k)
                        .second.v;
        } catch (const CountOverflow&) {
            big = detail::bfs_count<mpz_class>(road_buf_, decomp_.r0,
                                               cfg_.scenario.L, decomp_.k)
                      .second;
            is_big = true;
        }
    }

    AlgorithmMismatch mismatch(std::uint64_t trial, std::uint64_t cs,
                               const mpz_class& cb, bool c_big, std::uint64_t bs,
                               const mpz_class& bb, bool b_big) const {
        std::ostringstream os;
        os << "lens_chains sigma = " << (c_big ? cb.get_str() : std::to_string(cs))
           << ", bfs sigma = " << (b_big ? bb.get_str() : std::to_string(bs))
           << "\nscenario lambda=" << cfg_.scenario.lambda
           << " r0=" << cfg_.scenario.r0 << " L=" << cfg_.scenario.L
           << "\nroad points (" << road_buf_.size() << "):";
        char buf[64];
        for (double x : road_buf_) {
            std::snprintf(buf, sizeof(buf), " %.17g", x);
            os << buf;
        }
        return AlgorithmMismatch(cfg_.root_seed, trial, os.str());
    }

    const EnsembleConfig& cfg_;
    const LensDecomposition& decomp_;
    std::vector<std::vector<double>> lens_buf_;
    std::vector<const std::vector<double>*> ptrs_;
    std::vector<double> road_buf_;
};

std::size_t batch_of(std::uint64_t trial, std::uint64_t batches, std::uint64_t trials) {
    return static_cast<std::size_t>(
        static_cast<unsigned __int128>(trial) * batches / trials);
}

EnsembleSummary constant_summary(const EnsembleConfig& cfg, int k,
                                 std::uint64_t sigma) {
    EnsembleSummary out(cfg.scenario);
    out.trials = cfg.trials;
    out.root_seed = cfg.root_seed;
    out.algorithm = cfg.algorithm;
    out.k = k;
    out.big_lambda = cfg.scenario.big_lambda();
    out.mean = static_cast<double>(sigma);
    out.zero_fraction = sigma == 0 ? 1.0 : 0.0;
    out.pmf.emplace_back(sigma, 1.0);
    return out;
}

double batch_sd_over_sqrt_count(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return sd / std::sqrt(static_cast<double>(values.size()));
}

}  // namespace

EnsembleSummary run_ensemble(const EnsembleConfig& cfg) {
    if (cfg.trials < 1) throw InvalidScenario("run_ensemble: trials must be >= 1");
    const Scenario& s = cfg.scenario;
    const int k = s.hop_count();

    // k = 1: the direct link is the unique geodesic. Degenerate widths:
    // sigma = 0 almost surely. Both are returned without sampling.
    if (k == 1) return constant_summary(cfg, k, 1);
    if (s.degenerate()) return constant_summary(cfg, k, 0);

    const LensDecomposition decomp = lens_decomposition(s);
    const std::uint64_t T = cfg.trials;
    const std::uint64_t B = std::min<std::uint64_t>(100, T);
    unsigned W = cfg.parallelism ? cfg.parallelism
                                 : std::max(1u, std::thread::hardware_concurrency());
    W = static_cast<unsigned>(std::min<std::uint64_t>(W, T));

    std::vector<Accum> acc;
    acc.reserve(W);
    for (unsigned w = 0; w < W; ++w) acc.emplace_back(B);
    std::vector<std::exception_ptr> errors(W);

    auto work = [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
        try {
            TrialCounter counter(cfg, decomp);
            std::uint64_t small = 0;
            mpz_class big;
            bool is_big = false;
            for (std::uint64_t t = begin; t < end; ++t) {
                counter.run(t, small, big, is_big);
                const std::size_t b = batch_of(t, B, T);
                if (is_big)
                    acc[w].add_big(b, big);
                else
                    acc[w].add_small(b, small);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    const std::uint64_t chunk = (T + W - 1) / W;
    if (W == 1) {
        work(0, 0, T);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(W);
        for (unsigned w = 0; w < W; ++w) {
            const std::uint64_t begin = std::min<std::uint64_t>(T, w * chunk);
            const std::uint64_t end = std::min<std::uint64_t>(T, begin + chunk);
            threads.emplace_back(work, w, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (unsigned w = 1; w < W; ++w) acc[0].merge(acc[w]);
    const Accum& a = acc[0];

    EnsembleSummary out(s);
    out.trials = T;
    out.root_seed = cfg.root_seed;
    out.algorithm = cfg.algorithm;
    out.k = k;
    out.big_lambda = s.big_lambda();

    const mpq_class qT(static_cast<unsigned long>(T));
    mpq_class s1(a.s1), s2(a.s2), s3(a.s3);
    const mpq_class mean_q = s1 / qT;
    out.mean = mean_q.get_d();
    mpq_class var_q(0);
    if (T >= 2) {
        var_q = (s2 - s1 * s1 / qT) / mpq_class(static_cast<unsigned long>(T - 1));
        out.variance = var_q.get_d();
    }
    const mpq_class m3_q = s3 / qT - mpq_class(3) * mean_q * (s2 / qT) +
                           mpq_class(2) * mean_q * mean_q * mean_q;
    out.central_moment_3 = m3_q.get_d();
    out.se_mean = std::sqrt(out.variance / static_cast<double>(T));
    out.zero_fraction =
        static_cast<double>(a.zero_count) / static_cast<double>(T);

    std::vector<double> batch_var, batch_m3;
    for (std::size_t b = 0; b < a.batch_n.size(); ++b) {
        const std::uint64_t n = a.batch_n[b];
        if (n < 2) continue;
        const mpq_class qn(static_cast<unsigned long>(n));
        mpq_class b1(a.batch_s1[b]), b2(a.batch_s2[b]), b3(a.batch_s3[b]);
        const mpq_class bm = b1 / qn;
        const mpq_class bv =
            (b2 - b1 * b1 / qn) / mpq_class(static_cast<unsigned long>(n - 1));
        batch_var.push_back(bv.get_d());
        const mpq_class b_m3 =
            b3 / qn - mpq_class(3) * bm * (b2 / qn) + mpq_class(2) * bm * bm * bm;
        batch_m3.push_back(b_m3.get_d());
    }
    out.se_variance = batch_sd_over_sqrt_count(batch_var);
    out.se_central_moment_3 = batch_sd_over_sqrt_count(batch_m3);

    out.pmf.reserve(a.hist.size());
    for (const auto& [sigma, count] : a.hist)
        out.pmf.emplace_back(sigma,
                             static_cast<double>(count) / static_cast<double>(T));
    return out;
}

nlohmann::json EnsembleSummary::to_json() const {
    nlohmann::json pmf_json = nlohmann::json::array();
    for (const auto& [sigma, freq] : pmf)
        pmf_json.push_back(nlohmann::json::array({sigma, freq}));
    return nlohmann::json{
        {"scenario", scenario_to_json(scenario)},
        {"trials", trials},
        {"seed", root_seed},
        {"algorithm", algorithm_name(algorithm)},
        {"k", k},
        {"big_lambda", big_lambda},
        {"mean", mean},
        {"variance", variance},
        {"m3", central_moment_3},
        {"se_mean", se_mean},
        {"se_variance", se_variance},
        {"se_m3", se_central_moment_3},
        {"zero_fraction", zero_fraction},
        {"pmf", pmf_json},
    };
}

PmfEstimate estimate_pmf(const EnsembleConfig& config, std::uint64_t max_sigma) {
    PmfEstimate out{.bins = {}, .trials = config.trials,
                    .summary = run_ensemble(config)};
    const auto& pmf = out.summary.pmf;
    const double n = static_cast<double>(config.trials);
    const double z = 1.959963984540054;  // 95%

    auto wilson = [&](double count) {
        const double p = count / n;
        const double denom = 1.0 + z * z / n;
        const double center = (p + z * z / (2.0 * n)) / denom;
        const double half =
            z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
        return std::pair<double, double>{std::max(0.0, center - half),
                                         std::min(1.0, center + half)};
    };

    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t overflow_count = 0;
    std::uint64_t max_seen = 0;
    for (const auto& [sigma, freq] : pmf) {
        const auto count = static_cast<std::uint64_t>(std::llround(freq * n));
        if (sigma > max_sigma) {
            overflow_count += count;
        } else {
            counts[sigma] = count;
            max_seen = std::max(max_seen, sigma);
        }
    }
    const std::uint64_t top = std::min(max_sigma, max_seen);
    for (std::uint64_t s = 0; s <= top; ++s) {
        PmfBin bin;
        bin.sigma = s;
        bin.count = counts.count(s) ? counts[s] : 0;
        bin.freq = static_cast<double>(bin.count) / n;
        std::tie(bin.ci_lo, bin.ci_hi) = wilson(static_cast<double>(bin.count));
        out.bins.push_back(bin);
    }
    if (overflow_count > 0) {
        PmfBin bin;
        bin.sigma = max_sigma + 1;
        bin.overflow = true;
        bin.count = overflow_count;
        bin.freq = static_cast<double>(overflow_count) / n;
        std::tie(bin.ci_lo, bin.ci_hi) = wilson(static_cast<double>(overflow_count));
        out.bins.push_back(bin);
    }
    return out;
}

namespace {

ComparisonEntry make_entry(const std::string& quantity, const std::string& prov,
                           double analytic, double estimate, double se) {
    ComparisonEntry e;
    e.quantity = quantity;
    e.provenance = prov;
    e.analytic = analytic;
    e.estimate = estimate;
    e.standard_error = se;
    if (se > 0.0)
        e.z = (estimate - analytic) / se;
    else
        e.z = (estimate == analytic)
                  ? 0.0
                  : std::numeric_limits<double>::infinity();
    e.pass = std::isfinite(e.z) && std::abs(e.z) <= 4.0;
    return e;
}

}  // namespace

ComparisonReport compare_to_analytic(const EnsembleSummary& summary) {
    ComparisonReport rep;
    const int k = summary.k;
    const double lam = summary.big_lambda;

    const double mean_an = mean_sigma(k).evaluate(lam);
    rep.entries.push_back(
        make_entry("mean", "paper", mean_an, summary.mean, summary.se_mean));
    rep.mean_pass = rep.entries.back().pass;

    if (k == 3 || k == 4) {
        rep.entries.push_back(make_entry("variance", "paper",
                                         variance_sigma_paper(k).evaluate(lam),
                                         summary.variance, summary.se_variance));
    }
    const std::string oracle_prov = k <= 7 ? "mecke" : "recursion";
    rep.entries.push_back(make_entry("variance", oracle_prov,
                                     variance_sigma_oracle(k).evaluate(lam),
                                     summary.variance, summary.se_variance));
    return rep;
}

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries)
        arr.push_back(nlohmann::json{{"quantity", e.quantity},
                                     {"provenance", e.provenance},
                                     {"analytic", e.analytic},
                                     {"estimate", e.estimate},
                                     {"se", e.standard_error},
                                     {"z", e.z},
                                     {"pass", e.pass}});
    return nlohmann::json{{"entries", arr}, {"mean_pass", mean_pass}};
}

void write_trials_csv(std::ostream& os, const EnsembleConfig& cfg) {
    os << "trial,sigma\n";
    const Scenario& s = cfg.scenario;
    const int k = s.hop_count();
    if (k == 1 || s.degenerate()) {
        const char* v = (k == 1) ? "1" : "0";
        for (std::uint64_t t = 0; t < cfg.trials; ++t)
            os << t << ',' << v << '\n';
        return;
    }
    const LensDecomposition decomp = lens_decomposition(s);
    TrialCounter counter(cfg, decomp);
    std::uint64_t small = 0;
    mpz_class big;
    bool is_big = false;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        counter.run(t, small, big, is_big);
        os << t << ',';
        if (is_big)
            os << big.get_str();
        else
            os << small;
        os << '\n';
    }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.k < 2) throw UnsupportedK("sweep needs k >= 2");
    std::vector<SweepRow> rows;
    std::uint64_t row_index = 0;
    for (double lam_grid : spec.big_lambda_grid) {
        for (double lambda : spec.lambdas) {
            ++row_index;
            if (lam_grid < 0.0 || lambda <= 0.0) continue;
            const double L = spec.k * spec.r0 - lam_grid / lambda;
            // feasible hop count: L in ((k-1) r0, k r0]; the right edge is
            // the Lambda == 0 degenerate row, kept so sweeps show the
            // analytic zero.
            if (!(L > (spec.k - 1) * spec.r0) || L > spec.k * spec.r0) continue;
            Scenario scen(lambda, spec.r0, L);
            if (scen.hop_count() != spec.k && !(lam_grid == 0.0)) continue;

            EnsembleConfig cfg{scen};
            cfg.trials = spec.trials;
            cfg.root_seed = TrialRng(SampleSeed{spec.root_seed, row_index}, 0x526f77).next_u64();
            cfg.algorithm = Algorithm::lens_chains;
            cfg.parallelism = spec.parallelism;
            const EnsembleSummary sum = run_ensemble(cfg);

            SweepRow row;
            row.big_lambda = lam_grid;
            row.lambda = lambda;
            row.r0 = spec.r0;
            row.L = L;
            row.mean_mc = sum.mean;
            row.var_mc = sum.variance;
            const double lam_actual = sum.big_lambda;
            row.mean_an = mean_sigma(spec.k).evaluate(lam_actual);
            row.var_an_paper = (spec.k == 3 || spec.k == 4)
                                   ? variance_sigma_paper(spec.k).evaluate(lam_actual)
                                   : std::numeric_limits<double>::quiet_NaN();
            row.var_an_mecke = variance_sigma_oracle(spec.k).evaluate(lam_actual);
            row.se_mean = sum.se_mean;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "big_lambda,lambda,r0,L,mean_mc,var_mc,mean_an,var_an_paper,"
          "var_an_mecke,se_mean\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.big_lambda, r.lambda, r.r0, r.L, r.mean_mc, r.var_mc,
                      r.mean_an, r.var_an_paper, r.var_an_mecke, r.se_mean);
        os << buf;
    }
}

}  // namespace geostat
