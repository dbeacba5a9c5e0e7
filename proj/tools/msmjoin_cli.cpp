/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

// msmjoin: generate, reduce and join time-series streams; run reduction
// experiments. Exit codes: 0 success, 1 usage error, 2 data error.

#include <msmjoin/msmjoin.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace msmjoin;

const std::map<std::string, std::string> kSynopsis{
    {"gen", "msmjoin gen --kind random-walk|sensor|gps --n N --seed S --out FILE [--out2 FILE] [--step-scale X] "
            "[--radial] [--noise X] [--jitter X] [--waypoints x:y;x:y...] [--anomaly-rate P] [--anomaly-scale X] "
            "[--anomaly-len N] [--drift-phi X] [--drift-sd X]"},
    {"reduce", "msmjoin reduce --in FILE --out FILE --seg-size N --levels N"},
    {"join", "msmjoin join --in1 FILE --in2 FILE --delta X --window N [--quantifier exists|all] [--out FILE]"},
    {"bench", "msmjoin bench --spec FILE [--out FILE] [--timings]"},
    {"sweep", "msmjoin sweep --spec FILE --seg-sizes 2,3,4 [--levels N] [--out FILE] [--timings]"},
};

int usage_error(const std::string &reason, const std::string &sub) {
    std::cerr << "error: " << reason << "\n";
    if (auto it = kSynopsis.find(sub); it != kSynopsis.end()) {
        std::cerr << "usage: " << it->second << "\n";
    } else {
        std::cerr << "usage: msmjoin <gen|reduce|join|bench|sweep> [flags]  (see --help)\n";
    }
    return 1;
}

struct GenArgs {
    std::string kind = "random-walk";
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::string out2;
    GeneratorSpec spec;
    PairModel pair;
    std::string waypoints;
};

struct ReduceArgs {
    std::string in;
    std::string out;
    std::size_t seg_size = 2;
    std::size_t levels = 1;
};

struct JoinArgs {
    std::string in1;
    std::string in2;
    double delta = 0.0;
    std::size_t window = 1;
    std::string quantifier = "exists";
    std::string out;
};

struct BenchArgs {
    std::string spec;
    std::string out;
    bool timings = false;
    std::vector<std::size_t> seg_sizes;
    std::size_t levels = 3;
};

void print_config(std::ostream &os, const std::string &text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) os << "# " << line << "\n";
}

void print_reports(const std::vector<ExperimentReport> &reports, const BenchArgs &a) {
    std::cout << report_to_table(reports);
    if (a.timings) {
        for (const auto &r : reports) {
            std::cout << "# seg_size " << r.seg_size << ": wall_ms_original=" << r.wall_ms_original
                      << " wall_ms_reduced=" << r.wall_ms_reduced << "\n";
        }
    }
    if (!a.out.empty()) write_file_atomic(a.out, report_to_csv(reports, a.timings));
}

int run_gen(GenArgs &a) {
    GeneratorSpec s = a.spec;
    s.kind = parse_generator_kind(a.kind);
    s.n = a.n == 0 ? reference_length(s.kind) : a.n;
    s.seed = a.seed;
    if (!a.waypoints.empty()) s.waypoints = detail::parse_waypoints(a.waypoints, "--waypoints");
    s.validate();

    std::ostringstream cfg;
    cfg << "kind = " << to_string(s.kind) << "\nn = " << s.n << "\nseed = " << s.seed
        << "\nanomaly_rate = " << format_double(s.anomaly_rate) << "\nanomaly_scale = " << format_double(s.anomaly_scale)
        << "\nanomaly_len = " << s.anomaly_len << "\n";
    if (!a.out2.empty()) {
        cfg << "drift_phi = " << format_double(a.pair.drift_phi) << "\ndrift_sd = " << format_double(a.pair.drift_sd)
            << "\n";
    }
    print_config(std::cout, cfg.str());

    auto emit = [&](const Generated &g, const std::string &path) {
        write_csv(g.series, path);
        if (s.anomaly_rate > 0.0) write_outliers_csv(g.outliers, path + ".outliers.csv");
        std::cout << path << ": " << g.series.size() << " points, d=" << g.series.dim << ", "
                  << g.outliers.size() << " anomalous ticks\n";
    };
    if (a.out2.empty()) {
        emit(generate(s), a.out);
    } else {
        const auto pair = gen_stream_pair(s, a.pair);
        emit(pair.first, a.out);
        emit(pair.second, a.out2);
    }
    return 0;
}

int run_reduce(const ReduceArgs &a) {
    const MsmConfig cfg{a.seg_size, a.levels};
    cfg.validate();
    print_config(std::cout, "in = " + a.in + "\nseg_size = " + std::to_string(cfg.seg_size) +
                                "\nlevels = " + std::to_string(cfg.levels) + "\n");
    const auto raw = read_csv(a.in);
    if (raw.empty()) throw DataError(a.in + ": empty series");
    const auto reduced = msm_reduce(raw, cfg);
    write_csv(reduced, a.out);
    std::cout << a.out << ": " << raw.size() << " -> " << reduced.size() << " points (drf " << format_double(drf(cfg))
              << ")\n";
    return 0;
}

int run_join_cmd(const JoinArgs &a) {
    JoinConfig cfg{a.delta, a.window, parse_quantifier(a.quantifier)};
    cfg.validate();
    print_config(std::cout, "in1 = " + a.in1 + "\nin2 = " + a.in2 + "\ndelta = " + format_double(cfg.delta) +
                                "\nwindow = " + std::to_string(cfg.wsize) + "\nquantifier = " +
                                std::string(to_string(cfg.quantifier)) + "\n");
    const auto s1 = read_series_any(a.in1);
    const auto s2 = read_series_any(a.in2);
    const auto res = run_join(s1, s2, cfg);
    if (res.warning) std::cerr << "warning: " << *res.warning << "\n";
    const auto &st = res.stats;
    std::cout << "pairs_seen = " << st.pairs_seen << "\npairs_matched = " << st.pairs_matched
              << "\npairs_pruned = " << st.pairs_pruned << "\npairs_distance_rejected = " << st.pairs_distance_rejected
              << "\ntotal_cross_checks = " << st.total_cross_checks << "\nmatched_pct = " << format_double(st.matched_pct)
              << "\n";
    if (!a.out.empty()) write_decisions_csv(res.decisions, a.out);
    return 0;
}

int run_bench(const BenchArgs &a) {
    const auto spec = load_experiment(a.spec);
    print_config(std::cout, describe(spec));
    const auto data = load_experiment_data(spec);
    const double delta = resolve_delta(spec, data);
    print_reports({run_reduction_experiment(spec, data, delta)}, a);
    return 0;
}

int run_sweep(const BenchArgs &a) {
    const auto spec = load_experiment(a.spec);
    std::string seg_list;
    for (auto s : a.seg_sizes) seg_list += (seg_list.empty() ? "" : ",") + std::to_string(s);
    print_config(std::cout, describe(spec) + "sweep_seg_sizes = " + seg_list +
                                "\nsweep_levels = " + std::to_string(a.levels) + "\n");
    print_reports(run_drf_sweep(spec, a.seg_sizes, a.levels), a);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"MSM reduction and sliding-window similarity join for time-series streams", "msmjoin"};
    app.require_subcommand(1);

    GenArgs gen;
    auto *g = app.add_subcommand("gen", "generate a synthetic stream (or a joinable pair)");
    g->add_option("--kind", gen.kind, "random-walk | sensor | gps")->required();
    g->add_option("--n", gen.n, "length (default: reference size for the kind)");
    g->add_option("--seed", gen.seed, "generator seed")->required();
    g->add_option("--out", gen.out, "output CSV")->required();
    g->add_option("--out2", gen.out2, "write a second, paired stream here");
    g->add_option("--step-scale", gen.spec.step_scale, "random-walk step bound");
    g->add_flag("--radial", gen.spec.radial, "distance from origin of a 2-d walk");
    g->add_option("--noise", gen.spec.noise_scale, "sensor noise sd");
    g->add_option("--jitter", gen.spec.jitter, "gps jitter sd");
    g->add_option("--waypoints", gen.waypoints, "gps waypoints x:y;x:y;...");
    g->add_option("--anomaly-rate", gen.spec.anomaly_rate, "per-tick anomaly start probability");
    g->add_option("--anomaly-scale", gen.spec.anomaly_scale, "anomaly displacement");
    g->add_option("--anomaly-len", gen.spec.anomaly_len, "anomaly duration in ticks");
    g->add_option("--drift-phi", gen.pair.drift_phi, "pair bias AR(1) coefficient");
    g->add_option("--drift-sd", gen.pair.drift_sd, "pair bias stationary sd");

    ReduceArgs red;
    auto *r = app.add_subcommand("reduce", "MSM-reduce a raw CSV series");
    r->add_option("--in", red.in, "raw CSV")->required();
    r->add_option("--out", red.out, "reduced CSV")->required();
    r->add_option("--seg-size", red.seg_size, "segment size (>= 2)")->required();
    r->add_option("--levels", red.levels, "number of levels (>= 1)")->required();

    JoinArgs join;
    auto *j = app.add_subcommand("join", "similarity-join two series (raw or reduced CSV)");
    j->add_option("--in1", join.in1, "first stream")->required();
    j->add_option("--in2", join.in2, "second stream")->required();
    j->add_option("--delta", join.delta, "distance threshold (> 0)")->required();
    j->add_option("--window", join.window, "sliding-window size (>= 1)")->required();
    j->add_option("--quantifier", join.quantifier, "exists | all");
    j->add_option("--out", join.out, "per-pair decisions CSV");

    BenchArgs bench;
    auto *b = app.add_subcommand("bench", "original-vs-reduced experiment from a spec file");
    b->add_option("--spec", bench.spec, "experiment file")->required();
    b->add_option("--out", bench.out, "report CSV");
    b->add_flag("--timings", bench.timings, "also report wall times");

    BenchArgs sweep;
    auto *s = app.add_subcommand("sweep", "reduction-factor sweep over segment sizes");
    s->add_option("--spec", sweep.spec, "experiment file")->required();
    s->add_option("--seg-sizes", sweep.seg_sizes, "comma-separated segment sizes")->required()->delimiter(',');
    s->add_option("--levels", sweep.levels, "MSM levels for every sweep point");
    s->add_option("--out", sweep.out, "report CSV");
    s->add_flag("--timings", sweep.timings, "also report wall times");

    std::string active;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        for (auto *sub : app.get_subcommands()) active = sub->get_name();
        return usage_error(e.what(), active);
    }
    active = app.get_subcommands().front()->get_name();

    try {
        if (*g) return run_gen(gen);
        if (*r) return run_reduce(red);
        if (*j) return run_join_cmd(join);
        if (*b) return run_bench(bench);
        if (*s) return run_sweep(sweep);
    } catch (const DataError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        return usage_error(e.what(), active);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
