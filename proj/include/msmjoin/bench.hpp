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

#pragma once

#include "csv_io.hpp"
#include "generators.hpp"
#include "msm.hpp"
#include "similarity_join.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace msmjoin {

/// One original-vs-reduced experiment. `join.wsize` is the window used on
/// the original streams; the reduced run uses round(drf * wsize), at least 1.
struct ExperimentSpec {
    GeneratorSpec generator;
    PairModel pair;
    std::optional<std::filesystem::path> in1;
    std::optional<std::filesystem::path> in2;

    MsmConfig msm{2, 3};
    JoinConfig join{1.0, 800, WindowQuantifier::ExistsNonPrunable};
    std::optional<double> target_pct; ///< when set, delta is calibrated on the original streams
    bool compare_original = true;

    [[nodiscard]] bool uses_files() const noexcept { return in1.has_value(); }
};

struct ExperimentReport {
    std::string dataset;
    std::uint64_t seed = 0;
    std::size_t seg_size = 0;
    std::size_t levels = 0;
    std::size_t original_size = 0;
    std::size_t reduced_size = 0;
    double drf = 0.0;
    double delta = 0.0;
    std::size_t wsize_original = 0;
    std::size_t wsize_reduced = 0;
    bool has_original = false;
    double matched_pct_original = 0.0;
    double matched_pct_reduced = 0.0;
    std::size_t pairs_original = 0;
    std::size_t pairs_reduced = 0;
    std::size_t cross_checks_original = 0;
    std::size_t cross_checks_reduced = 0;
    double wall_ms_original = 0.0;
    double wall_ms_reduced = 0.0;
};

[[nodiscard]] inline std::size_t reduced_window(std::size_t wsize_original, const MsmConfig &msm) {
    const auto w = static_cast<std::size_t>(std::llround(drf(msm) * static_cast<double>(wsize_original)));
    return std::max<std::size_t>(w, 1);
}

struct Calibration {
    double delta = 0.0;
    double matched_pct = 0.0;
    bool attained = false; ///< matched_pct within 1 point of the target
    std::size_t iterations = 0;
};

namespace detail {

// Upper bound on any center distance plus both radii.
inline double join_diameter(const ReducedSeries &a, const ReducedSeries &b) {
    const std::size_t d = a.dim;
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    double rmax = 0.0;
    for (const auto *s : {&a, &b}) {
        for (const auto &p : s->points) {
            for (std::size_t i = 0; i < d; ++i) {
                lo[i] = std::min(lo[i], p.center[i]);
                hi[i] = std::max(hi[i], p.center[i]);
            }
            rmax = std::max(rmax, p.radius);
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) acc += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    return std::sqrt(acc) + 2.0 * rmax;
}

} // namespace detail

/// Bisection on delta until the matched percentage is within 1 point of
/// target_pct or 60 probes have run. Window pruning makes the percentage
/// only roughly monotone in delta, so the closest probe is returned when
/// the target is never reached (attained = false).
[[nodiscard]] inline Calibration calibrate_delta(const ReducedSeries &s1, const ReducedSeries &s2, JoinConfig cfg,
                                                 double target_pct) {
    if (!(target_pct >= 0.0 && target_pct <= 100.0)) throw std::invalid_argument("target_pct must be in [0, 100]");
    if (s1.empty() || s2.empty()) throw DataError("empty series");
    double lo = 0.0;
    double hi = detail::join_diameter(s1, s2) + 1.0;
    Calibration best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > 0.0)) break;
        cfg.delta = mid;
        const double pct = run_join(s1, s2, cfg).stats.matched_pct;
        const double gap = std::abs(pct - target_pct);
        if (gap < best_gap) {
            best_gap = gap;
            best = Calibration{mid, pct, gap <= 1.0, it};
        }
        if (gap <= 1.0) break;
        if (pct < target_pct) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

/// Two raw streams to join, either from files or from the pair generator.
struct ExperimentData {
    std::string dataset;
    RawSeries first;
    RawSeries second;
};

[[nodiscard]] inline ExperimentData load_experiment_data(const ExperimentSpec &spec) {
    if (spec.uses_files()) {
        if (!spec.in2) throw DataError("in1 given without in2");
        return {"files", read_csv(*spec.in1), read_csv(*spec.in2)};
    }
    auto pair = gen_stream_pair(spec.generator, spec.pair);
    return {std::string(to_string(spec.generator.kind)), std::move(pair.first.series), std::move(pair.second.series)};
}

namespace detail {

template <typename F>
double time_ms(F &&f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

/// Resolves delta for a spec: calibrated on the original streams when
/// target_pct is set, else spec.join.delta.
[[nodiscard]] inline double resolve_delta(const ExperimentSpec &spec, const ExperimentData &data) {
    if (!spec.target_pct) return spec.join.delta;
    const auto cal = calibrate_delta(lift_raw(data.first), lift_raw(data.second), spec.join, *spec.target_pct);
    return cal.delta;
}

/// Runs the pipeline on the original streams (zero radii, window wsize) and
/// on the MSM-reduced streams (window reduced_window(wsize)) with one delta.
[[nodiscard]] inline ExperimentReport run_reduction_experiment(const ExperimentSpec &spec, const ExperimentData &data,
                                                               double delta) {
    spec.msm.validate();
    JoinConfig cfg = spec.join;
    cfg.delta = delta;
    cfg.validate();

    ExperimentReport rep;
    rep.dataset = data.dataset;
    rep.seed = spec.uses_files() ? 0 : spec.generator.seed;
    rep.seg_size = spec.msm.seg_size;
    rep.levels = spec.msm.levels;
    rep.original_size = std::min(data.first.size(), data.second.size());
    rep.drf = drf(spec.msm);
    rep.delta = delta;
    rep.wsize_original = cfg.wsize;
    rep.wsize_reduced = reduced_window(cfg.wsize, spec.msm);

    if (spec.compare_original) {
        rep.has_original = true;
        rep.wall_ms_original = detail::time_ms([&] {
            const auto res = run_join(lift_raw(data.first), lift_raw(data.second), cfg);
            rep.matched_pct_original = res.stats.matched_pct;
            rep.pairs_original = res.stats.pairs_seen;
            rep.cross_checks_original = res.stats.total_cross_checks;
        });
    }

    JoinConfig red_cfg = cfg;
    red_cfg.wsize = rep.wsize_reduced;
    rep.wall_ms_reduced = detail::time_ms([&] {
        const auto r1 = msm_reduce(data.first, spec.msm);
        const auto r2 = msm_reduce(data.second, spec.msm);
        rep.reduced_size = std::min(r1.size(), r2.size());
        const auto res = run_join(r1, r2, red_cfg);
        rep.matched_pct_reduced = res.stats.matched_pct;
        rep.pairs_reduced = res.stats.pairs_seen;
        rep.cross_checks_reduced = res.stats.total_cross_checks;
    });
    return rep;
}

[[nodiscard]] inline ExperimentReport run_reduction_experiment(const ExperimentSpec &spec) {
    const auto data = load_experiment_data(spec);
    return run_reduction_experiment(spec, data, resolve_delta(spec, data));
}

/// One report per seg_size at a fixed level count, sharing one delta;
/// ordered by drf, largest first.
[[nodiscard]] inline std::vector<ExperimentReport> run_drf_sweep(const ExperimentSpec &base,
                                                                 const std::vector<std::size_t> &seg_sizes,
                                                                 std::size_t levels) {
    if (seg_sizes.empty()) throw std::invalid_argument("seg_sizes must not be empty");
    const auto data = load_experiment_data(base);
    const double delta = resolve_delta(base, data);
    std::vector<ExperimentReport> out;
    for (auto s : seg_sizes) {
        ExperimentSpec spec = base;
        spec.msm = MsmConfig{s, levels};
        out.push_back(run_reduction_experiment(spec, data, delta));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.drf > b.drf; });
    return out;
}

/// Reference setup per dataset family: window 800 on the original, MSM 2x3,
/// delta calibrated to an 85% original match rate. The pair bias drifts
/// slowly against the path speed, and anomalies (rate 0.002) are 150 bias
/// standard deviations, so any reduced point that absorbs one is rejected.
[[nodiscard]] inline ExperimentSpec reference_experiment(GeneratorKind kind, std::uint64_t seed) {
    ExperimentSpec spec;
    spec.generator.kind = kind;
    spec.generator.n = reference_length(kind);
    spec.generator.seed = seed;
    spec.target_pct = 85.0;
    switch (kind) {
    case GeneratorKind::RandomWalk: spec.pair.drift_sd = 10.0; break;
    case GeneratorKind::Sensor: spec.pair.drift_sd = 1.0; break;
    case GeneratorKind::GpsTrajectory: spec.pair.drift_sd = 3.0; break;
    }
    spec.generator.anomaly_rate = 0.002;
    spec.generator.anomaly_scale = 150.0 * spec.pair.drift_sd;
    spec.generator.anomaly_len = 1;
    return spec;
}

// ---- report output -------------------------------------------------------

namespace detail {

inline const std::vector<std::string> &report_columns() {
    static const std::vector<std::string> cols{
        "dataset",        "seed",           "seg_size",           "levels",
        "original_size",  "reduced_size",   "drf",                "delta",
        "wsize_original", "wsize_reduced",  "matched_pct_original", "matched_pct_reduced",
        "pairs_original", "pairs_reduced",  "cross_checks_original", "cross_checks_reduced"};
    return cols;
}

} // namespace detail

/// Machine-readable report: one row per experiment, fixed column order.
/// Wall times are machine dependent and only appended on request.
[[nodiscard]] inline std::string report_to_csv(const std::vector<ExperimentReport> &reports,
                                               bool include_timings = false) {
    std::string s;
    const auto &cols = detail::report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    if (include_timings) s += ",wall_ms_original,wall_ms_reduced";
    s += "\n";
    for (const auto &r : reports) {
        auto orig = [&](const std::string &v) { return r.has_original ? v : std::string(); };
        s += r.dataset + "," + std::to_string(r.seed) + "," + std::to_string(r.seg_size) + "," +
             std::to_string(r.levels) + "," + std::to_string(r.original_size) + "," + std::to_string(r.reduced_size) +
             "," + format_double(r.drf) + "," + format_double(r.delta) + "," + std::to_string(r.wsize_original) + "," +
             std::to_string(r.wsize_reduced) + "," + orig(format_double(r.matched_pct_original)) + "," +
             format_double(r.matched_pct_reduced) + "," + orig(std::to_string(r.pairs_original)) + "," +
             std::to_string(r.pairs_reduced) + "," + orig(std::to_string(r.cross_checks_original)) + "," +
             std::to_string(r.cross_checks_reduced);
        if (include_timings) s += "," + orig(format_double(r.wall_ms_original)) + "," + format_double(r.wall_ms_reduced);
        s += "\n";
    }
    return s;
}

[[nodiscard]] inline std::string report_to_table(const std::vector<ExperimentReport> &reports) {
    std::string s;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %6s %4s %6s %9s %8s %9s %10s %7s %7s %9s %9s\n", "dataset", "seed", "seg",
                  "levels", "orig_size", "red_size", "drf", "delta", "w_orig", "w_red", "%orig", "%reduced");
    s += line;
    for (const auto &r : reports) {
        char orig_pct[32] = "-";
        if (r.has_original) std::snprintf(orig_pct, sizeof orig_pct, "%.2f", r.matched_pct_original);
        std::snprintf(line, sizeof line, "%-12s %6llu %4zu %6zu %9zu %8zu %9.6f %10.4g %7zu %7zu %9s %9.2f\n",
                      r.dataset.c_str(), static_cast<unsigned long long>(r.seed), r.seg_size, r.levels,
                      r.original_size, r.reduced_size, r.drf, r.delta, r.wsize_original, r.wsize_reduced, orig_pct,
                      r.matched_pct_reduced);
        s += line;
    }
    return s;
}

/// Writes the CSV report to `path` and the human-readable table to `table`.
inline void report_emit(const std::vector<ExperimentReport> &reports, const std::filesystem::path &path,
                        std::ostream &table, bool include_timings = false) {
    write_file_atomic(path, report_to_csv(reports, include_timings));
    table << report_to_table(reports);
}

/// Parses a CSV produced by report_to_csv (timing columns optional).
[[nodiscard]] inline std::vector<ExperimentReport> read_report_csv(const std::filesystem::path &path) {
    auto lines = detail::read_lines(path);
    if (lines.empty()) throw DataError(path.string() + ": missing header row");
    const auto header = detail::split_commas(lines[0]);
    const auto &cols = detail::report_columns();
    const bool timings = header.size() == cols.size() + 2;
    if (header.size() != cols.size() && !timings) throw DataError(path.string() + ":1: unexpected report header");
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (header[i] != cols[i]) throw DataError(path.string() + ":1: unexpected column '" + std::string(header[i]) + "'");
    }
    std::vector<ExperimentReport> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        detail::LineContext ctx(path, li + 1);
        const auto f = detail::split_commas(lines[li]);
        if (f.size() != header.size()) ctx.fail("wrong field count");
        auto uint = [&](std::string_view v) { return static_cast<std::size_t>(ctx.integer(v)); };
        ExperimentReport r;
        r.dataset = std::string(f[0]);
        r.seed = static_cast<std::uint64_t>(std::stoull(std::string(f[1])));
        r.seg_size = uint(f[2]);
        r.levels = uint(f[3]);
        r.original_size = uint(f[4]);
        r.reduced_size = uint(f[5]);
        r.drf = ctx.real(f[6]);
        r.delta = ctx.real(f[7]);
        r.wsize_original = uint(f[8]);
        r.wsize_reduced = uint(f[9]);
        r.has_original = !f[10].empty();
        if (r.has_original) {
            r.matched_pct_original = ctx.real(f[10]);
            r.pairs_original = uint(f[12]);
            r.cross_checks_original = uint(f[14]);
        }
        r.matched_pct_reduced = ctx.real(f[11]);
        r.pairs_reduced = uint(f[13]);
        r.cross_checks_reduced = uint(f[15]);
        if (timings) {
            if (r.has_original) r.wall_ms_original = ctx.real(f[16]);
            r.wall_ms_reduced = ctx.real(f[17]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace msmjoin
