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

#include "bench.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

// Experiment files are flat `key = value` text. Blank lines and lines
// starting with '#' are ignored; keys may appear once. Recognized keys:
//
//   kind           random-walk | sensor | gps      (default random-walk)
//   n, seed        stream length and generator seed (n defaults per kind)
//   step_scale, radial                             random walk
//   baseline, amplitude, period, noise_scale       sensor
//   waypoints      x:y;x:y;...                     gps
//   jitter                                         gps
//   anomaly_rate, anomaly_scale, anomaly_len       injected anomalies
//   drift_phi, drift_sd                            pair observation model
//   in1, in2       CSV files to join instead of generating a pair
//   seg_size, levels                               MSM configuration
//   delta | target_pct                             fixed or calibrated threshold
//   wsize          window on the original streams
//   quantifier     exists | all
//   compare_original  true | false
//   reference      random-walk | sensor | gps      start from the built-in
//                                                  reference setup, then
//                                                  apply the other keys

namespace msmjoin {

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class KeyValues {
  public:
    KeyValues(std::map<std::string, std::string> kv, std::string origin)
        : kv_(std::move(kv)), origin_(std::move(origin)) {}

    [[nodiscard]] bool has(const std::string &k) const { return kv_.count(k) != 0; }

    [[nodiscard]] std::string str(const std::string &k) {
        used_.insert(k);
        return kv_.at(k);
    }

    template <typename T>
    void maybe(const std::string &k, T &out) {
        if (!has(k)) return;
        const auto v = str(k);
        if constexpr (std::is_same_v<T, bool>) {
            if (v == "true") out = true;
            else if (v == "false") out = false;
            else fail(k, v);
        } else if constexpr (std::is_same_v<T, std::string>) {
            out = v;
        } else {
            T parsed{};
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
            if (ec != std::errc{} || p != v.data() + v.size()) fail(k, v);
            out = parsed;
        }
    }

    [[noreturn]] void fail(const std::string &k, const std::string &v) const {
        throw DataError(origin_ + ": invalid value '" + v + "' for key '" + k + "'");
    }

    void reject_unused() const {
        for (const auto &[k, v] : kv_) {
            if (!used_.count(k)) throw DataError(origin_ + ": unknown key '" + k + "'");
        }
    }

  private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
    std::string origin_;
};

inline std::vector<Point> parse_waypoints(const std::string &text, const std::string &origin) {
    std::vector<Point> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw DataError(origin + ": waypoint '" + item + "' must be x:y");
        double x = 0.0;
        double y = 0.0;
        const auto xs = item.substr(0, colon);
        const auto ys = item.substr(colon + 1);
        auto r1 = std::from_chars(xs.data(), xs.data() + xs.size(), x);
        auto r2 = std::from_chars(ys.data(), ys.data() + ys.size(), y);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != xs.data() + xs.size() ||
            r2.ptr != ys.data() + ys.size()) {
            throw DataError(origin + ": waypoint '" + item + "' must be x:y");
        }
        out.push_back(Point{x, y});
    }
    return out;
}

} // namespace detail

/// Parses experiment text. Relative in1/in2 paths resolve against `base_dir`.
[[nodiscard]] inline ExperimentSpec parse_experiment(std::string_view text, const std::string &origin = "<spec>",
                                                     const std::filesystem::path &base_dir = {}) {
    std::map<std::string, std::string> kv;
    std::size_t lineno = 0;
    std::stringstream ss{std::string(text)};
    std::string raw;
    while (std::getline(ss, raw)) {
        ++lineno;
        const auto line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const auto key = detail::trim(std::string_view(line).substr(0, eq));
        const auto val = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw DataError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, val).second) {
            throw DataError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }

    detail::KeyValues in(std::move(kv), origin);
    ExperimentSpec spec;
    try {
        if (in.has("reference")) {
            const auto kind = parse_generator_kind(in.str("reference"));
            spec = reference_experiment(kind, 1);
        }
        if (in.has("kind")) {
            spec.generator.kind = parse_generator_kind(in.str("kind"));
            spec.generator.n = reference_length(spec.generator.kind);
        }
        auto &g = spec.generator;
        in.maybe("n", g.n);
        in.maybe("seed", g.seed);
        in.maybe("step_scale", g.step_scale);
        in.maybe("radial", g.radial);
        in.maybe("baseline", g.baseline);
        in.maybe("amplitude", g.amplitude);
        in.maybe("period", g.period);
        in.maybe("noise_scale", g.noise_scale);
        if (in.has("waypoints")) g.waypoints = detail::parse_waypoints(in.str("waypoints"), origin);
        in.maybe("jitter", g.jitter);
        in.maybe("anomaly_rate", g.anomaly_rate);
        in.maybe("anomaly_scale", g.anomaly_scale);
        in.maybe("anomaly_len", g.anomaly_len);
        in.maybe("drift_phi", spec.pair.drift_phi);
        in.maybe("drift_sd", spec.pair.drift_sd);

        if (in.has("in1") != in.has("in2")) throw DataError(origin + ": in1 and in2 must be given together");
        if (in.has("in1")) {
            spec.in1 = base_dir / in.str("in1");
            spec.in2 = base_dir / in.str("in2");
        }

        in.maybe("seg_size", spec.msm.seg_size);
        in.maybe("levels", spec.msm.levels);
        if (in.has("delta") && in.has("target_pct")) throw DataError(origin + ": give delta or target_pct, not both");
        if (in.has("delta")) {
            in.maybe("delta", spec.join.delta);
            spec.target_pct.reset();
        }
        if (in.has("target_pct")) {
            double t = 0.0;
            in.maybe("target_pct", t);
            spec.target_pct = t;
        }
        if (!in.has("delta") && !spec.target_pct) throw DataError(origin + ": one of delta or target_pct is required");
        in.maybe("wsize", spec.join.wsize);
        if (in.has("quantifier")) spec.join.quantifier = parse_quantifier(in.str("quantifier"));
        in.maybe("compare_original", spec.compare_original);
        in.reject_unused();

        spec.msm.validate();
        if (!spec.target_pct) spec.join.validate();
        if (spec.join.wsize < 1) throw std::invalid_argument("wsize must be >= 1");
        if (spec.target_pct && !(*spec.target_pct > 0.0 && *spec.target_pct < 100.0)) {
            throw std::invalid_argument("target_pct must be in (0, 100)");
        }
        if (!spec.uses_files()) {
            try {
                g.validate();
            } catch (const DataError &e) {
                throw DataError(origin + ": " + e.what());
            }
        }
    } catch (const std::invalid_argument &e) {
        throw DataError(origin + ": " + e.what());
    }
    return spec;
}

[[nodiscard]] inline ExperimentSpec load_experiment(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment(buf.str(), path.string(), path.parent_path());
}

/// Resolved configuration as `key = value` lines, in the file format above.
[[nodiscard]] inline std::string describe(const ExperimentSpec &spec) {
    std::string s;
    auto put = [&](const std::string &k, const std::string &v) { s += k + " = " + v + "\n"; };
    if (spec.uses_files()) {
        put("in1", spec.in1->string());
        put("in2", spec.in2->string());
    } else {
        const auto &g = spec.generator;
        put("kind", std::string(to_string(g.kind)));
        put("n", std::to_string(g.n));
        put("seed", std::to_string(g.seed));
        switch (g.kind) {
        case GeneratorKind::RandomWalk:
            put("step_scale", format_double(g.step_scale));
            put("radial", g.radial ? "true" : "false");
            break;
        case GeneratorKind::Sensor:
            put("baseline", format_double(g.baseline));
            put("amplitude", format_double(g.amplitude));
            put("period", format_double(g.period));
            put("noise_scale", format_double(g.noise_scale));
            break;
        case GeneratorKind::GpsTrajectory: {
            std::string w;
            for (std::size_t i = 0; i < g.waypoints.size(); ++i) {
                w += (i ? ";" : "") + format_double(g.waypoints[i][0]) + ":" + format_double(g.waypoints[i][1]);
            }
            put("waypoints", w);
            put("jitter", format_double(g.jitter));
            break;
        }
        }
        put("anomaly_rate", format_double(g.anomaly_rate));
        put("anomaly_scale", format_double(g.anomaly_scale));
        put("anomaly_len", std::to_string(g.anomaly_len));
        put("drift_phi", format_double(spec.pair.drift_phi));
        put("drift_sd", format_double(spec.pair.drift_sd));
    }
    put("seg_size", std::to_string(spec.msm.seg_size));
    put("levels", std::to_string(spec.msm.levels));
    if (spec.target_pct) {
        put("target_pct", format_double(*spec.target_pct));
    } else {
        put("delta", format_double(spec.join.delta));
    }
    put("wsize", std::to_string(spec.join.wsize));
    put("quantifier", std::string(to_string(spec.join.quantifier)));
    put("compare_original", spec.compare_original ? "true" : "false");
    return s;
}

} // namespace msmjoin
