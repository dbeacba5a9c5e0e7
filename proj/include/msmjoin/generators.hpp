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

#include "point.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msmjoin {

enum class GeneratorKind { RandomWalk, Sensor, GpsTrajectory };

[[nodiscard]] inline std::string_view to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::RandomWalk: return "random-walk";
    case GeneratorKind::Sensor: return "sensor";
    case GeneratorKind::GpsTrajectory: return "gps";
    }
    return "?";
}

[[nodiscard]] inline GeneratorKind parse_generator_kind(std::string_view s) {
    if (s == "random-walk") return GeneratorKind::RandomWalk;
    if (s == "sensor") return GeneratorKind::Sensor;
    if (s == "gps") return GeneratorKind::GpsTrajectory;
    throw std::invalid_argument("unknown generator kind '" + std::string(s) + "' (expected random-walk|sensor|gps)");
}

/// Stream lengths used for the three dataset families in the reference runs.
[[nodiscard]] inline std::size_t reference_length(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::RandomWalk: return 6000;
    case GeneratorKind::Sensor: return 9000;
    case GeneratorKind::GpsTrajectory: return 4000;
    }
    return 0;
}

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::RandomWalk;
    std::size_t n = 1000;
    std::uint64_t seed = 1;

    // random walk: x0 = 0, x[t+1] = x[t] + U[-step_scale, step_scale]
    double step_scale = 1.0;
    bool radial = false; ///< emit distance from origin of a 2-d walk instead

    // sensor: baseline + amplitude * sin(2 pi t / period) + noise_scale * N(0, 1)
    double baseline = 20.0;
    double amplitude = 5.0;
    double period = 6000.0;
    double noise_scale = 0.2;

    // gps: piecewise-linear path through waypoints + jitter * N(0, 1) per axis
    std::vector<Point> waypoints{Point{0.0, 0.0}, Point{60.0, 45.0}, Point{135.0, 45.0}};
    double jitter = 0.5;

    // Injected anomalies: each tick starts one with probability anomaly_rate;
    // it lasts anomaly_len ticks and is displaced by anomaly_scale (random
    // sign for scalar kinds, perpendicular to the path for gps). Drawn from a
    // separate generator so the base path does not depend on them.
    double anomaly_rate = 0.0;
    double anomaly_scale = 0.0;
    std::size_t anomaly_len = 1;
    std::optional<std::uint64_t> anomaly_seed;

    void validate() const {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (anomaly_rate < 0.0 || anomaly_rate > 1.0) throw std::invalid_argument("anomaly_rate must be in [0, 1]");
        if (anomaly_len < 1) throw std::invalid_argument("anomaly_len must be >= 1");
        if (kind == GeneratorKind::GpsTrajectory && waypoints.size() < 2) {
            throw DataError("gps trajectory needs at least 2 waypoints");
        }
        if (kind == GeneratorKind::Sensor && !(period > 0.0)) throw std::invalid_argument("period must be > 0");
    }
};

/// Series plus the ground-truth indices of injected anomalies.
struct Generated {
    RawSeries series;
    std::vector<std::size_t> outliers;
};

namespace detail {

inline std::uint64_t anomaly_seed_for(const GeneratorSpec &spec) {
    if (spec.anomaly_seed) return *spec.anomaly_seed;
    return SplitMix64(spec.seed ^ 0xA0761D6478BD642FULL).next();
}

/// Per tick, in order: one bernoulli draw (start?) and, when an anomaly
/// starts, one uniform draw for the sign. Returns the signed offset per tick.
inline std::vector<double> anomaly_offsets(const GeneratorSpec &spec, std::vector<std::size_t> &outliers) {
    std::vector<double> off(spec.n, 0.0);
    if (spec.anomaly_rate <= 0.0 || spec.anomaly_scale == 0.0) return off;
    SplitMix64 rng(anomaly_seed_for(spec));
    std::size_t t = 0;
    while (t < spec.n) {
        if (!rng.bernoulli(spec.anomaly_rate)) {
            ++t;
            continue;
        }
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const std::size_t stop = std::min(t + spec.anomaly_len, spec.n);
        for (; t < stop; ++t) {
            off[t] = sign * spec.anomaly_scale;
            outliers.push_back(t);
        }
    }
    return off;
}

} // namespace detail

[[nodiscard]] inline Generated gen_random_walk(const GeneratorSpec &spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);
    Generated g;
    const auto off = detail::anomaly_offsets(spec, g.outliers);
    std::vector<Point> pts;
    pts.reserve(spec.n);
    double x = 0.0;
    double y = 0.0;
    for (std::size_t t = 0; t < spec.n; ++t) {
        const double v = spec.radial ? std::hypot(x, y) : x;
        pts.push_back(Point{v + off[t]});
        x += rng.uniform(-spec.step_scale, spec.step_scale);
        if (spec.radial) y += rng.uniform(-spec.step_scale, spec.step_scale);
    }
    g.series = RawSeries(1, std::move(pts));
    return g;
}

[[nodiscard]] inline Generated gen_sensor(const GeneratorSpec &spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);
    Generated g;
    const auto off = detail::anomaly_offsets(spec, g.outliers);
    std::vector<Point> pts;
    pts.reserve(spec.n);
    for (std::size_t t = 0; t < spec.n; ++t) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / spec.period;
        const double noise = spec.noise_scale == 0.0 ? 0.0 : spec.noise_scale * rng.normal();
        pts.push_back(Point{spec.baseline + spec.amplitude * std::sin(phase) + noise + off[t]});
    }
    g.series = RawSeries(1, std::move(pts));
    return g;
}

/// Vehicle position sampled uniformly by arc length along the waypoint
/// polyline; tick 0 is the first waypoint and tick n-1 the last.
[[nodiscard]] inline Generated gen_gps_trajectory(const GeneratorSpec &spec) {
    spec.validate();
    for (const auto &w : spec.waypoints) {
        if (w.dim() != 2) throw DataError("gps waypoints must be 2-d");
    }
    SplitMix64 rng(spec.seed);
    Generated g;
    const auto off = detail::anomaly_offsets(spec, g.outliers);

    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < spec.waypoints.size(); ++i) {
        cum.push_back(cum.back() + euclidean_dist(spec.waypoints[i - 1], spec.waypoints[i]));
    }
    const double total = cum.back();

    std::vector<Point> pts;
    pts.reserve(spec.n);
    std::size_t seg = 0;
    for (std::size_t t = 0; t < spec.n; ++t) {
        const double f = spec.n == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(spec.n - 1);
        const double s = f * total;
        while (seg + 2 < spec.waypoints.size() && cum[seg + 1] < s) ++seg;
        const Point &a = spec.waypoints[seg];
        const Point &b = spec.waypoints[seg + 1];
        const double len = cum[seg + 1] - cum[seg];
        const double u = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
        double px = a[0] + u * (b[0] - a[0]);
        double py = a[1] + u * (b[1] - a[1]);
        if (off[t] != 0.0 && len > 0.0) {
            // unit normal to the current leg
            px += off[t] * -(b[1] - a[1]) / len;
            py += off[t] * (b[0] - a[0]) / len;
        }
        if (spec.jitter != 0.0) {
            px += spec.jitter * rng.normal();
            py += spec.jitter * rng.normal();
        }
        pts.push_back(Point{px, py});
    }
    g.series = RawSeries(2, std::move(pts));
    return g;
}

[[nodiscard]] inline Generated generate(const GeneratorSpec &spec) {
    switch (spec.kind) {
    case GeneratorKind::RandomWalk: return gen_random_walk(spec);
    case GeneratorKind::Sensor: return gen_sensor(spec);
    case GeneratorKind::GpsTrajectory: return gen_gps_trajectory(spec);
    }
    throw std::invalid_argument("unknown generator kind");
}

/// Observation model for a joinable stream pair. Both streams observe the
/// same underlying path (the generator output without anomalies); each adds
/// its own slowly drifting bias, an AR(1) process
///   b[0] ~ N(0, drift_sd^2),  b[t+1] = phi * b[t] + drift_sd * sqrt(1 - phi^2) * N(0, 1)
/// applied to every coordinate, plus its own injected anomalies.
struct PairModel {
    double drift_phi = 0.98;
    double drift_sd = 1.0;
};

struct StreamPair {
    Generated first;
    Generated second;
};

[[nodiscard]] inline StreamPair gen_stream_pair(const GeneratorSpec &spec, const PairModel &model) {
    if (model.drift_phi < 0.0 || model.drift_phi >= 1.0) throw std::invalid_argument("drift_phi must be in [0, 1)");
    if (model.drift_sd < 0.0) throw std::invalid_argument("drift_sd must be >= 0");

    SplitMix64 seeder(spec.seed ^ 0x5851F42D4C957F2DULL);
    auto make = [&](std::uint64_t anomaly_seed, std::uint64_t drift_seed) {
        GeneratorSpec s = spec;
        s.anomaly_seed = anomaly_seed;
        Generated g = generate(s);
        SplitMix64 rng(drift_seed);
        const double innov = model.drift_sd * std::sqrt(1.0 - model.drift_phi * model.drift_phi);
        std::vector<double> bias(g.series.dim);
        for (auto &b : bias) b = model.drift_sd * rng.normal();
        std::vector<Point> pts;
        pts.reserve(g.series.size());
        for (const auto &p : g.series.points) {
            std::vector<double> c(p.coords().begin(), p.coords().end());
            for (std::size_t i = 0; i < c.size(); ++i) {
                c[i] += bias[i];
                bias[i] = model.drift_phi * bias[i] + innov * rng.normal();
            }
            pts.emplace_back(std::move(c));
        }
        g.series = RawSeries(g.series.dim, std::move(pts));
        return g;
    };
    const std::uint64_t a1 = seeder.next();
    const std::uint64_t d1 = seeder.next();
    const std::uint64_t a2 = seeder.next();
    const std::uint64_t d2 = seeder.next();
    StreamPair out{make(a1, d1), make(a2, d2)};
    return out;
}

} // namespace msmjoin
