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

#include "compensated_sum.hpp"
#include "point.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msmjoin {

/// Multi-level segment mean parameters: each level replaces every run of
/// `seg_size` values with their mean, `levels` times over.
struct MsmConfig {
    std::size_t seg_size = 2;
    std::size_t levels = 1;

    void validate() const {
        if (seg_size < 2) throw std::invalid_argument("seg_size must be >= 2");
        if (levels < 1) throw std::invalid_argument("levels must be >= 1");
        std::size_t b = 1;
        for (std::size_t l = 0; l < levels; ++l) {
            if (b > std::numeric_limits<std::size_t>::max() / seg_size) {
                throw std::invalid_argument("seg_size^levels overflows");
            }
            b *= seg_size;
        }
    }

    /// Number of raw points folded into one fully populated reduced point.
    [[nodiscard]] std::size_t block_size() const {
        validate();
        std::size_t b = 1;
        for (std::size_t l = 0; l < levels; ++l) b *= seg_size;
        return b;
    }

    friend bool operator==(const MsmConfig &, const MsmConfig &) = default;
};

/// One reduced object: a hypersphere summary of a contiguous raw span.
struct ReducedPoint {
    Point center;
    std::size_t raw_start = 0;
    std::size_t raw_count = 0;
    double radius = 0.0; ///< max distance from center to any raw point in the span

    [[nodiscard]] std::size_t dim() const noexcept { return center.dim(); }

    friend bool operator==(const ReducedPoint &, const ReducedPoint &) = default;
};

struct ReducedSeries {
    MsmConfig config;
    std::size_t source_len = 0;
    std::size_t dim = 0;
    std::vector<ReducedPoint> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] bool empty() const noexcept { return points.empty(); }
    [[nodiscard]] const ReducedPoint &operator[](std::size_t i) const { return points[i]; }

    friend bool operator==(const ReducedSeries &, const ReducedSeries &) = default;
};

/// Work counters for the reduction. `accumulations` counts point additions
/// into segment sums across all levels; `radius_evaluations` counts the
/// center-to-raw distance evaluations of the final pass.
struct MsmWork {
    std::size_t accumulations = 0;
    std::size_t radius_evaluations = 0;

    [[nodiscard]] std::size_t total() const noexcept { return accumulations + radius_evaluations; }
};

/// Componentwise mean of each run of `seg_size` points. A trailing partial
/// segment is averaged over its actual size.
[[nodiscard]] inline std::vector<Point> segment_means(std::span<const Point> series, std::size_t seg_size,
                                                      MsmWork *work = nullptr) {
    if (series.empty()) throw DataError("empty series");
    if (seg_size < 2) throw std::invalid_argument("seg_size must be >= 2");
    const std::size_t d = series.front().dim();
    for (const auto &p : series) {
        if (p.dim() != d) throw DataError("dimension mismatch");
    }

    const std::size_t n = series.size();
    std::vector<Point> out;
    out.reserve((n + seg_size - 1) / seg_size);
    for (std::size_t start = 0; start < n; start += seg_size) {
        const std::size_t stop = std::min(start + seg_size, n);
        VectorSum sum(d);
        for (std::size_t k = start; k < stop; ++k) sum.add(series[k].coords());
        if (work) work->accumulations += stop - start;
        out.emplace_back(sum.mean());
    }
    return out;
}

/// Length msm_reduce produces: n <- ceil(n / seg_size), `levels` times.
[[nodiscard]] inline std::size_t dim_reduced_len(std::size_t source_len, const MsmConfig &config) {
    config.validate();
    std::size_t n = source_len;
    for (std::size_t l = 0; l < config.levels; ++l) n = (n + config.seg_size - 1) / config.seg_size;
    return n;
}

/// Dimension reduction factor 1 / seg_size^levels.
[[nodiscard]] inline double drf(const MsmConfig &config) {
    return 1.0 / static_cast<double>(config.block_size());
}

namespace detail {

inline std::vector<ReducedPoint> attach_spans(std::span<const Point> raw, std::vector<Point> centers,
                                              std::size_t block, std::size_t offset, MsmWork *work) {
    std::vector<ReducedPoint> out;
    out.reserve(centers.size());
    for (std::size_t k = 0; k < centers.size(); ++k) {
        ReducedPoint rp;
        rp.raw_start = k * block;
        rp.raw_count = std::min(block, raw.size() - rp.raw_start);
        double r = 0.0;
        for (std::size_t j = rp.raw_start; j < rp.raw_start + rp.raw_count; ++j) {
            r = std::max(r, euclidean_dist(centers[k], raw[j]));
        }
        if (work) work->radius_evaluations += rp.raw_count;
        rp.radius = r;
        rp.raw_start += offset;
        rp.center = std::move(centers[k]);
        out.push_back(std::move(rp));
    }
    return out;
}

} // namespace detail

/// Applies segment_means `levels` times and annotates each result with its
/// raw span and radius. Reduced point k summarizes raw points
/// [k * block, min((k + 1) * block, n)) with block = seg_size^levels.
[[nodiscard]] inline ReducedSeries msm_reduce(const RawSeries &series, const MsmConfig &config,
                                              MsmWork *work = nullptr) {
    config.validate();
    if (series.empty()) throw DataError("empty series");
    series.validate();

    std::vector<Point> level = segment_means(series.points, config.seg_size, work);
    for (std::size_t l = 1; l < config.levels; ++l) level = segment_means(level, config.seg_size, work);

    ReducedSeries out;
    out.config = config;
    out.source_len = series.size();
    out.dim = series.dim;
    out.points = detail::attach_spans(series.points, std::move(level), config.block_size(), 0, work);
    return out;
}

/// Incremental reducer. Buffers raw points of the open block only; every
/// seg_size^levels points it emits the reduced point the batch reducer would
/// produce for that block.
class MsmStreamReducer {
  public:
    explicit MsmStreamReducer(MsmConfig config) : config_(config), block_(config.block_size()) {
        buffer_.reserve(block_);
    }

    [[nodiscard]] const MsmConfig &config() const noexcept { return config_; }
    [[nodiscard]] std::size_t buffered() const noexcept { return buffer_.size(); }
    [[nodiscard]] std::size_t consumed() const noexcept { return consumed_; }

    std::optional<ReducedPoint> push(const Point &incoming) {
        if (dim_ == 0) dim_ = incoming.dim();
        if (incoming.dim() != dim_) throw DataError("dimension mismatch");
        if (!incoming.is_finite()) throw DataError("non-finite coordinate");
        buffer_.push_back(incoming);
        ++consumed_;
        if (buffer_.size() < block_) return std::nullopt;
        return emit();
    }

    /// Emits the trailing partial block, if any.
    std::optional<ReducedPoint> flush() {
        if (buffer_.empty()) return std::nullopt;
        return emit();
    }

  private:
    ReducedPoint emit() {
        const std::size_t offset = consumed_ - buffer_.size();
        std::vector<Point> level = segment_means(buffer_, config_.seg_size);
        for (std::size_t l = 1; l < config_.levels; ++l) level = segment_means(level, config_.seg_size);
        auto pts = detail::attach_spans(buffer_, std::move(level), block_, offset, nullptr);
        buffer_.clear();
        return std::move(pts.front());
    }

    MsmConfig config_;
    std::size_t block_;
    std::size_t dim_ = 0;
    std::size_t consumed_ = 0;
    std::vector<Point> buffer_;
};

/// Wraps raw samples as zero-radius reduced points (each spanning itself).
[[nodiscard]] inline ReducedSeries lift_raw(const RawSeries &series) {
    series.validate();
    ReducedSeries out;
    out.config = MsmConfig{};
    out.source_len = series.size();
    out.dim = series.dim;
    out.points.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        out.points.push_back(ReducedPoint{series[i], i, 1, 0.0});
    }
    return out;
}

} // namespace msmjoin
