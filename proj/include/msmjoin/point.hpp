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

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msmjoin {

/// Raised for malformed or inconsistent input data (empty series, mixed
/// dimensions, unparsable files). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A d-dimensional sample. d >= 1 and fixed within one series.
class Point {
  public:
    Point() = default;
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
    Point(std::initializer_list<double> coords) : coords_(coords) {}

    static Point zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
    double &operator[](std::size_t i) { return coords_[i]; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

    [[nodiscard]] bool is_finite() const noexcept {
        for (double c : coords_) {
            if (!std::isfinite(c)) return false;
        }
        return true;
    }

    friend bool operator==(const Point &, const Point &) = default;

  private:
    std::vector<double> coords_;
};

inline void require_same_dim(const Point &a, const Point &b) {
    if (a.dim() != b.dim()) throw DataError("dimension mismatch");
}

/// Cartesian distance sqrt(sum_i (a_i - b_i)^2).
[[nodiscard]] inline double euclidean_dist(const Point &a, const Point &b) {
    require_same_dim(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

/// Ordered, fixed-period sequence of points. Point k is time instance k.
struct RawSeries {
    std::size_t dim = 0;
    std::vector<Point> points;

    RawSeries() = default;
    RawSeries(std::size_t d, std::vector<Point> pts) : dim(d), points(std::move(pts)) { validate(); }

    /// Infers the dimension from the first point.
    static RawSeries from_points(std::vector<Point> pts) {
        const std::size_t d = pts.empty() ? 0 : pts.front().dim();
        return RawSeries(d, std::move(pts));
    }

    /// Scalar convenience constructor.
    static RawSeries scalar(std::span<const double> values) {
        std::vector<Point> pts;
        pts.reserve(values.size());
        for (double v : values) pts.push_back(Point{v});
        return RawSeries(1, std::move(pts));
    }

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] bool empty() const noexcept { return points.empty(); }
    [[nodiscard]] const Point &operator[](std::size_t i) const { return points[i]; }

    void validate() const {
        for (const auto &p : points) {
            if (p.dim() != dim) throw DataError("dimension mismatch");
            if (!p.is_finite()) throw DataError("non-finite coordinate");
        }
    }

    friend bool operator==(const RawSeries &, const RawSeries &) = default;
};

} // namespace msmjoin
