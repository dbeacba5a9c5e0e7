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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace msmjoin {

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

    void reset() noexcept {
        sum_ = 0.0;
        comp_ = 0.0;
    }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Componentwise compensated accumulator for d-dimensional points. Tracks
/// the componentwise envelope so the mean can be clamped into it; a mean of
/// identical values is then exactly that value.
class VectorSum {
  public:
    explicit VectorSum(std::size_t dim)
        : parts_(dim), lo_(dim, std::numeric_limits<double>::infinity()),
          hi_(dim, -std::numeric_limits<double>::infinity()) {}

    template <typename Coords>
    void add(const Coords &coords) {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            parts_[i].add(coords[i]);
            lo_[i] = std::min(lo_[i], coords[i]);
            hi_[i] = std::max(hi_[i], coords[i]);
        }
        ++count_;
    }

    [[nodiscard]] std::size_t count() const noexcept { return count_; }

    /// Componentwise mean of everything added so far.
    [[nodiscard]] std::vector<double> mean() const {
        std::vector<double> out(parts_.size());
        const double n = static_cast<double>(count_);
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            out[i] = std::clamp(parts_[i].value() / n, lo_[i], hi_[i]);
        }
        return out;
    }

  private:
    std::vector<CompensatedSum> parts_;
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::size_t count_ = 0;
};

} // namespace msmjoin
