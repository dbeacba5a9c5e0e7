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

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace msmjoin {

/// Fixed-capacity ring holding the latest `capacity` values, indexed
/// oldest (0) to newest (size() - 1). Pushing into a full window evicts
/// exactly the oldest value.
template <typename T>
class SlidingWindow {
  public:
    explicit SlidingWindow(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("window capacity must be >= 1");
        buf_.reserve(capacity);
    }

    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] std::size_t size() const noexcept { return buf_.size(); }
    [[nodiscard]] bool empty() const noexcept { return buf_.empty(); }
    [[nodiscard]] bool full() const noexcept { return buf_.size() == capacity_; }

    void push(T value) {
        if (buf_.size() < capacity_) {
            buf_.push_back(std::move(value));
            return;
        }
        buf_[head_] = std::move(value);
        head_ = (head_ + 1) % capacity_;
    }

    [[nodiscard]] const T &operator[](std::size_t i) const { return buf_[(head_ + i) % buf_.size()]; }
    [[nodiscard]] const T &oldest() const { return (*this)[0]; }
    [[nodiscard]] const T &newest() const { return (*this)[buf_.size() - 1]; }

    /// Copy in oldest-to-newest order.
    [[nodiscard]] std::vector<T> to_vector() const {
        std::vector<T> out;
        out.reserve(buf_.size());
        for (std::size_t i = 0; i < buf_.size(); ++i) out.push_back((*this)[i]);
        return out;
    }

    void clear() noexcept {
        buf_.clear();
        head_ = 0;
    }

    friend bool operator==(const SlidingWindow &a, const SlidingWindow &b) {
        return a.capacity_ == b.capacity_ && a.to_vector() == b.to_vector();
    }

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<T> buf_;
};

} // namespace msmjoin
