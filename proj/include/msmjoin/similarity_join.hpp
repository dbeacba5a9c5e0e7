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

#include "msm.hpp"
#include "point.hpp"
#include "sliding_window.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msmjoin {

/// How the cross-pair lemma results combine into a verdict.
///  - ExistsNonPrunable: each new object needs at least one non-prunable
///    partner in the other stream's window.
///  - AllNonPrunable: every cross pair must be non-prunable.
enum class WindowQuantifier { ExistsNonPrunable, AllNonPrunable };

[[nodiscard]] inline std::string_view to_string(WindowQuantifier q) {
    return q == WindowQuantifier::ExistsNonPrunable ? "exists" : "all";
}

[[nodiscard]] inline WindowQuantifier parse_quantifier(std::string_view s) {
    if (s == "exists") return WindowQuantifier::ExistsNonPrunable;
    if (s == "all") return WindowQuantifier::AllNonPrunable;
    throw std::invalid_argument("unknown quantifier '" + std::string(s) + "' (expected exists|all)");
}

struct JoinConfig {
    double delta = 1.0;
    std::size_t wsize = 1;
    WindowQuantifier quantifier = WindowQuantifier::ExistsNonPrunable;

    void validate() const {
        if (!(std::isfinite(delta) && delta > 0.0)) throw std::invalid_argument("delta must be finite and > 0");
        if (wsize < 1) throw std::invalid_argument("wsize must be >= 1");
    }
};

using Window = SlidingWindow<ReducedPoint>;

enum class Verdict { Matched, DistanceRejected, Pruned };

[[nodiscard]] inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Matched: return "matched";
    case Verdict::DistanceRejected: return "distance_rejected";
    case Verdict::Pruned: return "pruned";
    }
    return "?";
}

struct PairDecision {
    std::size_t index = 0; ///< position of the pair in the joined series
    Verdict verdict = Verdict::Matched;
    double pair_distance = 0.0;
    std::size_t cross_checks = 0;       ///< lemma evaluations performed
    std::size_t pruned_cross_pairs = 0; ///< evaluations that came out prunable

    [[nodiscard]] bool is_outlier() const noexcept { return verdict != Verdict::Matched; }

    friend bool operator==(const PairDecision &, const PairDecision &) = default;
};

struct JoinStats {
    std::size_t pairs_seen = 0;
    std::size_t pairs_matched = 0;
    std::size_t pairs_pruned = 0;
    std::size_t pairs_distance_rejected = 0;
    std::size_t total_cross_checks = 0;
    double matched_pct = 0.0;

    void record(const PairDecision &d) {
        ++pairs_seen;
        switch (d.verdict) {
        case Verdict::Matched: ++pairs_matched; break;
        case Verdict::Pruned: ++pairs_pruned; break;
        case Verdict::DistanceRejected: ++pairs_distance_rejected; break;
        }
        total_cross_checks += d.cross_checks;
        matched_pct = 100.0 * static_cast<double>(pairs_matched) / static_cast<double>(pairs_seen);
    }

    friend bool operator==(const JoinStats &, const JoinStats &) = default;
};

/// Hypersphere lower-bound test: the pair can be discarded when the center
/// distance minus both radii exceeds delta. Never dismisses a pair whose
/// summarized raw samples come within delta of each other.
[[nodiscard]] inline bool is_prunable(const ReducedPoint &p, const ReducedPoint &q, double delta) {
    return euclidean_dist(p.center, q.center) - p.radius - q.radius > delta;
}

namespace detail {

struct SideResult {
    bool satisfied = true;
    std::size_t checks = 0;
    std::size_t pruned = 0;
};

// Newest first, so the existential form usually stops after one check.
inline SideResult check_side(const ReducedPoint &incoming, const Window &other, const JoinConfig &cfg) {
    SideResult r;
    if (other.empty()) return r;
    const bool exists = cfg.quantifier == WindowQuantifier::ExistsNonPrunable;
    bool any_survivor = false;
    for (std::size_t i = other.size(); i-- > 0;) {
        ++r.checks;
        if (is_prunable(incoming, other[i], cfg.delta)) {
            ++r.pruned;
            if (!exists) r.satisfied = false;
        } else {
            any_survivor = true;
            if (exists) break;
        }
    }
    if (exists) r.satisfied = any_survivor;
    return r;
}

} // namespace detail

/// Decides one incoming pair against both windows. Windows advance only on
/// Matched; on any other verdict they are left untouched.
inline PairDecision process_pair(const ReducedPoint &x_new, const ReducedPoint &y_new, Window &win1, Window &win2,
                                 const JoinConfig &cfg) {
    PairDecision d;
    d.pair_distance = euclidean_dist(x_new.center, y_new.center);
    if (!win1.empty() && win1.newest().dim() != x_new.dim()) throw DataError("dimension mismatch");
    if (!win2.empty() && win2.newest().dim() != y_new.dim()) throw DataError("dimension mismatch");

    if (d.pair_distance > cfg.delta) {
        d.verdict = Verdict::DistanceRejected;
        return d;
    }

    const auto a = detail::check_side(x_new, win2, cfg);
    d.cross_checks += a.checks;
    d.pruned_cross_pairs += a.pruned;
    bool matched = a.satisfied;
    // A failed existential side already decides the verdict.
    if (matched || cfg.quantifier == WindowQuantifier::AllNonPrunable) {
        const auto b = detail::check_side(y_new, win1, cfg);
        d.cross_checks += b.checks;
        d.pruned_cross_pairs += b.pruned;
        matched = matched && b.satisfied;
    }

    d.verdict = matched ? Verdict::Matched : Verdict::Pruned;
    if (matched) {
        win1.push(x_new);
        win2.push(y_new);
    }
    return d;
}

/// Join session owning the two windows of a stream pair.
class JoinSession {
  public:
    explicit JoinSession(JoinConfig cfg) : cfg_(cfg), win1_((cfg.validate(), cfg.wsize)), win2_(cfg.wsize) {}

    /// Warm-up: fills the windows without producing a decision.
    void seed(const ReducedPoint &x, const ReducedPoint &y) {
        require_same_dim(x.center, y.center);
        win1_.push(x);
        win2_.push(y);
    }

    PairDecision process(const ReducedPoint &x_new, const ReducedPoint &y_new) {
        auto d = process_pair(x_new, y_new, win1_, win2_, cfg_);
        d.index = next_index_++;
        stats_.record(d);
        return d;
    }

    void set_next_index(std::size_t i) noexcept { next_index_ = i; }

    [[nodiscard]] const JoinConfig &config() const noexcept { return cfg_; }
    [[nodiscard]] const Window &window1() const noexcept { return win1_; }
    [[nodiscard]] const Window &window2() const noexcept { return win2_; }
    [[nodiscard]] const JoinStats &stats() const noexcept { return stats_; }

  private:
    JoinConfig cfg_;
    Window win1_;
    Window win2_;
    JoinStats stats_;
    std::size_t next_index_ = 0;
};

struct JoinResult {
    std::vector<PairDecision> decisions;
    JoinStats stats;
    std::optional<std::string> warning;
};

/// Seeds both windows with the first wsize points of each series, then runs
/// every later index through process_pair. Unequal lengths are truncated to
/// the shorter series, with a warning.
[[nodiscard]] inline JoinResult run_join(const ReducedSeries &s1, const ReducedSeries &s2, const JoinConfig &cfg) {
    cfg.validate();
    if (s1.empty() || s2.empty()) throw DataError("empty series");
    if (s1.points.front().dim() != s2.points.front().dim()) throw DataError("dimension mismatch");

    JoinResult result;
    const std::size_t n = std::min(s1.size(), s2.size());
    if (s1.size() != s2.size()) {
        result.warning = "stream lengths differ (" + std::to_string(s1.size()) + " vs " + std::to_string(s2.size()) +
                         "); truncating to " + std::to_string(n);
    }

    JoinSession session(cfg);
    const std::size_t warm = std::min(cfg.wsize, n);
    for (std::size_t i = 0; i < warm; ++i) session.seed(s1[i], s2[i]);
    session.set_next_index(warm);
    result.decisions.reserve(n - warm);
    for (std::size_t i = warm; i < n; ++i) result.decisions.push_back(session.process(s1[i], s2[i]));
    result.stats = session.stats();
    return result;
}

} // namespace msmjoin
