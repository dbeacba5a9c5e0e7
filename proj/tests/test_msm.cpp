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

#include "oracles.hpp"

#include <msmjoin/msm.hpp>

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace msmjoin;

namespace {

RawSeries seq(std::initializer_list<double> v) {
    std::vector<double> x(v);
    return RawSeries::scalar(x);
}

std::vector<double> centers(const ReducedSeries &r) {
    std::vector<double> out;
    for (const auto &p : r.points) out.push_back(p.center[0]);
    return out;
}

} // namespace

TEST(SegmentMeans, PairsOfEight) {
    const auto s = seq({1, 2, 3, 4, 5, 6, 7, 8});
    const auto m = segment_means(s.points, 2);
    ASSERT_EQ(m.size(), 4u);
    EXPECT_EQ(m[0][0], 1.5);
    EXPECT_EQ(m[1][0], 3.5);
    EXPECT_EQ(m[2][0], 5.5);
    EXPECT_EQ(m[3][0], 7.5);
}

TEST(SegmentMeans, TrailingPartialSegmentAveragedOverActualSize) {
    const auto s = seq({1, 2, 3, 4, 5});
    const auto m = segment_means(s.points, 2);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[0][0], 1.5);
    EXPECT_EQ(m[1][0], 3.5);
    EXPECT_EQ(m[2][0], 5.0);
}

TEST(SegmentMeans, ConstantSeriesStaysConstant) {
    for (std::size_t seg : {2u, 3u, 7u}) {
        std::vector<double> v(23, 0.1);
        const auto m = segment_means(RawSeries::scalar(v).points, seg);
        ASSERT_EQ(m.size(), (23 + seg - 1) / seg);
        for (const auto &p : m) EXPECT_EQ(p[0], 0.1);
    }
}

TEST(SegmentMeans, Errors) {
    std::vector<Point> empty;
    EXPECT_THROW((void)segment_means(empty, 2), DataError);
    try {
        (void)segment_means(empty, 2);
    } catch (const DataError &e) {
        EXPECT_STREQ(e.what(), "empty series");
    }
    std::vector<Point> mixed{Point{1.0}, Point{1.0, 2.0}};
    try {
        (void)segment_means(mixed, 2);
        FAIL();
    } catch (const DataError &e) {
        EXPECT_STREQ(e.what(), "dimension mismatch");
    }
    std::vector<Point> ok{Point{1.0}};
    EXPECT_THROW((void)segment_means(ok, 1), std::invalid_argument);
}

TEST(MsmReduce, TwoLevelsOfPairs) {
    const auto r = msm_reduce(seq({1, 2, 3, 4, 5, 6, 7, 8}), MsmConfig{2, 2});
    EXPECT_EQ(centers(r), (std::vector<double>{2.5, 6.5}));
    EXPECT_EQ(r[0].raw_start, 0u);
    EXPECT_EQ(r[0].raw_count, 4u);
    EXPECT_EQ(r[1].raw_start, 4u);
    EXPECT_EQ(r[1].raw_count, 4u);
    EXPECT_DOUBLE_EQ(r[0].radius, 1.5);
    EXPECT_DOUBLE_EQ(r[1].radius, 1.5);
    EXPECT_EQ(r.source_len, 8u);
}

TEST(MsmReduce, TableSize4400) {
    std::mt19937_64 rng(5);
    const auto s = oracle::random_walk(rng, 4400, 1);
    EXPECT_EQ(msm_reduce(s, MsmConfig{2, 3}).size(), 550u);
}

TEST(MsmReduce, TwoDimensionalRadiusIsEuclidean) {
    RawSeries s(2, {Point{0, 0}, Point{6, 8}});
    const auto r = msm_reduce(s, MsmConfig{2, 1});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].center, (Point{3, 4}));
    EXPECT_DOUBLE_EQ(r[0].radius, 5.0);
}

TEST(MsmReduce, PartialTrailingBlockSpan) {
    const auto r = msm_reduce(seq({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), MsmConfig{2, 2});
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[2].raw_start, 8u);
    EXPECT_EQ(r[2].raw_count, 2u);
    EXPECT_DOUBLE_EQ(r[2].center[0], 9.5);
    EXPECT_DOUBLE_EQ(r[2].radius, 0.5);
}

TEST(MsmReduce, RejectsInvalidConfigAndInput) {
    EXPECT_THROW((void)msm_reduce(seq({1, 2}), MsmConfig{1, 1}), std::invalid_argument);
    EXPECT_THROW((void)msm_reduce(seq({1, 2}), MsmConfig{2, 0}), std::invalid_argument);
    EXPECT_THROW((void)msm_reduce(RawSeries{}, MsmConfig{2, 1}), DataError);
}

TEST(MsmReduce, FlatAndNestedMeansAgreeOnDivisibleLengths) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> seg_d(2, 5), lev_d(1, 3), blocks_d(1, 40), dim_d(1, 3);
    for (int c = 0; c < 300; ++c) {
        const MsmConfig cfg{seg_d(rng), lev_d(rng)};
        const std::size_t b = cfg.block_size();
        const auto s = oracle::random_walk(rng, b * blocks_d(rng), dim_d(rng), 10.0);
        const auto r = msm_reduce(s, cfg);
        const auto flat = oracle::block_means(s, b);
        ASSERT_EQ(r.size(), flat.size());
        for (std::size_t k = 0; k < flat.size(); ++k) {
            for (std::size_t i = 0; i < s.dim; ++i) ASSERT_NEAR(r[k].center[i], flat[k][i], 1e-9);
        }
    }
}

TEST(DimReducedLen, Examples) {
    EXPECT_EQ(dim_reduced_len(4400, {2, 3}), 550u);
    EXPECT_EQ(dim_reduced_len(4400, {4, 3}), 69u);
    EXPECT_EQ(dim_reduced_len(4400, {3, 3}), 163u);
    EXPECT_EQ(dim_reduced_len(8, {2, 3}), 1u);
    EXPECT_EQ(dim_reduced_len(1, {5, 4}), 1u);
}

TEST(DimReducedLen, MatchesReducerLength) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> len_d(1, 3000), seg_d(2, 5), lev_d(1, 4);
    for (int c = 0; c < 500; ++c) {
        const MsmConfig cfg{seg_d(rng), lev_d(rng)};
        const auto s = oracle::uniform_points(rng, len_d(rng), 1, 1.0);
        ASSERT_EQ(msm_reduce(s, cfg).size(), dim_reduced_len(s.size(), cfg));
    }
}

TEST(Drf, Examples) {
    EXPECT_EQ(drf({2, 3}), 0.125);
    EXPECT_EQ(drf({3, 3}), 1.0 / 27.0);
    EXPECT_EQ(drf({2, 1}), 0.5);
}

TEST(MsmReduce, ConstantSeriesHasZeroRadii) {
    std::vector<double> v(100, 3.7);
    const auto r = msm_reduce(RawSeries::scalar(v), MsmConfig{3, 2});
    for (const auto &p : r.points) {
        EXPECT_EQ(p.center[0], 3.7);
        EXPECT_EQ(p.radius, 0.0);
    }
}

TEST(MsmReduce, EnvelopeAndRadiusSoundness) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> len_d(1, 700), seg_d(2, 5), lev_d(1, 3), dim_d(1, 3);
    for (int c = 0; c < 300; ++c) {
        const MsmConfig cfg{seg_d(rng), lev_d(rng)};
        const auto s = oracle::random_walk(rng, len_d(rng), dim_d(rng), 3.0);
        const auto r = msm_reduce(s, cfg);
        std::size_t next = 0;
        for (const auto &p : r.points) {
            ASSERT_EQ(p.raw_start, next);
            next += p.raw_count;
            ASSERT_GE(p.radius, 0.0);
            for (std::size_t i = 0; i < s.dim; ++i) {
                double lo = INFINITY, hi = -INFINITY;
                for (std::size_t k = p.raw_start; k < p.raw_start + p.raw_count; ++k) {
                    lo = std::min(lo, s[k][i]);
                    hi = std::max(hi, s[k][i]);
                }
                ASSERT_GE(p.center[i], lo);
                ASSERT_LE(p.center[i], hi);
            }
            for (std::size_t k = p.raw_start; k < p.raw_start + p.raw_count; ++k) {
                ASSERT_LE(oracle::dist(p.center, s[k]), p.radius);
            }
        }
        ASSERT_EQ(next, s.size());
    }
}

TEST(MsmReduce, WorkIsLinearInLevelsTimesLength) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> len_d(1, 5000), seg_d(2, 5), lev_d(1, 4);
    for (int c = 0; c < 200; ++c) {
        const MsmConfig cfg{seg_d(rng), lev_d(rng)};
        const auto s = oracle::uniform_points(rng, len_d(rng), 1, 1.0);
        MsmWork w;
        (void)msm_reduce(s, cfg, &w);
        ASSERT_LE(w.total(), 2 * cfg.levels * s.size());
        ASSERT_EQ(w.radius_evaluations, s.size());
    }
}

TEST(MsmStream, EmitsAtBlockBoundaries) {
    MsmStreamReducer red(MsmConfig{2, 2});
    std::vector<ReducedPoint> out;
    for (int v = 1; v <= 7; ++v) {
        auto e = red.push(Point{static_cast<double>(v)});
        if (v == 4) {
            ASSERT_TRUE(e.has_value());
        } else {
            ASSERT_FALSE(e.has_value()) << "unexpected emission at point " << v;
        }
        if (e) out.push_back(*e);
    }
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].center[0], 2.5);
    EXPECT_EQ(red.buffered(), 3u);
    auto last = red.push(Point{8.0});
    ASSERT_TRUE(last.has_value());
    EXPECT_EQ(last->center[0], 6.5);
    EXPECT_EQ(last->raw_start, 4u);
    EXPECT_FALSE(red.flush().has_value());
}

TEST(MsmStream, FlushMatchesBatchPartialRule) {
    MsmStreamReducer red(MsmConfig{2, 2});
    std::vector<ReducedPoint> out;
    const auto s = seq({1, 2, 3, 4, 5, 6});
    for (const auto &p : s.points) {
        if (auto e = red.push(p)) out.push_back(*e);
    }
    if (auto e = red.flush()) out.push_back(*e);
    EXPECT_EQ(out, msm_reduce(s, MsmConfig{2, 2}).points);
}

TEST(MsmStream, DimensionMismatch) {
    MsmStreamReducer red(MsmConfig{2, 1});
    (void)red.push(Point{1.0});
    EXPECT_THROW((void)red.push(Point{1.0, 2.0}), DataError);
}

TEST(MsmStream, EqualsBatchExactly) {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<std::size_t> len_d(1, 900), seg_d(2, 4), lev_d(1, 3), dim_d(1, 2);
    for (int c = 0; c < 300; ++c) {
        const MsmConfig cfg{seg_d(rng), lev_d(rng)};
        const auto s = oracle::random_walk(rng, len_d(rng), dim_d(rng));
        MsmStreamReducer red(cfg);
        std::vector<ReducedPoint> out;
        for (const auto &p : s.points) {
            if (auto e = red.push(p)) out.push_back(*e);
        }
        if (auto e = red.flush()) out.push_back(*e);
        ASSERT_EQ(out, msm_reduce(s, cfg).points);
    }
}
