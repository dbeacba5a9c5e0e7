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
#include "similarity_join.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <unistd.h>

// CSV schemas (UTF-8, LF, '.' decimal separator, header row mandatory):
//   raw series:      t,v1[,v2,...]
//   reduced series:  t,v1[,v2,...],radius,raw_start,raw_count
//   decisions:       index,verdict,pair_distance,cross_checks,pruned_cross_pairs
//   outlier sidecar: index
// Reals are written with 17 significant digits so they read back exactly.

namespace msmjoin {

/// Raised when a file cannot be opened, written or renamed.
class IoError : public DataError {
  public:
    using DataError::DataError;
};

[[nodiscard]] inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw DataError("cannot format value");
    return {buf, end};
}

/// Writes through a sibling temp file and renames on success, so a failed
/// write never leaves a partial file at `path`.
inline void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into '" + path.string() + "'");
    }
}

namespace detail {

inline std::string value_header(std::size_t dim) {
    std::string h = "t";
    for (std::size_t i = 1; i <= dim; ++i) h += ",v" + std::to_string(i);
    return h;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string> read_lines(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

class LineContext {
  public:
    LineContext(const std::filesystem::path &path, std::size_t lineno) : path_(path.string()), line_(lineno) {}

    [[noreturn]] void fail(const std::string &what) const {
        throw DataError(path_ + ":" + std::to_string(line_) + ": " + what);
    }

    double real(std::string_view field) const {
        double v = 0.0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || p != field.data() + field.size()) fail("malformed number '" + std::string(field) + "'");
        if (!std::isfinite(v)) fail("non-finite value '" + std::string(field) + "'");
        return v;
    }

    long long integer(std::string_view field) const {
        long long v = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || p != field.data() + field.size()) fail("malformed integer '" + std::string(field) + "'");
        return v;
    }

  private:
    std::string path_;
    std::size_t line_;
};

struct ParsedTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::string> storage;
};

// Parses header + rows; checks column count and that the t column
// increases strictly.
inline ParsedTable parse_table(const std::filesystem::path &path) {
    ParsedTable tbl;
    tbl.storage = read_lines(path);
    if (tbl.storage.empty()) throw DataError(path.string() + ": missing header row");
    for (auto f : split_commas(tbl.storage[0])) tbl.header.emplace_back(f);
    if (tbl.header.size() < 2 || tbl.header[0] != "t") {
        throw DataError(path.string() + ":1: header must be 't,v1[,v2,...]'");
    }
    long long prev_tick = 0;
    for (std::size_t i = 1; i < tbl.storage.size(); ++i) {
        LineContext ctx(path, i + 1);
        auto fields = split_commas(tbl.storage[i]);
        if (fields.size() != tbl.header.size()) {
            ctx.fail("expected " + std::to_string(tbl.header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        const long long tick = ctx.integer(fields[0]);
        if (i > 1 && tick <= prev_tick) ctx.fail("ticks must increase strictly");
        prev_tick = tick;
        tbl.rows.push_back(std::move(fields));
    }
    return tbl;
}

inline bool has_reduced_columns(const std::vector<std::string> &header) {
    const auto n = header.size();
    return n >= 5 && header[n - 3] == "radius" && header[n - 2] == "raw_start" && header[n - 1] == "raw_count";
}

} // namespace detail

/// Reads `t,v1[,v2,...]`. Ticks must increase strictly and are re-indexed
/// densely from 0; d comes from the header.
[[nodiscard]] inline RawSeries read_csv(const std::filesystem::path &path) {
    auto tbl = detail::parse_table(path);
    if (detail::has_reduced_columns(tbl.header)) {
        throw DataError(path.string() + ": file holds a reduced series; expected raw columns");
    }
    for (std::size_t c = 1; c < tbl.header.size(); ++c) {
        if (tbl.header[c] != "v" + std::to_string(c)) {
            throw DataError(path.string() + ":1: unexpected column '" + tbl.header[c] + "'");
        }
    }
    const std::size_t dim = tbl.header.size() - 1;
    std::vector<Point> pts;
    pts.reserve(tbl.rows.size());
    for (std::size_t r = 0; r < tbl.rows.size(); ++r) {
        detail::LineContext ctx(path, r + 2);
        std::vector<double> c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = ctx.real(tbl.rows[r][i + 1]);
        pts.emplace_back(std::move(c));
    }
    return RawSeries(dim, std::move(pts));
}

/// Reads the reduced schema. The MSM configuration is not stored in the
/// file; `config` on the result is left at its default.
[[nodiscard]] inline ReducedSeries read_reduced_csv(const std::filesystem::path &path) {
    auto tbl = detail::parse_table(path);
    if (!detail::has_reduced_columns(tbl.header)) {
        throw DataError(path.string() + ":1: header must end with radius,raw_start,raw_count");
    }
    const std::size_t dim = tbl.header.size() - 4;
    ReducedSeries out;
    out.dim = dim;
    for (std::size_t r = 0; r < tbl.rows.size(); ++r) {
        detail::LineContext ctx(path, r + 2);
        const auto &f = tbl.rows[r];
        std::vector<double> c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = ctx.real(f[i + 1]);
        ReducedPoint rp;
        rp.center = Point(std::move(c));
        rp.radius = ctx.real(f[dim + 1]);
        const auto start = ctx.integer(f[dim + 2]);
        const auto count = ctx.integer(f[dim + 3]);
        if (rp.radius < 0.0 || start < 0 || count < 1) ctx.fail("invalid radius or raw span");
        rp.raw_start = static_cast<std::size_t>(start);
        rp.raw_count = static_cast<std::size_t>(count);
        if (!out.points.empty()) {
            const auto &prev = out.points.back();
            if (rp.raw_start != prev.raw_start + prev.raw_count) ctx.fail("raw spans must be contiguous");
        }
        out.source_len = rp.raw_start + rp.raw_count;
        out.points.push_back(std::move(rp));
    }
    return out;
}

/// Reads either schema; raw input is lifted to zero-radius points.
[[nodiscard]] inline ReducedSeries read_series_any(const std::filesystem::path &path) {
    auto tbl = detail::parse_table(path);
    if (detail::has_reduced_columns(tbl.header)) return read_reduced_csv(path);
    return lift_raw(read_csv(path));
}

[[nodiscard]] inline std::string to_csv(const RawSeries &series) {
    std::string s = detail::value_header(series.dim) + "\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        s += std::to_string(t);
        for (double c : series[t].coords()) s += "," + format_double(c);
        s += "\n";
    }
    return s;
}

[[nodiscard]] inline std::string to_csv(const ReducedSeries &series) {
    std::string s = detail::value_header(series.dim) + ",radius,raw_start,raw_count\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        const auto &p = series[t];
        s += std::to_string(t);
        for (double c : p.center.coords()) s += "," + format_double(c);
        s += "," + format_double(p.radius) + "," + std::to_string(p.raw_start) + "," + std::to_string(p.raw_count) +
             "\n";
    }
    return s;
}

[[nodiscard]] inline std::string to_csv(const std::vector<PairDecision> &decisions) {
    std::string s = "index,verdict,pair_distance,cross_checks,pruned_cross_pairs\n";
    for (const auto &d : decisions) {
        s += std::to_string(d.index) + "," + std::string(to_string(d.verdict)) + "," + format_double(d.pair_distance) +
             "," + std::to_string(d.cross_checks) + "," + std::to_string(d.pruned_cross_pairs) + "\n";
    }
    return s;
}

inline void write_csv(const RawSeries &series, const std::filesystem::path &path) {
    write_file_atomic(path, to_csv(series));
}

inline void write_csv(const ReducedSeries &series, const std::filesystem::path &path) {
    write_file_atomic(path, to_csv(series));
}

inline void write_decisions_csv(const std::vector<PairDecision> &decisions, const std::filesystem::path &path) {
    write_file_atomic(path, to_csv(decisions));
}

inline void write_outliers_csv(const std::vector<std::size_t> &indices, const std::filesystem::path &path) {
    std::string s = "index\n";
    for (auto i : indices) s += std::to_string(i) + "\n";
    write_file_atomic(path, s);
}

[[nodiscard]] inline std::vector<std::size_t> read_outliers_csv(const std::filesystem::path &path) {
    auto lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "index") throw DataError(path.string() + ":1: header must be 'index'");
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        detail::LineContext ctx(path, i + 1);
        const auto v = ctx.integer(lines[i]);
        if (v < 0) ctx.fail("negative index");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

} // namespace msmjoin
