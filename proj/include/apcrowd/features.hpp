#pragma once

// Per-sweep device counts per AP, aggregated into per-minute statistics and flattened into
// one feature row per minute: for each AP in roster order, (max, min, mean, std, var).

#include <apcrowd/error.hpp>
#include <apcrowd/logmodel.hpp>
#include <apcrowd/matrix.hpp>
#include <apcrowd/time.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace apcrowd {

struct ApCountSample {
    std::uint64_t sample_id = 0;
    Timestamp timestamp{};
    std::map<std::string, int> counts;  // APs absent from the sweep count 0

    bool operator==(const ApCountSample&) const = default;
};

using ApRoster = std::vector<std::string>;

struct ApStats {
    double max = 0, min = 0, mean = 0, std = 0, var = 0;

    bool operator==(const ApStats&) const = default;
};

inline constexpr std::size_t kStatsPerAp = 5;
inline constexpr std::array<const char*, kStatsPerAp> kStatNames{"max", "min", "mean", "std", "var"};

struct MinuteFeatureRow {
    Timestamp minute_start{};
    std::size_t n_sweeps = 0;
    std::vector<ApStats> stats;  // roster order

    bool operator==(const MinuteFeatureRow&) const = default;
};

struct FeatureMatrix {
    Matrix values;
    std::vector<Timestamp> minute_starts;

    std::size_t rows() const noexcept { return values.rows(); }
};

inline std::vector<ApCountSample> count_per_sweep(const std::vector<ConnectionRecord>& records) {
    std::vector<ApCountSample> out;
    std::map<std::string, std::set<std::string_view>> devices;
    auto flush = [&](std::uint64_t id, Timestamp ts) {
        ApCountSample s{id, ts, {}};
        for (auto& [ap, toks] : devices) s.counts.emplace(ap, static_cast<int>(toks.size()));
        out.push_back(std::move(s));
        devices.clear();
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i > 0 && r.sample_id != records[i - 1].sample_id) flush(records[i - 1].sample_id, records[i - 1].timestamp);
        devices[r.ap_id].insert(r.device_hash);
    }
    if (!records.empty()) flush(records.back().sample_id, records.back().timestamp);
    return out;
}

inline ApRoster build_roster(const std::vector<ApCountSample>& samples) {
    std::set<std::string> aps;
    for (const auto& s : samples)
        for (const auto& [ap, _] : s.counts) aps.insert(ap);
    return {aps.begin(), aps.end()};
}

// Population statistics over a window of counts.
inline ApStats window_stats(std::span<const double> counts) {
    ApStats st;
    if (counts.empty()) return st;
    st.max = *std::max_element(counts.begin(), counts.end());
    st.min = *std::min_element(counts.begin(), counts.end());
    double sum = 0;
    for (double c : counts) sum += c;
    st.mean = sum / static_cast<double>(counts.size());
    double ss = 0;
    for (double c : counts) ss += (c - st.mean) * (c - st.mean);
    st.var = ss / static_cast<double>(counts.size());
    st.std = std::sqrt(st.var);
    return st;
}

inline std::vector<MinuteFeatureRow> aggregate_minutes(const std::vector<ApCountSample>& samples,
                                                       const ApRoster& roster) {
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < roster.size(); ++i) column.emplace(roster[i], i);

    std::vector<MinuteFeatureRow> out;
    std::vector<std::vector<double>> window(roster.size());
    Timestamp minute{};
    std::size_t n = 0;
    auto flush = [&] {
        MinuteFeatureRow row{minute, n, {}};
        row.stats.reserve(roster.size());
        for (auto& w : window) {
            row.stats.push_back(window_stats(w));
            w.clear();
        }
        out.push_back(std::move(row));
        n = 0;
    };
    for (const auto& s : samples) {
        auto m = floor_minute(s.timestamp);
        if ((n > 0 || !out.empty()) && m < minute)
            throw DataError("samples are not in time order at " + format_timestamp(s.timestamp));
        if (n > 0 && m != minute) flush();
        minute = m;
        for (auto& w : window) w.push_back(0.0);
        for (const auto& [ap, count] : s.counts) {
            auto it = column.find(ap);
            if (it == column.end()) throw DataError("AP '" + ap + "' is missing from the roster");
            window[it->second].back() = count;
        }
        ++n;
    }
    if (n > 0) flush();
    return out;
}

inline FeatureMatrix assemble_matrix(const std::vector<MinuteFeatureRow>& rows, const ApRoster& roster) {
    FeatureMatrix fm;
    fm.values = Matrix(0, kStatsPerAp * roster.size());
    std::vector<double> buf(kStatsPerAp * roster.size());
    for (const auto& r : rows) {
        if (r.stats.size() != roster.size())
            throw DataError("minute " + format_timestamp(r.minute_start) + " covers " + std::to_string(r.stats.size()) +
                            " APs, roster has " + std::to_string(roster.size()));
        for (std::size_t a = 0; a < roster.size(); ++a) {
            const auto& s = r.stats[a];
            std::copy_n(std::array<double, kStatsPerAp>{s.max, s.min, s.mean, s.std, s.var}.begin(), kStatsPerAp,
                        buf.begin() + static_cast<std::ptrdiff_t>(kStatsPerAp * a));
        }
        fm.values.append_row(buf);
        fm.minute_starts.push_back(r.minute_start);
    }
    return fm;
}

// Records -> counts -> roster -> minutes -> matrix.
inline FeatureMatrix featurize(const std::vector<ConnectionRecord>& records, ApRoster& roster_out) {
    auto samples = count_per_sweep(records);
    roster_out = build_roster(samples);
    return assemble_matrix(aggregate_minutes(samples, roster_out), roster_out);
}

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(line, "invalid number '" + std::string(s) + "'");
    return v;
}

}  // namespace detail

inline std::vector<std::string> feature_column_names(std::size_t n_aps) {
    std::vector<std::string> names;
    for (std::size_t a = 0; a < n_aps; ++a)
        for (auto stat : kStatNames) names.push_back("ap" + std::to_string(a) + "_" + stat);
    return names;
}

inline void write_roster(std::ostream& out, const ApRoster& roster) {
    for (const auto& ap : roster) out << ap << '\n';
}

inline ApRoster read_roster(std::istream& in) {
    ApRoster roster;
    std::string line;
    while (std::getline(in, line)) {
        auto s = detail::chomp(line);
        if (!s.empty()) roster.emplace_back(s);
    }
    return roster;
}

// `minute_start,ap0_max,...[,label]`. Labels, when given, are written as P/N.
inline void write_feature_csv(std::ostream& out, const FeatureMatrix& fm, const std::vector<char>* labels = nullptr) {
    out << "minute_start";
    for (const auto& name : feature_column_names(fm.values.cols() / kStatsPerAp)) out << ',' << name;
    if (labels) out << ",label";
    out << '\n';
    for (std::size_t r = 0; r < fm.rows(); ++r) {
        out << format_timestamp(fm.minute_starts[r], true);
        for (double v : fm.values.row(r)) out << ',' << detail::format_double(v);
        if (labels) out << ',' << (*labels)[r];
        out << '\n';
    }
}

// Reads a feature CSV; fills `labels` when the file has a trailing `label` column.
inline FeatureMatrix read_feature_csv(std::istream& in, std::vector<char>* labels = nullptr) {
    FeatureMatrix fm;
    std::string line;
    if (!std::getline(in, line)) throw DataError("feature file is empty");
    auto header = detail::split_commas(detail::chomp(line));
    if (header.empty() || header[0] != "minute_start") throw ParseError(1, "feature header must start with minute_start");
    bool has_label = header.back() == "label";
    std::size_t width = header.size() - 1 - (has_label ? 1 : 0);
    if (width % kStatsPerAp != 0) throw ParseError(1, "feature column count is not a multiple of 5");
    auto expected = feature_column_names(width / kStatsPerAp);
    for (std::size_t i = 0; i < width; ++i)
        if (header[i + 1] != expected[i]) throw ParseError(1, "unexpected column '" + std::string(header[i + 1]) + "'");
    fm.values = Matrix(0, width);
    std::vector<double> buf(width);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = detail::chomp(line);
        if (body.empty()) continue;
        auto fields = detail::split_commas(body);
        if (fields.size() != header.size())
            throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns");
        auto ts = parse_timestamp(fields[0]);
        if (!ts) throw ParseError(lineno, "invalid minute_start '" + std::string(fields[0]) + "'");
        for (std::size_t i = 0; i < width; ++i) buf[i] = detail::parse_double(fields[i + 1], lineno);
        if (has_label && labels) {
            auto l = fields.back();
            if (l != "P" && l != "N") throw ParseError(lineno, "label must be P or N");
            labels->push_back(l[0]);
        }
        fm.values.append_row(buf);
        fm.minute_starts.push_back(*ts);
    }
    if (labels && !has_label) throw DataError("feature file has no label column");
    return fm;
}

}  // namespace apcrowd
