#pragma once

// AP association logs: one row per (sweep, device, AP) observation.
//
//   sample_id,user_hash,ap_mac,timestamp
//   1,5bac0b,e0ed7226,2017-04-07 15:51:07
//
// Raw (pre-anonymization) logs use `user_id` as the identity column and may carry extra
// identity columns (device model, etc.) after the four fixed ones; those are dropped at
// ingestion.

#include <apcrowd/error.hpp>
#include <apcrowd/rng.hpp>
#include <apcrowd/time.hpp>

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace apcrowd {

struct ConnectionRecord {
    std::uint64_t sample_id = 0;
    std::string device_hash;
    std::string ap_id;
    Timestamp timestamp{};

    bool operator==(const ConnectionRecord&) const = default;
};

struct RawRecord {
    std::uint64_t sample_id = 0;
    std::string device_field;
    std::string ap_id;
    Timestamp timestamp{};

    bool operator==(const RawRecord&) const = default;
};

enum class ParseMode { Strict, Lenient };

struct RowError {
    std::size_t line = 0;
    std::string message;
};

template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    std::vector<RowError> errors;  // only populated in lenient mode
};

inline constexpr std::string_view kLogHeader = "sample_id,user_hash,ap_mac,timestamp";
inline constexpr std::string_view kRawLogHeader = "sample_id,user_id,ap_mac,timestamp";

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view chomp(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

struct RowFields {
    std::uint64_t sample_id;
    std::string identity;
    std::string ap_id;
    Timestamp timestamp;
};

// Returns an error message, or empty on success.
inline std::string parse_row(std::string_view line, bool allow_extra, RowFields& out) {
    auto fields = split_commas(line);
    if (fields.size() < 4 || (!allow_extra && fields.size() != 4))
        return "expected 4 columns, found " + std::to_string(fields.size());
    for (std::size_t i = 0; i < 4; ++i)
        if (fields[i].empty()) return "empty field in column " + std::to_string(i + 1);
    std::uint64_t id = 0;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size())
        return "invalid sample_id '" + std::string(fields[0]) + "'";
    auto ts = parse_timestamp(fields[3]);
    if (!ts) return "invalid timestamp '" + std::string(fields[3]) + "'";
    out = RowFields{id, std::string(fields[1]), std::string(fields[2]), *ts};
    return {};
}

template <typename Record, typename Make>
ParseResult<Record> parse_csv(std::istream& in, ParseMode mode, std::string_view identity_column,
                              bool allow_extra, Make make) {
    ParseResult<Record> result;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) return result;
    ++lineno;
    {
        auto header = split_commas(chomp(line));
        bool ok = header.size() >= 4 && (allow_extra || header.size() == 4) && header[0] == "sample_id" &&
                  header[1] == identity_column && header[2] == "ap_mac" && header[3] == "timestamp";
        if (!ok)
            throw ParseError(1, "unexpected header '" + std::string(chomp(line)) + "', expected 'sample_id," +
                                    std::string(identity_column) + ",ap_mac,timestamp'");
    }
    while (std::getline(in, line)) {
        ++lineno;
        auto body = chomp(line);
        if (body.empty()) continue;
        RowFields f;
        auto err = parse_row(body, allow_extra, f);
        if (!err.empty()) {
            if (mode == ParseMode::Strict) throw ParseError(lineno, err);
            result.errors.push_back({lineno, err});
            continue;
        }
        result.records.push_back(make(std::move(f)));
    }
    return result;
}

}  // namespace detail

inline ParseResult<ConnectionRecord> parse_log_csv(std::istream& in, ParseMode mode = ParseMode::Lenient) {
    return detail::parse_csv<ConnectionRecord>(in, mode, "user_hash", false, [](detail::RowFields f) {
        return ConnectionRecord{f.sample_id, std::move(f.identity), std::move(f.ap_id), f.timestamp};
    });
}

inline ParseResult<RawRecord> parse_raw_csv(std::istream& in, ParseMode mode = ParseMode::Lenient) {
    return detail::parse_csv<RawRecord>(in, mode, "user_id", true, [](detail::RowFields f) {
        return RawRecord{f.sample_id, std::move(f.identity), std::move(f.ap_id), f.timestamp};
    });
}

inline void write_log_csv(std::ostream& out, const std::vector<ConnectionRecord>& records) {
    out << kLogHeader << '\n';
    for (const auto& r : records)
        out << r.sample_id << ',' << r.device_hash << ',' << r.ap_id << ',' << format_timestamp(r.timestamp) << '\n';
}

inline void write_raw_csv(std::ostream& out, const std::vector<RawRecord>& records) {
    out << kRawLogHeader << '\n';
    for (const auto& r : records)
        out << r.sample_id << ',' << r.device_field << ',' << r.ap_id << ',' << format_timestamp(r.timestamp) << '\n';
}

// Session-scoped random tokens. A device keeps its token while it appears in consecutive
// sweeps; once it misses a sweep its token is forgotten and a reconnect draws a fresh one.
// Only the live identity -> token direction is held, and only for the latest sweep.
class SessionHasher {
public:
    static constexpr std::size_t kTokenBytes = 16;

    explicit SessionHasher(std::uint64_t seed = 0) : rng_(seed) {}

    // Opens sweep `sample_id`. Sessions not continued from sweep `sample_id - 1` are dropped
    // as soon as the sweep is closed by the next call.
    void begin_sweep(std::uint64_t sample_id) {
        if (in_sweep_) end_sweep();
        if (!(has_last_ && last_sample_ + 1 == sample_id)) previous_.clear();
        current_sample_ = sample_id;
        in_sweep_ = true;
    }

    const std::string& token_for(const std::string& identity) {
        auto cur = current_.find(identity);
        if (cur != current_.end()) return cur->second;
        auto prev = previous_.find(identity);
        std::string token = prev != previous_.end() ? prev->second : fresh_token(identity);
        return current_.emplace(identity, std::move(token)).first->second;
    }

    void end_sweep() {
        if (!in_sweep_) return;
        previous_ = std::move(current_);
        current_.clear();
        last_sample_ = current_sample_;
        has_last_ = true;
        in_sweep_ = false;
    }

    std::size_t live_sessions() const noexcept { return in_sweep_ ? current_.size() : previous_.size(); }

    // Draws a token that never contains the identity it stands for.
    std::string fresh_token(std::string_view identity = {}) {
        static constexpr char hex[] = "0123456789abcdef";
        for (;;) {
            std::string token;
            token.reserve(kTokenBytes * 2);
            for (std::size_t i = 0; i < kTokenBytes; i += 8) {
                std::uint64_t word = rng_();
                for (std::size_t b = 0; b < 8 && i + b < kTokenBytes; ++b) {
                    auto byte = static_cast<unsigned>((word >> (8 * b)) & 0xff);
                    token.push_back(hex[byte >> 4]);
                    token.push_back(hex[byte & 0xf]);
                }
            }
            if (identity.empty() || token.find(identity) == std::string::npos) return token;
        }
    }

private:
    Rng rng_;
    std::unordered_map<std::string, std::string> previous_;
    std::unordered_map<std::string, std::string> current_;
    std::uint64_t last_sample_ = 0;
    std::uint64_t current_sample_ = 0;
    bool has_last_ = false;
    bool in_sweep_ = false;
};

// Replaces every identity by its session token. Rows of one sweep must be contiguous.
inline std::vector<ConnectionRecord> anonymize_stream(const std::vector<RawRecord>& records, SessionHasher& hasher) {
    std::vector<ConnectionRecord> out;
    out.reserve(records.size());
    std::set<std::uint64_t> closed;
    bool open = false;
    std::uint64_t current = 0;
    for (const auto& r : records) {
        if (!open || r.sample_id != current) {
            if (open) closed.insert(current);
            if (closed.contains(r.sample_id))
                throw DataError("sample_id " + std::to_string(r.sample_id) + " is not contiguous in the stream");
            hasher.begin_sweep(r.sample_id);
            current = r.sample_id;
            open = true;
        }
        out.push_back(ConnectionRecord{r.sample_id, hasher.token_for(r.device_field), r.ap_id, r.timestamp});
    }
    hasher.end_sweep();
    return out;
}

struct Violation {
    std::size_t row = 0;  // zero-based record index
    std::string message;
};

struct ValidationReport {
    std::size_t rows = 0;
    std::size_t sweeps = 0;
    std::size_t distinct_aps = 0;
    std::size_t distinct_tokens = 0;
    std::vector<Violation> violations;

    std::string render() const {
        std::ostringstream os;
        os << "rows " << rows << '\n'
           << "sweeps " << sweeps << '\n'
           << "distinct_aps " << distinct_aps << '\n'
           << "distinct_tokens " << distinct_tokens << '\n'
           << "violations " << violations.size() << '\n';
        for (const auto& v : violations) os << "  row " << v.row << ": " << v.message << '\n';
        return os.str();
    }
};

inline ValidationReport validate_records(const std::vector<ConnectionRecord>& records) {
    ValidationReport rep;
    rep.rows = records.size();
    std::set<std::string_view> aps, tokens;
    std::map<std::uint64_t, Timestamp> sweep_time;
    bool have_prev = false;
    std::uint64_t prev_id = 0;
    Timestamp prev_ts{};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.device_hash.empty()) rep.violations.push_back({i, "empty device hash"});
        if (r.ap_id.empty()) rep.violations.push_back({i, "empty ap id"});
        aps.insert(r.ap_id);
        tokens.insert(r.device_hash);
        auto [it, inserted] = sweep_time.emplace(r.sample_id, r.timestamp);
        if (!inserted && it->second != r.timestamp)
            rep.violations.push_back({i, "sample_id " + std::to_string(r.sample_id) + " has timestamp " +
                                             format_timestamp(r.timestamp) + ", sweep started at " +
                                             format_timestamp(it->second)});
        if (have_prev) {
            if (r.sample_id < prev_id)
                rep.violations.push_back({i, "sample_id " + std::to_string(r.sample_id) + " follows " +
                                                 std::to_string(prev_id)});
            else if (r.sample_id > prev_id && r.timestamp < prev_ts)
                rep.violations.push_back({i, "sweep " + std::to_string(r.sample_id) + " is timestamped before sweep " +
                                                 std::to_string(prev_id)});
        }
        have_prev = true;
        prev_id = r.sample_id;
        prev_ts = r.timestamp;
    }
    rep.sweeps = sweep_time.size();
    rep.distinct_aps = aps.size();
    rep.distinct_tokens = tokens.size();
    return rep;
}

}  // namespace apcrowd
