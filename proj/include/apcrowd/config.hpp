#pragma once

// INI-style configuration for schedules and the simulator. One file may carry every
// section; each loader reads only its own.
//
//   [schedule]   block_starts, class_minutes, break_minutes, scope_start, scope_end,
//                excluded_weekdays, first_date, last_date
//   [labels]     break_tolerance_seconds, event_halfwidth_seconds
//   [campus]     preset = default | custom; room_capacity; for custom: ap_ids, zones,
//                rooms (home_ap:capacity), adjacency (a-b pairs), entrances
//   [population] every PopulationConfig field; timetable = rows separated by ';'
//   [clock]      mean_interval_seconds, jitter_seconds
//   [simulation] day_start, day_end (daily window used when simulating whole mornings)

#include <apcrowd/error.hpp>
#include <apcrowd/labeling.hpp>
#include <apcrowd/simulator.hpp>
#include <apcrowd/time.hpp>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <istream>
#include <string>
#include <vector>

namespace apcrowd {

using ConfigTree = boost::property_tree::ptree;

inline ConfigTree read_config(std::istream& in) {
    ConfigTree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return tree;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s, const char* seps = ",") {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(seps), boost::token_compress_on);
    std::vector<std::string> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

template <typename T>
T get_or(const ConfigTree& tree, const std::string& path, T fallback) {
    if (!tree.get_optional<std::string>(path)) return fallback;
    // get_optional<T> reports an untranslatable value as empty rather than throwing.
    auto v = tree.get_optional<T>(path);
    if (!v) throw ConfigError("config: invalid value for '" + path + "'");
    return *v;
}

inline TimeOfDay require_time(const std::string& s, const std::string& key) {
    auto t = parse_time_of_day(s);
    if (!t) throw ConfigError("config: '" + key + "' expects HH:MM or HH:MM:SS, got '" + s + "'");
    return *t;
}

inline Date require_date(const std::string& s, const std::string& key) {
    auto d = parse_date(s);
    if (!d) throw ConfigError("config: '" + key + "' expects YYYY-MM-DD, got '" + s + "'");
    return *d;
}

inline std::size_t to_index(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects non-negative integers, got '" + s + "'");
    }
}

}  // namespace detail

inline ScheduleConfig load_schedule(const ConfigTree& tree) {
    ScheduleConfig s;
    if (auto v = tree.get_optional<std::string>("schedule.block_starts")) {
        s.block_starts.clear();
        for (const auto& t : detail::split_list(*v)) s.block_starts.push_back(detail::require_time(t, "block_starts"));
    }
    s.class_minutes = detail::get_or(tree, "schedule.class_minutes", s.class_minutes);
    s.break_minutes = detail::get_or(tree, "schedule.break_minutes", s.break_minutes);
    if (auto v = tree.get_optional<std::string>("schedule.scope_start")) s.scope_start = detail::require_time(*v, "scope_start");
    if (auto v = tree.get_optional<std::string>("schedule.scope_end")) s.scope_end = detail::require_time(*v, "scope_end");
    if (auto v = tree.get_optional<std::string>("schedule.excluded_weekdays")) {
        s.excluded_weekdays.clear();
        for (const auto& d : detail::split_list(*v)) {
            auto wd = parse_weekday(d);
            if (!wd) throw ConfigError("config: unknown weekday '" + d + "'");
            s.excluded_weekdays.insert(wd->c_encoding());
        }
    }
    if (auto v = tree.get_optional<std::string>("schedule.first_date")) s.first_date = detail::require_date(*v, "first_date");
    if (auto v = tree.get_optional<std::string>("schedule.last_date")) s.last_date = detail::require_date(*v, "last_date");
    s.validate();
    return s;
}

inline TaskSpec load_task_spec(const ConfigTree& tree, Task task) {
    TaskSpec spec;
    spec.task = task;
    spec.break_tolerance = std::chrono::seconds{detail::get_or<long long>(tree, "labels.break_tolerance_seconds", 60)};
    spec.event_halfwidth = std::chrono::seconds{detail::get_or<long long>(tree, "labels.event_halfwidth_seconds", 150)};
    if (spec.break_tolerance.count() < 0 || spec.event_halfwidth.count() < 0)
        throw ConfigError("config: label tolerances must be non-negative");
    return spec;
}

inline CampusModel load_campus(const ConfigTree& tree) {
    const auto preset = detail::get_or<std::string>(tree, "campus.preset", "default");
    const int capacity = detail::get_or(tree, "campus.room_capacity", 40);
    if (capacity <= 0) throw ConfigError("config: room_capacity must be positive");
    if (preset == "default") return default_campus(capacity);
    if (preset != "custom") throw ConfigError("config: unknown campus preset '" + preset + "'");

    CampusModel c;
    auto ids = detail::split_list(detail::get_or<std::string>(tree, "campus.ap_ids", ""));
    auto zones = detail::split_list(detail::get_or<std::string>(tree, "campus.zones", ""));
    if (ids.empty()) throw ConfigError("config: custom campus needs ap_ids");
    if (zones.size() != ids.size()) throw ConfigError("config: zones must list one zone per AP");
    for (std::size_t i = 0; i < ids.size(); ++i) {
        Zone z;
        if (zones[i] == "classroom") z = Zone::Classroom;
        else if (zones[i] == "corridor") z = Zone::Corridor;
        else if (zones[i] == "common") z = Zone::Common;
        else throw ConfigError("config: unknown zone '" + zones[i] + "'");
        c.aps.push_back({ids[i], z});
    }
    c.adjacency.assign(ids.size(), {});
    for (const auto& edge : detail::split_list(detail::get_or<std::string>(tree, "campus.adjacency", ""), ", ")) {
        auto ends = detail::split_list(edge, "-");
        if (ends.size() != 2) throw ConfigError("config: adjacency edge '" + edge + "' must be a-b");
        auto a = detail::to_index(ends[0], "adjacency"), b = detail::to_index(ends[1], "adjacency");
        if (a >= ids.size() || b >= ids.size()) throw ConfigError("config: adjacency edge '" + edge + "' out of range");
        c.adjacency[a].push_back(b);
        c.adjacency[b].push_back(a);
    }
    for (auto& adj : c.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    for (const auto& room : detail::split_list(detail::get_or<std::string>(tree, "campus.rooms", ""))) {
        auto parts = detail::split_list(room, ":");
        Room r{detail::to_index(parts.at(0), "rooms"), capacity};
        if (parts.size() > 1) r.capacity = static_cast<int>(detail::to_index(parts[1], "rooms"));
        c.rooms.push_back(r);
    }
    for (const auto& e : detail::split_list(detail::get_or<std::string>(tree, "campus.entrances", "0")))
        c.entrances.push_back(detail::to_index(e, "entrances"));
    c.validate();
    return c;
}

inline PopulationConfig load_population(const ConfigTree& tree) {
    PopulationConfig p;
    p.n_scheduled = detail::get_or(tree, "population.n_scheduled", p.n_scheduled);
    p.n_unscheduled = detail::get_or(tree, "population.n_unscheduled", p.n_unscheduled);
    p.p_wifi_off = detail::get_or(tree, "population.p_wifi_off", p.p_wifi_off);
    p.p_dropout_per_sweep = detail::get_or(tree, "population.p_dropout_per_sweep", p.p_dropout_per_sweep);
    p.p_pingpong = detail::get_or(tree, "population.p_pingpong", p.p_pingpong);
    p.p_misassoc = detail::get_or(tree, "population.p_misassoc", p.p_misassoc);
    p.move_lag_mean_seconds = detail::get_or(tree, "population.move_lag_mean_seconds", p.move_lag_mean_seconds);
    p.move_lag_spread_seconds = detail::get_or(tree, "population.move_lag_spread_seconds", p.move_lag_spread_seconds);
    p.p_attend = detail::get_or(tree, "population.p_attend", p.p_attend);
    p.p_continue = detail::get_or(tree, "population.p_continue", p.p_continue);
    p.p_break_when_continuing = detail::get_or(tree, "population.p_break_when_continuing", p.p_break_when_continuing);
    p.hop_seconds = detail::get_or(tree, "population.hop_seconds", p.hop_seconds);
    p.wander_dwell_min_seconds = detail::get_or(tree, "population.wander_dwell_min_seconds", p.wander_dwell_min_seconds);
    p.wander_dwell_max_seconds = detail::get_or(tree, "population.wander_dwell_max_seconds", p.wander_dwell_max_seconds);
    for (const auto& row : detail::split_list(detail::get_or<std::string>(tree, "population.timetable", ""), ";")) {
        std::vector<int> blocks;
        for (const auto& cell : detail::split_list(row, ", ")) {
            try {
                blocks.push_back(std::stoi(cell));
            } catch (const std::exception&) {
                throw ConfigError("config: timetable entry '" + cell + "' is not an integer");
            }
        }
        p.timetable.push_back(std::move(blocks));
    }
    return p;
}

inline SamplingClock load_clock(const ConfigTree& tree) {
    SamplingClock c;
    c.mean_interval_seconds = detail::get_or(tree, "clock.mean_interval_seconds", c.mean_interval_seconds);
    c.jitter_seconds = detail::get_or(tree, "clock.jitter_seconds", c.jitter_seconds);
    c.validate();
    return c;
}

struct SimulatorConfig {
    CampusModel campus = default_campus();
    PopulationConfig population;
    SamplingClock clock;
    ScheduleConfig schedule;
    TimeOfDay day_start{8 * 3600};
    TimeOfDay day_end{12 * 3600};
};

inline SimulatorConfig load_simulator_config(const ConfigTree& tree) {
    SimulatorConfig cfg{load_campus(tree), load_population(tree), load_clock(tree), load_schedule(tree)};
    if (auto v = tree.get_optional<std::string>("simulation.day_start")) cfg.day_start = detail::require_time(*v, "day_start");
    if (auto v = tree.get_optional<std::string>("simulation.day_end")) cfg.day_end = detail::require_time(*v, "day_end");
    if (!(cfg.day_start < cfg.day_end)) throw ConfigError("config: day_start must precede day_end");
    cfg.population.validate(cfg.campus, cfg.schedule);
    return cfg;
}

// The next `count` class days (weekdays not excluded, inside the calendar) from `from`.
inline std::vector<Date> class_days(const ScheduleConfig& schedule, Date from, std::size_t count) {
    std::vector<Date> out;
    for (auto d = std::chrono::sys_days{from}; out.size() < count; d += std::chrono::days{1}) {
        if (schedule.last_date && d > std::chrono::sys_days{*schedule.last_date}) break;
        if (!schedule.is_excluded(std::chrono::weekday{d})) out.push_back(Date{d});
    }
    return out;
}

// Simulates the daily window [day_start, day_end) on each date, with continuing sample ids.
inline std::vector<RawRecord> simulate_days(const SimulatorConfig& cfg, const std::vector<Date>& days, std::uint64_t seed) {
    std::vector<RawRecord> out;
    std::uint64_t next_id = 1;
    for (const auto& d : days) {
        auto recs = simulate_period(cfg.campus, cfg.schedule, cfg.population, cfg.clock, make_timestamp(d, cfg.day_start),
                                    make_timestamp(d, cfg.day_end), seed, next_id, &next_id);
        out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return out;
}

}  // namespace apcrowd
