#pragma once

// Schedule-derived labels for per-minute feature rows.
//
// Task 1 (break): a minute is positive when [minute_start, minute_start + 60 s) meets a
// closed break window [class_end - tol, next_block_start + tol].
// Task 2 (end of class): a minute is positive when its minute_start lies within
// event_halfwidth of a scheduled class end.

#include <apcrowd/error.hpp>
#include <apcrowd/time.hpp>

#include <algorithm>
#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace apcrowd {

struct ScheduleConfig {
    std::vector<TimeOfDay> block_starts{TimeOfDay{8 * 3600 + 30 * 60}, TimeOfDay{9 * 3600 + 30 * 60},
                                        TimeOfDay{10 * 3600 + 30 * 60}, TimeOfDay{11 * 3600 + 30 * 60}};
    int class_minutes = 50;
    int break_minutes = 10;
    TimeOfDay scope_start{8 * 3600 + 30 * 60};
    TimeOfDay scope_end{11 * 3600 + 29 * 60 + 59};  // inclusive
    std::set<unsigned> excluded_weekdays{0, 6, 3};   // c_encoding: Sun, Sat, Wed
    std::optional<Date> first_date;
    std::optional<Date> last_date;

    TimeOfDay class_end(std::size_t block) const {
        return block_starts.at(block) + std::chrono::minutes{class_minutes};
    }

    bool is_excluded(std::chrono::weekday wd) const { return excluded_weekdays.contains(wd.c_encoding()); }

    void validate() const {
        if (class_minutes <= 0) throw ConfigError("class_minutes must be positive");
        if (break_minutes < 0) throw ConfigError("break_minutes must be non-negative");
        for (std::size_t i = 1; i < block_starts.size(); ++i) {
            auto spacing = block_starts[i] - block_starts[i - 1];
            if (spacing != std::chrono::minutes{class_minutes + break_minutes})
                throw ConfigError("block " + format_time_of_day(block_starts[i], false) +
                                  " does not start class_minutes + break_minutes after the previous block");
        }
        if (scope_end < scope_start) throw ConfigError("scope window ends before it starts");
        if (first_date && last_date && std::chrono::sys_days{*last_date} < std::chrono::sys_days{*first_date})
            throw ConfigError("calendar span ends before it starts");
    }
};

enum class Task { Break, EndOfClass };

inline std::string task_name(Task t) { return t == Task::Break ? "break" : "endofclass"; }

inline std::optional<Task> parse_task(std::string_view s) {
    if (s == "break") return Task::Break;
    if (s == "endofclass") return Task::EndOfClass;
    return std::nullopt;
}

struct TaskSpec {
    Task task = Task::Break;
    std::chrono::seconds break_tolerance{60};
    std::chrono::seconds event_halfwidth{150};
};

enum class Label : unsigned char { Negative = 0, Positive = 1 };

inline char label_char(Label l) { return l == Label::Positive ? 'P' : 'N'; }

struct Interval {
    TimeOfDay start;
    TimeOfDay end;  // closed

    bool operator==(const Interval&) const = default;
};

inline bool in_scope(Timestamp minute_start, const ScheduleConfig& schedule) {
    auto date = std::chrono::sys_days{date_of(minute_start)};
    if (schedule.first_date && date < std::chrono::sys_days{*schedule.first_date}) return false;
    if (schedule.last_date && date > std::chrono::sys_days{*schedule.last_date}) return false;
    if (schedule.is_excluded(weekday_of(minute_start))) return false;
    auto tod = time_of_day(minute_start);
    return tod >= schedule.scope_start && tod <= schedule.scope_end;
}

inline std::vector<Interval> break_windows(const ScheduleConfig& schedule, std::chrono::seconds tolerance) {
    std::vector<Interval> out;
    for (std::size_t i = 0; i + 1 < schedule.block_starts.size(); ++i)
        out.push_back({schedule.class_end(i) - tolerance, schedule.block_starts[i + 1] + tolerance});
    return out;
}

namespace detail {

inline void require_scope(Timestamp minute_start, const ScheduleConfig& schedule) {
    if (!in_scope(minute_start, schedule))
        throw DataError("minute " + format_timestamp(minute_start) + " is outside the labeling scope");
}

}  // namespace detail

inline Label label_break(Timestamp minute_start, const ScheduleConfig& schedule, const TaskSpec& spec) {
    detail::require_scope(minute_start, schedule);
    const auto lo = time_of_day(minute_start);
    const auto hi = lo + std::chrono::seconds{60};  // exclusive
    for (const auto& w : break_windows(schedule, spec.break_tolerance))
        if (lo <= w.end && hi > w.start) return Label::Positive;
    return Label::Negative;
}

inline Label label_end_of_class(Timestamp minute_start, const ScheduleConfig& schedule, const TaskSpec& spec) {
    detail::require_scope(minute_start, schedule);
    const auto tod = time_of_day(minute_start);
    for (std::size_t i = 0; i < schedule.block_starts.size(); ++i) {
        auto d = tod - schedule.class_end(i);
        if (d < std::chrono::seconds{0}) d = -d;
        if (d <= spec.event_halfwidth) return Label::Positive;
    }
    return Label::Negative;
}

inline Label label_minute(Timestamp minute_start, const ScheduleConfig& schedule, const TaskSpec& spec) {
    return spec.task == Task::Break ? label_break(minute_start, schedule, spec)
                                    : label_end_of_class(minute_start, schedule, spec);
}

}  // namespace apcrowd
