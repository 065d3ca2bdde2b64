#include <catch_amalgamated.hpp>

#include <apcrowd/config.hpp>

#include <sstream>

using namespace apcrowd;
using namespace std::chrono_literals;

namespace {

ConfigTree ini(const std::string& text) {
    std::istringstream in(text);
    return read_config(in);
}

}  // namespace

TEST_CASE("an empty config gives the defaults", "[config]") {
    auto cfg = load_simulator_config(ini(""));
    CHECK(cfg.campus.aps.size() == 67);
    CHECK(cfg.population.n_scheduled == 300);
    CHECK(cfg.clock.mean_interval_seconds == 12);
    CHECK(cfg.schedule.block_starts.size() == 4);
    CHECK(cfg.day_start == 8h);
    CHECK(cfg.day_end == 12h);
}

TEST_CASE("schedule and label sections are read", "[config]") {
    auto tree = ini(
        "[schedule]\n"
        "block_starts = 08:00, 09:00\n"
        "class_minutes = 45\n"
        "break_minutes = 15\n"
        "scope_start = 08:00\n"
        "scope_end = 09:59:59\n"
        "excluded_weekdays = sat, sun\n"
        "first_date = 2017-04-03\n"
        "last_date = 2017-04-28\n"
        "[labels]\n"
        "break_tolerance_seconds = 30\n"
        "event_halfwidth_seconds = 90\n");
    auto s = load_schedule(tree);
    CHECK(s.block_starts == std::vector<TimeOfDay>{8h, 9h});
    CHECK(s.class_minutes == 45);
    CHECK(s.scope_end == 9h + 59min + 59s);
    CHECK(s.excluded_weekdays == std::set<unsigned>{0, 6});
    CHECK(format_date(*s.first_date) == "2017-04-03");
    auto spec = load_task_spec(tree, Task::EndOfClass);
    CHECK(spec.task == Task::EndOfClass);
    CHECK(spec.break_tolerance == 30s);
    CHECK(spec.event_halfwidth == 90s);
}

TEST_CASE("a custom campus with a timetable", "[config]") {
    auto cfg = load_simulator_config(ini(
        "[campus]\n"
        "preset = custom\n"
        "ap_ids = hall, roomA, roomB, cafe\n"
        "zones = corridor, classroom, classroom, common\n"
        "adjacency = 0-1 0-2 0-3\n"
        "rooms = 1:30, 2\n"
        "entrances = 0\n"
        "[population]\n"
        "n_scheduled = 2\n"
        "timetable = 0 1 -1 -1; 1 1 0 -1\n"
        "[clock]\n"
        "mean_interval_seconds = 10\n"
        "jitter_seconds = 0\n"));
    CHECK(cfg.campus.aps.size() == 4);
    CHECK(cfg.campus.aps[3].zone == Zone::Common);
    CHECK(cfg.campus.adjacency[0] == std::vector<std::size_t>{1, 2, 3});
    CHECK(cfg.campus.rooms.size() == 2);
    CHECK(cfg.campus.rooms[0].capacity == 30);
    CHECK(cfg.campus.rooms[1].capacity == 40);
    REQUIRE(cfg.population.timetable.size() == 2);
    CHECK(cfg.population.timetable[1] == std::vector<int>{1, 1, 0, -1});
    CHECK(cfg.clock.jitter_seconds == 0);
}

TEST_CASE("bad configs are configuration errors", "[config]") {
    CHECK_THROWS_AS(load_schedule(ini("[schedule]\nblock_starts = 8h\n")), ConfigError);
    CHECK_THROWS_AS(load_schedule(ini("[schedule]\nexcluded_weekdays = funday\n")), ConfigError);
    CHECK_THROWS_AS(load_schedule(ini("[schedule]\nclass_minutes = lots\n")), ConfigError);
    CHECK_THROWS_AS(load_campus(ini("[campus]\npreset = castle\n")), ConfigError);
    CHECK_THROWS_AS(load_campus(ini("[campus]\npreset = custom\nap_ids = a, b\nzones = corridor\n")), ConfigError);
    CHECK_THROWS_AS(load_campus(ini("[campus]\npreset = custom\nap_ids = a\nzones = corridor\nadjacency = 0-5\n")),
                    ConfigError);
    CHECK_THROWS_AS(load_clock(ini("[clock]\nmean_interval_seconds = 2\njitter_seconds = 5\n")), ConfigError);
    CHECK_THROWS_AS(load_simulator_config(ini("[population]\nn_scheduled = 1\ntimetable = 0 99 0 0\n")), ConfigError);
    CHECK_THROWS_AS(load_simulator_config(ini("[simulation]\nday_start = 12:00\nday_end = 08:00\n")), ConfigError);
    CHECK_THROWS_AS(load_task_spec(ini("[labels]\nbreak_tolerance_seconds = -1\n"), Task::Break), ConfigError);
}

TEST_CASE("simulate_days continues sample ids across days", "[config]") {
    auto cfg = load_simulator_config(ini("[population]\nn_scheduled = 20\nn_unscheduled = 5\n"));
    auto days = class_days(cfg.schedule, *parse_date("2017-04-03"), 2);
    auto recs = simulate_days(cfg, days, 4);
    REQUIRE(!recs.empty());
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].sample_id >= recs[i - 1].sample_id);
    CHECK(date_of(recs.front().timestamp) == days[0]);
    CHECK(date_of(recs.back().timestamp) == days[1]);
    SessionHasher h(0);
    CHECK_NOTHROW(anonymize_stream(recs, h));
}
