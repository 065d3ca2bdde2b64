#pragma once

// Schedule-driven synthetic association logs.
//
// Scheduled people attend classes in rooms during blocks and walk between rooms, common
// zones and the building entrances during breaks, each departing after a personal lag.
// Unscheduled people random-walk over corridors and common zones. Per-sweep noise models
// missed observations (dropout), ping-pong hand-overs to a neighbour AP, sticky association
// to a neighbour AP (mis-association) and devices with WiFi switched off.

#include <apcrowd/error.hpp>
#include <apcrowd/labeling.hpp>
#include <apcrowd/logmodel.hpp>
#include <apcrowd/rng.hpp>
#include <apcrowd/time.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <string>
#include <vector>

namespace apcrowd {

enum class Zone { Classroom, Corridor, Common };

inline std::string zone_name(Zone z) {
    switch (z) {
        case Zone::Classroom: return "classroom";
        case Zone::Corridor: return "corridor";
        case Zone::Common: return "common";
    }
    return "?";
}

struct AccessPoint {
    std::string id;
    Zone zone = Zone::Corridor;
};

struct Room {
    std::size_t home_ap = 0;
    int capacity = 40;
};

struct CampusModel {
    std::vector<AccessPoint> aps;
    std::vector<Room> rooms;
    std::vector<std::vector<std::size_t>> adjacency;
    std::vector<std::size_t> entrances;  // where people enter and leave the monitored area

    void validate() const {
        if (aps.empty()) throw ConfigError("campus needs at least one AP");
        if (adjacency.size() != aps.size()) throw ConfigError("adjacency list must have one entry per AP");
        for (std::size_t a = 0; a < adjacency.size(); ++a)
            for (auto b : adjacency[a]) {
                if (b >= aps.size()) throw ConfigError("adjacency of AP " + std::to_string(a) + " names unknown AP");
                if (std::find(adjacency[b].begin(), adjacency[b].end(), a) == adjacency[b].end())
                    throw ConfigError("adjacency is not symmetric between APs " + std::to_string(a) + " and " +
                                      std::to_string(b));
            }
        for (std::size_t r = 0; r < rooms.size(); ++r)
            if (rooms[r].home_ap >= aps.size())
                throw ConfigError("room " + std::to_string(r) + " has invalid home AP index");
        for (auto e : entrances)
            if (e >= aps.size()) throw ConfigError("entrance index out of range");
    }

    std::size_t entrance_or_first() const { return entrances.empty() ? 0 : entrances.front(); }

    // Shortest hand-over path from `from` to `to`, both included. Neighbours are explored
    // in ascending index order, so the path is deterministic. Unreachable targets yield
    // the two-node jump {from, to}.
    std::vector<std::size_t> path(std::size_t from, std::size_t to) const {
        if (from == to) return {from};
        std::vector<std::size_t> parent(aps.size(), std::numeric_limits<std::size_t>::max());
        std::deque<std::size_t> queue{from};
        parent[from] = from;
        while (!queue.empty()) {
            auto a = queue.front();
            queue.pop_front();
            if (a == to) break;
            auto next = adjacency[a];
            std::sort(next.begin(), next.end());
            for (auto b : next)
                if (parent[b] == std::numeric_limits<std::size_t>::max()) {
                    parent[b] = a;
                    queue.push_back(b);
                }
        }
        if (parent[to] == std::numeric_limits<std::size_t>::max()) return {from, to};
        std::vector<std::size_t> out{to};
        while (out.back() != from) out.push_back(parent[out.back()]);
        std::reverse(out.begin(), out.end());
        return out;
    }

    std::vector<std::size_t> aps_in(std::initializer_list<Zone> zones) const {
        std::vector<std::size_t> out;
        for (std::size_t a = 0; a < aps.size(); ++a)
            if (std::find(zones.begin(), zones.end(), aps[a].zone) != zones.end()) out.push_back(a);
        return out;
    }
};

// Synthetic MAC-like AP identifier (12 hex digits), stable per index.
inline std::string synthetic_ap_id(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%012llx",
                  static_cast<unsigned long long>(splitmix64(index + 0x5eedULL) & 0xffffffffffffULL));
    return buf;
}

// Two floors, each a corridor spine with classrooms and common areas hanging off it;
// stairs join the spines at both ends and vertically stacked classrooms hear each other.
// 12 corridor + 14 classroom APs per floor, 8 common APs on floor 0 and 7 on floor 1: 67 APs.
inline CampusModel default_campus(int room_capacity = 40) {
    CampusModel c;
    constexpr int kFloors = 2;
    constexpr std::size_t kCorridor = 12, kClassrooms = 14;
    const std::size_t commons[kFloors] = {8, 7};
    std::vector<std::vector<std::size_t>> corridor(kFloors), classroom(kFloors);
    auto add = [&](Zone z) {
        c.aps.push_back({synthetic_ap_id(c.aps.size()), z});
        c.adjacency.emplace_back();
        return c.aps.size() - 1;
    };
    auto link = [&](std::size_t a, std::size_t b) {
        c.adjacency[a].push_back(b);
        c.adjacency[b].push_back(a);
    };
    for (int f = 0; f < kFloors; ++f) {
        for (std::size_t i = 0; i < kCorridor; ++i) {
            corridor[f].push_back(add(Zone::Corridor));
            if (i > 0) link(corridor[f][i - 1], corridor[f][i]);
        }
        for (std::size_t i = 0; i < kClassrooms; ++i) {
            auto ap = add(Zone::Classroom);
            classroom[f].push_back(ap);
            link(ap, corridor[f][(i * kCorridor) / kClassrooms]);
            if (i > 0 && (i % 2) == 1) link(ap, classroom[f][i - 1]);
            c.rooms.push_back({ap, room_capacity});
        }
        for (std::size_t i = 0; i < commons[f]; ++i) {
            auto ap = add(Zone::Common);
            link(ap, corridor[f][(i * kCorridor) / commons[f] + 1 < kCorridor ? (i * kCorridor) / commons[f] + 1
                                                                                : kCorridor - 1]);
        }
    }
    link(corridor[0].front(), corridor[1].front());
    link(corridor[0].back(), corridor[1].back());
    for (std::size_t i = 0; i < kClassrooms; i += 3) link(classroom[0][i], classroom[1][i]);
    c.entrances = {corridor[0].front(), corridor[0].back()};
    for (auto& adj : c.adjacency) std::sort(adj.begin(), adj.end());
    return c;
}

struct PopulationConfig {
    std::size_t n_scheduled = 300;
    std::size_t n_unscheduled = 60;
    double p_wifi_off = 0.1;
    double p_dropout_per_sweep = 0.05;
    double p_pingpong = 0.05;
    double p_misassoc = 0.05;
    double move_lag_mean_seconds = 90;
    double move_lag_spread_seconds = 60;
    // Timetable generation.
    double p_attend = 0.8;               // a free block slot becomes a class
    double p_continue = 0.4;             // a class runs on into the next block in the same room
    double p_break_when_continuing = 0.5;  // a continuing class still takes its break (per room)
    double hop_seconds = 15;
    double wander_dwell_min_seconds = 60;
    double wander_dwell_max_seconds = 600;
    // Optional explicit timetable: row i fixes scheduled person i, one room index per block
    // (-1 = no class). Persons beyond the listed rows get generated timetables.
    std::vector<std::vector<int>> timetable;

    void validate(const CampusModel& campus, const ScheduleConfig& schedule) const {
        for (double p : {p_wifi_off, p_dropout_per_sweep, p_pingpong, p_misassoc, p_attend, p_continue,
                         p_break_when_continuing})
            if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probabilities must lie in [0, 1]");
        if (move_lag_mean_seconds < 0 || move_lag_spread_seconds < 0) throw ConfigError("move lag must be non-negative");
        if (hop_seconds <= 0) throw ConfigError("hop_seconds must be positive");
        if (wander_dwell_min_seconds <= 0 || wander_dwell_max_seconds < wander_dwell_min_seconds)
            throw ConfigError("wander dwell range is invalid");
        if (timetable.size() > n_scheduled) throw ConfigError("timetable lists more people than n_scheduled");
        for (std::size_t p = 0; p < timetable.size(); ++p) {
            if (timetable[p].size() != schedule.block_starts.size())
                throw ConfigError("timetable row " + std::to_string(p) + " must have one entry per block");
            for (int room : timetable[p])
                if (room < -1 || room >= static_cast<int>(campus.rooms.size()))
                    throw ConfigError("person " + std::to_string(p) + " is assigned to room index " +
                                      std::to_string(room) + ", campus has " + std::to_string(campus.rooms.size()) +
                                      " rooms");
        }
    }
};

struct SamplingClock {
    double mean_interval_seconds = 12;
    double jitter_seconds = 3;

    void validate() const {
        if (!(mean_interval_seconds > 0) || jitter_seconds < 0 || mean_interval_seconds - jitter_seconds <= 0)
            throw ConfigError("sampling clock needs mean_interval - jitter > 0");
    }
};

struct Sweep {
    std::uint64_t sample_id = 0;
    Timestamp timestamp{};

    bool operator==(const Sweep&) const = default;
};

// Sweeps covering [start, end): gaps uniform in [mean - jitter, mean + jitter], rounded to
// whole seconds and kept strictly increasing. Ids count from `first_id`.
inline std::vector<Sweep> generate_sampling_clock(const SamplingClock& clock, Timestamp start, Timestamp end,
                                                  std::uint64_t seed, std::uint64_t first_id = 1) {
    clock.validate();
    std::vector<Sweep> out;
    if (!(start < end)) return out;
    Rng rng(seed);
    const double span = static_cast<double>((end - start).count());
    double offset = 0;
    std::uint64_t id = first_id;
    while (true) {
        auto ts = start + std::chrono::seconds{static_cast<long long>(std::llround(offset))};
        if (!out.empty() && ts <= out.back().timestamp) ts = out.back().timestamp + std::chrono::seconds{1};
        if (ts >= end || offset >= span) break;
        out.push_back({id++, ts});
        offset += uniform_real(rng, clock.mean_interval_seconds - clock.jitter_seconds,
                               clock.mean_interval_seconds + clock.jitter_seconds);
    }
    return out;
}

namespace detail {

inline constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

struct Segment {
    double start;       // seconds since midnight
    std::size_t ap;     // kAbsent when out of the monitored area
    bool moving;
};

// A person's day as a time-ordered list of segments; location(t) is the last segment
// starting at or before t.
class Itinerary {
public:
    void stay(double t, std::size_t ap) { segs_.push_back({t, ap, false}); }
    void leave(double t) { segs_.push_back({t, kAbsent, false}); }

    // Walks path[1..] starting at t (path[0] is the current position); the final node is
    // a stay at `final_ap`.
    double walk(double t, const std::vector<std::size_t>& path, double hop, std::size_t final_ap) {
        if (path.size() < 2) return t;
        for (std::size_t i = 1; i + 1 < path.size(); ++i) segs_.push_back({t + (i - 1) * hop, path[i], true});
        double arrive = t + static_cast<double>(path.size() - 2) * hop;
        segs_.push_back({arrive, final_ap, false});
        return arrive;
    }

    // Enters at path[0] at time t and walks to the end of the path.
    double enter(double t, const std::vector<std::size_t>& path, double hop, std::size_t final_ap) {
        if (path.size() == 1) {
            segs_.push_back({t, final_ap, false});
            return t;
        }
        segs_.push_back({t, path[0], true});
        return walk(t + hop, path, hop, final_ap);
    }

    void finalize() {
        std::stable_sort(segs_.begin(), segs_.end(), [](const Segment& a, const Segment& b) { return a.start < b.start; });
    }

    // Sweeps arrive in increasing time, so the cursor only moves forward.
    const Segment* at(double t) {
        while (cursor_ < segs_.size() && segs_[cursor_].start <= t) ++cursor_;
        return cursor_ == 0 ? nullptr : &segs_[cursor_ - 1];
    }

    bool empty() const { return segs_.empty(); }

private:
    std::vector<Segment> segs_;
    std::size_t cursor_ = 0;
};

class DayPlanner {
public:
    DayPlanner(const CampusModel& campus, const ScheduleConfig& schedule, const PopulationConfig& pop, Rng& rng)
        : campus_(campus), schedule_(schedule), pop_(pop), rng_(rng),
          commons_(campus.aps_in({Zone::Common})), roaming_(campus.aps_in({Zone::Corridor, Zone::Common})) {
        if (commons_.empty()) commons_ = roaming_;
        if (commons_.empty()) commons_.push_back(0);
    }

    std::vector<std::vector<int>> timetables(bool class_day) {
        const auto nb = schedule_.block_starts.size();
        std::vector<std::vector<int>> out(pop_.n_scheduled, std::vector<int>(nb, -1));
        if (!class_day) return out;
        for (std::size_t p = 0; p < pop_.timetable.size(); ++p) out[p] = pop_.timetable[p];
        for (std::size_t b = 0; b < nb; ++b) {
            std::vector<int> seats(campus_.rooms.size());
            for (std::size_t r = 0; r < seats.size(); ++r) seats[r] = campus_.rooms[r].capacity;
            for (std::size_t p = 0; p < pop_.timetable.size(); ++p)
                if (out[p][b] >= 0) --seats[static_cast<std::size_t>(out[p][b])];
            for (std::size_t p = pop_.timetable.size(); p < pop_.n_scheduled; ++p) {
                if (b > 0 && out[p][b - 1] >= 0 && (b < 2 || out[p][b - 2] != out[p][b - 1]) &&
                    bernoulli(rng_, pop_.p_continue)) {
                    out[p][b] = out[p][b - 1];
                    --seats[static_cast<std::size_t>(out[p][b])];
                    continue;
                }
                if (!bernoulli(rng_, pop_.p_attend)) continue;
                std::vector<int> open;
                for (std::size_t r = 0; r < seats.size(); ++r)
                    if (seats[r] > 0) open.push_back(static_cast<int>(r));
                if (open.empty()) continue;
                out[p][b] = open[uniform_index(rng_, open.size())];
                --seats[static_cast<std::size_t>(out[p][b])];
            }
        }
        return out;
    }

    // Whether a class continuing in room r across the break after block b takes that break.
    std::vector<std::vector<bool>> break_taken() {
        std::vector<std::vector<bool>> out(campus_.rooms.size(), std::vector<bool>(schedule_.block_starts.size()));
        for (auto& room : out)
            for (std::size_t b = 0; b < room.size(); ++b) room[b] = bernoulli(rng_, pop_.p_break_when_continuing);
        return out;
    }

    Itinerary scheduled(const std::vector<int>& blocks, const std::vector<std::vector<bool>>& takes_break) {
        Itinerary it;
        const auto nb = blocks.size();
        std::size_t first = nb, last = nb;
        for (std::size_t b = 0; b < nb; ++b)
            if (blocks[b] >= 0) {
                if (first == nb) first = b;
                last = b;
            }
        if (first == nb) return it;
        const double hop = pop_.hop_seconds;
        auto room_ap = [&](int r) { return campus_.rooms[static_cast<std::size_t>(r)].home_ap; };
        auto start_of = [&](std::size_t b) { return static_cast<double>(schedule_.block_starts[b].count()); };
        auto end_of = [&](std::size_t b) { return static_cast<double>(schedule_.class_end(b).count()); };
        auto travel = [&](const std::vector<std::size_t>& p) { return static_cast<double>(p.size()) * hop; };

        auto entrance = pick_entrance();
        auto dest = room_ap(blocks[first]);
        auto in_path = campus_.path(entrance, dest);
        std::size_t cur = dest;
        it.enter(start_of(first) - travel(in_path) - uniform_real(rng_, 60, 480), in_path, hop, stay_ap(dest));

        for (std::size_t b = first; b < last; ++b) {
            const double end = end_of(b), next = start_of(b + 1);
            const int now = blocks[b], then = blocks[b + 1];
            if (now >= 0 && then == now) {
                if (!takes_break[static_cast<std::size_t>(now)][b]) continue;
                auto common = nearest_common(cur);
                auto out = campus_.path(cur, common);
                auto back = campus_.path(common, cur);
                it.walk(end + lag(), out, hop, stay_ap(common));
                it.walk(next - travel(back) - uniform_real(rng_, 60, 240), back, hop, stay_ap(cur));
            } else if (now >= 0 && then >= 0) {
                auto p = campus_.path(cur, room_ap(then));
                it.walk(end + lag(), p, hop, stay_ap(room_ap(then)));
                cur = room_ap(then);
            } else if (now >= 0) {
                auto common = commons_[uniform_index(rng_, commons_.size())];
                it.walk(end + lag(), campus_.path(cur, common), hop, stay_ap(common));
                cur = common;
            } else if (then >= 0) {
                auto p = campus_.path(cur, room_ap(then));
                it.walk(next - travel(p) - uniform_real(rng_, 60, 480), p, hop, stay_ap(room_ap(then)));
                cur = room_ap(then);
            }
        }
        auto exit = pick_entrance();
        auto out_path = campus_.path(cur, exit);
        double at_exit = it.walk(end_of(last) + lag(), out_path, hop, exit);
        it.leave((out_path.size() < 2 ? end_of(last) + lag() : at_exit) + hop);
        it.finalize();
        return it;
    }

    Itinerary wanderer(double day_start, double day_end) {
        Itinerary it;
        if (roaming_.empty()) return it;
        auto cur = roaming_[uniform_index(rng_, roaming_.size())];
        double t = day_start;
        it.stay(t, stay_ap(cur));
        while (true) {
            t += uniform_real(rng_, pop_.wander_dwell_min_seconds, pop_.wander_dwell_max_seconds);
            if (t >= day_end) break;
            std::vector<std::size_t> options;
            for (auto n : campus_.adjacency[cur])
                if (campus_.aps[n].zone != Zone::Classroom) options.push_back(n);
            if (options.empty()) continue;
            cur = options[uniform_index(rng_, options.size())];
            it.stay(t, stay_ap(cur));
        }
        it.finalize();
        return it;
    }

private:
    double lag() {
        return std::max(0.0, uniform_real(rng_, pop_.move_lag_mean_seconds - pop_.move_lag_spread_seconds,
                                          pop_.move_lag_mean_seconds + pop_.move_lag_spread_seconds));
    }

    std::size_t pick_entrance() {
        if (campus_.entrances.empty()) return 0;
        return campus_.entrances[uniform_index(rng_, campus_.entrances.size())];
    }

    // AP a device settles on while staying near `ap`.
    std::size_t stay_ap(std::size_t ap) {
        const auto& adj = campus_.adjacency[ap];
        if (adj.empty() || !bernoulli(rng_, pop_.p_misassoc)) return ap;
        return adj[uniform_index(rng_, adj.size())];
    }

    std::size_t nearest_common(std::size_t from) const {
        std::size_t best = commons_.front(), best_len = std::numeric_limits<std::size_t>::max();
        for (auto c : commons_) {
            auto len = campus_.path(from, c).size();
            if (len < best_len) {
                best = c;
                best_len = len;
            }
        }
        return best;
    }

    const CampusModel& campus_;
    const ScheduleConfig& schedule_;
    const PopulationConfig& pop_;
    Rng& rng_;
    std::vector<std::size_t> commons_;
    std::vector<std::size_t> roaming_;
};

inline std::string person_identity(bool scheduled, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%05zu", scheduled ? "student" : "visitor", index);
    return buf;
}

}  // namespace detail

// Raw (non-anonymized) records for every sweep in [start, end). Each calendar day is
// simulated from its own sub-seed, so a span gives the same records as its days simulated
// separately (apart from sample_id numbering, which continues from `first_id`). The id after
// the last sweep is stored in `next_sample_id` when given.
inline std::vector<RawRecord> simulate_period(const CampusModel& campus, const ScheduleConfig& schedule,
                                              const PopulationConfig& pop, const SamplingClock& clock, Timestamp start,
                                              Timestamp end, std::uint64_t seed, std::uint64_t first_id = 1,
                                              std::uint64_t* next_sample_id = nullptr) {
    campus.validate();
    schedule.validate();
    pop.validate(campus, schedule);
    clock.validate();
    if (schedule.first_date && start < make_timestamp(*schedule.first_date, TimeOfDay{0}))
        throw ConfigError("simulation span starts before the schedule calendar");
    if (schedule.last_date && end > make_timestamp(*schedule.last_date, TimeOfDay{0}) + std::chrono::days{1})
        throw ConfigError("simulation span ends after the schedule calendar");

    std::vector<RawRecord> out;
    std::uint64_t next_id = first_id;
    for (auto day = std::chrono::floor<std::chrono::days>(start); day < end; day += std::chrono::days{1}) {
        const Timestamp lo = std::max<Timestamp>(start, Timestamp{day});
        const Timestamp hi = std::min<Timestamp>(end, Timestamp{day + std::chrono::days{1}});
        if (!(lo < hi)) continue;
        const auto day_seed = derive_seed(seed, static_cast<std::uint64_t>(day.time_since_epoch().count()));
        auto sweeps = generate_sampling_clock(clock, lo, hi, derive_seed(day_seed, 0), next_id);
        next_id += sweeps.size();
        if (sweeps.empty()) continue;

        Rng plan_rng(derive_seed(day_seed, 1));
        detail::DayPlanner planner(campus, schedule, pop, plan_rng);
        const bool class_day = !schedule.is_excluded(std::chrono::weekday{day});
        auto tables = planner.timetables(class_day);
        auto breaks = planner.break_taken();

        const double t0 = static_cast<double>((lo - Timestamp{day}).count());
        const double t1 = static_cast<double>((hi - Timestamp{day}).count());
        const std::size_t n_people = pop.n_scheduled + pop.n_unscheduled;
        std::vector<detail::Itinerary> plans;
        std::vector<bool> wifi_on;
        std::vector<std::string> names;
        plans.reserve(n_people);
        for (std::size_t p = 0; p < n_people; ++p) {
            const bool scheduled = p < pop.n_scheduled;
            plans.push_back(scheduled ? planner.scheduled(tables[p], breaks) : planner.wanderer(t0, t1));
            wifi_on.push_back(!bernoulli(plan_rng, pop.p_wifi_off));
            names.push_back(detail::person_identity(scheduled, scheduled ? p : p - pop.n_scheduled));
        }

        Rng noise(derive_seed(day_seed, 2));
        for (const auto& sw : sweeps) {
            const double t = static_cast<double>((sw.timestamp - Timestamp{day}).count());
            for (std::size_t p = 0; p < n_people; ++p) {
                const auto* seg = plans[p].at(t);
                if (!seg || seg->ap == detail::kAbsent || !wifi_on[p]) continue;
                if (bernoulli(noise, pop.p_dropout_per_sweep)) continue;
                auto ap = seg->ap;
                const auto& adj = campus.adjacency[ap];
                if (!seg->moving && !adj.empty() && bernoulli(noise, pop.p_pingpong))
                    ap = adj[uniform_index(noise, adj.size())];
                out.push_back(RawRecord{sw.sample_id, names[p], campus.aps[ap].id, sw.timestamp});
            }
        }
    }
    if (next_sample_id) *next_sample_id = next_id;
    return out;
}

}  // namespace apcrowd
