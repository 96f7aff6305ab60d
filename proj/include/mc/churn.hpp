#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mc/engine.hpp"
#include "mc/errors.hpp"
#include "mc/rng.hpp"
#include "mc/verifier.hpp"
#include "mc/word.hpp"

// Frequency-hopping demonstration: devices carry words from a winning
// system and hop to the next chair whenever the adversarial environment
// notifies them of interference. As long as at most n devices share the
// area, any quiet interval of more than T rounds ends conflict-free,
// with T the longest run of the worst n-subset.

namespace mc {

struct ChurnEvent {
    long long time = 0;
    bool arrival = true;
    int device = 0;      // 1-based id
    int word_index = 0;  // 0-based into the system; arrivals only
    int start = 0;       // starting offset; arrivals only
};

struct ChurnScenario {
    int capacity = 0;           // n: most devices allowed co-resident
    long long tail_rounds = 0;  // rounds granted after the last event
    std::vector<ChurnEvent> events;
};

enum class ChurnPolicy { CanonicalBoth, SeededRandom, WorstCase };

inline std::string to_string(ChurnPolicy p) {
    switch (p) {
        case ChurnPolicy::CanonicalBoth: return "canonical-both";
        case ChurnPolicy::SeededRandom: return "seeded-random";
        case ChurnPolicy::WorstCase: return "worst-case";
    }
    return "?";
}

struct ChurnInterval {
    long long from = 0;
    long long length = 0;           // rounds available before the next event
    long long conflict_rounds = 0;  // rounds the scheduler actually used
    long long max_device_moves = 0; // largest per-device move count inside the interval
    bool resolved = false;          // reached conflict-free before the interval ended
};

struct ChurnReport {
    std::map<int, long long> interference;  // device id -> notifications suffered
    long long max_interference = 0;
    std::optional<long long> t_bound;       // max_run over <=capacity subsets of used words
    std::optional<bool> system_winning;     // false when some subset is Scheduler-won
    std::vector<ChurnInterval> intervals;
    long long total_rounds = 0;
};

// --- scenario text format -------------------------------------------------
//
//   mc-churn v1
//   capacity=<n> tail=<rounds>
//   arrive <time> <device> <word> <start>     (word is 1-based)
//   depart <time> <device>

inline std::string serialize_scenario(const ChurnScenario& sc) {
    std::ostringstream out;
    out << "mc-churn v1\n";
    out << "capacity=" << sc.capacity << " tail=" << sc.tail_rounds << "\n";
    for (const ChurnEvent& e : sc.events) {
        if (e.arrival)
            out << "arrive " << e.time << " " << e.device << " " << e.word_index + 1 << " "
                << e.start << "\n";
        else
            out << "depart " << e.time << " " << e.device << "\n";
    }
    return out.str();
}

inline ChurnScenario parse_scenario(std::istream& in) {
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || line != "mc-churn v1")
        throw ParseError(lineno, "expected header 'mc-churn v1'");
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(lineno, "missing capacity/tail line");
    ChurnScenario sc;
    {
        std::istringstream hdr(line);
        std::string cap, tail;
        if (!(hdr >> cap >> tail) || cap.rfind("capacity=", 0) != 0 || tail.rfind("tail=", 0) != 0)
            throw ParseError(lineno, "expected 'capacity=<n> tail=<rounds>'");
        try {
            sc.capacity = std::stoi(cap.substr(9));
            sc.tail_rounds = std::stoll(tail.substr(5));
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad integer in capacity/tail");
        }
    }
    long long prev_time = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ev(line);
        std::string kind;
        ev >> kind;
        ChurnEvent e;
        if (kind == "arrive") {
            long long w = 0;
            if (!(ev >> e.time >> e.device >> w >> e.start))
                throw ParseError(lineno, "expected 'arrive <time> <device> <word> <start>'");
            e.arrival = true;
            e.word_index = static_cast<int>(w) - 1;
        } else if (kind == "depart") {
            if (!(ev >> e.time >> e.device))
                throw ParseError(lineno, "expected 'depart <time> <device>'");
            e.arrival = false;
        } else {
            throw ParseError(lineno, "unknown event '" + kind + "'");
        }
        if (e.time < prev_time) throw ParseError(lineno, "events must be time-ordered");
        prev_time = e.time;
        sc.events.push_back(e);
    }
    return sc;
}

inline ChurnScenario parse_scenario(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

inline ChurnScenario read_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file: " + path);
    return parse_scenario(in);
}

/// Everyone arrives at round 0 with word i for device i and a seeded
/// random start; handy default when no scenario file is given.
inline ChurnScenario static_scenario(const WordSystem& sys, int devices, long long tail,
                                     std::uint64_t seed) {
    if (devices < 1 || static_cast<std::size_t>(devices) > sys.count())
        throw Error("device count out of range");
    ChurnScenario sc;
    sc.capacity = devices;
    sc.tail_rounds = tail;
    std::mt19937_64 rng = seeded_rng(seed, 0xc0ffee);
    for (int d = 1; d <= devices; ++d) {
        ChurnEvent e;
        e.time = 0;
        e.device = d;
        e.word_index = d - 1;
        e.start = static_cast<int>(bounded(rng, sys.word(static_cast<std::size_t>(d - 1)).size()));
        sc.events.push_back(e);
    }
    return sc;
}

/// Event-driven interference simulation. Each round with a conflict, the
/// policy notifies a conflicted subset and those devices hop; a round
/// without conflicts idles. Arrival beyond capacity rejects the scenario.
inline ChurnReport freq_demo(const WordSystem& sys, const ChurnScenario& sc, std::uint64_t seed,
                             ChurnPolicy policy = ChurnPolicy::CanonicalBoth,
                             long long budget = 100'000'000) {
    sys.validate();
    sys.require_nonempty_words();
    if (sc.capacity < 1) throw ScenarioError("capacity must be >= 1");

    std::map<int, PlayerState> residents;  // device id -> state
    ChurnReport rep;
    std::set<int> used_words;
    std::mt19937_64 rng = seeded_rng(seed, 0xfeed);
    // per resident word-set longest-run tables for the worst-case policy;
    // nullopt when the subsystem is cyclic or over budget
    std::map<std::vector<int>, std::optional<RunLengths>> tables;

    auto worst_case_pick = [&](const std::vector<int>& ids,
                               const std::vector<Successor>& succ) -> std::optional<std::size_t> {
        std::vector<int> word_set;
        for (int id : ids) word_set.push_back(residents[id].word_index);
        std::vector<int> sorted_words = word_set;
        std::sort(sorted_words.begin(), sorted_words.end());
        if (std::adjacent_find(sorted_words.begin(), sorted_words.end()) != sorted_words.end())
            return std::nullopt;  // duplicated word: cyclic, no table
        auto it = tables.find(sorted_words);
        if (it == tables.end()) {
            std::optional<RunLengths> table;
            try {
                table = run_lengths(sys.subset(sorted_words), SchedulerModel::PairwiseImmediate,
                                    budget);
            } catch (const Cyclic&) {
            } catch (const BudgetExceeded&) {
            }
            it = tables.emplace(sorted_words, std::move(table)).first;
        }
        if (!it->second) return std::nullopt;
        auto subsystem_positions = [&](const Configuration& c) {
            std::vector<int> pos(sorted_words.size());
            for (std::size_t i = 0; i < c.size(); ++i) {
                const auto slot = std::lower_bound(sorted_words.begin(), sorted_words.end(),
                                                   c.players[i].word_index) -
                                  sorted_words.begin();
                pos[static_cast<std::size_t>(slot)] = position_of(c.players[i], sys);
            }
            return pos;
        };
        std::size_t best = 0;
        long long best_run = -1;
        for (std::size_t i = 0; i < succ.size(); ++i) {
            const long long run = it->second->at(subsystem_positions(succ[i].config));
            if (run > best_run) {
                best_run = run;
                best = i;
            }
        }
        return best;
    };

    auto conflict_round = [&]() -> std::vector<int> {  // devices notified this round
        std::vector<int> ids;
        Configuration cfg;
        for (const auto& [id, st] : residents) {
            ids.push_back(id);
            cfg.players.push_back(st);
        }
        std::vector<Successor> succ = successors(cfg, sys, SchedulerModel::PairwiseImmediate);
        if (succ.empty()) return {};
        std::size_t pick = 0;
        if (policy == ChurnPolicy::SeededRandom) {
            pick = static_cast<std::size_t>(bounded(rng, succ.size()));
        } else {
            std::optional<std::size_t> chosen;
            if (policy == ChurnPolicy::WorstCase) chosen = worst_case_pick(ids, succ);
            if (chosen) {
                pick = *chosen;
            } else {  // canonical pair, move both
                const auto [a, b] = canonical_pair(cfg, sys);
                for (std::size_t i = 0; i < succ.size(); ++i)
                    if (succ[i].moved == std::vector<int>{a, b}) pick = i;
            }
        }
        std::vector<int> moved_devices;
        for (int pi : succ[pick].moved) {
            const int dev = ids.at(static_cast<std::size_t>(pi));
            residents[dev].moves += 1;
            ++rep.interference[dev];
            moved_devices.push_back(dev);
        }
        return moved_devices;
    };

    auto run_interval = [&](long long from, long long length) {
        ChurnInterval iv;
        iv.from = from;
        iv.length = length;
        std::map<int, long long> moves_here;
        for (long long r = 0; r < length; ++r) {
            const std::vector<int> moved = conflict_round();
            if (moved.empty()) {
                iv.resolved = true;
                break;
            }
            ++iv.conflict_rounds;
            ++rep.total_rounds;
            for (int d : moved) ++moves_here[d];
            if (rep.total_rounds > budget)
                throw BudgetExceeded("churn simulation exceeded round budget");
        }
        if (!iv.resolved) {
            // interval ended while conflicts remain (or used every round)
            Configuration cfg;
            for (const auto& [id, st] : residents) cfg.players.push_back(st);
            iv.resolved = is_safe(cfg, sys);
        }
        for (const auto& [d, k] : moves_here) iv.max_device_moves = std::max(iv.max_device_moves, k);
        rep.intervals.push_back(iv);
    };

    std::size_t next = 0;
    long long now = 0;
    while (next < sc.events.size()) {
        const long long when = sc.events[next].time;
        if (when > now) {
            run_interval(now, when - now);
            now = when;
        }
        while (next < sc.events.size() && sc.events[next].time == now) {
            const ChurnEvent& e = sc.events[next++];
            if (e.arrival) {
                if (residents.count(e.device))
                    throw ScenarioError("device " + std::to_string(e.device) + " arrives twice");
                if (static_cast<int>(residents.size()) + 1 > sc.capacity)
                    throw ScenarioError("co-residency would exceed capacity " +
                                        std::to_string(sc.capacity));
                if (e.word_index < 0 || static_cast<std::size_t>(e.word_index) >= sys.count())
                    throw ScenarioError("arrival references word " + std::to_string(e.word_index + 1) +
                                        " outside the system");
                const Word& w = sys.word(static_cast<std::size_t>(e.word_index));
                if (e.start < 0 || static_cast<std::size_t>(e.start) >= w.size())
                    throw ScenarioError("arrival start offset out of range");
                residents[e.device] = PlayerState{e.word_index, e.start, 0};
                used_words.insert(e.word_index);
                rep.interference.emplace(e.device, 0);
            } else {
                if (!residents.erase(e.device))
                    throw ScenarioError("device " + std::to_string(e.device) + " departs while absent");
            }
        }
    }
    if (sc.tail_rounds > 0) run_interval(now, sc.tail_rounds);

    for (const auto& [d, k] : rep.interference) rep.max_interference = std::max(rep.max_interference, k);

    // T = the worst max_run over subsets of the words actually used, up
    // to the co-residency capacity. Skipped quietly when over budget.
    try {
        long long bound = 0;
        bool winning = true;
        const std::vector<int> used(used_words.begin(), used_words.end());
        const int top = std::min<int>(sc.capacity, static_cast<int>(used.size()));
        for (int k = 2; k <= top; ++k) {
            detail::for_each_combination(static_cast<int>(used.size()), k, [&](const std::vector<int>& idx) {
                std::vector<int> words_idx;
                for (int i : idx) words_idx.push_back(used[static_cast<std::size_t>(i)]);
                DecideOptions opt;
                opt.model = SchedulerModel::Immediate;
                opt.budget = budget;
                const Verdict v = decide(sys.subset(words_idx), opt);
                if (v.winner == Winner::Scheduler)
                    winning = false;
                else
                    bound = std::max(bound, v.max_run);
            });
        }
        rep.system_winning = winning;
        if (winning) rep.t_bound = bound;
    } catch (const BudgetExceeded&) {
        // bound unavailable at this scale; observation-only report
    }
    return rep;
}

} // namespace mc
