#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mc/errors.hpp"
#include "mc/rng.hpp"
#include "mc/word.hpp"

namespace mc {

// Adversary models, in decreasing order of per-round freedom. All three
// are winner-equivalent; the verifier checks that empirically.
enum class SchedulerModel { Immediate, PairwiseImmediate, Canonical };

inline std::string to_string(SchedulerModel m) {
    switch (m) {
        case SchedulerModel::Immediate: return "immediate";
        case SchedulerModel::PairwiseImmediate: return "pairwise";
        case SchedulerModel::Canonical: return "canonical";
    }
    return "?";
}

inline std::optional<SchedulerModel> parse_model(std::string_view s) {
    if (s == "immediate") return SchedulerModel::Immediate;
    if (s == "pairwise") return SchedulerModel::PairwiseImmediate;
    if (s == "canonical") return SchedulerModel::Canonical;
    return std::nullopt;
}

/// One player's traversal state. The current chair is
/// word[(start + moves) mod |word|]; `moves` only ever grows, so full
/// traversals stay decidable even when the cyclic position recurs.
struct PlayerState {
    int word_index = 0;
    int start = 0;
    long long moves = 0;
    bool operator==(const PlayerState&) const = default;
};

/// The game state vector. An empty player list is the designated empty
/// configuration of zero potential.
struct Configuration {
    std::vector<PlayerState> players;
    std::size_t size() const { return players.size(); }
    bool operator==(const Configuration&) const = default;
};

inline Configuration make_configuration(const std::vector<int>& word_indices,
                                        const std::vector<int>& starts) {
    if (word_indices.size() != starts.size())
        throw Error("word_indices and starts differ in length");
    Configuration c;
    c.players.reserve(word_indices.size());
    for (std::size_t i = 0; i < word_indices.size(); ++i)
        c.players.push_back(PlayerState{word_indices[i], starts[i], 0});
    return c;
}

inline Chair chair_of(const PlayerState& p, const WordSystem& sys) {
    const Word& w = sys.words.at(static_cast<std::size_t>(p.word_index));
    return w.cyclic(static_cast<std::size_t>(p.start + p.moves));
}

/// Current cyclic position of a player on its word.
inline int position_of(const PlayerState& p, const WordSystem& sys) {
    const Word& w = sys.words.at(static_cast<std::size_t>(p.word_index));
    if (w.empty()) throw EmptyWord("player assigned a flagged-empty word");
    return static_cast<int>((p.start + p.moves) % static_cast<long long>(w.size()));
}

/// Indices (0-based) of all players whose chair is shared, sorted.
inline std::vector<int> conflicted(const Configuration& c, const WordSystem& sys) {
    const std::size_t n = c.size();
    std::vector<Chair> chairs(n);
    for (std::size_t i = 0; i < n; ++i) chairs[i] = chair_of(c.players[i], sys);
    std::vector<int> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && chairs[i] == chairs[j]) {
                out.push_back(static_cast<int>(i));
                break;
            }
        }
    }
    return out;
}

inline bool is_safe(const Configuration& c, const WordSystem& sys) {
    return conflicted(c, sys).empty();
}

/// The pair dictated to the canonical scheduler: lexicographically least
/// (i, j), i < j, with equal chairs. Throws NoConflict when safe.
inline std::pair<int, int> canonical_pair(const Configuration& c, const WordSystem& sys) {
    const std::size_t n = c.size();
    std::vector<Chair> chairs(n);
    for (std::size_t i = 0; i < n; ++i) chairs[i] = chair_of(c.players[i], sys);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (chairs[i] == chairs[j]) return {static_cast<int>(i), static_cast<int>(j)};
    throw NoConflict("configuration is safe; no canonical pair");
}

struct Successor {
    std::vector<int> moved;  // 0-based player indices, sorted
    Configuration config;
};

namespace detail {

inline Configuration apply_moved(const Configuration& c, const std::vector<int>& moved) {
    Configuration out = c;
    for (int i : moved) out.players.at(static_cast<std::size_t>(i)).moves += 1;
    return out;
}

/// Moved-set enumeration shared by the engine and the verifier. Chairs
/// are passed in so callers working on raw position vectors can reuse it.
/// Order is deterministic: Immediate enumerates subsets of the sorted
/// conflicted list by increasing bitmask; Pairwise walks pairs (i,j)
/// lexicographically, emitting {i}, {j}, {i,j}; Canonical emits the same
/// three for the canonical pair only.
template <class Emit>
void enumerate_moved_sets(const std::vector<Chair>& chairs, SchedulerModel model, Emit emit) {
    const std::size_t n = chairs.size();
    switch (model) {
        case SchedulerModel::Immediate: {
            std::vector<int> conf;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && chairs[i] == chairs[j]) {
                        conf.push_back(static_cast<int>(i));
                        break;
                    }
            const std::size_t k = conf.size();
            if (k == 0) return;
            for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
                std::vector<int> moved;
                for (std::size_t b = 0; b < k; ++b)
                    if (mask & (1ull << b)) moved.push_back(conf[b]);
                emit(moved);
            }
            break;
        }
        case SchedulerModel::PairwiseImmediate: {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (chairs[i] == chairs[j]) {
                        const int a = static_cast<int>(i), b = static_cast<int>(j);
                        emit(std::vector<int>{a});
                        emit(std::vector<int>{b});
                        emit(std::vector<int>{a, b});
                    }
            break;
        }
        case SchedulerModel::Canonical: {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (chairs[i] == chairs[j]) {
                        const int a = static_cast<int>(i), b = static_cast<int>(j);
                        emit(std::vector<int>{a});
                        emit(std::vector<int>{b});
                        emit(std::vector<int>{a, b});
                        return;
                    }
            break;
        }
    }
}

} // namespace detail

/// All legal one-round transitions from c under the model. A safe
/// configuration has none.
inline std::vector<Successor> successors(const Configuration& c, const WordSystem& sys,
                                         SchedulerModel model) {
    std::vector<Chair> chairs(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) chairs[i] = chair_of(c.players[i], sys);
    std::vector<Successor> out;
    detail::enumerate_moved_sets(chairs, model, [&](const std::vector<int>& moved) {
        out.push_back(Successor{moved, detail::apply_moved(c, moved)});
    });
    return out;
}

/// Termination measure: x^(n - #occupied chairs). Safe configurations
/// have potential 1; the designated empty configuration has potential 0.
inline double potential(const Configuration& c, const WordSystem& sys, double x) {
    if (x <= 0) throw Error("potential base must be positive");
    if (c.players.empty()) return 0.0;
    std::vector<Chair> chairs;
    chairs.reserve(c.size());
    for (const PlayerState& p : c.players) chairs.push_back(chair_of(p, sys));
    std::sort(chairs.begin(), chairs.end());
    const auto distinct = std::unique(chairs.begin(), chairs.end()) - chairs.begin();
    return std::pow(x, static_cast<double>(c.size()) - static_cast<double>(distinct));
}

struct TraceStep {
    std::vector<int> moved;
    Configuration config;
    bool operator==(const TraceStep&) const = default;
};

/// A schedule: initial configuration plus the moved set and resulting
/// configuration of each round.
struct Trace {
    std::string system_name = "-";
    SchedulerModel model = SchedulerModel::Immediate;
    std::vector<int> word_indices;  // 0-based into the system
    std::vector<int> starts;
    Configuration initial;
    std::vector<TraceStep> steps;

    const Configuration& final_configuration() const {
        return steps.empty() ? initial : steps.back().config;
    }
    bool operator==(const Trace&) const = default;
};

/// A strategy picks one of the offered successors.
using Strategy = std::function<std::size_t(const Configuration&, const std::vector<Successor>&)>;

/// Drive the game loop until safe or max_steps rounds.
inline Trace simulate(const WordSystem& sys, const std::vector<int>& word_indices,
                      const std::vector<int>& starts, const Strategy& choose,
                      long long max_steps, SchedulerModel model = SchedulerModel::Immediate,
                      std::string system_name = "-") {
    sys.validate();
    for (int wi : word_indices)
        if (wi < 0 || static_cast<std::size_t>(wi) >= sys.words.size())
            throw Error("word index out of range: " + std::to_string(wi));
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const Word& w = sys.words.at(static_cast<std::size_t>(word_indices.at(i)));
        if (w.empty()) throw EmptyWord("flagged-empty word in play");
        if (starts[i] < 0 || static_cast<std::size_t>(starts[i]) >= w.size())
            throw Error("start offset out of range for word " + std::to_string(word_indices[i] + 1));
    }

    Trace trace;
    trace.system_name = std::move(system_name);
    trace.model = model;
    trace.word_indices = word_indices;
    trace.starts = starts;
    trace.initial = make_configuration(word_indices, starts);

    Configuration cur = trace.initial;
    for (long long step = 0; step < max_steps; ++step) {
        std::vector<Successor> next = successors(cur, sys, model);
        if (next.empty()) break;
        const std::size_t pick = choose(cur, next);
        if (pick >= next.size()) throw Error("strategy picked successor out of range");
        trace.steps.push_back(TraceStep{next[pick].moved, next[pick].config});
        cur = std::move(next[pick].config);
    }
    return trace;
}

inline Strategy random_strategy(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seeded_rng(seed));
    return [rng](const Configuration&, const std::vector<Successor>& next) {
        return static_cast<std::size_t>(bounded(*rng, next.size()));
    };
}

/// Always the first successor in the model's deterministic order.
inline Strategy first_choice_strategy() {
    return [](const Configuration&, const std::vector<Successor>&) { return std::size_t{0}; };
}

/// Replays a fixed list of moved sets; throws when the script names a
/// moved set that is not currently legal or runs out.
inline Strategy scripted_strategy(std::vector<std::vector<int>> script) {
    auto state = std::make_shared<std::pair<std::vector<std::vector<int>>, std::size_t>>(
        std::move(script), 0);
    return [state](const Configuration&, const std::vector<Successor>& next) {
        if (state->second >= state->first.size()) throw Error("script exhausted");
        std::vector<int> want = state->first[state->second++];
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < next.size(); ++i)
            if (next[i].moved == want) return i;
        throw Error("scripted moved set is not legal at this configuration");
    };
}

/// Check that every step of the trace is a legal move of the declared
/// model and that configurations line up. Throws Error on violation.
inline void replay_validate(const Trace& trace, const WordSystem& sys) {
    Configuration cur = trace.initial;
    std::size_t k = 0;
    for (const TraceStep& step : trace.steps) {
        ++k;
        std::vector<Successor> legal = successors(cur, sys, trace.model);
        bool found = false;
        for (const Successor& s : legal) {
            if (s.moved == step.moved) {
                if (!(s.config == step.config))
                    throw Error("trace step " + std::to_string(k) + ": configuration mismatch");
                found = true;
                break;
            }
        }
        if (!found) throw Error("trace step " + std::to_string(k) + ": moved set is not legal");
        cur = step.config;
    }
}

} // namespace mc
