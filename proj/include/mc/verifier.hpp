#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mc/engine.hpp"
#include "mc/errors.hpp"
#include "mc/word.hpp"

namespace mc {

enum class Winner { Team, Scheduler };

inline std::string to_string(Winner w) { return w == Winner::Team ? "Team" : "Scheduler"; }

/// A reachable cycle in the configuration digraph: position vectors
/// (first == last) and the moved set taken at each step.
struct CycleWitness {
    std::vector<std::vector<int>> positions;
    std::vector<std::vector<int>> moved;
};

struct Verdict {
    Winner winner = Winner::Team;
    long long max_run = -1;  // longest path in the DAG; Team verdicts only
    CycleWitness cycle;      // Scheduler verdicts only
    double state_count = 0;  // product of the word lengths
};

struct DecideOptions {
    SchedulerModel model = SchedulerModel::Immediate;
    std::optional<std::vector<int>> starts;  // absent: search all position vectors
    long long budget = 100'000'000;          // bound on states and explored transitions
};

namespace detail {

/// Mixed-radix index over position vectors (one digit per word).
struct PositionSpace {
    std::vector<int> lens;
    std::vector<std::size_t> strides;
    std::size_t total = 1;

    static PositionSpace make(const WordSystem& sys, long long budget) {
        sys.validate();
        sys.require_nonempty_words();
        if (sys.words.empty()) throw Error("empty word system");
        PositionSpace ps;
        double estimate = 1.0;
        for (const Word& w : sys.words) {
            ps.lens.push_back(static_cast<int>(w.size()));
            estimate *= static_cast<double>(w.size());
        }
        if (estimate > static_cast<double>(budget))
            throw BudgetExceeded("state space of " + std::to_string(estimate) +
                                 " position vectors exceeds budget " + std::to_string(budget));
        ps.strides.resize(ps.lens.size());
        for (std::size_t i = 0; i < ps.lens.size(); ++i) {
            ps.strides[i] = ps.total;
            ps.total *= static_cast<std::size_t>(ps.lens[i]);
        }
        return ps;
    }

    void decode(std::size_t idx, std::vector<int>& pos) const {
        pos.resize(lens.size());
        for (std::size_t i = 0; i < lens.size(); ++i) {
            pos[i] = static_cast<int>(idx % static_cast<std::size_t>(lens[i]));
            idx /= static_cast<std::size_t>(lens[i]);
        }
    }

    std::size_t index(const std::vector<int>& pos) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < lens.size(); ++i)
            idx += strides[i] * static_cast<std::size_t>(pos[i]);
        return idx;
    }

    std::size_t advance(std::size_t idx, const std::vector<int>& pos, const std::vector<int>& moved) const {
        for (int i : moved) {
            const auto u = static_cast<std::size_t>(i);
            if (pos[u] + 1 == lens[u])
                idx -= strides[u] * static_cast<std::size_t>(lens[u] - 1);
            else
                idx += strides[u];
        }
        return idx;
    }
};

struct Edge {
    std::vector<int> moved;
    std::size_t next;
};

/// All one-round transitions out of a position vector under the model.
inline void position_successors(const PositionSpace& ps, const WordSystem& sys, std::size_t idx,
                                SchedulerModel model, std::vector<int>& pos,
                                std::vector<Chair>& chairs, std::vector<Edge>& out) {
    ps.decode(idx, pos);
    chairs.resize(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i)
        chairs[i] = sys.words[i][static_cast<std::size_t>(pos[i])];
    out.clear();
    enumerate_moved_sets(chairs, model, [&](const std::vector<int>& moved) {
        out.push_back(Edge{moved, ps.advance(idx, pos, moved)});
    });
}

/// Memoized longest-path lengths over the (acyclic) digraph. Fills
/// `longest` for every state reachable from the processed roots and
/// returns the overall maximum. Loops forever on cyclic inputs; callers
/// check acyclicity first.
inline long long fill_longest_table(const PositionSpace& ps, const WordSystem& sys,
                                    SchedulerModel model, long long budget, long long& transitions,
                                    std::vector<std::int64_t>& longest,
                                    std::optional<std::size_t> only_root) {
    struct LFrame {
        std::size_t state;
        std::size_t cursor = 0;
        std::vector<Edge> succs;
        std::int64_t best = 0;
    };
    std::vector<int> pos_buf;
    std::vector<Chair> chair_buf;
    long long best_run = 0;
    auto measure_from = [&](std::size_t root) {
        if (longest[root] >= 0) return;
        std::vector<LFrame> stack;
        auto push = [&](std::size_t s) {
            LFrame f;
            f.state = s;
            position_successors(ps, sys, s, model, pos_buf, chair_buf, f.succs);
            transitions += static_cast<long long>(f.succs.size() + 1);
            if (transitions > budget)
                throw BudgetExceeded("explored more than " + std::to_string(budget) +
                                     " transitions");
            stack.push_back(std::move(f));
        };
        push(root);
        while (!stack.empty()) {
            LFrame& top = stack.back();
            if (top.cursor < top.succs.size()) {
                const std::size_t nx = top.succs[top.cursor].next;
                if (longest[nx] >= 0) {
                    top.best = std::max(top.best, 1 + longest[nx]);
                    ++top.cursor;
                } else {
                    push(nx);
                }
            } else {
                longest[top.state] = top.best;
                best_run = std::max(best_run, static_cast<long long>(top.best));
                stack.pop_back();
            }
        }
    };
    if (only_root) {
        measure_from(*only_root);
        return longest[*only_root];
    }
    for (std::size_t s = 0; s < ps.total; ++s) measure_from(s);
    return best_run;
}

} // namespace detail

/// Decide who wins the game on this word system by exhaustive search of
/// the configuration digraph. Without fixed starts the whole digraph is
/// searched (the scheduler chooses starting positions); with starts only
/// the reachable part. Team wins iff the searched graph is acyclic, in
/// which case the verdict carries the longest-path length.
inline Verdict decide(const WordSystem& sys, const DecideOptions& opt = {}) {
    const detail::PositionSpace ps = detail::PositionSpace::make(sys, opt.budget);
    const std::size_t n = sys.words.size();

    Verdict verdict;
    verdict.state_count = 1.0;
    for (int len : ps.lens) verdict.state_count *= static_cast<double>(len);

    std::vector<std::size_t> roots;
    if (opt.starts) {
        if (opt.starts->size() != n) throw Error("starts length does not match word count");
        for (std::size_t i = 0; i < n; ++i)
            if ((*opt.starts)[i] < 0 || (*opt.starts)[i] >= ps.lens[i])
                throw Error("start offset out of range for word " + std::to_string(i + 1));
        roots.push_back(ps.index(*opt.starts));
    }

    long long transitions = 0;
    auto charge = [&](std::size_t k) {
        transitions += static_cast<long long>(k);
        if (transitions > opt.budget)
            throw BudgetExceeded("explored more than " + std::to_string(opt.budget) + " transitions");
    };

    enum : std::uint8_t { White, Gray, Black };
    std::vector<std::uint8_t> color(ps.total, White);
    std::vector<std::int64_t> stack_pos(ps.total, -1);

    struct Frame {
        std::size_t state;
        std::size_t cursor = 0;
        std::vector<detail::Edge> succs;
        std::vector<int> moved_in;
    };
    std::vector<int> pos_buf;
    std::vector<Chair> chair_buf;

    auto run_from = [&](std::size_t root) -> bool {  // true when a cycle was found
        if (color[root] != White) return false;
        std::vector<Frame> stack;
        auto push = [&](std::size_t s, std::vector<int> moved_in) {
            Frame f;
            f.state = s;
            f.moved_in = std::move(moved_in);
            detail::position_successors(ps, sys, s, opt.model, pos_buf, chair_buf, f.succs);
            charge(f.succs.size() + 1);
            color[s] = Gray;
            stack_pos[s] = static_cast<std::int64_t>(stack.size());
            stack.push_back(std::move(f));
        };
        push(root, {});
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.cursor < top.succs.size()) {
                const detail::Edge& e = top.succs[top.cursor++];
                if (color[e.next] == White) {
                    push(e.next, e.moved);
                } else if (color[e.next] == Gray) {
                    const auto j = static_cast<std::size_t>(stack_pos[e.next]);
                    for (std::size_t k = j; k < stack.size(); ++k) {
                        ps.decode(stack[k].state, pos_buf);
                        verdict.cycle.positions.push_back(pos_buf);
                        if (k > j) verdict.cycle.moved.push_back(stack[k].moved_in);
                    }
                    ps.decode(e.next, pos_buf);
                    verdict.cycle.positions.push_back(pos_buf);
                    verdict.cycle.moved.push_back(e.moved);
                    return true;
                }
            } else {
                color[top.state] = Black;
                stack_pos[top.state] = -1;
                stack.pop_back();
            }
        }
        return false;
    };

    bool cyclic = false;
    if (opt.starts) {
        cyclic = run_from(roots[0]);
    } else {
        for (std::size_t s = 0; s < ps.total && !cyclic; ++s) cyclic = run_from(s);
    }
    if (cyclic) {
        verdict.winner = Winner::Scheduler;
        return verdict;
    }

    // Acyclic: longest path by memoized traversal.
    std::vector<std::int64_t> longest(ps.total, -1);
    verdict.winner = Winner::Team;
    verdict.max_run = detail::fill_longest_table(
        ps, sys, opt.model, opt.budget, transitions, longest,
        opt.starts ? std::optional<std::size_t>(roots[0]) : std::nullopt);
    return verdict;
}

/// Longest schedule length of a Team-winning system. Throws Cyclic if the
/// scheduler wins.
inline long long max_run(const WordSystem& sys, const DecideOptions& opt = {}) {
    const Verdict v = decide(sys, opt);
    if (v.winner == Winner::Scheduler) throw Cyclic("configuration digraph has a cycle");
    return v.max_run;
}

/// Longest remaining run from every position vector of a Team-winning
/// system; what a worst-case scheduler plays from.
struct RunLengths {
    detail::PositionSpace space;
    std::vector<std::int64_t> longest;

    long long at(const std::vector<int>& pos) const { return longest.at(space.index(pos)); }
};

inline RunLengths run_lengths(const WordSystem& sys,
                              SchedulerModel model = SchedulerModel::Immediate,
                              long long budget = 100'000'000) {
    DecideOptions opt;
    opt.model = model;
    opt.budget = budget;
    if (decide(sys, opt).winner == Winner::Scheduler)
        throw Cyclic("configuration digraph has a cycle");
    RunLengths rl{detail::PositionSpace::make(sys, budget), {}};
    rl.longest.assign(rl.space.total, -1);
    long long transitions = 0;
    detail::fill_longest_table(rl.space, sys, model, budget, transitions, rl.longest, std::nullopt);
    return rl;
}

struct TerminalityReport {
    bool terminal = true;
    int lapped_player = -1;  // 0-based, when not terminal
    Trace witness;           // legal schedule in which that player laps
};

/// Exhaustively decide whether no schedule can fully traverse any word.
/// The search state is (start vector, per-player move counts) with every
/// count below its word length; a transition that would push a count to
/// the word length is a witness of non-terminality.
inline TerminalityReport is_terminal(const WordSystem& sys,
                                     SchedulerModel model = SchedulerModel::Immediate,
                                     long long budget = 100'000'000) {
    const detail::PositionSpace ps = detail::PositionSpace::make(sys, budget);
    const std::size_t n = sys.words.size();
    {
        double est = 1.0;
        for (int len : ps.lens) est *= static_cast<double>(len);
        if (est * est > static_cast<double>(budget))
            throw BudgetExceeded("terminality space of " + std::to_string(est * est) +
                                 " states exceeds budget " + std::to_string(budget));
    }

    long long transitions = 0;
    std::vector<std::size_t> stamp(ps.total, 0);
    std::size_t epoch = 0;

    struct Frame {
        std::size_t counts;  // mixed-radix move-count vector
        std::size_t cursor = 0;
        std::vector<std::vector<int>> moves;
        std::vector<int> moved_in;
    };

    std::vector<int> start(n), cnt(n);
    std::vector<Chair> chairs(n);

    const std::size_t start_total = ps.total;
    for (std::size_t s = 0; s < start_total; ++s) {
        ps.decode(s, start);
        ++epoch;
        std::vector<Frame> stack;

        auto expand = [&](std::size_t counts_idx) {
            Frame f;
            f.counts = counts_idx;
            ps.decode(counts_idx, cnt);
            for (std::size_t i = 0; i < n; ++i)
                chairs[i] = sys.words[i].cyclic(static_cast<std::size_t>(start[i] + cnt[i]));
            detail::enumerate_moved_sets(chairs, model, [&](const std::vector<int>& moved) {
                f.moves.push_back(moved);
            });
            transitions += static_cast<long long>(f.moves.size() + 1);
            if (transitions > budget)
                throw BudgetExceeded("terminality search exceeded budget " + std::to_string(budget));
            stamp[counts_idx] = epoch;
            stack.push_back(std::move(f));
        };

        expand(ps.index(std::vector<int>(n, 0)));
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.cursor >= top.moves.size()) {
                stack.pop_back();
                continue;
            }
            const std::vector<int> moved = top.moves[top.cursor++];
            ps.decode(top.counts, cnt);
            // Counts live in 0..len-1; a move that takes a count to len is
            // a full traversal and witnesses non-terminality.
            int lap_player = -1;
            for (int i : moved)
                if (cnt[static_cast<std::size_t>(i)] + 1 == ps.lens[static_cast<std::size_t>(i)]) {
                    lap_player = i;
                    break;
                }
            if (lap_player >= 0) {
                TerminalityReport rep;
                rep.terminal = false;
                rep.lapped_player = lap_player;
                Trace& t = rep.witness;
                t.model = model;
                for (std::size_t i = 0; i < n; ++i) t.word_indices.push_back(static_cast<int>(i));
                t.starts.assign(start.begin(), start.end());
                t.initial = make_configuration(t.word_indices, t.starts);
                Configuration cur = t.initial;
                for (std::size_t k = 1; k < stack.size(); ++k) {
                    cur = detail::apply_moved(cur, stack[k].moved_in);
                    t.steps.push_back(TraceStep{stack[k].moved_in, cur});
                }
                cur = detail::apply_moved(cur, moved);
                t.steps.push_back(TraceStep{moved, cur});
                return rep;
            }
            const std::size_t next = ps.advance(top.counts, cnt, moved);
            // advance() wraps at len, but laps were excluded above, so every
            // moved count strictly increases here.
            if (stamp[next] != epoch) {
                expand(next);
                stack.back().moved_in = moved;
            }
        }
    }
    return TerminalityReport{};
}

struct SubsetVerdict {
    std::vector<int> subset;  // 0-based word indices, ascending
    Winner winner = Winner::Team;
    long long max_run = -1;
};

struct EveryNReport {
    int n = 0;
    bool all_team = true;
    std::vector<SubsetVerdict> subsets;
};

namespace detail {

template <class Fn>
void for_each_combination(int total, int k, Fn fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == total - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

} // namespace detail

/// Run decide on every n-subset of the system. The report lists subsets
/// in lexicographic order, so results do not depend on evaluation order.
inline EveryNReport verify_every_n(const WordSystem& sys, int n,
                                   SchedulerModel model = SchedulerModel::Immediate,
                                   long long budget = 100'000'000) {
    if (n < 1 || static_cast<std::size_t>(n) > sys.words.size())
        throw Error("subset size out of range");
    EveryNReport rep;
    rep.n = n;
    detail::for_each_combination(static_cast<int>(sys.words.size()), n, [&](const std::vector<int>& idx) {
        DecideOptions opt;
        opt.model = model;
        opt.budget = budget;
        const Verdict v = decide(sys.subset(idx), opt);
        SubsetVerdict sv;
        sv.subset = idx;
        sv.winner = v.winner;
        sv.max_run = v.max_run;
        if (v.winner == Winner::Scheduler) rep.all_team = false;
        rep.subsets.push_back(std::move(sv));
    });
    return rep;
}

/// Extend a system satisfying the every-n condition by one more word:
/// the concatenation of the first n words, each padded to at least t
/// letters, where t exceeds the longest possible run over all n-subsets
/// and starts. Throws Error when the every-n precondition fails.
inline Word extend(const WordSystem& sys, int n, SchedulerModel model = SchedulerModel::Immediate,
                   long long budget = 100'000'000) {
    if (n < 1 || static_cast<std::size_t>(n) > sys.words.size())
        throw Error("subset size out of range");
    long long t = 1;  // degenerate all-safe systems still get nonempty pieces
    detail::for_each_combination(static_cast<int>(sys.words.size()), n, [&](const std::vector<int>& idx) {
        DecideOptions opt;
        opt.model = model;
        opt.budget = budget;
        const Verdict v = decide(sys.subset(idx), opt);
        if (v.winner == Winner::Scheduler)
            throw Error("system does not satisfy the every-n condition");
        t = std::max(t, v.max_run + 1);
    });

    Word out;
    for (int i = 0; i < n; ++i) {
        const Word& w = sys.words[static_cast<std::size_t>(i)];
        if (static_cast<long long>(w.size()) >= t) {
            out = concat(out, w);
        } else {
            const long long r = (t + static_cast<long long>(w.size()) - 1) /
                                static_cast<long long>(w.size());
            const Word wr = power(w, r);
            out = concat(out, Word(std::vector<Chair>(wr.letters().begin(),
                                                      wr.letters().begin() + t)));
        }
    }
    return out;
}

/// Power-lift a terminal collection after concatenating sigma onto word
/// i: every other word is raised to the k-th power, word i becomes
/// (w_i ∘ sigma)^2. Requires k >= |w_i| + |sigma| and sigma full.
inline WordSystem lift_power(const WordSystem& collection, int i, const Word& sigma, long long k) {
    collection.validate();
    collection.require_nonempty_words();
    if (i < 0 || static_cast<std::size_t>(i) >= collection.words.size())
        throw Error("word index out of range");
    if (sigma.empty() || !is_full(sigma, collection.m))
        throw Error("sigma must be a full word over the alphabet");
    const long long bound = static_cast<long long>(collection.words[static_cast<std::size_t>(i)].size()) +
                            static_cast<long long>(sigma.size());
    if (k < bound)
        throw BoundViolated("k=" + std::to_string(k) + " below |w_i|+|sigma|=" + std::to_string(bound));
    WordSystem out;
    out.m = collection.m;
    for (std::size_t j = 0; j < collection.words.size(); ++j) {
        if (static_cast<int>(j) == i)
            out.words.push_back(power(concat(collection.words[j], sigma), 2));
        else
            out.words.push_back(power(collection.words[j], k));
    }
    return out;
}

/// The special case of lift_power with sigma the cyclic concatenation of
/// everything after word i: extras first appended to the collection, then
/// wrapping around through the words before i.
inline WordSystem lift_concat(const WordSystem& collection, int i, const std::vector<Word>& extras,
                              long long k) {
    collection.validate();
    collection.require_nonempty_words();
    if (i < 0 || static_cast<std::size_t>(i) >= collection.words.size())
        throw Error("word index out of range");
    for (const Word& e : extras)
        if (e.empty() || !is_full(e, collection.m) || e.max_chair() > collection.m)
            throw Error("extra words must be full over the alphabet");
    Word sigma;
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < collection.words.size(); ++j)
        sigma = concat(sigma, collection.words[j]);
    for (const Word& e : extras) sigma = concat(sigma, e);
    for (std::size_t j = 0; j < static_cast<std::size_t>(i); ++j)
        sigma = concat(sigma, collection.words[j]);
    return lift_power(collection, i, sigma, k);
}

} // namespace mc
