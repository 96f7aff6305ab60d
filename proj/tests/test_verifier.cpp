#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "mc/constructions.hpp"
#include "mc/verifier.hpp"
#include "oracle.hpp"

using helpers::W;
using helpers::system_of;
using namespace mc;

namespace {

// Replay a cycle witness against oracle semantics: every moved set must
// be legal at its configuration and the walk must close.
void check_cycle(const WordSystem& sys, const CycleWitness& c, oracle::Model model) {
    REQUIRE(c.positions.size() == c.moved.size() + 1);
    REQUIRE(c.positions.front() == c.positions.back());
    REQUIRE(!c.moved.empty());
    for (std::size_t k = 0; k < c.moved.size(); ++k) {
        const auto legal = oracle::moved_sets(oracle::chairs_at(sys, c.positions[k]), model);
        CHECK(std::find(legal.begin(), legal.end(), c.moved[k]) != legal.end());
        std::vector<int> nxt = c.positions[k];
        for (int i : c.moved[k])
            nxt[static_cast<std::size_t>(i)] =
                (nxt[static_cast<std::size_t>(i)] + 1) %
                static_cast<int>(sys.words[static_cast<std::size_t>(i)].size());
        CHECK(nxt == c.positions[k + 1]);
    }
}

oracle::Model to_oracle(SchedulerModel m) {
    switch (m) {
        case SchedulerModel::Immediate: return oracle::Model::Immediate;
        case SchedulerModel::PairwiseImmediate: return oracle::Model::Pairwise;
        default: return oracle::Model::Canonical;
    }
}

constexpr SchedulerModel kModels[] = {SchedulerModel::Immediate,
                                      SchedulerModel::PairwiseImmediate,
                                      SchedulerModel::Canonical};

} // namespace

TEST_CASE("decide: lock-step duplicate words lose") {
    const WordSystem dup = system_of(2, {"12", "12"});
    const Verdict v = decide(dup);
    REQUIRE(v.winner == Winner::Scheduler);
    check_cycle(dup, v.cycle, oracle::Model::Immediate);
    // the witness is the lock-step cycle: both players move together
    for (const auto& moved : v.cycle.moved) CHECK(moved == std::vector<int>{0, 1});
}

TEST_CASE("decide: constant distinct words win with zero run") {
    const WordSystem sys = system_of(2, {"1", "2"});
    const Verdict v = decide(sys);
    CHECK(v.winner == Winner::Team);
    CHECK(v.max_run == 0);
    CHECK(max_run(sys) == 0);
}

TEST_CASE("decide: {12,21} cycles by moving both twice") {
    const WordSystem sys = system_of(2, {"12", "21"});
    const Verdict v = decide(sys);
    REQUIRE(v.winner == Winner::Scheduler);
    check_cycle(sys, v.cycle, oracle::Model::Immediate);
    CHECK(v.cycle.moved.size() == 2);
    const std::set<std::vector<int>> cycle_states(v.cycle.positions.begin(),
                                                  v.cycle.positions.end());
    CHECK(cycle_states == std::set<std::vector<int>>{{0, 1}, {1, 0}});
    CHECK_THROWS_AS(max_run(sys), Cyclic);
}

TEST_CASE("decide with fixed starts searches only the reachable part") {
    const WordSystem sys = system_of(2, {"12", "21"});
    DecideOptions safe_start;
    safe_start.starts = std::vector<int>{0, 0};
    CHECK(decide(sys, safe_start).winner == Winner::Team);
    CHECK(decide(sys, safe_start).max_run == 0);

    DecideOptions unsafe_start;
    unsafe_start.starts = std::vector<int>{0, 1};
    CHECK(decide(sys, unsafe_start).winner == Winner::Scheduler);
}

TEST_CASE("decide respects the state budget") {
    const WordSystem sys = system_of(3, {"123123", "231231", "312312"});
    DecideOptions opt;
    opt.budget = 100;
    CHECK_THROWS_AS(decide(sys, opt), BudgetExceeded);
}

TEST_CASE("decide matches the brute-force oracle", "[property]") {
    std::mt19937_64 rng = seeded_rng(2024);
    for (int it = 0; it < 60; ++it) {
        const int n = 2 + static_cast<int>(bounded(rng, 2));
        const int m = 2 + static_cast<int>(bounded(rng, 3));
        const WordSystem sys = helpers::random_system(rng, n, m, 5);
        for (SchedulerModel model : kModels) {
            DecideOptions opt;
            opt.model = model;
            const Verdict got = decide(sys, opt);
            const oracle::DecideResult want = oracle::decide(sys, to_oracle(model));
            CHECK((got.winner == Winner::Scheduler) == want.cyclic);
            if (!want.cyclic) CHECK(got.max_run == want.longest);
            else check_cycle(sys, got.cycle, to_oracle(model));
        }
    }
}

TEST_CASE("duplicated word always hands the win to the scheduler", "[property]") {
    std::mt19937_64 rng = seeded_rng(555);
    for (int it = 0; it < 40; ++it) {
        const int m = 2 + static_cast<int>(bounded(rng, 3));
        WordSystem sys = helpers::random_system(rng, 2, m, 5);
        sys.words.push_back(sys.words[static_cast<std::size_t>(bounded(rng, 2))]);
        CHECK(decide(sys).winner == Winner::Scheduler);
    }
}

TEST_CASE("recursive n=2 s-words: Team under all models, golden max_run") {
    const RecursivePair rp = build_recursive(2);
    const WordSystem sys = rp.s_system();
    for (SchedulerModel model : kModels) {
        DecideOptions opt;
        opt.model = model;
        const Verdict v = decide(sys, opt);
        CHECK(v.winner == Winner::Team);
        CHECK(v.max_run == 5);  // frozen from the topological-sort oracle
    }
    CHECK(oracle::decide(sys, oracle::Model::Immediate).longest == 5);
}

TEST_CASE("is_terminal: examples") {
    CHECK(is_terminal(system_of(1, {"11"})).terminal);  // a lone player never moves

    const WordSystem dup = system_of(2, {"12", "12"});
    const TerminalityReport rep = is_terminal(dup);
    REQUIRE_FALSE(rep.terminal);
    CHECK(rep.witness.steps.size() == 2);  // two lock-step moves complete a lap
    CHECK_NOTHROW(replay_validate(rep.witness, dup));
    long long lap_moves = 0;
    for (const TraceStep& s : rep.witness.steps)
        lap_moves += std::count(s.moved.begin(), s.moved.end(), rep.lapped_player);
    CHECK(lap_moves ==
          static_cast<long long>(dup.words[static_cast<std::size_t>(rep.lapped_player)].size()));
}

TEST_CASE("is_terminal: recursive n=2 s-words under every model") {
    const WordSystem sys = build_recursive(2).s_system();
    for (SchedulerModel model : kModels) CHECK(is_terminal(sys, model).terminal);
}

TEST_CASE("is_terminal matches oracle on small systems", "[property]") {
    std::mt19937_64 rng = seeded_rng(808);
    for (int it = 0; it < 40; ++it) {
        const WordSystem sys = helpers::random_system(rng, 2, 3, 3);
        for (SchedulerModel model : kModels) {
            const TerminalityReport rep = is_terminal(sys, model);
            CHECK(rep.terminal == oracle::terminal(sys, to_oracle(model)));
            if (!rep.terminal) CHECK_NOTHROW(replay_validate(rep.witness, sys));
        }
    }
}

TEST_CASE("terminal implies Team; Team implies terminal after power-lifting", "[property]") {
    std::mt19937_64 rng = seeded_rng(909);
    int seen_terminal = 0, seen_team = 0;
    for (int it = 0; it < 60; ++it) {
        const WordSystem sys = helpers::random_system(rng, 2, 3, 3);
        const bool term = is_terminal(sys).terminal;
        const Verdict v = decide(sys);
        if (term) {
            ++seen_terminal;
            CHECK(v.winner == Winner::Team);
        }
        if (v.winner == Winner::Team) {
            ++seen_team;
            WordSystem lifted;
            lifted.m = sys.m;
            for (const Word& w : sys.words) lifted.words.push_back(power(w, v.max_run + 1));
            CHECK(is_terminal(lifted).terminal);
        }
    }
    CHECK(seen_terminal > 0);
    CHECK(seen_team > 0);
}

TEST_CASE("verify_every_n") {
    SECTION("n=1 over full words always passes") {
        const WordSystem sys = system_of(2, {"12", "21", "1122"});
        CHECK(verify_every_n(sys, 1).all_team);
    }
    SECTION("a duplicated pair is reported") {
        const WordSystem sys = system_of(2, {"12", "12", "21"});
        const EveryNReport rep = verify_every_n(sys, 2);
        CHECK_FALSE(rep.all_team);
        REQUIRE(rep.subsets.size() == 3);
        CHECK(rep.subsets[0].subset == std::vector<int>{0, 1});
        CHECK(rep.subsets[0].winner == Winner::Scheduler);
    }
}

TEST_CASE("extend: plain concatenation when words already long enough") {
    // words that never collide: t = 1 and both keep their length
    const WordSystem easy = system_of(4, {"13", "24"});
    const Word ext = extend(easy, 2);
    CHECK(ext == W("1324"));
}

TEST_CASE("extend: n=2 recursive system gains a compatible third word") {
    const RecursivePair rp = build_recursive(2);
    WordSystem sys = rp.s_system();
    const Word third = extend(sys, 2);
    CHECK(is_full(third, 3));
    sys.words.push_back(third);
    CHECK(verify_every_n(sys, 2).all_team);

    SECTION("repeated application keeps the every-2 property") {
        const Word fourth = extend(sys, 2);
        sys.words.push_back(fourth);
        CHECK(verify_every_n(sys, 2).all_team);
    }
}

TEST_CASE("extend rejects systems violating the every-n condition") {
    CHECK_THROWS_AS(extend(system_of(2, {"12", "12"}), 2), Error);
}

TEST_CASE("lift_power: examples") {
    const WordSystem singleton{1, {W("11")}, {}};
    const WordSystem lifted = lift_power(singleton, 0, W("11"), 4);
    REQUIRE(lifted.words.size() == 1);
    CHECK(lifted.words[0] == W("11111111"));  // (11 ∘ 11)^2
    CHECK(is_terminal(lifted).terminal);

    CHECK_THROWS_AS(lift_power(singleton, 0, W("11"), 3), BoundViolated);
    CHECK_THROWS_AS(lift_power(WordSystem{2, {W("12")}, {}}, 0, W("11"), 10), Error);  // sigma not full
}

TEST_CASE("lift_concat reduces to lift_power with the wrap-around sigma") {
    const WordSystem coll = system_of(2, {"1122", "1212"});
    const std::vector<Word> extras = {W("2211")};
    const long long k = 4 + 4 + 4;
    const WordSystem via_concat = lift_concat(coll, 1, extras, k);
    const Word sigma = concat(W("2211"), W("1122"));  // extras then wrap to word 0
    const WordSystem via_power = lift_power(coll, 1, sigma, k);
    CHECK(via_concat.words == via_power.words);

    SECTION("p=1 collapses to the squared concatenation") {
        const WordSystem one = system_of(2, {"12"});
        const WordSystem out = lift_concat(one, 0, {W("21")}, 4);
        REQUIRE(out.words.size() == 1);
        CHECK(out.words[0] == power(W("1221"), 2));
    }
}

TEST_CASE("lifting preserves terminality on random terminal collections", "[property]") {
    // the lemma's hypotheses: a terminal collection of full words plus a
    // full sigma (a lone non-full power can be lapped in place)
    std::mt19937_64 rng = seeded_rng(618);
    const int m = 3;
    int tested = 0;
    while (tested < 50) {
        const int p = 1 + static_cast<int>(bounded(rng, 2));
        WordSystem coll;
        coll.m = m;
        for (int w = 0; w < p; ++w) {
            const int len = m + static_cast<int>(bounded(rng, 3));
            std::vector<Chair> letters = {1, 2, 3};
            for (int k = m; k < len; ++k)
                letters.push_back(static_cast<Chair>(bounded(rng, m)) + 1);
            deterministic_shuffle(letters, rng);
            coll.words.push_back(Word(std::move(letters)));
        }
        if (!is_terminal(coll).terminal) continue;
        ++tested;

        // a random full word over [m]
        std::vector<Chair> sig;
        for (Chair c = 1; c <= m; ++c) sig.push_back(c);
        deterministic_shuffle(sig, rng);
        const Word sigma{std::vector<Chair>(sig)};

        const int i = static_cast<int>(bounded(rng, coll.words.size()));
        const long long k =
            static_cast<long long>(coll.words[static_cast<std::size_t>(i)].size()) +
            static_cast<long long>(sigma.size());
        const WordSystem lifted = lift_power(coll, i, sigma, k);
        CHECK(is_terminal(lifted).terminal);

        long long total = static_cast<long long>(sigma.size());
        for (const Word& w : coll.words) total += static_cast<long long>(w.size());
        const WordSystem concat_lifted = lift_concat(coll, i, {sigma}, total);
        CHECK(is_terminal(concat_lifted).terminal);
    }
}
