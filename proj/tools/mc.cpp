// mc -- construct, verify, simulate and attack Musical Chairs strategies.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mc/churn.hpp"
#include "mc/constructions.hpp"
#include "mc/engine.hpp"
#include "mc/topology.hpp"
#include "mc/trace_io.hpp"
#include "mc/verdict_io.hpp"
#include "mc/verifier.hpp"
#include "mc/word.hpp"
#include "mc/word_io.hpp"

namespace {

constexpr int kExitTeam = 0;
constexpr int kExitScheduler = 1;
constexpr int kExitBudget = 2;
constexpr int kExitParse = 3;
constexpr int kExitError = 4;
constexpr int kExitUsage = 64;

mc::SchedulerModel model_from_flag(const std::string& name) {
    auto m = mc::parse_model(name);
    if (!m) throw mc::Error("unknown model '" + name + "' (immediate|pairwise|canonical)");
    return *m;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

mc::Pairing parse_pairing(const std::string& s) {
    mc::Pairing p;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const auto dash = tok.find('-');
        if (dash == std::string::npos) throw mc::Error("pairing entries look like '3-4'");
        p.pairs.push_back({std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1))});
    }
    return p;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mc::Error("cannot write " + out_path);
    out << text;
}

int cmd_construct(int n, long long budget, const std::string& out_prefix) {
    const mc::RecursivePair rp = mc::build_recursive(n, budget);
    std::cout << "s-words over [" << 2 * n - 1 << "]:\n";
    for (std::size_t i = 0; i < rp.s_words.size(); ++i) {
        const mc::Word& w = rp.s_words[i];
        std::cout << "  s" << i + 1 << " |" << w.size() << "| = "
                  << (w.size() <= 64 ? w.str() : w.str().substr(0, 64) + "...") << "\n";
    }
    std::cout << "w-words over [" << 2 * n << "]:\n";
    for (std::size_t i = 0; i < rp.w_words.size(); ++i) {
        const mc::Word& w = rp.w_words[i];
        std::cout << "  w" << i + 1 << " |" << w.size() << "| = "
                  << (w.size() <= 64 ? w.str() : w.str().substr(0, 64) + "...") << "\n";
    }
    if (!out_prefix.empty()) {
        mc::write_words_file(out_prefix + "-s.words", rp.s_system());
        mc::write_words_file(out_prefix + "-w.words", rp.w_system());
        std::cout << "wrote " << out_prefix << "-s.words and " << out_prefix << "-w.words\n";
    }
    return kExitTeam;
}

int cmd_verify(const std::string& system_path, const std::string& subset_flag,
               const std::string& model_name, const std::string& starts_flag, long long budget,
               const std::string& out_path) {
    mc::WordSystem sys = mc::read_words_file(system_path);
    if (!subset_flag.empty()) {
        std::vector<int> subset;
        for (int i : parse_int_list(subset_flag)) subset.push_back(i - 1);
        sys = sys.subset(subset);
    }
    mc::DecideOptions opt;
    opt.model = model_from_flag(model_name);
    opt.budget = budget;
    if (starts_flag != "all") opt.starts = parse_int_list(starts_flag);
    const mc::Verdict v = mc::decide(sys, opt);

    mc::VerdictFile vf;
    vf.system_name = system_path;
    vf.model = opt.model;
    vf.starts = starts_flag;
    vf.verdict = v;
    const std::string text = mc::serialize_verdict(vf);
    if (!out_path.empty()) mc::write_verdict_file(out_path, vf);
    std::cout << text;
    return v.winner == mc::Winner::Team ? kExitTeam : kExitScheduler;
}

int cmd_terminal(const std::string& system_path, const std::string& model_name, long long budget,
                 const std::string& out_path) {
    const mc::WordSystem sys = mc::read_words_file(system_path);
    const mc::TerminalityReport rep = mc::is_terminal(sys, model_from_flag(model_name), budget);
    if (rep.terminal) {
        std::cout << "terminal: no schedule fully traverses any word\n";
        return kExitTeam;
    }
    std::cout << "not terminal: player " << rep.lapped_player + 1 << " laps in "
              << rep.witness.steps.size() << " moves from starts=(";
    for (std::size_t i = 0; i < rep.witness.starts.size(); ++i)
        std::cout << (i ? "," : "") << rep.witness.starts[i];
    std::cout << ")\n";
    if (!out_path.empty()) {
        mc::Trace t = rep.witness;
        t.system_name = system_path;
        mc::write_trace_file(out_path, t, sys);
    }
    return kExitScheduler;
}

int cmd_simulate(const std::string& system_path, const std::string& subset_flag,
                 const std::string& starts_flag, const std::string& model_name,
                 const std::string& strategy_name, const std::string& script_path,
                 std::uint64_t seed, long long max_steps, const std::string& out_path) {
    const mc::WordSystem sys = mc::read_words_file(system_path);
    std::vector<int> subset;
    if (subset_flag.empty()) {
        for (std::size_t i = 0; i < sys.count(); ++i) subset.push_back(static_cast<int>(i));
    } else {
        for (int i : parse_int_list(subset_flag)) subset.push_back(i - 1);
    }
    std::vector<int> starts = parse_int_list(starts_flag);

    mc::Strategy strategy;
    if (strategy_name == "random") {
        strategy = mc::random_strategy(seed);
    } else if (strategy_name == "canonical-first") {
        strategy = mc::first_choice_strategy();
    } else if (strategy_name == "script") {
        std::ifstream in(script_path);
        if (!in) throw mc::Error("cannot open script file: " + script_path);
        std::vector<std::vector<int>> script;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<int> moved;
            for (int id : parse_int_list(line)) moved.push_back(id - 1);
            script.push_back(moved);
        }
        strategy = mc::scripted_strategy(std::move(script));
    } else {
        throw mc::Error("unknown strategy '" + strategy_name + "'");
    }

    const mc::Trace t = mc::simulate(sys, subset, starts, strategy, max_steps,
                                     model_from_flag(model_name), system_path);
    const std::string text = mc::serialize_trace(t, sys);
    emit(out_path, text);
    if (!out_path.empty() && out_path != "-")
        std::cout << (mc::is_safe(t.final_configuration(), sys) ? "terminated safely"
                                                                : "still conflicted")
                  << " after " << t.steps.size() << " steps\n";
    return kExitTeam;
}

int cmd_play(const std::string& system_path, const std::string& subset_flag,
             const std::string& starts_flag, const std::string& model_name, long long max_steps) {
    const mc::WordSystem sys = mc::read_words_file(system_path);
    std::vector<int> subset;
    if (subset_flag.empty()) {
        for (std::size_t i = 0; i < sys.count(); ++i) subset.push_back(static_cast<int>(i));
    } else {
        for (int i : parse_int_list(subset_flag)) subset.push_back(i - 1);
    }
    const std::vector<int> starts = parse_int_list(starts_flag);
    const mc::SchedulerModel model = model_from_flag(model_name);

    // Human scheduler: show the conflicts, read a moved set each round.
    mc::Strategy human = [&](const mc::Configuration& c, const std::vector<mc::Successor>& next) {
        std::cout << "chairs:";
        for (std::size_t i = 0; i < c.size(); ++i)
            std::cout << " P" << i + 1 << "=" << mc::chair_of(c.players[i], sys);
        std::cout << "\nconflicted:";
        for (int i : mc::conflicted(c, sys)) std::cout << " " << i + 1;
        std::cout << "\nmove which players? (comma-separated ids, empty = first option) > "
                  << std::flush;
        std::string line;
        if (!std::getline(std::cin, line) || line.empty()) return std::size_t{0};
        std::vector<int> want;
        for (int id : parse_int_list(line)) want.push_back(id - 1);
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < next.size(); ++i)
            if (next[i].moved == want) return i;
        std::cout << "not a legal move here; moving first option instead\n";
        return std::size_t{0};
    };

    const mc::Trace t = mc::simulate(sys, subset, starts, human, max_steps, model, system_path);
    std::cout << (mc::is_safe(t.final_configuration(), sys) ? "safe configuration reached"
                                                            : "round limit reached")
              << " after " << t.steps.size() << " rounds\n";
    return kExitTeam;
}

int cmd_random(int N, int m, int L, std::uint64_t seed, bool ensure_full,
               const std::string& out_path) {
    const mc::RandomWordsReport rep =
        ensure_full ? mc::random_full_words(N, m, L, seed) : mc::random_words(N, m, L, seed);
    int full = 0;
    for (bool f : rep.full) full += f ? 1 : 0;
    std::cout << "generated " << N << " words of length " << L << " over [" << m << "], seed "
              << seed << "\n";
    std::cout << "full words: " << full << "/" << N;
    for (std::size_t i = 0; i < rep.attempts.size(); ++i)
        if (rep.attempts[i] > 1)
            std::cout << " (word " << i + 1 << " redrawn " << rep.attempts[i] - 1 << "x)";
    std::cout << "\n";
    if (!out_path.empty()) mc::write_words_file(out_path, rep.system);
    return kExitTeam;
}

int cmd_perms(int p, int d, std::optional<int> n, const std::string& out_path) {
    const mc::FieldPermutationFamily fam = mc::ff_permutations(p, d);
    std::cout << "family: " << fam.perms.count() << " permutations of [" << fam.m << "] from "
              << fam.polys.size() << " polynomials (degree " << 2 * d << ")\n";
    if (n) {
        const mc::LcsCertificate cert = mc::check_lcs_certificate(fam.perms, *n);
        std::cout << "pairwise cyclic LCS r=" << cert.r << ", threshold (n-1)r=" << cert.threshold
                  << ", m=" << fam.m << "\n";
        std::cout << (cert.certified ? "certified terminal for n=" + std::to_string(*n)
                                     : "inconclusive for n=" + std::to_string(*n))
                  << "\n";
    }
    if (!out_path.empty()) mc::write_words_file(out_path, fam.perms);
    return kExitTeam;
}

int cmd_lcs(const std::string& system_path, int i, int j) {
    const mc::WordSystem sys = mc::read_words_file(system_path);
    const int v = mc::cyclic_lcs(sys.word(static_cast<std::size_t>(i - 1)),
                                 sys.word(static_cast<std::size_t>(j - 1)));
    std::cout << v << "\n";
    return kExitTeam;
}

int cmd_extend(const std::string& system_path, int n, const std::string& model_name,
               long long budget, const std::string& out_path) {
    mc::WordSystem sys = mc::read_words_file(system_path);
    const mc::Word extra = mc::extend(sys, n, model_from_flag(model_name), budget);
    std::cout << "new word of length " << extra.size() << "\n";
    sys.words.push_back(extra);
    if (!out_path.empty()) mc::write_words_file(out_path, sys);
    return kExitTeam;
}

int cmd_topology_adversary(const std::string& system_path, const std::string& pairing_flag,
                           long long t, long long budget, const std::string& out_path,
                           const std::string& stats_path) {
    const mc::WordSystem sys = mc::read_words_file(system_path);
    const mc::Pairing pairing = pairing_flag.empty()
                                    ? mc::consecutive_pairing(static_cast<int>(sys.count()))
                                    : parse_pairing(pairing_flag);
    std::ostringstream stats;
    stats << "step facets splits max_depth mono_nonaux\n";
    const mc::Trace tr = mc::adversary(sys, pairing, t, budget, [&](const mc::AdversaryStats& st) {
        stats << st.step << " " << st.facets << " " << st.splits << " " << st.max_depth << " "
              << st.mono_nonaux << "\n";
    }, system_path);
    mc::replay_validate(tr, sys);
    std::cout << "schedule of " << tr.steps.size() << " moves on words";
    for (int w : tr.word_indices) std::cout << " " << w + 1;
    std::cout << "; replay-validated, no safe configuration reached\n";
    if (!stats_path.empty()) emit(stats_path, stats.str());
    if (!out_path.empty())
        mc::write_trace_file(out_path, tr, sys);
    else
        std::cout << mc::serialize_trace(tr, sys);
    return kExitTeam;
}

int cmd_freq_demo(const std::string& system_path, const std::string& scenario_path,
                  int static_devices, std::uint64_t seed, const std::string& policy_name,
                  long long tail, long long budget) {
    const mc::WordSystem sys = mc::read_words_file(system_path);
    mc::ChurnScenario sc;
    if (!scenario_path.empty())
        sc = mc::read_scenario_file(scenario_path);
    else if (static_devices > 0)
        sc = mc::static_scenario(sys, static_devices, tail, seed);
    else
        throw mc::Error("freq-demo needs --scenario or --static");

    mc::ChurnPolicy policy;
    if (policy_name == "canonical-both")
        policy = mc::ChurnPolicy::CanonicalBoth;
    else if (policy_name == "seeded-random")
        policy = mc::ChurnPolicy::SeededRandom;
    else if (policy_name == "worst-case")
        policy = mc::ChurnPolicy::WorstCase;
    else
        throw mc::Error("unknown policy '" + policy_name + "'");

    const mc::ChurnReport rep = mc::freq_demo(sys, sc, seed, policy, budget);
    std::cout << "interference per device:";
    for (const auto& [dev, k] : rep.interference) std::cout << " d" << dev << "=" << k;
    std::cout << "\nmax interference: " << rep.max_interference << "\n";
    if (rep.t_bound)
        std::cout << "guaranteed bound T (worst subset max_run): " << *rep.t_bound
                  << (rep.max_interference <= *rep.t_bound ? " (holds)" : " (VIOLATED)") << "\n";
    else if (rep.system_winning && !*rep.system_winning)
        std::cout << "warning: some word subset is Scheduler-won; no bound exists\n";
    else
        std::cout << "bound T not computed (over budget)\n";
    for (const mc::ChurnInterval& iv : rep.intervals)
        std::cout << "interval @" << iv.from << " len=" << iv.length
                  << " rounds=" << iv.conflict_rounds << (iv.resolved ? " resolved" : " unresolved")
                  << "\n";
    return kExitTeam;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Musical Chairs workbench: build, verify and attack MC(n,m) strategies"};
    app.require_subcommand(1);

    std::string system_path, out_path, starts_flag = "all", model_name = "immediate";
    std::string subset_flag, strategy_name = "random", script_path, pairing_flag;
    std::string scenario_path, stats_path, policy_name = "canonical-both";
    std::uint64_t seed = 0;
    long long budget = 100'000'000, max_steps = 1000, t = 10, tail = 256;
    int n = 1, N = 6, m = 21, L = 64, p = 5, d = 1, i = 1, j = 2, static_devices = 0;
    std::optional<int> cert_n;

    auto* construct = app.add_subcommand("construct", "recursive optimal s/w word families");
    construct->add_option("--n", n, "players")->required();
    construct->add_option("--budget", budget, "max word length");
    construct->add_option("--out", out_path, "output file prefix");

    auto* verify = app.add_subcommand("verify", "decide the winner by exhaustive search");
    verify->add_option("--system", system_path)->required();
    verify->add_option("--subset", subset_flag, "1-based word indices (default: all)");
    verify->add_option("--model", model_name, "immediate|pairwise|canonical");
    verify->add_option("--starts", starts_flag, "k1,...,kn or 'all'");
    verify->add_option("--budget", budget);
    verify->add_option("--out", out_path, "verdict file");

    auto* terminal = app.add_subcommand("terminal", "check that no word can be fully traversed");
    terminal->add_option("--system", system_path)->required();
    terminal->add_option("--model", model_name);
    terminal->add_option("--budget", budget);
    terminal->add_option("--out", out_path, "witness trace file");

    auto* simulate = app.add_subcommand("simulate", "drive the game with a strategy");
    simulate->add_option("--system", system_path)->required();
    simulate->add_option("--subset", subset_flag, "1-based word indices");
    simulate->add_option("--starts", starts_flag)->required();
    simulate->add_option("--model", model_name);
    simulate->add_option("--strategy", strategy_name, "random|canonical-first|script");
    simulate->add_option("--script", script_path, "moved sets, one comma-separated line each");
    simulate->add_option("--seed", seed);
    simulate->add_option("--max-steps", max_steps);
    simulate->add_option("--out", out_path, "trace file ('-' for stdout)");

    auto* play = app.add_subcommand("play", "interactive scheduler REPL");
    play->add_option("--system", system_path)->required();
    play->add_option("--subset", subset_flag);
    play->add_option("--starts", starts_flag)->required();
    play->add_option("--model", model_name);
    play->add_option("--max-steps", max_steps);

    auto* random = app.add_subcommand("random", "seeded random word system");
    random->add_option("--N", N)->required();
    random->add_option("--m", m)->required();
    random->add_option("--L", L)->required();
    random->add_option("--seed", seed);
    random->add_flag("--ensure-full", "redraw non-full words from bumped seed streams");
    random->add_option("--out", out_path);

    auto* perms = app.add_subcommand("perms", "finite-field permutation family + certificate");
    perms->add_option("--p", p, "prime")->required();
    perms->add_option("--d", d, "half the polynomial degree")->required();
    perms->add_option("--n", cert_n, "check the LCS certificate for n players");
    perms->add_option("--out", out_path);

    auto* lcs = app.add_subcommand("lcs", "cyclic LCS of two permutations in a system");
    lcs->add_option("--system", system_path)->required();
    lcs->add_option("--i", i, "1-based word index")->required();
    lcs->add_option("--j", j, "1-based word index")->required();

    auto* extend = app.add_subcommand("extend", "append a word preserving the every-n condition");
    extend->add_option("--system", system_path)->required();
    extend->add_option("--n", n)->required();
    extend->add_option("--model", model_name);
    extend->add_option("--budget", budget);
    extend->add_option("--out", out_path);

    auto* adversary = app.add_subcommand("topology-adversary",
                                         "monochromatic-facet walk emitting a long schedule");
    adversary->add_option("--system", system_path)->required();
    adversary->add_option("--pairing", pairing_flag, "e.g. 3-4,5-6 (default consecutive)");
    adversary->add_option("--t", t, "schedule length to force")->required();
    adversary->add_option("--budget", budget, "facet budget");
    adversary->add_option("--out", out_path, "trace file");
    adversary->add_option("--stats", stats_path, "facet statistics log");

    auto* freq = app.add_subcommand("freq-demo", "frequency-hopping churn simulation");
    freq->add_option("--system", system_path)->required();
    freq->add_option("--scenario", scenario_path);
    freq->add_option("--static", static_devices, "static scenario with this many devices");
    freq->add_option("--seed", seed);
    freq->add_option("--policy", policy_name, "canonical-both|seeded-random|worst-case");
    freq->add_option("--tail", tail, "rounds granted after the last event");
    freq->add_option("--budget", budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (construct->parsed()) return cmd_construct(n, budget, out_path);
        if (verify->parsed())
            return cmd_verify(system_path, subset_flag, model_name, starts_flag, budget, out_path);
        if (terminal->parsed()) return cmd_terminal(system_path, model_name, budget, out_path);
        if (simulate->parsed())
            return cmd_simulate(system_path, subset_flag, starts_flag, model_name, strategy_name,
                                script_path, seed, max_steps, out_path);
        if (play->parsed()) return cmd_play(system_path, subset_flag, starts_flag, model_name, max_steps);
        if (random->parsed())
            return cmd_random(N, m, L, seed, random->count("--ensure-full") > 0, out_path);
        if (perms->parsed()) return cmd_perms(p, d, cert_n, out_path);
        if (lcs->parsed()) return cmd_lcs(system_path, i, j);
        if (extend->parsed()) return cmd_extend(system_path, n, model_name, budget, out_path);
        if (adversary->parsed())
            return cmd_topology_adversary(system_path, pairing_flag, t, budget, out_path, stats_path);
        if (freq->parsed())
            return cmd_freq_demo(system_path, scenario_path, static_devices, seed, policy_name,
                                 tail, budget);
    } catch (const mc::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const mc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const mc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
