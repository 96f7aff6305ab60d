#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "mc/engine.hpp"
#include "mc/errors.hpp"

// Trace text format:
//
//   mc-trace v1
//   system=<name>
//   model=<immediate|pairwise|canonical>
//   words=<1-based word indices, comma-separated>
//   starts=<k1,...,kn>
//   init: positions=(p1,...,pn) chairs=(c1,...,cn)
//   step <k>: moved={ids} -> positions=(p1,...,pn) chairs=(c1,...,cn)
//
// Player ids and chairs are 1-based; positions and starts are 0-based
// offsets into each word.

namespace mc {

namespace detail {

inline std::string join_ints(const std::vector<int>& xs, char sep, int offset = 0) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += sep;
        out += std::to_string(xs[i] + offset);
    }
    return out;
}

inline std::vector<int> split_ints(const std::string& s, char sep, int lineno, int offset = 0) {
    std::vector<int> out;
    if (s.empty()) return out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, sep)) {
        try {
            out.push_back(std::stoi(tok) + offset);
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad integer '" + tok + "'");
        }
    }
    return out;
}

inline std::string config_suffix(const Configuration& c, const WordSystem& sys) {
    std::string pos, chairs;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i > 0) {
            pos += ',';
            chairs += ',';
        }
        pos += std::to_string(position_of(c.players[i], sys));
        chairs += std::to_string(chair_of(c.players[i], sys));
    }
    return "positions=(" + pos + ") chairs=(" + chairs + ")";
}

// Parses "... positions=(..) chairs=(..)" and returns the positions.
inline std::vector<int> parse_positions(const std::string& line, int lineno) {
    const auto p = line.find("positions=(");
    if (p == std::string::npos) throw ParseError(lineno, "missing positions=(...)");
    const auto close = line.find(')', p);
    if (close == std::string::npos) throw ParseError(lineno, "unterminated positions");
    return split_ints(line.substr(p + 11, close - (p + 11)), ',', lineno);
}

} // namespace detail

inline std::string serialize_trace(const Trace& t, const WordSystem& sys) {
    std::ostringstream out;
    out << "mc-trace v1\n";
    out << "system=" << t.system_name << "\n";
    out << "model=" << to_string(t.model) << "\n";
    out << "words=" << detail::join_ints(t.word_indices, ',', 1) << "\n";
    out << "starts=" << detail::join_ints(t.starts, ',') << "\n";
    out << "init: " << detail::config_suffix(t.initial, sys) << "\n";
    std::size_t k = 0;
    for (const TraceStep& step : t.steps) {
        ++k;
        out << "step " << k << ": moved={" << detail::join_ints(step.moved, ',', 1) << "} -> "
            << detail::config_suffix(step.config, sys) << "\n";
    }
    return out.str();
}

inline Trace parse_trace(std::istream& in, const WordSystem& sys) {
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || line != "mc-trace v1")
        throw ParseError(lineno, "expected header 'mc-trace v1'");

    Trace t;
    auto expect_field = [&](const std::string& key) {
        ++lineno;
        if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
            throw ParseError(lineno, "expected '" + key + "=...'");
        return line.substr(key.size() + 1);
    };
    t.system_name = expect_field("system");
    const std::string model_str = expect_field("model");
    auto model = parse_model(model_str);
    if (!model) throw ParseError(lineno, "unknown model '" + model_str + "'");
    t.model = *model;
    t.word_indices = detail::split_ints(expect_field("words"), ',', lineno, -1);
    t.starts = detail::split_ints(expect_field("starts"), ',', lineno);

    ++lineno;
    if (!std::getline(in, line) || line.rfind("init: ", 0) != 0)
        throw ParseError(lineno, "expected 'init: ...'");
    t.initial = make_configuration(t.word_indices, t.starts);
    if (detail::parse_positions(line, lineno) !=
        [&] {
            std::vector<int> pos;
            for (const PlayerState& p : t.initial.players) pos.push_back(position_of(p, sys));
            return pos;
        }())
        throw ParseError(lineno, "init positions disagree with starts");

    Configuration cur = t.initial;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) break;
        if (line.rfind("step ", 0) != 0) throw ParseError(lineno, "expected 'step <k>: ...'");
        const auto mpos = line.find("moved={");
        const auto mend = line.find('}', mpos);
        if (mpos == std::string::npos || mend == std::string::npos)
            throw ParseError(lineno, "missing moved={...}");
        TraceStep step;
        step.moved = detail::split_ints(line.substr(mpos + 7, mend - (mpos + 7)), ',', lineno, -1);
        step.config = cur;
        for (int i : step.moved) {
            if (i < 0 || static_cast<std::size_t>(i) >= cur.size())
                throw ParseError(lineno, "moved player out of range");
            step.config.players[static_cast<std::size_t>(i)].moves += 1;
        }
        std::vector<int> want;
        for (const PlayerState& p : step.config.players) want.push_back(position_of(p, sys));
        if (detail::parse_positions(line, lineno) != want)
            throw ParseError(lineno, "positions disagree with accumulated moves");
        cur = step.config;
        t.steps.push_back(std::move(step));
    }
    return t;
}

inline Trace parse_trace(const std::string& text, const WordSystem& sys) {
    std::istringstream in(text);
    return parse_trace(in, sys);
}

inline void write_trace_file(const std::string& path, const Trace& t, const WordSystem& sys) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trace file: " + path);
    out << serialize_trace(t, sys);
}

inline Trace read_trace_file(const std::string& path, const WordSystem& sys) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file: " + path);
    return parse_trace(in, sys);
}

} // namespace mc
