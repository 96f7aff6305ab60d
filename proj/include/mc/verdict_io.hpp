#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "mc/errors.hpp"
#include "mc/trace_io.hpp"
#include "mc/verifier.hpp"

// Machine-readable verdict file:
//
//   mc-verdict v1
//   system=<name>
//   model=<model>
//   starts=<all|k1,...,kn>
//   states=<product of word lengths>
//   winner=<Team|Scheduler>
//   max_run=<int>                      (Team only)
//   cycle_length=<k>                   (Scheduler only)
//   state 0: positions=(...)           (Scheduler only)
//   step <i>: moved={ids} -> positions=(...)
//
// Moved ids are 1-based players; positions are 0-based word offsets.

namespace mc {

struct VerdictFile {
    std::string system_name = "-";
    SchedulerModel model = SchedulerModel::Immediate;
    std::string starts = "all";
    Verdict verdict;
};

inline std::string serialize_verdict(const VerdictFile& vf) {
    std::ostringstream out;
    out << "mc-verdict v1\n";
    out << "system=" << vf.system_name << "\n";
    out << "model=" << to_string(vf.model) << "\n";
    out << "starts=" << vf.starts << "\n";
    out << "states=" << static_cast<long long>(vf.verdict.state_count) << "\n";
    out << "winner=" << to_string(vf.verdict.winner) << "\n";
    if (vf.verdict.winner == Winner::Team) {
        out << "max_run=" << vf.verdict.max_run << "\n";
    } else {
        const CycleWitness& c = vf.verdict.cycle;
        out << "cycle_length=" << c.moved.size() << "\n";
        out << "state 0: positions=(" << detail::join_ints(c.positions.at(0), ',') << ")\n";
        for (std::size_t i = 0; i < c.moved.size(); ++i)
            out << "step " << i + 1 << ": moved={" << detail::join_ints(c.moved[i], ',', 1)
                << "} -> positions=(" << detail::join_ints(c.positions.at(i + 1), ',') << ")\n";
    }
    return out.str();
}

inline VerdictFile parse_verdict(std::istream& in) {
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || line != "mc-verdict v1")
        throw ParseError(lineno, "expected header 'mc-verdict v1'");
    VerdictFile vf;
    auto field = [&](const std::string& key) {
        ++lineno;
        if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
            throw ParseError(lineno, "expected '" + key + "=...'");
        return line.substr(key.size() + 1);
    };
    vf.system_name = field("system");
    auto model = parse_model(field("model"));
    if (!model) throw ParseError(lineno, "unknown model");
    vf.model = *model;
    vf.starts = field("starts");
    vf.verdict.state_count = std::stod(field("states"));
    const std::string winner = field("winner");
    if (winner == "Team") {
        vf.verdict.winner = Winner::Team;
        vf.verdict.max_run = std::stoll(field("max_run"));
    } else if (winner == "Scheduler") {
        vf.verdict.winner = Winner::Scheduler;
        const long long len = std::stoll(field("cycle_length"));
        ++lineno;
        if (!std::getline(in, line) || line.rfind("state 0: ", 0) != 0)
            throw ParseError(lineno, "expected 'state 0: ...'");
        vf.verdict.cycle.positions.push_back(detail::parse_positions(line, lineno));
        for (long long i = 0; i < len; ++i) {
            ++lineno;
            if (!std::getline(in, line) || line.rfind("step ", 0) != 0)
                throw ParseError(lineno, "expected 'step <i>: ...'");
            const auto mpos = line.find("moved={");
            const auto mend = line.find('}', mpos);
            if (mpos == std::string::npos || mend == std::string::npos)
                throw ParseError(lineno, "missing moved={...}");
            vf.verdict.cycle.moved.push_back(
                detail::split_ints(line.substr(mpos + 7, mend - (mpos + 7)), ',', lineno, -1));
            vf.verdict.cycle.positions.push_back(detail::parse_positions(line, lineno));
        }
    } else {
        throw ParseError(lineno, "unknown winner '" + winner + "'");
    }
    return vf;
}

inline VerdictFile parse_verdict(const std::string& text) {
    std::istringstream in(text);
    return parse_verdict(in);
}

inline void write_verdict_file(const std::string& path, const VerdictFile& vf) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write verdict file: " + path);
    out << serialize_verdict(vf);
}

inline VerdictFile read_verdict_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open verdict file: " + path);
    return parse_verdict(in);
}

} // namespace mc
