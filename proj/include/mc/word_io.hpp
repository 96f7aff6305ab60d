#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mc/errors.hpp"
#include "mc/word.hpp"

// Word-system text format, one file per system:
//
//   mc-words v1
//   m=<int> count=<int>
//   <word, space-separated 1-based chairs, one per line>
//
// Serialization is canonical: single spaces, newline after every line.
// parse(serialize(sys)) is byte-identical for canonical files.

namespace mc {

inline std::string serialize_words(const WordSystem& sys) {
    std::ostringstream out;
    out << "mc-words v1\n";
    out << "m=" << sys.m << " count=" << sys.words.size() << "\n";
    for (const Word& w : sys.words) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i > 0) out << ' ';
            out << w[i];
        }
        out << "\n";
    }
    return out.str();
}

inline WordSystem parse_words(std::istream& in) {
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || line != "mc-words v1")
        throw ParseError(lineno, "expected header 'mc-words v1'");

    ++lineno;
    if (!std::getline(in, line)) throw ParseError(lineno, "missing 'm=<int> count=<int>' line");
    WordSystem sys;
    long long count = 0;
    {
        std::istringstream hdr(line);
        std::string mtok, ctok;
        if (!(hdr >> mtok >> ctok) || mtok.rfind("m=", 0) != 0 || ctok.rfind("count=", 0) != 0)
            throw ParseError(lineno, "expected 'm=<int> count=<int>'");
        try {
            sys.m = std::stoi(mtok.substr(2));
            count = std::stoll(ctok.substr(6));
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad integer in 'm=... count=...'");
        }
        std::string rest;
        if (hdr >> rest) throw ParseError(lineno, "trailing content after count");
    }
    if (sys.m < 1) throw ParseError(lineno, "m must be >= 1");
    if (count < 0) throw ParseError(lineno, "count must be >= 0");

    for (long long k = 0; k < count; ++k) {
        ++lineno;
        if (!std::getline(in, line)) throw ParseError(lineno, "expected a word line");
        std::istringstream ws(line);
        std::vector<Chair> letters;
        long long v = 0;
        while (ws >> v) {
            if (v < 1 || v > sys.m)
                throw ParseError(lineno, "chair " + std::to_string(v) + " outside 1.." + std::to_string(sys.m));
            letters.push_back(static_cast<Chair>(v));
        }
        if (!ws.eof()) throw ParseError(lineno, "non-integer token in word line");
        if (letters.empty()) throw ParseError(lineno, "empty word line");
        sys.words.push_back(Word(std::move(letters)));
    }
    ++lineno;
    if (std::getline(in, line) && !line.empty()) throw ParseError(lineno, "trailing content after last word");
    return sys;
}

inline WordSystem parse_words(const std::string& text) {
    std::istringstream in(text);
    return parse_words(in);
}

inline WordSystem read_words_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open words file: " + path);
    return parse_words(in);
}

inline void write_words_file(const std::string& path, const WordSystem& sys) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write words file: " + path);
    out << serialize_words(sys);
}

} // namespace mc
