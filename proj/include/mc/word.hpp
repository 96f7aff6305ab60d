#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mc/errors.hpp"

namespace mc {

/// Chairs are 1-based, matching the usual labelling 1..m.
using Chair = int;

/// A finite word over a chair alphabet, traversed cyclically by a player.
///
/// Words are immutable after construction and safe to share across
/// threads. The default-constructed word is the flagged-empty word that
/// restriction may produce; game operations reject it loudly.
class Word {
public:
    Word() = default;

    explicit Word(std::vector<Chair> letters) : letters_(std::move(letters)) {
        for (Chair c : letters_)
            if (c < 1) throw Error("chair labels are 1-based; got " + std::to_string(c));
    }

    Word(std::initializer_list<Chair> letters) : Word(std::vector<Chair>(letters)) {}

    /// Parse a compact digit string such as "12131413" (chairs 1..9 only).
    static Word from_digits(std::string_view digits) {
        std::vector<Chair> ls;
        ls.reserve(digits.size());
        for (char ch : digits) {
            if (ch < '1' || ch > '9') throw Error("from_digits accepts digits 1..9 only");
            ls.push_back(ch - '0');
        }
        return Word(std::move(ls));
    }

    std::size_t size() const { return letters_.size(); }

    /// True for the flagged-empty restriction output.
    bool empty() const { return letters_.empty(); }

    Chair operator[](std::size_t i) const { return letters_[i]; }

    /// Letter at a cyclic position.
    Chair cyclic(std::size_t i) const {
        if (letters_.empty()) throw EmptyWord("cyclic access to a flagged-empty word");
        return letters_[i % letters_.size()];
    }

    const std::vector<Chair>& letters() const { return letters_; }

    Chair max_chair() const {
        Chair m = 0;
        for (Chair c : letters_) m = std::max(m, c);
        return m;
    }

    /// Compact display: digit string when every chair fits one digit,
    /// space-separated otherwise. Empty words render as "(empty)".
    std::string str() const {
        if (letters_.empty()) return "(empty)";
        std::string out;
        const bool compact = max_chair() <= 9;
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            if (!compact && i > 0) out += ' ';
            out += std::to_string(letters_[i]);
        }
        return out;
    }

    bool operator==(const Word&) const = default;

private:
    std::vector<Chair> letters_;
};

inline Word concat(const Word& a, const Word& b) {
    std::vector<Chair> ls = a.letters();
    ls.insert(ls.end(), b.letters().begin(), b.letters().end());
    return ls.empty() ? Word() : Word(std::move(ls));
}

inline Word power(const Word& w, long long r) {
    if (r < 1) throw Error("power requires exponent >= 1, got " + std::to_string(r));
    std::vector<Chair> ls;
    ls.reserve(w.size() * static_cast<std::size_t>(r));
    for (long long i = 0; i < r; ++i)
        ls.insert(ls.end(), w.letters().begin(), w.letters().end());
    return ls.empty() ? Word() : Word(std::move(ls));
}

/// Alternate c with the letters of w: interleave(1, 2343) = 12131413.
inline Word interleave(Chair c, const Word& w) {
    std::vector<Chair> ls;
    ls.reserve(2 * w.size());
    for (Chair x : w.letters()) {
        ls.push_back(c);
        ls.push_back(x);
    }
    return ls.empty() ? Word() : Word(std::move(ls));
}

/// Keep only the letters lying in B, order preserved. The result may be
/// the flagged-empty word.
inline Word restrict_to(const Word& w, const std::set<Chair>& b) {
    std::vector<Chair> ls;
    for (Chair c : w.letters())
        if (b.count(c)) ls.push_back(c);
    return ls.empty() ? Word() : Word(std::move(ls));
}

/// Letterwise image under an injective chair map. Every letter of w must
/// be mapped, and no two letters may collide.
inline Word relabel(const Word& w, const std::map<Chair, Chair>& f) {
    std::map<Chair, Chair> seen;
    for (const auto& [from, to] : f) {
        auto [it, fresh] = seen.emplace(to, from);
        if (!fresh) throw Error("relabel map is not injective at chair " + std::to_string(to));
    }
    std::vector<Chair> ls;
    ls.reserve(w.size());
    for (Chair c : w.letters()) {
        auto it = f.find(c);
        if (it == f.end()) throw Error("relabel map does not cover chair " + std::to_string(c));
        ls.push_back(it->second);
    }
    return ls.empty() ? Word() : Word(std::move(ls));
}

/// Shift every chair by the given offset; the relabelling used between
/// recursion stages.
inline Word shift_chairs(const Word& w, Chair offset) {
    std::vector<Chair> ls;
    ls.reserve(w.size());
    for (Chair c : w.letters()) ls.push_back(c + offset);
    return ls.empty() ? Word() : Word(std::move(ls));
}

/// Does w contain every chair of [m]?
inline bool is_full(const Word& w, int m) {
    std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
    std::size_t distinct = 0;
    for (Chair c : w.letters()) {
        if (c > m) return false;
        if (!seen[c]) {
            seen[c] = true;
            ++distinct;
        }
    }
    return distinct == static_cast<std::size_t>(m);
}

inline bool is_permutation(const Word& w, int m) {
    return w.size() == static_cast<std::size_t>(m) && is_full(w, m);
}

/// Cyclic rotation of w starting at the first occurrence of c.
inline Word rotate_to_first(const Word& w, Chair c) {
    auto it = std::find(w.letters().begin(), w.letters().end(), c);
    if (it == w.letters().end())
        throw NotPresent("chair " + std::to_string(c) + " does not occur in " + w.str());
    std::vector<Chair> ls(it, w.letters().end());
    ls.insert(ls.end(), w.letters().begin(), it);
    return Word(std::move(ls));
}

/// An ordered collection of words over a common alphabet [m].
struct WordSystem {
    int m = 0;
    std::vector<Word> words;
    std::vector<std::string> labels;  // optional; empty or one per word

    std::size_t count() const { return words.size(); }
    const Word& word(std::size_t i) const { return words.at(i); }

    /// Alphabet-bound check. Flagged-empty members are allowed here;
    /// game operations perform their own rejection.
    void validate() const {
        if (m < 1) throw Error("word system needs m >= 1");
        if (!labels.empty() && labels.size() != words.size())
            throw Error("label count does not match word count");
        for (std::size_t i = 0; i < words.size(); ++i)
            if (words[i].max_chair() > m)
                throw Error("word " + std::to_string(i + 1) + " uses chair " +
                            std::to_string(words[i].max_chair()) + " beyond m=" + std::to_string(m));
    }

    void require_nonempty_words() const {
        for (std::size_t i = 0; i < words.size(); ++i)
            if (words[i].empty())
                throw EmptyWord("word " + std::to_string(i + 1) + " is flagged-empty");
    }

    /// New system holding the selected words (0-based indices), same m.
    WordSystem subset(const std::vector<int>& indices) const {
        WordSystem out;
        out.m = m;
        for (int i : indices) {
            out.words.push_back(words.at(static_cast<std::size_t>(i)));
            if (!labels.empty()) out.labels.push_back(labels.at(static_cast<std::size_t>(i)));
        }
        return out;
    }

    bool operator==(const WordSystem&) const = default;
};

} // namespace mc
