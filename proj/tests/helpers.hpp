#pragma once

#include <string>
#include <vector>

#include "mc/rng.hpp"
#include "mc/word.hpp"

namespace helpers {

inline mc::Word W(const std::string& digits) { return mc::Word::from_digits(digits); }

inline mc::WordSystem system_of(int m, const std::vector<std::string>& digit_words) {
    mc::WordSystem sys;
    sys.m = m;
    for (const std::string& d : digit_words) sys.words.push_back(W(d));
    return sys;
}

/// Random system with n words over [m], each of length 1..max_len.
inline mc::WordSystem random_system(std::mt19937_64& rng, int n, int m, int max_len) {
    mc::WordSystem sys;
    sys.m = m;
    for (int i = 0; i < n; ++i) {
        const int len = 1 + static_cast<int>(mc::bounded(rng, static_cast<std::uint64_t>(max_len)));
        std::vector<mc::Chair> letters;
        for (int k = 0; k < len; ++k)
            letters.push_back(static_cast<mc::Chair>(mc::bounded(rng, static_cast<std::uint64_t>(m))) + 1);
        sys.words.push_back(mc::Word(std::move(letters)));
    }
    return sys;
}

inline mc::Word random_word(std::mt19937_64& rng, int m, int len) {
    std::vector<mc::Chair> letters;
    for (int k = 0; k < len; ++k)
        letters.push_back(static_cast<mc::Chair>(mc::bounded(rng, static_cast<std::uint64_t>(m))) + 1);
    return mc::Word(std::move(letters));
}

} // namespace helpers
