#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mc/errors.hpp"
#include "mc/rng.hpp"
#include "mc/word.hpp"

namespace mc {

/// Output of the recursive optimal construction: n s-words over [2n-1]
/// and n w-words over [2n]. The s-family is a winning MC(n, 2n-1)
/// strategy; both families stay terminal under the odd-cardinality
/// restrictions the construction is built around.
struct RecursivePair {
    int n = 0;
    std::vector<Word> s_words;  // alphabet [2n-1]
    std::vector<Word> w_words;  // alphabet [2n]

    WordSystem s_system() const { return WordSystem{2 * n - 1, s_words, {}}; }
    WordSystem w_system() const { return WordSystem{2 * n, w_words, {}}; }
};

namespace detail {

/// One recursion stage. From q source words x_1..x_q (relabelled away
/// from chair 1 by shifting every chair up by one) produce target_count
/// words over the enlarged alphabet:
///
///   first    = 1 ⊗ ((x_1 ∘ ... ∘ x_q)^(2(2q+1)))
///   target_i = (x_{i-1})^(k(2q+1)) ∘ 1          k = Σ|x_j|
///
/// target_count is q+1 on the s-stage and q on the w-stage.
inline std::vector<Word> recursion_stage(const std::vector<Word>& sources,
                                         std::size_t target_count, long long length_budget,
                                         const std::string& stage_name) {
    const std::size_t q = sources.size();
    __int128 k = 0;
    for (const Word& w : sources) k += static_cast<__int128>(w.size());
    const __int128 base = 2 * static_cast<__int128>(q) + 1;
    const __int128 e_first = 2 * base;
    const __int128 e_rest = k * base;

    std::vector<__int128> lengths;
    lengths.push_back(2 * k * e_first);
    for (std::size_t i = 1; i < target_count; ++i)
        lengths.push_back(static_cast<__int128>(sources[i - 1].size()) * e_rest + 1);
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] > static_cast<__int128>(length_budget)) {
            std::string all;
            for (__int128 len : lengths) {
                if (!all.empty()) all += ", ";
                all += std::to_string(static_cast<double>(len));
            }
            throw BudgetExceeded(stage_name + " word lengths [" + all + "] exceed budget " +
                                 std::to_string(length_budget));
        }
    }

    std::vector<Word> shifted;
    shifted.reserve(q);
    for (const Word& w : sources) shifted.push_back(shift_chairs(w, 1));

    Word all;
    for (const Word& w : shifted) all = concat(all, w);

    std::vector<Word> out;
    out.reserve(target_count);
    out.push_back(interleave(1, power(all, static_cast<long long>(e_first))));
    for (std::size_t i = 1; i < target_count; ++i)
        out.push_back(concat(power(shifted[i - 1], static_cast<long long>(e_rest)), Word{1}));
    return out;
}

} // namespace detail

/// Build the recursive s/w word families. Lengths are doubly exponential
/// in n; anything beyond the budget fails loudly with the computed
/// lengths rather than truncating.
inline RecursivePair build_recursive(int n, long long length_budget = 10'000'000) {
    if (n < 1) throw Error("build_recursive needs n >= 1");
    RecursivePair rp;
    rp.n = 1;
    rp.s_words = {Word::from_digits("11")};
    rp.w_words = {Word::from_digits("1122")};
    for (int rank = 2; rank <= n; ++rank) {
        rp.s_words = detail::recursion_stage(rp.w_words, static_cast<std::size_t>(rank),
                                             length_budget, "s-stage n=" + std::to_string(rank));
        rp.w_words = detail::recursion_stage(rp.s_words, static_cast<std::size_t>(rank),
                                             length_budget, "w-stage n=" + std::to_string(rank));
        rp.n = rank;
    }
    return rp;
}

/// The finite-field permutation family: for each degree-2d polynomial f
/// over F_p with zero constant term and nonzero leading coefficient, the
/// permutation of [p^2] listing the blocks {(x, f(x)+j) | x} for
/// j = 0..p-1, each block in ascending x. Pairs (x, y) are encoded as
/// chair p*x + y + 1.
struct FieldPermutationFamily {
    int p = 0;
    int d = 0;
    int m = 0;  // p^2
    std::vector<std::vector<int>> polys;  // coefficients c_1..c_2d, constant term omitted
    WordSystem perms;
};

namespace detail {

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; static_cast<long long>(q) * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

inline int poly_eval(const std::vector<int>& coeffs, int x, int p) {
    // Horner on c_1 x + c_2 x^2 + ... + c_2d x^2d.
    long long acc = 0;
    for (std::size_t i = coeffs.size(); i > 0; --i) acc = (acc + coeffs[i - 1]) * x % p;
    return static_cast<int>(acc);
}

} // namespace detail

/// Chairs of the block {(x, f(x)+j) | x in F_p}, ascending in x.
inline std::vector<Chair> ff_block(const std::vector<int>& coeffs, int j, int p) {
    std::vector<Chair> out;
    out.reserve(static_cast<std::size_t>(p));
    for (int x = 0; x < p; ++x)
        out.push_back(p * x + (detail::poly_eval(coeffs, x, p) + j) % p + 1);
    return out;
}

inline FieldPermutationFamily ff_permutations(int p, int d) {
    if (!detail::is_prime(p)) throw Unsupported("p must be prime, got " + std::to_string(p));
    if (d < 1) throw Unsupported("d must be >= 1");
    if (2 * d > p - 1)
        throw Unsupported("need 2d <= p-1 so distinct polynomials act as distinct maps");

    FieldPermutationFamily fam;
    fam.p = p;
    fam.d = d;
    fam.m = p * p;
    fam.perms.m = fam.m;

    const int deg = 2 * d;
    std::vector<int> coeffs(static_cast<std::size_t>(deg), 0);
    // Lexicographic over (c_1, ..., c_2d) with c_2d != 0.
    for (long long lead = 1; lead < p; ++lead) {
        double rest_count = 1;
        for (int i = 0; i < deg - 1; ++i) rest_count *= p;
        for (long long rest = 0; rest < static_cast<long long>(rest_count); ++rest) {
            long long r = rest;
            for (int i = 0; i < deg - 1; ++i) {
                coeffs[static_cast<std::size_t>(i)] = static_cast<int>(r % p);
                r /= p;
            }
            coeffs[static_cast<std::size_t>(deg - 1)] = static_cast<int>(lead);
            fam.polys.push_back(coeffs);
            std::vector<Chair> letters;
            letters.reserve(static_cast<std::size_t>(fam.m));
            for (int j = 0; j < p; ++j) {
                const std::vector<Chair> block = ff_block(coeffs, j, p);
                letters.insert(letters.end(), block.begin(), block.end());
            }
            fam.perms.words.push_back(Word(std::move(letters)));
        }
    }
    return fam;
}

/// Longest common subsequence of two permutations maximized over all
/// rotation pairs. Both words rotate independently: a common cut point
/// cannot emulate two independent ones. O(m^4), fine through m ~ 121.
inline int cyclic_lcs(const Word& a, const Word& b) {
    const int m = static_cast<int>(a.size());
    if (b.size() != a.size() || !is_permutation(a, m) || !is_permutation(b, m))
        throw Error("cyclic_lcs needs two permutations of the same [m]");

    std::vector<int> ra(a.letters()), rb(b.letters());
    std::vector<int> dp(static_cast<std::size_t>(m) + 1);
    int best = 0;
    for (int sa = 0; sa < m; ++sa) {
        std::rotate(ra.begin(), ra.begin() + (sa == 0 ? 0 : 1), ra.end());
        rb = b.letters();
        for (int sb = 0; sb < m; ++sb) {
            std::rotate(rb.begin(), rb.begin() + (sb == 0 ? 0 : 1), rb.end());
            std::fill(dp.begin(), dp.end(), 0);
            for (int i = 1; i <= m; ++i) {
                int diag = 0;
                for (int j = 1; j <= m; ++j) {
                    const int above = dp[static_cast<std::size_t>(j)];
                    dp[static_cast<std::size_t>(j)] =
                        ra[static_cast<std::size_t>(i - 1)] == rb[static_cast<std::size_t>(j - 1)]
                            ? diag + 1
                            : std::max(above, dp[static_cast<std::size_t>(j - 1)]);
                    diag = above;
                }
            }
            best = std::max(best, dp[static_cast<std::size_t>(m)]);
            if (best == m) return best;
        }
    }
    return best;
}

/// Certificate from pairwise cyclic LCS: r = max over pairs; when
/// m > (n-1) r no schedule fully traverses any word, so every n-subset
/// is terminal. A failed check is inconclusive, not a refutation.
struct LcsCertificate {
    bool certified = false;
    int r = 0;
    long long threshold = 0;  // (n-1) * r
};

inline LcsCertificate check_lcs_certificate(const WordSystem& perms, int n) {
    if (n < 1) throw Error("n must be >= 1");
    LcsCertificate cert;
    for (std::size_t i = 0; i < perms.words.size(); ++i)
        for (std::size_t j = i + 1; j < perms.words.size(); ++j)
            cert.r = std::max(cert.r, cyclic_lcs(perms.words[i], perms.words[j]));
    cert.threshold = static_cast<long long>(n - 1) * cert.r;
    cert.certified = perms.m > cert.threshold;
    return cert;
}

struct RandomWordsReport {
    WordSystem system;
    std::vector<bool> full;
    std::vector<int> attempts;  // draws per word (1 unless regeneration kicked in)
};

/// N independent uniform words of length L over [m], reproducible from
/// the seed. Reports which words came out full.
inline RandomWordsReport random_words(int N, int m, int L, std::uint64_t seed) {
    if (N < 1 || m < 1 || L < 1) throw Error("random_words needs N, m, L >= 1");
    RandomWordsReport rep;
    rep.system.m = m;
    for (int i = 0; i < N; ++i) {
        std::mt19937_64 rng = seeded_rng(seed, static_cast<std::uint64_t>(i) << 32);
        std::vector<Chair> letters(static_cast<std::size_t>(L));
        for (Chair& c : letters) c = static_cast<Chair>(bounded(rng, static_cast<std::uint64_t>(m))) + 1;
        Word w(std::move(letters));
        rep.full.push_back(is_full(w, m));
        rep.attempts.push_back(1);
        rep.system.words.push_back(std::move(w));
    }
    return rep;
}

/// Same, but any non-full word is redrawn whole from the next seed
/// stream, which keeps the letters independent rather than patching
/// missing chairs in.
inline RandomWordsReport random_full_words(int N, int m, int L, std::uint64_t seed) {
    if (N < 1 || m < 1 || L < 1) throw Error("random_full_words needs N, m, L >= 1");
    RandomWordsReport rep;
    rep.system.m = m;
    for (int i = 0; i < N; ++i) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            std::mt19937_64 rng = seeded_rng(seed, (static_cast<std::uint64_t>(i) << 32) | attempt);
            std::vector<Chair> letters(static_cast<std::size_t>(L));
            for (Chair& c : letters)
                c = static_cast<Chair>(bounded(rng, static_cast<std::uint64_t>(m))) + 1;
            Word w(std::move(letters));
            if (is_full(w, m)) {
                rep.full.push_back(true);
                rep.attempts.push_back(static_cast<int>(attempt) + 1);
                rep.system.words.push_back(std::move(w));
                break;
            }
        }
    }
    return rep;
}

/// N uniform permutations of [m] via unbiased Fisher-Yates.
inline WordSystem random_perms(int N, int m, std::uint64_t seed) {
    if (N < 1 || m < 1) throw Error("random_perms needs N, m >= 1");
    WordSystem sys;
    sys.m = m;
    for (int i = 0; i < N; ++i) {
        std::vector<Chair> letters(static_cast<std::size_t>(m));
        std::iota(letters.begin(), letters.end(), 1);
        std::mt19937_64 rng = seeded_rng(seed, static_cast<std::uint64_t>(i) << 32);
        deterministic_shuffle(letters, rng);
        sys.words.push_back(Word(std::move(letters)));
    }
    return sys;
}

/// Crowding ratio q and potential base x of the random-words analysis.
struct PotentialParams {
    double q = 1.0 / 7.0;
    double x = 23.0 / 2.0;
};

/// Expected three-child potential ratio bound:
/// 2q + 2(1-q)/x + q^2 x + 2q(1-q) + (1-q)^2 / x. Values below 1 drive
/// the exponential potential drop; q=1/7, x=23/2 gives about 0.978.
inline double drop_bound(const PotentialParams& params) {
    const double q = params.q, x = params.x;
    if (q < 0 || q >= 1) throw Error("crowding ratio must be in [0,1)");
    if (x <= 0) throw Error("potential base must be positive");
    return 2 * q + 2 * (1 - q) / x + q * q * x + 2 * q * (1 - q) + (1 - q) * (1 - q) / x;
}

struct DropMinimum {
    double value = 0;
    double x = 0;
};

/// Minimize the drop bound over the base x at fixed q (the bound is
/// convex in x).
inline DropMinimum min_drop_over_x(double q) {
    double lo = 1e-6, hi = 1e7;
    for (int it = 0; it < 300; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (drop_bound({q, m1}) < drop_bound({q, m2}))
            hi = m2;
        else
            lo = m1;
    }
    const double x = (lo + hi) / 2;
    return DropMinimum{drop_bound({q, x}), x};
}

/// The chair-to-player ratio below which no base x gives a sub-1 drop:
/// returns 1/q* where q* solves min_x drop_bound(q*, x) = 1. The closed
/// form is 4 + 2*sqrt(2).
inline double critical_chair_ratio() {
    double lo = 1e-4, hi = 0.5;  // min drop is increasing in q
    for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2;
        if (min_drop_over_x(mid).value < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 2.0 / (lo + hi);
}

} // namespace mc
