#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "mc/constructions.hpp"
#include "mc/verifier.hpp"
#include "oracle.hpp"

using helpers::W;
using namespace mc;

TEST_CASE("build_recursive base case") {
    const RecursivePair rp = build_recursive(1);
    REQUIRE(rp.s_words.size() == 1);
    REQUIRE(rp.w_words.size() == 1);
    CHECK(rp.s_words[0] == W("11"));
    CHECK(rp.w_words[0] == W("1122"));
}

TEST_CASE("build_recursive n=2 matches the stage formulas") {
    const RecursivePair rp = build_recursive(2);
    REQUIRE(rp.s_words.size() == 2);
    CHECK(rp.s_words[0] == interleave(1, power(W("2233"), 6)));
    CHECK(rp.s_words[0].size() == 48);
    CHECK(rp.s_words[1] == concat(power(W("2233"), 12), W("1")));
    CHECK(rp.s_words[1].size() == 49);
    for (const Word& s : rp.s_words) CHECK(is_full(s, 3));
    for (const Word& w : rp.w_words) CHECK(is_full(w, 4));
    // w-stage: k = 48+49 = 97, factor 2*2+1 = 5
    CHECK(rp.w_words[0].size() == 2 * 97 * 10);
    CHECK(rp.w_words[1].size() == 48 * 97 * 5 + 1);
}

TEST_CASE("build_recursive restriction families stay terminal at n<=2") {
    const RecursivePair rp1 = build_recursive(1);
    CHECK(is_terminal(rp1.s_system()).terminal);
    CHECK(is_terminal(rp1.w_system()).terminal);

    const RecursivePair rp2 = build_recursive(2);
    const WordSystem s2 = rp2.s_system();
    // p=1: every singleton restriction of s_1; p=2: the full alphabet
    for (Chair a = 1; a <= 3; ++a) {
        const Word r = restrict_to(s2.words[0], {a});
        REQUIRE_FALSE(r.empty());
        CHECK(is_terminal(WordSystem{3, {r}, {}}).terminal);
    }
    CHECK(is_terminal(s2).terminal);
}

TEST_CASE("build_recursive fails loudly past the length budget") {
    CHECK_THROWS_AS(build_recursive(3), BudgetExceeded);
    CHECK_THROWS_AS(build_recursive(2, 40), BudgetExceeded);
}

TEST_CASE("ff_permutations family shape") {
    const FieldPermutationFamily fam = ff_permutations(5, 1);
    CHECK(fam.m == 25);
    CHECK(fam.perms.count() == 20);  // (p-1) p^(2d-1)
    CHECK(fam.polys.size() == 20);
    for (const Word& w : fam.perms.words) CHECK(is_permutation(w, 25));

    CHECK_THROWS_AS(ff_permutations(6, 1), Unsupported);   // not prime
    CHECK_THROWS_AS(ff_permutations(3, 2), Unsupported);   // 2d > p-1
}

TEST_CASE("ff blocks of distinct polynomials share at most 2d chairs") {
    SECTION("worked example: x^2 vs 2x^2 over F_5 share exactly the origin") {
        const std::vector<int> f = {0, 1};  // x^2
        const std::vector<int> g = {0, 2};  // 2x^2
        const std::vector<Chair> bf = ff_block(f, 0, 5);
        const std::vector<Chair> bg = ff_block(g, 0, 5);
        std::set<Chair> inter;
        for (Chair c : bf)
            if (std::find(bg.begin(), bg.end(), c) != bg.end()) inter.insert(c);
        CHECK(inter == std::set<Chair>{1});  // (0,0) encodes to chair 1
    }
    SECTION("exhaustive for p in {5,7}, d=1") {
        for (int p : {5, 7}) {
            const FieldPermutationFamily fam = ff_permutations(p, 1);
            for (std::size_t a = 0; a < fam.polys.size(); ++a)
                for (std::size_t b = a + 1; b < fam.polys.size(); ++b)
                    for (int i = 0; i < p; ++i)
                        for (int j = 0; j < p; ++j) {
                            const auto ba = ff_block(fam.polys[a], i, p);
                            const auto bb = ff_block(fam.polys[b], j, p);
                            int common = 0;
                            for (Chair c : ba)
                                if (std::find(bb.begin(), bb.end(), c) != bb.end()) ++common;
                            REQUIRE(common <= 2);
                        }
        }
    }
    SECTION("same polynomial, different shifts: disjoint") {
        const FieldPermutationFamily fam = ff_permutations(5, 1);
        const auto b0 = ff_block(fam.polys[0], 0, 5);
        const auto b1 = ff_block(fam.polys[0], 1, 5);
        for (Chair c : b0) CHECK(std::find(b1.begin(), b1.end(), c) == b1.end());
    }
}

TEST_CASE("cyclic_lcs") {
    CHECK(cyclic_lcs(W("1234"), W("1234")) == 4);
    CHECK(cyclic_lcs(W("1234"), W("3412")) == 4);  // a rotation
    CHECK(cyclic_lcs(W("1234"), W("4321")) == 2);  // frozen from the 16-rotation oracle
    CHECK(oracle::cyclic_lcs(W("1234"), W("4321")) == 2);
    CHECK_THROWS_AS(cyclic_lcs(W("1123"), W("1234")), Error);
    CHECK_THROWS_AS(cyclic_lcs(W("123"), W("1234")), Error);
}

TEST_CASE("cyclic_lcs is symmetric and rotation invariant", "[property]") {
    std::mt19937_64 rng = seeded_rng(1111);
    for (int it = 0; it < 10; ++it) {
        const int m = 5 + static_cast<int>(bounded(rng, 4));
        std::vector<Chair> pa(static_cast<std::size_t>(m)), pb(static_cast<std::size_t>(m));
        std::iota(pa.begin(), pa.end(), 1);
        std::iota(pb.begin(), pb.end(), 1);
        deterministic_shuffle(pa, rng);
        deterministic_shuffle(pb, rng);
        const Word a{std::vector<Chair>(pa)}, b{std::vector<Chair>(pb)};
        const int v = cyclic_lcs(a, b);
        CHECK(v == cyclic_lcs(b, a));
        CHECK(v == cyclic_lcs(rotate_to_first(a, pa[static_cast<std::size_t>(
                                  bounded(rng, static_cast<std::uint64_t>(m)))]),
                              b));
        CHECK(v == oracle::cyclic_lcs(a, b));
    }
}

TEST_CASE("check_lcs_certificate on the ff(5,1) family") {
    const FieldPermutationFamily fam = ff_permutations(5, 1);
    const LcsCertificate two = check_lcs_certificate(fam.perms, 2);
    CHECK(two.r <= 20);  // 4dp
    CHECK(two.r == 10);  // frozen; the family beats its worst-case bound
    CHECK(two.certified);

    // the computed r = 10 certifies n=3 as well (the 4dp bound alone
    // would not); n=4 crosses the threshold and is inconclusive
    const LcsCertificate three = check_lcs_certificate(fam.perms, 3);
    CHECK(three.certified == (25 > 2 * three.r));
    CHECK(three.certified);
    const LcsCertificate four = check_lcs_certificate(fam.perms, 4);
    CHECK(four.threshold == 30);
    CHECK_FALSE(four.certified);

    WordSystem twins{4, {W("1234"), W("1234")}, {}};
    const LcsCertificate dup = check_lcs_certificate(twins, 2);
    CHECK(dup.r == 4);
    CHECK_FALSE(dup.certified);
}

TEST_CASE("lcs certificate implies terminality of subsets", "[property]") {
    const FieldPermutationFamily fam = ff_permutations(5, 1);
    REQUIRE(check_lcs_certificate(fam.perms, 2).certified);
    std::mt19937_64 rng = seeded_rng(99);
    for (int it = 0; it < 3; ++it) {
        const int a = static_cast<int>(bounded(rng, fam.perms.count()));
        int b = static_cast<int>(bounded(rng, fam.perms.count()));
        if (b == a) b = (b + 1) % static_cast<int>(fam.perms.count());
        CHECK(is_terminal(fam.perms.subset({a, b})).terminal);
    }
}

TEST_CASE("random_words: reproducible, frequency sane") {
    const RandomWordsReport a = random_words(6, 21, 64, 1);
    const RandomWordsReport b = random_words(6, 21, 64, 1);
    CHECK(a.system == b.system);
    CHECK(a.system.count() == 6);
    for (const Word& w : a.system.words) {
        CHECK(w.size() == 64);
        // per-chair count within 5 sigma of L/m
        const double mean = 64.0 / 21.0;
        const double sigma = std::sqrt(64.0 * (1.0 / 21.0) * (20.0 / 21.0));
        for (Chair c = 1; c <= 21; ++c) {
            const long long count = std::count(w.letters().begin(), w.letters().end(), c);
            CHECK(std::abs(static_cast<double>(count) - mean) <= 5 * sigma);
        }
    }
}

TEST_CASE("random_full_words: full by construction, reproducible") {
    const RandomWordsReport rep = random_full_words(6, 21, 64, 1);
    for (std::size_t i = 0; i < rep.system.count(); ++i) {
        CHECK(rep.full[i]);
        CHECK(is_full(rep.system.words[i], 21));
    }
    CHECK(rep.system == random_full_words(6, 21, 64, 1).system);
    // distinct seeds give distinct systems
    CHECK_FALSE(rep.system == random_full_words(6, 21, 64, 2).system);
}

TEST_CASE("random_perms: uniform permutations, LCS near sqrt(m)") {
    const WordSystem ps = random_perms(6, 25, 3);
    CHECK(ps == random_perms(6, 25, 3));
    int worst = 0;
    for (std::size_t i = 0; i < ps.count(); ++i) {
        CHECK(is_permutation(ps.words[i], 25));
        for (std::size_t j = i + 1; j < ps.count(); ++j)
            worst = std::max(worst, cyclic_lcs(ps.words[i], ps.words[j]));
    }
    // empirical concentration near O(sqrt(m)) for m=25
    CHECK(worst >= 5);
    CHECK(worst <= 16);
}

TEST_CASE("drop_bound values") {
    CHECK(drop_bound({1.0 / 7.0, 23.0 / 2.0}) == Catch::Approx(0.97826).margin(1e-4));
    CHECK(drop_bound({1.0 / 7.0, 23.0 / 2.0}) < 0.99);
    CHECK(drop_bound({0.0, 1.0}) == Catch::Approx(3.0));
    CHECK_THROWS_AS(drop_bound({1.5, 2.0}), Error);
}

TEST_CASE("drop minimization and the 4+2sqrt(2) threshold") {
    const double star = 4.0 + 2.0 * std::sqrt(2.0);
    CHECK(min_drop_over_x(1.0 / 7.0).value < 0.99);
    CHECK(min_drop_over_x(1.0 / 6.9).value < 1.0);   // m/n just above the threshold
    CHECK(min_drop_over_x(1.0 / 6.7).value > 1.0);   // m/n just below
    CHECK(critical_chair_ratio() == Catch::Approx(star).epsilon(0.01));
}
