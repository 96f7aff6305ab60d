#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mc/engine.hpp"
#include "mc/errors.hpp"
#include "mc/word.hpp"

// The lower-bound machinery made executable. Word systems here follow
// the 2n-2 setup: N = 2n-2 words over [2n-2] whose initial letters are
// pairwise distinct except word1[1] == word2[1]. Every player starts on
// its word's first letter; player i after t moves sits on word_i[t mod].

namespace mc {

struct PsmVertex {
    int player = 0;       // 1-based word index; 0 for auxiliaries
    int aux = 0;          // 0 none, 1 = A1, 2 = A2
    long long steps = 0;  // cumulative moves
    int clone = 0;        // >0 when (player, steps) was re-exposed by a later subdivision
    Chair chair = 0;
    int pair_class = 0;   // class of the proper coloring

    bool is_player() const { return aux == 0; }
    std::tuple<int, long long, int> key() const { return {player, steps, clone}; }
};

/// Partition of words 3..N into pairs (1-based indices).
struct Pairing {
    std::vector<std::pair<int, int>> pairs;
};

inline Pairing consecutive_pairing(int N) {
    Pairing p;
    for (int a = 3; a + 1 <= N; a += 2) p.pairs.push_back({a, a + 1});
    return p;
}

/// Balanced chair partition: chair_class[c] is 0 or 1 for c in 1..m.
struct TwoColoring {
    std::vector<int> chair_class;  // size m+1, index 0 unused
    int cls(Chair c) const { return chair_class.at(static_cast<std::size_t>(c)); }
};

struct PsmFacet {
    std::vector<int> verts;  // vertex handles, ascending
    bool alive = true;
    int parent = -1;         // facet id; -1 for the initial facets
    int depth = 1;
    std::vector<int> moved;  // players moved from the parent facet
    bool has_aux = false;
    bool mono = false;       // all vertices in one delta class
};

// --- free checks usable on any facet collection -------------------------

/// Pseudomanifold check: facets all of one dimension and every
/// codimension-1 face contained in exactly two facets.
inline bool validate_psm(const std::vector<std::vector<int>>& facets) {
    if (facets.empty()) return false;
    const std::size_t size = facets.front().size();
    std::map<std::vector<int>, int> ridge_count;
    for (const std::vector<int>& f : facets) {
        if (f.size() != size) return false;
        std::vector<int> sorted = f;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t drop = 0; drop < size; ++drop) {
            std::vector<int> ridge;
            ridge.reserve(size - 1);
            for (std::size_t i = 0; i < size; ++i)
                if (i != drop) ridge.push_back(sorted[i]);
            ++ridge_count[ridge];
        }
    }
    for (const auto& [ridge, count] : ridge_count)
        if (count != 2) return false;
    return true;
}

/// Facets on which the coloring is injective.
inline int rainbow_count(const std::vector<std::vector<int>>& facets,
                         const std::vector<int>& vertex_color) {
    int out = 0;
    for (const std::vector<int>& f : facets) {
        std::set<int> seen;
        for (int v : f) seen.insert(vertex_color.at(static_cast<std::size_t>(v)));
        if (seen.size() == f.size()) ++out;
    }
    return out;
}

/// Facets on which the coloring is constant.
inline int mono_count(const std::vector<std::vector<int>>& facets,
                      const std::vector<int>& vertex_color) {
    int out = 0;
    for (const std::vector<int>& f : facets) {
        bool mono = true;
        for (int v : f)
            if (vertex_color.at(static_cast<std::size_t>(v)) !=
                vertex_color.at(static_cast<std::size_t>(f.front())))
                mono = false;
        if (mono) ++out;
    }
    return out;
}

// --- chair partition -----------------------------------------------------

/// Deterministic balanced 2-coloring of the chairs: the shared initial
/// chair of words 1 and 2 is a 1-chair; in each pair the lower word's
/// start is a 0-chair and the other a 1-chair; leftover chairs fill the
/// 0 side first, ascending. Throws BadInitials when the initial letters
/// collide anywhere besides word1[1] == word2[1].
inline TwoColoring partition_chairs(const WordSystem& words, const Pairing& pairing) {
    const int N = static_cast<int>(words.count());
    if (N < 2 || N % 2 != 0) throw BadInitials("need an even number N >= 2 of words");
    if (words.m != N) throw BadInitials("need m == N == 2n-2 chairs");
    words.validate();
    words.require_nonempty_words();
    const int n = N / 2 + 1;

    std::vector<int> covered(static_cast<std::size_t>(N) + 1, 0);
    for (const auto& [a, b] : pairing.pairs) {
        if (a < 3 || a > N || b < 3 || b > N || a == b)
            throw Error("pairing must cover words 3..N");
        ++covered[static_cast<std::size_t>(a)];
        ++covered[static_cast<std::size_t>(b)];
    }
    for (int i = 3; i <= N; ++i)
        if (covered[static_cast<std::size_t>(i)] != 1) throw Error("pairing must cover words 3..N exactly once");

    std::vector<Chair> initial(static_cast<std::size_t>(N) + 1);
    for (int i = 1; i <= N; ++i) initial[static_cast<std::size_t>(i)] = words.word(static_cast<std::size_t>(i - 1))[0];
    if (initial[1] != initial[2]) throw BadInitials("words 1 and 2 must share their initial chair");
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            if (i == 1 && j == 2) continue;
            if (initial[static_cast<std::size_t>(i)] == initial[static_cast<std::size_t>(j)])
                throw BadInitials("initial chairs of words " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
        }

    TwoColoring delta;
    delta.chair_class.assign(static_cast<std::size_t>(words.m) + 1, -1);
    delta.chair_class[static_cast<std::size_t>(initial[1])] = 1;
    for (const auto& [a, b] : pairing.pairs) {
        const int lo = std::min(a, b), hi = std::max(a, b);
        delta.chair_class[static_cast<std::size_t>(initial[static_cast<std::size_t>(lo)])] = 0;
        delta.chair_class[static_cast<std::size_t>(initial[static_cast<std::size_t>(hi)])] = 1;
    }
    int zeros = 0, ones = 0;
    for (int c = 1; c <= words.m; ++c) {
        if (delta.chair_class[static_cast<std::size_t>(c)] == 0) ++zeros;
        if (delta.chair_class[static_cast<std::size_t>(c)] == 1) ++ones;
    }
    for (int c = 1; c <= words.m; ++c) {
        if (delta.chair_class[static_cast<std::size_t>(c)] != -1) continue;
        if (zeros < n - 1) {
            delta.chair_class[static_cast<std::size_t>(c)] = 0;
            ++zeros;
        } else {
            delta.chair_class[static_cast<std::size_t>(c)] = 1;
            ++ones;
        }
    }
    if (zeros != n - 1 || ones != n - 1)
        throw BadInitials("chair partition cannot be balanced");
    return delta;
}

// --- the pseudomanifold under subdivision --------------------------------

class Psm {
public:
    /// Build the initial complex: one vertex per word start, auxiliaries
    /// A1/A2 paired with players 1/2, and the 2^n facets choosing one
    /// vertex per pair class.
    Psm(WordSystem words, Pairing pairing)
        : words_(std::move(words)), pairing_(std::move(pairing)),
          delta_(partition_chairs(words_, pairing_)) {
        const int N = static_cast<int>(words_.count());
        n_ = N / 2 + 1;

        std::vector<Chair> zero_chairs;
        for (Chair c = 1; c <= words_.m; ++c)
            if (delta_.cls(c) == 0) zero_chairs.push_back(c);

        // Classes: 0 = {P1, A1}, 1 = {P2, A2}, 2+j = pair j.
        std::vector<std::vector<int>> class_members(static_cast<std::size_t>(n_));
        auto add_player = [&](int player, int cls) {
            PsmVertex v;
            v.player = player;
            v.steps = 0;
            v.chair = words_.word(static_cast<std::size_t>(player - 1))[0];
            v.pair_class = cls;
            verts_.push_back(v);
            clone_count_[{player, 0}] = 1;
            class_members[static_cast<std::size_t>(cls)].push_back(static_cast<int>(verts_.size()) - 1);
        };
        add_player(1, 0);
        add_player(2, 1);
        for (std::size_t j = 0; j < pairing_.pairs.size(); ++j) {
            const int lo = std::min(pairing_.pairs[j].first, pairing_.pairs[j].second);
            const int hi = std::max(pairing_.pairs[j].first, pairing_.pairs[j].second);
            add_player(lo, static_cast<int>(j) + 2);
            add_player(hi, static_cast<int>(j) + 2);
        }
        for (int a = 1; a <= 2; ++a) {
            PsmVertex v;
            v.aux = a;
            v.chair = zero_chairs.at(std::min<std::size_t>(static_cast<std::size_t>(a) - 1,
                                                           zero_chairs.size() - 1));
            v.pair_class = a - 1;
            verts_.push_back(v);
            class_members[static_cast<std::size_t>(a - 1)].push_back(static_cast<int>(verts_.size()) - 1);
        }

        // All choices of one vertex per class.
        std::vector<int> choice(static_cast<std::size_t>(n_), 0);
        while (true) {
            std::vector<int> facet;
            for (int c = 0; c < n_; ++c)
                facet.push_back(class_members[static_cast<std::size_t>(c)]
                                             [static_cast<std::size_t>(choice[static_cast<std::size_t>(c)])]);
            std::sort(facet.begin(), facet.end());
            add_facet(std::move(facet), -1, 1, {});
            int c = 0;
            while (c < n_ && choice[static_cast<std::size_t>(c)] == 1) choice[static_cast<std::size_t>(c++)] = 0;
            if (c == n_) break;
            choice[static_cast<std::size_t>(c)] = 1;
        }
    }

    int n() const { return n_; }
    int dim() const { return n_ - 1; }
    const WordSystem& words() const { return words_; }
    const TwoColoring& delta() const { return delta_; }
    const std::vector<PsmVertex>& vertices() const { return verts_; }
    const std::vector<PsmFacet>& facets() const { return facets_; }
    std::size_t alive_count() const { return alive_; }
    long long split_count() const { return split_count_; }
    int max_depth() const { return max_depth_; }
    std::size_t initial_facets() const { return std::size_t{1} << n_; }

    std::vector<std::vector<int>> alive_facets() const {
        std::vector<std::vector<int>> out;
        for (const PsmFacet& f : facets_)
            if (f.alive) out.push_back(f.verts);
        return out;
    }

    /// Per-vertex 0/1 color induced by the chair partition.
    std::vector<int> delta_colors() const {
        std::vector<int> out;
        out.reserve(verts_.size());
        for (const PsmVertex& v : verts_) out.push_back(delta_.cls(v.chair));
        return out;
    }

    /// Per-vertex pair-class color; proper by construction, so every
    /// facet stays rainbow under it.
    std::vector<int> class_colors() const {
        std::vector<int> out;
        out.reserve(verts_.size());
        for (const PsmVertex& v : verts_) out.push_back(v.pair_class);
        return out;
    }

    /// All conflicted edges: player-vertex pairs sharing a chair that lie
    /// in at least one alive facet. Sorted, for reproducible sampling.
    std::vector<std::pair<int, int>> conflicted_edges() const {
        std::set<std::pair<int, int>> out;
        for (const PsmFacet& f : facets_) {
            if (!f.alive) continue;
            for (std::size_t i = 0; i < f.verts.size(); ++i)
                for (std::size_t j = i + 1; j < f.verts.size(); ++j) {
                    const PsmVertex& a = verts_[static_cast<std::size_t>(f.verts[i])];
                    const PsmVertex& b = verts_[static_cast<std::size_t>(f.verts[j])];
                    if (a.is_player() && b.is_player() && a.chair == b.chair)
                        out.insert({std::min(f.verts[i], f.verts[j]),
                                    std::max(f.verts[i], f.verts[j])});
                }
        }
        return {out.begin(), out.end()};
    }

    /// Subdivide the conflicted edge {v1, v2}: every alive facet holding
    /// both is replaced by three children in which v1, v2 or both are
    /// advanced one step. The two successor states become fresh vertices;
    /// a recurring (player, steps) gets a new clone id so facets of equal
    /// configuration stay distinct simplices.
    void subdivide(int v1, int v2) {
        if (v1 == v2) throw NotAnEdgeConflict("need two distinct vertices");
        const PsmVertex a = vertex_checked(v1);
        const PsmVertex b = vertex_checked(v2);
        if (!a.is_player() || !b.is_player())
            throw NotAnEdgeConflict("auxiliary vertices cannot move");
        if (a.chair != b.chair) throw NotAnEdgeConflict("vertices do not share a chair");

        std::vector<int> holders;
        for (std::size_t fi = 0; fi < facets_.size(); ++fi) {
            const PsmFacet& f = facets_[fi];
            if (f.alive && contains(f.verts, v1) && contains(f.verts, v2))
                holders.push_back(static_cast<int>(fi));
        }
        if (holders.empty()) throw NotAnEdgeConflict("edge is not present in any facet");

        const int nv1 = advance_vertex(a);
        const int nv2 = advance_vertex(b);
        for (int fi : holders) {
            facets_[static_cast<std::size_t>(fi)].alive = false;
            --alive_;
            ++split_count_;
            // add_facet reallocates facets_, so copy what the children need
            const std::vector<int> fverts = facets_[static_cast<std::size_t>(fi)].verts;
            const int fdepth = facets_[static_cast<std::size_t>(fi)].depth;
            add_facet(replace(fverts, {{v1, nv1}}), fi, fdepth + 1, {a.player});
            add_facet(replace(fverts, {{v2, nv2}}), fi, fdepth + 1, {b.player});
            add_facet(replace(fverts, {{v1, nv1}, {v2, nv2}}), fi, fdepth + 1,
                      {std::min(a.player, b.player), std::max(a.player, b.player)});
        }
    }

    /// Sorted vertex keys of a facet; the adversary's tie-break order.
    std::vector<std::tuple<int, long long, int>> facet_key(const PsmFacet& f) const {
        std::vector<std::tuple<int, long long, int>> key;
        for (int v : f.verts) key.push_back(verts_[static_cast<std::size_t>(v)].key());
        std::sort(key.begin(), key.end());
        return key;
    }

private:
    int vertex_count() const { return static_cast<int>(verts_.size()); }

    PsmVertex vertex_checked(int v) const {
        if (v < 0 || v >= vertex_count()) throw NotAnEdgeConflict("vertex handle out of range");
        return verts_[static_cast<std::size_t>(v)];
    }

    static bool contains(const std::vector<int>& xs, int x) {
        return std::binary_search(xs.begin(), xs.end(), x);
    }

    static std::vector<int> replace(const std::vector<int>& verts,
                                    std::vector<std::pair<int, int>> subs) {
        std::vector<int> out = verts;
        for (auto& [from, to] : subs)
            *std::find(out.begin(), out.end(), from) = to;
        std::sort(out.begin(), out.end());
        return out;
    }

    int advance_vertex(const PsmVertex& v) {
        PsmVertex nv;
        nv.player = v.player;
        nv.steps = v.steps + 1;
        nv.clone = clone_count_[{nv.player, nv.steps}]++;
        nv.chair = words_.word(static_cast<std::size_t>(nv.player - 1))
                       .cyclic(static_cast<std::size_t>(nv.steps));
        nv.pair_class = v.pair_class;
        verts_.push_back(nv);
        return vertex_count() - 1;
    }

    void add_facet(std::vector<int> vs, int parent, int depth, std::vector<int> moved) {
        PsmFacet f;
        f.verts = std::move(vs);
        f.parent = parent;
        f.depth = depth;
        f.moved = std::move(moved);
        f.has_aux = false;
        f.mono = true;
        for (int v : f.verts) {
            const PsmVertex& pv = verts_[static_cast<std::size_t>(v)];
            if (!pv.is_player()) f.has_aux = true;
            if (delta_.cls(pv.chair) !=
                delta_.cls(verts_[static_cast<std::size_t>(f.verts.front())].chair))
                f.mono = false;
        }
        facets_.push_back(std::move(f));
        ++alive_;
        max_depth_ = std::max(max_depth_, depth);
    }

    WordSystem words_;
    Pairing pairing_;
    TwoColoring delta_;
    int n_ = 0;
    std::vector<PsmVertex> verts_;
    std::vector<PsmFacet> facets_;
    std::map<std::pair<int, long long>, int> clone_count_;
    std::size_t alive_ = 0;
    long long split_count_ = 0;
    int max_depth_ = 1;
};

/// Convenience constructor matching the operation name used elsewhere.
inline Psm initial_psm(const WordSystem& words, const Pairing& pairing) {
    return Psm(words, pairing);
}

struct AdversaryStats {
    long long step = 0;
    std::size_t facets = 0;
    long long splits = 0;
    int max_depth = 0;
    std::size_t mono_nonaux = 0;
};

using AdversaryStatsFn = std::function<void(const AdversaryStats&)>;

namespace detail {

/// Index of the lexicographically least alive monochromatic
/// non-auxiliary facet, or -1. Parity plus the unique monochromatic
/// auxiliary facet guarantee one exists while the complex is valid.
inline int least_mono_nonaux(const Psm& psm) {
    int best = -1;
    std::vector<std::tuple<int, long long, int>> best_key;
    const auto& facets = psm.facets();
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
        const PsmFacet& f = facets[fi];
        if (!f.alive || f.has_aux || !f.mono) continue;
        auto key = psm.facet_key(f);
        if (best < 0 || key < best_key) {
            best = static_cast<int>(fi);
            best_key = std::move(key);
        }
    }
    return best;
}

/// The canonical conflict edge inside a facet: order the player vertices
/// by key and take the least (i, j) sharing a chair.
inline std::pair<int, int> facet_conflict_edge(const Psm& psm, const PsmFacet& f) {
    std::vector<int> players;
    for (int v : f.verts)
        if (psm.vertices()[static_cast<std::size_t>(v)].is_player()) players.push_back(v);
    std::sort(players.begin(), players.end(), [&](int x, int y) {
        return psm.vertices()[static_cast<std::size_t>(x)].key() <
               psm.vertices()[static_cast<std::size_t>(y)].key();
    });
    for (std::size_t i = 0; i < players.size(); ++i)
        for (std::size_t j = i + 1; j < players.size(); ++j)
            if (psm.vertices()[static_cast<std::size_t>(players[i])].chair ==
                psm.vertices()[static_cast<std::size_t>(players[j])].chair)
                return {players[i], players[j]};
    throw NotAnEdgeConflict("facet has no conflicted pair");
}

inline Trace trace_from_facet(const Psm& psm, int facet_id, const std::string& system_name) {
    std::vector<int> chain;
    for (int fi = facet_id; fi >= 0; fi = psm.facets()[static_cast<std::size_t>(fi)].parent)
        chain.push_back(fi);
    std::reverse(chain.begin(), chain.end());

    const PsmFacet& first = psm.facets()[static_cast<std::size_t>(chain.front())];
    std::vector<int> player_words;
    for (int v : first.verts) {
        const PsmVertex& pv = psm.vertices()[static_cast<std::size_t>(v)];
        if (!pv.is_player() || pv.steps != 0)
            throw Error("subdivision path does not start at an initial configuration");
        player_words.push_back(pv.player);
    }
    std::sort(player_words.begin(), player_words.end());

    Trace t;
    t.system_name = system_name;
    t.model = SchedulerModel::PairwiseImmediate;
    for (int p : player_words) t.word_indices.push_back(p - 1);
    t.starts.assign(player_words.size(), 0);
    t.initial = make_configuration(t.word_indices, t.starts);

    Configuration cur = t.initial;
    for (std::size_t k = 1; k < chain.size(); ++k) {
        const PsmFacet& f = psm.facets()[static_cast<std::size_t>(chain[k])];
        std::vector<int> moved;
        for (int p : f.moved) {
            const auto it = std::lower_bound(player_words.begin(), player_words.end(), p);
            moved.push_back(static_cast<int>(it - player_words.begin()));
        }
        std::sort(moved.begin(), moved.end());
        for (int i : moved) cur.players[static_cast<std::size_t>(i)].moves += 1;
        t.steps.push_back(TraceStep{moved, cur});
    }
    return t;
}

} // namespace detail

/// Run the monochromatic-facet walk until a monochromatic non-auxiliary
/// facet of depth >= t+1 exists, then return its root-to-leaf schedule.
/// Every configuration on that path is unsafe, so the trace of >= t moves
/// never terminates the game. Throws BudgetExceeded (with progress) when
/// the complex outgrows facet_budget.
inline Trace adversary(const WordSystem& words, const Pairing& pairing, long long t,
                       long long facet_budget = 100'000, AdversaryStatsFn stats = {},
                       const std::string& system_name = "-") {
    if (t < 1) throw Error("adversary needs t >= 1");
    Psm psm(words, pairing);
    long long step = 0;
    while (true) {
        const int best = detail::least_mono_nonaux(psm);
        if (best < 0)
            throw Error("no monochromatic non-auxiliary facet; complex is corrupt");
        const PsmFacet& f = psm.facets()[static_cast<std::size_t>(best)];
        if (f.depth >= t + 1) return detail::trace_from_facet(psm, best, system_name);
        const auto [v1, v2] = detail::facet_conflict_edge(psm, f);
        psm.subdivide(v1, v2);
        ++step;
        if (stats) {
            AdversaryStats st;
            st.step = step;
            st.facets = psm.alive_count();
            st.splits = psm.split_count();
            st.max_depth = psm.max_depth();
            std::size_t mono_nonaux = 0;
            for (const PsmFacet& g : psm.facets())
                if (g.alive && g.mono && !g.has_aux) ++mono_nonaux;
            st.mono_nonaux = mono_nonaux;
            stats(st);
        }
        if (static_cast<long long>(psm.alive_count()) > facet_budget)
            throw BudgetExceeded("facet count " + std::to_string(psm.alive_count()) +
                                 " exceeds budget " + std::to_string(facet_budget) +
                                 " at depth " + std::to_string(psm.max_depth()) + " after " +
                                 std::to_string(step) + " subdivisions");
    }
}

} // namespace mc
