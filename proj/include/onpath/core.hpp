#ifndef ONPATH_CORE_HPP
#define ONPATH_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Finite choice spaces, budgets, observations and preferences for
// multi-period choice data, plus the section/projection algebra that
// the revealed-preference axioms consume.
//
// Everything here is an immutable value type; all operations are pure.

namespace onpath {

using OutcomeId = std::uint32_t;

constexpr OutcomeId kNoOutcome = static_cast<OutcomeId>(-1);

/// Per-period labeled alternatives. Periods are 0-based internally;
/// user-facing text uses 1-based period numbers.
struct ChoiceSpace {
    std::vector<std::vector<std::string>> alternatives;

    int periods() const { return static_cast<int>(alternatives.size()); }
    int size(int t) const { return static_cast<int>(alternatives[t].size()); }

    /// Total number of outcomes |X| = prod_t |X_t|.
    std::size_t outcome_count() const {
        std::size_t n = 1;
        for (const auto& xs : alternatives) n *= xs.size();
        return n;
    }

    /// Row-major rank; id order coincides with lexicographic coordinate order.
    OutcomeId id_of(const std::vector<int>& coords) const {
        OutcomeId id = 0;
        for (int t = 0; t < periods(); ++t)
            id = id * static_cast<OutcomeId>(size(t)) + static_cast<OutcomeId>(coords[t]);
        return id;
    }

    std::vector<int> coords_of(OutcomeId id) const {
        std::vector<int> c(periods());
        for (int t = periods() - 1; t >= 0; --t) {
            c[t] = static_cast<int>(id % size(t));
            id /= size(t);
        }
        return c;
    }

    int coord_of(OutcomeId id, int t) const {
        for (int s = periods() - 1; s > t; --s) id /= size(s);
        return static_cast<int>(id % size(t));
    }

    bool valid() const {
        if (periods() < 2) return false;
        for (const auto& xs : alternatives) {
            if (xs.empty()) return false;
            auto sorted = xs;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
        }
        return true;
    }

    bool operator==(const ChoiceSpace&) const = default;
};

/// A budget is a finite set of outcomes, stored as a sorted id vector.
struct Budget {
    std::vector<OutcomeId> members;  // sorted, unique

    bool contains(OutcomeId id) const {
        return std::binary_search(members.begin(), members.end(), id);
    }
    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }

    static Budget from_ids(std::vector<OutcomeId> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return Budget{std::move(ids)};
    }

    bool operator==(const Budget&) const = default;
};

struct Observation {
    Budget budget;
    OutcomeId choice = 0;

    bool operator==(const Observation&) const = default;
};

struct Dataset {
    ChoiceSpace space;
    std::vector<Observation> observations;

    int periods() const { return space.periods(); }
    std::size_t k() const { return observations.size(); }

    bool operator==(const Dataset&) const = default;
};

/// Weak order over the full outcome set, stored as an ordered partition:
/// earlier block = strictly better, members of a block are indifferent.
class Preference {
public:
    enum class Kind { Linear, Weak };

    Preference() = default;

    /// Builds from ordered blocks; throws if the blocks do not partition
    /// the outcome set exactly.
    static Preference from_blocks(const ChoiceSpace& space,
                                  std::vector<std::vector<OutcomeId>> blocks) {
        Preference p;
        const std::size_t n = space.outcome_count();
        p.rank_.assign(n, kNoRank);
        std::size_t seen = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b].empty()) throw std::invalid_argument("preference: empty block");
            for (OutcomeId id : blocks[b]) {
                if (id >= n) throw std::invalid_argument("preference: outcome out of range");
                if (p.rank_[id] != kNoRank)
                    throw std::invalid_argument("preference: outcome appears twice");
                p.rank_[id] = static_cast<std::uint32_t>(b);
                ++seen;
            }
            std::sort(blocks[b].begin(), blocks[b].end());
        }
        if (seen != n) throw std::invalid_argument("preference: blocks do not cover X");
        p.blocks_ = std::move(blocks);
        return p;
    }

    /// Linear order given as a ranking list, best first.
    static Preference from_ranking(const ChoiceSpace& space,
                                   const std::vector<OutcomeId>& best_first) {
        std::vector<std::vector<OutcomeId>> blocks;
        blocks.reserve(best_first.size());
        for (OutcomeId id : best_first) blocks.push_back({id});
        return from_blocks(space, std::move(blocks));
    }

    static Preference total_indifference(const ChoiceSpace& space) {
        std::vector<OutcomeId> all(space.outcome_count());
        std::iota(all.begin(), all.end(), 0u);
        return from_blocks(space, {all});
    }

    std::uint32_t rank(OutcomeId id) const { return rank_[id]; }
    const std::vector<std::vector<OutcomeId>>& blocks() const { return blocks_; }
    std::size_t outcome_count() const { return rank_.size(); }

    bool is_linear() const {
        for (const auto& b : blocks_)
            if (b.size() != 1) return false;
        return true;
    }
    Kind kind() const { return is_linear() ? Kind::Linear : Kind::Weak; }

    /// a strictly preferred to b.
    bool strictly_better(OutcomeId a, OutcomeId b) const { return rank_[a] < rank_[b]; }
    bool weakly_better(OutcomeId a, OutcomeId b) const { return rank_[a] <= rank_[b]; }
    bool indifferent(OutcomeId a, OutcomeId b) const { return rank_[a] == rank_[b]; }

    bool operator==(const Preference& o) const { return rank_ == o.rank_; }

private:
    static constexpr std::uint32_t kNoRank = static_cast<std::uint32_t>(-1);
    std::vector<std::vector<OutcomeId>> blocks_;
    std::vector<std::uint32_t> rank_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    int observation;  // -1 when the problem is in the space itself
    std::string reason;
};

/// Reports every invariant violation; an empty report means the dataset is
/// well formed. Nothing is silently repaired.
inline std::vector<Violation> validate(const Dataset& d) {
    std::vector<Violation> out;
    if (d.space.periods() < 2) out.push_back({-1, "space must have at least 2 periods"});
    for (int t = 0; t < d.space.periods(); ++t) {
        if (d.space.alternatives[t].empty())
            out.push_back({-1, "period " + std::to_string(t + 1) + " has no alternatives"});
        auto sorted = d.space.alternatives[t];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            out.push_back({-1, "period " + std::to_string(t + 1) + " has duplicate labels"});
    }
    if (d.observations.empty()) out.push_back({-1, "dataset has no observations"});
    const std::size_t n = d.space.outcome_count();
    for (std::size_t k = 0; k < d.observations.size(); ++k) {
        const auto& obs = d.observations[k];
        const std::string at = "observation " + std::to_string(k);
        if (obs.budget.empty()) out.push_back({static_cast<int>(k), at + ": empty budget"});
        for (OutcomeId id : obs.budget.members)
            if (id >= n) out.push_back({static_cast<int>(k), at + ": budget member out of range"});
        if (!std::is_sorted(obs.budget.members.begin(), obs.budget.members.end()))
            out.push_back({static_cast<int>(k), at + ": budget not in canonical order"});
        if (std::adjacent_find(obs.budget.members.begin(), obs.budget.members.end()) !=
            obs.budget.members.end())
            out.push_back({static_cast<int>(k), at + ": duplicate budget member"});
        if (obs.choice >= n)
            out.push_back({static_cast<int>(k), at + ": choice out of range"});
        else if (!obs.budget.contains(obs.choice))
            out.push_back({static_cast<int>(k), at + ": choice not in budget"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Section algebra

/// B(x_1,...,x_t): members of the budget whose first `prefix.size()`
/// coordinates equal the prefix. An empty prefix returns the budget itself;
/// an empty result is a legal value.
inline Budget section(const ChoiceSpace& space, const Budget& budget,
                      const std::vector<int>& prefix) {
    Budget out;
    for (OutcomeId id : budget.members) {
        bool match = true;
        for (std::size_t t = 0; t < prefix.size(); ++t)
            if (space.coord_of(id, static_cast<int>(t)) != prefix[t]) { match = false; break; }
        if (match) out.members.push_back(id);
    }
    return out;
}

/// Prefix of an outcome: its first t coordinates.
inline std::vector<int> prefix_of(const ChoiceSpace& space, OutcomeId id, int t) {
    std::vector<int> p(static_cast<std::size_t>(t));
    for (int s = 0; s < t; ++s) p[s] = space.coord_of(id, s);
    return p;
}

/// Section of the budget at the prefix x_1..x_t of a given outcome.
inline Budget section_at(const ChoiceSpace& space, const Budget& budget, OutcomeId id, int t) {
    return section(space, budget, prefix_of(space, id, t));
}

/// B(x_{-t}): members agreeing with `fixed` on every period except t.
inline Budget section_fixing_others(const ChoiceSpace& space, const Budget& budget,
                                    OutcomeId fixed, int t) {
    Budget out;
    for (OutcomeId id : budget.members) {
        bool match = true;
        for (int s = 0; s < space.periods(); ++s) {
            if (s == t) continue;
            if (space.coord_of(id, s) != space.coord_of(fixed, s)) { match = false; break; }
        }
        if (match) out.members.push_back(id);
    }
    return out;
}

/// Projection of a budget onto period-1 coordinates (sorted, unique).
inline std::vector<int> first_period_choices(const ChoiceSpace& space, const Budget& budget) {
    std::vector<int> xs;
    for (OutcomeId id : budget.members) xs.push_back(space.coord_of(id, 0));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

/// The weakly preferred elements of a nonempty candidate set: the earliest
/// preference block that intersects it.
inline std::vector<OutcomeId> max_set(const std::vector<OutcomeId>& candidates,
                                      const Preference& pref) {
    if (candidates.empty()) throw std::invalid_argument("empty choice set");
    std::uint32_t best = pref.rank(candidates.front());
    for (OutcomeId id : candidates) best = std::min(best, pref.rank(id));
    std::vector<OutcomeId> out;
    for (OutcomeId id : candidates)
        if (pref.rank(id) == best) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<OutcomeId> max_set(const Budget& candidates, const Preference& pref) {
    return max_set(candidates.members, pref);
}

// ---------------------------------------------------------------------------
// Small set helpers shared by the axiom checkers.

inline std::vector<OutcomeId> set_union(const std::vector<OutcomeId>& a,
                                        const std::vector<OutcomeId>& b) {
    std::vector<OutcomeId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<OutcomeId> set_difference(const std::vector<OutcomeId>& a,
                                             const std::vector<OutcomeId>& b) {
    std::vector<OutcomeId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool is_subset(const std::vector<OutcomeId>& a, const std::vector<OutcomeId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool set_contains(const std::vector<OutcomeId>& a, OutcomeId id) {
    return std::binary_search(a.begin(), a.end(), id);
}

}  // namespace onpath

#endif  // ONPATH_CORE_HPP
