#pragma once

#include "deception/arena.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace deception {

// A set of states annotated with the iteration at which each entered a
// fixed point. Seed states have rank 0.
struct Region {
    static constexpr std::uint32_t unranked = std::numeric_limits<std::uint32_t>::max();

    StateSet members;
    std::vector<std::uint32_t> rank;  // unranked outside members
    // Number of iterations of the naive loop, counting the final one that
    // observes no change.
    std::uint32_t iterations = 0;

    Region() = default;
    explicit Region(std::size_t universe) : members(universe), rank(universe, unranked) {}

    bool contains(StateId s) const { return members.contains(s); }
    std::optional<std::uint32_t> rank_of(StateId s) const
    {
        if (!members.contains(s))
            return std::nullopt;
        return rank[s.index];
    }
    std::uint32_t max_rank() const;
    // States whose rank is at most k.
    StateSet layer_union(std::uint32_t k) const;
};

// ---------------------------------------------------------------------------
// Generic layered fixed points.
//
// A FixpointGraph assigns each state a quantifier and the list of successors
// that quantifier ranges over. The same engine computes Alg.-1-style
// attractors on arenas and the deceptive variants on hypergames; callers
// choose which edges count.

enum class Quantifier : std::uint8_t { never, exists, forall };

class FixpointGraph {
public:
    explicit FixpointGraph(std::size_t num_states);

    void set_quantifier(StateId s, Quantifier q) { quant_[s.index] = q; }
    void add_successor(StateId s, StateId t) { pending_.push_back({s, t}); }
    // Freezes the edge list; must be called before use.
    void finalize();

    std::size_t num_states() const { return quant_.size(); }
    Quantifier quantifier(StateId s) const { return quant_[s.index]; }
    std::span<const StateId> successors(StateId s) const;
    std::span<const StateId> predecessors(StateId s) const;

    // Swaps exists and forall; `never` is kept.
    FixpointGraph dual() const;

private:
    std::vector<Quantifier> quant_;
    std::vector<std::pair<StateId, StateId>> pending_;
    std::vector<std::uint32_t> succ_offset_, pred_offset_;
    std::vector<StateId> succ_, pred_;
    bool finalized_ = false;
};

// Least fixed point of Z <- Z u CPre(Z) from Z0 = seed, with ranks equal to
// the naive iteration index. A forall-state with no successors enters at
// rank 1 (vacuous); an exists-state with none never enters. States outside
// `domain` never enter (the seed is not filtered).
Region layered_attractor(const FixpointGraph& g, const StateSet& seed);
Region layered_attractor(const FixpointGraph& g, const StateSet& seed, const StateSet& domain);

// Greatest subset Y of u such that exists-states keep a successor in Y and
// forall-states keep all successors in Y. States in `sticky` are never
// removed. Returns the surviving set and the number of removal iterations
// (including the final one that observes no change).
struct SafeResult {
    StateSet survivors;
    std::uint32_t iterations = 0;
};
SafeResult greatest_safe_set(const FixpointGraph& g, const StateSet& u,
                             const StateSet& sticky);

// ---------------------------------------------------------------------------
// Reachability games.

// {v in S1 | exists enabled a: T(v,a) in u}
StateSet pre1(const GameArena& g, const StateSet& u);
// {v in S2 | forall enabled b: T(v,b) in u}; dead ends qualify vacuously.
StateSet pre2(const GameArena& g, const StateSet& u);

struct GameSolution {
    Region win1;
    StateSet win2;
};

GameSolution solve(const GameArena& g);

// The move of the rank-decreasing strategy at s: smallest enabled action
// whose successor has strictly smaller rank. Throws ValidationError if s is
// not a P1 state of win1 outside F.
ActionId sure_action(const GameArena& g, const Region& win1, StateId s);
// Deterministic strategy on (S1 n win1) \ F.
Strategy sure_strategy(const GameArena& g, const Region& win1);

// Support at each P2 state of win2: the enabled actions that stay in win2.
std::vector<ActionId> permissive_actions(const GameArena& g, const StateSet& win2, StateId s);
Strategy permissive_strategy(const GameArena& g, const StateSet& win2);

} // namespace deception
