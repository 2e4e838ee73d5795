#pragma once

#include "deception/attractor.hpp"
#include "deception/perception.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace deception {

struct ProductState {
    StateId state;
    VertexId vertex;
    friend auto operator<=>(const ProductState&, const ProductState&) = default;
};

// What P2's permissive-action map holds at P2 states outside the winning
// region of his current perceptual game.
enum class OutsidePerm : std::uint8_t {
    all_enabled,      // unconstrained (default)
    smallest_enabled, // a single arbitrary action; used to check the choice is irrelevant
};

struct HypergameOptions {
    // Restrict to states reachable from these pairs; nullopt builds the full product.
    std::optional<std::vector<ProductState>> initial;
    OutsidePerm outside_perm = OutsidePerm::all_enabled;
    // Solve the per-vertex perceptual games concurrently.
    bool parallel = true;
};

// Synchronous product of the true game with P2's inference graph.
class Hypergame {
public:
    const GameArena& arena() const { return arena_; }
    const GameArena& base() const { return *base_; }
    const InferenceGraph& igraph() const { return *igraph_; }
    std::shared_ptr<const GameArena> base_ptr() const { return base_; }

    std::size_t num_states() const { return arena_.num_states(); }
    ProductState project(StateId v) const { return projection_[v.index]; }
    std::optional<StateId> find(ProductState p) const;

    // M(v) for P2 states, ascending; empty for P1 states.
    std::span<const ActionId> perm(StateId v) const { return perm_[v.index]; }

    // The true game's solution and each perceptual game's solution.
    const GameSolution& true_solution() const { return true_solution_; }
    const GameSolution& perceived_solution(VertexId g) const { return perceived_[g.index]; }

    // States of V whose base state lies in Win1 of the true game.
    StateSet lifted_true_win1() const;
    // Distinct base states appearing in V.
    StateSet base_support() const;
    // Distinct base states of a subset of V.
    StateSet project_set(const StateSet& vs) const;

    friend Hypergame build_hypergame(std::shared_ptr<const GameArena> g,
                                     std::shared_ptr<const InferenceGraph> ig,
                                     const HypergameOptions& options);

private:
    std::shared_ptr<const GameArena> base_;
    std::shared_ptr<const InferenceGraph> igraph_;
    GameArena arena_;
    std::vector<ProductState> projection_;
    std::vector<std::uint32_t> index_;  // state * |Gamma| + vertex -> product id + 1, or 0
    std::vector<std::vector<ActionId>> perm_;
    GameSolution true_solution_;
    std::vector<GameSolution> perceived_;
};

// Product state names are "<state>@<perception>", e.g. "s2@{a2}". Throws
// ValidationError if an initial pair is out of range.
Hypergame build_hypergame(std::shared_ptr<const GameArena> g,
                          std::shared_ptr<const InferenceGraph> ig,
                          const HypergameOptions& options = {});

std::vector<StateId> project_run(const Hypergame& h, std::span<const StateId> run);

// The permissive map in strategy-document form (support per P2 state).
Strategy perm_strategy(const Hypergame& h);

} // namespace deception
