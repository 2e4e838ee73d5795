#pragma once

#include "deception/arena.hpp"
#include "deception/hypergame.hpp"
#include "deception/perception.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace testing {

using namespace deception;

std::string data_path(const std::string& name);
std::string read_text(const std::string& path);

// Four-state running example: s0 final, s1/s3 owned by P1, s0/s2 by P2.
std::shared_ptr<const GameArena> running_game();
// Hypergame of the running example with P2 initially aware of a2 only.
// With `reachable`, only states reachable from (s1..s3, {a2}) are kept.
Hypergame running_hypergame(bool reachable = true);

struct RandomGameParams {
    std::uint32_t max_states = 30;
    std::uint32_t max_p1_actions = 4;
    std::uint32_t max_p2_actions = 3;
    double final_probability = 0.15;
};

GameArena random_game(std::mt19937_64& rng, const RandomGameParams& p = {});
// Random non-empty subset of the P1 actions.
ActionSet random_subset(std::mt19937_64& rng, std::span<const ActionId> actions);

struct RandomHypergame {
    std::shared_ptr<const GameArena> game;
    std::shared_ptr<const InferenceGraph> igraph;
    ActionSet x0;
    std::unique_ptr<Hypergame> h;
};

// Random game with a random initial perception and additive inference.
RandomHypergame random_hypergame(std::mt19937_64& rng, const RandomGameParams& p = {},
                                 const HypergameOptions& opts = {});

// ---------------------------------------------------------------------------
// Reference computations written independently of the library solvers.

// Iterates Z <- Z ∪ pre(Z) from the final states; rank = first iteration.
struct NaiveSolution {
    std::vector<bool> win1;
    std::vector<std::uint32_t> rank;
};
NaiveSolution naive_solve(const GameArena& g);

// Same, with P1 limited to the actions in x.
NaiveSolution naive_solve(const GameArena& g, const ActionSet& x);

// Permissive P2 actions at s in the game where P1 is limited to x.
std::vector<ActionId> naive_permissive(const GameArena& g, const ActionSet& x, StateId s);

// Full hypergame as plain tables, built without the library's product code.
struct NaiveHypergame {
    std::vector<std::pair<StateId, VertexId>> states;
    std::vector<Player> owner;
    std::vector<bool> final;
    std::vector<std::vector<std::pair<ActionId, std::uint32_t>>> moves;
    std::vector<std::vector<ActionId>> perm;
};
NaiveHypergame naive_hypergame(const GameArena& g, const InferenceGraph& ig);

// Deceptive sure-winning states by plain iteration from the lifted Win1.
std::vector<bool> naive_dsw(const NaiveHypergame& nh, const GameArena& g);

// Almost-sure reachability against a uniformly random P2, as the nested
// fixed point nu Y. mu X. F ∪ apre(Y, X).
std::vector<bool> naive_asw(const NaiveHypergame& nh);

// Library state ids of the members of a per-naive-index mask.
StateSet to_library_set(const Hypergame& h, const NaiveHypergame& nh, const std::vector<bool>& mask);

// Name list helper for readable assertions.
std::vector<std::string> names(const GameArena& g, const StateSet& s);

} // namespace testing
