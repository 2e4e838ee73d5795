#pragma once

#include "deception/hypergame.hpp"

#include <vector>

namespace deception {

// The data both deceptive solvers need, detached from how the hypergame was
// built so that hand-made instances can be solved directly.
struct DeceptionProblem {
    const GameArena* arena = nullptr;
    // M(v) per state; consulted at P2 states only.
    std::vector<std::vector<ActionId>> perm;
    // Non-deceptive winning states (rank 0).
    StateSet z0;
    // P1 moves used inside z0, one per P1 state of z0 outside F.
    Strategy z0_strategy;
};

DeceptionProblem make_problem(const Hypergame& h);

enum class SolveKind : std::uint8_t { dsw, dasw };

enum class DaswVariant : std::uint8_t {
    // Each outer step removes P2-trapped states, then alternates a safety
    // pass with a positive-reachability pass toward Z_k until stable.
    nested,
    // One safety pass per outer step and no reachability pass.
    literal,
};

struct DeceptiveSolveResult {
    SolveKind kind = SolveKind::dsw;
    Region region;
    Strategy strategy;
    // Per outer iteration (DASW only): the trapped set C_k and the number of
    // removal iterations used to compute it.
    std::vector<StateSet> trapped;
    std::vector<std::uint32_t> trapped_iterations;
    // Iterates Z_0, Z_1, ... including the repeated fixed point.
    std::vector<StateSet> iterates;
};

DeceptiveSolveResult dsw(const DeceptionProblem& p);
DeceptiveSolveResult dasw(const DeceptionProblem& p, DaswVariant variant = DaswVariant::nested);

DeceptiveSolveResult dsw(const Hypergame& h);
DeceptiveSolveResult dasw(const Hypergame& h, DaswVariant variant = DaswVariant::nested);

struct VodReport {
    std::size_t win1_true = 0;
    std::size_t win2_true = 0;
    std::size_t deceptive_projection = 0;
    double vod = 0.0;
};

// Counts are over base states that appear in V.
VodReport vod(const Hypergame& h, const DeceptiveSolveResult& r);
double vod_ratio(std::size_t projection, std::size_t win1, std::size_t win2);

// [{"state": name, "rank": k}] sorted by name.
std::string save_region(const GameArena& g, const Region& r);
Region load_region(std::string_view text, const GameArena& g);

std::string save_vod(const VodReport& v);

} // namespace deception
