#pragma once

#include "deception/hypergame.hpp"
#include "deception/perception.hpp"
#include "deception/scltl.hpp"
#include "deception/solvers.hpp"

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace deception::ctf {

struct Cell {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class InitialStates : std::uint8_t {
    start,   // only the configured start positions
    intact,  // every valid placement with fences intact and P1 to move
};

struct GridConfig {
    int width = 5;
    int height = 5;
    std::vector<Cell> p2_territory;
    std::vector<Cell> walls;
    std::vector<Cell> fences{{0, 3}, {3, 3}};
    std::array<Cell, 2> flags{};
    Cell p1_start;
    Cell p2_start;
    std::uint32_t initial_inference_vertex = 0;
    InitialStates initial_states = InitialStates::start;
    // When false, P1 cannot step or jump onto P2's cell, so P2 can block.
    bool p1_enters_p2_cell = false;
};

// Parses and validates a layout document.
GridConfig load_layout(std::string_view text);
std::string save_layout(const GridConfig& c);
void validate(const GridConfig& c);

struct CtfState {
    Cell p1;
    Cell p2;
    std::array<bool, 2> cut{};
    Player turn = Player::p1;
    friend auto operator<=>(const CtfState&, const CtfState&) = default;
};

std::string state_name(const CtfState& s);

// P1 actions in declaration order: N E S W Cut JumpN JumpE JumpS JumpW.
// P2 actions: p2_N p2_E p2_S p2_W.
struct TransitionSystem {
    GameArena arena;
    std::vector<CtfState> states;  // by StateId
    std::vector<StateId> initial;  // entry states per the config
};

// Every valid state of the grid, labelled with FLAG1, FLAG2, collide.
// Throws ValidationError if some state would have no enabled action.
TransitionSystem build_transition_system(const GridConfig& c);

struct CtfInference {
    InferenceMechanism mechanism;
    std::shared_ptr<const InferenceGraph> graph;
};

// Movement known initially; the jumps form one class and Cut another.
CtfInference build_ctf_inference(const GameArena& ts);

// The two benchmark objectives over {FLAG1, FLAG2, collide}.
std::vector<std::string> ctf_propositions();
scltl::Formula objective(std::string_view name_or_text);

struct Benchmark {
    TransitionSystem ts;
    scltl::Dfa dfa;
    std::shared_ptr<const GameArena> game;       // reachable product with the DFA
    std::vector<StateId> game_initial;
    CtfInference inference;
    std::shared_ptr<const Hypergame> hypergame;  // reachable from (game_initial, vertex)
};

Benchmark build_benchmark(const GridConfig& c, const scltl::Formula& phi);

// Table-shaped summary: one row for the game and one per deceptive solver.
struct BenchRow {
    std::string label;
    std::size_t states = 0;
    std::size_t edges = 0;
    std::size_t finals = 0;
    std::optional<std::size_t> region;  // absent for the game row
    std::size_t projection = 0;
    std::size_t losing = 0;             // base states outside the projection
    std::optional<double> vod;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    DeceptiveSolveResult dsw;
    DeceptiveSolveResult dasw;
    VodReport dsw_vod;
    VodReport dasw_vod;
};

BenchReport run_benchmark(const Benchmark& b);
std::string format_rows(const std::vector<BenchRow>& rows);

} // namespace deception::ctf
