#pragma once

#include "deception/hypergame.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace deception::sim {

// Name of the generator recorded in every stats document.
inline constexpr const char* rng_name = "mt19937_64/splitmix64";

struct RolloutConfig {
    std::uint64_t episodes = 1000;
    std::uint64_t horizon = 0;  // 0 means 10 * |V|
    std::uint64_t seed = 0;
    // P2 plays uniformly over M(v) unless a fixed strategy is given.
    std::optional<Strategy> p2_policy;
    bool keep_traces = false;
    unsigned threads = 1;
};

struct Trace {
    std::vector<StateId> states;
    std::vector<ActionId> actions;
    bool reached = false;
};

struct RolloutStats {
    std::uint64_t episodes = 0;
    std::uint64_t reached = 0;
    std::uint64_t success_steps = 0;  // summed over successful episodes
    double mean_steps = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t horizon = 0;
    std::vector<Trace> traces;

    friend bool operator==(const RolloutStats& a, const RolloutStats& b)
    {
        return a.episodes == b.episodes && a.reached == b.reached &&
               a.success_steps == b.success_steps && a.seed == b.seed && a.horizon == b.horizon;
    }
};

// Episode i draws from its own generator, so results do not depend on the
// thread count. A P2 state with no permissive action ends the episode as a
// P1 win. Throws ValidationError when p1 has no move at a reached P1 state.
RolloutStats rollout(const Hypergame& h, const Strategy& p1, StateId start,
                     const RolloutConfig& cfg);

// {episodes, reached, mean_steps, seed, horizon, rng}
std::string save_stats(const RolloutStats& s);

// p1 where defined, uniform over enabled actions elsewhere.
Strategy complete_uniform(const GameArena& g, const Strategy& p1);

inline constexpr std::size_t oracle_state_limit = 10000;

// States from which F is reached with probability one when P1 chooses freely
// among enabled actions and each P2 state moves uniformly over M(v).
// Throws SizeGuardError above oracle_state_limit states.
StateSet asw_oracle(const Hypergame& h);
StateSet asw_oracle(const GameArena& g, const std::vector<std::vector<ActionId>>& perm);

struct PlayOptions {
    bool reveal_all = false;
    std::uint64_t seed = 0;
    std::size_t max_steps = 1000;
};

enum class PlayOutcome : std::uint8_t { p1_won, quit, input_closed, step_limit, no_move };

struct Transcript {
    std::vector<StateId> states;
    std::vector<ActionId> actions;  // actions[i] leads from states[i] to states[i + 1]
    PlayOutcome outcome = PlayOutcome::quit;
};

// Human plays P2 on `in`/`out`. By default only the base state and P2's
// current perception of P1's actions are shown.
Transcript interactive_play(const Hypergame& h, const Strategy& p1, StateId start, std::istream& in,
                            std::ostream& out, const PlayOptions& options = {});

std::string save_transcript(const Hypergame& h, const Transcript& t);

} // namespace deception::sim
