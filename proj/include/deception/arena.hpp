#pragma once

#include "deception/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace deception {

struct Edge {
    ActionId action;
    StateId target;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Predecessor {
    StateId source;
    ActionId action;
};

// Turn-based deterministic reachability game <S, A1 u A2, T, F>.
//
// Transitions are partial: each state carries its own enabled-action set,
// sorted by ActionId, and every enabled action has exactly one successor.
// A state with an empty enabled set is a dead end; the play halts there and,
// unless the state is final, the mover loses.
class GameArena {
public:
    struct StateInfo {
        std::string name;
        Player owner = Player::p1;
        bool final = false;
        std::vector<std::string> labels;
        friend bool operator==(const StateInfo&, const StateInfo&) = default;
    };

    struct ActionInfo {
        std::string name;
        Player owner = Player::p1;
        friend bool operator==(const ActionInfo&, const ActionInfo&) = default;
    };

    class Builder;

    GameArena() = default;

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_actions() const { return actions_.size(); }
    std::size_t num_edges() const { return num_edges_; }

    const StateInfo& state(StateId s) const { return states_[s.index]; }
    const ActionInfo& action(ActionId a) const { return actions_[a.index]; }
    const std::string& name(StateId s) const { return states_[s.index].name; }
    const std::string& name(ActionId a) const { return actions_[a.index].name; }
    Player owner(StateId s) const { return states_[s.index].owner; }
    Player owner(ActionId a) const { return actions_[a.index].owner; }
    bool is_final(StateId s) const { return states_[s.index].final; }
    const StateSet& final_states() const { return final_; }

    std::span<const Edge> enabled(StateId s) const { return enabled_[s.index]; }
    bool is_dead_end(StateId s) const { return enabled_[s.index].empty(); }
    std::optional<StateId> successor(StateId s, ActionId a) const;
    std::span<const Predecessor> predecessors(StateId s) const { return preds_[s.index]; }

    // Declared actions of one player, ascending by id.
    std::span<const ActionId> actions_of(Player p) const
    {
        return p == Player::p1 ? p1_actions_ : p2_actions_;
    }

    std::optional<StateId> find_state(std::string_view name) const;
    std::optional<ActionId> find_action(std::string_view name) const;
    // As find_*, but a missing name is a ValidationError.
    StateId state_id(std::string_view name) const;
    ActionId action_id(std::string_view name) const;

    StateSet all_states() const { return StateSet::full(num_states()); }
    StateSet states_of(Player p) const;

    friend bool operator==(const GameArena& a, const GameArena& b)
    {
        return a.states_ == b.states_ && a.actions_ == b.actions_ && a.enabled_ == b.enabled_;
    }

private:
    std::vector<StateInfo> states_;
    std::vector<ActionInfo> actions_;
    std::vector<std::vector<Edge>> enabled_;
    std::vector<std::vector<Predecessor>> preds_;
    std::vector<ActionId> p1_actions_;
    std::vector<ActionId> p2_actions_;
    StateSet final_;
    std::unordered_map<std::string, StateId> state_index_;
    std::unordered_map<std::string, ActionId> action_index_;
    std::size_t num_edges_ = 0;
};

class GameArena::Builder {
public:
    StateId add_state(std::string name, Player owner, bool final = false,
                      std::vector<std::string> labels = {});
    ActionId add_action(std::string name, Player owner);
    void add_transition(StateId from, ActionId action, StateId to);

    std::size_t num_states() const { return arena_.states_.size(); }

    // Checks ownership and determinism. Dead ends are allowed here; the
    // document loader is stricter.
    GameArena build() &&;

private:
    GameArena arena_;
};

// Parses and validates a game document (JSON with states/actions/transitions).
GameArena load_arena(std::string_view text);
// Deterministic document: states sorted by name, transitions by (from, action).
std::string save_arena(const GameArena& g);

// The perceptual game G(X): P1 enabled sets intersected with x, everything
// else unchanged. P1 states left without actions become dead ends.
GameArena restrict_p1_actions(const GameArena& g, std::span<const ActionId> x);

// Occ(run) intersects target.
bool occurrence_check(std::span<const StateId> run, const StateSet& target);

struct WeightedAction {
    ActionId action;
    double probability = 1.0;
    friend bool operator==(const WeightedAction&, const WeightedAction&) = default;
};

enum class StrategyKind : std::uint8_t { deterministic, randomized_support };

// Memoryless strategy of one player: StateId -> distribution over actions.
class Strategy {
public:
    Strategy() = default;
    Strategy(Player player, StrategyKind kind, std::size_t num_states)
        : player_(player), kind_(kind), table_(num_states)
    {}

    Player player() const { return player_; }
    StrategyKind kind() const { return kind_; }
    std::size_t universe() const { return table_.size(); }

    void set_action(StateId s, ActionId a) { table_[s.index] = {{a, 1.0}}; }
    // Uniform over `support`; an empty support clears the entry.
    void set_support(StateId s, std::span<const ActionId> support);
    void clear(StateId s) { table_[s.index].clear(); }

    bool defined_at(StateId s) const { return s.index < table_.size() && !table_[s.index].empty(); }
    // Throws ValidationError when the strategy has no entry for s.
    std::span<const WeightedAction> at(StateId s) const;
    std::vector<ActionId> support(StateId s) const;
    std::size_t num_defined() const;

    // Support actions enabled and owned by player(), probabilities sum to 1.
    void validate(const GameArena& g) const;

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    Player player_ = Player::p1;
    StrategyKind kind_ = StrategyKind::deterministic;
    std::vector<std::vector<WeightedAction>> table_;
};

// {"state": "action"} for deterministic entries, {"state": ["a", "b"]} for supports.
std::string save_strategy(const GameArena& g, const Strategy& pi);
Strategy load_strategy(std::string_view text, const GameArena& g, Player player);

} // namespace deception
