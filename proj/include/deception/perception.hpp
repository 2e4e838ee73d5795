#pragma once

#include "deception/arena.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace deception {

// Sorted, duplicate-free set of action ids.
class ActionSet {
public:
    ActionSet() = default;
    explicit ActionSet(std::vector<ActionId> actions);

    std::span<const ActionId> actions() const { return actions_; }
    std::size_t size() const { return actions_.size(); }
    bool empty() const { return actions_.empty(); }
    bool contains(ActionId a) const;
    bool is_subset_of(const ActionSet& other) const;
    void insert(ActionId a);
    ActionSet united(const ActionSet& other) const;
    ActionSet intersected(const ActionSet& other) const;

    friend auto operator<=>(const ActionSet&, const ActionSet&) = default;

private:
    std::vector<ActionId> actions_;
};

// "{a1,a2}" using the arena's action names, in id order.
std::string format_action_set(const GameArena& g, const ActionSet& x);

// How P2 updates his perceived P1 action set after observing an action.
struct InferenceMechanism {
    enum class Kind : std::uint8_t { additive, classes, table };

    Kind kind = Kind::additive;
    // classes: a partition of A1. A revealed action reveals its whole class.
    std::vector<std::pair<std::string, ActionSet>> classes;
    // table: explicit (perception, action) -> perception entries.
    std::map<std::pair<ActionSet, ActionId>, ActionSet> table;

    static InferenceMechanism additive() { return {}; }
    // Validates that the classes partition A1.
    static InferenceMechanism class_based(const GameArena& g,
                                          std::vector<std::pair<std::string, ActionSet>> classes);
};

// The perception after P1 plays a. Already-known actions change nothing.
// Throws ValidationError if a is not a P1 action, if a table mechanism has
// no entry, or if the result would drop x or a.
ActionSet infer(const InferenceMechanism& m, const GameArena& g, const ActionSet& x, ActionId a);

// Graph of perceptions reachable from x0. Vertex 0 is x0; the rest are
// numbered in breadth-first order exploring P1 actions by ascending id.
class InferenceGraph {
public:
    InferenceGraph() = default;

    std::size_t num_vertices() const { return vertices_.size(); }
    VertexId initial() const { return VertexId{0}; }
    const ActionSet& perception(VertexId v) const { return vertices_[v.index]; }
    // E(v, a) for a P1 action a.
    VertexId target(VertexId v, ActionId a) const;
    std::span<const ActionId> p1_actions() const { return p1_actions_; }
    std::optional<VertexId> find(const ActionSet& x) const;

    friend InferenceGraph build_inference_graph(const InferenceMechanism& m, const GameArena& g,
                                                const ActionSet& x0);

private:
    std::vector<ActionSet> vertices_;
    std::vector<ActionId> p1_actions_;
    std::vector<std::int32_t> slot_;                 // by action id; -1 for P2 actions
    std::vector<std::vector<VertexId>> edges_;       // [vertex][slot]
};

InferenceGraph build_inference_graph(const InferenceMechanism& m, const GameArena& g,
                                     const ActionSet& x0);

// Perception document: initial set plus mechanism.
struct PerceptionSpec {
    ActionSet initial;
    InferenceMechanism mechanism;
};

PerceptionSpec load_perception(std::string_view text, const GameArena& g);

} // namespace deception
