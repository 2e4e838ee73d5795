#include "deception/arena.hpp"

#include "deception/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace deception {

using detail::json;

std::string_view to_string(Player p)
{
    return p == Player::p1 ? "P1" : "P2";
}

namespace {

Player parse_player(const json& v, std::string_view where)
{
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "P1")
            return Player::p1;
        if (s == "P2")
            return Player::p2;
    }
    throw ValidationError(std::string(where) + ": owner must be \"P1\" or \"P2\"");
}

} // namespace

// ---------------------------------------------------------------------------
// GameArena

std::optional<StateId> GameArena::successor(StateId s, ActionId a) const
{
    const auto& edges = enabled_[s.index];
    auto it = std::lower_bound(edges.begin(), edges.end(), a,
                               [](const Edge& e, ActionId x) { return e.action < x; });
    if (it == edges.end() || it->action != a)
        return std::nullopt;
    return it->target;
}

std::optional<StateId> GameArena::find_state(std::string_view name) const
{
    auto it = state_index_.find(std::string(name));
    if (it == state_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<ActionId> GameArena::find_action(std::string_view name) const
{
    auto it = action_index_.find(std::string(name));
    if (it == action_index_.end())
        return std::nullopt;
    return it->second;
}

StateId GameArena::state_id(std::string_view name) const
{
    if (auto s = find_state(name))
        return *s;
    throw ValidationError("unknown state '" + std::string(name) + "'");
}

ActionId GameArena::action_id(std::string_view name) const
{
    if (auto a = find_action(name))
        return *a;
    throw ValidationError("unknown action '" + std::string(name) + "'");
}

StateSet GameArena::states_of(Player p) const
{
    StateSet out(num_states());
    for (std::uint32_t i = 0; i < states_.size(); ++i)
        if (states_[i].owner == p)
            out.insert(StateId{i});
    return out;
}

// ---------------------------------------------------------------------------
// Builder

StateId GameArena::Builder::add_state(std::string name, Player owner, bool final,
                                      std::vector<std::string> labels)
{
    const StateId id{static_cast<std::uint32_t>(arena_.states_.size())};
    if (!arena_.state_index_.emplace(name, id).second)
        throw ValidationError("duplicate state '" + name + "'");
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    arena_.states_.push_back({std::move(name), owner, final, std::move(labels)});
    arena_.enabled_.emplace_back();
    return id;
}

ActionId GameArena::Builder::add_action(std::string name, Player owner)
{
    const ActionId id{static_cast<std::uint32_t>(arena_.actions_.size())};
    if (!arena_.action_index_.emplace(name, id).second)
        throw ValidationError("duplicate action '" + name + "'");
    arena_.actions_.push_back({std::move(name), owner});
    (owner == Player::p1 ? arena_.p1_actions_ : arena_.p2_actions_).push_back(id);
    return id;
}

void GameArena::Builder::add_transition(StateId from, ActionId action, StateId to)
{
    if (from.index >= arena_.states_.size() || to.index >= arena_.states_.size())
        throw ValidationError("transition references an unknown state id");
    if (action.index >= arena_.actions_.size())
        throw ValidationError("transition references an unknown action id");
    arena_.enabled_[from.index].push_back({action, to});
}

GameArena GameArena::Builder::build() &&
{
    GameArena g = std::move(arena_);
    const std::size_t n = g.states_.size();
    g.preds_.assign(n, {});
    g.final_ = StateSet(n);
    g.num_edges_ = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        const StateId s{i};
        auto& edges = g.enabled_[i];
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.action < b.action; });
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const Edge& e = edges[k];
            if (k > 0 && edges[k - 1].action == e.action)
                throw ValidationError("state '" + g.states_[i].name + "' has two transitions on '" +
                                      g.actions_[e.action.index].name + "'");
            if (g.actions_[e.action.index].owner != g.states_[i].owner)
                throw ValidationError("action '" + g.actions_[e.action.index].name +
                                      "' is not owned by the mover at state '" +
                                      g.states_[i].name + "'");
            g.preds_[e.target.index].push_back({s, e.action});
        }
        g.num_edges_ += edges.size();
        if (g.states_[i].final)
            g.final_.insert(s);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Documents

GameArena load_arena(std::string_view text)
{
    const json doc = detail::parse_json(text, "game document");
    GameArena::Builder b;

    for (const json& st : detail::require_array(doc, "states", "game document")) {
        const std::string name = detail::require_string(st, "name", "state");
        const std::string where = "state '" + name + "'";
        const Player owner = parse_player(detail::require(st, "owner", where), where);
        bool final = false;
        if (auto it = st.find("final"); it != st.end()) {
            if (!it->is_boolean())
                throw ValidationError(where + ": 'final' must be a boolean");
            final = it->get<bool>();
        }
        std::vector<std::string> labels;
        if (auto it = st.find("labels"); it != st.end()) {
            if (!it->is_array())
                throw ValidationError(where + ": 'labels' must be an array");
            for (const json& l : *it) {
                if (!l.is_string())
                    throw ValidationError(where + ": labels must be strings");
                labels.push_back(l.get<std::string>());
            }
        }
        b.add_state(name, owner, final, std::move(labels));
    }

    for (const json& ac : detail::require_array(doc, "actions", "game document")) {
        const std::string name = detail::require_string(ac, "name", "action");
        b.add_action(name, parse_player(detail::require(ac, "owner", "action '" + name + "'"),
                                        "action '" + name + "'"));
    }

    // Resolve names through a throwaway build of the declarations so far.
    GameArena::Builder names = b;
    const GameArena decl = std::move(names).build();

    for (const json& tr : detail::require_array(doc, "transitions", "game document")) {
        const std::string from = detail::require_string(tr, "from", "transition");
        const std::string act = detail::require_string(tr, "action", "transition");
        const std::string to = detail::require_string(tr, "to", "transition");
        const std::string where = "transition " + from + " -" + act + "-> " + to;
        auto s = decl.find_state(from);
        auto t = decl.find_state(to);
        auto a = decl.find_action(act);
        if (!s)
            throw ValidationError(where + ": undeclared state '" + from + "'");
        if (!t)
            throw ValidationError(where + ": undeclared state '" + to + "'");
        if (!a)
            throw ValidationError(where + ": undeclared action '" + act + "'");
        if (decl.owner(*a) != decl.owner(*s))
            throw ValidationError(where + ": action '" + act + "' is owned by " +
                                  std::string(to_string(decl.owner(*a))) + " but '" + from +
                                  "' is a " + std::string(to_string(decl.owner(*s))) + " state");
        b.add_transition(*s, *a, *t);
    }

    GameArena g = std::move(b).build();
    for (std::uint32_t i = 0; i < g.num_states(); ++i)
        if (g.is_dead_end(StateId{i}))
            throw ValidationError("state '" + g.name(StateId{i}) + "' has an empty enabled set");
    return g;
}

std::string save_arena(const GameArena& g)
{
    std::vector<StateId> order(g.num_states());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = StateId{i};
    std::sort(order.begin(), order.end(),
              [&](StateId a, StateId b) { return g.name(a) < g.name(b); });

    json states = json::array();
    json transitions = json::array();
    for (StateId s : order) {
        const auto& info = g.state(s);
        states.push_back({{"name", info.name},
                          {"owner", to_string(info.owner)},
                          {"final", info.final},
                          {"labels", info.labels}});
    }
    for (StateId s : order) {
        std::vector<Edge> edges(g.enabled(s).begin(), g.enabled(s).end());
        std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
            return g.name(a.action) < g.name(b.action);
        });
        for (const Edge& e : edges)
            transitions.push_back(
                {{"from", g.name(s)}, {"action", g.name(e.action)}, {"to", g.name(e.target)}});
    }
    json actions = json::array();
    for (std::uint32_t i = 0; i < g.num_actions(); ++i) {
        const auto& info = g.action(ActionId{i});
        actions.push_back({{"name", info.name}, {"owner", to_string(info.owner)}});
    }
    json doc = {{"states", std::move(states)},
                {"actions", std::move(actions)},
                {"transitions", std::move(transitions)}};
    return doc.dump(1) + "\n";
}

GameArena restrict_p1_actions(const GameArena& g, std::span<const ActionId> x)
{
    std::vector<bool> keep(g.num_actions(), false);
    for (ActionId a : g.actions_of(Player::p2))
        keep[a.index] = true;
    for (ActionId a : x) {
        if (a.index >= g.num_actions())
            throw ValidationError("perceived action set references an unknown action id");
        if (g.owner(a) != Player::p1)
            throw ValidationError("perceived action set contains P2 action '" + g.name(a) + "'");
        keep[a.index] = true;
    }

    GameArena::Builder b;
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const auto& info = g.state(StateId{i});
        b.add_state(info.name, info.owner, info.final, info.labels);
    }
    for (std::uint32_t i = 0; i < g.num_actions(); ++i)
        b.add_action(g.action(ActionId{i}).name, g.action(ActionId{i}).owner);
    for (std::uint32_t i = 0; i < g.num_states(); ++i)
        for (const Edge& e : g.enabled(StateId{i}))
            if (keep[e.action.index])
                b.add_transition(StateId{i}, e.action, e.target);
    return std::move(b).build();
}

bool occurrence_check(std::span<const StateId> run, const StateSet& target)
{
    return std::any_of(run.begin(), run.end(), [&](StateId s) { return target.contains(s); });
}

// ---------------------------------------------------------------------------
// Strategy

void Strategy::set_support(StateId s, std::span<const ActionId> support)
{
    auto& entry = table_[s.index];
    entry.clear();
    if (support.empty())
        return;
    const double p = 1.0 / static_cast<double>(support.size());
    for (ActionId a : support)
        entry.push_back({a, p});
}

std::span<const WeightedAction> Strategy::at(StateId s) const
{
    if (!defined_at(s))
        throw ValidationError("strategy is undefined at state #" + std::to_string(s.index));
    return table_[s.index];
}

std::vector<ActionId> Strategy::support(StateId s) const
{
    std::vector<ActionId> out;
    if (s.index < table_.size())
        for (const auto& wa : table_[s.index])
            if (wa.probability > 0.0)
                out.push_back(wa.action);
    return out;
}

std::size_t Strategy::num_defined() const
{
    return static_cast<std::size_t>(std::count_if(table_.begin(), table_.end(),
                                                  [](const auto& e) { return !e.empty(); }));
}

void Strategy::validate(const GameArena& g) const
{
    if (table_.size() != g.num_states())
        throw ValidationError("strategy universe does not match the arena");
    for (std::uint32_t i = 0; i < table_.size(); ++i) {
        const auto& entry = table_[i];
        if (entry.empty())
            continue;
        const StateId s{i};
        if (g.owner(s) != player_)
            throw ValidationError("strategy moves at '" + g.name(s) + "', which " +
                                  std::string(to_string(player_)) + " does not own");
        if (kind_ == StrategyKind::deterministic && entry.size() != 1)
            throw ValidationError("deterministic strategy has several actions at '" + g.name(s) + "'");
        double total = 0.0;
        for (const auto& wa : entry) {
            if (wa.probability < 0.0)
                throw ValidationError("negative probability at '" + g.name(s) + "'");
            if (!g.successor(s, wa.action))
                throw ValidationError("strategy plays '" + g.name(wa.action) +
                                      "', which is not enabled at '" + g.name(s) + "'");
            total += wa.probability;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw ValidationError("strategy probabilities at '" + g.name(s) + "' do not sum to 1");
    }
}

std::string save_strategy(const GameArena& g, const Strategy& pi)
{
    json doc = json::object();
    for (std::uint32_t i = 0; i < pi.universe(); ++i) {
        const StateId s{i};
        if (!pi.defined_at(s))
            continue;
        const auto supp = pi.support(s);
        if (pi.kind() == StrategyKind::deterministic) {
            doc[g.name(s)] = g.name(supp.front());
        } else {
            json arr = json::array();
            for (ActionId a : supp)
                arr.push_back(g.name(a));
            doc[g.name(s)] = std::move(arr);
        }
    }
    return doc.dump(1) + "\n";
}

Strategy load_strategy(std::string_view text, const GameArena& g, Player player)
{
    const json doc = detail::parse_json(text, "strategy document");
    if (!doc.is_object())
        throw ValidationError("strategy document must be an object");
    bool any_array = false;
    for (const auto& [key, val] : doc.items())
        any_array = any_array || val.is_array();
    Strategy pi(player, any_array ? StrategyKind::randomized_support : StrategyKind::deterministic,
                g.num_states());
    for (const auto& [key, val] : doc.items()) {
        const StateId s = g.state_id(key);
        std::vector<ActionId> supp;
        if (val.is_string()) {
            supp.push_back(g.action_id(val.get<std::string>()));
        } else if (val.is_array()) {
            for (const json& a : val) {
                if (!a.is_string())
                    throw ValidationError("strategy entry for '" + key + "' must list action names");
                supp.push_back(g.action_id(a.get<std::string>()));
            }
            std::sort(supp.begin(), supp.end());
            supp.erase(std::unique(supp.begin(), supp.end()), supp.end());
        } else {
            throw ValidationError("strategy entry for '" + key + "' must be a name or an array");
        }
        if (supp.empty())
            throw ValidationError("strategy entry for '" + key + "' is empty");
        pi.set_support(s, supp);
    }
    pi.validate(g);
    return pi;
}

} // namespace deception
