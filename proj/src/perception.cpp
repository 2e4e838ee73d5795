#include "deception/perception.hpp"

#include "deception/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <deque>

namespace deception {

using detail::json;

ActionSet::ActionSet(std::vector<ActionId> actions) : actions_(std::move(actions))
{
    std::sort(actions_.begin(), actions_.end());
    actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
}

bool ActionSet::contains(ActionId a) const
{
    return std::binary_search(actions_.begin(), actions_.end(), a);
}

bool ActionSet::is_subset_of(const ActionSet& other) const
{
    return std::includes(other.actions_.begin(), other.actions_.end(), actions_.begin(),
                         actions_.end());
}

void ActionSet::insert(ActionId a)
{
    auto it = std::lower_bound(actions_.begin(), actions_.end(), a);
    if (it == actions_.end() || *it != a)
        actions_.insert(it, a);
}

ActionSet ActionSet::united(const ActionSet& other) const
{
    ActionSet out;
    std::set_union(actions_.begin(), actions_.end(), other.actions_.begin(), other.actions_.end(),
                   std::back_inserter(out.actions_));
    return out;
}

ActionSet ActionSet::intersected(const ActionSet& other) const
{
    ActionSet out;
    std::set_intersection(actions_.begin(), actions_.end(), other.actions_.begin(),
                          other.actions_.end(), std::back_inserter(out.actions_));
    return out;
}

std::string format_action_set(const GameArena& g, const ActionSet& x)
{
    std::string out = "{";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i)
            out += ',';
        out += g.name(x.actions()[i]);
    }
    return out + "}";
}

InferenceMechanism InferenceMechanism::class_based(
    const GameArena& g, std::vector<std::pair<std::string, ActionSet>> classes)
{
    std::vector<int> seen(g.num_actions(), 0);
    for (const auto& [name, members] : classes) {
        if (members.empty())
            throw ValidationError("action class '" + name + "' is empty");
        for (ActionId a : members.actions()) {
            if (a.index >= g.num_actions() || g.owner(a) != Player::p1)
                throw ValidationError("action class '" + name + "' contains a non-P1 action");
            if (seen[a.index]++)
                throw ValidationError("action '" + g.name(a) + "' belongs to two classes");
        }
    }
    for (ActionId a : g.actions_of(Player::p1))
        if (!seen[a.index])
            throw ValidationError("action '" + g.name(a) + "' belongs to no class");
    InferenceMechanism m;
    m.kind = Kind::classes;
    m.classes = std::move(classes);
    return m;
}

ActionSet infer(const InferenceMechanism& m, const GameArena& g, const ActionSet& x, ActionId a)
{
    if (a.index >= g.num_actions() || g.owner(a) != Player::p1)
        throw ValidationError("inference on a non-P1 action");
    if (x.contains(a))
        return x;

    ActionSet out;
    switch (m.kind) {
    case InferenceMechanism::Kind::additive:
        out = x;
        out.insert(a);
        break;
    case InferenceMechanism::Kind::classes:
        out = x;
        out.insert(a);
        for (const auto& [name, members] : m.classes)
            if (members.contains(a))
                out = out.united(members);
        break;
    case InferenceMechanism::Kind::table: {
        auto it = m.table.find({x, a});
        if (it == m.table.end())
            throw ValidationError("inference table has no entry for " + format_action_set(g, x) +
                                  " on '" + g.name(a) + "'");
        out = it->second;
        break;
    }
    }
    if (!x.is_subset_of(out) || !out.contains(a))
        throw ValidationError("inference of " + format_action_set(g, x) + " on '" + g.name(a) +
                              "' must keep the known actions and add the observed one");
    return out;
}

// ---------------------------------------------------------------------------
// InferenceGraph

VertexId InferenceGraph::target(VertexId v, ActionId a) const
{
    if (a.index >= slot_.size() || slot_[a.index] < 0)
        throw ValidationError("inference graph edge requested for a non-P1 action");
    return edges_[v.index][static_cast<std::size_t>(slot_[a.index])];
}

std::optional<VertexId> InferenceGraph::find(const ActionSet& x) const
{
    for (std::uint32_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == x)
            return VertexId{i};
    return std::nullopt;
}

InferenceGraph build_inference_graph(const InferenceMechanism& m, const GameArena& g,
                                     const ActionSet& x0)
{
    for (ActionId a : x0.actions())
        if (a.index >= g.num_actions() || g.owner(a) != Player::p1)
            throw ValidationError("initial perception contains a non-P1 action");

    InferenceGraph ig;
    const auto p1 = g.actions_of(Player::p1);
    ig.p1_actions_.assign(p1.begin(), p1.end());
    ig.slot_.assign(g.num_actions(), -1);
    for (std::size_t k = 0; k < p1.size(); ++k)
        ig.slot_[p1[k].index] = static_cast<std::int32_t>(k);

    std::map<ActionSet, VertexId> index;
    std::deque<VertexId> queue;
    auto intern = [&](const ActionSet& x) {
        auto [it, fresh] = index.emplace(x, VertexId{static_cast<std::uint32_t>(ig.vertices_.size())});
        if (fresh) {
            ig.vertices_.push_back(x);
            ig.edges_.emplace_back(p1.size());
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(x0);
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        for (std::size_t k = 0; k < p1.size(); ++k) {
            const ActionSet next = infer(m, g, ig.vertices_[v.index], p1[k]);
            const VertexId w = intern(next);
            ig.edges_[v.index][k] = w;
        }
    }
    return ig;
}

// ---------------------------------------------------------------------------
// Documents

namespace {

ActionSet parse_action_list(const json& arr, const GameArena& g, std::string_view where)
{
    if (!arr.is_array())
        throw ValidationError(std::string(where) + ": expected an array of action names");
    std::vector<ActionId> out;
    for (const json& a : arr) {
        if (!a.is_string())
            throw ValidationError(std::string(where) + ": action names must be strings");
        const ActionId id = g.action_id(a.get<std::string>());
        if (g.owner(id) != Player::p1)
            throw ValidationError(std::string(where) + ": '" + g.name(id) + "' is not a P1 action");
        out.push_back(id);
    }
    return ActionSet(std::move(out));
}

} // namespace

PerceptionSpec load_perception(std::string_view text, const GameArena& g)
{
    const json doc = detail::parse_json(text, "perception document");
    PerceptionSpec spec;
    spec.initial = parse_action_list(detail::require(doc, "initial", "perception document"), g,
                                     "perception 'initial'");
    const json& mech = detail::require(doc, "mechanism", "perception document");
    const std::string kind = detail::require_string(mech, "kind", "mechanism");
    if (kind == "additive") {
        spec.mechanism = InferenceMechanism::additive();
    } else if (kind == "classes") {
        const json& cls = detail::require(mech, "classes", "mechanism");
        if (!cls.is_object())
            throw ValidationError("mechanism 'classes' must map class names to action lists");
        std::vector<std::pair<std::string, ActionSet>> classes;
        for (const auto& [name, members] : cls.items())
            classes.emplace_back(name, parse_action_list(members, g, "class '" + name + "'"));
        spec.mechanism = InferenceMechanism::class_based(g, std::move(classes));
    } else if (kind == "table") {
        spec.mechanism.kind = InferenceMechanism::Kind::table;
        for (const json& e : detail::require_array(mech, "edges", "mechanism")) {
            const ActionSet from = parse_action_list(detail::require(e, "from", "table edge"), g,
                                                     "table edge 'from'");
            const ActionId a = g.action_id(detail::require_string(e, "action", "table edge"));
            const ActionSet to = parse_action_list(detail::require(e, "to", "table edge"), g,
                                                   "table edge 'to'");
            if (!spec.mechanism.table.emplace(std::pair{from, a}, to).second)
                throw ValidationError("inference table lists " + format_action_set(g, from) +
                                      " on '" + g.name(a) + "' twice");
        }
    } else {
        throw ValidationError("unknown inference mechanism kind '" + kind + "'");
    }
    return spec;
}

} // namespace deception
