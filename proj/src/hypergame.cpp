#include "deception/hypergame.hpp"

#include "deception/error.hpp"

#include <algorithm>
#include <deque>
#include <future>

namespace deception {

std::optional<StateId> Hypergame::find(ProductState p) const
{
    const std::size_t nv = igraph_->num_vertices();
    if (p.state.index >= base_->num_states() || p.vertex.index >= nv)
        return std::nullopt;
    const std::uint32_t slot = index_[p.state.index * nv + p.vertex.index];
    if (slot == 0)
        return std::nullopt;
    return StateId{slot - 1};
}

StateSet Hypergame::lifted_true_win1() const
{
    StateSet out(num_states());
    for (std::uint32_t i = 0; i < num_states(); ++i)
        if (true_solution_.win1.contains(projection_[i].state))
            out.insert(StateId{i});
    return out;
}

StateSet Hypergame::base_support() const
{
    return project_set(StateSet::full(num_states()));
}

StateSet Hypergame::project_set(const StateSet& vs) const
{
    StateSet out(base_->num_states());
    vs.for_each([&](StateId v) { out.insert(projection_[v.index].state); });
    return out;
}

namespace {

std::vector<GameSolution> solve_perceptual_games(const GameArena& g, const InferenceGraph& ig,
                                                 bool parallel)
{
    const std::size_t n = ig.num_vertices();
    auto one = [&](std::size_t i) {
        const auto x = ig.perception(VertexId{static_cast<std::uint32_t>(i)}).actions();
        return solve(restrict_p1_actions(g, x));
    };
    std::vector<GameSolution> out(n);
    if (parallel && n > 1) {
        std::vector<std::future<GameSolution>> jobs;
        jobs.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            jobs.push_back(std::async(std::launch::async, one, i));
        for (std::size_t i = 0; i < n; ++i)
            out[i] = jobs[i].get();
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = one(i);
    }
    return out;
}

} // namespace

Hypergame build_hypergame(std::shared_ptr<const GameArena> g,
                          std::shared_ptr<const InferenceGraph> ig,
                          const HypergameOptions& options)
{
    if (!g || !ig)
        throw ValidationError("hypergame needs a game and an inference graph");
    const GameArena& base = *g;
    const std::size_t nv = ig->num_vertices();
    {
        const auto ours = ig->p1_actions();
        const auto theirs = base.actions_of(Player::p1);
        if (!std::equal(ours.begin(), ours.end(), theirs.begin(), theirs.end()))
            throw ValidationError("inference graph was built over a different P1 action set");
    }

    Hypergame h;
    h.base_ = g;
    h.igraph_ = ig;
    h.true_solution_ = solve(base);
    h.perceived_ = solve_perceptual_games(base, *ig, options.parallel);
    h.index_.assign(base.num_states() * nv, 0);

    // Enumerate product states.
    auto succ_vertex = [&](StateId s, VertexId gv, ActionId a) {
        return base.owner(s) == Player::p1 ? ig->target(gv, a) : gv;
    };
    auto add = [&](ProductState p) {
        std::uint32_t& slot = h.index_[p.state.index * nv + p.vertex.index];
        if (slot != 0)
            return false;
        h.projection_.push_back(p);
        slot = static_cast<std::uint32_t>(h.projection_.size());
        return true;
    };

    if (options.initial) {
        std::deque<ProductState> queue;
        for (const ProductState& p : *options.initial) {
            if (p.state.index >= base.num_states())
                throw ValidationError("initial product state references an unknown game state");
            if (p.vertex.index >= nv)
                throw ValidationError("initial product state references an unknown inference vertex");
            if (add(p))
                queue.push_back(p);
        }
        while (!queue.empty()) {
            const ProductState p = queue.front();
            queue.pop_front();
            for (const Edge& e : base.enabled(p.state)) {
                const ProductState q{e.target, succ_vertex(p.state, p.vertex, e.action)};
                if (add(q))
                    queue.push_back(q);
            }
        }
    } else {
        for (std::uint32_t s = 0; s < base.num_states(); ++s)
            for (std::uint32_t v = 0; v < nv; ++v)
                add({StateId{s}, VertexId{v}});
    }

    // Build the product arena with the base action ids preserved.
    GameArena::Builder b;
    std::vector<std::string> vertex_names(nv);
    for (std::uint32_t v = 0; v < nv; ++v)
        vertex_names[v] = format_action_set(base, ig->perception(VertexId{v}));
    for (const ProductState& p : h.projection_) {
        const auto& info = base.state(p.state);
        b.add_state(info.name + "@" + vertex_names[p.vertex.index], info.owner, info.final,
                    info.labels);
    }
    for (std::uint32_t a = 0; a < base.num_actions(); ++a)
        b.add_action(base.action(ActionId{a}).name, base.action(ActionId{a}).owner);

    h.perm_.assign(h.projection_.size(), {});
    for (std::uint32_t i = 0; i < h.projection_.size(); ++i) {
        const ProductState p = h.projection_[i];
        for (const Edge& e : base.enabled(p.state)) {
            const ProductState q{e.target, succ_vertex(p.state, p.vertex, e.action)};
            b.add_transition(StateId{i}, e.action, *h.find(q));
        }
        if (base.owner(p.state) != Player::p2)
            continue;
        const StateSet& win2 = h.perceived_[p.vertex.index].win2;
        auto& perm = h.perm_[i];
        if (win2.contains(p.state)) {
            perm = permissive_actions(base, win2, p.state);
        } else if (!base.is_dead_end(p.state)) {
            if (options.outside_perm == OutsidePerm::all_enabled)
                for (const Edge& e : base.enabled(p.state))
                    perm.push_back(e.action);
            else
                perm.push_back(base.enabled(p.state).front().action);
        }
    }
    h.arena_ = std::move(b).build();
    return h;
}

std::vector<StateId> project_run(const Hypergame& h, std::span<const StateId> run)
{
    std::vector<StateId> out;
    out.reserve(run.size());
    for (StateId v : run)
        out.push_back(h.project(v).state);
    return out;
}

Strategy perm_strategy(const Hypergame& h)
{
    Strategy mu(Player::p2, StrategyKind::randomized_support, h.num_states());
    for (std::uint32_t i = 0; i < h.num_states(); ++i)
        if (!h.perm(StateId{i}).empty())
            mu.set_support(StateId{i}, h.perm(StateId{i}));
    return mu;
}

} // namespace deception
