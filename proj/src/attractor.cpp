#include "deception/attractor.hpp"

#include "deception/error.hpp"

#include <algorithm>

namespace deception {

std::uint32_t Region::max_rank() const
{
    std::uint32_t m = 0;
    members.for_each([&](StateId s) { m = std::max(m, rank[s.index]); });
    return m;
}

StateSet Region::layer_union(std::uint32_t k) const
{
    StateSet out(members.universe());
    members.for_each([&](StateId s) {
        if (rank[s.index] <= k)
            out.insert(s);
    });
    return out;
}

// ---------------------------------------------------------------------------
// FixpointGraph

FixpointGraph::FixpointGraph(std::size_t num_states) : quant_(num_states, Quantifier::never) {}

void FixpointGraph::finalize()
{
    const std::size_t n = quant_.size();
    succ_offset_.assign(n + 1, 0);
    pred_offset_.assign(n + 1, 0);
    for (auto [s, t] : pending_) {
        ++succ_offset_[s.index + 1];
        ++pred_offset_[t.index + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        succ_offset_[i + 1] += succ_offset_[i];
        pred_offset_[i + 1] += pred_offset_[i];
    }
    succ_.resize(pending_.size());
    pred_.resize(pending_.size());
    std::vector<std::uint32_t> sfill(succ_offset_.begin(), succ_offset_.end() - 1);
    std::vector<std::uint32_t> pfill(pred_offset_.begin(), pred_offset_.end() - 1);
    for (auto [s, t] : pending_) {
        succ_[sfill[s.index]++] = t;
        pred_[pfill[t.index]++] = s;
    }
    pending_.clear();
    pending_.shrink_to_fit();
    finalized_ = true;
}

std::span<const StateId> FixpointGraph::successors(StateId s) const
{
    return {succ_.data() + succ_offset_[s.index], succ_offset_[s.index + 1] - succ_offset_[s.index]};
}

std::span<const StateId> FixpointGraph::predecessors(StateId s) const
{
    return {pred_.data() + pred_offset_[s.index], pred_offset_[s.index + 1] - pred_offset_[s.index]};
}

FixpointGraph FixpointGraph::dual() const
{
    FixpointGraph d = *this;
    for (auto& q : d.quant_) {
        if (q == Quantifier::exists)
            q = Quantifier::forall;
        else if (q == Quantifier::forall)
            q = Quantifier::exists;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Engine

Region layered_attractor(const FixpointGraph& g, const StateSet& seed)
{
    return layered_attractor(g, seed, StateSet::full(g.num_states()));
}

Region layered_attractor(const FixpointGraph& g, const StateSet& seed, const StateSet& domain)
{
    const std::size_t n = g.num_states();
    Region r(n);
    std::vector<std::uint32_t> missing(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        const StateId s{i};
        missing[i] = g.quantifier(s) == Quantifier::forall
                         ? static_cast<std::uint32_t>(g.successors(s).size())
                         : 1;
    }

    std::vector<StateId> layer = seed.to_vector();
    for (StateId s : layer) {
        r.members.insert(s);
        r.rank[s.index] = 0;
    }

    std::vector<StateId> next;
    for (std::uint32_t i = 0; i < n; ++i) {
        const StateId s{i};
        if (!r.members.contains(s) && domain.contains(s) &&
            g.quantifier(s) == Quantifier::forall && missing[i] == 0)
            next.push_back(s);
    }

    std::uint32_t k = 0;
    for (;;) {
        for (StateId s : layer) {
            for (StateId p : g.predecessors(s)) {
                if (r.members.contains(p) || !domain.contains(p) ||
                    g.quantifier(p) == Quantifier::never || missing[p.index] == 0)
                    continue;
                if (--missing[p.index] == 0)
                    next.push_back(p);
            }
        }
        if (next.empty())
            break;
        ++k;
        std::sort(next.begin(), next.end());
        for (StateId s : next) {
            r.members.insert(s);
            r.rank[s.index] = k;
        }
        layer.swap(next);
        next.clear();
    }
    r.iterations = k + 1;
    return r;
}

SafeResult greatest_safe_set(const FixpointGraph& g, const StateSet& u, const StateSet& sticky)
{
    const FixpointGraph d = g.dual();
    const StateSet outside = u.complement();
    const Region removed = layered_attractor(d, outside, u - sticky);
    return {u - removed.members, removed.iterations};
}

// ---------------------------------------------------------------------------
// Reachability games

StateSet pre1(const GameArena& g, const StateSet& u)
{
    StateSet out(g.num_states());
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const StateId s{i};
        if (g.owner(s) != Player::p1)
            continue;
        for (const Edge& e : g.enabled(s))
            if (u.contains(e.target)) {
                out.insert(s);
                break;
            }
    }
    return out;
}

StateSet pre2(const GameArena& g, const StateSet& u)
{
    StateSet out(g.num_states());
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const StateId s{i};
        if (g.owner(s) != Player::p2)
            continue;
        const auto edges = g.enabled(s);
        if (std::all_of(edges.begin(), edges.end(),
                        [&](const Edge& e) { return u.contains(e.target); }))
            out.insert(s);
    }
    return out;
}

namespace {

FixpointGraph game_graph(const GameArena& g)
{
    FixpointGraph fg(g.num_states());
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const StateId s{i};
        fg.set_quantifier(s, g.owner(s) == Player::p1 ? Quantifier::exists : Quantifier::forall);
        for (const Edge& e : g.enabled(s))
            fg.add_successor(s, e.target);
    }
    fg.finalize();
    return fg;
}

} // namespace

GameSolution solve(const GameArena& g)
{
    GameSolution out;
    out.win1 = layered_attractor(game_graph(g), g.final_states());
    out.win2 = out.win1.members.complement();
    return out;
}

ActionId sure_action(const GameArena& g, const Region& win1, StateId s)
{
    if (!win1.contains(s))
        throw ValidationError("state '" + g.name(s) + "' is outside the P1 winning region");
    if (g.owner(s) != Player::p1)
        throw ValidationError("state '" + g.name(s) + "' is not a P1 state");
    if (g.is_final(s))
        throw ValidationError("state '" + g.name(s) + "' is final; no move is required");
    const std::uint32_t r = win1.rank[s.index];
    for (const Edge& e : g.enabled(s))
        if (win1.contains(e.target) && win1.rank[e.target.index] < r)
            return e.action;
    throw ValidationError("region ranks are inconsistent at '" + g.name(s) + "'");
}

Strategy sure_strategy(const GameArena& g, const Region& win1)
{
    Strategy pi(Player::p1, StrategyKind::deterministic, g.num_states());
    win1.members.for_each([&](StateId s) {
        if (g.owner(s) == Player::p1 && !g.is_final(s))
            pi.set_action(s, sure_action(g, win1, s));
    });
    return pi;
}

std::vector<ActionId> permissive_actions(const GameArena& g, const StateSet& win2, StateId s)
{
    std::vector<ActionId> out;
    for (const Edge& e : g.enabled(s))
        if (win2.contains(e.target))
            out.push_back(e.action);
    return out;
}

Strategy permissive_strategy(const GameArena& g, const StateSet& win2)
{
    Strategy mu(Player::p2, StrategyKind::randomized_support, g.num_states());
    win2.for_each([&](StateId s) {
        if (g.owner(s) == Player::p2)
            mu.set_support(s, permissive_actions(g, win2, s));
    });
    return mu;
}

} // namespace deception
