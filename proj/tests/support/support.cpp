#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef DECEPT_DATA_DIR
#error "DECEPT_DATA_DIR must point at the data directory"
#endif

namespace testing {

std::string data_path(const std::string& name) { return std::string(DECEPT_DATA_DIR) + "/" + name; }

std::string read_text(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::shared_ptr<const GameArena> running_game()
{
    GameArena::Builder b;
    const StateId s0 = b.add_state("s0", Player::p2, true);
    const StateId s1 = b.add_state("s1", Player::p1);
    const StateId s2 = b.add_state("s2", Player::p2);
    const StateId s3 = b.add_state("s3", Player::p1);
    const ActionId a1 = b.add_action("a1", Player::p1);
    const ActionId a2 = b.add_action("a2", Player::p1);
    const ActionId b1 = b.add_action("b1", Player::p2);
    const ActionId b2 = b.add_action("b2", Player::p2);
    b.add_transition(s0, b1, s0);
    b.add_transition(s0, b2, s0);
    b.add_transition(s1, a1, s0);
    b.add_transition(s1, a2, s2);
    b.add_transition(s2, b1, s1);
    b.add_transition(s2, b2, s3);
    b.add_transition(s3, a1, s2);
    b.add_transition(s3, a2, s2);
    return std::make_shared<const GameArena>(std::move(b).build());
}

Hypergame running_hypergame(bool reachable)
{
    auto g = running_game();
    const ActionSet x0({g->action_id("a2")});
    auto ig = std::make_shared<const InferenceGraph>(
        build_inference_graph(InferenceMechanism::additive(), *g, x0));
    HypergameOptions opts;
    if (reachable)
        opts.initial = std::vector<ProductState>{{g->state_id("s1"), ig->initial()},
                                                 {g->state_id("s2"), ig->initial()},
                                                 {g->state_id("s3"), ig->initial()}};
    return build_hypergame(g, ig, opts);
}

GameArena random_game(std::mt19937_64& rng, const RandomGameParams& p)
{
    auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
        return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
    };
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution final_coin(p.final_probability);

    const std::uint32_t n = uniform(2, p.max_states);
    const std::uint32_t k1 = uniform(1, p.max_p1_actions);
    const std::uint32_t k2 = uniform(1, p.max_p2_actions);

    GameArena::Builder b;
    std::vector<std::pair<StateId, Player>> states;
    for (std::uint32_t i = 0; i < n; ++i) {
        const Player owner = coin(rng) ? Player::p1 : Player::p2;
        states.push_back({b.add_state("s" + std::to_string(i), owner, final_coin(rng)), owner});
    }
    std::vector<ActionId> a1, a2;
    for (std::uint32_t i = 0; i < k1; ++i)
        a1.push_back(b.add_action("a" + std::to_string(i + 1), Player::p1));
    for (std::uint32_t i = 0; i < k2; ++i)
        a2.push_back(b.add_action("b" + std::to_string(i + 1), Player::p2));

    for (const auto& [s, owner] : states) {
        const auto& acts = owner == Player::p1 ? a1 : a2;
        bool any = false;
        for (ActionId a : acts)
            if (coin(rng)) {
                b.add_transition(s, a, StateId{uniform(0, n - 1)});
                any = true;
            }
        if (!any)
            b.add_transition(s, acts[uniform(0, static_cast<std::uint32_t>(acts.size()) - 1)],
                             StateId{uniform(0, n - 1)});
    }
    return std::move(b).build();
}

ActionSet random_subset(std::mt19937_64& rng, std::span<const ActionId> actions)
{
    std::bernoulli_distribution coin(0.5);
    std::vector<ActionId> out;
    for (ActionId a : actions)
        if (coin(rng))
            out.push_back(a);
    if (out.empty())
        out.push_back(actions[std::uniform_int_distribution<std::size_t>(0, actions.size() - 1)(rng)]);
    return ActionSet(std::move(out));
}

RandomHypergame random_hypergame(std::mt19937_64& rng, const RandomGameParams& p,
                                 const HypergameOptions& opts)
{
    RandomHypergame out;
    out.game = std::make_shared<const GameArena>(random_game(rng, p));
    out.x0 = random_subset(rng, out.game->actions_of(Player::p1));
    out.igraph = std::make_shared<const InferenceGraph>(
        build_inference_graph(InferenceMechanism::additive(), *out.game, out.x0));
    out.h = std::make_unique<Hypergame>(build_hypergame(out.game, out.igraph, opts));
    return out;
}

NaiveSolution naive_solve(const GameArena& g, const ActionSet& x)
{
    const std::size_t n = g.num_states();
    NaiveSolution out{std::vector<bool>(n, false), std::vector<std::uint32_t>(n, 0)};
    for (std::uint32_t i = 0; i < n; ++i)
        out.win1[i] = g.is_final(StateId{i});
    for (std::uint32_t round = 1;; ++round) {
        std::vector<bool> next = out.win1;
        for (std::uint32_t i = 0; i < n; ++i) {
            const StateId s{i};
            if (out.win1[i])
                continue;
            bool in = false;
            if (g.owner(s) == Player::p1) {
                for (const Edge& e : g.enabled(s))
                    if (x.contains(e.action) && out.win1[e.target.index])
                        in = true;
            } else {
                in = true;
                for (const Edge& e : g.enabled(s))
                    if (!out.win1[e.target.index])
                        in = false;
            }
            if (in) {
                next[i] = true;
                out.rank[i] = round;
            }
        }
        if (next == out.win1)
            return out;
        out.win1 = std::move(next);
    }
}

NaiveSolution naive_solve(const GameArena& g)
{
    const auto a1 = g.actions_of(Player::p1);
    return naive_solve(g, ActionSet(std::vector<ActionId>(a1.begin(), a1.end())));
}

std::vector<ActionId> naive_permissive(const GameArena& g, const ActionSet& x, StateId s)
{
    const NaiveSolution sol = naive_solve(g, x);
    std::vector<ActionId> out;
    for (const Edge& e : g.enabled(s))
        if (sol.win1[s.index] || !sol.win1[e.target.index])
            out.push_back(e.action);
    std::sort(out.begin(), out.end());
    return out;
}

NaiveHypergame naive_hypergame(const GameArena& g, const InferenceGraph& ig)
{
    NaiveHypergame nh;
    const std::size_t nv = ig.num_vertices();
    std::vector<NaiveSolution> perceived;
    for (std::uint32_t i = 0; i < nv; ++i)
        perceived.push_back(naive_solve(g, ig.perception(VertexId{i})));
    for (std::uint32_t s = 0; s < g.num_states(); ++s)
        for (std::uint32_t i = 0; i < nv; ++i) {
            const StateId st{s};
            nh.states.push_back({st, VertexId{i}});
            nh.owner.push_back(g.owner(st));
            nh.final.push_back(g.is_final(st));
            std::vector<std::pair<ActionId, std::uint32_t>> moves;
            std::vector<ActionId> perm;
            for (const Edge& e : g.enabled(st)) {
                const std::uint32_t j =
                    g.owner(st) == Player::p1 ? ig.target(VertexId{i}, e.action).index : i;
                moves.push_back({e.action, static_cast<std::uint32_t>(e.target.index * nv + j)});
                if (g.owner(st) == Player::p2 &&
                    (perceived[i].win1[s] || !perceived[i].win1[e.target.index]))
                    perm.push_back(e.action);
            }
            std::sort(perm.begin(), perm.end());
            nh.moves.push_back(std::move(moves));
            nh.perm.push_back(std::move(perm));
        }
    return nh;
}

namespace {

std::uint32_t move_target(const NaiveHypergame& nh, std::uint32_t v, ActionId a)
{
    for (const auto& [b, t] : nh.moves[v])
        if (b == a)
            return t;
    throw std::logic_error("permissive action is not enabled");
}

} // namespace

std::vector<bool> naive_dsw(const NaiveHypergame& nh, const GameArena& g)
{
    const NaiveSolution truth = naive_solve(g);
    std::vector<bool> z(nh.states.size());
    for (std::size_t v = 0; v < z.size(); ++v)
        z[v] = truth.win1[nh.states[v].first.index];
    for (;;) {
        std::vector<bool> next = z;
        for (std::uint32_t v = 0; v < z.size(); ++v) {
            if (z[v])
                continue;
            if (nh.owner[v] == Player::p1) {
                for (const auto& [a, t] : nh.moves[v])
                    if (z[t])
                        next[v] = true;
            } else {
                bool all = true;
                for (ActionId b : nh.perm[v])
                    all = all && z[move_target(nh, v, b)];
                next[v] = all;
            }
        }
        if (next == z)
            return z;
        z = std::move(next);
    }
}

std::vector<bool> naive_asw(const NaiveHypergame& nh)
{
    const std::size_t n = nh.states.size();
    std::vector<bool> y(n, true);
    for (;;) {
        std::vector<bool> x(n, false);
        for (std::uint32_t v = 0; v < n; ++v)
            x[v] = nh.final[v] || (nh.owner[v] == Player::p2 && nh.perm[v].empty());
        for (;;) {
            std::vector<bool> next = x;
            for (std::uint32_t v = 0; v < n; ++v) {
                if (x[v])
                    continue;
                if (nh.owner[v] == Player::p1) {
                    for (const auto& [a, t] : nh.moves[v])
                        if (x[t])
                            next[v] = true;
                } else {
                    bool stay = true, progress = false;
                    for (ActionId b : nh.perm[v]) {
                        const std::uint32_t t = move_target(nh, v, b);
                        stay = stay && y[t];
                        progress = progress || x[t];
                    }
                    next[v] = stay && progress;
                }
            }
            if (next == x)
                break;
            x = std::move(next);
        }
        if (x == y)
            return y;
        y = std::move(x);
    }
}

StateSet to_library_set(const Hypergame& h, const NaiveHypergame& nh, const std::vector<bool>& mask)
{
    const std::size_t nv = h.igraph().num_vertices();
    StateSet out(h.num_states());
    for (std::uint32_t v = 0; v < h.num_states(); ++v) {
        const ProductState p = h.project(StateId{v});
        const std::size_t k = p.state.index * nv + p.vertex.index;
        if (k >= nh.states.size())
            throw std::logic_error("naive hypergame does not cover the product");
        if (mask[k])
            out.insert(StateId{v});
    }
    return out;
}

std::vector<std::string> names(const GameArena& g, const StateSet& s)
{
    std::vector<std::string> out;
    s.for_each([&](StateId v) { out.push_back(g.name(v)); });
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace testing
