#include "deception/sim.hpp"

#include "deception/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace deception::sim {

using detail::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 episode_engine(std::uint64_t seed, std::uint64_t episode)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ episode));
}

ActionId sample(std::span<const WeightedAction> dist, std::mt19937_64& rng)
{
    if (dist.size() == 1)
        return dist.front().action;
    std::vector<double> w;
    w.reserve(dist.size());
    for (const auto& wa : dist)
        w.push_back(wa.probability);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    return dist[pick(rng)].action;
}

ActionId sample_uniform(std::span<const ActionId> actions, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
    return actions[pick(rng)];
}

struct Episode {
    bool reached = false;
    std::uint64_t steps = 0;
    Trace trace;
};

Episode run_episode(const Hypergame& h, const Strategy& p1, StateId start, const RolloutConfig& cfg,
                    std::uint64_t horizon, std::uint64_t index)
{
    const GameArena& g = h.arena();
    std::mt19937_64 rng = episode_engine(cfg.seed, index);
    Episode ep;
    StateId v = start;
    if (cfg.keep_traces)
        ep.trace.states.push_back(v);
    while (!g.is_final(v)) {
        if (ep.steps >= horizon)
            return ep;
        ActionId a;
        if (g.owner(v) == Player::p1) {
            if (!p1.defined_at(v))
                throw ValidationError("P1 strategy has no move at reached state '" + g.name(v) + "'");
            a = sample(p1.at(v), rng);
        } else if (cfg.p2_policy) {
            if (!cfg.p2_policy->defined_at(v)) {
                if (g.is_dead_end(v))
                    break;
                throw ValidationError("P2 policy has no move at reached state '" + g.name(v) + "'");
            }
            a = sample(cfg.p2_policy->at(v), rng);
        } else {
            const auto m = h.perm(v);
            if (m.empty())
                break;  // P2 is stuck: counts as a P1 win
            a = sample_uniform(m, rng);
        }
        v = *g.successor(v, a);
        ++ep.steps;
        if (cfg.keep_traces) {
            ep.trace.actions.push_back(a);
            ep.trace.states.push_back(v);
        }
    }
    ep.reached = true;
    ep.trace.reached = true;
    return ep;
}

} // namespace

RolloutStats rollout(const Hypergame& h, const Strategy& p1, StateId start, const RolloutConfig& cfg)
{
    if (cfg.episodes == 0)
        throw ValidationError("rollout needs at least one episode");
    if (start.index >= h.num_states())
        throw ValidationError("rollout start state out of range");
    const std::uint64_t horizon = cfg.horizon ? cfg.horizon : 10 * h.num_states();

    RolloutStats stats;
    stats.episodes = cfg.episodes;
    stats.seed = cfg.seed;
    stats.horizon = horizon;

    const unsigned threads = std::max(1U, cfg.threads);
    auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<Episode> out;
        out.reserve(hi - lo);
        for (std::uint64_t i = lo; i < hi; ++i)
            out.push_back(run_episode(h, p1, start, cfg, horizon, i));
        return out;
    };
    std::vector<std::future<std::vector<Episode>>> jobs;
    const std::uint64_t per = (cfg.episodes + threads - 1) / threads;
    for (std::uint64_t lo = 0; lo < cfg.episodes; lo += per)
        jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, chunk,
                                  lo, std::min(cfg.episodes, lo + per)));
    for (auto& job : jobs)
        for (Episode& ep : job.get()) {
            if (ep.reached) {
                ++stats.reached;
                stats.success_steps += ep.steps;
            }
            if (cfg.keep_traces)
                stats.traces.push_back(std::move(ep.trace));
        }
    stats.mean_steps = stats.reached ? static_cast<double>(stats.success_steps) /
                                           static_cast<double>(stats.reached)
                                     : 0.0;
    return stats;
}

std::string save_stats(const RolloutStats& s)
{
    json doc = {{"episodes", s.episodes}, {"reached", s.reached}, {"mean_steps", s.mean_steps},
                {"seed", s.seed},         {"horizon", s.horizon}, {"rng", rng_name}};
    return doc.dump(1) + "\n";
}

Strategy complete_uniform(const GameArena& g, const Strategy& p1)
{
    Strategy out(Player::p1, StrategyKind::randomized_support, g.num_states());
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const StateId s{i};
        if (g.owner(s) != Player::p1)
            continue;
        if (p1.defined_at(s)) {
            out.set_support(s, p1.support(s));
        } else {
            std::vector<ActionId> all;
            for (const Edge& e : g.enabled(s))
                all.push_back(e.action);
            out.set_support(s, all);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Almost-sure reachability on the decision process. Deliberately written
// against plain adjacency lists, independent of the solver fixed points.

StateSet asw_oracle(const GameArena& g, const std::vector<std::vector<ActionId>>& perm)
{
    const std::size_t n = g.num_states();
    if (n > oracle_state_limit)
        throw SizeGuardError("oracle refuses " + std::to_string(n) + " states (limit " +
                             std::to_string(oracle_state_limit) + ")");
    if (perm.size() != n)
        throw ValidationError("permissive map does not match the arena");

    // Successor lists of the decision process.
    std::vector<std::vector<std::uint32_t>> succ(n), pred(n);
    std::vector<bool> target(n, false), random_node(n, false);
    for (std::uint32_t s = 0; s < n; ++s) {
        const StateId v{s};
        random_node[s] = g.owner(v) == Player::p2;
        if (random_node[s]) {
            for (ActionId b : perm[s])
                succ[s].push_back(g.successor(v, b)->index);
            target[s] = g.is_final(v) || succ[s].empty();
        } else {
            for (const Edge& e : g.enabled(v))
                succ[s].push_back(e.target.index);
            target[s] = g.is_final(v);
        }
        for (std::uint32_t t : succ[s])
            pred[t].push_back(s);
    }

    std::vector<bool> alive(n, true);
    for (;;) {
        // States of `alive` with a path to the target through `alive`.
        std::vector<bool> reach(n, false);
        std::deque<std::uint32_t> queue;
        for (std::uint32_t s = 0; s < n; ++s)
            if (alive[s] && target[s]) {
                reach[s] = true;
                queue.push_back(s);
            }
        while (!queue.empty()) {
            const std::uint32_t t = queue.front();
            queue.pop_front();
            for (std::uint32_t s : pred[t])
                if (alive[s] && !reach[s]) {
                    reach[s] = true;
                    queue.push_back(s);
                }
        }

        // Drop what cannot reach, then whatever is forced (random nodes) or
        // left without a choice (controlled nodes) out of the survivors.
        bool changed = false;
        for (std::uint32_t s = 0; s < n; ++s)
            if (alive[s] && !reach[s]) {
                alive[s] = false;
                changed = true;
            }
        bool pruned = true;
        while (pruned) {
            pruned = false;
            for (std::uint32_t s = 0; s < n; ++s) {
                if (!alive[s] || target[s])
                    continue;
                const auto& out = succ[s];
                const bool ok =
                    random_node[s]
                        ? std::all_of(out.begin(), out.end(), [&](std::uint32_t t) { return alive[t]; })
                        : std::any_of(out.begin(), out.end(), [&](std::uint32_t t) { return alive[t]; });
                if (!ok) {
                    alive[s] = false;
                    pruned = changed = true;
                }
            }
        }
        if (!changed)
            break;
    }

    StateSet out(n);
    for (std::uint32_t s = 0; s < n; ++s)
        if (alive[s])
            out.insert(StateId{s});
    return out;
}

StateSet asw_oracle(const Hypergame& h)
{
    if (h.num_states() > oracle_state_limit)
        throw SizeGuardError("oracle refuses " + std::to_string(h.num_states()) + " states (limit " +
                             std::to_string(oracle_state_limit) + ")");
    std::vector<std::vector<ActionId>> perm(h.num_states());
    for (std::uint32_t i = 0; i < h.num_states(); ++i) {
        const auto m = h.perm(StateId{i});
        perm[i].assign(m.begin(), m.end());
    }
    return asw_oracle(h.arena(), perm);
}

// ---------------------------------------------------------------------------
// Interactive play

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Transcript interactive_play(const Hypergame& h, const Strategy& p1, StateId start, std::istream& in,
                            std::ostream& out, const PlayOptions& options)
{
    const GameArena& g = h.arena();
    const GameArena& base = h.base();
    std::mt19937_64 rng = episode_engine(options.seed, 0);
    Transcript t;
    StateId v = start;
    t.states.push_back(v);

    auto describe = [&](StateId s) {
        const ProductState p = h.project(s);
        if (options.reveal_all)
            return g.name(s);
        return base.name(p.state);
    };

    for (;;) {
        if (g.is_final(v)) {
            out << "state " << describe(v) << ": P1 reached a final state and wins.\n";
            t.outcome = PlayOutcome::p1_won;
            return t;
        }
        if (t.actions.size() >= options.max_steps) {
            out << "step limit reached.\n";
            t.outcome = PlayOutcome::step_limit;
            return t;
        }
        ActionId a;
        if (g.owner(v) == Player::p1) {
            if (!p1.defined_at(v)) {
                out << "state " << describe(v) << ": P1 has no prescribed move; session ends.\n";
                t.outcome = PlayOutcome::no_move;
                return t;
            }
            a = sample(p1.at(v), rng);
            out << "state " << describe(v) << ": P1 plays " << g.name(a) << "\n";
        } else {
            const ProductState p = h.project(v);
            const auto enabled = g.enabled(v);
            if (enabled.empty()) {
                out << "state " << describe(v) << ": P2 has no move; P1 wins.\n";
                t.outcome = PlayOutcome::p1_won;
                return t;
            }
            out << "state " << describe(v) << "\n";
            out << "  P1 actions you know of: "
                << format_action_set(base, h.igraph().perception(p.vertex)) << "\n";
            if (options.reveal_all) {
                std::vector<ActionId> perm(h.perm(v).begin(), h.perm(v).end());
                out << "  permissive actions: " << format_action_set(g, ActionSet(perm)) << "\n";
            }
            std::string choices;
            for (const Edge& e : enabled)
                choices += " " + g.name(e.action);
            bool chosen = false;
            while (!chosen) {
                out << "  your move [" << trim(choices) << "] or q: " << std::flush;
                std::string line;
                if (!std::getline(in, line)) {
                    out << "\ninput closed.\n";
                    t.outcome = PlayOutcome::input_closed;
                    return t;
                }
                line = trim(line);
                if (line == "q") {
                    t.outcome = PlayOutcome::quit;
                    return t;
                }
                if (auto act = g.find_action(line); act && g.successor(v, *act)) {
                    a = *act;
                    chosen = true;
                } else {
                    out << "  '" << line << "' is not available here.\n";
                }
            }
        }
        v = *g.successor(v, a);
        t.actions.push_back(a);
        t.states.push_back(v);
    }
}

std::string save_transcript(const Hypergame& h, const Transcript& t)
{
    const GameArena& g = h.arena();
    json steps = json::array();
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        steps.push_back({{"state", g.name(t.states[i])}});
        if (i < t.actions.size())
            steps.push_back({{"player", to_string(g.owner(t.states[i]))},
                             {"action", g.name(t.actions[i])}});
    }
    static constexpr const char* outcomes[] = {"p1_won", "quit", "input_closed", "step_limit",
                                               "no_move"};
    json doc = {{"play", std::move(steps)}, {"outcome", outcomes[static_cast<int>(t.outcome)]}};
    return doc.dump(1) + "\n";
}

} // namespace deception::sim
