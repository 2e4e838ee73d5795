#include "support/support.hpp"

#include "deception/error.hpp"
#include "deception/sim.hpp"
#include "deception/solvers.hpp"

#include <doctest.h>

#include <json.hpp>
#include <sstream>

using namespace testing;

TEST_CASE("rollouts of the deceptive strategy always succeed")
{
    const Hypergame h = running_hypergame();
    const DeceptiveSolveResult r = dasw(h);
    sim::RolloutConfig cfg;
    cfg.episodes = 2000;
    cfg.seed = 5;
    const sim::RolloutStats s = sim::rollout(h, r.strategy, h.arena().state_id("s2@{a2}"), cfg);
    CHECK(s.episodes == 2000);
    CHECK(s.reached == 2000);
    CHECK(s.horizon == 10 * h.num_states());
    CHECK(s.mean_steps >= 2.0);
}

TEST_CASE("P2 wins from a state he knows he is winning")
{
    const Hypergame h = running_hypergame();
    const Strategy pi = sim::complete_uniform(h.arena(), dasw(h).strategy);
    sim::RolloutConfig cfg;
    cfg.episodes = 500;
    const sim::RolloutStats s = sim::rollout(h, pi, h.arena().state_id("s2@{a1,a2}"), cfg);
    CHECK(s.reached == 0);
}

TEST_CASE("starting in a final state succeeds immediately")
{
    const Hypergame h = running_hypergame();
    sim::RolloutConfig cfg;
    cfg.episodes = 10;
    const sim::RolloutStats s =
        sim::rollout(h, dasw(h).strategy, h.arena().state_id("s0@{a1,a2}"), cfg);
    CHECK(s.reached == 10);
    CHECK(s.mean_steps == 0.0);
}

TEST_CASE("rollouts are reproducible and independent of the thread count")
{
    const Hypergame h = running_hypergame();
    const DeceptiveSolveResult r = dasw(h);
    sim::RolloutConfig cfg;
    cfg.episodes = 3000;
    cfg.seed = 99;
    const StateId start = h.arena().state_id("s3@{a2}");
    const sim::RolloutStats a = sim::rollout(h, r.strategy, start, cfg);
    cfg.threads = 4;
    const sim::RolloutStats b = sim::rollout(h, r.strategy, start, cfg);
    CHECK(a == b);
    CHECK(sim::save_stats(a) == sim::save_stats(b));
    cfg.seed = 100;
    const sim::RolloutStats c = sim::rollout(h, r.strategy, start, cfg);
    CHECK(c.success_steps != a.success_steps);
}

TEST_CASE("success does not drop with a longer horizon")
{
    const Hypergame h = running_hypergame();
    const DeceptiveSolveResult r = dasw(h);
    const StateId start = h.arena().state_id("s2@{a2}");
    std::uint64_t last = 0;
    for (std::uint64_t horizon : {1, 2, 3, 5, 8, 13, 40}) {
        sim::RolloutConfig cfg;
        cfg.episodes = 400;
        cfg.seed = 3;
        cfg.horizon = horizon;
        const std::uint64_t reached = sim::rollout(h, r.strategy, start, cfg).reached;
        CHECK(reached >= last);
        last = reached;
    }
}

TEST_CASE("rollouts need a move wherever the play goes")
{
    const Hypergame h = running_hypergame();
    const Strategy empty(Player::p1, StrategyKind::deterministic, h.num_states());
    sim::RolloutConfig cfg;
    cfg.episodes = 5;
    CHECK_THROWS_AS(sim::rollout(h, empty, h.arena().state_id("s1@{a2}"), cfg), ValidationError);
}

TEST_CASE("a fixed P2 policy replaces uniform play")
{
    const Hypergame h = running_hypergame();
    const GameArena& a = h.arena();
    Strategy always_b2(Player::p2, StrategyKind::deterministic, h.num_states());
    always_b2.set_action(a.state_id("s2@{a2}"), a.action_id("b2"));
    always_b2.set_action(a.state_id("s2@{a1,a2}"), a.action_id("b2"));
    sim::RolloutConfig cfg;
    cfg.episodes = 50;
    cfg.p2_policy = always_b2;
    const sim::RolloutStats s = sim::rollout(h, dasw(h).strategy, a.state_id("s2@{a2}"), cfg);
    CHECK(s.reached == 0);
}

TEST_CASE("stats document")
{
    const Hypergame h = running_hypergame();
    sim::RolloutConfig cfg;
    cfg.episodes = 10;
    cfg.seed = 1;
    const auto doc = nlohmann::json::parse(
        sim::save_stats(sim::rollout(h, dasw(h).strategy, h.arena().state_id("s2@{a2}"), cfg)));
    CHECK(doc.at("episodes") == 10);
    CHECK(doc.at("seed") == 1);
    CHECK(doc.at("rng") == sim::rng_name);
    CHECK(doc.contains("mean_steps"));
    CHECK(doc.contains("horizon"));
}

TEST_CASE("oracle on the running example")
{
    const Hypergame h = running_hypergame();
    CHECK(names(h.arena(), sim::asw_oracle(h)) ==
          std::vector<std::string>{"s0@{a1,a2}", "s1@{a1,a2}", "s1@{a2}", "s2@{a2}", "s3@{a2}"});
}

TEST_CASE("with a deterministic P2 the oracle is the attractor")
{
    std::mt19937_64 rng(151);
    for (int i = 0; i < 100; ++i) {
        const GameArena g = random_game(rng);
        std::vector<std::vector<ActionId>> perm(g.num_states());
        GameArena::Builder b;
        for (std::uint32_t s = 0; s < g.num_states(); ++s) {
            const auto& info = g.state(StateId{s});
            b.add_state(info.name, info.owner, info.final);
        }
        for (std::uint32_t x = 0; x < g.num_actions(); ++x)
            b.add_action(g.action(ActionId{x}).name, g.action(ActionId{x}).owner);
        for (std::uint32_t s = 0; s < g.num_states(); ++s) {
            const StateId v{s};
            const auto moves = g.enabled(v);
            if (g.owner(v) == Player::p2) {
                perm[s] = {moves[0].action};
                b.add_transition(v, moves[0].action, moves[0].target);
            } else {
                for (const Edge& e : moves)
                    b.add_transition(v, e.action, e.target);
            }
        }
        const GameArena pinned = std::move(b).build();
        CHECK(sim::asw_oracle(g, perm) == solve(pinned).win1.members);
    }
}

TEST_CASE("oracle size guard")
{
    GameArena::Builder b;
    const ActionId a = b.add_action("a", Player::p1);
    std::vector<StateId> ids;
    for (std::size_t i = 0; i <= sim::oracle_state_limit; ++i)
        ids.push_back(b.add_state("s" + std::to_string(i), Player::p1));
    for (std::size_t i = 0; i < ids.size(); ++i)
        b.add_transition(ids[i], a, ids[(i + 1) % ids.size()]);
    const GameArena g = std::move(b).build();
    CHECK_THROWS_AS(sim::asw_oracle(g, std::vector<std::vector<ActionId>>(g.num_states())),
                    SizeGuardError);
}

TEST_CASE("interactive play: P2 lets P1 through")
{
    const Hypergame h = running_hypergame();
    std::istringstream in("b1\n");
    std::ostringstream out;
    const sim::Transcript t =
        sim::interactive_play(h, dasw(h).strategy, h.arena().state_id("s2@{a2}"), in, out);
    CHECK(t.outcome == sim::PlayOutcome::p1_won);
    REQUIRE(t.actions.size() == 2);
    CHECK(h.arena().name(t.actions[1]) == "a1");
    CHECK(h.arena().name(t.states.back()) == "s0@{a1,a2}");
    // Only the base state and P2's perception are shown by default.
    CHECK(out.str().find("@") == std::string::npos);
    CHECK(out.str().find("{a2}") != std::string::npos);
}

TEST_CASE("interactive play: P1 keeps a1 hidden at s3")
{
    const Hypergame h = running_hypergame();
    std::istringstream in("b2\nb2\nb2\nq\n");
    std::ostringstream out;
    const sim::Transcript t =
        sim::interactive_play(h, dasw(h).strategy, h.arena().state_id("s2@{a2}"), in, out);
    CHECK(t.outcome == sim::PlayOutcome::quit);
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
        CHECK(h.arena().name(t.actions[i]) != "a1");
        const std::string name = h.arena().name(t.states[i + 1]);
        CHECK((name == "s2@{a2}" || name == "s3@{a2}"));
    }
    const auto doc = nlohmann::json::parse(sim::save_transcript(h, t));
    CHECK(doc.at("outcome") == "quit");
    CHECK(doc.at("play").size() == t.states.size() + t.actions.size());
}

TEST_CASE("interactive play: edge cases")
{
    const Hypergame h = running_hypergame();
    const DeceptiveSolveResult r = dasw(h);
    {
        std::istringstream in;
        std::ostringstream out;
        const auto t = sim::interactive_play(h, r.strategy, h.arena().state_id("s0@{a1,a2}"), in, out);
        CHECK(t.outcome == sim::PlayOutcome::p1_won);
        CHECK(t.actions.empty());
    }
    {
        std::istringstream in("zz\n");
        std::ostringstream out;
        const auto t = sim::interactive_play(h, r.strategy, h.arena().state_id("s2@{a2}"), in, out);
        CHECK(t.outcome == sim::PlayOutcome::input_closed);
        CHECK(out.str().find("not available") != std::string::npos);
    }
    {
        std::istringstream in("b1\n");
        std::ostringstream out;
        sim::PlayOptions opts;
        opts.reveal_all = true;
        sim::interactive_play(h, r.strategy, h.arena().state_id("s2@{a2}"), in, out, opts);
        CHECK(out.str().find("s2@{a2}") != std::string::npos);
        CHECK(out.str().find("permissive") != std::string::npos);
    }
}
