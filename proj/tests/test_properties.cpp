#include "support/support.hpp"

#include "deception/sim.hpp"
#include "deception/solvers.hpp"

#include <doctest.h>

using namespace testing;

TEST_CASE("sure deception projects onto the true winning region")
{
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100; ++i) {
        RandomHypergame rh = random_hypergame(rng);
        const Hypergame& h = *rh.h;
        const DeceptiveSolveResult r = dsw(h);
        const StateSet truth = h.true_solution().win1.members & h.base_support();
        CHECK(h.project_set(r.region.members) == truth);
        CHECK(vod(h, r).vod == 0.0);

        const NaiveHypergame nh = naive_hypergame(*rh.game, *rh.igraph);
        CHECK(r.region.members == to_library_set(h, nh, naive_dsw(nh, *rh.game)));
    }
}

TEST_CASE("winning regions grow with the perceived action set")
{
    std::mt19937_64 rng(103);
    for (int i = 0; i < 200; ++i) {
        const GameArena g = random_game(rng);
        const ActionSet y = random_subset(rng, g.actions_of(Player::p1));
        const ActionSet x = random_subset(rng, y.actions());
        REQUIRE(x.is_subset_of(y));
        const GameArena gx = restrict_p1_actions(g, x.actions());
        const GameArena gy = restrict_p1_actions(g, y.actions());
        const GameSolution sx = solve(gx);
        const GameSolution sy = solve(gy);
        CHECK(sx.win1.members.is_subset_of(sy.win1.members));
        sy.win2.for_each([&](StateId s) {
            if (g.owner(s) != Player::p2)
                return;
            const auto my = permissive_actions(gy, sy.win2, s);
            const auto mx = permissive_actions(gx, sx.win2, s);
            for (ActionId b : my)
                CHECK(std::binary_search(mx.begin(), mx.end(), b));
        });
    }
}

TEST_CASE("almost-sure deception equals the almost-sure reachability oracle")
{
    std::mt19937_64 rng(107);
    RandomGameParams params;
    params.max_states = 60;
    int checked = 0;
    while (checked < 200) {
        RandomHypergame rh = random_hypergame(rng, params);
        const Hypergame& h = *rh.h;
        if (h.num_states() > 200)
            continue;
        ++checked;
        const DeceptiveSolveResult r = dasw(h);
        CHECK(r.region.members == sim::asw_oracle(h));
        const NaiveHypergame nh = naive_hypergame(*rh.game, *rh.igraph);
        CHECK(r.region.members == to_library_set(h, nh, naive_asw(nh)));
    }
}

TEST_CASE("reachable and full products agree on shared states")
{
    std::mt19937_64 rng(109);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t seed = rng();
        std::mt19937_64 r1(seed), r2(seed);
        RandomHypergame full = random_hypergame(r1);
        HypergameOptions opts;
        opts.initial = std::vector<ProductState>{{StateId{0}, VertexId{0}}};
        RandomHypergame part = random_hypergame(r2, {}, opts);
        const Hypergame& hf = *full.h;
        const Hypergame& hp = *part.h;
        CHECK(hp.num_states() <= hf.num_states());

        const DeceptiveSolveResult df = dasw(hf), dp = dasw(hp);
        const DeceptiveSolveResult sf = dsw(hf), sp = dsw(hp);
        for (std::uint32_t v = 0; v < hp.num_states(); ++v) {
            const StateId w = *hf.find(hp.project(StateId{v}));
            CHECK(dp.region.contains(StateId{v}) == df.region.contains(w));
            CHECK(sp.region.contains(StateId{v}) == sf.region.contains(w));
        }
    }
}

TEST_CASE("moves outside P2's perceived region do not affect the solvers")
{
    std::mt19937_64 rng(113);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t seed = rng();
        std::mt19937_64 r1(seed), r2(seed);
        RandomHypergame a = random_hypergame(r1);
        HypergameOptions opts;
        opts.outside_perm = OutsidePerm::smallest_enabled;
        RandomHypergame b = random_hypergame(r2, {}, opts);
        CHECK(dsw(*a.h).region.members == dsw(*b.h).region.members);
        CHECK(dasw(*a.h).region.members == dasw(*b.h).region.members);
    }
}

TEST_CASE("deceptive regions only add states P2 truly wins")
{
    std::mt19937_64 rng(127);
    for (int i = 0; i < 100; ++i) {
        RandomHypergame rh = random_hypergame(rng);
        const Hypergame& h = *rh.h;
        const DeceptiveSolveResult r = dasw(h);
        CHECK(h.lifted_true_win1().is_subset_of(r.region.members));
        const VodReport v = vod(h, r);
        CHECK(v.vod >= 0.0);
        CHECK(v.vod <= 1.0);
    }
}
