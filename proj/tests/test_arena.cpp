#include "support/support.hpp"

#include "deception/error.hpp"

#include <doctest.h>

using namespace testing;

TEST_CASE("loading the running example document")
{
    const GameArena g = load_arena(read_text(data_path("running_game.json")));
    CHECK(g.num_states() == 4);
    CHECK(g.final_states().size() == 1);
    CHECK(g.is_final(g.state_id("s0")));
    CHECK(g.owner(g.state_id("s1")) == Player::p1);
    CHECK(g.owner(g.state_id("s3")) == Player::p1);
    CHECK(g.owner(g.state_id("s2")) == Player::p2);
    CHECK(g.actions_of(Player::p1).size() == 2);
    CHECK(g.actions_of(Player::p2).size() == 2);
    CHECK(g.num_edges() == 8);
    CHECK(g == *running_game());
}

TEST_CASE("a single final state with a self-loop is a valid arena")
{
    const GameArena g = load_arena(R"({
        "states": [{"name": "x", "owner": "P1", "final": true}],
        "actions": [{"name": "a", "owner": "P1"}],
        "transitions": [{"from": "x", "action": "a", "to": "x"}]})");
    CHECK(g.num_states() == 1);
    CHECK(g.final_states().size() == 1);
}

TEST_CASE("malformed game documents are rejected")
{
    SUBCASE("undeclared action")
    {
        CHECK_THROWS_AS(load_arena(R"({
            "states": [{"name": "x", "owner": "P1"}],
            "actions": [{"name": "a1", "owner": "P1"}],
            "transitions": [{"from": "x", "action": "a3", "to": "x"}]})"),
                        ValidationError);
    }
    SUBCASE("dead end")
    {
        CHECK_THROWS_AS(load_arena(R"({
            "states": [{"name": "x", "owner": "P1"}, {"name": "y", "owner": "P2"}],
            "actions": [{"name": "a", "owner": "P1"}],
            "transitions": [{"from": "x", "action": "a", "to": "y"}]})"),
                        ValidationError);
    }
    SUBCASE("action owned by the other player")
    {
        CHECK_THROWS_AS(load_arena(R"({
            "states": [{"name": "x", "owner": "P1"}],
            "actions": [{"name": "b", "owner": "P2"}],
            "transitions": [{"from": "x", "action": "b", "to": "x"}]})"),
                        ValidationError);
    }
    SUBCASE("duplicate state")
    {
        CHECK_THROWS_AS(load_arena(R"({
            "states": [{"name": "x", "owner": "P1"}, {"name": "x", "owner": "P2"}],
            "actions": [], "transitions": []})"),
                        ValidationError);
    }
    SUBCASE("nondeterministic transition")
    {
        CHECK_THROWS_AS(load_arena(R"({
            "states": [{"name": "x", "owner": "P1"}, {"name": "y", "owner": "P1"}],
            "actions": [{"name": "a", "owner": "P1"}],
            "transitions": [{"from": "x", "action": "a", "to": "x"},
                            {"from": "x", "action": "a", "to": "y"},
                            {"from": "y", "action": "a", "to": "y"}]})"),
                        ValidationError);
    }
    SUBCASE("bad owner tag")
    {
        CHECK_THROWS_AS(load_arena(R"({"states": [{"name": "x", "owner": "P3"}],
                                       "actions": [], "transitions": []})"),
                        ValidationError);
    }
    SUBCASE("not json")
    {
        CHECK_THROWS_AS(load_arena("{states"), ValidationError);
    }
}

TEST_CASE("save and load round trip")
{
    const auto g = running_game();
    const std::string text = save_arena(*g);
    const GameArena back = load_arena(text);
    CHECK(save_arena(back) == text);
    CHECK(back.num_edges() == g->num_edges());
}

TEST_CASE("restricting P1 to {a2} gives the misperceived game")
{
    const auto g = running_game();
    const GameArena r = restrict_p1_actions(*g, std::vector{g->action_id("a2")});
    CHECK_FALSE(r.successor(r.state_id("s1"), r.action_id("a1")).has_value());
    CHECK(r.successor(r.state_id("s1"), r.action_id("a2")) == r.state_id("s2"));
    CHECK(r.enabled(r.state_id("s3")).size() == 1);
    CHECK(r.successor(r.state_id("s3"), r.action_id("a2")) == r.state_id("s2"));
    CHECK(r.enabled(r.state_id("s2")).size() == 2);
    CHECK(r.num_edges() == 6);
}

TEST_CASE("restriction edge cases")
{
    const auto g = running_game();
    const auto a1 = g->actions_of(Player::p1);
    CHECK(restrict_p1_actions(*g, a1) == *g);

    const GameArena empty = restrict_p1_actions(*g, std::span<const ActionId>{});
    CHECK(empty.is_dead_end(empty.state_id("s1")));
    CHECK(empty.is_dead_end(empty.state_id("s3")));
    CHECK_FALSE(empty.is_dead_end(empty.state_id("s2")));

    CHECK_THROWS_AS(restrict_p1_actions(*g, std::vector{g->action_id("b1")}), ValidationError);
}

TEST_CASE("occurrence check")
{
    const auto g = running_game();
    StateSet f(4);
    f.insert(g->state_id("s0"));
    const StateId s0 = g->state_id("s0"), s1 = g->state_id("s1"), s2 = g->state_id("s2"),
                  s3 = g->state_id("s3");
    CHECK(occurrence_check(std::vector{s2, s1, s0}, f));
    CHECK_FALSE(occurrence_check(std::vector{s2, s3, s2}, f));
    CHECK(occurrence_check(std::vector{s3}, g->all_states()));
    CHECK_FALSE(occurrence_check(std::vector<StateId>{}, f));
}

TEST_CASE("strategy documents")
{
    const auto g = running_game();
    Strategy det(Player::p1, StrategyKind::deterministic, 4);
    det.set_action(g->state_id("s1"), g->action_id("a1"));
    det.validate(*g);
    const std::string text = save_strategy(*g, det);
    CHECK(text.find("\"s1\": \"a1\"") != std::string::npos);
    CHECK(load_strategy(text, *g, Player::p1) == det);

    Strategy rnd(Player::p2, StrategyKind::randomized_support, 4);
    const std::vector<ActionId> both{g->action_id("b1"), g->action_id("b2")};
    rnd.set_support(g->state_id("s2"), both);
    CHECK(rnd.at(g->state_id("s2"))[0].probability == doctest::Approx(0.5));
    const Strategy back = load_strategy(save_strategy(*g, rnd), *g, Player::p2);
    CHECK(back.support(g->state_id("s2")) == both);

    SUBCASE("moves at the opponent's state are invalid")
    {
        Strategy bad(Player::p1, StrategyKind::deterministic, 4);
        bad.set_action(g->state_id("s2"), g->action_id("b1"));
        CHECK_THROWS_AS(bad.validate(*g), ValidationError);
    }
    SUBCASE("unknown names are invalid")
    {
        CHECK_THROWS_AS(load_strategy(R"({"s9": "a1"})", *g, Player::p1), ValidationError);
        CHECK_THROWS_AS(load_strategy(R"({"s1": "zz"})", *g, Player::p1), ValidationError);
    }
    SUBCASE("disabled action is invalid")
    {
        CHECK_THROWS_AS(load_strategy(R"({"s3": "b1"})", *g, Player::p1), ValidationError);
    }
}

TEST_CASE("state sets")
{
    StateSet a(10), b(10);
    a.insert(StateId{1});
    a.insert(StateId{4});
    b.insert(StateId{4});
    CHECK(b.is_subset_of(a));
    CHECK(b.is_proper_subset_of(a));
    CHECK_FALSE(a.is_proper_subset_of(a));
    CHECK((a - b).size() == 1);
    CHECK((a | b) == a);
    CHECK((a & b) == b);
    CHECK(a.complement().size() == 8);
    CHECK(StateSet::full(10).size() == 10);
    CHECK(a.to_vector() == std::vector{StateId{1}, StateId{4}});
}
