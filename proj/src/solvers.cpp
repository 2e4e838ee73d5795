#include "deception/solvers.hpp"

#include "deception/error.hpp"
#include "json_util.hpp"

#include <algorithm>

namespace deception {

using detail::json;

DeceptionProblem make_problem(const Hypergame& h)
{
    DeceptionProblem p;
    p.arena = &h.arena();
    p.perm.resize(h.num_states());
    for (std::uint32_t i = 0; i < h.num_states(); ++i) {
        const auto m = h.perm(StateId{i});
        p.perm[i].assign(m.begin(), m.end());
    }
    p.z0 = h.lifted_true_win1();

    // Inside Z0 the true game's sure strategy wins regardless of perception.
    const GameArena& base = h.base();
    const Region& win1 = h.true_solution().win1;
    p.z0_strategy = Strategy(Player::p1, StrategyKind::deterministic, h.num_states());
    p.z0.for_each([&](StateId v) {
        const StateId s = h.project(v).state;
        if (base.owner(s) == Player::p1 && !base.is_final(s))
            p.z0_strategy.set_action(v, sure_action(base, win1, s));
    });
    return p;
}

namespace {

enum class Shape { exists_forall, forall_forall, exists_exists };

// P1 states range over enabled actions, P2 states over M(v).
FixpointGraph deception_graph(const DeceptionProblem& p, Shape shape)
{
    const GameArena& g = *p.arena;
    FixpointGraph fg(g.num_states());
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const StateId s{i};
        if (g.owner(s) == Player::p1) {
            fg.set_quantifier(s, shape == Shape::forall_forall ? Quantifier::forall
                                                               : Quantifier::exists);
            for (const Edge& e : g.enabled(s))
                fg.add_successor(s, e.target);
        } else {
            fg.set_quantifier(s, shape == Shape::exists_exists ? Quantifier::exists
                                                               : Quantifier::forall);
            for (ActionId b : p.perm[i])
                fg.add_successor(s, *g.successor(s, b));
        }
    }
    fg.finalize();
    return fg;
}

void check_problem(const DeceptionProblem& p)
{
    if (!p.arena)
        throw ValidationError("deception problem has no arena");
    const GameArena& g = *p.arena;
    if (p.perm.size() != g.num_states() || p.z0.universe() != g.num_states())
        throw ValidationError("deception problem sizes do not match the arena");
    for (std::uint32_t i = 0; i < g.num_states(); ++i)
        for (ActionId b : p.perm[i])
            if (!g.successor(StateId{i}, b))
                throw ValidationError("permissive action '" + g.name(b) + "' is not enabled at '" +
                                      g.name(StateId{i}) + "'");
}

void copy_z0_moves(const DeceptionProblem& p, Strategy& pi)
{
    p.z0.for_each([&](StateId v) {
        if (p.z0_strategy.defined_at(v))
            pi.set_support(v, p.z0_strategy.support(v));
    });
}

} // namespace

DeceptiveSolveResult dsw(const DeceptionProblem& p)
{
    check_problem(p);
    const GameArena& g = *p.arena;
    DeceptiveSolveResult out;
    out.kind = SolveKind::dsw;
    out.region = layered_attractor(deception_graph(p, Shape::exists_forall), p.z0);
    for (std::uint32_t k = 0; k < out.region.iterations; ++k)
        out.iterates.push_back(out.region.layer_union(k));

    out.strategy = Strategy(Player::p1, StrategyKind::deterministic, g.num_states());
    copy_z0_moves(p, out.strategy);
    out.region.members.for_each([&](StateId v) {
        const std::uint32_t r = out.region.rank[v.index];
        if (r == 0 || g.owner(v) != Player::p1)
            return;
        for (const Edge& e : g.enabled(v))
            if (out.region.contains(e.target) && out.region.rank[e.target.index] < r) {
                out.strategy.set_action(v, e.action);
                return;
            }
    });
    return out;
}

DeceptiveSolveResult dasw(const DeceptionProblem& p, DaswVariant variant)
{
    check_problem(p);
    const GameArena& g = *p.arena;
    const std::size_t n = g.num_states();
    const FixpointGraph stay_p1 = deception_graph(p, Shape::exists_forall);
    const FixpointGraph stay_all = deception_graph(p, Shape::forall_forall);
    const FixpointGraph reach = deception_graph(p, Shape::exists_exists);
    const StateSet none(n);

    DeceptiveSolveResult out;
    out.kind = SolveKind::dasw;
    out.region = Region(n);
    p.z0.for_each([&](StateId v) {
        out.region.members.insert(v);
        out.region.rank[v.index] = 0;
    });

    StateSet z = p.z0;
    out.iterates.push_back(z);
    for (std::uint32_t k = 0;; ++k) {
        const SafeResult trapped = greatest_safe_set(stay_all, z.complement(), none);
        out.trapped.push_back(trapped.survivors);
        out.trapped_iterations.push_back(trapped.iterations);

        StateSet y = trapped.survivors.complement();
        if (variant == DaswVariant::literal) {
            y = greatest_safe_set(stay_p1, y, z).survivors;
        } else {
            for (;;) {
                const StateSet safe = greatest_safe_set(stay_p1, y, z).survivors;
                const StateSet live = layered_attractor(reach, z, safe).members;
                if (live == y)
                    break;
                y = live;
            }
        }

        out.iterates.push_back(y);
        if (y == z)
            break;
        (y - z).for_each([&](StateId v) {
            out.region.members.insert(v);
            out.region.rank[v.index] = k + 1;
        });
        z = std::move(y);
    }
    out.region.iterations = static_cast<std::uint32_t>(out.iterates.size() - 1);

    out.strategy = Strategy(Player::p1, StrategyKind::randomized_support, n);
    copy_z0_moves(p, out.strategy);
    out.region.members.for_each([&](StateId v) {
        const std::uint32_t r = out.region.rank[v.index];
        if (r == 0 || g.owner(v) != Player::p1)
            return;
        std::vector<ActionId> lower, level;
        for (const Edge& e : g.enabled(v)) {
            if (!out.region.contains(e.target))
                continue;
            const std::uint32_t rt = out.region.rank[e.target.index];
            if (rt < r)
                lower.push_back(e.action);
            else if (rt == r)
                level.push_back(e.action);
        }
        out.strategy.set_support(v, lower.empty() ? level : lower);
    });
    return out;
}

DeceptiveSolveResult dsw(const Hypergame& h)
{
    return dsw(make_problem(h));
}

DeceptiveSolveResult dasw(const Hypergame& h, DaswVariant variant)
{
    return dasw(make_problem(h), variant);
}

double vod_ratio(std::size_t projection, std::size_t win1, std::size_t win2)
{
    if (win2 == 0)
        return 0.0;
    return (static_cast<double>(projection) - static_cast<double>(win1)) /
           static_cast<double>(win2);
}

VodReport vod(const Hypergame& h, const DeceptiveSolveResult& r)
{
    const StateSet present = h.base_support();
    const StateSet& win1 = h.true_solution().win1.members;
    VodReport out;
    out.win1_true = (present & win1).size();
    out.win2_true = (present - win1).size();
    out.deceptive_projection = h.project_set(r.region.members).size();
    out.vod = vod_ratio(out.deceptive_projection, out.win1_true, out.win2_true);
    return out;
}

std::string save_region(const GameArena& g, const Region& r)
{
    std::vector<StateId> members = r.members.to_vector();
    std::sort(members.begin(), members.end(),
              [&](StateId a, StateId b) { return g.name(a) < g.name(b); });
    json doc = json::array();
    for (StateId s : members)
        doc.push_back({{"state", g.name(s)}, {"rank", r.rank[s.index]}});
    return doc.dump(1) + "\n";
}

Region load_region(std::string_view text, const GameArena& g)
{
    const json doc = detail::parse_json(text, "region document");
    if (!doc.is_array())
        throw ValidationError("region document must be an array");
    Region r(g.num_states());
    std::uint32_t top = 0;
    for (const json& e : doc) {
        const StateId s = g.state_id(detail::require_string(e, "state", "region entry"));
        const json& rank = detail::require(e, "rank", "region entry");
        if (!rank.is_number_unsigned())
            throw ValidationError("region entry rank must be a non-negative integer");
        if (r.members.contains(s))
            throw ValidationError("region lists '" + g.name(s) + "' twice");
        r.members.insert(s);
        r.rank[s.index] = rank.get<std::uint32_t>();
        top = std::max(top, r.rank[s.index]);
    }
    r.iterations = top + 1;
    return r;
}

std::string save_vod(const VodReport& v)
{
    json doc = {{"win1_true", v.win1_true},
                {"win2_true", v.win2_true},
                {"deceptive_projection", v.deceptive_projection},
                {"vod", v.vod}};
    return doc.dump(1) + "\n";
}

} // namespace deception
