#include "deception/ctf.hpp"

#include "deception/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace deception::ctf {

using detail::json;

namespace {

constexpr std::array<Cell, 4> kDirs{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};  // N E S W
constexpr std::array<const char*, 4> kDirNames{"N", "E", "S", "W"};

Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
Cell scaled(Cell d, int k) { return {d.x * k, d.y * k}; }

std::string cell_text(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

Cell parse_cell(const json& v, std::string_view where)
{
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        throw ValidationError(std::string(where) + ": a cell is an [x, y] pair of integers");
    return {v[0].get<int>(), v[1].get<int>()};
}

std::vector<Cell> parse_cells(const json& doc, const char* key, bool required)
{
    auto it = doc.find(key);
    if (it == doc.end()) {
        if (required)
            throw ValidationError(std::string("layout: missing key '") + key + "'");
        return {};
    }
    if (!it->is_array())
        throw ValidationError(std::string("layout: '") + key + "' must be an array of cells");
    std::vector<Cell> out;
    for (const json& c : *it)
        out.push_back(parse_cell(c, std::string("layout '") + key + "'"));
    return out;
}

json cells_json(const std::vector<Cell>& cells)
{
    json arr = json::array();
    for (Cell c : cells)
        arr.push_back({c.x, c.y});
    return arr;
}

class Grid {
public:
    explicit Grid(const GridConfig& c) : c_(c)
    {
        walls_.insert(c.walls.begin(), c.walls.end());
        territory_.insert(c.p2_territory.begin(), c.p2_territory.end());
    }

    bool on_grid(Cell p) const { return p.x >= 0 && p.y >= 0 && p.x < c_.width && p.y < c_.height; }
    bool wall(Cell p) const { return walls_.count(p) != 0; }
    int fence_index(Cell p) const
    {
        for (std::size_t i = 0; i < c_.fences.size(); ++i)
            if (c_.fences[i] == p)
                return static_cast<int>(i);
        return -1;
    }
    bool intact_fence(Cell p, const std::array<bool, 2>& cut) const
    {
        const int f = fence_index(p);
        return f >= 0 && !cut[static_cast<std::size_t>(f)];
    }
    // Free for P1: on the grid, no wall, no intact fence.
    bool p1_free(Cell p, const std::array<bool, 2>& cut) const
    {
        return on_grid(p) && !wall(p) && !intact_fence(p, cut);
    }
    bool p2_allowed(Cell p, const std::array<bool, 2>& cut) const
    {
        if (!p1_free(p, cut))
            return false;
        const int f = fence_index(p);
        return territory_.count(p) != 0 || (f >= 0 && cut[static_cast<std::size_t>(f)]);
    }

    std::vector<Cell> cells() const
    {
        std::vector<Cell> out;
        for (int y = 0; y < c_.height; ++y)
            for (int x = 0; x < c_.width; ++x)
                out.push_back({x, y});
        return out;
    }

    const GridConfig& config() const { return c_; }

private:
    const GridConfig& c_;
    std::set<Cell> walls_;
    std::set<Cell> territory_;
};

} // namespace

// ---------------------------------------------------------------------------
// Layout documents

void validate(const GridConfig& c)
{
    if (c.width <= 0 || c.height <= 0)
        throw ValidationError("layout: width and height must be positive");
    if (c.fences.size() > 2)
        throw ValidationError("layout: at most two fences");
    Grid g(c);
    auto check_on = [&](Cell p, const std::string& what) {
        if (!g.on_grid(p))
            throw ValidationError("layout: " + what + " " + cell_text(p) + " is off the grid");
    };
    std::map<Cell, std::string> used;
    auto claim = [&](Cell p, const std::string& what) {
        check_on(p, what);
        auto [it, fresh] = used.emplace(p, what);
        if (!fresh)
            throw ValidationError("layout: cell " + cell_text(p) + " is both " + it->second +
                                  " and " + what);
    };
    for (Cell p : c.walls)
        claim(p, "a wall");
    for (Cell p : c.fences)
        claim(p, "a fence");
    for (std::size_t i = 0; i < 2; ++i) {
        claim(c.flags[i], "FLAG" + std::to_string(i + 1));
        if (std::find(c.p2_territory.begin(), c.p2_territory.end(), c.flags[i]) ==
            c.p2_territory.end())
            throw ValidationError("layout: FLAG" + std::to_string(i + 1) +
                                  " must lie in P2 territory");
    }
    for (Cell p : c.p2_territory)
        check_on(p, "territory cell");
    const std::array<bool, 2> intact{};
    if (!g.p1_free(c.p1_start, intact))
        throw ValidationError("layout: P1 start " + cell_text(c.p1_start) + " is blocked");
    if (!g.p2_allowed(c.p2_start, intact))
        throw ValidationError("layout: P2 start " + cell_text(c.p2_start) +
                              " is not a free P2 territory cell");
}

GridConfig load_layout(std::string_view text)
{
    const json doc = detail::parse_json(text, "layout");
    if (!doc.is_object())
        throw ValidationError("layout must be a JSON object");
    GridConfig c;
    auto integer = [&](const char* key) {
        const json& v = detail::require(doc, key, "layout");
        if (!v.is_number_integer())
            throw ValidationError(std::string("layout: '") + key + "' must be an integer");
        return v.get<int>();
    };
    c.width = integer("width");
    c.height = integer("height");
    c.p2_territory = parse_cells(doc, "p2_territory", true);
    c.walls = parse_cells(doc, "walls", false);
    if (doc.contains("fences"))
        c.fences = parse_cells(doc, "fences", true);
    const auto flags = parse_cells(doc, "flags", true);
    if (flags.size() != 2)
        throw ValidationError("layout: exactly two flags are required");
    c.flags = {flags[0], flags[1]};
    c.p1_start = parse_cell(detail::require(doc, "p1_start", "layout"), "layout 'p1_start'");
    c.p2_start = parse_cell(detail::require(doc, "p2_start", "layout"), "layout 'p2_start'");
    if (auto it = doc.find("initial_inference_vertex"); it != doc.end()) {
        if (!it->is_number_unsigned())
            throw ValidationError("layout: 'initial_inference_vertex' must be a non-negative integer");
        c.initial_inference_vertex = it->get<std::uint32_t>();
    }
    if (auto it = doc.find("initial_states"); it != doc.end()) {
        const std::string v = it->is_string() ? it->get<std::string>() : "";
        if (v == "start")
            c.initial_states = InitialStates::start;
        else if (v == "intact")
            c.initial_states = InitialStates::intact;
        else
            throw ValidationError("layout: 'initial_states' must be \"start\" or \"intact\"");
    }
    if (auto it = doc.find("p1_enters_p2_cell"); it != doc.end()) {
        if (!it->is_boolean())
            throw ValidationError("layout: 'p1_enters_p2_cell' must be a boolean");
        c.p1_enters_p2_cell = it->get<bool>();
    }
    if (auto it = doc.find("p1_territory"); it != doc.end()) {
        // Informational; P1 is not restricted by territory. Checked for overlap only.
        for (Cell p : parse_cells(doc, "p1_territory", true))
            if (std::find(c.p2_territory.begin(), c.p2_territory.end(), p) != c.p2_territory.end())
                throw ValidationError("layout: territories overlap at " + cell_text(p));
    }
    validate(c);
    return c;
}

std::string save_layout(const GridConfig& c)
{
    json doc = {{"width", c.width},
                {"height", c.height},
                {"p2_territory", cells_json(c.p2_territory)},
                {"walls", cells_json(c.walls)},
                {"fences", cells_json(c.fences)},
                {"flags", cells_json({c.flags[0], c.flags[1]})},
                {"p1_start", {c.p1_start.x, c.p1_start.y}},
                {"p2_start", {c.p2_start.x, c.p2_start.y}},
                {"initial_inference_vertex", c.initial_inference_vertex},
                {"initial_states", c.initial_states == InitialStates::start ? "start" : "intact"},
                {"p1_enters_p2_cell", c.p1_enters_p2_cell}};
    return doc.dump(1) + "\n";
}

// ---------------------------------------------------------------------------
// Transition system

std::string state_name(const CtfState& s)
{
    std::string out = cell_text(s.p1) + cell_text(s.p2);
    out += s.cut[0] ? '1' : '0';
    out += s.cut[1] ? '1' : '0';
    out += s.turn == Player::p1 ? "P1" : "P2";
    return out;
}

TransitionSystem build_transition_system(const GridConfig& c)
{
    validate(c);
    const Grid grid(c);
    const std::size_t nfences = c.fences.size();

    std::vector<std::array<bool, 2>> cut_configs;
    for (unsigned mask = 0; mask < (1U << nfences); ++mask)
        cut_configs.push_back({(mask & 1U) != 0, (mask & 2U) != 0});

    TransitionSystem ts;
    std::map<CtfState, StateId> index;
    GameArena::Builder b;
    for (const auto& cut : cut_configs)
        for (Player turn : {Player::p1, Player::p2})
            for (Cell p1 : grid.cells()) {
                if (!grid.p1_free(p1, cut))
                    continue;
                for (Cell p2 : grid.cells()) {
                    if (!grid.p2_allowed(p2, cut))
                        continue;
                    const CtfState s{p1, p2, cut, turn};
                    std::vector<std::string> labels;
                    if (p1 == c.flags[0])
                        labels.push_back("FLAG1");
                    if (p1 == c.flags[1])
                        labels.push_back("FLAG2");
                    if (p1 == p2)
                        labels.push_back("collide");
                    index.emplace(s, b.add_state(state_name(s), turn, false, std::move(labels)));
                    ts.states.push_back(s);
                }
            }

    std::array<ActionId, 4> move1{}, jump{}, move2{};
    for (std::size_t d = 0; d < 4; ++d)
        move1[d] = b.add_action(kDirNames[d], Player::p1);
    const ActionId cut_action = b.add_action("Cut", Player::p1);
    for (std::size_t d = 0; d < 4; ++d)
        jump[d] = b.add_action(std::string("Jump") + kDirNames[d], Player::p1);
    for (std::size_t d = 0; d < 4; ++d)
        move2[d] = b.add_action(std::string("p2_") + kDirNames[d], Player::p2);

    for (std::uint32_t i = 0; i < ts.states.size(); ++i) {
        const CtfState& s = ts.states[i];
        const StateId from{i};
        auto go = [&](ActionId a, CtfState t) {
            t.turn = opponent(s.turn);
            b.add_transition(from, a, index.at(t));
        };
        bool any = false;
        if (s.turn == Player::p1) {
            for (std::size_t d = 0; d < 4; ++d) {
                const Cell next = s.p1 + kDirs[d];
                if (grid.p1_free(next, s.cut) && (c.p1_enters_p2_cell || next != s.p2)) {
                    go(move1[d], {next, s.p2, s.cut, s.turn});
                    any = true;
                }
                const Cell land = s.p1 + scaled(kDirs[d], 2);
                if (grid.on_grid(next) && grid.wall(next) && grid.p1_free(land, s.cut) &&
                    (c.p1_enters_p2_cell || land != s.p2)) {
                    go(jump[d], {land, s.p2, s.cut, s.turn});
                    any = true;
                }
            }
            std::array<bool, 2> after = s.cut;
            for (Cell d : kDirs) {
                const int f = grid.fence_index(s.p1 + d);
                if (f >= 0)
                    after[static_cast<std::size_t>(f)] = true;
            }
            if (after != s.cut) {
                go(cut_action, {s.p1, s.p2, after, s.turn});
                any = true;
            }
        } else {
            for (std::size_t d = 0; d < 4; ++d) {
                const Cell next = s.p2 + kDirs[d];
                if (grid.p2_allowed(next, s.cut)) {
                    go(move2[d], {s.p1, next, s.cut, s.turn});
                    any = true;
                }
            }
        }
        if (!any)
            throw ValidationError("layout: state " + state_name(s) + " has no enabled action");
    }

    ts.arena = std::move(b).build();
    if (c.initial_states == InitialStates::start) {
        ts.initial.push_back(index.at(CtfState{c.p1_start, c.p2_start, {}, Player::p1}));
    } else {
        for (std::uint32_t i = 0; i < ts.states.size(); ++i)
            if (ts.states[i].turn == Player::p1 && !ts.states[i].cut[0] && !ts.states[i].cut[1])
                ts.initial.push_back(StateId{i});
    }
    return ts;
}

// ---------------------------------------------------------------------------
// Inference and objectives

CtfInference build_ctf_inference(const GameArena& ts)
{
    auto ids = [&](std::initializer_list<const char*> names) {
        std::vector<ActionId> out;
        for (const char* n : names)
            out.push_back(ts.action_id(n));
        return ActionSet(std::move(out));
    };
    const ActionSet moves = ids({"N", "E", "S", "W"});
    CtfInference out;
    out.mechanism = InferenceMechanism::class_based(
        ts, {{"move", moves},
             {"jump", ids({"JumpN", "JumpE", "JumpS", "JumpW"})},
             {"cut", ids({"Cut"})}});
    out.graph = std::make_shared<const InferenceGraph>(
        build_inference_graph(out.mechanism, ts, moves));
    return out;
}

std::vector<std::string> ctf_propositions() { return {"FLAG1", "FLAG2", "collide"}; }

scltl::Formula objective(std::string_view name_or_text)
{
    std::string_view text = name_or_text;
    if (name_or_text == "phi1")
        text = "F FLAG1 & F FLAG2";
    else if (name_or_text == "phi2")
        text = "(!FLAG2 & !collide) U FLAG1 & !collide U FLAG2";
    return scltl::parse(text, ctf_propositions());
}

Benchmark build_benchmark(const GridConfig& c, const scltl::Formula& phi)
{
    Benchmark out;
    out.ts = build_transition_system(c);
    out.dfa = scltl::compile(phi);
    auto prod = scltl::product(out.ts.arena, out.dfa, std::span<const StateId>(out.ts.initial));
    out.game_initial = prod.initial;
    out.game = std::make_shared<const GameArena>(std::move(prod.arena));
    out.inference = build_ctf_inference(*out.game);
    if (c.initial_inference_vertex >= out.inference.graph->num_vertices())
        throw ValidationError("layout: initial inference vertex out of range");

    HypergameOptions opts;
    std::vector<ProductState> init;
    for (StateId s : out.game_initial)
        init.push_back({s, VertexId{c.initial_inference_vertex}});
    opts.initial = std::move(init);
    out.hypergame = std::make_shared<const Hypergame>(
        build_hypergame(out.game, out.inference.graph, opts));
    return out;
}

BenchReport run_benchmark(const Benchmark& b)
{
    const Hypergame& h = *b.hypergame;
    BenchReport rep;
    rep.dsw = dsw(h);
    rep.dasw = dasw(h);
    rep.dsw_vod = vod(h, rep.dsw);
    rep.dasw_vod = vod(h, rep.dasw);

    const GameArena& g = *b.game;
    const std::size_t win1 = h.true_solution().win1.members.size();
    rep.rows.push_back({"SW(G)", g.num_states(), g.num_edges(), g.final_states().size(),
                        std::nullopt, win1, g.num_states() - win1, std::nullopt});
    const std::size_t base = h.base_support().size();
    auto row = [&](const char* label, const DeceptiveSolveResult& r, const VodReport& v) {
        return BenchRow{label,
                        h.num_states(),
                        h.arena().num_edges(),
                        h.arena().final_states().size(),
                        r.region.members.size(),
                        v.deceptive_projection,
                        base - v.deceptive_projection,
                        v.vod};
    };
    rep.rows.push_back(row("DSW(H)", rep.dsw, rep.dsw_vod));
    rep.rows.push_back(row("DASW(H)", rep.dasw, rep.dasw_vod));
    return rep;
}

std::string format_rows(const std::vector<BenchRow>& rows)
{
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %7s %7s %6s %7s %7s %5s %7s\n", "", "|V|", "|E|", "|F|",
                  "region", "proj", "Win2", "VoD");
    os << buf;
    for (const BenchRow& r : rows) {
        const std::string region = r.region ? std::to_string(*r.region) : "-";
        char vod[32] = "-";
        if (r.vod)
            std::snprintf(vod, sizeof vod, "%.4f", *r.vod);
        std::snprintf(buf, sizeof buf, "%-8s %7zu %7zu %6zu %7s %7zu %5zu %7s\n", r.label.c_str(),
                      r.states, r.edges, r.finals, region.c_str(), r.projection, r.losing, vod);
        os << buf;
    }
    return os.str();
}

} // namespace deception::ctf
