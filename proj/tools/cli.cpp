#include "cli.hpp"

#include "deception/ctf.hpp"
#include "deception/error.hpp"
#include "deception/hypergame.hpp"
#include "deception/perception.hpp"
#include "deception/scltl.hpp"
#include "deception/sim.hpp"
#include "deception/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace deception::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ValidationError("cannot read input file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string fixed4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Tracks what a command read and wrote; emitted as manifest.json.
class Manifest {
public:
    Manifest(std::string command, std::string out_dir)
        : command_(std::move(command)), out_dir_(std::move(out_dir)),
          start_(std::chrono::steady_clock::now())
    {}

    std::string input(const std::string& role, const std::string& path)
    {
        std::string bytes = read_file(path);
        inputs_.push_back({{"role", role}, {"path", path}, {"sha256", sha256_hex(bytes)}});
        return bytes;
    }

    void option(const std::string& key, json value) { options_[key] = std::move(value); }

    void write(const std::string& name, const std::string& content)
    {
        fs::create_directories(out_dir_);
        const fs::path p = fs::path(out_dir_) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f || !(f << content))
            throw Error("cannot write '" + p.string() + "'");
        outputs_.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
    }

    void finish()
    {
        const auto elapsed = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        json doc = {{"command", command_},
                    {"version", version},
                    {"inputs", inputs_},
                    {"options", options_},
                    {"outputs", outputs_},
                    {"timing", {{"elapsed_ms", elapsed}}}};
        fs::create_directories(out_dir_);
        std::ofstream f(fs::path(out_dir_) / "manifest.json", std::ios::binary);
        f << doc.dump(1) << "\n";
    }

private:
    std::string command_;
    std::string out_dir_;
    std::chrono::steady_clock::time_point start_;
    json inputs_ = json::array();
    json options_ = json::object();
    json outputs_ = json::array();
};

struct Common {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool summary = false;
    bool reachable = false;
    bool full_product = false;
};

struct HypergameInputs {
    std::string game;
    std::string perception;
    std::vector<std::string> init;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "Random seed (default 0)");
    sub->add_option("--out-dir", c.out_dir, "Directory for result files")->capture_default_str();
    sub->add_flag("--summary", c.summary, "Print a table-shaped summary");
    auto* r = sub->add_flag("--reachable", c.reachable, "Restrict the product to reachable states");
    auto* f = sub->add_flag("--full-product", c.full_product, "Build the full product");
    r->excludes(f);
}

void add_hypergame_inputs(CLI::App* sub, HypergameInputs& in)
{
    sub->add_option("--game", in.game, "Game document")->required();
    sub->add_option("--perception", in.perception, "Perception document")->required();
    sub->add_option("--init", in.init, "Initial game state (repeatable)");
}

struct LoadedHypergame {
    std::shared_ptr<const GameArena> game;
    std::shared_ptr<const InferenceGraph> igraph;
    Hypergame h;
};

LoadedHypergame load_hypergame(Manifest& m, const HypergameInputs& in, const Common& c)
{
    auto game = std::make_shared<const GameArena>(load_arena(m.input("game", in.game)));
    const PerceptionSpec spec = load_perception(m.input("perception", in.perception), *game);
    auto ig = std::make_shared<const InferenceGraph>(
        build_inference_graph(spec.mechanism, *game, spec.initial));

    const bool reachable = c.reachable || (!c.full_product && !in.init.empty());
    if (reachable && in.init.empty())
        throw ValidationError("--reachable needs at least one --init state");
    HypergameOptions opts;
    if (reachable) {
        std::vector<ProductState> init;
        for (const auto& name : in.init)
            init.push_back({game->state_id(name), ig->initial()});
        opts.initial = std::move(init);
    }
    m.option("product", reachable ? "reachable" : "full");
    m.option("init", in.init);
    Hypergame h = build_hypergame(game, ig, opts);
    return {game, ig, std::move(h)};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_solve_game(const std::string& game_path, const Common& c, std::ostream& out)
{
    Manifest m("solve-game", c.out_dir);
    const GameArena g = load_arena(m.input("game", game_path));
    const GameSolution sol = solve(g);
    m.write("region.json", save_region(g, sol.win1));
    m.write("strategy.json", save_strategy(g, sure_strategy(g, sol.win1)));
    m.write("permissive.json", save_strategy(g, permissive_strategy(g, sol.win2)));
    m.finish();
    out << "solve-game: |Win1| = " << sol.win1.members.size() << ", |Win2| = " << sol.win2.size()
        << " of " << g.num_states() << " states\n";
    return 0;
}

int cmd_solve_deceptive(SolveKind kind, const HypergameInputs& in, const std::string& variant,
                        const Common& c, std::ostream& out)
{
    const char* name = kind == SolveKind::dsw ? "solve-dsw" : "solve-dasw";
    Manifest m(name, c.out_dir);
    LoadedHypergame lh = load_hypergame(m, in, c);
    const Hypergame& h = lh.h;

    DeceptiveSolveResult r;
    if (kind == SolveKind::dsw) {
        r = dsw(h);
    } else {
        if (variant != "nested" && variant != "literal")
            throw ValidationError("--variant must be 'nested' or 'literal'");
        m.option("variant", variant);
        r = dasw(h, variant == "literal" ? DaswVariant::literal : DaswVariant::nested);
    }
    const VodReport v = vod(h, r);
    m.write("hypergame.json", save_arena(h.arena()));
    m.write("perm.json", save_strategy(h.arena(), perm_strategy(h)));
    m.write("region.json", save_region(h.arena(), r.region));
    m.write("strategy.json", save_strategy(h.arena(), r.strategy));
    m.write("vod.json", save_vod(v));
    m.finish();
    out << name + 6 << ": " << r.region.members.size() << " of " << h.num_states()
        << " product states winning, VoD = " << fixed4(v.vod) << " (" << v.deceptive_projection
        << " - " << v.win1_true << ") / " << v.win2_true << "\n";
    return 0;
}

int cmd_compile(const std::string& formula, const std::vector<std::string>& ap, const Common& c,
                std::ostream& out)
{
    Manifest m("compile-scltl", c.out_dir);
    m.option("formula", formula);
    m.option("propositions", ap);
    const scltl::Formula f = scltl::parse(formula, ap);
    const scltl::Dfa d = scltl::compile(f);
    m.write("dfa.json", scltl::save_dfa(d));
    m.write("dfa.dot", scltl::dfa_to_dot(d));
    m.finish();
    std::size_t accepting = 0;
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        accepting += d.accepting(q);
    out << "compile-scltl: " << d.num_states() << " states, " << accepting << " accepting"
        << (d.sink() ? ", sink " + std::to_string(*d.sink()) : std::string()) << "\n";
    return 0;
}

ctf::Benchmark load_benchmark(Manifest& m, const std::string& layout, const std::string& formula)
{
    const ctf::GridConfig cfg = ctf::load_layout(m.input("layout", layout));
    std::string text = formula;
    if (formula != "phi1" && formula != "phi2" && fs::exists(formula))
        text = m.input("formula", formula);
    m.option("formula", formula);
    return ctf::build_benchmark(cfg, ctf::objective(text));
}

int cmd_gen_ctf(const std::string& layout, const std::string& formula, const Common& c,
                std::ostream& out)
{
    Manifest m("gen-ctf", c.out_dir);
    const ctf::Benchmark b = load_benchmark(m, layout, formula);
    m.write("ts.json", save_arena(b.ts.arena));
    m.write("dfa.json", scltl::save_dfa(b.dfa));
    m.write("game.json", save_arena(*b.game));
    m.write("hypergame.json", save_arena(b.hypergame->arena()));
    m.write("perm.json", save_strategy(b.hypergame->arena(), perm_strategy(*b.hypergame)));
    m.finish();
    out << "gen-ctf: ts " << b.ts.arena.num_states() << " states, game "
        << b.game->num_states() << " states, hypergame " << b.hypergame->num_states()
        << " states\n";
    if (c.summary)
        out << ctf::format_rows(ctf::run_benchmark(b).rows);
    return 0;
}

int cmd_bench(const std::string& layout, const std::string& formula, const Common& c,
              std::ostream& out)
{
    Manifest m("bench-ctf", c.out_dir);
    const ctf::Benchmark b = load_benchmark(m, layout, formula);
    const ctf::BenchReport rep = ctf::run_benchmark(b);
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row = {{"label", r.label},     {"states", r.states},         {"edges", r.edges},
                    {"finals", r.finals},   {"projection", r.projection}, {"losing", r.losing}};
        row["region"] = r.region ? json(*r.region) : json(nullptr);
        row["vod"] = r.vod ? json(*r.vod) : json(nullptr);
        rows.push_back(std::move(row));
    }
    m.write("bench.json", json({{"rows", rows}}).dump(1) + "\n");
    m.finish();
    out << ctf::format_rows(rep.rows);
    return 0;
}

Strategy strategy_for(Manifest& m, const Hypergame& h, const std::string& solver,
                      const std::string& strategy_path)
{
    if (!strategy_path.empty())
        return load_strategy(m.input("strategy", strategy_path), h.arena(), Player::p1);
    m.option("solver", solver);
    if (solver == "dsw")
        return dsw(h).strategy;
    if (solver == "dasw")
        return dasw(h).strategy;
    throw ValidationError("--solver must be 'dsw' or 'dasw'");
}

struct SimArgs {
    HypergameInputs in;
    std::string start;
    std::string solver = "dasw";
    std::string strategy;
    std::uint64_t episodes = 1000;
    std::uint64_t horizon = 0;
    unsigned threads = 1;
    bool fill_uniform = false;
    bool traces = false;
};

int cmd_simulate(const SimArgs& a, const Common& c, std::ostream& out)
{
    Manifest m("simulate", c.out_dir);
    LoadedHypergame lh = load_hypergame(m, a.in, c);
    const Hypergame& h = lh.h;
    Strategy pi = strategy_for(m, h, a.solver, a.strategy);
    if (a.fill_uniform)
        pi = sim::complete_uniform(h.arena(), pi);
    sim::RolloutConfig cfg;
    cfg.episodes = a.episodes;
    cfg.horizon = a.horizon;
    cfg.seed = c.seed;
    cfg.threads = a.threads;
    cfg.keep_traces = a.traces;
    m.option("start", a.start);
    m.option("episodes", a.episodes);
    m.option("horizon", a.horizon);
    m.option("seed", c.seed);
    m.option("fill_uniform", a.fill_uniform);
    const sim::RolloutStats s = sim::rollout(h, pi, h.arena().state_id(a.start), cfg);
    m.write("stats.json", sim::save_stats(s));
    if (a.traces) {
        json traces = json::array();
        for (const auto& t : s.traces) {
            json states = json::array(), actions = json::array();
            for (StateId v : t.states)
                states.push_back(h.arena().name(v));
            for (ActionId x : t.actions)
                actions.push_back(h.arena().name(x));
            traces.push_back({{"states", states}, {"actions", actions}, {"reached", t.reached}});
        }
        m.write("traces.json", traces.dump(1) + "\n");
    }
    m.finish();
    out << "simulate: reached " << s.reached << " / " << s.episodes << " episodes, mean steps "
        << fixed4(s.mean_steps) << "\n";
    return 0;
}

struct PlayArgs {
    HypergameInputs in;
    std::string start;
    std::string solver = "dasw";
    std::string strategy;
    bool reveal_all = false;
};

int cmd_play(const PlayArgs& a, const Common& c, std::istream& in, std::ostream& out)
{
    Manifest m("play", c.out_dir);
    LoadedHypergame lh = load_hypergame(m, a.in, c);
    const Hypergame& h = lh.h;
    const Strategy pi = strategy_for(m, h, a.solver, a.strategy);
    sim::PlayOptions opts;
    opts.reveal_all = a.reveal_all;
    opts.seed = c.seed;
    const sim::Transcript t =
        sim::interactive_play(h, pi, h.arena().state_id(a.start), in, out, opts);
    m.option("start", a.start);
    m.write("transcript.json", sim::save_transcript(h, t));
    m.finish();
    return 0;
}

struct ExportArgs {
    HypergameInputs in;
    std::string dsw_path;
    std::string dasw_path;
};

int cmd_export(const ExportArgs& a, const Common& c, std::ostream& out)
{
    if (a.dsw_path.empty() && a.dasw_path.empty())
        throw ValidationError("export-dot needs a solved region (--dsw and/or --dasw)");
    Manifest m("export-dot", c.out_dir);
    LoadedHypergame lh = load_hypergame(m, a.in, c);
    const Hypergame& h = lh.h;
    const GameArena& g = h.arena();

    StateSet blue(g.num_states()), green(g.num_states());
    std::optional<Region> dsw_region, dasw_region;
    if (!a.dsw_path.empty())
        dsw_region = load_region(m.input("dsw", a.dsw_path), g);
    if (!a.dasw_path.empty())
        dasw_region = load_region(m.input("dasw", a.dasw_path), g);
    // Without a sure-winning region, the non-deceptive core stands in for it.
    blue = dsw_region ? dsw_region->members : h.lifted_true_win1();
    if (dasw_region)
        green = dasw_region->members - blue;

    std::ostringstream dot;
    dot << "digraph hypergame {\n  node [style=filled, fontcolor=white];\n";
    for (std::uint32_t i = 0; i < g.num_states(); ++i) {
        const StateId v{i};
        const char* color = blue.contains(v) ? "blue" : green.contains(v) ? "green" : "red";
        dot << "  n" << i << " [label=\"" << g.name(v) << "\", shape="
            << (g.owner(v) == Player::p1 ? "circle" : "box") << ", fillcolor=" << color
            << (g.is_final(v) ? ", peripheries=2" : "") << "];\n";
    }
    for (std::uint32_t i = 0; i < g.num_states(); ++i)
        for (const Edge& e : g.enabled(StateId{i}))
            dot << "  n" << i << " -> n" << e.target.index << " [label=\"" << g.name(e.action)
                << "\"];\n";
    dot << "}\n";
    m.write("hypergame.dot", dot.str());
    m.finish();
    const std::size_t red = g.num_states() - blue.size() - green.size();
    out << "export-dot: " << blue.size() << " blue, " << green.size() << " green, " << red
        << " red\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deceptive strategy synthesis for reachability games", "decept"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    Common common;
    std::function<int()> action;

    std::string game_path;
    auto* sg = app.add_subcommand("solve-game", "Solve the game with complete information");
    sg->add_option("--game", game_path, "Game document")->required();
    add_common(sg, common);
    sg->callback([&] { action = [&] { return cmd_solve_game(game_path, common, out); }; });

    HypergameInputs hin;
    std::string variant = "nested";
    auto* sd = app.add_subcommand("solve-dsw", "Deceptive sure-winning region");
    add_hypergame_inputs(sd, hin);
    add_common(sd, common);
    sd->callback([&] {
        action = [&] { return cmd_solve_deceptive(SolveKind::dsw, hin, variant, common, out); };
    });
    auto* sa = app.add_subcommand("solve-dasw", "Deceptive almost-sure-winning region");
    add_hypergame_inputs(sa, hin);
    add_common(sa, common);
    sa->add_option("--variant", variant, "Fixed point: nested (default) or literal");
    sa->callback([&] {
        action = [&] { return cmd_solve_deceptive(SolveKind::dasw, hin, variant, common, out); };
    });

    std::string formula;
    std::vector<std::string> ap;
    auto* cs = app.add_subcommand("compile-scltl", "Compile an scLTL formula to a DFA");
    cs->add_option("--formula", formula, "Formula text")->required();
    cs->add_option("--ap", ap, "Atomic propositions (comma separated)")->delimiter(',')->required();
    add_common(cs, common);
    cs->callback([&] { action = [&] { return cmd_compile(formula, ap, common, out); }; });

    std::string layout;
    std::string objective = "phi1";
    auto* gc = app.add_subcommand("gen-ctf", "Generate the capture-the-flag game and hypergame");
    gc->add_option("--layout", layout, "Layout document")->required();
    gc->add_option("--formula", objective, "phi1, phi2, a formula file, or formula text");
    add_common(gc, common);
    gc->callback([&] { action = [&] { return cmd_gen_ctf(layout, objective, common, out); }; });

    auto* bc = app.add_subcommand("bench-ctf", "Run the capture-the-flag benchmark");
    bc->add_option("--layout", layout, "Layout document")->required();
    bc->add_option("--formula", objective, "phi1, phi2, a formula file, or formula text");
    add_common(bc, common);
    bc->callback([&] { action = [&] { return cmd_bench(layout, objective, common, out); }; });

    SimArgs sim_args;
    auto* sm = app.add_subcommand("simulate", "Monte-Carlo rollouts of a P1 strategy");
    add_hypergame_inputs(sm, sim_args.in);
    add_common(sm, common);
    sm->add_option("--start", sim_args.start, "Product state name")->required();
    sm->add_option("--solver", sim_args.solver, "dsw or dasw (default dasw)");
    sm->add_option("--strategy", sim_args.strategy, "Strategy document instead of a solver");
    sm->add_option("--episodes", sim_args.episodes, "Episode count");
    sm->add_option("--horizon", sim_args.horizon, "Step cap (default 10 * |V|)");
    sm->add_option("--threads", sim_args.threads, "Worker threads");
    sm->add_flag("--fill-uniform", sim_args.fill_uniform,
                 "Play uniformly where the strategy has no move");
    sm->add_flag("--traces", sim_args.traces, "Also write every episode's play");
    sm->callback([&] { action = [&] { return cmd_simulate(sim_args, common, out); }; });

    PlayArgs play_args;
    auto* pl = app.add_subcommand("play", "Play as P2 against a P1 strategy");
    add_hypergame_inputs(pl, play_args.in);
    add_common(pl, common);
    pl->add_option("--start", play_args.start, "Product state name")->required();
    pl->add_option("--solver", play_args.solver, "dsw or dasw (default dasw)");
    pl->add_option("--strategy", play_args.strategy, "Strategy document instead of a solver");
    pl->add_flag("--reveal-all", play_args.reveal_all, "Show the full product state");
    pl->callback([&] { action = [&] { return cmd_play(play_args, common, in, out); }; });

    ExportArgs export_args;
    auto* ed = app.add_subcommand("export-dot", "Colour a solved hypergame as DOT");
    add_hypergame_inputs(ed, export_args.in);
    add_common(ed, common);
    ed->add_option("--dsw", export_args.dsw_path, "Region document from solve-dsw");
    ed->add_option("--dasw", export_args.dasw_path, "Region document from solve-dasw");
    ed->callback([&] { action = [&] { return cmd_export(export_args, common, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version << "\n";
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const SizeGuardError& e) {
        err << "size limit: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace deception::cli
