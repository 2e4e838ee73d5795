#include "deception/scltl.hpp"

#include "deception/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace deception::scltl {

using detail::json;

// ---------------------------------------------------------------------------
// Constructors

namespace {

NodePtr node(Op op, std::vector<NodePtr> kids = {}, std::uint32_t prop = 0)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->prop = prop;
    n->kids = std::move(kids);
    return n;
}

const NodePtr& top_node()
{
    static const NodePtr n = node(Op::top);
    return n;
}

const NodePtr& bottom_node()
{
    static const NodePtr n = node(Op::bottom);
    return n;
}

NodePtr make_junction(Op op, std::vector<NodePtr> kids)
{
    const Op unit = op == Op::conj ? Op::top : Op::bottom;
    const Op zero = op == Op::conj ? Op::bottom : Op::top;
    std::vector<NodePtr> flat;
    for (auto& k : kids) {
        if (k->op == zero)
            return zero == Op::top ? make_top() : make_bottom();
        if (k->op == unit)
            continue;
        if (k->op == op)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty())
        return unit == Op::top ? make_top() : make_bottom();
    if (flat.size() == 1)
        return flat.front();
    return node(op, std::move(flat));
}

} // namespace

NodePtr make_top() { return top_node(); }
NodePtr make_bottom() { return bottom_node(); }

NodePtr make_atom(std::uint32_t prop, bool negated)
{
    return node(negated ? Op::neg_atom : Op::atom, {}, prop);
}

NodePtr make_and(std::vector<NodePtr> kids) { return make_junction(Op::conj, std::move(kids)); }
NodePtr make_or(std::vector<NodePtr> kids) { return make_junction(Op::disj, std::move(kids)); }

NodePtr make_next(NodePtr f)
{
    if (f->op == Op::top || f->op == Op::bottom)
        return f;
    return node(Op::next, {std::move(f)});
}

NodePtr make_until(NodePtr lhs, NodePtr rhs)
{
    if (rhs->op == Op::top || rhs->op == Op::bottom)
        return rhs;
    if (lhs->op == Op::bottom)
        return rhs;
    return node(Op::until, {std::move(lhs), std::move(rhs)});
}

NodePtr make_eventually(NodePtr f) { return make_until(make_top(), std::move(f)); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& props) : text_(text), props_(props)
    {
        advance();
    }

    NodePtr parse_all()
    {
        NodePtr n = parse_or();
        if (tok_.kind != Tok::end)
            fail("unexpected '" + tok_.text + "'");
        return n;
    }

private:
    enum class Tok { end, ident, kw_true, kw_false, kw_x, kw_f, kw_u, bang, amp, bar, lpar, rpar };
    struct Token {
        Tok kind = Tok::end;
        std::string text;
        std::size_t pos = 0;
    };

    [[noreturn]] void fail(const std::string& msg) const { fail_at(tok_.pos, msg); }
    [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const
    {
        throw ValidationError("formula: " + msg + " at offset " + std::to_string(pos));
    }

    void advance()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        tok_ = {Tok::end, "", pos_};
        if (pos_ >= text_.size())
            return;
        const char c = text_[pos_];
        auto single = [&](Tok k) {
            tok_.kind = k;
            tok_.text = std::string(1, c);
            ++pos_;
        };
        switch (c) {
        case '!': return single(Tok::bang);
        case '&': return single(Tok::amp);
        case '|': return single(Tok::bar);
        case '(': return single(Tok::lpar);
        case ')': return single(Tok::rpar);
        default: break;
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_'))
            fail_at(pos_, std::string("unexpected character '") + c + "'");
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
            ++end;
        tok_.text = std::string(text_.substr(pos_, end - pos_));
        pos_ = end;
        if (tok_.text == "true")
            tok_.kind = Tok::kw_true;
        else if (tok_.text == "false")
            tok_.kind = Tok::kw_false;
        else if (tok_.text == "X")
            tok_.kind = Tok::kw_x;
        else if (tok_.text == "F")
            tok_.kind = Tok::kw_f;
        else if (tok_.text == "U")
            tok_.kind = Tok::kw_u;
        else
            tok_.kind = Tok::ident;
    }

    NodePtr parse_or()
    {
        std::vector<NodePtr> kids{parse_and()};
        while (tok_.kind == Tok::bar) {
            advance();
            kids.push_back(parse_and());
        }
        return kids.size() == 1 ? kids.front() : make_or(std::move(kids));
    }

    NodePtr parse_and()
    {
        std::vector<NodePtr> kids{parse_until()};
        while (tok_.kind == Tok::amp) {
            advance();
            kids.push_back(parse_until());
        }
        return kids.size() == 1 ? kids.front() : make_and(std::move(kids));
    }

    NodePtr parse_until()
    {
        NodePtr lhs = parse_unary();
        if (tok_.kind != Tok::kw_u)
            return lhs;
        advance();
        return make_until(std::move(lhs), parse_until());
    }

    NodePtr parse_unary()
    {
        switch (tok_.kind) {
        case Tok::bang: {
            advance();
            if (tok_.kind == Tok::kw_true) {
                advance();
                return make_bottom();
            }
            if (tok_.kind == Tok::kw_false) {
                advance();
                return make_top();
            }
            if (tok_.kind == Tok::ident)
                return atom(true);
            fail("negation applies only to atomic propositions");
        }
        case Tok::kw_x:
            advance();
            return make_next(parse_unary());
        case Tok::kw_f:
            advance();
            return make_eventually(parse_unary());
        default:
            return parse_primary();
        }
    }

    NodePtr parse_primary()
    {
        switch (tok_.kind) {
        case Tok::kw_true: advance(); return make_top();
        case Tok::kw_false: advance(); return make_bottom();
        case Tok::ident: return atom(false);
        case Tok::lpar: {
            advance();
            NodePtr n = parse_or();
            if (tok_.kind != Tok::rpar)
                fail("expected ')'");
            advance();
            return n;
        }
        case Tok::end: fail("unexpected end of formula");
        default: fail("unexpected '" + tok_.text + "'");
        }
    }

    NodePtr atom(bool negated)
    {
        auto it = std::find(props_.begin(), props_.end(), tok_.text);
        if (it == props_.end())
            fail("undeclared proposition '" + tok_.text + "'");
        advance();
        return make_atom(static_cast<std::uint32_t>(it - props_.begin()), negated);
    }

    std::string_view text_;
    const std::vector<std::string>& props_;
    std::size_t pos_ = 0;
    Token tok_;
};

} // namespace

Formula parse(std::string_view text, std::vector<std::string> propositions)
{
    for (std::size_t i = 0; i < propositions.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (propositions[i] == propositions[j])
                throw ValidationError("proposition '" + propositions[i] + "' declared twice");
    Formula f;
    f.root = Parser(text, propositions).parse_all();
    f.propositions = std::move(propositions);
    return f;
}

std::string to_string(const NodePtr& n, std::span<const std::string> props)
{
    auto wrap = [&](const NodePtr& k) {
        const bool simple = k->op == Op::top || k->op == Op::bottom || k->op == Op::atom ||
                            k->op == Op::neg_atom || k->op == Op::next;
        return simple ? to_string(k, props) : "(" + to_string(k, props) + ")";
    };
    switch (n->op) {
    case Op::top: return "true";
    case Op::bottom: return "false";
    case Op::atom: return props[n->prop];
    case Op::neg_atom: return "!" + props[n->prop];
    case Op::next: return "X " + wrap(n->kids[0]);
    case Op::until:
        if (n->kids[0]->op == Op::top)
            return "F " + wrap(n->kids[1]);
        return wrap(n->kids[0]) + " U " + wrap(n->kids[1]);
    case Op::conj:
    case Op::disj: {
        std::string out;
        for (std::size_t i = 0; i < n->kids.size(); ++i) {
            if (i)
                out += n->op == Op::conj ? " & " : " | ";
            out += wrap(n->kids[i]);
        }
        return out;
    }
    }
    return {};
}

std::string to_string(const Formula& f) { return to_string(f.root, f.propositions); }

// ---------------------------------------------------------------------------
// Finitary semantics

bool holds(const NodePtr& n, const Word& w, std::size_t i)
{
    const bool at_end = i >= w.size();
    switch (n->op) {
    case Op::top: return true;
    case Op::bottom: return false;
    case Op::atom: return !at_end && ((w[i] >> n->prop) & 1U);
    case Op::neg_atom: return !at_end && !((w[i] >> n->prop) & 1U);
    case Op::conj:
        return std::all_of(n->kids.begin(), n->kids.end(),
                           [&](const NodePtr& k) { return holds(k, w, i); });
    case Op::disj:
        return std::any_of(n->kids.begin(), n->kids.end(),
                           [&](const NodePtr& k) { return holds(k, w, i); });
    case Op::next: return !at_end && holds(n->kids[0], w, i + 1);
    case Op::until:
        for (std::size_t j = i; j < w.size(); ++j) {
            if (holds(n->kids[1], w, j))
                return true;
            if (!holds(n->kids[0], w, j))
                return false;
        }
        return false;
    }
    return false;
}

bool good_prefix(const Formula& f, const Word& w)
{
    const Symbol limit = Symbol{1} << f.propositions.size();
    for (Symbol s : w)
        if (s >= limit)
            throw ValidationError("word symbol outside the alphabet");
    return holds(f.root, w, 0);
}

bool eval_propositional(const NodePtr& n, Symbol s)
{
    switch (n->op) {
    case Op::top: return true;
    case Op::bottom: return false;
    case Op::atom: return (s >> n->prop) & 1U;
    case Op::neg_atom: return !((s >> n->prop) & 1U);
    case Op::conj:
        return std::all_of(n->kids.begin(), n->kids.end(),
                           [&](const NodePtr& k) { return eval_propositional(k, s); });
    case Op::disj:
        return std::any_of(n->kids.begin(), n->kids.end(),
                           [&](const NodePtr& k) { return eval_propositional(k, s); });
    case Op::next:
    case Op::until: break;
    }
    throw ValidationError("guard contains a temporal operator");
}

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(std::vector<std::string> propositions, std::uint32_t num_states, std::uint32_t initial)
    : props_(std::move(propositions)), num_states_(num_states), initial_(initial),
      accepting_(num_states, false)
{
    if (props_.size() > max_propositions)
        throw SizeGuardError("alphabet over " + std::to_string(props_.size()) +
                             " propositions exceeds the limit of " +
                             std::to_string(max_propositions));
    delta_.assign(static_cast<std::size_t>(num_states) * num_symbols(), 0);
}

std::optional<std::uint32_t> Dfa::sink() const
{
    for (std::uint32_t q = 0; q < num_states_; ++q) {
        if (accepting(q))
            continue;
        bool closed = true;
        for (Symbol s = 0; s < num_symbols() && closed; ++s)
            closed = step(q, s) == q;
        if (closed)
            return q;
    }
    return std::nullopt;
}

std::uint32_t Dfa::run(const Word& w) const
{
    std::uint32_t q = initial_;
    for (Symbol s : w) {
        if (s >= num_symbols())
            throw ValidationError("word symbol outside the alphabet");
        q = step(q, s);
    }
    return q;
}

Symbol Dfa::symbol_of(std::span<const std::string> labels) const
{
    Symbol s = 0;
    for (const auto& l : labels) {
        auto it = std::find(props_.begin(), props_.end(), l);
        if (it != props_.end())
            s |= Symbol{1} << (it - props_.begin());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Compilation by progression over disjunctive normal forms of obligations.

namespace {

using Clause = std::vector<std::uint32_t>;  // sorted obligation ids
using Dnf = std::vector<Clause>;            // canonical: sorted, no clause contains another

class Progression {
public:
    explicit Progression(const Formula& f) : f_(f) {}

    Dnf initial() { return expand(f_.root); }

    Dnf step(const Dnf& state, Symbol s)
    {
        Dnf out;
        for (const Clause& c : state) {
            Dnf acc{{}};
            for (std::uint32_t ob : c) {
                // Copied: progress may grow obligations_.
                const NodePtr n = obligations_[ob];
                acc = conjoin(acc, progress(n, s));
                if (acc.empty())
                    break;
            }
            out.insert(out.end(), acc.begin(), acc.end());
        }
        return canonical(std::move(out));
    }

    static bool accepting(const Dnf& d) { return !d.empty() && d.front().empty(); }

private:
    std::uint32_t intern(const NodePtr& n)
    {
        const std::string key = to_string(n, f_.propositions);
        auto [it, fresh] = index_.emplace(key, static_cast<std::uint32_t>(obligations_.size()));
        if (fresh)
            obligations_.push_back(n);
        return it->second;
    }

    // Obligations read at the current letter: atoms, negated atoms, next, until.
    Dnf expand(const NodePtr& n)
    {
        switch (n->op) {
        case Op::top: return {{}};
        case Op::bottom: return {};
        case Op::conj: {
            Dnf acc{{}};
            for (const auto& k : n->kids)
                acc = conjoin(acc, expand(k));
            return acc;
        }
        case Op::disj: {
            Dnf acc;
            for (const auto& k : n->kids) {
                Dnf e = expand(k);
                acc.insert(acc.end(), e.begin(), e.end());
            }
            return canonical(std::move(acc));
        }
        default: return {{intern(n)}};
        }
    }

    Dnf progress(const NodePtr& n, Symbol s)
    {
        switch (n->op) {
        case Op::top: return {{}};
        case Op::bottom: return {};
        case Op::atom: return ((s >> n->prop) & 1U) ? Dnf{{}} : Dnf{};
        case Op::neg_atom: return ((s >> n->prop) & 1U) ? Dnf{} : Dnf{{}};
        case Op::conj: {
            Dnf acc{{}};
            for (const auto& k : n->kids)
                acc = conjoin(acc, progress(k, s));
            return acc;
        }
        case Op::disj: {
            Dnf acc;
            for (const auto& k : n->kids) {
                Dnf e = progress(k, s);
                acc.insert(acc.end(), e.begin(), e.end());
            }
            return canonical(std::move(acc));
        }
        case Op::next: return expand(n->kids[0]);
        case Op::until: {
            Dnf out = progress(n->kids[1], s);
            Dnf keep = conjoin(progress(n->kids[0], s), Dnf{{intern(n)}});
            out.insert(out.end(), keep.begin(), keep.end());
            return canonical(std::move(out));
        }
        }
        return {};
    }

    static Dnf conjoin(const Dnf& a, const Dnf& b)
    {
        Dnf out;
        out.reserve(a.size() * b.size());
        for (const Clause& x : a)
            for (const Clause& y : b) {
                Clause c;
                std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(c));
                out.push_back(std::move(c));
            }
        return canonical(std::move(out));
    }

    static Dnf canonical(Dnf d)
    {
        std::sort(d.begin(), d.end(), [](const Clause& a, const Clause& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        d.erase(std::unique(d.begin(), d.end()), d.end());
        Dnf out;
        for (Clause& c : d) {
            const bool absorbed = std::any_of(out.begin(), out.end(), [&](const Clause& k) {
                return std::includes(c.begin(), c.end(), k.begin(), k.end());
            });
            if (!absorbed)
                out.push_back(std::move(c));
        }
        // An empty clause absorbs every other, so acceptance is {{}}.
        std::sort(out.begin(), out.end());
        return out;
    }

    const Formula& f_;
    std::map<std::string, std::uint32_t> index_;
    std::vector<NodePtr> obligations_;
};

} // namespace

Dfa compile(const Formula& f)
{
    if (f.propositions.size() > max_propositions)
        throw SizeGuardError("formula over " + std::to_string(f.propositions.size()) +
                             " propositions exceeds the alphabet limit of 2^" +
                             std::to_string(max_propositions) + " symbols");
    const Symbol nsym = Symbol{1} << f.propositions.size();

    Progression prog(f);
    std::map<Dnf, std::uint32_t> ids;
    std::vector<Dnf> states;
    std::vector<std::uint32_t> delta;
    auto intern = [&](Dnf d) {
        auto [it, fresh] = ids.emplace(d, static_cast<std::uint32_t>(states.size()));
        if (fresh)
            states.push_back(std::move(d));
        return it->second;
    };
    intern(prog.initial());
    for (std::uint32_t q = 0; q < states.size(); ++q) {
        delta.resize(static_cast<std::size_t>(states.size()) * nsym);
        for (Symbol s = 0; s < nsym; ++s) {
            const std::uint32_t t = intern(prog.step(states[q], s));
            delta.resize(static_cast<std::size_t>(states.size()) * nsym);
            delta[static_cast<std::size_t>(q) * nsym + s] = t;
        }
    }

    Dfa raw(f.propositions, static_cast<std::uint32_t>(states.size()), 0);
    for (std::uint32_t q = 0; q < states.size(); ++q) {
        raw.set_accepting(q, Progression::accepting(states[q]));
        for (Symbol s = 0; s < nsym; ++s)
            raw.set_step(q, s, delta[static_cast<std::size_t>(q) * nsym + s]);
    }
    return minimize(raw);
}

Dfa minimize(const Dfa& d)
{
    const std::uint32_t n = d.num_states();
    const Symbol nsym = d.num_symbols();

    // Reachable states only.
    std::vector<bool> seen(n, false);
    std::deque<std::uint32_t> queue{d.initial()};
    seen[d.initial()] = true;
    while (!queue.empty()) {
        const std::uint32_t q = queue.front();
        queue.pop_front();
        for (Symbol s = 0; s < nsym; ++s) {
            const std::uint32_t t = d.step(q, s);
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }

    // Moore refinement.
    std::vector<std::uint32_t> cls(n, 0);
    for (std::uint32_t q = 0; q < n; ++q)
        cls[q] = d.accepting(q) ? 1 : 0;
    std::uint32_t num_classes = 0;
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> sig_ids;
        std::vector<std::uint32_t> next(n, 0);
        for (std::uint32_t q = 0; q < n; ++q) {
            if (!seen[q])
                continue;
            std::vector<std::uint32_t> sig;
            sig.reserve(nsym + 1);
            sig.push_back(cls[q]);
            for (Symbol s = 0; s < nsym; ++s)
                sig.push_back(cls[d.step(q, s)]);
            auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<std::uint32_t>(sig_ids.size()));
            next[q] = it->second;
        }
        const auto count = static_cast<std::uint32_t>(sig_ids.size());
        cls = std::move(next);
        if (count == num_classes)
            break;
        num_classes = count;
    }

    // Breadth-first renumbering from the initial class.
    std::vector<std::uint32_t> rep(num_classes, n), order(num_classes, n);
    for (std::uint32_t q = 0; q < n; ++q)
        if (seen[q] && rep[cls[q]] == n)
            rep[cls[q]] = q;
    std::vector<std::uint32_t> bfs;
    order[cls[d.initial()]] = 0;
    bfs.push_back(cls[d.initial()]);
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (Symbol s = 0; s < nsym; ++s) {
            const std::uint32_t c = cls[d.step(rep[bfs[i]], s)];
            if (order[c] == n) {
                order[c] = static_cast<std::uint32_t>(bfs.size());
                bfs.push_back(c);
            }
        }

    Dfa out(std::vector<std::string>(d.propositions().begin(), d.propositions().end()),
            static_cast<std::uint32_t>(bfs.size()), 0);
    for (std::uint32_t i = 0; i < bfs.size(); ++i) {
        const std::uint32_t q = rep[bfs[i]];
        out.set_accepting(i, d.accepting(q));
        for (Symbol s = 0; s < nsym; ++s)
            out.set_step(i, s, order[cls[d.step(q, s)]]);
    }
    return out;
}

bool language_equivalent(const Dfa& a, const Dfa& b, const std::function<bool(Symbol)>& alphabet)
{
    if (!std::equal(a.propositions().begin(), a.propositions().end(), b.propositions().begin(),
                    b.propositions().end()))
        return false;
    const Symbol nsym = a.num_symbols();
    std::vector<bool> seen(static_cast<std::size_t>(a.num_states()) * b.num_states(), false);
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue{{a.initial(), b.initial()}};
    seen[static_cast<std::size_t>(a.initial()) * b.num_states() + b.initial()] = true;
    while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        if (a.accepting(p) != b.accepting(q))
            return false;
        for (Symbol s = 0; s < nsym; ++s) {
            if (alphabet && !alphabet(s))
                continue;
            const std::uint32_t p2 = a.step(p, s), q2 = b.step(q, s);
            const std::size_t key = static_cast<std::size_t>(p2) * b.num_states() + q2;
            if (!seen[key]) {
                seen[key] = true;
                queue.push_back({p2, q2});
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Guards

std::string guard_string(std::span<const std::string> props, const std::vector<bool>& symbols)
{
    const std::uint32_t nvars = static_cast<std::uint32_t>(props.size());
    struct Cube {
        Symbol value, dont_care;
        auto operator<=>(const Cube&) const = default;
    };
    std::vector<Cube> current;
    for (Symbol s = 0; s < symbols.size(); ++s)
        if (symbols[s])
            current.push_back({s, 0});
    if (current.empty())
        return "false";
    if (current.size() == symbols.size())
        return "true";

    // Prime implicants by repeated merging.
    std::vector<Cube> primes;
    while (!current.empty()) {
        std::vector<bool> merged(current.size(), false);
        std::vector<Cube> next;
        for (std::size_t i = 0; i < current.size(); ++i)
            for (std::size_t j = i + 1; j < current.size(); ++j) {
                if (current[i].dont_care != current[j].dont_care)
                    continue;
                const Symbol diff = current[i].value ^ current[j].value;
                if (diff == 0 || (diff & (diff - 1)) != 0)
                    continue;
                merged[i] = merged[j] = true;
                next.push_back({current[i].value & ~diff, current[i].dont_care | diff});
            }
        for (std::size_t i = 0; i < current.size(); ++i)
            if (!merged[i])
                primes.push_back(current[i]);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        current = std::move(next);
    }

    // Greedy cover, largest cubes first.
    auto covers = [](const Cube& c, Symbol s) { return (s & ~c.dont_care) == c.value; };
    std::vector<bool> covered(symbols.size(), false);
    std::sort(primes.begin(), primes.end(), [](const Cube& a, const Cube& b) {
        const int pa = std::popcount(a.dont_care), pb = std::popcount(b.dont_care);
        return pa != pb ? pa > pb : a < b;
    });
    std::vector<Cube> chosen;
    for (;;) {
        std::size_t best = primes.size(), best_gain = 0;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            std::size_t gain = 0;
            for (Symbol s = 0; s < symbols.size(); ++s)
                if (symbols[s] && !covered[s] && covers(primes[i], s))
                    ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == primes.size())
            break;
        chosen.push_back(primes[best]);
        for (Symbol s = 0; s < symbols.size(); ++s)
            if (covers(primes[best], s))
                covered[s] = true;
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<std::string> terms;
    for (const Cube& c : chosen) {
        std::vector<std::string> lits;
        for (std::uint32_t v = 0; v < nvars; ++v) {
            if ((c.dont_care >> v) & 1U)
                continue;
            lits.push_back(((c.value >> v) & 1U) ? props[v] : "!" + props[v]);
        }
        std::string t;
        for (std::size_t i = 0; i < lits.size(); ++i)
            t += (i ? " & " : "") + lits[i];
        terms.push_back(std::move(t));
    }
    if (terms.size() == 1)
        return terms.front();
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const bool paren = terms[i].find('&') != std::string::npos;
        out += (i ? " | " : "") + (paren ? "(" + terms[i] + ")" : terms[i]);
    }
    return out;
}

namespace {

// Symbol sets per (from, to), in order of target.
std::vector<std::pair<std::uint32_t, std::vector<bool>>> edges_from(const Dfa& d, std::uint32_t q)
{
    std::map<std::uint32_t, std::vector<bool>> by_target;
    for (Symbol s = 0; s < d.num_symbols(); ++s) {
        auto& v = by_target[d.step(q, s)];
        v.resize(d.num_symbols(), false);
        v[s] = true;
    }
    return {by_target.begin(), by_target.end()};
}

} // namespace

std::string save_dfa(const Dfa& d)
{
    json accepting = json::array();
    json transitions = json::array();
    for (std::uint32_t q = 0; q < d.num_states(); ++q) {
        if (d.accepting(q))
            accepting.push_back(q);
        for (const auto& [to, syms] : edges_from(d, q))
            transitions.push_back(
                {{"from", q}, {"guard", guard_string(d.propositions(), syms)}, {"to", to}});
    }
    json doc = {{"propositions", std::vector<std::string>(d.propositions().begin(),
                                                          d.propositions().end())},
                {"states", d.num_states()},
                {"initial", d.initial()},
                {"accepting", std::move(accepting)},
                {"transitions", std::move(transitions)}};
    if (auto s = d.sink())
        doc["sink"] = *s;
    return doc.dump(1) + "\n";
}

Dfa load_dfa(std::string_view text)
{
    const json doc = detail::parse_json(text, "DFA document");
    std::vector<std::string> props;
    for (const json& p : detail::require_array(doc, "propositions", "DFA document")) {
        if (!p.is_string())
            throw ValidationError("DFA propositions must be strings");
        props.push_back(p.get<std::string>());
    }
    auto count = [&](const char* key) {
        const json& v = detail::require(doc, key, "DFA document");
        if (!v.is_number_unsigned())
            throw ValidationError(std::string("DFA '") + key + "' must be a non-negative integer");
        return v.get<std::uint32_t>();
    };
    const std::uint32_t n = count("states");
    const std::uint32_t init = count("initial");
    if (n == 0 || init >= n)
        throw ValidationError("DFA initial state out of range");
    Dfa d(props, n, init);
    auto state_ref = [&](const json& v) {
        if (!v.is_number_unsigned() || v.get<std::uint32_t>() >= n)
            throw ValidationError("DFA state reference out of range");
        return v.get<std::uint32_t>();
    };
    for (const json& q : detail::require_array(doc, "accepting", "DFA document"))
        d.set_accepting(state_ref(q), true);

    std::vector<int> assigned(static_cast<std::size_t>(n) * d.num_symbols(), 0);
    for (const json& t : detail::require_array(doc, "transitions", "DFA document")) {
        const std::uint32_t from = state_ref(detail::require(t, "from", "DFA transition"));
        const std::uint32_t to = state_ref(detail::require(t, "to", "DFA transition"));
        const Formula guard = parse(detail::require_string(t, "guard", "DFA transition"), props);
        for (Symbol s = 0; s < d.num_symbols(); ++s) {
            if (!eval_propositional(guard.root, s))
                continue;
            if (assigned[from * d.num_symbols() + s]++)
                throw ValidationError("DFA state " + std::to_string(from) +
                                      " has overlapping guards");
            d.set_step(from, s, to);
        }
    }
    for (std::uint32_t q = 0; q < n; ++q)
        for (Symbol s = 0; s < d.num_symbols(); ++s)
            if (!assigned[q * d.num_symbols() + s])
                throw ValidationError("DFA state " + std::to_string(q) +
                                      " has no transition for some letter");
    return d;
}

std::string dfa_to_dot(const Dfa& d)
{
    std::ostringstream os;
    os << "digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n";
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        os << "  q" << q << " [label=\"" << q << "\", shape="
           << (d.accepting(q) ? "doublecircle" : "circle") << "];\n";
    os << "  init -> q" << d.initial() << ";\n";
    for (std::uint32_t q = 0; q < d.num_states(); ++q)
        for (const auto& [to, syms] : edges_from(d, q))
            os << "  q" << q << " -> q" << to << " [label=\""
               << guard_string(d.propositions(), syms) << "\"];\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Product

ProductGame product(const GameArena& ts, const Dfa& d,
                    std::optional<std::span<const StateId>> initial)
{
    const std::uint32_t nq = d.num_states();
    std::vector<Symbol> letter(ts.num_states());
    for (std::uint32_t i = 0; i < ts.num_states(); ++i)
        letter[i] = d.symbol_of(ts.state(StateId{i}).labels);

    ProductGame out;
    std::vector<std::uint32_t> index(static_cast<std::size_t>(ts.num_states()) * nq, 0);
    auto add = [&](StateId s, std::uint32_t q) {
        std::uint32_t& slot = index[static_cast<std::size_t>(s.index) * nq + q];
        if (slot != 0)
            return std::pair{StateId{slot - 1}, false};
        out.origin.push_back({s, q});
        slot = static_cast<std::uint32_t>(out.origin.size());
        return std::pair{StateId{slot - 1}, true};
    };

    if (initial) {
        std::deque<StateId> queue;
        for (StateId s : *initial) {
            if (s.index >= ts.num_states())
                throw ValidationError("product entry references an unknown state");
            auto [id, fresh] = add(s, d.step(d.initial(), letter[s.index]));
            out.initial.push_back(id);
            if (fresh)
                queue.push_back(id);
        }
        while (!queue.empty()) {
            const auto [s, q] = out.origin[queue.front().index];
            queue.pop_front();
            for (const Edge& e : ts.enabled(s)) {
                auto [id, fresh] = add(e.target, d.step(q, letter[e.target.index]));
                if (fresh)
                    queue.push_back(id);
            }
        }
    } else {
        for (std::uint32_t s = 0; s < ts.num_states(); ++s)
            for (std::uint32_t q = 0; q < nq; ++q)
                add(StateId{s}, q);
    }

    GameArena::Builder b;
    for (const auto& [s, q] : out.origin) {
        const auto& info = ts.state(s);
        b.add_state(info.name + "|q" + std::to_string(q), info.owner, d.accepting(q), info.labels);
    }
    for (std::uint32_t a = 0; a < ts.num_actions(); ++a)
        b.add_action(ts.action(ActionId{a}).name, ts.action(ActionId{a}).owner);
    for (std::uint32_t i = 0; i < out.origin.size(); ++i) {
        const auto [s, q] = out.origin[i];
        for (const Edge& e : ts.enabled(s)) {
            const std::uint32_t q2 = d.step(q, letter[e.target.index]);
            b.add_transition(StateId{i}, e.action,
                             StateId{index[static_cast<std::size_t>(e.target.index) * nq + q2] - 1});
        }
    }
    out.arena = std::move(b).build();
    return out;
}

} // namespace deception::scltl
