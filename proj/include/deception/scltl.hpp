#pragma once

#include "deception/arena.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deception::scltl {

enum class Op : std::uint8_t { top, bottom, atom, neg_atom, conj, disj, next, until };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Positive normal form: negation appears only directly on atoms.
struct Node {
    Op op = Op::top;
    std::uint32_t prop = 0;        // atom, neg_atom
    std::vector<NodePtr> kids;     // conj/disj: >= 2; next: 1; until: 2 (lhs, rhs)
};

// Smart constructors; they fold constants and flatten nested conj/disj.
NodePtr make_top();
NodePtr make_bottom();
NodePtr make_atom(std::uint32_t prop, bool negated = false);
NodePtr make_and(std::vector<NodePtr> kids);
NodePtr make_or(std::vector<NodePtr> kids);
NodePtr make_next(NodePtr f);
NodePtr make_until(NodePtr lhs, NodePtr rhs);
NodePtr make_eventually(NodePtr f);

struct Formula {
    std::vector<std::string> propositions;  // bit i of a symbol <-> propositions[i]
    NodePtr root;
};

// Errors (ValidationError) carry the character offset of the problem.
Formula parse(std::string_view text, std::vector<std::string> propositions);
std::string to_string(const Formula& f);
std::string to_string(const NodePtr& n, std::span<const std::string> propositions);

// A letter is the set of true propositions, as a bitmask.
using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

// Whether w already guarantees f: finitary evaluation in which an until
// needs its witness inside w and nothing but true holds past the end.
bool good_prefix(const Formula& f, const Word& w);
// Single-position evaluation used by good_prefix.
bool holds(const NodePtr& n, const Word& w, std::size_t i);

// Propositional evaluation; throws ValidationError on temporal operators.
bool eval_propositional(const NodePtr& n, Symbol s);

class Dfa {
public:
    Dfa() = default;
    Dfa(std::vector<std::string> propositions, std::uint32_t num_states, std::uint32_t initial);

    std::span<const std::string> propositions() const { return props_; }
    std::uint32_t num_symbols() const { return std::uint32_t{1} << props_.size(); }
    std::uint32_t num_states() const { return num_states_; }
    std::uint32_t initial() const { return initial_; }
    bool accepting(std::uint32_t q) const { return accepting_[q]; }
    void set_accepting(std::uint32_t q, bool yes) { accepting_[q] = yes; }
    std::uint32_t step(std::uint32_t q, Symbol s) const { return delta_[q * num_symbols() + s]; }
    void set_step(std::uint32_t q, Symbol s, std::uint32_t to) { delta_[q * num_symbols() + s] = to; }
    // The rejecting trap, if there is one.
    std::optional<std::uint32_t> sink() const;

    std::uint32_t run(const Word& w) const;
    bool accepts(const Word& w) const { return accepting(run(w)); }

    // Symbol with the given label names set (names outside the propositions are ignored).
    Symbol symbol_of(std::span<const std::string> labels) const;

private:
    std::vector<std::string> props_;
    std::uint32_t num_states_ = 0;
    std::uint32_t initial_ = 0;
    std::vector<bool> accepting_;
    std::vector<std::uint32_t> delta_;
};

inline constexpr std::size_t max_propositions = 16;

// Complete, minimal DFA of the good prefixes of f, states numbered in
// breadth-first order from the initial state. Throws SizeGuardError when
// the formula has more than max_propositions propositions.
Dfa compile(const Formula& f);

// Merges equivalent states and renumbers in breadth-first order.
Dfa minimize(const Dfa& d);

// Same propositions (in order) and same language over the symbols accepted
// by `alphabet` (all symbols when empty).
bool language_equivalent(const Dfa& a, const Dfa& b,
                         const std::function<bool(Symbol)>& alphabet = {});

// Smallest sum-of-products guard for a set of symbols, in formula syntax.
std::string guard_string(std::span<const std::string> propositions,
                         const std::vector<bool>& symbols);

// {"propositions", "states", "initial", "accepting", "transitions": [{from, guard, to}]}
std::string save_dfa(const Dfa& d);
Dfa load_dfa(std::string_view text);
std::string dfa_to_dot(const Dfa& d);

// Product of a labelled game with a DFA: (s, q) -a-> (s', step(q, L(s'))).
struct ProductGame {
    GameArena arena;
    std::vector<std::pair<StateId, std::uint32_t>> origin;  // product state -> (ts state, dfa state)
    std::vector<StateId> initial;                           // entry states, in input order
};

// With `initial` the product is restricted to states reachable from the
// entries (s0, step(initial, L(s0))); without it the full product is built.
// Product states are named "<state>|q<dfa state>".
ProductGame product(const GameArena& ts, const Dfa& d,
                    std::optional<std::span<const StateId>> initial = std::nullopt);

} // namespace deception::scltl
