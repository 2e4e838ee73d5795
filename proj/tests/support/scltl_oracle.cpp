#include "support/scltl_oracle.hpp"

#include <algorithm>

namespace testing {

namespace sc = deception::scltl;

namespace {

// Reference finitary semantics: past the end of the word only `true` holds.
bool at_end(const sc::NodePtr& n)
{
    switch (n->op) {
    case sc::Op::top: return true;
    case sc::Op::conj:
        return std::all_of(n->kids.begin(), n->kids.end(), [](const auto& k) { return at_end(k); });
    case sc::Op::disj:
        return std::any_of(n->kids.begin(), n->kids.end(), [](const auto& k) { return at_end(k); });
    case sc::Op::next: return at_end(n->kids[0]);
    case sc::Op::until: return at_end(n->kids[1]);
    default: return false;
    }
}

} // namespace

bool sat(const sc::NodePtr& n, const sc::Word& w, std::size_t i)
{
    if (i >= w.size())
        return at_end(n);
    switch (n->op) {
    case sc::Op::top: return true;
    case sc::Op::bottom: return false;
    case sc::Op::atom: return (w[i] >> n->prop) & 1U;
    case sc::Op::neg_atom: return !((w[i] >> n->prop) & 1U);
    case sc::Op::conj:
        for (const auto& k : n->kids)
            if (!sat(k, w, i))
                return false;
        return true;
    case sc::Op::disj:
        for (const auto& k : n->kids)
            if (sat(k, w, i))
                return true;
        return false;
    case sc::Op::next: return sat(n->kids[0], w, i + 1);
    case sc::Op::until:
        for (std::size_t j = i; j <= w.size(); ++j) {
            if (sat(n->kids[1], w, j))
                return true;
            if (j == w.size() || !sat(n->kids[0], w, j))
                return false;
        }
        return false;
    }
    return false;
}

std::string random_formula(std::mt19937_64& rng, int depth, const std::vector<std::string>& ap)
{
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    if (depth == 0 || pick(4) == 0) {
        switch (pick(6)) {
        case 0: return "true";
        case 1: return "false";
        case 2:
        case 3: return "!" + ap[pick(static_cast<int>(ap.size()))];
        default: return ap[pick(static_cast<int>(ap.size()))];
        }
    }
    switch (pick(5)) {
    case 0: return "(" + random_formula(rng, depth - 1, ap) + " & " + random_formula(rng, depth - 1, ap) + ")";
    case 1: return "(" + random_formula(rng, depth - 1, ap) + " | " + random_formula(rng, depth - 1, ap) + ")";
    case 2: return "X (" + random_formula(rng, depth - 1, ap) + ")";
    case 3: return "F (" + random_formula(rng, depth - 1, ap) + ")";
    default: return "(" + random_formula(rng, depth - 1, ap) + " U " + random_formula(rng, depth - 1, ap) + ")";
    }
}

void for_each_word(std::uint32_t symbols, std::size_t max_len, const std::function<void(const sc::Word&)>& fn)
{
    sc::Word w;
    std::function<void()> rec = [&] {
        fn(w);
        if (w.size() == max_len)
            return;
        for (sc::Symbol s = 0; s < symbols; ++s) {
            w.push_back(s);
            rec();
            w.pop_back();
        }
    };
    rec();
}

sc::Dfa hand_dfa_both_flags()
{
    // Propositions a (bit 0) and b (bit 1).
    sc::Dfa d({"a", "b"}, 4, 1);
    d.set_accepting(0, true);
    for (sc::Symbol s = 0; s < 4; ++s) {
        const bool a = s & 1U, b = s & 2U;
        d.set_step(0, s, 0);
        d.set_step(1, s, a && !b ? 2 : b && !a ? 3 : !a && !b ? 1 : 0);
        d.set_step(2, s, b ? 0 : 2);
        d.set_step(3, s, a ? 0 : 3);
    }
    return d;
}

sc::Dfa hand_dfa_ordered_flags()
{
    sc::Dfa d({"a", "b", "c"}, 4, 1);
    d.set_accepting(0, true);
    for (sc::Symbol s = 0; s < 8; ++s) {
        const bool a = s & 1U, b = s & 2U, c = s & 4U;
        d.set_step(0, s, 0);
        d.set_step(3, s, 3);
        d.set_step(1, s, !a && !b && !c ? 1 : a && !b && !c ? 2 : 3);
        d.set_step(2, s, !b && !c ? 2 : b ? 0 : 3);
    }
    return d;
}

bool one_flag_at_most(sc::Symbol s) { return (s & 3U) != 3U; }

std::vector<std::string> scltl_corpus()
{
    const std::vector<std::string> ap{"a", "b", "c"};
    std::vector<std::string> corpus{"(!b & !c) U a & !c U b", "F a & F b", "true", "F a", "a U b", "X a"};
    std::mt19937_64 rng(131);
    while (corpus.size() < 56) {
        const std::size_t k = 1 + rng() % 3;
        corpus.push_back(random_formula(rng, 4, std::vector<std::string>(ap.begin(), ap.begin() + k)));
    }
    return corpus;
}

} // namespace testing
