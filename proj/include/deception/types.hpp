#pragma once

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace deception {

enum class Player : std::uint8_t { p1, p2 };

constexpr Player opponent(Player p) { return p == Player::p1 ? Player::p2 : Player::p1; }
std::string_view to_string(Player p);

// Dense identifiers. Each is only meaningful relative to the container that
// issued it (an arena, an inference graph).
struct StateId {
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(StateId, StateId) = default;
};

struct ActionId {
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

struct VertexId {
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

// A subset of a dense state universe [0, universe()).
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : bits_(universe) {}

    static StateSet full(std::size_t universe)
    {
        StateSet s(universe);
        s.bits_.set();
        return s;
    }

    std::size_t universe() const { return bits_.size(); }
    std::size_t size() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    bool contains(StateId s) const { return s.index < bits_.size() && bits_.test(s.index); }
    void insert(StateId s) { bits_.set(s.index); }
    void erase(StateId s) { bits_.reset(s.index); }

    bool is_subset_of(const StateSet& other) const { return bits_.is_subset_of(other.bits_); }
    bool is_proper_subset_of(const StateSet& other) const
    {
        return bits_.is_proper_subset_of(other.bits_);
    }

    StateSet& operator|=(const StateSet& o) { bits_ |= o.bits_; return *this; }
    StateSet& operator&=(const StateSet& o) { bits_ &= o.bits_; return *this; }
    StateSet& operator-=(const StateSet& o) { bits_ -= o.bits_; return *this; }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

    StateSet complement() const
    {
        StateSet c = *this;
        c.bits_.flip();
        return c;
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;

    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i))
            fn(StateId{static_cast<std::uint32_t>(i)});
    }

    std::vector<StateId> to_vector() const
    {
        std::vector<StateId> out;
        out.reserve(size());
        for_each([&](StateId s) { out.push_back(s); });
        return out;
    }

private:
    using Bits = boost::dynamic_bitset<std::uint64_t>;
    Bits bits_;
};

} // namespace deception

template <>
struct std::hash<deception::StateId> {
    std::size_t operator()(deception::StateId s) const noexcept { return s.index; }
};

template <>
struct std::hash<deception::ActionId> {
    std::size_t operator()(deception::ActionId a) const noexcept { return a.index; }
};
