#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mergesim/dynamics.hpp"

namespace mergesim {

// Indicator vector over the action set, ordered [IDLE, LANE_LEFT, LANE_RIGHT,
// FASTER, SLOWER]. An intent is the set of actions the sender commits to
// choosing from for the whole episode; IDLE is always committed. The type can
// hold any of the 32 subsets, but the shipped catalog restricts to IDLE plus
// at most one other action, excluding LANE_RIGHT.
struct Intent {
    std::array<bool, 5> bits{};

    bool committed(Action a) const { return bits[static_cast<int>(a)]; }
    std::vector<Action> committed_actions() const;
    int count() const;

    // Catalog validity: bits[IDLE] set, at most one non-IDLE bit, no LANE_RIGHT.
    void validate() const;

    // One byte, bit k = bits[k], little-endian bit order.
    std::uint8_t to_byte() const;
    static Intent from_byte(std::uint8_t byte);

    std::string name() const; // catalog name, or "CUSTOM" outside the catalog

    bool operator==(const Intent&) const = default;
};

// Builds the indicator vector for actions + {IDLE} and validates it against
// the catalog rules.
Intent intent_from_actions(const std::vector<Action>& actions);

struct IntentCatalog {
    static Intent idle();
    static Intent lane_left();
    static Intent faster();
    static Intent slower();
    static std::array<Intent, 4> all();
    static Intent by_name(const std::string& name);
};

// Auxiliary communication channel seen by the receiver: the intent bits when
// sharing is on, all zeros when it is off. The all-zeros vector is not a
// valid intent, so "nothing shared" is unambiguous.
std::array<double, 5> encode_channel(const Intent& intent, bool sharing_on);

} // namespace mergesim
