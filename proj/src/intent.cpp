#include "mergesim/intent.hpp"

#include <stdexcept>

namespace mergesim {

std::vector<Action> Intent::committed_actions() const {
    std::vector<Action> out;
    for (int i = 0; i < kNumActions; ++i)
        if (bits[i]) out.push_back(static_cast<Action>(i));
    return out;
}

int Intent::count() const {
    int n = 0;
    for (bool b : bits) n += b ? 1 : 0;
    return n;
}

void Intent::validate() const {
    if (!bits[static_cast<int>(Action::IDLE)])
        throw std::invalid_argument("Intent: IDLE must always be committed");
    if (bits[static_cast<int>(Action::LANE_RIGHT)])
        throw std::invalid_argument(
            "Intent: LANE_RIGHT is infeasible for a sender on the rightmost lane");
    if (count() > 2)
        throw std::invalid_argument("Intent: more than one non-IDLE action is not in the catalog");
}

std::uint8_t Intent::to_byte() const {
    std::uint8_t b = 0;
    for (int i = 0; i < kNumActions; ++i)
        if (bits[i]) b |= static_cast<std::uint8_t>(1u << i);
    return b;
}

Intent Intent::from_byte(std::uint8_t byte) {
    Intent i;
    for (int k = 0; k < kNumActions; ++k) i.bits[k] = (byte >> k) & 1u;
    return i;
}

std::string Intent::name() const {
    for (const Intent& c : IntentCatalog::all())
        if (*this == c) {
            if (c == IntentCatalog::idle()) return "IDLE";
            if (c == IntentCatalog::lane_left()) return "LANE_LEFT";
            if (c == IntentCatalog::faster()) return "FASTER";
            return "SLOWER";
        }
    return "CUSTOM";
}

Intent intent_from_actions(const std::vector<Action>& actions) {
    Intent i;
    i.bits[static_cast<int>(Action::IDLE)] = true;
    for (Action a : actions) i.bits[static_cast<int>(a)] = true;
    i.validate();
    return i;
}

Intent IntentCatalog::idle() { return intent_from_actions({}); }
Intent IntentCatalog::lane_left() { return intent_from_actions({Action::LANE_LEFT}); }
Intent IntentCatalog::faster() { return intent_from_actions({Action::FASTER}); }
Intent IntentCatalog::slower() { return intent_from_actions({Action::SLOWER}); }

std::array<Intent, 4> IntentCatalog::all() {
    return {idle(), lane_left(), faster(), slower()};
}

Intent IntentCatalog::by_name(const std::string& name) {
    if (name == "IDLE") return idle();
    if (name == "LANE_LEFT") return lane_left();
    if (name == "FASTER") return faster();
    if (name == "SLOWER") return slower();
    throw std::invalid_argument("IntentCatalog: unknown intent '" + name + "'");
}

std::array<double, 5> encode_channel(const Intent& intent, bool sharing_on) {
    std::array<double, 5> z{};
    if (sharing_on)
        for (int i = 0; i < kNumActions; ++i) z[i] = intent.bits[i] ? 1.0 : 0.0;
    return z;
}

} // namespace mergesim
