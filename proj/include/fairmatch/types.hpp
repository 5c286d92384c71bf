#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace fairmatch {

/// The two sides of the market. Agents only hold values over the other side.
enum class Side { N, M };

inline Side other_side(Side s) { return s == Side::N ? Side::M : Side::N; }
inline const char* side_name(Side s) { return s == Side::N ? "N" : "M"; }

/// Identifies one agent: a side plus an index within that side.
/// Indices are dense, 0-based, and the two sides are disjoint namespaces.
struct AgentId {
    Side side;
    int index;

    friend bool operator==(const AgentId&, const AgentId&) = default;
    friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

inline AgentId agent_n(int index) { return {Side::N, index}; }
inline AgentId agent_m(int index) { return {Side::M, index}; }

inline std::string to_string(const AgentId& a) {
    return std::string(side_name(a.side)) + std::to_string(a.index);
}

/// Market size: |N| = n, |M| = m.
struct MarketShape {
    int n = 0;
    int m = 0;

    bool square() const { return n == m; }
    int side_size(Side s) const { return s == Side::N ? n : m; }
    bool contains(const AgentId& a) const {
        return a.index >= 0 && a.index < side_size(a.side);
    }

    friend bool operator==(const MarketShape&, const MarketShape&) = default;
};

/// Misuse of an API contract (e.g. a cross-side ledger query).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An oracle does not satisfy a capability an engine or operation requires.
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A history update violates consistency (timestep gap, duplicate agent, ...).
struct HistoryError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A size guard on an exhaustive operation was exceeded.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed instance or trace content.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fairmatch
