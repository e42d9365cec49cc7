#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace doda {

using NodeId = std::uint32_t;
using NodeCount = std::uint32_t;

/// Position of an interaction in its sequence, which is also its time of
/// occurrence. Transmissions, opt(t) and durations all use this index.
using Time = std::int64_t;

/// "Never": no termination, no future sink meeting, no feasible convergecast.
/// Compares greater than every finite time.
inline constexpr Time kNever = std::numeric_limits<Time>::max();

inline constexpr NodeId kSink = 0;
inline constexpr NodeCount kMinNodes = 3;

inline bool is_sink(NodeId u) { return u == kSink; }

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed sequence text. Carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// A caller broke an operation's precondition (bad receiver, self-loop...).
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// The requested run cannot be set up: missing knowledge, non-tree graph,
/// horizon shorter than tau, oversized brute-force instance.
class ConfigurationError : public Error {
public:
  using Error::Error;
};

/// Unordered pair of distinct nodes, stored with the smaller id first.
class Interaction {
public:
  Interaction(NodeId u, NodeId v) : a_(u < v ? u : v), b_(u < v ? v : u) {
    if (u == v)
      throw ContractViolation("self-loop interaction {" + std::to_string(u) +
                              "," + std::to_string(v) + "}");
  }

  NodeId a() const { return a_; }
  NodeId b() const { return b_; }

  bool involves(NodeId u) const { return u == a_ || u == b_; }
  NodeId other(NodeId u) const { return u == a_ ? b_ : a_; }
  bool touches_sink() const { return a_ == kSink; }

  auto operator<=>(const Interaction &) const = default;

private:
  NodeId a_;
  NodeId b_;
};

} // namespace doda
