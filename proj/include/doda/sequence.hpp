#pragma once

#include "doda/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace doda {

/// An immutable, finite list of interactions over nodes [0, n) with the sink
/// at 0. A sequence is either complete (nothing happens after its last
/// element) or a prefix cut from an unbounded source at some horizon; the
/// distinction matters when deciding whether "never within the sequence"
/// really means never.
class InteractionSequence {
public:
  enum class Extent { complete, prefix };

  InteractionSequence(NodeCount n, std::vector<Interaction> interactions,
                      Extent extent = Extent::complete);

  NodeCount node_count() const { return n_; }
  std::size_t size() const { return items_.size(); }
  Time length() const { return static_cast<Time>(items_.size()); }
  bool empty() const { return items_.empty(); }
  Extent extent() const { return extent_; }
  bool is_prefix() const { return extent_ == Extent::prefix; }

  const Interaction &operator[](Time t) const {
    return items_[static_cast<std::size_t>(t)];
  }
  const Interaction &at(Time t) const;

  std::span<const Interaction> interactions() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// First `length` interactions. Truncating a sequence makes it a prefix.
  InteractionSequence prefix(std::size_t length) const;

  /// Interactions [first, last] re-indexed from 0.
  InteractionSequence window(Time first, Time last) const;

  /// Same interactions in reverse time order.
  InteractionSequence reversed() const;

  InteractionSequence concatenated(const InteractionSequence &tail) const;

  friend bool operator==(const InteractionSequence &,
                         const InteractionSequence &) = default;

private:
  NodeCount n_;
  std::vector<Interaction> items_;
  Extent extent_;
};

/// Parses the text format:
///
///     n <N> sink 0
///     <u> <v>
///     ...
///
/// One interaction per line, in time order, first line is index 0. Blank lines
/// are ignored. Throws ParseError naming the offending line.
InteractionSequence parse_sequence(std::string_view text);

/// Inverse of parse_sequence; pairs are written smaller id first.
std::string format_sequence(const InteractionSequence &sequence);

InteractionSequence read_sequence_file(const std::filesystem::path &path);
void write_sequence_file(const std::filesystem::path &path,
                         const InteractionSequence &sequence);

} // namespace doda
