#include "doda/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace doda {

InteractionSequence::InteractionSequence(NodeCount n,
                                         std::vector<Interaction> interactions,
                                         Extent extent)
    : n_(n), items_(std::move(interactions)), extent_(extent) {
  if (n_ < kMinNodes)
    throw ContractViolation("a dynamic graph needs at least 3 nodes, got " +
                            std::to_string(n_));
  for (const auto &i : items_)
    if (i.b() >= n_)
      throw ContractViolation("node id " + std::to_string(i.b()) +
                              " out of range for n = " + std::to_string(n_));
}

const Interaction &InteractionSequence::at(Time t) const {
  if (t < 0 || t >= length())
    throw std::out_of_range("interaction index " + std::to_string(t) +
                            " outside [0, " + std::to_string(size()) + ")");
  return (*this)[t];
}

InteractionSequence InteractionSequence::prefix(std::size_t length) const {
  if (length >= items_.size())
    return *this;
  return InteractionSequence(
      n_, std::vector<Interaction>(items_.begin(), items_.begin() + length),
      Extent::prefix);
}

InteractionSequence InteractionSequence::window(Time first, Time last) const {
  if (first < 0 || last >= length() || first > last + 1)
    throw std::out_of_range("window [" + std::to_string(first) + ", " +
                            std::to_string(last) + "] outside sequence");
  return InteractionSequence(
      n_, std::vector<Interaction>(items_.begin() + first,
                                   items_.begin() + last + 1));
}

InteractionSequence InteractionSequence::reversed() const {
  return InteractionSequence(
      n_, std::vector<Interaction>(items_.rbegin(), items_.rend()), extent_);
}

InteractionSequence
InteractionSequence::concatenated(const InteractionSequence &tail) const {
  if (tail.n_ != n_)
    throw ContractViolation("cannot concatenate sequences over different "
                            "node sets");
  auto items = items_;
  items.insert(items.end(), tail.items_.begin(), tail.items_.end());
  return InteractionSequence(n_, std::move(items), tail.extent_);
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i)
      words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

std::uint64_t parse_decimal(std::string_view word, std::size_t line_no,
                            const char *what) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || end != word.data() + word.size())
    throw ParseError(line_no, std::string("expected decimal ") + what +
                                  ", got '" + std::string(word) + "'");
  return value;
}

} // namespace

InteractionSequence parse_sequence(std::string_view text) {
  std::size_t line_no = 0;
  std::optional<NodeCount> n;
  std::vector<Interaction> items;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto words = split_words(line);
    if (words.empty())
      continue;

    if (!n) {
      if (words.size() != 4 || words[0] != "n" || words[2] != "sink")
        throw ParseError(line_no, "expected header 'n <N> sink 0'");
      auto count = parse_decimal(words[1], line_no, "node count");
      if (count < kMinNodes || count > std::numeric_limits<NodeCount>::max())
        throw ParseError(line_no, "node count must be at least 3");
      if (parse_decimal(words[3], line_no, "sink id") != kSink)
        throw ParseError(line_no, "sink id must be 0");
      n = static_cast<NodeCount>(count);
      continue;
    }

    if (words.size() != 2)
      throw ParseError(line_no, "expected an interaction 'u v'");
    auto u = parse_decimal(words[0], line_no, "node id");
    auto v = parse_decimal(words[1], line_no, "node id");
    if (u >= *n || v >= *n)
      throw ParseError(line_no, "node id out of range [0, " +
                                    std::to_string(*n) + ")");
    if (u == v)
      throw ParseError(line_no, "self-loop interaction");
    items.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }

  if (!n)
    throw ParseError(line_no == 0 ? 1 : line_no, "missing header line");
  return InteractionSequence(*n, std::move(items));
}

std::string format_sequence(const InteractionSequence &sequence) {
  std::string out = "n " + std::to_string(sequence.node_count()) + " sink 0\n";
  for (const auto &i : sequence) {
    out += std::to_string(i.a());
    out += ' ';
    out += std::to_string(i.b());
    out += '\n';
  }
  return out;
}

InteractionSequence read_sequence_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open sequence file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sequence(buffer.str());
}

void write_sequence_file(const std::filesystem::path &path,
                         const InteractionSequence &sequence) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write sequence file " + path.string());
  out << format_sequence(sequence);
  if (!out)
    throw Error("failed writing " + path.string());
}

} // namespace doda
