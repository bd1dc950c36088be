#include "seqtest/stream_io.hpp"

#include <charconv>
#include <string>

#include "seqtest/errors.hpp"

namespace seqtest {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view token = trim(text.substr(0, comma));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw StreamError("malformed number '" + std::string(token) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Flip parse_flip(std::string_view line) {
  line = trim(line);
  if (line == "H" || line == "h") return Flip::heads;
  if (line == "T" || line == "t") return Flip::tails;
  throw StreamError("expected H or T, got '" + std::string(line) + "'");
}

PairLine parse_pair_line(std::string_view line) {
  line = trim(line);
  const auto bar = line.find('|');
  if (bar == std::string_view::npos || line.find('|', bar + 1) != std::string_view::npos) {
    throw StreamError("expected 'x1,...,xd|y1,...,yd', got '" + std::string(line) + "'");
  }
  PairLine out{parse_vector(line.substr(0, bar)), parse_vector(line.substr(bar + 1))};
  if (out.x.size() != out.y.size()) {
    throw StreamError("x and y have different dimensions in '" + std::string(line) + "'");
  }
  return out;
}

LineIncrementReader::LineIncrementReader(std::istream& in, IncrementFamily family, double bound,
                                         KernelSpec kernel)
    : in_(in), family_(family), bound_(bound), kernel_(kernel) {
  if (bound < 0.0) throw DomainError("bound must be nonnegative");
}

std::optional<std::string> LineIncrementReader::next_line() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!trim(line).empty()) return line;
  }
  return std::nullopt;
}

std::optional<PairLine> LineIncrementReader::next_pair(bool first_of_block) {
  std::optional<std::string> line = next_line();
  if (!line) {
    if (first_of_block) return std::nullopt;
    throw StreamError("stream ended inside a block at line " + std::to_string(line_number_));
  }
  PairLine pair;
  try {
    pair = parse_pair_line(*line);
  } catch (const StreamError& e) {
    throw StreamError("line " + std::to_string(line_number_) + ": " + e.what());
  }
  if (dimension_ == 0) dimension_ = pair.x.size();
  if (pair.x.size() != dimension_) {
    throw StreamError("line " + std::to_string(line_number_) + ": expected dimension " +
                      std::to_string(dimension_));
  }
  return pair;
}

Observation LineIncrementReader::prepare(std::vector<double> raw) const {
  if (bound_ > 0.0 && family_ != IncrementFamily::dcov) return rescale(raw, bound_);
  return Observation(std::move(raw));
}

std::optional<Increment> LineIncrementReader::operator()() {
  switch (family_) {
    case IncrementFamily::coin: {
      std::optional<std::string> line = next_line();
      if (!line) return std::nullopt;
      try {
        return coin_increment(parse_flip(*line));
      } catch (const StreamError& e) {
        throw StreamError("line " + std::to_string(line_number_) + ": " + e.what());
      }
    }
    case IncrementFamily::mean:
    case IncrementFamily::mmd: {
      std::optional<PairLine> first = next_pair(true);
      if (!first) return std::nullopt;
      PairLine second = *next_pair(false);
      const Observation x1 = prepare(std::move(first->x));
      const Observation y1 = prepare(std::move(first->y));
      const Observation x2 = prepare(std::move(second.x));
      const Observation y2 = prepare(std::move(second.y));
      if (family_ == IncrementFamily::mean) return mean_increment(x1, y1, x2, y2);
      return mmd_increment(kernel_, x1, x2, y1, y2);
    }
    case IncrementFamily::dcov: {
      PairBlock block;
      for (int j = 0; j < 4; ++j) {
        std::optional<PairLine> pair = next_pair(j == 0);
        if (!pair) return std::nullopt;
        block.x.emplace_back(std::move(pair->x));
        block.y.emplace_back(std::move(pair->y));
      }
      if (bound_ > 0.0) return bounded_dcov_increment(block, bound_);
      return dcov_increment(block);
    }
  }
  return std::nullopt;
}

}  // namespace seqtest
