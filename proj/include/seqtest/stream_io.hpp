#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/increments.hpp"

namespace seqtest {

// One "x1,...,xd|y1,...,yd" line.
struct PairLine {
  std::vector<double> x;
  std::vector<double> y;
};

// All parsers throw StreamError on malformed input.
Flip parse_flip(std::string_view line);
PairLine parse_pair_line(std::string_view line);

// Reads increment blocks from a text stream, one observation per line:
// coin uses "H"/"T", mean and mmd use two pair lines per block, dcov four.
// Blank lines are skipped. Raw vectors are rescaled by `bound` when it is
// positive; for dcov the bound is a distance bound instead.
class LineIncrementReader {
 public:
  LineIncrementReader(std::istream& in, IncrementFamily family, double bound = 0.0,
                      KernelSpec kernel = KernelSpec::linear());

  std::optional<Increment> operator()();

  std::size_t lines_read() const { return line_number_; }

 private:
  std::optional<std::string> next_line();
  std::optional<PairLine> next_pair(bool first_of_block);
  Observation prepare(std::vector<double> raw) const;

  std::istream& in_;
  IncrementFamily family_;
  double bound_;
  KernelSpec kernel_;
  std::size_t line_number_ = 0;
  std::size_t dimension_ = 0;
};

}  // namespace seqtest
