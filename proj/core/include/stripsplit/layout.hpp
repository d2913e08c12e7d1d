#ifndef STRIPSPLIT_LAYOUT_HPP
#define STRIPSPLIT_LAYOUT_HPP

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "stripsplit/design.hpp"

namespace stripsplit {

// One data row: labels for the block and the three factor levels, plus the
// measured response.
struct Observation {
  std::string block;
  std::string a_level;
  std::string b_level;
  std::string c_level;
  double response;
};

enum class Axis { Block = 0, A = 1, B = 2, C = 3 };

// A subset of the four layout axes, used to say which indices a marginal
// mean keeps.
struct AxisSet {
  unsigned bits = 0;

  static AxisSet of(std::initializer_list<Axis> axes) {
    AxisSet s;
    for (Axis ax : axes) s.bits |= 1u << static_cast<int>(ax);
    return s;
  }
  static AxisSet none() { return {}; }
  static AxisSet all() { return {0xF}; }
  bool contains(Axis ax) const { return (bits >> static_cast<int>(ax)) & 1u; }
};

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A malformed row: wrong field count, unparseable or non-finite response, or
// a bad header. line is 1-based within the stream.
struct ParseError : IngestError {
  ParseError(int line_, const std::string& what);
  int line;
};

// The same (block, A, B, C) combination appeared twice. Indices are 0-based
// positions in first-appearance label order.
struct DuplicateCell : IngestError {
  explicit DuplicateCell(const std::array<int, 4>& cell_);
  std::array<int, 4> cell;
};

// The label cross-product is incomplete; cell identifies one missing
// combination.
struct MissingCell : IngestError {
  explicit MissingCell(const std::array<int, 4>& cell_);
  std::array<int, 4> cell;
};

struct TooFewLevels : IngestError {
  explicit TooFewLevels(Axis axis_, int count_);
  Axis axis;
  int count;
};

// A complete balanced dataset: dims, the label list of each axis in
// first-appearance order, and a dense value array indexed (block, A, B, C)
// row-major. Immutable once built.
class BalancedLayout {
 public:
  // Throws std::invalid_argument if label counts disagree with dims, values
  // has the wrong length, or any value is not finite.
  BalancedLayout(DesignDims dims, std::array<std::vector<std::string>, 4> labels,
                 std::vector<double> values);

  const DesignDims& dims() const { return dims_; }
  const std::vector<std::string>& labels(Axis ax) const {
    return labels_[static_cast<int>(ax)];
  }
  const std::vector<double>& values() const { return values_; }

  double at(int h, int i, int j, int k) const {
    return values_[index(h, i, j, k)];
  }
  int index(int h, int i, int j, int k) const {
    return ((h * dims_.a + i) * dims_.b + j) * dims_.c + k;
  }

 private:
  DesignDims dims_;
  std::array<std::vector<std::string>, 4> labels_;
  std::vector<double> values_;
};

// Reads comma-separated text with header "block,A,B,C,y" (case-insensitive)
// into a layout. Labels keep first-appearance order so that published tables
// come out in field order. Throws ParseError, DuplicateCell, MissingCell or
// TooFewLevels.
BalancedLayout ingest_csv(std::istream& in);
BalancedLayout ingest_csv_file(const std::string& path);

// Writes the layout back in the exact format ingest_csv reads, one row per
// cell in (block, A, B, C) row-major order. Responses are printed as
// shortest round-trip decimals, so write/ingest/write is byte-stable.
void write_csv(const BalancedLayout& layout, std::ostream& out);
std::string to_csv(const BalancedLayout& layout);

// Mean of the values over all axes not in `kept`, at the kept positions
// given by `at` (entries of non-kept axes are ignored). An empty set yields
// the grand mean; the full set returns the cell value. Throws
// std::out_of_range if a kept index is outside the layout.
double marginal_mean(const BalancedLayout& layout, AxisSet kept,
                     const std::array<int, 4>& at);

}  // namespace stripsplit

#endif
