#include "stripsplit/sums_of_squares.hpp"

#include <stdexcept>
#include <string>

namespace stripsplit {

namespace {

// Axis bit per layout axis, in (block, A, B, C) order.
constexpr unsigned kH = 1u << 0;
constexpr unsigned kI = 1u << 1;
constexpr unsigned kJ = 1u << 2;
constexpr unsigned kK = 1u << 3;

std::array<int, 4> axis_sizes(const DesignDims& d) {
  return {d.r, d.a, d.b, d.c};
}

// The classical sum-of-squares formula of each source, as the axes whose
// marginal means enter with alternating signs (own) plus the axes that are
// always kept (base). The deviation at one point of the (own|base) grid is
//   sum over T subset of own of (-1)^(|own|-|T|) * mean over axes (T|base),
// and the SS is that squared, summed over the grid, times the count of
// cells collapsed per point. The residual keeps A and B and alternates over
// block and C, which reproduces y - mean_hij. - mean_.ijk + mean_.ij..
struct SsShape {
  unsigned own;
  unsigned base;
};

SsShape ss_shape(SourceId source) {
  switch (source) {
    case SourceId::R:   return {kH, 0};
    case SourceId::A:   return {kI, 0};
    case SourceId::eA:  return {kH | kI, 0};
    case SourceId::B:   return {kJ, 0};
    case SourceId::eB:  return {kH | kJ, 0};
    case SourceId::AB:  return {kI | kJ, 0};
    case SourceId::eAB: return {kH | kI | kJ, 0};
    case SourceId::C:   return {kK, 0};
    case SourceId::AC:  return {kI | kK, 0};
    case SourceId::BC:  return {kJ | kK, 0};
    case SourceId::ABC: return {kI | kJ | kK, 0};
    case SourceId::eT:  return {kH | kK, kI | kJ};
  }
  throw std::invalid_argument("unknown SourceId");
}

// Flat index of the point restricted to the masked axes, row-major in axis
// order.
int project_index(const std::array<int, 4>& point,
                  const std::array<int, 4>& sizes, unsigned mask) {
  int idx = 0;
  for (int ax = 0; ax < 4; ++ax) {
    if (mask & (1u << ax)) idx = idx * sizes[ax] + point[ax];
  }
  return idx;
}

int masked_cells(const std::array<int, 4>& sizes, unsigned mask) {
  int n = 1;
  for (int ax = 0; ax < 4; ++ax) {
    if (mask & (1u << ax)) n *= sizes[ax];
  }
  return n;
}

// Dense marginal means over the masked axes (grand mean for mask 0).
std::vector<double> mean_over(const BalancedLayout& layout, unsigned mask) {
  const std::array<int, 4> sizes = axis_sizes(layout.dims());
  std::vector<double> sums(masked_cells(sizes, mask), 0.0);
  std::array<int, 4> p{};
  for (p[0] = 0; p[0] < sizes[0]; ++p[0])
    for (p[1] = 0; p[1] < sizes[1]; ++p[1])
      for (p[2] = 0; p[2] < sizes[2]; ++p[2])
        for (p[3] = 0; p[3] < sizes[3]; ++p[3])
          sums[project_index(p, sizes, mask)] +=
              layout.at(p[0], p[1], p[2], p[3]);
  const double collapsed =
      static_cast<double>(layout.dims().cells() / masked_cells(sizes, mask));
  for (double& s : sums) s /= collapsed;
  return sums;
}

int popcount(unsigned bits) {
  int n = 0;
  for (; bits; bits &= bits - 1) ++n;
  return n;
}

}  // namespace

ProjectorSpec projector(const DesignDims&, SourceId source) {
  using Op = FactorOp;
  constexpr Op C = Op::Center, A = Op::Average, I = Op::Identity;
  switch (source) {
    case SourceId::R:   return {{C, A, A, A}};
    case SourceId::A:   return {{A, C, A, A}};
    case SourceId::eA:  return {{C, C, A, A}};
    case SourceId::B:   return {{A, A, C, A}};
    case SourceId::eB:  return {{C, A, C, A}};
    case SourceId::AB:  return {{A, C, C, A}};
    case SourceId::eAB: return {{C, C, C, A}};
    case SourceId::C:   return {{A, A, A, C}};
    case SourceId::AC:  return {{A, C, A, C}};
    case SourceId::BC:  return {{A, A, C, C}};
    case SourceId::ABC: return {{A, C, C, C}};
    // The residual centers over blocks and subplots while keeping the strip
    // axes whole; its trace is ab(c-1)(r-1), the residual df.
    case SourceId::eT:  return {{C, I, I, C}};
  }
  throw std::invalid_argument("unknown SourceId");
}

int projector_trace(const DesignDims& dims, const ProjectorSpec& spec) {
  const std::array<int, 4> sizes = axis_sizes(dims);
  int trace = 1;
  for (int ax = 0; ax < 4; ++ax) {
    switch (spec.ops[ax]) {
      case FactorOp::Center:   trace *= sizes[ax] - 1; break;
      case FactorOp::Average:  break;  // rank 1
      case FactorOp::Identity: trace *= sizes[ax]; break;
    }
  }
  return trace;
}

double ss_direct(const BalancedLayout& layout, SourceId source) {
  const SsShape shape = ss_shape(source);
  const unsigned grid = shape.own | shape.base;
  const std::array<int, 4> sizes = axis_sizes(layout.dims());

  // Marginal means for every sign pattern: one array per subset of own.
  std::vector<unsigned> subsets;
  std::vector<int> signs;
  std::vector<std::vector<double>> means;
  const int own_count = popcount(shape.own);
  for (unsigned t = shape.own;; t = (t - 1) & shape.own) {
    subsets.push_back(t | shape.base);
    signs.push_back((own_count - popcount(t)) % 2 == 0 ? 1 : -1);
    means.push_back(mean_over(layout, t | shape.base));
    if (t == 0) break;
  }

  std::array<int, 4> hi{};
  for (int ax = 0; ax < 4; ++ax) {
    hi[ax] = (grid & (1u << ax)) ? sizes[ax] : 1;
  }
  double ss = 0.0;
  std::array<int, 4> p{};
  for (p[0] = 0; p[0] < hi[0]; ++p[0])
    for (p[1] = 0; p[1] < hi[1]; ++p[1])
      for (p[2] = 0; p[2] < hi[2]; ++p[2])
        for (p[3] = 0; p[3] < hi[3]; ++p[3]) {
          double dev = 0.0;
          for (std::size_t t = 0; t < subsets.size(); ++t) {
            dev += signs[t] * means[t][project_index(p, sizes, subsets[t])];
          }
          ss += dev * dev;
        }
  // Each grid point stands for the cells collapsed by the mean.
  const int multiplier = layout.dims().cells() / masked_cells(sizes, grid);
  return multiplier * ss;
}

double ss_kronecker(const BalancedLayout& layout, SourceId source) {
  const ProjectorSpec spec = projector(layout.dims(), source);
  const std::array<int, 4> sizes = axis_sizes(layout.dims());
  std::vector<double> data = layout.values();

  // Apply the one-dimensional operator of each axis in place. Strides of
  // axis ax in the row-major array: inner = product of later sizes.
  for (int ax = 0; ax < 4; ++ax) {
    if (spec.ops[ax] == FactorOp::Identity) continue;
    int inner = 1;
    for (int later = ax + 1; later < 4; ++later) inner *= sizes[later];
    const int n = sizes[ax];
    const int outer = static_cast<int>(data.size()) / (n * inner);
    for (int o = 0; o < outer; ++o) {
      for (int in = 0; in < inner; ++in) {
        const int start = o * n * inner + in;
        double total = 0.0;
        for (int v = 0; v < n; ++v) total += data[start + v * inner];
        const double mean = total / n;
        for (int v = 0; v < n; ++v) {
          double& cell = data[start + v * inner];
          cell = spec.ops[ax] == FactorOp::Center ? cell - mean : mean;
        }
      }
    }
  }

  // The assembled factor is an orthogonal projector M, so y'My = ||My||^2;
  // summing squares keeps the result nonnegative in floating point.
  double ss = 0.0;
  for (double v : data) ss += v * v;
  return ss;
}

const AnovaRow& AnovaTable::row(SourceId source) const {
  for (const AnovaRow& r : rows) {
    if (r.source == source) return r;
  }
  throw std::out_of_range("table has no row for source " +
                          std::string(source_name(source)));
}

bool AnovaTable::has(SourceId source) const {
  for (const AnovaRow& r : rows) {
    if (r.source == source) return true;
  }
  return false;
}

double AnovaTable::total_ss() const {
  double total = 0.0;
  for (const AnovaRow& r : rows) total += r.ss;
  return total;
}

int AnovaTable::total_df() const {
  int total = 0;
  for (const AnovaRow& r : rows) total += r.df;
  return total;
}

AnovaTable anova_table(const BalancedLayout& layout) {
  AnovaTable table{layout.dims(), {}};
  table.rows.reserve(kSourceCount);
  for (SourceId source : all_sources()) {
    const int df = degrees_of_freedom(layout.dims(), source);
    const double ss = ss_direct(layout, source);
    table.rows.push_back({source, df, ss, ss / df});
  }
  return table;
}

}  // namespace stripsplit
