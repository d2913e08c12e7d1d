#include "stripsplit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "stripsplit/f_tests.hpp"
#include "stripsplit/sums_of_squares.hpp"

namespace stripsplit {

namespace {

constexpr unsigned kH = 1u << 0;
constexpr unsigned kI = 1u << 1;
constexpr unsigned kJ = 1u << 2;
constexpr unsigned kK = 1u << 3;

// The axes a source's term is indexed by: one R_h per block, one AB_ij per
// (i, j) shared across blocks and subplots, one eAB_hij shared across
// subplots, and so on. These index sets also define the covariance
// contribution: identity on own axes, all-ones on the rest.
unsigned own_axes(SourceId source) {
  switch (source) {
    case SourceId::R:   return kH;
    case SourceId::A:   return kI;
    case SourceId::eA:  return kH | kI;
    case SourceId::B:   return kJ;
    case SourceId::eB:  return kH | kJ;
    case SourceId::AB:  return kI | kJ;
    case SourceId::eAB: return kH | kI | kJ;
    case SourceId::C:   return kK;
    case SourceId::AC:  return kI | kK;
    case SourceId::BC:  return kJ | kK;
    case SourceId::ABC: return kI | kJ | kK;
    case SourceId::eT:  return kH | kI | kJ | kK;
  }
  throw std::invalid_argument("unknown SourceId");
}

std::array<int, 4> axis_sizes(const DesignDims& d) {
  return {d.r, d.a, d.b, d.c};
}

int masked_cells(const std::array<int, 4>& sizes, unsigned mask) {
  int n = 1;
  for (int ax = 0; ax < 4; ++ax) {
    if (mask & (1u << ax)) n *= sizes[ax];
  }
  return n;
}

int project_index(const std::array<int, 4>& point,
                  const std::array<int, 4>& sizes, unsigned mask) {
  int idx = 0;
  for (int ax = 0; ax < 4; ++ax) {
    if (mask & (1u << ax)) idx = idx * sizes[ax] + point[ax];
  }
  return idx;
}

bool is_treatment(SourceId source) {
  switch (source) {
    case SourceId::A:
    case SourceId::B:
    case SourceId::AB:
    case SourceId::C:
    case SourceId::AC:
    case SourceId::BC:
    case SourceId::ABC:
      return true;
    default:
      return false;
  }
}

double sigma_of(const SimSpec& spec, VarianceComponent comp) {
  auto it = spec.sigmas.find(comp);
  return it == spec.sigmas.end() ? 0.0 : it->second;
}

// Runs fn(rep) for every replicate, split over workers as contiguous index
// ranges. fn must only write to per-replicate slots, which keeps the
// combined result identical for every worker count.
template <typename Fn>
void for_each_replicate(int n_reps, int n_workers, Fn&& fn) {
  n_workers = std::clamp(n_workers, 1, n_reps);
  if (n_workers == 1) {
    for (int rep = 0; rep < n_reps; ++rep) fn(rep);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(n_workers);
  const int per_worker = (n_reps + n_workers - 1) / n_workers;
  for (int w = 0; w < n_workers; ++w) {
    const int lo = w * per_worker;
    const int hi = std::min(n_reps, lo + per_worker);
    workers.emplace_back([&, w, lo, hi] {
      try {
        for (int rep = lo; rep < hi; ++rep) fn(rep);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

SizeGuardExceeded::SizeGuardExceeded(int cells_, int limit_)
    : std::runtime_error("design has " + std::to_string(cells_) +
                         " cells; the covariance builder is guarded to " +
                         std::to_string(limit_)),
      cells(cells_),
      limit(limit_) {}

void validate(const SimSpec& spec) {
  if (spec.n_reps < 1) {
    throw InvalidSimSpec("n_reps must be at least 1");
  }
  for (const auto& [comp, sigma] : spec.sigmas) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw InvalidSimSpec("variance of " + std::string(component_name(comp)) +
                           " must be finite and nonnegative");
    }
    const SourceId src = source_of(comp);
    if (derived_effect_kind(spec.model, src) != EffectKind::Random) {
      throw InvalidSimSpec(
          std::string(component_name(comp)) +
          " is not a random term under model " + spec.model.code() +
          "; its variance cannot be set");
    }
  }
  const std::array<int, 4> sizes = axis_sizes(spec.dims);
  for (const auto& [src, effects] : spec.fixed_effects) {
    if (!is_treatment(src) ||
        derived_effect_kind(spec.model, src) != EffectKind::Fixed) {
      throw InvalidSimSpec("source " + std::string(source_name(src)) +
                           " is not fixed under model " + spec.model.code() +
                           "; it cannot carry an effect array");
    }
    const unsigned own = own_axes(src);
    if (static_cast<int>(effects.size()) != masked_cells(sizes, own)) {
      throw InvalidSimSpec("effect array of " +
                           std::string(source_name(src)) +
                           " has the wrong length");
    }
    double scale = 1.0;
    for (double e : effects) {
      if (!std::isfinite(e)) {
        throw InvalidSimSpec("effect array of " +
                             std::string(source_name(src)) +
                             " must be finite");
      }
      scale = std::max(scale, std::fabs(e));
    }
    // Sum over each axis, holding the other own axes anywhere, must vanish:
    // a non-centered array would silently shift other terms' quadratics.
    for (int ax = 0; ax < 4; ++ax) {
      if (!(own & (1u << ax))) continue;
      const unsigned rest = own & ~(1u << ax);
      std::array<int, 4> hi = {1, 1, 1, 1};
      for (int other = 0; other < 4; ++other) {
        if (rest & (1u << other)) hi[other] = sizes[other];
      }
      std::array<int, 4> p{};
      for (p[0] = 0; p[0] < hi[0]; ++p[0])
        for (p[1] = 0; p[1] < hi[1]; ++p[1])
          for (p[2] = 0; p[2] < hi[2]; ++p[2])
            for (p[3] = 0; p[3] < hi[3]; ++p[3]) {
              double total = 0.0;
              std::array<int, 4> q = p;
              for (q[ax] = 0; q[ax] < sizes[ax]; ++q[ax]) {
                total += effects[project_index(q, sizes, own)];
              }
              if (std::fabs(total) > 1e-9 * scale) {
                throw InvalidSimSpec(
                    "effect array of " + std::string(source_name(src)) +
                    " does not sum to zero along every axis");
              }
            }
    }
  }
}

RandomStream replicate_stream(std::uint64_t seed, int rep) {
  return RandomStream(seed, static_cast<std::uint64_t>(rep));
}

BalancedLayout simulate_one(const SimSpec& spec, RandomStream& stream) {
  validate(spec);
  const std::array<int, 4> sizes = axis_sizes(spec.dims);

  // One effect vector per source over its own-index grid, drawn (or copied)
  // in fixed source order so a given stream always produces the same data.
  std::array<std::vector<double>, kSourceCount> terms;
  int source_pos = 0;
  for (SourceId src : all_sources()) {
    const unsigned own = own_axes(src);
    std::vector<double> values(masked_cells(sizes, own), 0.0);
    if (derived_effect_kind(spec.model, src) == EffectKind::Random) {
      const double sd = std::sqrt(sigma_of(spec, component_of(src)));
      if (sd > 0.0) {
        for (double& v : values) v = sample_normal(0.0, sd, stream);
      }
    } else {
      auto it = spec.fixed_effects.find(src);
      if (it != spec.fixed_effects.end()) values = it->second;
    }
    terms[source_pos++] = std::move(values);
  }

  std::vector<double> y(spec.dims.cells(), 0.0);
  std::array<int, 4> p{};
  int cell = 0;
  for (p[0] = 0; p[0] < sizes[0]; ++p[0])
    for (p[1] = 0; p[1] < sizes[1]; ++p[1])
      for (p[2] = 0; p[2] < sizes[2]; ++p[2])
        for (p[3] = 0; p[3] < sizes[3]; ++p[3]) {
          double value = spec.grand_mean;
          int pos = 0;
          for (SourceId src : all_sources()) {
            value += terms[pos++][project_index(p, sizes, own_axes(src))];
          }
          y[cell++] = value;
        }

  std::array<std::vector<std::string>, 4> labels;
  const std::array<const char*, 4> prefix = {"", "A", "B", "C"};
  for (int ax = 0; ax < 4; ++ax) {
    labels[ax].reserve(sizes[ax]);
    for (int v = 0; v < sizes[ax]; ++v) {
      labels[ax].push_back(prefix[ax] + std::to_string(v + 1));
    }
  }
  return BalancedLayout(spec.dims, std::move(labels), std::move(y));
}

std::vector<double> covariance_matrix(
    const ModelVariant& model, const DesignDims& dims,
    const std::map<VarianceComponent, double>& sigmas) {
  if (dims.cells() > kCovarianceCellGuard) {
    throw SizeGuardExceeded(dims.cells(), kCovarianceCellGuard);
  }
  SimSpec probe;
  probe.dims = dims;
  probe.model = model;
  probe.sigmas = sigmas;
  validate(probe);

  const std::array<int, 4> sizes = axis_sizes(dims);
  const int n = dims.cells();
  std::vector<std::array<int, 4>> points(n);
  {
    int cell = 0;
    std::array<int, 4> p{};
    for (p[0] = 0; p[0] < sizes[0]; ++p[0])
      for (p[1] = 0; p[1] < sizes[1]; ++p[1])
        for (p[2] = 0; p[2] < sizes[2]; ++p[2])
          for (p[3] = 0; p[3] < sizes[3]; ++p[3]) points[cell++] = p;
  }

  std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& [comp, sigma] : sigmas) {
    if (sigma == 0.0) continue;
    const unsigned own = own_axes(source_of(comp));
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        bool match = true;
        for (int ax = 0; ax < 4 && match; ++ax) {
          if ((own & (1u << ax)) && points[p][ax] != points[q][ax]) {
            match = false;
          }
        }
        if (match) cov[static_cast<std::size_t>(p) * n + q] += sigma;
      }
    }
  }
  return cov;
}

std::vector<std::array<double, kSourceCount>> replicate_mean_squares(
    const SimSpec& spec, int n_workers) {
  validate(spec);
  std::vector<std::array<double, kSourceCount>> ms(spec.n_reps);
  for_each_replicate(spec.n_reps, n_workers, [&](int rep) {
    RandomStream stream = replicate_stream(spec.seed, rep);
    const AnovaTable table = anova_table(simulate_one(spec, stream));
    for (int s = 0; s < kSourceCount; ++s) {
      ms[rep][s] = table.rows[s].ms;
    }
  });
  return ms;
}

double q_term_value(const SimSpec& spec, SourceId source) {
  auto it = spec.fixed_effects.find(source);
  if (it == spec.fixed_effects.end()) return 0.0;
  double sum_sq = 0.0;
  for (double e : it->second) sum_sq += e * e;
  // The arrays are centered along every axis, so the interaction means that
  // would otherwise fold into the quadratic vanish and Q reduces to the
  // replication multiplier over the df times the plain sum of squares.
  const double multiplier =
      coef_value(source_multiplier(source), spec.dims);
  return multiplier * sum_sq / degrees_of_freedom(spec.dims, source);
}

std::vector<EmsCheckRow> verify_ems(const SimSpec& spec, int n_workers) {
  const auto ms = replicate_mean_squares(spec, n_workers);
  const int n = spec.n_reps;

  std::map<SourceId, double> q_values;
  for (const auto& [src, effects] : spec.fixed_effects) {
    q_values[src] = q_term_value(spec, src);
  }

  std::vector<EmsCheckRow> rows;
  rows.reserve(kSourceCount);
  int pos = 0;
  for (SourceId src : all_sources()) {
    double mean = 0.0;
    for (int rep = 0; rep < n; ++rep) mean += ms[rep][pos];
    mean /= n;
    double var = 0.0;
    for (int rep = 0; rep < n; ++rep) {
      const double d = ms[rep][pos] - mean;
      var += d * d;
    }
    var = n > 1 ? var / (n - 1) : 0.0;
    const double predicted =
        ems_value(ems(spec.model, spec.dims, src), spec.sigmas, q_values);
    rows.push_back({src, mean, predicted, std::sqrt(var / n)});
    ++pos;
  }
  return rows;
}

std::vector<Type1Row> type1_error(const SimSpec& spec, double alpha,
                                  int n_workers) {
  validate(spec);
  const std::vector<FTestSpec> plan = f_test_plan(spec.model);
  const int n_tests = static_cast<int>(plan.size());
  std::vector<std::vector<char>> rejected(
      spec.n_reps, std::vector<char>(n_tests, 0));

  for_each_replicate(spec.n_reps, n_workers, [&](int rep) {
    RandomStream stream = replicate_stream(spec.seed, rep);
    const AnovaTable table = anova_table(simulate_one(spec, stream));
    const std::vector<FTestResult> results = evaluate(plan, table);
    for (int t = 0; t < n_tests; ++t) {
      rejected[rep][t] = results[t].p_value < alpha ? 1 : 0;
    }
  });

  std::vector<Type1Row> rows;
  rows.reserve(n_tests);
  for (int t = 0; t < n_tests; ++t) {
    long count = 0;
    for (int rep = 0; rep < spec.n_reps; ++rep) count += rejected[rep][t];
    const double rate = static_cast<double>(count) / spec.n_reps;
    rows.push_back({plan[t].source,
                    plan[t].numerator.size() == 1 &&
                        plan[t].denominator.size() == 1,
                    rate, std::sqrt(rate * (1.0 - rate) / spec.n_reps)});
  }
  return rows;
}

}  // namespace stripsplit
