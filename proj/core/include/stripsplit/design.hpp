#ifndef STRIPSPLIT_DESIGN_HPP
#define STRIPSPLIT_DESIGN_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace stripsplit {

// Dimensions of a balanced strip-split-plot design: r blocks, a levels of the
// horizontal strip factor A, b levels of the vertical strip factor B, and c
// levels of the subplot factor C. One observation per (block, A, B, C) cell.
struct DesignDims {
  int r;
  int a;
  int b;
  int c;

  // Throws std::invalid_argument unless every count is >= 2. Two is the
  // smallest size for which every error line keeps at least one df.
  DesignDims(int r_, int a_, int b_, int c_);

  int cells() const { return r * a * b * c; }

  bool operator==(const DesignDims&) const = default;
};

// The twelve sources of variation, in the fixed row order used by every
// table this library prints: block, horizontal strip and its error, vertical
// strip and its error, strip interaction and its error, subplot factor and
// its interactions, residual.
enum class SourceId { R, A, eA, B, eB, AB, eAB, C, AC, BC, ABC, eT };

inline constexpr int kSourceCount = 12;

const std::array<SourceId, kSourceCount>& all_sources();

// Short identifier used in CSV/JSON output and error messages ("eA", "ABC").
std::string_view source_name(SourceId source);

// Inverse of source_name; throws std::invalid_argument on unknown names.
SourceId parse_source(std::string_view name);

enum class EffectKind { Fixed, Random };

// Which of the three treatment factors are random. Blocks are always random
// and are deliberately not configurable here; the analysis tables in this
// library all assume random blocks.
struct ModelVariant {
  EffectKind a_kind;
  EffectKind b_kind;
  EffectKind c_kind;

  // Three-letter code, one letter per factor in A, B, C order: 'F' fixed,
  // 'R' random. "FFF" is the all-fixed model, "RFF" has only A random.
  static ModelVariant parse(std::string_view code);
  std::string code() const;

  bool operator==(const ModelVariant&) const = default;
};

const std::array<ModelVariant, 8>& all_model_variants();

// Exact degrees of freedom of a source: R has r-1, eAB has (a-1)(b-1)(r-1),
// the residual has ab(c-1)(r-1), and so on. Summed over all twelve sources
// this is rabc - 1.
int degrees_of_freedom(const DesignDims& dims, SourceId source);

// Effect kind of a source under a model variant. Blocks and the four error
// sources are always Random; a main factor reports its configured kind; an
// interaction is Random as soon as any participating factor is Random.
EffectKind derived_effect_kind(const ModelVariant& model, SourceId source);

}  // namespace stripsplit

#endif
