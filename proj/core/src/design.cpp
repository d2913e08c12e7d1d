#include "stripsplit/design.hpp"

#include <stdexcept>

namespace stripsplit {

DesignDims::DesignDims(int r_, int a_, int b_, int c_)
    : r(r_), a(a_), b(b_), c(c_) {
  if (r < 2 || a < 2 || b < 2 || c < 2) {
    throw std::invalid_argument(
        "design dimensions must all be at least 2 (got r=" +
        std::to_string(r) + ", a=" + std::to_string(a) + ", b=" +
        std::to_string(b) + ", c=" + std::to_string(c) + ")");
  }
}

const std::array<SourceId, kSourceCount>& all_sources() {
  static const std::array<SourceId, kSourceCount> order = {
      SourceId::R,  SourceId::A,  SourceId::eA,  SourceId::B,
      SourceId::eB, SourceId::AB, SourceId::eAB, SourceId::C,
      SourceId::AC, SourceId::BC, SourceId::ABC, SourceId::eT};
  return order;
}

std::string_view source_name(SourceId source) {
  switch (source) {
    case SourceId::R:   return "R";
    case SourceId::A:   return "A";
    case SourceId::eA:  return "eA";
    case SourceId::B:   return "B";
    case SourceId::eB:  return "eB";
    case SourceId::AB:  return "AB";
    case SourceId::eAB: return "eAB";
    case SourceId::C:   return "C";
    case SourceId::AC:  return "AC";
    case SourceId::BC:  return "BC";
    case SourceId::ABC: return "ABC";
    case SourceId::eT:  return "eT";
  }
  throw std::invalid_argument("unknown SourceId");
}

SourceId parse_source(std::string_view name) {
  for (SourceId s : all_sources()) {
    if (source_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown source name: " + std::string(name));
}

ModelVariant ModelVariant::parse(std::string_view code) {
  if (code.size() != 3) {
    throw std::invalid_argument("model code must be three letters, e.g. FFF, "
                                "RRR, RFF; got \"" + std::string(code) + "\"");
  }
  auto kind = [&](char ch) {
    if (ch == 'F' || ch == 'f') return EffectKind::Fixed;
    if (ch == 'R' || ch == 'r') return EffectKind::Random;
    throw std::invalid_argument("model code letters must be F or R; got \"" +
                                std::string(code) + "\"");
  };
  return ModelVariant{kind(code[0]), kind(code[1]), kind(code[2])};
}

std::string ModelVariant::code() const {
  auto letter = [](EffectKind k) { return k == EffectKind::Fixed ? 'F' : 'R'; };
  return std::string{letter(a_kind), letter(b_kind), letter(c_kind)};
}

const std::array<ModelVariant, 8>& all_model_variants() {
  static const std::array<ModelVariant, 8> variants = [] {
    std::array<ModelVariant, 8> v{};
    int n = 0;
    for (EffectKind a : {EffectKind::Fixed, EffectKind::Random})
      for (EffectKind b : {EffectKind::Fixed, EffectKind::Random})
        for (EffectKind c : {EffectKind::Fixed, EffectKind::Random})
          v[n++] = ModelVariant{a, b, c};
    return v;
  }();
  return variants;
}

int degrees_of_freedom(const DesignDims& d, SourceId source) {
  switch (source) {
    case SourceId::R:   return d.r - 1;
    case SourceId::A:   return d.a - 1;
    case SourceId::eA:  return (d.r - 1) * (d.a - 1);
    case SourceId::B:   return d.b - 1;
    case SourceId::eB:  return (d.r - 1) * (d.b - 1);
    case SourceId::AB:  return (d.a - 1) * (d.b - 1);
    case SourceId::eAB: return (d.a - 1) * (d.b - 1) * (d.r - 1);
    case SourceId::C:   return d.c - 1;
    case SourceId::AC:  return (d.a - 1) * (d.c - 1);
    case SourceId::BC:  return (d.b - 1) * (d.c - 1);
    case SourceId::ABC: return (d.a - 1) * (d.b - 1) * (d.c - 1);
    case SourceId::eT:  return d.a * d.b * (d.c - 1) * (d.r - 1);
  }
  throw std::invalid_argument("unknown SourceId");
}

EffectKind derived_effect_kind(const ModelVariant& model, SourceId source) {
  auto any_random = [&](bool use_a, bool use_b, bool use_c) {
    return (use_a && model.a_kind == EffectKind::Random) ||
           (use_b && model.b_kind == EffectKind::Random) ||
           (use_c && model.c_kind == EffectKind::Random)
               ? EffectKind::Random
               : EffectKind::Fixed;
  };
  switch (source) {
    // Blocks and every error term are random regardless of the variant.
    case SourceId::R:
    case SourceId::eA:
    case SourceId::eB:
    case SourceId::eAB:
    case SourceId::eT:  return EffectKind::Random;
    case SourceId::A:   return any_random(true, false, false);
    case SourceId::B:   return any_random(false, true, false);
    case SourceId::C:   return any_random(false, false, true);
    case SourceId::AB:  return any_random(true, true, false);
    case SourceId::AC:  return any_random(true, false, true);
    case SourceId::BC:  return any_random(false, true, true);
    case SourceId::ABC: return any_random(true, true, true);
  }
  throw std::invalid_argument("unknown SourceId");
}

}  // namespace stripsplit
