#include "stripsplit/ems.hpp"

#include <stdexcept>
#include <vector>

namespace stripsplit {

namespace {

// Mask bits follow dims field order r, a, b, c.
constexpr unsigned kR = 1u << 0;
constexpr unsigned kA = 1u << 1;
constexpr unsigned kB = 1u << 2;
constexpr unsigned kC = 1u << 3;

using VC = VarianceComponent;

struct TermSpec {
  VC comp;
  const char* mask;
};

// One transcribed EMS line: whether the source carries its Q term, plus the
// variance terms with their coefficients.
struct LineSpec {
  bool q;
  std::vector<TermSpec> terms;
};

EmsExpression build(SourceId source, const LineSpec& line,
                    std::optional<DesignDims> dims) {
  EmsExpression e;
  e.dims = dims;
  if (line.q) e.add_q(source);
  for (const TermSpec& t : line.terms) e.add_term(t.comp, coef(t.mask));
  return e;
}

// Lines shared by every variant: the random-block line and the four error
// lines. The block line always reads abc s2_R + bc s2_eA + ac s2_eB +
// c s2_eAB + s2_eT.
const LineSpec* common_line(SourceId source) {
  static const LineSpec r_line{
      false,
      {{VC::R, "abc"}, {VC::eA, "bc"}, {VC::eB, "ac"}, {VC::eAB, "c"},
       {VC::eT, ""}}};
  static const LineSpec ea_line{
      false, {{VC::eA, "bc"}, {VC::eAB, "c"}, {VC::eT, ""}}};
  static const LineSpec eb_line{
      false, {{VC::eB, "ac"}, {VC::eAB, "c"}, {VC::eT, ""}}};
  static const LineSpec eab_line{false, {{VC::eAB, "c"}, {VC::eT, ""}}};
  static const LineSpec et_line{false, {{VC::eT, ""}}};
  switch (source) {
    case SourceId::R:   return &r_line;
    case SourceId::eA:  return &ea_line;
    case SourceId::eB:  return &eb_line;
    case SourceId::eAB: return &eab_line;
    case SourceId::eT:  return &et_line;
    default:            return nullptr;
  }
}

// The seven treatment lines of one variant, in source order A, B, AB, C,
// AC, BC, ABC. Transcribed table data; the Monte Carlo verifier audits
// these against simulated mean squares, and the test-plan exactness check
// audits them against the ratio tables.
struct VariantTable {
  LineSpec a, b, ab, c, ac, bc, abc;
};

const VariantTable& variant_table(const ModelVariant& model) {
  static const VariantTable fff{
      /*A*/  {true, {{VC::eA, "bc"}, {VC::eAB, "c"}, {VC::eT, ""}}},
      /*B*/  {true, {{VC::eB, "ac"}, {VC::eAB, "c"}, {VC::eT, ""}}},
      /*AB*/ {true, {{VC::eAB, "c"}, {VC::eT, ""}}},
      /*C*/  {true, {{VC::eT, ""}}},
      /*AC*/ {true, {{VC::eT, ""}}},
      /*BC*/ {true, {{VC::eT, ""}}},
      /*ABC*/{true, {{VC::eT, ""}}}};
  static const VariantTable rrr{
      {false, {{VC::A, "bcr"}, {VC::eA, "bc"}, {VC::AB, "cr"}, {VC::eAB, "c"},
               {VC::AC, "br"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::B, "acr"}, {VC::eB, "ac"}, {VC::AB, "cr"}, {VC::eAB, "c"},
               {VC::BC, "ar"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::AB, "cr"}, {VC::eAB, "c"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::C, "abr"}, {VC::AC, "br"}, {VC::BC, "ar"}, {VC::ABC, "r"},
               {VC::eT, ""}}},
      {false, {{VC::AC, "br"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::BC, "ar"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::ABC, "r"}, {VC::eT, ""}}}};
  // A fixed, B and C random: only the A line differs from the all-random
  // table (Q instead of bcr s2_A).
  static const VariantTable frr{
      {true, {{VC::eA, "bc"}, {VC::AB, "cr"}, {VC::eAB, "c"}, {VC::AC, "br"},
              {VC::ABC, "r"}, {VC::eT, ""}}},
      rrr.b, rrr.ab, rrr.c, rrr.ac, rrr.bc, rrr.abc};
  // B fixed, A and C random.
  static const VariantTable rfr{
      rrr.a,
      {true, {{VC::eB, "ac"}, {VC::AB, "cr"}, {VC::eAB, "c"}, {VC::BC, "ar"},
              {VC::ABC, "r"}, {VC::eT, ""}}},
      rrr.ab, rrr.c, rrr.ac, rrr.bc, rrr.abc};
  // C fixed, A and B random.
  static const VariantTable rrf{
      rrr.a, rrr.b, rrr.ab,
      {true, {{VC::AC, "br"}, {VC::BC, "ar"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      rrr.ac, rrr.bc, rrr.abc};
  // Only A random: every interaction with A is random, B, C and BC are
  // fixed.
  static const VariantTable rff{
      rrr.a,
      {true, {{VC::eB, "ac"}, {VC::AB, "cr"}, {VC::eAB, "c"}, {VC::ABC, "r"},
              {VC::eT, ""}}},
      {false, {{VC::AB, "cr"}, {VC::eAB, "c"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {true, {{VC::AC, "br"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::AC, "br"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {true, {{VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::ABC, "r"}, {VC::eT, ""}}}};
  // Only B random.
  static const VariantTable frf{
      {true, {{VC::eA, "bc"}, {VC::AB, "cr"}, {VC::eAB, "c"}, {VC::ABC, "r"},
              {VC::eT, ""}}},
      rrr.b,
      {false, {{VC::AB, "cr"}, {VC::eAB, "c"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {true, {{VC::BC, "ar"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {true, {{VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::BC, "ar"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::ABC, "r"}, {VC::eT, ""}}}};
  // Only C random.
  static const VariantTable ffr{
      {true, {{VC::eA, "bc"}, {VC::eAB, "c"}, {VC::AC, "br"}, {VC::ABC, "r"},
              {VC::eT, ""}}},
      {true, {{VC::eB, "ac"}, {VC::eAB, "c"}, {VC::BC, "ar"}, {VC::ABC, "r"},
              {VC::eT, ""}}},
      {true, {{VC::eAB, "c"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::C, "abr"}, {VC::AC, "br"}, {VC::BC, "ar"}, {VC::ABC, "r"},
               {VC::eT, ""}}},
      {false, {{VC::AC, "br"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::BC, "ar"}, {VC::ABC, "r"}, {VC::eT, ""}}},
      {false, {{VC::ABC, "r"}, {VC::eT, ""}}}};

  const bool ra = model.a_kind == EffectKind::Random;
  const bool rb = model.b_kind == EffectKind::Random;
  const bool rc = model.c_kind == EffectKind::Random;
  if (!ra && !rb && !rc) return fff;
  if (ra && rb && rc) return rrr;
  if (!ra && rb && rc) return frr;
  if (ra && !rb && rc) return rfr;
  if (ra && rb && !rc) return rrf;
  if (ra && !rb && !rc) return rff;
  if (!ra && rb && !rc) return frf;
  return ffr;
}

const LineSpec& treatment_line(const VariantTable& t, SourceId source) {
  switch (source) {
    case SourceId::A:   return t.a;
    case SourceId::B:   return t.b;
    case SourceId::AB:  return t.ab;
    case SourceId::C:   return t.c;
    case SourceId::AC:  return t.ac;
    case SourceId::BC:  return t.bc;
    case SourceId::ABC: return t.abc;
    default:
      throw std::invalid_argument("not a treatment source");
  }
}

EmsExpression ems_impl(const ModelVariant& model, SourceId source,
                       std::optional<DesignDims> dims) {
  if (const LineSpec* line = common_line(source)) {
    return build(source, *line, dims);
  }
  return build(source, treatment_line(variant_table(model), source), dims);
}

}  // namespace

std::string_view component_name(VC comp) {
  switch (comp) {
    case VC::R:   return "s2_R";
    case VC::A:   return "s2_A";
    case VC::eA:  return "s2_eA";
    case VC::B:   return "s2_B";
    case VC::eB:  return "s2_eB";
    case VC::AB:  return "s2_AB";
    case VC::eAB: return "s2_eAB";
    case VC::C:   return "s2_C";
    case VC::AC:  return "s2_AC";
    case VC::BC:  return "s2_BC";
    case VC::ABC: return "s2_ABC";
    case VC::eT:  return "s2_eT";
  }
  throw std::invalid_argument("unknown VarianceComponent");
}

VarianceComponent parse_component(std::string_view name) {
  // Accept both the bare source name ("eAB") and the prefixed form
  // ("s2_eAB").
  std::string_view bare = name;
  if (bare.size() > 3 && bare.substr(0, 3) == "s2_") bare = bare.substr(3);
  return component_of(parse_source(bare));
}

VarianceComponent component_of(SourceId source) {
  return static_cast<VarianceComponent>(static_cast<int>(source));
}

SourceId source_of(VarianceComponent comp) {
  return static_cast<SourceId>(static_cast<int>(comp));
}

CoefMask coef(std::string_view letters) {
  CoefMask mask;
  for (char ch : letters) {
    switch (ch) {
      case 'r': mask.bits |= kR; break;
      case 'a': mask.bits |= kA; break;
      case 'b': mask.bits |= kB; break;
      case 'c': mask.bits |= kC; break;
      default:
        throw std::invalid_argument(
            "coefficient letters must be among r, a, b, c");
    }
  }
  return mask;
}

int coef_value(CoefMask mask, const DesignDims& dims) {
  int value = 1;
  if (mask.bits & kR) value *= dims.r;
  if (mask.bits & kA) value *= dims.a;
  if (mask.bits & kB) value *= dims.b;
  if (mask.bits & kC) value *= dims.c;
  return value;
}

std::string coef_symbol(CoefMask mask) {
  std::string s;
  if (mask.bits & kA) s += 'a';
  if (mask.bits & kB) s += 'b';
  if (mask.bits & kC) s += 'c';
  if (mask.bits & kR) s += 'r';
  return s.empty() ? "1" : s;
}

CoefMask source_multiplier(SourceId source) {
  switch (source) {
    case SourceId::R:   return coef("abc");
    case SourceId::A:   return coef("bcr");
    case SourceId::eA:  return coef("bc");
    case SourceId::B:   return coef("acr");
    case SourceId::eB:  return coef("ac");
    case SourceId::AB:  return coef("cr");
    case SourceId::eAB: return coef("c");
    case SourceId::C:   return coef("abr");
    case SourceId::AC:  return coef("br");
    case SourceId::BC:  return coef("ar");
    case SourceId::ABC: return coef("r");
    case SourceId::eT:  return coef("");
  }
  throw std::invalid_argument("unknown SourceId");
}

bool EmsExpression::empty() const {
  for (const auto& [comp, masks] : var_coeffs) {
    for (const auto& [mask, count] : masks) {
      if (count != 0) return false;
    }
  }
  for (const auto& [q, count] : q_terms) {
    if (count != 0) return false;
  }
  return true;
}

int EmsExpression::coefficient(VarianceComponent comp) const {
  if (!dims) {
    throw std::logic_error("numeric coefficient requested without dims");
  }
  auto it = var_coeffs.find(comp);
  if (it == var_coeffs.end()) return 0;
  int value = 0;
  for (const auto& [mask, count] : it->second) {
    value += count * coef_value(mask, *dims);
  }
  return value;
}

bool EmsExpression::has_q(SourceId owner) const {
  auto it = q_terms.find(QTerm{owner});
  return it != q_terms.end() && it->second != 0;
}

namespace {

// Drops zero-count entries so that term-wise comparison and emptiness see
// canonical maps.
void prune(EmsExpression& e) {
  for (auto it = e.var_coeffs.begin(); it != e.var_coeffs.end();) {
    auto& masks = it->second;
    for (auto mit = masks.begin(); mit != masks.end();) {
      mit = mit->second == 0 ? masks.erase(mit) : std::next(mit);
    }
    it = masks.empty() ? e.var_coeffs.erase(it) : std::next(it);
  }
  for (auto it = e.q_terms.begin(); it != e.q_terms.end();) {
    it = it->second == 0 ? e.q_terms.erase(it) : std::next(it);
  }
}

}  // namespace

bool EmsExpression::same_terms(const EmsExpression& other) const {
  EmsExpression a = *this, b = other;
  prune(a);
  prune(b);
  return a.var_coeffs == b.var_coeffs && a.q_terms == b.q_terms;
}

EmsExpression& EmsExpression::add_term(VarianceComponent comp, CoefMask mask,
                                       int count) {
  var_coeffs[comp][mask] += count;
  return *this;
}

EmsExpression& EmsExpression::add_q(SourceId owner, int count) {
  q_terms[QTerm{owner}] += count;
  return *this;
}

EmsExpression ems(const ModelVariant& model, const DesignDims& dims,
                  SourceId source) {
  return ems_impl(model, source, dims);
}

EmsExpression ems_symbolic(const ModelVariant& model, SourceId source) {
  return ems_impl(model, source, std::nullopt);
}

EmsExpression fixed_block_ems_r_symbolic() {
  EmsExpression e;
  e.add_q(SourceId::R);
  e.add_term(VC::eA, coef("bc"));
  e.add_term(VC::eB, coef("ac"));
  e.add_term(VC::eAB, coef("c"));
  e.add_term(VC::eT, coef(""));
  return e;
}

EmsExpression fixed_block_ems_r(const DesignDims& dims) {
  EmsExpression e = fixed_block_ems_r_symbolic();
  e.dims = dims;
  return e;
}

EmsExpression ems_sum(const std::vector<EmsExpression>& exprs) {
  EmsExpression total;
  bool dims_ok = !exprs.empty();
  for (const EmsExpression& e : exprs) {
    if (!e.dims || (total.dims && !(*e.dims == *total.dims))) dims_ok = false;
    if (!total.dims) total.dims = e.dims;
    for (const auto& [comp, masks] : e.var_coeffs) {
      for (const auto& [mask, count] : masks) {
        total.add_term(comp, mask, count);
      }
    }
    for (const auto& [q, count] : e.q_terms) {
      total.add_q(q.owner, count);
    }
  }
  if (!dims_ok) total.dims.reset();
  prune(total);
  return total;
}

EmsExpression ems_difference(const EmsExpression& a, const EmsExpression& b) {
  EmsExpression diff = a;
  for (const auto& [comp, masks] : b.var_coeffs) {
    for (const auto& [mask, count] : masks) {
      diff.add_term(comp, mask, -count);
    }
  }
  for (const auto& [q, count] : b.q_terms) {
    diff.add_q(q.owner, -count);
  }
  if (diff.dims && b.dims && !(*diff.dims == *b.dims)) diff.dims.reset();
  prune(diff);
  return diff;
}

std::string to_string(const EmsExpression& expr, bool symbolic) {
  std::string out;
  auto append = [&](const std::string& term, bool negative) {
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += term;
  };
  for (const auto& [q, count] : expr.q_terms) {
    if (count == 0) continue;
    const int n = count < 0 ? -count : count;
    std::string term =
        "Q(" + std::string(source_name(q.owner)) + ")";
    if (n != 1) term = std::to_string(n) + "*" + term;
    append(term, count < 0);
  }
  for (const auto& [comp, masks] : expr.var_coeffs) {
    for (const auto& [mask, count] : masks) {
      if (count == 0) continue;
      const int n = count < 0 ? -count : count;
      std::string coeff;
      if (symbolic || !expr.dims) {
        const std::string sym = coef_symbol(mask);
        coeff = sym == "1" ? "" : sym;
        if (n != 1) coeff = std::to_string(n) + (coeff.empty() ? "" : "*" + coeff);
      } else {
        const int value = n * coef_value(mask, *expr.dims);
        if (value != 1) coeff = std::to_string(value);
      }
      std::string term = std::string(component_name(comp));
      if (!coeff.empty()) term = coeff + "*" + term;
      append(term, count < 0);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

double ems_value(const EmsExpression& expr,
                 const std::map<VarianceComponent, double>& sigmas,
                 const std::map<SourceId, double>& q_values) {
  if (!expr.dims) {
    throw std::logic_error("ems_value requires dims");
  }
  double total = 0.0;
  for (const auto& [comp, masks] : expr.var_coeffs) {
    auto it = sigmas.find(comp);
    if (it == sigmas.end()) continue;
    for (const auto& [mask, count] : masks) {
      total += count * coef_value(mask, *expr.dims) * it->second;
    }
  }
  for (const auto& [q, count] : expr.q_terms) {
    auto it = q_values.find(q.owner);
    if (it != q_values.end()) total += count * it->second;
  }
  return total;
}

}  // namespace stripsplit
