#include "stripsplit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stripsplit {

namespace {

using nlohmann::json;

std::string shortest(double value) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

std::string fixed(double value, int places) {
  std::array<char, 48> buf;
  const int n = std::snprintf(buf.data(), buf.size(), "%.*f", places, value);
  return std::string(buf.data(), n);
}

std::string method_name(const DfMethod& method) {
  switch (method.kind) {
    case DfMethodKind::Exact:
      return "exact";
    case DfMethodKind::Satterthwaite:
      return "satterthwaite";
    case DfMethodKind::AmesWebster:
      return "ames-webster";
  }
  throw std::invalid_argument("unknown df method");
}

// Joined text cells padded into aligned columns, right aligned except the
// first (the source label).
std::string align(const std::vector<std::vector<std::string>>& grid) {
  std::vector<std::size_t> width;
  for (const auto& row : grid) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      if (c == 0) {
        cell.append(width[c] - cell.size(), ' ');
      } else {
        cell.insert(0, width[c] - cell.size(), ' ');
        line += "  ";
      }
      line += cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) line += ',';
    line += cells[c];
  }
  line += '\n';
  return line;
}

const FTestResult* find_result(const std::vector<FTestResult>& results,
                               SourceId source) {
  for (const FTestResult& res : results) {
    if (res.source == source) return &res;
  }
  return nullptr;
}

json table_json(const AnovaTable& table) {
  json rows = json::array();
  for (const AnovaRow& row : table.rows) {
    rows.push_back({{"source", std::string(source_name(row.source))},
                    {"df", row.df},
                    {"ss", row.ss},
                    {"ms", row.ms}});
  }
  return {{"dims",
           {{"r", table.dims.r},
            {"a", table.dims.a},
            {"b", table.dims.b},
            {"c", table.dims.c}}},
          {"rows", rows}};
}

json result_json(const FTestResult& res) {
  json alternates = json::array();
  for (const AlternateDf& alt : res.alternates) {
    alternates.push_back({{"side", alt.side == 0 ? "numerator" : "denominator"},
                          {"method", method_name(alt.method)},
                          {"r_used", alt.method.r_used},
                          {"ordering", alt.method.ordering},
                          {"df1", alt.df1},
                          {"df2", alt.df2},
                          {"p_value", alt.p_value},
                          {"selected", alt.selected}});
  }
  return {{"source", std::string(source_name(res.source))},
          {"f", res.f_value},
          {"df1", res.df1},
          {"df2", res.df2},
          {"df_method", method_name(res.df_method)},
          {"p_value", res.p_value},
          {"alternates", alternates}};
}

// One table plus an optional F column block, shared by render_table,
// render_analysis and the comparison sections.
void table_text(std::vector<std::vector<std::string>>& grid,
                const AnovaTable& table,
                const std::vector<FTestResult>* results, double alpha) {
  std::vector<std::string> head = {"source", "df", "SS", "MS"};
  if (results) {
    head.insert(head.end(), {"F", "df1", "df2", "method", "p", ""});
  }
  grid.push_back(head);
  for (const AnovaRow& row : table.rows) {
    std::vector<std::string> cells = {std::string(source_name(row.source)),
                                      std::to_string(row.df),
                                      fixed(row.ss, 4), fixed(row.ms, 4)};
    if (results) {
      if (const FTestResult* res = find_result(*results, row.source)) {
        cells.push_back(fixed(res->f_value, 4));
        cells.push_back(fixed(res->df1, 2));
        cells.push_back(fixed(res->df2, 2));
        cells.push_back(method_name(res->df_method));
        cells.push_back(fixed(res->p_value, 4));
        cells.push_back(res->p_value < alpha ? "*" : "");
      } else {
        cells.insert(cells.end(), 6, "");
      }
    }
    grid.push_back(std::move(cells));
  }
}

void table_csv(std::string& out, const AnovaTable& table,
               const std::vector<FTestResult>* results, double alpha) {
  std::vector<std::string> head = {"source", "df", "ss", "ms"};
  if (results) {
    head.insert(head.end(),
                {"f", "df1", "df2", "df_method", "p_value", "significant"});
  }
  out += csv_join(head);
  for (const AnovaRow& row : table.rows) {
    std::vector<std::string> cells = {std::string(source_name(row.source)),
                                      std::to_string(row.df),
                                      shortest(row.ss), shortest(row.ms)};
    if (results) {
      if (const FTestResult* res = find_result(*results, row.source)) {
        cells.push_back(shortest(res->f_value));
        cells.push_back(shortest(res->df1));
        cells.push_back(shortest(res->df2));
        cells.push_back(method_name(res->df_method));
        cells.push_back(shortest(res->p_value));
        cells.push_back(res->p_value < alpha ? "1" : "0");
      } else {
        cells.insert(cells.end(), 6, "");
      }
    }
    out += csv_join(cells);
  }
}

std::string alternates_text(const std::vector<FTestResult>& results) {
  std::vector<std::vector<std::string>> grid;
  for (const FTestResult& res : results) {
    for (const AlternateDf& alt : res.alternates) {
      grid.push_back({std::string(source_name(res.source)),
                      alt.side == 0 ? "num" : "den",
                      "r=" + fixed(alt.method.r_used, 4),
                      "ordering " + std::to_string(alt.method.ordering),
                      "df " + fixed(alt.side == 0 ? alt.df1 : alt.df2, 4),
                      "p=" + fixed(alt.p_value, 4),
                      alt.selected ? "selected" : ""});
    }
  }
  if (grid.empty()) return "";
  return "alternate df estimates:\n" + align(grid);
}

json ems_json_terms(const EmsExpression& expr, bool symbolic) {
  json terms = json::array();
  for (const auto& [owner, count] : expr.q_terms) {
    terms.push_back({{"kind", "q"},
                     {"owner", std::string(source_name(owner.owner))},
                     {"count", count}});
  }
  for (const auto& [comp, masks] : expr.var_coeffs) {
    for (const auto& [mask, count] : masks) {
      json term = {{"kind", "variance"},
                   {"component", std::string(component_name(comp))},
                   {"multiplier", coef_symbol(mask)},
                   {"count", count}};
      if (!symbolic && expr.dims) {
        term["coefficient"] =
            static_cast<double>(count) * coef_value(mask, *expr.dims);
      }
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "text") return OutputFormat::Text;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format: " + std::string(name) +
                              " (expected text, csv or json)");
}

std::string render_table(const AnovaTable& table, OutputFormat format) {
  switch (format) {
    case OutputFormat::Text: {
      std::vector<std::vector<std::string>> grid;
      table_text(grid, table, nullptr, 0.0);
      grid.push_back({"total", std::to_string(table.total_df()),
                      fixed(table.total_ss(), 4), ""});
      return align(grid);
    }
    case OutputFormat::Csv: {
      std::string out;
      table_csv(out, table, nullptr, 0.0);
      return out;
    }
    case OutputFormat::Json:
      return table_json(table).dump(2) + "\n";
  }
  throw std::invalid_argument("unknown output format");
}

std::string render_analysis(const AnovaTable& table,
                            const std::vector<FTestResult>& results,
                            double alpha, OutputFormat format) {
  switch (format) {
    case OutputFormat::Text: {
      std::vector<std::vector<std::string>> grid;
      table_text(grid, table, &results, alpha);
      std::string out = align(grid);
      out += "total df " + std::to_string(table.total_df()) + ", total SS " +
             fixed(table.total_ss(), 4) + ", * marks p < " +
             shortest(alpha) + "\n";
      const std::string alts = alternates_text(results);
      if (!alts.empty()) {
        out += '\n';
        out += alts;
      }
      return out;
    }
    case OutputFormat::Csv: {
      std::string out;
      table_csv(out, table, &results, alpha);
      return out;
    }
    case OutputFormat::Json: {
      json doc = table_json(table);
      doc["alpha"] = alpha;
      json tests = json::array();
      for (const FTestResult& res : results) tests.push_back(result_json(res));
      doc["tests"] = std::move(tests);
      return doc.dump(2) + "\n";
    }
  }
  throw std::invalid_argument("unknown output format");
}

std::string render_ems(const ModelVariant& model,
                       const std::optional<DesignDims>& dims,
                       OutputFormat format) {
  std::vector<EmsExpression> lines;
  lines.reserve(kSourceCount);
  for (SourceId src : all_sources()) {
    lines.push_back(dims ? ems(model, *dims, src) : ems_symbolic(model, src));
  }
  switch (format) {
    case OutputFormat::Text: {
      std::vector<std::vector<std::string>> grid;
      grid.push_back({"source", "E(MS)"});
      int pos = 0;
      for (SourceId src : all_sources()) {
        grid.push_back({std::string(source_name(src)),
                        to_string(lines[pos++], !dims.has_value())});
      }
      // E(MS) strings read better left aligned; align() right aligns every
      // column past the first, so pad them here instead.
      std::string out = "model " + model.code() + "\n";
      std::size_t w = 0;
      for (const auto& row : grid) w = std::max(w, row[0].size());
      for (const auto& row : grid) {
        std::string line = row[0];
        line.append(w - row[0].size(), ' ');
        line += "  ";
        line += row[1];
        out += line;
        out += '\n';
      }
      return out;
    }
    case OutputFormat::Csv: {
      std::string out = csv_join({"source", "ems"});
      int pos = 0;
      for (SourceId src : all_sources()) {
        std::string expr = to_string(lines[pos++], !dims.has_value());
        out += csv_join({std::string(source_name(src)), '"' + expr + '"'});
      }
      return out;
    }
    case OutputFormat::Json: {
      json rows = json::array();
      int pos = 0;
      for (SourceId src : all_sources()) {
        const EmsExpression& expr = lines[pos++];
        rows.push_back({{"source", std::string(source_name(src))},
                        {"display", to_string(expr, !dims.has_value())},
                        {"terms", ems_json_terms(expr, !dims.has_value())}});
      }
      json doc = {{"model", model.code()}, {"rows", rows}};
      if (dims) {
        doc["dims"] = {
            {"r", dims->r}, {"a", dims->a}, {"b", dims->b}, {"c", dims->c}};
      }
      return doc.dump(2) + "\n";
    }
  }
  throw std::invalid_argument("unknown output format");
}

std::string render_ems_check(const std::vector<EmsCheckRow>& rows,
                             OutputFormat format) {
  switch (format) {
    case OutputFormat::Text: {
      std::vector<std::vector<std::string>> grid;
      grid.push_back({"source", "mean MS", "predicted", "MC SE", "dev/SE"});
      for (const EmsCheckRow& row : rows) {
        const double dev = row.mean_ms - row.predicted;
        grid.push_back({std::string(source_name(row.source)),
                        fixed(row.mean_ms, 6), fixed(row.predicted, 6),
                        fixed(row.mc_se, 6),
                        row.mc_se > 0.0 ? fixed(dev / row.mc_se, 2) : "n/a"});
      }
      return align(grid);
    }
    case OutputFormat::Csv: {
      std::string out =
          csv_join({"source", "mean_ms", "predicted", "mc_se"});
      for (const EmsCheckRow& row : rows) {
        out += csv_join({std::string(source_name(row.source)),
                         shortest(row.mean_ms), shortest(row.predicted),
                         shortest(row.mc_se)});
      }
      return out;
    }
    case OutputFormat::Json: {
      json arr = json::array();
      for (const EmsCheckRow& row : rows) {
        arr.push_back({{"source", std::string(source_name(row.source))},
                       {"mean_ms", row.mean_ms},
                       {"predicted", row.predicted},
                       {"mc_se", row.mc_se}});
      }
      return json{{"rows", arr}}.dump(2) + "\n";
    }
  }
  throw std::invalid_argument("unknown output format");
}

std::string render_comparison(const DesignComparison& cmp,
                              OutputFormat format) {
  struct Section {
    const char* name;
    const AnovaTable* table;
    const std::vector<FTestResult>* results;
  };
  const std::array<Section, 3> sections = {
      Section{"strip-split", &cmp.strip, &cmp.strip_tests},
      Section{"factorial", &cmp.factorial, &cmp.factorial_results},
      Section{"split-split", &cmp.split_split, &cmp.split_results}};

  switch (format) {
    case OutputFormat::Text: {
      std::string out;
      for (const Section& sec : sections) {
        out += sec.name;
        out += " analysis\n";
        std::vector<std::vector<std::string>> grid;
        table_text(grid, *sec.table, sec.results, cmp.alpha);
        out += align(grid);
        out += '\n';
      }
      out += "significance changes at alpha " + shortest(cmp.alpha) + ":\n";
      if (cmp.divergences.empty()) {
        out += "  none\n";
      } else {
        for (const Divergence& div : cmp.divergences) {
          out += "  " + std::string(source_name(div.source)) +
                 ": strip-split " + (div.strip_significant ? "yes" : "no") +
                 ", factorial " + (div.factorial_significant ? "yes" : "no") +
                 ", split-split " + (div.split_significant ? "yes" : "no") +
                 "\n";
        }
      }
      return out;
    }
    case OutputFormat::Csv: {
      std::string out = csv_join({"analysis", "source", "df", "ss", "ms", "f",
                                  "df1", "df2", "p_value", "significant"});
      for (const Section& sec : sections) {
        for (const AnovaRow& row : sec.table->rows) {
          std::vector<std::string> cells = {
              sec.name, std::string(source_name(row.source)),
              std::to_string(row.df), shortest(row.ss), shortest(row.ms)};
          if (const FTestResult* res = find_result(*sec.results, row.source)) {
            cells.push_back(shortest(res->f_value));
            cells.push_back(shortest(res->df1));
            cells.push_back(shortest(res->df2));
            cells.push_back(shortest(res->p_value));
            cells.push_back(res->p_value < cmp.alpha ? "1" : "0");
          } else {
            cells.insert(cells.end(), 5, "");
          }
          out += csv_join(cells);
        }
      }
      return out;
    }
    case OutputFormat::Json: {
      json doc = {{"alpha", cmp.alpha}};
      for (const Section& sec : sections) {
        json part = table_json(*sec.table);
        json tests = json::array();
        for (const FTestResult& res : *sec.results) {
          tests.push_back(result_json(res));
        }
        part["tests"] = std::move(tests);
        doc[sec.name] = std::move(part);
      }
      json divs = json::array();
      for (const Divergence& div : cmp.divergences) {
        divs.push_back({{"source", std::string(source_name(div.source))},
                        {"strip_split", div.strip_significant},
                        {"factorial", div.factorial_significant},
                        {"split_split", div.split_significant}});
      }
      doc["divergences"] = std::move(divs);
      return doc.dump(2) + "\n";
    }
  }
  throw std::invalid_argument("unknown output format");
}

}  // namespace stripsplit
