#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stripsplit/compare.hpp"
#include "stripsplit/report.hpp"
#include "stripsplit/simulator.hpp"

namespace {

using namespace stripsplit;

DesignDims parse_dims(const std::string& text) {
  std::array<int, 4> v{};
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t used = 0;
    v[i] = std::stoi(text.substr(pos), &used);
    pos += used;
    if (i < 3) {
      if (pos >= text.size() || text[pos] != ',') {
        throw std::invalid_argument("expected --dims r,a,b,c, got " + text);
      }
      ++pos;
    }
  }
  if (pos != text.size()) {
    throw std::invalid_argument("expected --dims r,a,b,c, got " + text);
  }
  return DesignDims(v[0], v[1], v[2], v[3]);
}

std::map<VarianceComponent, double> parse_sigmas(
    const std::vector<std::string>& entries) {
  std::map<VarianceComponent, double> sigmas;
  for (const std::string& entry : entries) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected --sigma NAME=VALUE, got " + entry);
    }
    const VarianceComponent comp = parse_component(entry.substr(0, eq));
    std::size_t used = 0;
    const std::string value = entry.substr(eq + 1);
    const double sigma = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("bad variance value in " + entry);
    }
    sigmas[comp] = sigma;
  }
  return sigmas;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Exact ANOVA for balanced strip-split plot designs: tables, expected "
      "mean squares, F tests with approximate df, and a Monte Carlo checker"};
  app.require_subcommand(1);

  std::string model_code;
  std::string data_path;
  std::string dims_text;
  std::string format_name = "text";
  std::string emit_dir;
  std::vector<std::string> sigma_entries;
  double alpha = 0.05;
  double grand_mean = 0.0;
  int reps = 0;
  int workers = 1;
  std::uint64_t seed = 0;

  CLI::App* anova_cmd = app.add_subcommand(
      "anova", "ANOVA table and F tests for a CSV dataset");
  anova_cmd->add_option("--model", model_code, "factor kinds, e.g. FFF or RFR")
      ->required();
  anova_cmd->add_option("--data", data_path, "CSV file (block,A,B,C,y)")
      ->required();
  anova_cmd->add_option("--alpha", alpha, "significance level")->capture_default_str();
  anova_cmd->add_option("--format", format_name, "text, csv or json")->capture_default_str();

  CLI::App* ems_cmd = app.add_subcommand(
      "ems", "expected mean squares of a model variant");
  ems_cmd->add_option("--model", model_code, "factor kinds, e.g. FFF or RFR")
      ->required();
  ems_cmd->add_option("--dims", dims_text,
                      "r,a,b,c; omit for symbolic coefficients");
  ems_cmd->add_option("--format", format_name, "text, csv or json")->capture_default_str();

  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "draw replicate datasets and audit mean squares");
  sim_cmd->add_option("--model", model_code, "factor kinds, e.g. FFF or RFR")
      ->required();
  sim_cmd->add_option("--dims", dims_text, "r,a,b,c")->required();
  sim_cmd
      ->add_option("--sigma", sigma_entries,
                   "variance component, e.g. eT=1.0 or s2_AB=0.5")
      ->take_all();
  sim_cmd->add_option("--reps", reps, "number of replicates")->required();
  sim_cmd->add_option("--seed", seed, "stream seed")->required();
  sim_cmd->add_option("--mean", grand_mean, "grand mean")->capture_default_str();
  sim_cmd->add_option("--emit-csv", emit_dir,
                      "also write each replicate as CSV into this directory");
  sim_cmd->add_option("--workers", workers, "worker threads")->capture_default_str();
  sim_cmd->add_option("--format", format_name, "text, csv or json")->capture_default_str();

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "strip-split vs factorial vs split-split analysis");
  compare_cmd->add_option("--data", data_path, "CSV file (block,A,B,C,y)")
      ->required();
  compare_cmd->add_option("--alpha", alpha, "significance level")->capture_default_str();
  compare_cmd->add_option("--format", format_name, "text, csv or json")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  const OutputFormat format = parse_format(format_name);

  if (anova_cmd->parsed()) {
    const ModelVariant model = ModelVariant::parse(model_code);
    const BalancedLayout layout = ingest_csv_file(data_path);
    const AnovaTable table = anova_table(layout);
    const std::vector<FTestResult> results =
        evaluate(f_test_plan(model), table);
    std::cout << render_analysis(table, results, alpha, format);
    return 0;
  }

  if (ems_cmd->parsed()) {
    const ModelVariant model = ModelVariant::parse(model_code);
    std::optional<DesignDims> dims;
    if (!dims_text.empty()) dims = parse_dims(dims_text);
    std::cout << render_ems(model, dims, format);
    return 0;
  }

  if (sim_cmd->parsed()) {
    SimSpec spec;
    spec.model = ModelVariant::parse(model_code);
    spec.dims = parse_dims(dims_text);
    spec.sigmas = parse_sigmas(sigma_entries);
    spec.grand_mean = grand_mean;
    spec.n_reps = reps;
    spec.seed = seed;
    validate(spec);

    if (!emit_dir.empty()) {
      std::filesystem::create_directories(emit_dir);
      for (int rep = 0; rep < spec.n_reps; ++rep) {
        RandomStream stream = replicate_stream(spec.seed, rep);
        const BalancedLayout layout = simulate_one(spec, stream);
        char name[32];
        std::snprintf(name, sizeof(name), "rep_%05d.csv", rep);
        std::ofstream out(std::filesystem::path(emit_dir) / name,
                          std::ios::binary);
        if (!out) {
          throw std::runtime_error("cannot write replicate file in " +
                                   emit_dir);
        }
        write_csv(layout, out);
      }
      std::cerr << "wrote " << spec.n_reps << " replicate files to "
                << emit_dir << "\n";
    }

    const std::vector<EmsCheckRow> rows = verify_ems(spec, workers);
    std::cout << render_ems_check(rows, format);
    return 0;
  }

  const BalancedLayout layout = ingest_csv_file(data_path);
  const DesignComparison cmp = compare_designs(layout, alpha);
  std::cout << render_comparison(cmp, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
