#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "submatch/generator.hpp"

int main(int argc, char** argv) {
  CLI::App app{"random matching instance generator"};
  app.name("gen_instances");

  submatch::GenParams params;
  std::string out_dir = "instances";
  std::string mode = "extract";

  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--seed", params.seed, "generator seed");
  app.add_option("--data-vertices", params.data_vertices, "data graph size");
  app.add_option("--data-density", params.data_density, "data graph edge probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--labels", params.label_count, "number of distinct labels")
      ->check(CLI::PositiveNumber);
  app.add_option("--queries", params.query_count, "number of query files");
  app.add_option("--query-size", params.query_size, "vertices per query")
      ->check(CLI::PositiveNumber);
  app.add_option("--query-density", params.query_density,
                 "edge density of independent-mode queries")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--mode", mode, "extract: induced subgraphs of the data graph; "
                                 "independent: fresh random connected graphs")
      ->check(CLI::IsMember({"extract", "independent"}));

  CLI11_PARSE(app, argc, argv);
  params.mode =
      mode == "extract" ? submatch::QueryMode::kExtract : submatch::QueryMode::kIndependent;

  try {
    auto files = submatch::gen_instances(out_dir, params);
    for (const auto& f : files) std::cout << f.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "gen_instances: " << e.what() << std::endl;
    return 1;
  }
}
