#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "merit/config.hpp"
#include "merit/errors.hpp"
#include "merit/pipeline.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string input;
  std::string workdir;
  std::string embeddings;
  std::string mode;
  std::string classifier;
  long long seed = -1;
  long long max_words = -1;
};

merit::PipelineConfig resolve_config(const CliOverrides& o) {
  merit::PipelineConfig c;
  if (!o.config_path.empty()) c = merit::load_config_file(o.config_path);
  if (!o.input.empty()) c.input_csv = o.input;
  if (!o.workdir.empty()) c.workdir = o.workdir;
  if (!o.embeddings.empty()) c.embeddings_path = o.embeddings;
  if (!o.mode.empty()) c.feature_mode = o.mode;
  if (!o.classifier.empty()) c.classifier = o.classifier;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (o.max_words >= 0) c.summary_max_words = static_cast<std::size_t>(o.max_words);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complaint narrative classification & synthesis pipeline"};
  app.require_subcommand(0, 1);

  CliOverrides o;
  app.add_option("--config", o.config_path, "pipeline config file");
  app.add_option("--seed", o.seed, "override the global seed");
  app.add_option("--workdir", o.workdir, "artifact directory");
  app.add_option("--input", o.input, "input complaints csv (ingest)");
  app.add_option("--embeddings", o.embeddings, "dense embedding matrix file");
  app.add_option("--mode", o.mode,
                 "featurization: tfidf|truncated_tfidf|embed_plain|embed_idf");
  app.add_option("--classifier", o.classifier, "classifier: lr|rf|lstm");
  app.add_option("--max-words", o.max_words, "summary word budget");
  bool print_cfg_flag = false;
  app.add_flag("--print-config", print_cfg_flag, "print the effective config");

  auto* sub_ingest = app.add_subcommand("ingest", "parse, filter and clean complaints");
  auto* sub_summarize = app.add_subcommand("summarize", "extractive summaries with fidelity");
  auto* sub_featurize = app.add_subcommand("featurize", "write the assembled feature matrix");
  auto* sub_train = app.add_subcommand("train", "fit the configured classifier");
  auto* sub_eval = app.add_subcommand("eval", "score the held-out split");
  auto* sub_generate = app.add_subcommand("generate", "adversarial synthetic narratives");
  auto* sub_compare = app.add_subcommand("compare", "diff two metric reports");
  auto* sub_print = app.add_subcommand("print-config", "print the effective config");

  std::string report_a, report_b;
  sub_compare->add_option("report_a", report_a, "baseline report json")->required();
  sub_compare->add_option("report_b", report_b, "comparison report json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    merit::PipelineConfig config = resolve_config(o);
    if (print_cfg_flag || sub_print->parsed()) {
      std::cout << merit::dump_config(config);
      return 0;
    }
    if (sub_ingest->parsed()) return merit::cmd_ingest(config);
    if (sub_summarize->parsed()) return merit::cmd_summarize(config);
    if (sub_featurize->parsed()) return merit::cmd_featurize(config);
    if (sub_train->parsed()) return merit::cmd_train(config);
    if (sub_eval->parsed()) return merit::cmd_eval(config);
    if (sub_generate->parsed()) return merit::cmd_generate(config);
    if (sub_compare->parsed())
      return merit::cmd_compare(report_a, report_b, std::cout);
    std::cerr << app.help();
    return 2;
  } catch (const merit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
