// Command-line front end over the cclf C API.
//
//   cclf ingest     --data-root DIR
//   cclf train      --data-root DIR --output-root DIR [--category Java/Ownership ...]
//   cclf evaluate   --output-root DIR (--models DIR --data-root DIR | --predictions DIR)
//   cclf classify   --model DIR (--text S [--classname C] | --batch FILE)
//   cclf tune       --data-root DIR --category C --trials N --output-root DIR
//   cclf benchmark  --data-root DIR --category C --output-root DIR [--backends a,b]
//   cclf report     --input results.csv --output-root DIR [--ablation-without other.csv]
//
// Exit codes: 0 ok, 1 data discrepancy, 2 usage/config error, 3 runtime failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cclf/cclf.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiscrepancy = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(cclf_status status) {
  switch (status) {
    case CCLF_ERR_INVALID_ARGUMENT:
    case CCLF_ERR_VARIANT_MISMATCH:
    case CCLF_ERR_BOUNDS:
    case CCLF_ERR_UNKNOWN_CATEGORY:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void check(cclf_status status) {
  if (status != CCLF_OK) throw CliError{exit_code_for(status), cclf_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) { throw CliError{kExitUsage, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Corpus = std::unique_ptr<cclf_corpus, Deleter<cclf_corpus, cclf_corpus_free>>;
using Backend = std::unique_ptr<cclf_backend, Deleter<cclf_backend, cclf_backend_free>>;
using Artifact = std::unique_ptr<cclf_artifact, Deleter<cclf_artifact, cclf_artifact_free>>;
using Report = std::unique_ptr<cclf_report, Deleter<cclf_report, cclf_report_free>>;

struct OwnedString {
  char* text;
  ~OwnedString() { cclf_string_free(text); }
};

// Every option a run can depend on; echoed to run_config.ini.
struct RunConfig {
  std::string data_root;
  std::string output_root = "cclf-out";
  std::string backend_id = "toy-hash-encoder";
  std::size_t dimension = 64;
  std::uint64_t backend_seed = 0;
  std::string variant = "with_classname";
  double learning_rate = 1.71e-5;
  int epochs = 6;
  int head_iterations = 241;
  std::string solver = "lbfgs";
  int pair_iterations = 20;
  int batch_size = 16;
  double l2_strength = 0.0;
  double head_tolerance = 1e-4;
  std::uint64_t seed = 0;
  std::vector<std::string> categories;
  int parallel = 1;
  std::string columns;
};

std::string category_of(const cclf_corpus* corpus, std::size_t index) {
  char buf[128];
  check(cclf_corpus_category(corpus, index, buf, sizeof buf));
  return buf;
}

std::string artifact_category(const cclf_artifact* artifact) {
  char buf[128];
  check(cclf_artifact_category(artifact, buf, sizeof buf));
  return buf;
}

std::string dir_name_for(std::string category) {
  for (auto& c : category) {
    if (c == '/') c = '_';
  }
  return category;
}

std::string category_from_file(const fs::path& file) {
  // Predictions are stored as <Language>_<Name>.csv.
  return file.stem().string();
}

Corpus open_corpus(const RunConfig& cfg) {
  if (cfg.data_root.empty()) usage_error("--data-root is required");
  cclf_corpus* raw = nullptr;
  check(cclf_corpus_open(cfg.data_root.c_str(), cfg.columns.empty() ? nullptr : cfg.columns.c_str(), &raw));
  Corpus corpus(raw);
  if (cclf_corpus_size(corpus.get()) == 0) usage_error("no categories found under " + cfg.data_root);
  return corpus;
}

std::vector<std::size_t> selected(const cclf_corpus* corpus, const RunConfig& cfg) {
  std::vector<std::size_t> out;
  if (cfg.categories.empty()) {
    for (std::size_t i = 0; i < cclf_corpus_size(corpus); ++i) out.push_back(i);
    return out;
  }
  for (const auto& name : cfg.categories) {
    std::size_t index = 0;
    check(cclf_corpus_find(corpus, name.c_str(), &index));
    out.push_back(index);
  }
  return out;
}

Backend make_backend(const std::string& backend_id, const RunConfig& cfg) {
  cclf_backend* raw = nullptr;
  check(cclf_backend_create(backend_id.c_str(), cfg.dimension, cfg.backend_seed, &raw));
  return Backend(raw);
}

cclf_hyperparams hyperparams_of(const RunConfig& cfg) {
  cclf_hyperparams hp{};
  hp.learning_rate = cfg.learning_rate;
  hp.epochs = cfg.epochs;
  hp.head_max_iterations = cfg.head_iterations;
  if (cfg.solver == "newton-cg") hp.solver = CCLF_SOLVER_NEWTON_CG;
  else if (cfg.solver == "lbfgs") hp.solver = CCLF_SOLVER_LBFGS;
  else if (cfg.solver == "liblinear") hp.solver = CCLF_SOLVER_LIBLINEAR;
  else usage_error("unknown solver '" + cfg.solver + "'");
  return hp;
}

cclf_train_options options_of(const RunConfig& cfg) {
  cclf_train_options o{};
  cclf_default_train_options(&o);
  if (cfg.variant == "with_classname") o.variant = CCLF_VARIANT_WITH_CLASSNAME;
  else if (cfg.variant == "sentence_only") o.variant = CCLF_VARIANT_SENTENCE_ONLY;
  else usage_error("unknown variant '" + cfg.variant + "'");
  o.seed = cfg.seed;
  o.pair_iterations = cfg.pair_iterations;
  o.batch_size = cfg.batch_size;
  o.l2_strength = cfg.l2_strength;
  o.head_tolerance = cfg.head_tolerance;
  return o;
}

fs::path prepare_output(const RunConfig& cfg) {
  fs::path out(cfg.output_root);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw CliError{kExitRuntime, "cannot create " + out.string() + ": " + ec.message()};
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliError{kExitRuntime, "cannot write " + path.string()};
}

void emit_report(const cclf_report* report, const fs::path& out_dir) {
  check(cclf_report_write_csv(report, (out_dir / "report.csv").c_str()));
  check(cclf_report_write_summary(report, (out_dir / "summary.csv").c_str()));
  check(cclf_report_write_svg(report, (out_dir / "f1_chart.svg").c_str()));
  OwnedString table{cclf_report_table(report)};
  if (!table.text) check(CCLF_ERR_INTERNAL);
  write_file(out_dir / "report.txt", table.text);
  std::cout << table.text;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_full(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---- commands --------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg) {
  const auto corpus = open_corpus(cfg);
  const auto n = cclf_corpus_size(corpus.get());
  std::printf("%-22s %9s %9s %9s %9s %7s\n", "category", "train_pos", "train_neg", "test_pos", "test_neg", "total");
  for (std::size_t i = 0; i < n; ++i) {
    cclf_counts c{};
    check(cclf_corpus_counts(corpus.get(), i, &c));
    std::printf("%-22s %9lld %9lld %9lld %9lld %7lld", category_of(corpus.get(), i).c_str(),
                static_cast<long long>(c.train_pos), static_cast<long long>(c.train_neg),
                static_cast<long long>(c.test_pos), static_cast<long long>(c.test_neg),
                static_cast<long long>(c.train_pos + c.train_neg + c.test_pos + c.test_neg));
    if (const auto w = cclf_corpus_warning_count(corpus.get(), i)) std::printf("  (%zu warnings)", w);
    std::printf("\n");
  }

  std::size_t count = 0;
  check(cclf_corpus_validate(corpus.get(), nullptr, 0, &count));
  std::vector<cclf_discrepancy> found(count);
  check(cclf_corpus_validate(corpus.get(), found.data(), found.size(), &count));
  std::printf("%zu categories loaded, %zu discrepancies\n", n, count);
  for (const auto& d : found) {
    if (d.unknown_category) {
      std::printf("discrepancy: %s is not a reference category\n", d.category);
    } else {
      std::printf("discrepancy: %s %s expected %lld, got %lld\n", d.category, d.field,
                  static_cast<long long>(d.expected), static_cast<long long>(d.actual));
    }
  }
  return count == 0 ? kExitOk : kExitDiscrepancy;
}

int cmd_train(const RunConfig& cfg) {
  const auto corpus = open_corpus(cfg);
  const auto indices = selected(corpus.get(), cfg);
  const auto backend = make_backend(cfg.backend_id, cfg);
  const auto hp = hyperparams_of(cfg);
  const auto options = options_of(cfg);
  const auto out_dir = prepare_output(cfg);

  std::vector<cclf_artifact*> raw(indices.size(), nullptr);
  check(cclf_train_many(corpus.get(), indices.data(), indices.size(), backend.get(), &hp, &options, cfg.parallel,
                        raw.data()));
  std::vector<Artifact> artifacts;
  for (auto* a : raw) artifacts.emplace_back(a);

  for (const auto& a : artifacts) {
    const auto category = artifact_category(a.get());
    const auto dir = out_dir / "models" / dir_name_for(category);
    check(cclf_artifact_save(a.get(), dir.c_str()));
    std::printf("trained %-22s pairs=%zu -> %s\n", category.c_str(), cclf_artifact_pair_count(a.get()),
                dir.string().c_str());
  }
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& models_dir, const std::string& predictions_dir) {
  if (models_dir.empty() == predictions_dir.empty()) usage_error("give exactly one of --models or --predictions");
  cclf_report* raw = nullptr;
  check(cclf_report_create(&raw));
  const Report report(raw);

  if (!predictions_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(predictions_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) usage_error("no prediction files found in " + predictions_dir);
    for (const auto& f : files) {
      check(cclf_report_add_predictions(report.get(), category_from_file(f).c_str(), f.c_str()));
    }
  } else {
    const auto corpus = open_corpus(cfg);
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(models_dir)) {
      if (e.is_directory() && fs::exists(e.path() / "manifest.json")) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) usage_error("no artifacts found in " + models_dir);
    for (const auto& d : dirs) {
      cclf_artifact* a = nullptr;
      check(cclf_artifact_load(d.c_str(), &a));
      const Artifact artifact(a);
      const auto category = artifact_category(artifact.get());
      if (!cfg.categories.empty() &&
          std::find(cfg.categories.begin(), cfg.categories.end(), category) == cfg.categories.end()) {
        continue;
      }
      std::size_t index = 0;
      check(cclf_corpus_find(corpus.get(), category.c_str(), &index));
      cclf_confusion counts{};
      check(cclf_evaluate(artifact.get(), corpus.get(), index, &counts, nullptr));
      check(cclf_report_add_counts(report.get(), category.c_str(), &counts));
    }
  }
  emit_report(report.get(), prepare_output(cfg));
  return kExitOk;
}

int cmd_classify(const std::string& model_dir, const std::string& text, const std::string& classname,
                 bool has_classname, const std::string& batch) {
  if (text.empty() == batch.empty()) usage_error("give exactly one of --text or --batch");
  cclf_artifact* raw = nullptr;
  check(cclf_artifact_load(model_dir.c_str(), &raw));
  const Artifact artifact(raw);
  const auto category = artifact_category(artifact.get());

  auto classify = [&](const std::string& sentence, const char* cls) {
    int32_t label = 0;
    double probability = 0.0;
    check(cclf_classify(artifact.get(), sentence.c_str(), cls, &label, &probability));
    std::cout << category << ',' << label << ',' << fmt_full(probability) << '\n';
  };

  std::cout << "category,label,probability\n";
  if (!text.empty()) {
    classify(text, has_classname ? classname.c_str() : nullptr);
    return kExitOk;
  }

  std::ifstream file;
  std::istream* in = &std::cin;
  if (batch != "-") {
    file.open(batch);
    if (!file) usage_error("cannot read " + batch);
    in = &file;
  }
  // One sentence per line; an optional tab separates a per-line classname.
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab != std::string::npos) {
      const std::string cls = line.substr(tab + 1);
      classify(line.substr(0, tab), cls.c_str());
    } else {
      classify(line, has_classname ? classname.c_str() : nullptr);
    }
  }
  return kExitOk;
}

int cmd_tune(const RunConfig& cfg, int trials, bool use_test_split) {
  if (trials < 1) usage_error("--trials must be at least 1");
  if (cfg.categories.size() != 1) usage_error("tune needs exactly one --category");
  const auto corpus = open_corpus(cfg);
  const auto index = selected(corpus.get(), cfg).front();
  const auto backend = make_backend(cfg.backend_id, cfg);
  const auto options = options_of(cfg);

  cclf_hyperparams best{};
  std::vector<cclf_trial> history(static_cast<std::size_t>(trials));
  check(cclf_tune(corpus.get(), index, backend.get(), trials, cfg.seed, use_test_split ? 1 : 0, &options, &best,
                  history.data(), history.size()));

  static const char* kSolvers[] = {"newton-cg", "lbfgs", "liblinear"};
  const auto out_dir = prepare_output(cfg);
  std::ostringstream csv;
  csv << "trial,learning_rate,epochs,head_max_iterations,solver,objective_f1,wall_seconds\n";
  for (const auto& t : history) {
    csv << t.index << ',' << fmt_full(t.hyperparams.learning_rate) << ',' << t.hyperparams.epochs << ','
        << t.hyperparams.head_max_iterations << ',' << kSolvers[t.hyperparams.solver] << ','
        << fmt_full(t.objective_f1) << ',' << fmt_full(t.wall_seconds) << '\n';
  }
  write_file(out_dir / "trials.csv", csv.str());
  std::ostringstream best_ini;
  best_ini << "learning-rate=" << fmt_full(best.learning_rate) << "\nepochs=" << best.epochs
           << "\nhead-iterations=" << best.head_max_iterations << "\nsolver=" << kSolvers[best.solver] << '\n';
  write_file(out_dir / "best_hyperparams.ini", best_ini.str());
  std::cout << csv.str() << "best: " << best_ini.str();
  return kExitOk;
}

int cmd_benchmark(const RunConfig& cfg, std::vector<std::string> backend_ids, int n_per_class, int epochs) {
  if (cfg.categories.size() != 1) usage_error("benchmark needs exactly one --category");
  const auto corpus = open_corpus(cfg);
  const auto index = selected(corpus.get(), cfg).front();
  if (backend_ids.empty()) {
    OwnedString ids{cclf_backend_ids()};
    std::istringstream lines(ids.text ? ids.text : "");
    for (std::string id; std::getline(lines, id);) backend_ids.push_back(id);
  }

  std::vector<Backend> backends;
  std::vector<const cclf_backend*> handles;
  for (const auto& id : backend_ids) {
    cclf_backend* raw = nullptr;
    const auto status = cclf_backend_create(id.c_str(), cfg.dimension, cfg.backend_seed, &raw);
    if (status == CCLF_ERR_BACKEND_UNAVAILABLE) {
      std::cerr << "skipping " << id << ": " << cclf_last_error() << '\n';
      continue;
    }
    check(status);
    backends.emplace_back(raw);
    handles.push_back(raw);
  }
  if (handles.empty()) throw CliError{kExitRuntime, "none of the requested backends is available"};

  const auto options = options_of(cfg);
  std::vector<cclf_benchmark_row> rows(handles.size());
  check(cclf_benchmark(corpus.get(), index, handles.data(), handles.size(), n_per_class, epochs, cfg.seed, &options,
                       rows.data()));
  std::ostringstream csv;
  csv << "backend_id,accuracy,f1,wall_seconds\n";
  for (const auto& r : rows) {
    csv << r.backend_id << ',' << fmt_full(r.accuracy) << ',' << fmt_full(r.f1) << ',' << fmt_full(r.wall_seconds)
        << '\n';
  }
  write_file(prepare_output(cfg) / "benchmark.csv", csv.str());
  std::cout << csv.str();
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, const std::string& input, const std::string& without) {
  cclf_report* raw = nullptr;
  check(cclf_report_load_csv(input.c_str(), &raw));
  const Report report(raw);
  emit_report(report.get(), prepare_output(cfg));
  if (!without.empty()) {
    cclf_report* other_raw = nullptr;
    check(cclf_report_load_csv(without.c_str(), &other_raw));
    const Report other(other_raw);
    cclf_ablation delta{};
    check(cclf_ablation_delta(report.get(), other.get(), &delta));
    std::cout << "classname ablation (with - without): dP=" << fmt2(delta.precision) << " dR=" << fmt2(delta.recall)
              << " dF1=" << fmt2(delta.f1) << '\n';
  }
  return kExitOk;
}

void add_data_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--data-root", cfg.data_root, "Directory holding <language>/<category>.csv files");
  cmd->add_option("--columns", cfg.columns, "Column aliases as canonical=header,...");
}

void add_output_option(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--output-root", cfg.output_root, "Directory for artifacts and reports")->capture_default_str();
}

void add_training_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--backend", cfg.backend_id, "Embedding backend id")->capture_default_str();
  cmd->add_option("--dimension", cfg.dimension, "Toy encoder dimension")->capture_default_str();
  cmd->add_option("--backend-seed", cfg.backend_seed, "Backend initialisation seed")->capture_default_str();
  cmd->add_option("--variant", cfg.variant, "with_classname | sentence_only")
      ->check(CLI::IsMember({"with_classname", "sentence_only"}))
      ->capture_default_str();
  cmd->add_option("--learning-rate", cfg.learning_rate, "Encoder learning rate")->capture_default_str();
  cmd->add_option("--epochs", cfg.epochs, "Encoder fine-tuning epochs")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--head-iterations", cfg.head_iterations, "Logistic head iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--solver", cfg.solver, "newton-cg | lbfgs | liblinear")
      ->check(CLI::IsMember({"newton-cg", "lbfgs", "liblinear"}))
      ->capture_default_str();
  cmd->add_option("--pair-iterations", cfg.pair_iterations, "Sentence-pair generation rounds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size, "Fine-tuning batch size")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--l2", cfg.l2_strength, "Head L2 strength (0 = 1/n)")->capture_default_str();
  cmd->add_option("--head-tolerance", cfg.head_tolerance, "Head gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Pipeline seed")->capture_default_str();
  cmd->add_option("--parallel", cfg.parallel, "Categories trained concurrently")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code comment sentence classifiers: train, evaluate and classify"};
  app.set_config("--config", "", "INI/TOML file with [command] sections of option defaults; flags win");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string models_dir, predictions_dir, model_dir, text, classname, batch, input, without;
  std::vector<std::string> backend_ids;
  int trials = 20, n_per_class = 32, bench_epochs = 5;
  bool use_test_split = false;

  auto* ingest = app.add_subcommand("ingest", "Load and validate the dataset");
  add_data_options(ingest, cfg);

  auto* train = app.add_subcommand("train", "Train one classifier per category");
  add_data_options(train, cfg);
  add_output_option(train, cfg);
  add_training_options(train, cfg);
  train->add_option("--category", cfg.categories, "Restrict to these categories (Language/Name)");

  auto* evaluate = app.add_subcommand("evaluate", "Score artifacts or stored predictions");
  add_data_options(evaluate, cfg);
  add_output_option(evaluate, cfg);
  evaluate->add_option("--models", models_dir, "Directory of trained artifacts");
  evaluate->add_option("--predictions", predictions_dir, "Directory of <Language>_<Name>.csv prediction files");
  evaluate->add_option("--category", cfg.categories, "Restrict to these categories");

  auto* classify = app.add_subcommand("classify", "Classify sentences with a trained artifact");
  classify->add_option("--model", model_dir, "Artifact directory")->required();
  classify->add_option("--text", text, "Sentence to classify");
  auto* classname_opt = classify->add_option("--classname", classname, "Class or file the sentence came from");
  classify->add_option("--batch", batch, "File with one sentence per line ('-' for stdin)");

  auto* tune = app.add_subcommand("tune", "Random hyperparameter search on one category");
  add_data_options(tune, cfg);
  add_output_option(tune, cfg);
  add_training_options(tune, cfg);
  tune->add_option("--category", cfg.categories, "Category to tune on")->required();
  tune->add_option("--trials", trials, "Number of trials")->capture_default_str();
  tune->add_flag("--use-test-split", use_test_split, "Score trials on the test partition");

  auto* benchmark = app.add_subcommand("benchmark", "Few-shot backend comparison on one category");
  add_data_options(benchmark, cfg);
  add_output_option(benchmark, cfg);
  add_training_options(benchmark, cfg);
  benchmark->add_option("--category", cfg.categories, "Category to benchmark on")->required();
  benchmark->add_option("--backends", backend_ids, "Backend ids (default: all registered)")->delimiter(',');
  benchmark->add_option("--n-per-class", n_per_class, "Training samples per class")->capture_default_str();
  benchmark->add_option("--benchmark-epochs", bench_epochs, "Fine-tuning epochs")->capture_default_str();

  auto* report = app.add_subcommand("report", "Build a report from per-category metric rows");
  add_output_option(report, cfg);
  report->add_option("--input", input, "CSV with language,category,precision,recall,f1[,...]")->required();
  report->add_option("--ablation-without", without, "Sentence-only results to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    // Echo the resolved configuration next to outputs, in a form --config accepts.
    auto echo = [&] {
      const auto dir = prepare_output(cfg);
      auto* sub = app.get_subcommands().front();
      // Empty values would read back as a single empty list entry.
      std::istringstream lines(sub->config_to_str(true, false));
      std::string text = "[" + sub->get_name() + "]\n";
      for (std::string line; std::getline(lines, line);) {
        if (!line.ends_with("=\"\"")) text += line + '\n';
      }
      write_file(dir / "run_config.ini", text);
    };
    if (*ingest) return cmd_ingest(cfg);
    if (*train) {
      echo();
      return cmd_train(cfg);
    }
    if (*evaluate) {
      echo();
      return cmd_evaluate(cfg, models_dir, predictions_dir);
    }
    if (*classify) return cmd_classify(model_dir, text, classname, classname_opt->count() > 0, batch);
    if (*tune) {
      if (trials < 1) usage_error("--trials must be at least 1");
      echo();
      return cmd_tune(cfg, trials, use_test_split);
    }
    if (*benchmark) {
      echo();
      return cmd_benchmark(cfg, backend_ids, n_per_class, bench_epochs);
    }
    if (*report) {
      echo();
      return cmd_report(cfg, input, without);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
