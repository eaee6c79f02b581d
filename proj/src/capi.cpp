#include "cclf/cclf.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "cclf/corpus.hpp"
#include "cclf/embedder.hpp"
#include "cclf/error.hpp"
#include "cclf/metrics.hpp"
#include "cclf/orchestrator.hpp"
#include "cclf/report.hpp"

struct cclf_corpus {
  std::vector<cclf::CategoryDataset> datasets;
};

struct cclf_backend {
  std::unique_ptr<cclf::EmbeddingBackend> impl;
};

struct cclf_artifact {
  cclf::ClassifierArtifact impl;
};

struct cclf_report {
  std::vector<cclf::CategoryResult> results;

  cclf::EvalReport build() const { return cclf::build_report(results, cclf::competition_baseline()); }
};

namespace {

thread_local std::string g_last_error;

cclf_status set_error(cclf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
cclf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const cclf::Error& e) {
    return set_error(static_cast<cclf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CCLF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CCLF_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(CCLF_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool condition, const char* what) {
  if (!condition) cclf::fail(cclf::ErrorCode::kInvalidArgument, what);
}

cclf_status copy_string(const std::string& text, char* buf, size_t len) {
  if (buf == nullptr || len <= text.size()) {
    return set_error(CCLF_ERR_BUFFER_TOO_SMALL, "buffer of " + std::to_string(len) + " bytes cannot hold '" +
                                                    text + "'");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return CCLF_OK;
}

char* dup_string(const std::string& text) {
  auto* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

const cclf::CategoryDataset& dataset_at(const cclf_corpus* corpus, size_t index) {
  require(corpus != nullptr, "corpus is null");
  if (index >= corpus->datasets.size()) {
    cclf::fail(cclf::ErrorCode::kInvalidArgument, "corpus index " + std::to_string(index) + " out of range");
  }
  return corpus->datasets[index];
}

cclf::HeadSolver to_solver(int32_t solver) {
  switch (solver) {
    case CCLF_SOLVER_NEWTON_CG: return cclf::HeadSolver::kNewtonCg;
    case CCLF_SOLVER_LBFGS: return cclf::HeadSolver::kLbfgs;
    case CCLF_SOLVER_LIBLINEAR: return cclf::HeadSolver::kLiblinear;
  }
  cclf::fail(cclf::ErrorCode::kInvalidArgument, "unknown solver " + std::to_string(solver));
}

int32_t from_solver(cclf::HeadSolver solver) {
  switch (solver) {
    case cclf::HeadSolver::kNewtonCg: return CCLF_SOLVER_NEWTON_CG;
    case cclf::HeadSolver::kLbfgs: return CCLF_SOLVER_LBFGS;
    case cclf::HeadSolver::kLiblinear: return CCLF_SOLVER_LIBLINEAR;
  }
  return CCLF_SOLVER_LBFGS;
}

cclf::Hyperparams to_hp(const cclf_hyperparams* hp) {
  if (hp == nullptr) return cclf::tuned_hyperparams();
  return {hp->learning_rate, hp->epochs, hp->head_max_iterations, to_solver(hp->solver)};
}

void from_hp(const cclf::Hyperparams& hp, cclf_hyperparams* out) {
  out->learning_rate = hp.learning_rate;
  out->epochs = hp.epochs;
  out->head_max_iterations = hp.head_max_iterations;
  out->solver = from_solver(hp.solver);
}

cclf::FormattingVariant to_variant(int32_t variant) {
  if (variant == CCLF_VARIANT_WITH_CLASSNAME) return cclf::FormattingVariant::kWithClassname;
  if (variant == CCLF_VARIANT_SENTENCE_ONLY) return cclf::FormattingVariant::kSentenceOnly;
  cclf::fail(cclf::ErrorCode::kInvalidArgument, "unknown variant " + std::to_string(variant));
}

cclf::TrainOptions to_options(const cclf_train_options* o) {
  cclf::TrainOptions out;
  if (o == nullptr) return out;
  out.variant = to_variant(o->variant);
  out.seed = o->seed;
  out.pair_iterations = o->pair_iterations;
  out.batch_size = o->batch_size;
  if (o->l2_strength > 0.0) out.l2_strength = o->l2_strength;
  out.head_tolerance = o->head_tolerance;
  return out;
}

cclf_metrics to_c(const cclf::CategoryMetrics& m) {
  return {m.precision, m.recall, m.f1, m.weighted_f1, m.accuracy};
}

cclf_confusion to_c(const cclf::ConfusionCounts& c) { return {c.tp, c.fp, c.tn, c.fn}; }

cclf::ConfusionCounts from_c(const cclf_confusion& c) { return {c.tp, c.fp, c.tn, c.fn}; }

template <size_t N>
void copy_fixed(char (&dst)[N], const std::string& src) {
  std::strncpy(dst, src.c_str(), N - 1);
  dst[N - 1] = '\0';
}

cclf::ColumnMap columns_from(const char* aliases) {
  return aliases ? cclf::ColumnMap::parse(aliases) : cclf::ColumnMap{};
}

template <typename Writer>
cclf_status write_report_file(const cclf_report* report, const char* path, Writer&& writer) {
  return guarded([&] {
    require(report && path, "arguments must be non-null");
    std::ofstream out(path, std::ios::binary);
    if (!out) cclf::fail(cclf::ErrorCode::kIo, std::string("cannot write ") + path);
    writer(report->build(), out);
    if (!out) cclf::fail(cclf::ErrorCode::kIo, std::string("write failed for ") + path);
    return CCLF_OK;
  });
}

}  // namespace

extern "C" {

const char* cclf_version(void) { return "1.0.0"; }

const char* cclf_last_error(void) { return g_last_error.c_str(); }

const char* cclf_status_name(cclf_status status) {
  if (status == CCLF_ERR_BUFFER_TOO_SMALL) return "BufferTooSmall";
  return cclf::to_string(static_cast<cclf::ErrorCode>(status)).data();
}

void cclf_string_free(char* text) { std::free(text); }

void cclf_default_hyperparams(cclf_hyperparams* out) {
  if (out) from_hp(cclf::tuned_hyperparams(), out);
}

void cclf_base_hyperparams(cclf_hyperparams* out) {
  if (out) from_hp(cclf::base_hyperparams(), out);
}

void cclf_default_train_options(cclf_train_options* out) {
  if (!out) return;
  const cclf::TrainOptions d;
  out->variant = CCLF_VARIANT_WITH_CLASSNAME;
  out->seed = d.seed;
  out->pair_iterations = d.pair_iterations;
  out->batch_size = d.batch_size;
  out->l2_strength = 0.0;
  out->head_tolerance = d.head_tolerance;
}

cclf_status cclf_corpus_open(const char* root, const char* aliases, cclf_corpus** out) {
  return guarded([&] {
    require(root && out, "root and out must be non-null");
    auto corpus = std::make_unique<cclf_corpus>();
    corpus->datasets = cclf::load_corpus(root, columns_from(aliases));
    *out = corpus.release();
    return CCLF_OK;
  });
}

cclf_status cclf_corpus_open_file(const char* path, const char* category, const char* aliases,
                                  cclf_corpus** out) {
  return guarded([&] {
    require(path && category && out, "path, category and out must be non-null");
    auto corpus = std::make_unique<cclf_corpus>();
    corpus->datasets.push_back(cclf::load_category(path, cclf::parse_category(category), columns_from(aliases)));
    *out = corpus.release();
    return CCLF_OK;
  });
}

void cclf_corpus_free(cclf_corpus* corpus) { delete corpus; }

size_t cclf_corpus_size(const cclf_corpus* corpus) { return corpus ? corpus->datasets.size() : 0; }

cclf_status cclf_corpus_category(const cclf_corpus* corpus, size_t index, char* buf, size_t len) {
  return guarded([&] { return copy_string(dataset_at(corpus, index).category().str(), buf, len); });
}

cclf_status cclf_corpus_find(const cclf_corpus* corpus, const char* category, size_t* index) {
  return guarded([&] {
    require(corpus && category && index, "arguments must be non-null");
    const auto wanted = cclf::parse_category(category);
    for (size_t i = 0; i < corpus->datasets.size(); ++i) {
      if (corpus->datasets[i].category() == wanted) {
        *index = i;
        return CCLF_OK;
      }
    }
    return set_error(CCLF_ERR_MISSING_CATEGORY, wanted.str() + " is not in the corpus");
  });
}

cclf_status cclf_corpus_counts(const cclf_corpus* corpus, size_t index, cclf_counts* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const auto& c = dataset_at(corpus, index).counts();
    *out = {c.train_pos, c.train_neg, c.test_pos, c.test_neg};
    return CCLF_OK;
  });
}

size_t cclf_corpus_warning_count(const cclf_corpus* corpus, size_t index) {
  if (!corpus || index >= corpus->datasets.size()) return 0;
  return corpus->datasets[index].warnings().size();
}

cclf_status cclf_corpus_validate(const cclf_corpus* corpus, cclf_discrepancy* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(corpus && count, "corpus and count must be non-null");
    const auto found = cclf::validate_against_reference(corpus->datasets);
    *count = found.size();
    for (size_t i = 0; i < found.size() && i < cap && out; ++i) {
      const auto& d = found[i];
      out[i].unknown_category = d.kind == cclf::DiscrepancyKind::kUnknownCategory;
      copy_fixed(out[i].category, d.category.str());
      copy_fixed(out[i].field, d.field);
      out[i].expected = d.expected;
      out[i].actual = d.actual;
    }
    return CCLF_OK;
  });
}

char* cclf_backend_ids(void) {
  std::string joined;
  for (const auto& id : cclf::BackendRegistry::instance().backend_ids()) joined += id + "\n";
  return dup_string(joined);
}

cclf_status cclf_backend_create(const char* backend_id, size_t dimension, uint64_t seed, cclf_backend** out) {
  return guarded([&] {
    require(backend_id && out, "backend_id and out must be non-null");
    auto backend = std::make_unique<cclf_backend>();
    backend->impl = cclf::BackendRegistry::instance().create(backend_id, {dimension, seed});
    *out = backend.release();
    return CCLF_OK;
  });
}

void cclf_backend_free(cclf_backend* backend) { delete backend; }

size_t cclf_backend_dimension(const cclf_backend* backend) {
  return backend ? backend->impl->dimension() : 0;
}

cclf_status cclf_backend_encode(const cclf_backend* backend, const char* text, double* out, size_t len) {
  return guarded([&] {
    require(backend && text && out, "arguments must be non-null");
    const auto v = backend->impl->encode_one(text);
    if (len < static_cast<size_t>(v.size())) {
      return set_error(CCLF_ERR_BUFFER_TOO_SMALL, "encode needs " + std::to_string(v.size()) + " slots");
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
    return CCLF_OK;
  });
}

cclf_status cclf_train(const cclf_corpus* corpus, size_t index, const cclf_backend* backend,
                       const cclf_hyperparams* hp, const cclf_train_options* options, cclf_artifact** out) {
  return guarded([&] {
    require(backend && out, "backend and out must be non-null");
    auto artifact = std::make_unique<cclf_artifact>();
    artifact->impl = cclf::train_category(dataset_at(corpus, index), *backend->impl, to_hp(hp), to_options(options));
    *out = artifact.release();
    return CCLF_OK;
  });
}

cclf_status cclf_train_many(const cclf_corpus* corpus, const size_t* indices, size_t n, const cclf_backend* backend,
                            const cclf_hyperparams* hp, const cclf_train_options* options, int32_t max_parallel,
                            cclf_artifact** out) {
  return guarded([&] {
    require(corpus && backend && out && (indices || n == 0), "arguments must be non-null");
    std::vector<cclf::CategoryDataset> chosen;
    for (size_t i = 0; i < n; ++i) chosen.push_back(dataset_at(corpus, indices[i]));
    auto trained = cclf::train_categories(chosen, *backend->impl, to_hp(hp), to_options(options), max_parallel);
    for (size_t i = 0; i < n; ++i) out[i] = new cclf_artifact{std::move(trained[i])};
    return CCLF_OK;
  });
}

cclf_status cclf_artifact_save(const cclf_artifact* artifact, const char* dir) {
  return guarded([&] {
    require(artifact && dir, "artifact and dir must be non-null");
    cclf::save_artifact(artifact->impl, dir);
    return CCLF_OK;
  });
}

cclf_status cclf_artifact_load(const char* dir, cclf_artifact** out) {
  return guarded([&] {
    require(dir && out, "dir and out must be non-null");
    *out = new cclf_artifact{cclf::load_artifact(dir)};
    return CCLF_OK;
  });
}

void cclf_artifact_free(cclf_artifact* artifact) { delete artifact; }

cclf_status cclf_artifact_category(const cclf_artifact* artifact, char* buf, size_t len) {
  return guarded([&] {
    require(artifact != nullptr, "artifact is null");
    return copy_string(artifact->impl.category.str(), buf, len);
  });
}

int32_t cclf_artifact_variant(const cclf_artifact* artifact) {
  return artifact && artifact->impl.variant == cclf::FormattingVariant::kSentenceOnly
             ? CCLF_VARIANT_SENTENCE_ONLY
             : CCLF_VARIANT_WITH_CLASSNAME;
}

void cclf_artifact_hyperparams(const cclf_artifact* artifact, cclf_hyperparams* out) {
  if (artifact && out) from_hp(artifact->impl.hyperparams, out);
}

size_t cclf_artifact_pair_count(const cclf_artifact* artifact) {
  return artifact ? artifact->impl.metadata.pair_count : 0;
}

cclf_status cclf_classify(const cclf_artifact* artifact, const char* sentence, const char* classname,
                          int32_t* label, double* probability) {
  return guarded([&] {
    require(artifact && sentence && label && probability, "arguments must be non-null");
    const auto& a = artifact->impl;
    if (a.variant == cclf::FormattingVariant::kWithClassname && classname == nullptr) {
      return set_error(CCLF_ERR_VARIANT_MISMATCH,
                       "VariantMismatch: " + a.category.str() + " expects a classname with each sentence");
    }
    const auto input = cclf::format_input(sentence, classname ? classname : "", a.variant);
    *probability = a.probability(input);
    *label = *probability >= 0.5 ? 1 : 0;
    return CCLF_OK;
  });
}

cclf_status cclf_evaluate(const cclf_artifact* artifact, const cclf_corpus* corpus, size_t index,
                          cclf_confusion* counts, cclf_metrics* metrics) {
  return guarded([&] {
    require(artifact != nullptr, "artifact is null");
    const auto ev = cclf::evaluate_artifact(artifact->impl, dataset_at(corpus, index));
    if (counts) *counts = to_c(ev.counts);
    if (metrics) *metrics = to_c(ev.metrics);
    return CCLF_OK;
  });
}

cclf_status cclf_tune(const cclf_corpus* corpus, size_t index, const cclf_backend* backend, int32_t trials,
                      uint64_t seed, int32_t use_test_split, const cclf_train_options* options,
                      cclf_hyperparams* best, cclf_trial* history, size_t history_cap) {
  return guarded([&] {
    require(backend && best, "backend and best must be non-null");
    cclf::TuneOptions tune;
    tune.trials = trials;
    tune.seed = seed;
    tune.use_test_split = use_test_split != 0;
    tune.train = to_options(options);
    const auto result = cclf::tune_hyperparams(dataset_at(corpus, index), *backend->impl, cclf::SearchSpace{}, tune);
    from_hp(result.best, best);
    for (size_t i = 0; i < result.history.size() && i < history_cap && history; ++i) {
      const auto& t = result.history[i];
      history[i].index = t.index;
      from_hp(t.hyperparams, &history[i].hyperparams);
      history[i].objective_f1 = t.objective_f1;
      history[i].wall_seconds = t.wall_seconds;
    }
    return CCLF_OK;
  });
}

cclf_status cclf_benchmark(const cclf_corpus* corpus, size_t index, const cclf_backend* const* backends,
                           size_t n_backends, int32_t n_per_class, int32_t epochs, uint64_t seed,
                           const cclf_train_options* options, cclf_benchmark_row* rows) {
  return guarded([&] {
    require(backends && rows, "backends and rows must be non-null");
    std::vector<const cclf::EmbeddingBackend*> impls;
    for (size_t i = 0; i < n_backends; ++i) {
      require(backends[i] != nullptr, "backend handle is null");
      impls.push_back(backends[i]->impl.get());
    }
    const auto train = to_options(options);
    cclf::BenchmarkOptions bench;
    bench.n_per_class = n_per_class;
    bench.epochs = epochs;
    bench.seed = seed;
    bench.variant = train.variant;
    bench.pair_iterations = train.pair_iterations;
    bench.batch_size = train.batch_size;
    const auto result = cclf::few_shot_benchmark(impls, dataset_at(corpus, index), bench);
    for (size_t i = 0; i < result.size(); ++i) {
      copy_fixed(rows[i].backend_id, result[i].backend_id);
      rows[i].accuracy = result[i].accuracy;
      rows[i].f1 = result[i].f1;
      rows[i].wall_seconds = result[i].wall_seconds;
    }
    return CCLF_OK;
  });
}

cclf_status cclf_confusion_from(const int32_t* predictions, const int32_t* labels, size_t n, cclf_confusion* out) {
  return guarded([&] {
    require(predictions && labels && out, "arguments must be non-null");
    *out = to_c(cclf::confusion(std::span<const int>(predictions, n), std::span<const int>(labels, n)));
    return CCLF_OK;
  });
}

cclf_status cclf_metrics_from(const cclf_confusion* counts, cclf_metrics* out) {
  return guarded([&] {
    require(counts && out, "arguments must be non-null");
    *out = to_c(cclf::category_metrics(from_c(*counts)));
    return CCLF_OK;
  });
}

cclf_status cclf_report_create(cclf_report** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new cclf_report{};
    return CCLF_OK;
  });
}

cclf_status cclf_report_load_csv(const char* path, cclf_report** out) {
  return guarded([&] {
    require(path && out, "path and out must be non-null");
    auto report = std::make_unique<cclf_report>();
    report->results = cclf::read_results_csv(path);
    report->build();  // rejects duplicate categories early
    *out = report.release();
    return CCLF_OK;
  });
}

void cclf_report_free(cclf_report* report) { delete report; }

cclf_status cclf_report_add_counts(cclf_report* report, const char* category, const cclf_confusion* counts) {
  return guarded([&] {
    require(report && category && counts, "arguments must be non-null");
    const auto c = from_c(*counts);
    report->results.push_back({cclf::parse_category(category), cclf::category_metrics(c), c});
    return CCLF_OK;
  });
}

cclf_status cclf_report_add_metrics(cclf_report* report, const char* category, const cclf_metrics* m) {
  return guarded([&] {
    require(report && category && m, "arguments must be non-null");
    report->results.push_back(
        {cclf::parse_category(category), {m->precision, m->recall, m->f1, m->weighted_f1, m->accuracy}, std::nullopt});
    return CCLF_OK;
  });
}

cclf_status cclf_report_add_predictions(cclf_report* report, const char* category, const char* path) {
  return guarded([&] {
    require(report && category && path, "arguments must be non-null");
    const auto c = cclf::read_predictions_csv(path);
    report->results.push_back({cclf::parse_category(category), cclf::category_metrics(c), c});
    return CCLF_OK;
  });
}

size_t cclf_report_size(const cclf_report* report) { return report ? report->results.size() : 0; }

cclf_status cclf_report_averages(const cclf_report* report, cclf_metrics* out) {
  return guarded([&] {
    require(report && out, "arguments must be non-null");
    *out = to_c(report->build().averages);
    return CCLF_OK;
  });
}

cclf_status cclf_report_score(const cclf_report* report, double* score, double* fraction) {
  return guarded([&] {
    require(report && score && fraction, "arguments must be non-null");
    const auto built = report->build();
    if (!built.submission) {
      return set_error(CCLF_ERR_MISSING_CATEGORY, "MissingCategory: submission score needs all 19 categories, have " +
                                                      std::to_string(built.rows.size()));
    }
    *score = built.submission->score;
    *fraction = built.submission->outperformed_fraction;
    return CCLF_OK;
  });
}


cclf_status cclf_report_write_csv(const cclf_report* report, const char* path) {
  return write_report_file(report, path, [](const cclf::EvalReport& r, std::ostream& o) {
    cclf::write_report_csv(r, o);
  });
}

cclf_status cclf_report_write_summary(const cclf_report* report, const char* path) {
  return write_report_file(report, path, [](const cclf::EvalReport& r, std::ostream& o) {
    cclf::write_summary_csv(r, o);
  });
}

cclf_status cclf_report_write_svg(const cclf_report* report, const char* path) {
  return write_report_file(report, path, [](const cclf::EvalReport& r, std::ostream& o) {
    o << cclf::render_f1_chart_svg(r);
  });
}

char* cclf_report_table(const cclf_report* report) {
  char* out = nullptr;
  const auto status = guarded([&] {
    require(report != nullptr, "report is null");
    out = dup_string(cclf::render_table(report->build()));
    return CCLF_OK;
  });
  return status == CCLF_OK ? out : nullptr;
}

cclf_status cclf_ablation_delta(const cclf_report* with_classname, const cclf_report* sentence_only,
                                cclf_ablation* out) {
  return guarded([&] {
    require(with_classname && sentence_only && out, "arguments must be non-null");
    const auto d = cclf::ablation_delta(with_classname->build(), sentence_only->build());
    *out = {d.precision, d.recall, d.f1};
    return CCLF_OK;
  });
}

}  // extern "C"
