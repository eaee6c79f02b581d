#include <json.hpp>

#include <fstream>
#include <sstream>

#include "cclf/error.hpp"
#include "cclf/orchestrator.hpp"

namespace cclf {
namespace {

using nlohmann::json;

constexpr const char* kManifest = "manifest.json";
constexpr const char* kHeadFile = "head.txt";
constexpr const char* kBackendFile = "backend.txt";

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kBadArtifact, "missing " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorCode::kIo, "cannot write " + path.string());
}

json hyperparams_json(const Hyperparams& hp) {
  return {{"learning_rate", hp.learning_rate},
          {"epochs", hp.epochs},
          {"head_max_iterations", hp.head_max_iterations},
          {"solver", std::string(to_string(hp.solver))}};
}

Hyperparams hyperparams_from(const json& j) {
  Hyperparams hp;
  hp.learning_rate = j.at("learning_rate").get<double>();
  hp.epochs = j.at("epochs").get<int>();
  hp.head_max_iterations = j.at("head_max_iterations").get<int>();
  const auto solver = parse_solver(j.at("solver").get<std::string>());
  if (!solver) fail(ErrorCode::kBadArtifact, "manifest has an unknown solver");
  hp.solver = *solver;
  return hp;
}

}  // namespace

void save_artifact(const ClassifierArtifact& artifact, const std::filesystem::path& dir) {
  if (!artifact.backend) fail(ErrorCode::kBadArtifact, "artifact has no backend");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  const auto& meta = artifact.metadata;
  const json manifest = {
      {"format", "cclf-classifier"},
      {"version", kManifestVersion},
      {"category", {{"language", std::string(to_string(artifact.category.language))},
                    {"name", artifact.category.name}}},
      {"variant", std::string(to_string(artifact.variant))},
      {"backend", {{"id", artifact.backend->backend_id()},
                   {"dimension", artifact.backend->dimension()},
                   {"state_file", kBackendFile}}},
      {"head_file", kHeadFile},
      {"hyperparams", hyperparams_json(artifact.hyperparams)},
      {"training", {{"seed", meta.seed},
                    {"pair_iterations", meta.pair_iterations},
                    {"batch_size", meta.batch_size},
                    {"pair_count", meta.pair_count},
                    {"train_samples", meta.train_samples},
                    {"epoch_loss", meta.epoch_loss},
                    {"train_seconds", meta.train_seconds},
                    {"created_at", meta.created_at}}},
  };

  std::ostringstream head, backend;
  save_head(artifact.head, head);
  artifact.backend->save_state(backend);
  write_text(dir / kHeadFile, head.str());
  write_text(dir / kBackendFile, backend.str());
  write_text(dir / kManifest, manifest.dump(2) + "\n");
}

ClassifierArtifact load_artifact(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_text(dir / kManifest));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kBadArtifact, (dir / kManifest).string() + ": " + e.what());
  }

  try {
    if (manifest.at("format").get<std::string>() != "cclf-classifier") {
      fail(ErrorCode::kBadArtifact, dir.string() + " is not a classifier artifact");
    }
    const int version = manifest.at("version").get<int>();
    if (version != kManifestVersion) {
      fail(ErrorCode::kBadArtifact, "unsupported manifest version " + std::to_string(version));
    }

    ClassifierArtifact a;
    const auto& cat = manifest.at("category");
    const auto language = parse_language(cat.at("language").get<std::string>());
    if (!language) fail(ErrorCode::kBadArtifact, "manifest has an unknown language");
    a.category = CategoryId{*language, cat.at("name").get<std::string>()};
    const auto variant = parse_variant(manifest.at("variant").get<std::string>());
    if (!variant) fail(ErrorCode::kBadArtifact, "manifest has an unknown variant");
    a.variant = *variant;
    a.hyperparams = hyperparams_from(manifest.at("hyperparams"));

    const auto& backend = manifest.at("backend");
    std::istringstream state(read_text(dir / backend.at("state_file").get<std::string>()));
    a.backend = BackendRegistry::instance().restore(backend.at("id").get<std::string>(), state);
    if (a.backend->dimension() != backend.at("dimension").get<std::size_t>()) {
      fail(ErrorCode::kBadArtifact, "backend state dimension disagrees with the manifest");
    }

    std::istringstream head(read_text(dir / manifest.at("head_file").get<std::string>()));
    a.head = load_head(head);
    if (static_cast<std::size_t>(a.head.weights.size()) != a.backend->dimension()) {
      fail(ErrorCode::kBadArtifact, "head dimension disagrees with the backend");
    }

    const auto& t = manifest.at("training");
    auto& m = a.metadata;
    m.seed = t.at("seed").get<std::uint64_t>();
    m.pair_iterations = t.at("pair_iterations").get<int>();
    m.batch_size = t.at("batch_size").get<int>();
    m.pair_count = t.at("pair_count").get<std::size_t>();
    m.train_samples = t.at("train_samples").get<std::size_t>();
    m.epoch_loss = t.at("epoch_loss").get<std::vector<double>>();
    m.train_seconds = t.at("train_seconds").get<double>();
    m.created_at = t.at("created_at").get<std::string>();
    return a;
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadArtifact, (dir / kManifest).string() + ": " + e.what());
  }
}

}  // namespace cclf
