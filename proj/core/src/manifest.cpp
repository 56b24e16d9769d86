#include "sgpvm/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sgpvm {
namespace {

using nlohmann::json;

json parse_checked(const std::string& text, std::string_view kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j.contains("kind")) {
    throw ManifestError("manifest lacks kind/version fields");
  }
  if (j.at("version") != kManifestVersion) {
    throw ManifestError("manifest version " + j.at("version").dump() +
                        " is not supported (expected " +
                        std::to_string(kManifestVersion) + ")");
  }
  if (!kind.empty() && j.at("kind") != kind) {
    throw ManifestError("expected a " + std::string(kind) +
                        " manifest, got " + j.at("kind").dump());
  }
  return j;
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace

std::string artifact_version() { return SGPVM_VERSION; }

std::string to_json(const EvolveManifest& m) {
  json reps = json::array();
  for (const auto& r : m.replicates) {
    reps.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"solved", r.solved},
                    {"solved_at", r.solved_at ? json(*r.solved_at) : json()},
                    {"generations", r.generations},
                    {"history_file", r.history_file},
                    {"history_sha256", r.history_sha256}});
  }
  json j = {{"kind", "evolve"},
            {"version", kManifestVersion},
            {"artifact_version", m.artifact_version},
            {"config", m.config},
            {"ancestor_genome",
             m.ancestor_genome ? json(*m.ancestor_genome) : json()},
            {"replicates", reps},
            {"summary_file", m.summary_file},
            {"summary_sha256", m.summary_sha256}};
  return j.dump(2) + '\n';
}

std::string to_json(const BenchManifest& m) {
  json backends = json::array();
  for (Backend b : m.backends) backends.push_back(backend_name(b));
  json j = {{"kind", "bench"},
            {"version", kManifestVersion},
            {"artifact_version", m.artifact_version},
            {"benchmarks", m.benchmarks},
            {"backends", backends},
            {"agents", m.agents},
            {"replicates", m.replicates},
            {"seed", m.seed},
            {"min_time_ns", m.min_time_ns},
            {"program_length", m.program_length},
            {"cycles", m.cycles},
            {"records_file", m.records_file},
            {"speedup_file", m.speedup_file},
            {"workload_file", m.workload_file},
            {"workload_sha256", m.workload_sha256}};
  return j.dump(2) + '\n';
}

std::string manifest_kind(const std::string& json_text) {
  return guarded([&] {
    return parse_checked(json_text, "").at("kind").get<std::string>();
  });
}

EvolveManifest parse_evolve_manifest(const std::string& json_text) {
  const json j = parse_checked(json_text, "evolve");
  return guarded([&] {
    EvolveManifest m;
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.config = j.at("config").get<std::string>();
    if (!j.at("ancestor_genome").is_null()) {
      m.ancestor_genome = j.at("ancestor_genome").get<std::string>();
    }
    for (const json& r : j.at("replicates")) {
      ReplicateEntry e;
      e.index = r.at("index").get<std::size_t>();
      e.seed = r.at("seed").get<std::uint64_t>();
      e.solved = r.at("solved").get<bool>();
      if (!r.at("solved_at").is_null()) {
        e.solved_at = r.at("solved_at").get<std::size_t>();
      }
      e.generations = r.at("generations").get<std::size_t>();
      e.history_file = r.at("history_file").get<std::string>();
      e.history_sha256 = r.at("history_sha256").get<std::string>();
      m.replicates.push_back(std::move(e));
    }
    m.summary_file = j.at("summary_file").get<std::string>();
    m.summary_sha256 = j.at("summary_sha256").get<std::string>();
    return m;
  });
}

BenchManifest parse_bench_manifest(const std::string& json_text) {
  const json j = parse_checked(json_text, "bench");
  return guarded([&] {
    BenchManifest m;
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.benchmarks = j.at("benchmarks").get<std::vector<std::string>>();
    for (const json& b : j.at("backends")) {
      m.backends.push_back(backend_from_name(b.get<std::string>()));
    }
    m.agents = j.at("agents").get<std::vector<std::size_t>>();
    m.replicates = j.at("replicates").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.min_time_ns = j.at("min_time_ns").get<std::int64_t>();
    m.program_length = j.at("program_length").get<std::size_t>();
    m.cycles = j.at("cycles").get<std::size_t>();
    m.records_file = j.at("records_file").get<std::string>();
    m.speedup_file = j.at("speedup_file").get<std::string>();
    m.workload_file = j.at("workload_file").get<std::string>();
    m.workload_sha256 = j.at("workload_sha256").get<std::string>();
    return m;
  });
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sgpvm
