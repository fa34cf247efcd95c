#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tornmend/harness.hpp"
#include "tornmend/pipeline.hpp"

namespace tornmend {

inline constexpr int schema_version = 1;

nlohmann::json to_json(const MatchScore& score);
nlohmann::json to_json(const ReconstructionResult& result);
nlohmann::json to_json(const EvalReport& report, bool timings);

/// Throws InvalidSpec on unknown keys or bad values.
TearSpec tear_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TearSpec& spec);
std::vector<TearSpec> load_manifest(const std::string& path);

nlohmann::json to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const nlohmann::json& j);

/// Renders the document, tears it and writes pair_<seed>/{a.png,b.png,original.png,truth.json}.
/// Returns the pair directory.
std::string write_pair(const TearSpec& spec, const std::string& out_dir);

struct CorpusOptions {
  Config config;
  int jobs = 1;
  bool timings = false;
};

/// Sorted pair_* directories under `corpus`.
std::vector<std::string> list_pairs(const std::string& corpus);
/// Stitches and scores every pair; the report does not depend on `jobs`.
nlohmann::json evaluate_corpus(const std::string& corpus, const CorpusOptions& options = {});

}  // namespace tornmend
