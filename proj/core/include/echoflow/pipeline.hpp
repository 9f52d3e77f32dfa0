#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "echoflow/types.hpp"

namespace echoflow::pipeline {

/// Library version, also stamped into report manifests.
const char* version();

/// Everything `echoflow run` needs, loaded from one JSON file. All
/// relative paths are resolved against the config file's directory.
/// Optional inputs may be empty strings: curated/keywords/stopwords
/// fall back to defaults, a missing images_dir skips image clustering,
/// and influence fitting uses events_csv when given, else events
/// derived from clustered image posts.
struct PipelineConfig {
  std::uint64_t seed = 7;

  // [inputs]
  std::string tweets, users, edges_follow, edges_retweet, lexicon;
  std::string curated, keywords, city_to_state, foreign_places, stopwords;
  std::string images_dir, events_csv, schema;

  // [partition]
  Rational threshold{1, 10};

  // [match]
  int k = 0;  // 0 -> ceil(sqrt(n/2))
  double match_threshold = 0.45;
  std::size_t min_tokens = 5;
  bool dedup = true;

  // [image]
  int eps = 10;
  int min_points = 2;

  // [hawkes]
  std::vector<int> delta_t = {720, 1440, 2880};
  std::vector<std::string> platforms = {"namo", "twitter"};

  // [lexstats]
  int top_n = 20;
  int min_count = 3;
  std::set<std::string> exclude_hashtags;

  static PipelineConfig from_file(const std::string& path);
};

/// "p/q", an integer, or a decimal with at most 9 fractional digits.
Rational parse_rational(const std::string& text);

/// Failure inside one pipeline stage; partial outputs are already
/// removed when this escapes run_pipeline.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Runs ingest -> partition -> echo -> graph -> match -> temporal ->
/// hawkes -> lexstats -> report, writing every table plus manifest.json
/// into out_dir. Deterministic: the same config and seed produce a
/// byte-identical directory. Returns the list of files written.
std::vector<std::string> run_pipeline(const PipelineConfig& config, const std::string& out_dir);

}  // namespace echoflow::pipeline
