#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace echoflow::synth {

/// Knobs for the synthetic fixture. Every planted quantity lands in
/// manifest.json so tests can check the pipeline against ground truth.
struct SynthOptions {
  std::uint64_t seed = 7;

  // Users u0001.. ; the first sum(block_sizes) live in planted
  // follow-graph blocks, the first polarity_users get scored hashtags.
  std::size_t polarity_users = 1000;
  std::vector<std::size_t> block_sizes = {70, 70, 60};
  double block_p_in = 0.3;
  double block_p_out = 0.01;

  // Near-duplicate image groups (one base + variants each) plus
  // unclustered noise images.
  std::size_t image_groups = 12;
  std::size_t image_variants = 4;  // includes the base
  std::size_t noise_images = 6;
  int image_size = 96;

  // Pre-simulated event logs with known parameters.
  std::size_t hawkes_images = 8;
  std::size_t hawkes_T = 2880;
  int delta_t_max = 120;

  std::size_t extra_users = 40;  // metadata/curated/edge-case users

  static SynthOptions from_file(const std::string& path);  // JSON overrides
};

/// Writes the full fixture: tweets.jsonl, users.jsonl, edge CSVs,
/// lexicon.csv, curated.csv, keywords.conf, city_to_state.csv,
/// foreign_places.txt, stopwords.txt, images/, events.csv, config.json
/// (a ready pipeline config), and manifest.json with the planted truth.
/// Same options -> byte-identical directory.
void generate(const std::string& out_dir, const SynthOptions& options = {});

}  // namespace echoflow::synth
