#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echoflow/text.hpp"
#include "echoflow/types.hpp"

namespace echoflow::match {

struct KMeansOptions {
  int max_iterations = 300;
  double relative_tolerance = 1e-6;  // on inertia improvement
};

struct TextClusterModel {
  text::Vocabulary vocabulary;
  std::vector<std::vector<double>> centroids;  // dense rows over vocabulary
  std::vector<double> centroid_sq_norms;
  int k = 0;
  double match_threshold = 0.45;
  double inertia = 0.0;
};

/// k-means++ seeded Lloyd iteration over normalized sparse vectors.
/// Deterministic for a fixed seed. Throws std::invalid_argument when
/// k < 1 or k > number of vectors.
TextClusterModel train_text_clusters(const std::vector<text::TermVector>& vectors,
                                     const text::Vocabulary& vocabulary, int k,
                                     std::uint64_t seed, double match_threshold = 0.45,
                                     const KMeansOptions& options = {});

struct TextMatch {
  int cluster = 0;
  double distance = 0.0;
};

/// Nearest centroid when strictly closer than the threshold. Vectors
/// that lose every term to the vocabulary restriction never match.
std::optional<TextMatch> match_text(const text::TermVector& vector,
                                    const TextClusterModel& model);

/// Distances compare as squares so the threshold boundary is decided by
/// one multiplication, not a sqrt rounding.
bool within_match_threshold(double squared_distance, double threshold);

/// Default cluster count when none is given: ceil(sqrt(n/2)).
int default_cluster_count(std::size_t n_vectors);

struct TweetPair {
  std::string app_tweet_id;
  std::string other_tweet_id;
  double cosine = 0.0;
  bool app_first = false;       // strictly earlier timestamp
  bool same_timestamp = false;
};

struct MatchableTweet {
  std::string tweet_id;
  std::int64_t timestamp = 0;
  std::vector<std::string> tokens;  // preprocessed, length >= 5
};

struct PairMapping {
  std::vector<TweetPair> pairs;
  std::size_t collisions = 0;  // other-tweets claimed by more than one app tweet
  std::size_t app_duplicates_dropped = 0;
  std::size_t other_duplicates_dropped = 0;
};

/// For every app tweet, the other-side tweet with maximal cosine over a
/// shared union vocabulary (ties: earliest timestamp, then smallest
/// tweet id). dedup collapses identical token sequences to their
/// earliest instance on each side first.
PairMapping map_similar_pairs(const std::vector<MatchableTweet>& app_tweets,
                              const std::vector<MatchableTweet>& other_tweets,
                              bool dedup_first_instance);

struct FirstPosterStats {
  std::size_t app_first = 0;
  std::size_t other_first = 0;
  std::size_t simultaneous = 0;
  double app_first_fraction = 0.0;    // over strictly ordered pairs
  double other_first_fraction = 0.0;
};

/// Throws std::invalid_argument on an empty pair list.
FirstPosterStats first_poster_stats(const std::vector<TweetPair>& pairs);

}  // namespace echoflow::match
