#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echoflow/graph.hpp"
#include "echoflow/types.hpp"

namespace echoflow::echo {

/// Binary score for partisan hashtags. AntiCongress is not scored by
/// the two obvious rules, so its score is configurable; nullopt drops
/// those hashtags from polarity entirely.
struct ScoreConfig {
  std::optional<int> anti_congress_score = 1;
};

/// ProBJP -> 1; AntiBJP, ProCongress -> 0; Neutral -> nullopt.
std::optional<int> hashtag_score(HashtagLabel label, const ScoreConfig& config = {});

/// Production = user's own scored hashtags; consumption = pooled scored
/// hashtags of everyone the user follows. Polarity is the mean score,
/// variance the population variance, both exact.
struct PolarityProfile {
  Rational production_polarity{0};
  Rational production_variance{0};
  std::optional<Rational> consumption_polarity;
  std::optional<Rational> consumption_variance;
  long long produced_hashtag_count = 0;  // scored occurrences only
  long long consumed_hashtag_count = 0;
};

/// nullopt when the user posted no scored hashtag (no production
/// profile exists). Consumption fields stay empty when followees have
/// no scored hashtags. Throws std::invalid_argument for a user absent
/// from the bundle.
std::optional<PolarityProfile> polarity_profile(const std::string& user_id,
                                                const DatasetBundle& bundle,
                                                const HashtagLexicon& lexicon,
                                                const graph::SocialGraph& follow_graph,
                                                const ScoreConfig& config = {});

/// Profiles for every user that has one, keyed by user id.
std::map<std::string, PolarityProfile> polarity_profiles(const DatasetBundle& bundle,
                                                         const HashtagLexicon& lexicon,
                                                         const graph::SocialGraph& follow_graph,
                                                         const ScoreConfig& config = {});

}  // namespace echoflow::echo
