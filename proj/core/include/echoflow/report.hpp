#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "echoflow/match_text.hpp"
#include "echoflow/types.hpp"

namespace echoflow::report {

/// Paired engagement metrics for an app tweet and its matched twin.
/// Normalized values exist only for sides whose author has followers.
struct EngagementRecord {
  std::string app_tweet_id;
  std::string other_tweet_id;
  long long app_likes = 0, app_retweets = 0, app_followers = 0;
  long long other_likes = 0, other_retweets = 0, other_followers = 0;
  std::optional<double> app_likes_norm, app_retweets_norm;
  std::optional<double> other_likes_norm, other_retweets_norm;
};

struct EngagementResult {
  std::vector<EngagementRecord> records;
  std::size_t skipped_missing = 0;       // tweet or author not in the bundle
  std::size_t zero_follower_sides = 0;   // sides left without normalized values
};

EngagementResult normalized_engagement(const std::vector<match::TweetPair>& pairs,
                                       const DatasetBundle& bundle);

/// Right-continuous empirical CDF as (x, F(x)) steps, one per distinct
/// value, final F exactly 1. Throws std::invalid_argument when empty.
std::vector<std::pair<double, double>> ecdf(std::vector<double> values);

struct StateRow {
  std::string state;
  Rational frac_affected{0};
  Rational frac_general{0};
};

/// Per-state fractions over users with resolved states, for the
/// affected set vs everyone. Each column sums to 1 exactly (when its
/// population is nonempty). Sorted by affected fraction descending,
/// ties by state name.
std::vector<StateRow> state_fractions(const std::set<std::string>& affected_users,
                                      const DatasetBundle& bundle);

}  // namespace echoflow::report
