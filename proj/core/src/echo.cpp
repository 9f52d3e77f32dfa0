#include "echoflow/echo.hpp"

#include <stdexcept>

namespace echoflow::echo {
namespace {

struct ScoreTally {
  long long ones = 0;
  long long count = 0;
};

/// Population mean and variance computed definitionally from the score
/// multiset, sum of squared deviations over n.
void fill_stats(const ScoreTally& t, Rational& polarity, Rational& variance) {
  polarity = Rational(t.ones, t.count);
  Rational one_minus = Rational(1) - polarity;
  Rational sq_dev = Rational(t.ones) * one_minus * one_minus +
                    Rational(t.count - t.ones) * polarity * polarity;
  variance = sq_dev / Rational(t.count);
}

std::map<std::string, ScoreTally> tally_by_user(const DatasetBundle& bundle,
                                                const HashtagLexicon& lexicon,
                                                const ScoreConfig& config) {
  std::map<std::string, ScoreTally> tallies;
  for (const TweetRecord& t : bundle.tweets) {
    for (const std::string& tag : t.hashtags) {
      std::optional<HashtagLabel> label = lexicon.lookup(tag);
      if (!label) continue;
      std::optional<int> score = hashtag_score(*label, config);
      if (!score) continue;
      ScoreTally& tally = tallies[t.user_id];
      tally.ones += *score;
      ++tally.count;
    }
  }
  return tallies;
}

/// Followees of u in the Follow graph are the sources of u's in-edges:
/// an edge v->u records that u follows v.
std::vector<std::string> followees_of(const graph::SocialGraph& follow_graph,
                                      const std::string& user_id) {
  std::vector<std::string> out;
  for (const auto& [edge, w] : follow_graph.edges)
    if (edge.second == user_id) out.push_back(edge.first);
  return out;
}

std::optional<PolarityProfile> build_profile(
    const std::string& user_id, const std::map<std::string, ScoreTally>& tallies,
    const std::vector<std::string>& followees) {
  auto it = tallies.find(user_id);
  if (it == tallies.end() || it->second.count == 0) return std::nullopt;

  PolarityProfile p;
  p.produced_hashtag_count = it->second.count;
  fill_stats(it->second, p.production_polarity, p.production_variance);

  ScoreTally pooled;
  for (const std::string& followee : followees) {
    auto fit = tallies.find(followee);
    if (fit == tallies.end()) continue;
    pooled.ones += fit->second.ones;
    pooled.count += fit->second.count;
  }
  if (pooled.count > 0) {
    p.consumed_hashtag_count = pooled.count;
    Rational polarity, variance;
    fill_stats(pooled, polarity, variance);
    p.consumption_polarity = polarity;
    p.consumption_variance = variance;
  }
  return p;
}

}  // namespace

std::optional<int> hashtag_score(HashtagLabel label, const ScoreConfig& config) {
  switch (label) {
    case HashtagLabel::ProBJP: return 1;
    case HashtagLabel::AntiBJP: return 0;
    case HashtagLabel::ProCongress: return 0;
    case HashtagLabel::AntiCongress: return config.anti_congress_score;
    case HashtagLabel::Neutral: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<PolarityProfile> polarity_profile(const std::string& user_id,
                                                const DatasetBundle& bundle,
                                                const HashtagLexicon& lexicon,
                                                const graph::SocialGraph& follow_graph,
                                                const ScoreConfig& config) {
  if (bundle.users.find(user_id) == bundle.users.end())
    throw std::invalid_argument("polarity_profile: unknown user " + user_id);
  std::map<std::string, ScoreTally> tallies = tally_by_user(bundle, lexicon, config);
  return build_profile(user_id, tallies, followees_of(follow_graph, user_id));
}

std::map<std::string, PolarityProfile> polarity_profiles(const DatasetBundle& bundle,
                                                         const HashtagLexicon& lexicon,
                                                         const graph::SocialGraph& follow_graph,
                                                         const ScoreConfig& config) {
  std::map<std::string, ScoreTally> tallies = tally_by_user(bundle, lexicon, config);

  std::map<std::string, std::vector<std::string>> followees;
  for (const auto& [edge, w] : follow_graph.edges)
    followees[edge.second].push_back(edge.first);

  std::map<std::string, PolarityProfile> out;
  for (const auto& [id, user] : bundle.users) {
    auto fit = followees.find(id);
    static const std::vector<std::string> kNone;
    std::optional<PolarityProfile> p =
        build_profile(id, tallies, fit == followees.end() ? kNone : fit->second);
    if (p) out[id] = *p;
  }
  return out;
}

}  // namespace echoflow::echo
