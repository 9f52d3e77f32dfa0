#include "echoflow/report.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace echoflow::report {

EngagementResult normalized_engagement(const std::vector<match::TweetPair>& pairs,
                                       const DatasetBundle& bundle) {
  std::map<std::string, const TweetRecord*> by_id;
  for (const TweetRecord& t : bundle.tweets) by_id[t.tweet_id] = &t;

  EngagementResult out;
  for (const match::TweetPair& pair : pairs) {
    auto app_it = by_id.find(pair.app_tweet_id);
    auto other_it = by_id.find(pair.other_tweet_id);
    if (app_it == by_id.end() || other_it == by_id.end()) {
      ++out.skipped_missing;
      continue;
    }
    const TweetRecord& app = *app_it->second;
    const TweetRecord& other = *other_it->second;
    auto app_user = bundle.users.find(app.user_id);
    auto other_user = bundle.users.find(other.user_id);
    if (app_user == bundle.users.end() || other_user == bundle.users.end()) {
      ++out.skipped_missing;
      continue;
    }

    EngagementRecord rec;
    rec.app_tweet_id = app.tweet_id;
    rec.other_tweet_id = other.tweet_id;
    rec.app_likes = app.like_count;
    rec.app_retweets = app.retweet_count;
    rec.app_followers = app_user->second.followers_count;
    rec.other_likes = other.like_count;
    rec.other_retweets = other.retweet_count;
    rec.other_followers = other_user->second.followers_count;

    if (rec.app_followers > 0) {
      rec.app_likes_norm = static_cast<double>(rec.app_likes) / rec.app_followers;
      rec.app_retweets_norm = static_cast<double>(rec.app_retweets) / rec.app_followers;
    } else {
      ++out.zero_follower_sides;
    }
    if (rec.other_followers > 0) {
      rec.other_likes_norm = static_cast<double>(rec.other_likes) / rec.other_followers;
      rec.other_retweets_norm = static_cast<double>(rec.other_retweets) / rec.other_followers;
    } else {
      ++out.zero_follower_sides;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ecdf: empty sample");
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> points;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Last index of a run of ties carries the step height.
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    points.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  points.back().second = 1.0;  // exact, not (n/n) rounding
  return points;
}

std::vector<StateRow> state_fractions(const std::set<std::string>& affected_users,
                                      const DatasetBundle& bundle) {
  std::map<std::string, long long> affected_by_state, general_by_state;
  long long affected_total = 0, general_total = 0;
  for (const auto& [id, user] : bundle.users) {
    if (!user.state) continue;
    ++general_by_state[*user.state];
    ++general_total;
    if (affected_users.count(id)) {
      ++affected_by_state[*user.state];
      ++affected_total;
    }
  }

  std::set<std::string> states;
  for (const auto& [s, c] : general_by_state) states.insert(s);
  for (const auto& [s, c] : affected_by_state) states.insert(s);

  std::vector<StateRow> rows;
  for (const std::string& s : states) {
    StateRow row;
    row.state = s;
    auto a = affected_by_state.find(s);
    auto g = general_by_state.find(s);
    if (affected_total > 0 && a != affected_by_state.end())
      row.frac_affected = Rational(a->second, affected_total);
    if (general_total > 0 && g != general_by_state.end())
      row.frac_general = Rational(g->second, general_total);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const StateRow& a, const StateRow& b) {
    if (a.frac_affected != b.frac_affected) return b.frac_affected < a.frac_affected;
    return a.state < b.state;
  });
  return rows;
}

}  // namespace echoflow::report
