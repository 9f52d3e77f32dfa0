#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace echoflow {

/// Exact arithmetic for ratios and variances. Counts in this domain are
/// small (hashtag multisets, user tallies), so int64 numerators never
/// get close to overflow.
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Posting client detected from the trailing tag of the tweet text.
enum class SourceTag { AppMyNt, AppNaMo, Other };

/// Two-pole political affiliation. Congress-leaning and anti-BJP users
/// fold into Other.
enum class Affiliation { ProBJP, Other, Unknown };

/// Seed: posted at least one app-tagged tweet. Auxiliary: posted content
/// matched to app-sourced content but never used the app tag.
enum class Role { Seed, Auxiliary, None };

/// Annotation of a hashtag in the lexicon. Hashtags absent from the
/// lexicon carry no label at all, which is distinct from Neutral.
enum class HashtagLabel { ProBJP, AntiBJP, ProCongress, AntiCongress, Neutral };

enum class GraphKind { Follow, Friends, Retweet };

const char* to_string(SourceTag t);
const char* to_string(Affiliation a);
const char* to_string(Role r);
const char* to_string(HashtagLabel l);
const char* to_string(GraphKind k);

std::optional<Affiliation> affiliation_from_string(const std::string& s);
std::optional<HashtagLabel> hashtag_label_from_string(const std::string& s);
std::optional<GraphKind> graph_kind_from_string(const std::string& s);

struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  std::int64_t timestamp = 0;  // UTC seconds since epoch
  std::string text;
  std::vector<std::string> hashtags;  // lowercase, '#' stripped
  SourceTag source_tag = SourceTag::Other;
  std::optional<std::string> retweet_of;
  std::int64_t like_count = 0;
  std::int64_t retweet_count = 0;
  std::vector<std::string> image_refs;  // content identifiers
  std::optional<std::string> place_name;
  bool geo_enabled = false;
};

struct UserProfile {
  std::string user_id;
  std::string screen_name;
  std::string description;
  std::int64_t followers_count = 0;
  std::optional<std::string> location_raw;
  std::optional<std::string> state;  // canonical Indian state name
  Affiliation affiliation = Affiliation::Unknown;
  Role role = Role::None;
};

/// Directed (from, to) user pair. Semantics depend on the edge file:
/// follow edges mean "from follows to", retweet edges mean
/// "from retweeted to".
using UserEdge = std::pair<std::string, std::string>;

struct DatasetBundle {
  std::vector<TweetRecord> tweets;
  std::map<std::string, UserProfile> users;
  std::vector<UserEdge> follow_edges;
  std::vector<UserEdge> retweet_edges;
  std::pair<std::int64_t, std::int64_t> time_window{0, 0};

  /// Tweet ids of each user's tweets, in bundle order.
  std::map<std::string, std::vector<std::size_t>> tweet_index_by_user() const;
};

/// hashtag -> leaning label. Loaded from lexicon.csv; hashtags are
/// stored lowercase without '#'.
class HashtagLexicon {
 public:
  HashtagLexicon() = default;
  explicit HashtagLexicon(std::map<std::string, HashtagLabel> labels)
      : labels_(std::move(labels)) {}

  std::optional<HashtagLabel> lookup(const std::string& hashtag) const {
    auto it = labels_.find(hashtag);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  void set(const std::string& hashtag, HashtagLabel label) { labels_[hashtag] = label; }
  std::size_t size() const { return labels_.size(); }
  const std::map<std::string, HashtagLabel>& entries() const { return labels_; }

 private:
  std::map<std::string, HashtagLabel> labels_;
};

/// Reads lexicon.csv (hashtag,label). Throws std::runtime_error on
/// unreadable file or unknown label string.
HashtagLexicon load_lexicon(const std::string& path);

}  // namespace echoflow
