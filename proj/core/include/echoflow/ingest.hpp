#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "echoflow/types.hpp"

namespace echoflow::ingest {

/// Trailing client tags. Matching is case-insensitive suffix matching
/// after trailing-whitespace strip; tags occurring mid-text are ignored.
SourceTag detect_source(const std::string& raw_text);

/// Text with any trailing client-app suffix (and surrounding whitespace)
/// removed, so tagged posts compare equal to their untagged copies.
std::string strip_source_tag(const std::string& raw_text);

struct DatasetPaths {
  std::string tweets;        // JSON lines, one tweet object per line
  std::string users;         // JSON lines, one user object per line
  std::string edges_follow;  // CSV from_id,to_id ("from follows to")
  std::string edges_retweet; // CSV from_id,to_id ("from retweeted to")
};

/// Logical field -> dotted JSON path. Defaults mirror the public tweet
/// object vocabulary; a schema config file can rename paths for other
/// dump layouts.
struct SchemaConfig {
  std::map<std::string, std::string> tweet_fields;
  std::map<std::string, std::string> user_fields;

  static SchemaConfig defaults();
  static SchemaConfig from_file(const std::string& path);
};

struct ParseStats {
  std::size_t tweets_parsed = 0;
  std::size_t tweets_skipped = 0;
  std::size_t users_parsed = 0;
  std::size_t users_skipped = 0;
  std::size_t follow_edges_parsed = 0;
  std::size_t follow_edges_skipped = 0;
  std::size_t retweet_edges_parsed = 0;
  std::size_t retweet_edges_skipped = 0;
  /// Tweet authors / edge endpoints missing from users.jsonl; stub
  /// profiles are inserted so every id resolves.
  std::size_t stub_users = 0;
};

struct ParseResult {
  DatasetBundle bundle;
  ParseStats stats;
};

/// Parses the four dump files into a canonical bundle. Unreadable files
/// are fatal (std::runtime_error); malformed lines are counted and
/// skipped. Empty path strings skip that input entirely.
ParseResult parse_dataset(const DatasetPaths& paths,
                          const SchemaConfig& schema = SchemaConfig::defaults());

/// Seed = authored at least one app-tagged tweet. Auxiliary = authored
/// at least one matched tweet and no app-tagged tweet (Seed wins when
/// both apply). Everyone else keeps Role::None.
void classify_users(DatasetBundle& bundle, const std::set<std::string>& matched_tweet_ids);

/// Users with >= min_tweets tweets of which at least one carries a
/// popular hashtag. Throws std::invalid_argument on empty
/// popular_hashtags or min_tweets < 1.
std::set<std::string> filter_active_users(const DatasetBundle& bundle, int min_tweets,
                                          const std::set<std::string>& popular_hashtags);

/// Intersection of filter_active_users across several bundles.
std::set<std::string> filter_active_users_common(
    const std::vector<const DatasetBundle*>& bundles, int min_tweets,
    const std::set<std::string>& popular_hashtags);

struct LocationResult {
  enum class Kind { State, Removed, Unresolved };
  Kind kind = Kind::Unresolved;
  std::string state;  // set only when kind == State
};

/// City-name gazetteer. Resolution scans the free-text location for
/// known names longest-first, masking each matched span so that
/// "New Delhi" is one hit even though "Delhi" is also in the list.
/// Any foreign hit, or more than one Indian city, removes the user.
class LocationMapper {
 public:
  LocationMapper() = default;
  LocationMapper(std::map<std::string, std::string> city_to_state,
                 std::set<std::string> foreign_places);

  /// city_to_state.csv (city,state) and foreign_places.txt (one per line).
  static LocationMapper from_files(const std::string& city_to_state_path,
                                   const std::string& foreign_places_path);

  LocationResult resolve(const std::string& raw_location) const;

  /// place_name when the user had geo-tagging on (and a place is known),
  /// else the profile's free-text location.
  LocationResult map_location(const UserProfile& user,
                              const std::optional<std::string>& place_name,
                              bool geo_enabled) const;

 private:
  std::map<std::string, std::string> city_to_state_;  // lowercase city -> state
  std::set<std::string> foreign_places_;              // lowercase
  std::vector<std::string> scan_order_;               // longest first
};

struct LocationStats {
  std::size_t resolved = 0;
  std::size_t removed = 0;
  std::size_t unresolved = 0;
};

/// Fills UserProfile::state for every user. The place used is the one
/// from the user's latest geo-enabled tweet that names a place.
LocationStats apply_locations(DatasetBundle& bundle, const LocationMapper& mapper);

}  // namespace echoflow::ingest
