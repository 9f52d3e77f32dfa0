#include "echoflow/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "echoflow/io_util.hpp"
#include "echoflow/text.hpp"

namespace echoflow::ingest {
namespace {

using nlohmann::json;

std::string lower_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

bool ends_with_nocase(const std::string& text, const std::string& suffix) {
  if (text.size() < suffix.size()) return false;
  std::size_t off = text.size() - suffix.size();
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    char a = text[off + i], b = suffix[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
    if (a != b) return false;
  }
  return true;
}

/// Follows a dotted path ("user.id_str") through nested objects.
const json* walk(const json& root, const std::string& dotted) {
  const json* cur = &root;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    std::size_t dot = dotted.find('.', start);
    std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end()) return nullptr;
    cur = &*it;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return cur;
}

std::optional<std::string> get_string(const json& root, const std::string& path) {
  const json* v = walk(root, path);
  if (!v) return std::nullopt;
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<long long>());
  if (v->is_number_unsigned()) return std::to_string(v->get<unsigned long long>());
  return std::nullopt;
}

std::optional<long long> get_int(const json& root, const std::string& path) {
  const json* v = walk(root, path);
  if (!v) return std::nullopt;
  if (v->is_number_integer()) return v->get<long long>();
  if (v->is_number_unsigned()) {
    unsigned long long u = v->get<unsigned long long>();
    if (u > static_cast<unsigned long long>(std::numeric_limits<long long>::max())) return std::nullopt;
    return static_cast<long long>(u);
  }
  if (v->is_string()) {
    const std::string& s = v->get_ref<const std::string&>();
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    long long n = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return n;
  }
  return std::nullopt;
}

std::optional<bool> get_bool(const json& root, const std::string& path) {
  const json* v = walk(root, path);
  if (!v || !v->is_boolean()) return std::nullopt;
  return v->get<bool>();
}

/// Hashtag arrays come either as [{"text": "Tag"}, ...] or ["Tag", ...].
std::vector<std::string> get_tag_list(const json& root, const std::string& path,
                                      const char* object_key) {
  std::vector<std::string> out;
  const json* v = walk(root, path);
  if (!v || !v->is_array()) return out;
  for (const auto& item : *v) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_object()) {
      auto it = item.find(object_key);
      if (it != item.end() && it->is_string()) out.push_back(it->get<std::string>());
      else {
        auto alt = item.find("id_str");
        if (alt != item.end() && alt->is_string()) out.push_back(alt->get<std::string>());
      }
    }
  }
  return out;
}

const std::string& field(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw std::runtime_error("schema config lost required field: " + key);
  return it->second;
}

}  // namespace

SourceTag detect_source(const std::string& raw_text) {
  std::string t = raw_text;
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\n' || t.back() == '\r'))
    t.pop_back();
  if (ends_with_nocase(t, "via NaMo App")) return SourceTag::AppNaMo;
  if (ends_with_nocase(t, "via MyNt App")) return SourceTag::AppMyNt;
  return SourceTag::Other;
}

std::string strip_source_tag(const std::string& raw_text) {
  std::string t = raw_text;
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\n' || t.back() == '\r'))
    t.pop_back();
  if (ends_with_nocase(t, "via NaMo App") || ends_with_nocase(t, "via MyNt App"))
    t.resize(t.size() - 12);
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\n' || t.back() == '\r'))
    t.pop_back();
  return t;
}

SchemaConfig SchemaConfig::defaults() {
  SchemaConfig cfg;
  cfg.tweet_fields = {
      {"tweet_id", "id_str"},
      {"user_id", "user.id_str"},
      {"timestamp", "timestamp"},
      {"text", "text"},
      {"hashtags", "entities.hashtags"},
      {"media", "entities.media"},
      {"retweet_of", "retweeted_status.id_str"},
      {"like_count", "favorite_count"},
      {"retweet_count", "retweet_count"},
      {"place_name", "place.full_name"},
      {"geo_enabled", "user.geo_enabled"},
  };
  cfg.user_fields = {
      {"user_id", "id_str"},
      {"screen_name", "screen_name"},
      {"description", "description"},
      {"followers_count", "followers_count"},
      {"location", "location"},
  };
  return cfg;
}

SchemaConfig SchemaConfig::from_file(const std::string& path) {
  SchemaConfig cfg = defaults();
  json doc = json::parse(io::read_file(path));
  if (!doc.is_object()) throw std::runtime_error("schema config must be a JSON object: " + path);
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "tweet_fields" && it.key() != "user_fields")
      throw std::runtime_error("unknown schema section '" + it.key() + "' in " + path);
  auto merge = [](std::map<std::string, std::string>& dst, const json& src, const char* section) {
    if (!src.is_object()) throw std::runtime_error(std::string("schema section must be an object: ") + section);
    for (auto it = src.begin(); it != src.end(); ++it) {
      if (dst.find(it.key()) == dst.end())
        throw std::runtime_error(std::string("unknown schema field '") + it.key() + "' in " + section);
      if (!it.value().is_string())
        throw std::runtime_error(std::string("schema path for '") + it.key() + "' must be a string");
      dst[it.key()] = it.value().get<std::string>();
    }
  };
  if (doc.contains("tweet_fields")) merge(cfg.tweet_fields, doc["tweet_fields"], "tweet_fields");
  if (doc.contains("user_fields")) merge(cfg.user_fields, doc["user_fields"], "user_fields");
  return cfg;
}

ParseResult parse_dataset(const DatasetPaths& paths, const SchemaConfig& schema) {
  ParseResult out;
  DatasetBundle& b = out.bundle;
  ParseStats& st = out.stats;

  if (!paths.users.empty()) {
    for (const std::string& line : io::read_lines(paths.users)) {
      if (line.empty()) continue;
      json doc = json::parse(line, nullptr, false);
      if (doc.is_discarded() || !doc.is_object()) {
        ++st.users_skipped;
        continue;
      }
      auto id = get_string(doc, field(schema.user_fields, "user_id"));
      if (!id || id->empty()) {
        ++st.users_skipped;
        continue;
      }
      UserProfile u;
      u.user_id = *id;
      u.screen_name = get_string(doc, field(schema.user_fields, "screen_name")).value_or("");
      u.description = get_string(doc, field(schema.user_fields, "description")).value_or("");
      auto followers = get_int(doc, field(schema.user_fields, "followers_count"));
      if (followers && *followers < 0) {
        ++st.users_skipped;
        continue;
      }
      u.followers_count = followers.value_or(0);
      u.location_raw = get_string(doc, field(schema.user_fields, "location"));
      if (u.location_raw && u.location_raw->empty()) u.location_raw = std::nullopt;
      b.users[u.user_id] = std::move(u);
      ++st.users_parsed;
    }
  }

  auto ensure_user = [&](const std::string& id) {
    if (b.users.find(id) != b.users.end()) return;
    UserProfile stub;
    stub.user_id = id;
    b.users[id] = std::move(stub);
    ++st.stub_users;
  };

  if (!paths.tweets.empty()) {
    std::set<std::string> seen_ids;
    for (const std::string& line : io::read_lines(paths.tweets)) {
      if (line.empty()) continue;
      json doc = json::parse(line, nullptr, false);
      if (doc.is_discarded() || !doc.is_object()) {
        ++st.tweets_skipped;
        continue;
      }
      auto id = get_string(doc, field(schema.tweet_fields, "tweet_id"));
      auto uid = get_string(doc, field(schema.tweet_fields, "user_id"));
      auto ts = get_int(doc, field(schema.tweet_fields, "timestamp"));
      auto text_val = get_string(doc, field(schema.tweet_fields, "text"));
      auto likes = get_int(doc, field(schema.tweet_fields, "like_count")).value_or(0);
      auto rts = get_int(doc, field(schema.tweet_fields, "retweet_count")).value_or(0);
      if (!id || id->empty() || !uid || uid->empty() || !ts || *ts <= 0 || !text_val ||
          likes < 0 || rts < 0) {
        ++st.tweets_skipped;
        continue;
      }
      if (!seen_ids.insert(*id).second) {
        ++st.tweets_skipped;  // duplicate id, first one wins
        continue;
      }
      TweetRecord t;
      t.tweet_id = *id;
      t.user_id = *uid;
      t.timestamp = *ts;
      t.text = *text_val;
      std::vector<std::string> raw_tags =
          get_tag_list(doc, field(schema.tweet_fields, "hashtags"), "text");
      if (raw_tags.empty()) {
        t.hashtags = text::extract_hashtags(t.text);
      } else {
        for (std::string& tag : raw_tags) {
          if (!tag.empty() && tag[0] == '#') tag.erase(0, 1);
          if (!tag.empty()) t.hashtags.push_back(text::ascii_lower(tag));
        }
      }
      t.source_tag = detect_source(t.text);
      t.retweet_of = get_string(doc, field(schema.tweet_fields, "retweet_of"));
      if (t.retweet_of && t.retweet_of->empty()) t.retweet_of = std::nullopt;
      t.like_count = likes;
      t.retweet_count = rts;
      t.image_refs = get_tag_list(doc, field(schema.tweet_fields, "media"), "id_str");
      t.place_name = get_string(doc, field(schema.tweet_fields, "place_name"));
      if (t.place_name && t.place_name->empty()) t.place_name = std::nullopt;
      t.geo_enabled = get_bool(doc, field(schema.tweet_fields, "geo_enabled")).value_or(false);
      ensure_user(t.user_id);
      b.tweets.push_back(std::move(t));
      ++st.tweets_parsed;
    }
  }

  auto read_edges = [&](const std::string& path, std::vector<UserEdge>& edges,
                        std::size_t& parsed, std::size_t& skipped) {
    if (path.empty()) return;
    bool first = true;
    for (const std::string& line : io::read_lines(path)) {
      if (line.empty()) continue;
      std::vector<std::string> cells = io::split_csv_line(line);
      if (first) {
        first = false;
        if (cells.size() == 2 && lower_ascii(cells[0]) == "from_id" && lower_ascii(cells[1]) == "to_id")
          continue;
      }
      if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
        ++skipped;
        continue;
      }
      ensure_user(cells[0]);
      ensure_user(cells[1]);
      edges.emplace_back(cells[0], cells[1]);
      ++parsed;
    }
  };
  read_edges(paths.edges_follow, b.follow_edges, st.follow_edges_parsed, st.follow_edges_skipped);
  read_edges(paths.edges_retweet, b.retweet_edges, st.retweet_edges_parsed, st.retweet_edges_skipped);

  std::int64_t lo = 0, hi = 0;
  bool any = false;
  for (const TweetRecord& t : b.tweets) {
    if (!any) {
      lo = hi = t.timestamp;
      any = true;
    } else {
      lo = std::min(lo, t.timestamp);
      hi = std::max(hi, t.timestamp);
    }
  }
  b.time_window = {lo, hi};
  return out;
}

void classify_users(DatasetBundle& bundle, const std::set<std::string>& matched_tweet_ids) {
  std::set<std::string> seeds, aux;
  for (const TweetRecord& t : bundle.tweets) {
    if (t.source_tag != SourceTag::Other) seeds.insert(t.user_id);
    else if (matched_tweet_ids.count(t.tweet_id)) aux.insert(t.user_id);
  }
  for (auto& [id, u] : bundle.users) {
    if (seeds.count(id)) u.role = Role::Seed;
    else if (aux.count(id)) u.role = Role::Auxiliary;
    else u.role = Role::None;
  }
}

std::set<std::string> filter_active_users(const DatasetBundle& bundle, int min_tweets,
                                          const std::set<std::string>& popular_hashtags) {
  if (popular_hashtags.empty())
    throw std::invalid_argument("filter_active_users: popular hashtag set is empty");
  if (min_tweets < 1)
    throw std::invalid_argument("filter_active_users: min_tweets must be >= 1");

  std::map<std::string, int> tweet_counts;
  std::set<std::string> has_popular;
  for (const TweetRecord& t : bundle.tweets) {
    ++tweet_counts[t.user_id];
    if (!has_popular.count(t.user_id)) {
      for (const std::string& tag : t.hashtags) {
        if (popular_hashtags.count(tag)) {
          has_popular.insert(t.user_id);
          break;
        }
      }
    }
  }
  std::set<std::string> kept;
  for (const auto& [uid, n] : tweet_counts)
    if (n >= min_tweets && has_popular.count(uid)) kept.insert(uid);
  return kept;
}

std::set<std::string> filter_active_users_common(
    const std::vector<const DatasetBundle*>& bundles, int min_tweets,
    const std::set<std::string>& popular_hashtags) {
  std::set<std::string> common;
  bool first = true;
  for (const DatasetBundle* b : bundles) {
    std::set<std::string> kept = filter_active_users(*b, min_tweets, popular_hashtags);
    if (first) {
      common = std::move(kept);
      first = false;
    } else {
      std::set<std::string> next;
      std::set_intersection(common.begin(), common.end(), kept.begin(), kept.end(),
                            std::inserter(next, next.begin()));
      common = std::move(next);
    }
  }
  return common;
}

LocationMapper::LocationMapper(std::map<std::string, std::string> city_to_state,
                               std::set<std::string> foreign_places)
    : city_to_state_(std::move(city_to_state)), foreign_places_(std::move(foreign_places)) {
  for (const auto& [city, state] : city_to_state_) scan_order_.push_back(city);
  for (const auto& place : foreign_places_)
    if (!city_to_state_.count(place)) scan_order_.push_back(place);
  // Longest first so "new delhi" claims its span before "delhi" can.
  std::stable_sort(scan_order_.begin(), scan_order_.end(),
                   [](const std::string& a, const std::string& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a < b;
                   });
}

LocationMapper LocationMapper::from_files(const std::string& city_to_state_path,
                                          const std::string& foreign_places_path) {
  std::map<std::string, std::string> c2s;
  bool first = true;
  for (const std::string& line : io::read_lines(city_to_state_path)) {
    if (line.empty()) continue;
    std::vector<std::string> cells = io::split_csv_line(line);
    if (first) {
      first = false;
      if (cells.size() >= 2 && lower_ascii(cells[0]) == "city") continue;
    }
    if (cells.size() < 2 || cells[0].empty() || cells[1].empty())
      throw std::runtime_error("bad city_to_state row: " + line);
    c2s[lower_ascii(cells[0])] = cells[1];
  }
  std::set<std::string> foreign;
  if (!foreign_places_path.empty()) {
    for (const std::string& line : io::read_lines(foreign_places_path)) {
      std::string p = lower_ascii(line);
      while (!p.empty() && (p.back() == ' ' || p.back() == '\r')) p.pop_back();
      std::size_t start = p.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      foreign.insert(p.substr(start));
    }
  }
  return LocationMapper(std::move(c2s), std::move(foreign));
}

LocationResult LocationMapper::resolve(const std::string& raw_location) const {
  std::string loc = lower_ascii(raw_location);
  std::vector<bool> claimed(loc.size(), false);

  int indian_hits = 0;
  bool foreign_hit = false;
  std::string state;
  for (const std::string& name : scan_order_) {
    std::size_t pos = 0;
    while ((pos = loc.find(name, pos)) != std::string::npos) {
      bool overlap = false;
      for (std::size_t i = pos; i < pos + name.size(); ++i)
        if (claimed[i]) {
          overlap = true;
          break;
        }
      if (overlap) {
        ++pos;
        continue;
      }
      for (std::size_t i = pos; i < pos + name.size(); ++i) claimed[i] = true;
      if (foreign_places_.count(name)) {
        foreign_hit = true;
      } else {
        ++indian_hits;
        if (indian_hits == 1) state = city_to_state_.at(name);
      }
      pos += name.size();
    }
  }

  LocationResult r;
  if (foreign_hit || indian_hits > 1) {
    r.kind = LocationResult::Kind::Removed;
  } else if (indian_hits == 1) {
    r.kind = LocationResult::Kind::State;
    r.state = state;
  }
  return r;
}

LocationResult LocationMapper::map_location(const UserProfile& user,
                                            const std::optional<std::string>& place_name,
                                            bool geo_enabled) const {
  std::string raw;
  if (geo_enabled && place_name) raw = *place_name;
  else if (user.location_raw) raw = *user.location_raw;
  if (raw.empty()) return {};
  return resolve(raw);
}

LocationStats apply_locations(DatasetBundle& bundle, const LocationMapper& mapper) {
  // Latest geo-enabled tweet with a place, per author.
  std::map<std::string, std::pair<long long, std::string>> geo_place;
  for (const TweetRecord& t : bundle.tweets) {
    if (!t.geo_enabled || !t.place_name) continue;
    auto it = geo_place.find(t.user_id);
    if (it == geo_place.end() || t.timestamp > it->second.first)
      geo_place[t.user_id] = {t.timestamp, *t.place_name};
  }

  LocationStats st;
  for (auto& [id, u] : bundle.users) {
    auto it = geo_place.find(id);
    LocationResult r = (it != geo_place.end())
                           ? mapper.map_location(u, it->second.second, true)
                           : mapper.map_location(u, std::nullopt, false);
    u.state.reset();
    switch (r.kind) {
      case LocationResult::Kind::State:
        u.state = r.state;
        ++st.resolved;
        break;
      case LocationResult::Kind::Removed:
        ++st.removed;
        break;
      case LocationResult::Kind::Unresolved:
        ++st.unresolved;
        break;
    }
  }
  return st;
}

}  // namespace echoflow::ingest
