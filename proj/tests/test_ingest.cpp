#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "echoflow/ingest.hpp"
#include "echoflow/io_util.hpp"

using namespace echoflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / "echoflow_ingest_tests";
  fs::create_directories(p);
  return p;
}

std::string write_temp(const std::string& name, const std::string& content) {
  fs::path p = scratch_dir() / name;
  io::write_file(p.string(), content);
  return p.string();
}

}  // namespace

TEST_CASE("client tag detection is a case-insensitive suffix match") {
  CHECK(ingest::detect_source("Great rally via NaMo App") == SourceTag::AppNaMo);
  CHECK(ingest::detect_source("Great rally VIA NAMO APP") == SourceTag::AppNaMo);
  CHECK(ingest::detect_source("update via MyNt App  \n") == SourceTag::AppMyNt);
  CHECK(ingest::detect_source("via NaMo App in the middle") == SourceTag::Other);
  CHECK(ingest::detect_source("plain tweet") == SourceTag::Other);
  CHECK(ingest::detect_source("") == SourceTag::Other);
}

TEST_CASE("stripping the client tag yields the bare text") {
  CHECK(ingest::strip_source_tag("hello world via NaMo App") == "hello world");
  CHECK(ingest::strip_source_tag("hello world via MyNt App \t") == "hello world");
  CHECK(ingest::strip_source_tag("no tag here") == "no tag here");
  CHECK(ingest::strip_source_tag("via NaMo App") == "");
}

TEST_CASE("dataset parsing skips malformed rows and deduplicates tweet ids") {
  std::string tweets =
      R"({"id_str":"t1","user":{"id_str":"u1"},"timestamp":100,"text":"hello #one","favorite_count":2,"retweet_count":1})"
      "\n"
      R"({"id_str":"t1","user":{"id_str":"u2"},"timestamp":200,"text":"dup id"})"
      "\n"
      "this is not json\n"
      R"({"id_str":"t2","user":{"id_str":"u1"},"timestamp":-5,"text":"bad time"})"
      "\n"
      R"({"id_str":"t3","user":{"id_str":"u1"},"timestamp":300,"text":"ok","favorite_count":-1})"
      "\n"
      R"({"id_str":"t4","user":{"id_str":"u2"},"timestamp":400,"text":"fine and well"})"
      "\n";
  std::string users =
      R"({"id_str":"u1","screen_name":"alpha","description":"","followers_count":10})" "\n";
  ingest::DatasetPaths paths;
  paths.tweets = write_temp("tweets.jsonl", tweets);
  paths.users = write_temp("users.jsonl", users);
  ingest::ParseResult r = ingest::parse_dataset(paths);

  CHECK(r.stats.tweets_parsed == 2);   // t1 and t4
  CHECK(r.stats.tweets_skipped == 4);  // dup, non-json, bad time, negative count
  CHECK(r.bundle.tweets.size() == 2);
  CHECK(r.bundle.tweets[0].tweet_id == "t1");
  CHECK(r.bundle.tweets[0].user_id == "u1");  // first instance wins
  CHECK(r.bundle.tweets[0].hashtags == std::vector<std::string>{"one"});
  CHECK(r.stats.stub_users == 1);  // u2 stubbed in
  CHECK(r.bundle.users.count("u2") == 1);
  CHECK(r.bundle.time_window == std::pair<std::int64_t, std::int64_t>{100, 400});
}

TEST_CASE("unknown schema fields are rejected") {
  std::string schema = R"({"tweet_fields": {"no_such_field": "x.y"}})";
  CHECK_THROWS_AS(ingest::SchemaConfig::from_file(write_temp("schema_bad.json", schema)),
                  std::runtime_error);
  std::string section = R"({"tweets": {"tweet_id": "tid"}})";
  CHECK_THROWS_AS(ingest::SchemaConfig::from_file(write_temp("schema_bad2.json", section)),
                  std::runtime_error);
}

TEST_CASE("schema overrides reroute field paths") {
  std::string schema =
      R"({"tweet_fields": {"tweet_id": "tid", "user_id": "uid", "text": "body"}})";
  std::string tweets = R"({"tid":"t9","uid":"u9","timestamp":50,"body":"custom layout"})" "\n";
  ingest::DatasetPaths paths;
  paths.tweets = write_temp("tweets_alt.jsonl", tweets);
  ingest::SchemaConfig cfg =
      ingest::SchemaConfig::from_file(write_temp("schema_ok.json", schema));
  ingest::ParseResult r = ingest::parse_dataset(paths, cfg);
  REQUIRE(r.bundle.tweets.size() == 1);
  CHECK(r.bundle.tweets[0].tweet_id == "t9");
  CHECK(r.bundle.tweets[0].text == "custom layout");
}

TEST_CASE("seed role beats auxiliary when a user authored both kinds") {
  DatasetBundle bundle;
  TweetRecord app;
  app.tweet_id = "a1";
  app.user_id = "u1";
  app.timestamp = 1;
  app.source_tag = SourceTag::AppNaMo;
  TweetRecord matched;
  matched.tweet_id = "m1";
  matched.user_id = "u1";
  matched.timestamp = 2;
  TweetRecord matched2;
  matched2.tweet_id = "m2";
  matched2.user_id = "u2";
  matched2.timestamp = 3;
  TweetRecord plain;
  plain.tweet_id = "p1";
  plain.user_id = "u3";
  plain.timestamp = 4;
  bundle.tweets = {app, matched, matched2, plain};
  for (const char* id : {"u1", "u2", "u3"}) bundle.users[id].user_id = id;

  ingest::classify_users(bundle, {"m1", "m2"});
  CHECK(bundle.users["u1"].role == Role::Seed);
  CHECK(bundle.users["u2"].role == Role::Auxiliary);
  CHECK(bundle.users["u3"].role == Role::None);
}

TEST_CASE("active-user filter requires both volume and a popular hashtag") {
  DatasetBundle bundle;
  auto add_tweet = [&](const char* id, const char* user, std::vector<std::string> tags) {
    TweetRecord t;
    t.tweet_id = id;
    t.user_id = user;
    t.timestamp = 1;
    t.hashtags = std::move(tags);
    bundle.tweets.push_back(t);
    bundle.users[user].user_id = user;
  };
  add_tweet("t1", "busy", {"popular"});
  add_tweet("t2", "busy", {});
  add_tweet("t3", "quiet", {"popular"});
  add_tweet("t4", "offtopic", {"other"});
  add_tweet("t5", "offtopic", {"other"});

  auto active = ingest::filter_active_users(bundle, 2, {"popular"});
  CHECK(active == std::set<std::string>{"busy"});

  CHECK_THROWS_AS(ingest::filter_active_users(bundle, 0, {"popular"}), std::invalid_argument);
  CHECK_THROWS_AS(ingest::filter_active_users(bundle, 1, {}), std::invalid_argument);
}

TEST_CASE("location resolution masks longer city names before shorter ones") {
  ingest::LocationMapper mapper({{"new delhi", "Delhi"}, {"delhi", "Delhi"},
                                 {"mumbai", "Maharashtra"}, {"pune", "Maharashtra"}},
                                {"london"});
  auto r = mapper.resolve("New Delhi, India");
  CHECK(r.kind == ingest::LocationResult::Kind::State);
  CHECK(r.state == "Delhi");

  // Two distinct Indian cities -> ambiguous -> removed.
  CHECK(mapper.resolve("Mumbai, Pune").kind == ingest::LocationResult::Kind::Removed);
  // Foreign place wins regardless of Indian hits.
  CHECK(mapper.resolve("London and Mumbai").kind == ingest::LocationResult::Kind::Removed);
  CHECK(mapper.resolve("somewhere else").kind == ingest::LocationResult::Kind::Unresolved);
  CHECK(mapper.resolve("").kind == ingest::LocationResult::Kind::Unresolved);
}

TEST_CASE("geo-tagged place preempts the free-text profile location") {
  ingest::LocationMapper mapper({{"mumbai", "Maharashtra"}, {"patna", "Bihar"}}, {});
  UserProfile user;
  user.user_id = "u1";
  user.location_raw = "Mumbai";
  auto geo = mapper.map_location(user, std::string("Patna"), true);
  CHECK(geo.state == "Bihar");
  auto no_geo = mapper.map_location(user, std::string("Patna"), false);
  CHECK(no_geo.state == "Maharashtra");
  auto geo_no_place = mapper.map_location(user, std::nullopt, true);
  CHECK(geo_no_place.state == "Maharashtra");
}

TEST_CASE("latest geo-enabled tweet decides the place used for a user") {
  DatasetBundle bundle;
  UserProfile& u = bundle.users["u1"];
  u.user_id = "u1";
  u.location_raw = std::string("");
  TweetRecord early;
  early.tweet_id = "t1";
  early.user_id = "u1";
  early.timestamp = 10;
  early.place_name = std::string("Mumbai");
  early.geo_enabled = true;
  TweetRecord late;
  late.tweet_id = "t2";
  late.user_id = "u1";
  late.timestamp = 20;
  late.place_name = std::string("Patna");
  late.geo_enabled = true;
  bundle.tweets = {early, late};

  ingest::LocationMapper mapper({{"mumbai", "Maharashtra"}, {"patna", "Bihar"}}, {});
  ingest::LocationStats stats = ingest::apply_locations(bundle, mapper);
  CHECK(stats.resolved == 1);
  REQUIRE(bundle.users["u1"].state.has_value());
  CHECK(*bundle.users["u1"].state == "Bihar");
}
