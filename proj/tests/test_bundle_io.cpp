#include <doctest.h>

#include <filesystem>

#include "echoflow/bundle_io.hpp"
#include "echoflow/io_util.hpp"

using namespace echoflow;
namespace fs = std::filesystem;

namespace {

DatasetBundle sample_bundle() {
  DatasetBundle b;
  TweetRecord t;
  t.tweet_id = "t1";
  t.user_id = "u1";
  t.timestamp = 123456;
  t.text = "hello #world via NaMo App";
  t.hashtags = {"world"};
  t.source_tag = SourceTag::AppNaMo;
  t.retweet_of = std::string("t0");
  t.like_count = 7;
  t.retweet_count = 3;
  t.image_refs = {"img1", "img2"};
  t.place_name = std::string("Mumbai");
  t.geo_enabled = true;
  b.tweets.push_back(t);

  UserProfile u;
  u.user_id = "u1";
  u.screen_name = "alpha";
  u.description = "likes चाय";
  u.followers_count = 42;
  u.location_raw = std::string("Mumbai");
  u.state = std::string("Maharashtra");
  u.affiliation = Affiliation::ProBJP;
  u.role = Role::Seed;
  b.users["u1"] = u;
  UserProfile v;
  v.user_id = "u2";
  b.users["u2"] = v;

  b.follow_edges = {{"u1", "u2"}};
  b.retweet_edges = {{"u2", "u1"}};
  b.time_window = {123456, 123456};
  return b;
}

std::string temp_file(const char* name) {
  fs::path dir = fs::temp_directory_path() / "echoflow_bundle_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("bundle roundtrips through the binary format unchanged") {
  DatasetBundle original = sample_bundle();
  std::string path = temp_file("roundtrip.bin");
  bundle_io::save_bundle(original, path);
  DatasetBundle loaded = bundle_io::load_bundle(path);

  REQUIRE(loaded.tweets.size() == 1);
  const TweetRecord& t = loaded.tweets[0];
  CHECK(t.tweet_id == "t1");
  CHECK(t.text == "hello #world via NaMo App");
  CHECK(t.hashtags == std::vector<std::string>{"world"});
  CHECK(t.source_tag == SourceTag::AppNaMo);
  CHECK(t.retweet_of == std::optional<std::string>("t0"));
  CHECK(t.like_count == 7);
  CHECK(t.image_refs == std::vector<std::string>{"img1", "img2"});
  CHECK(t.place_name == std::optional<std::string>("Mumbai"));
  CHECK(t.geo_enabled);

  REQUIRE(loaded.users.size() == 2);
  const UserProfile& u = loaded.users.at("u1");
  CHECK(u.description == "likes चाय");
  CHECK(u.followers_count == 42);
  CHECK(u.state == std::optional<std::string>("Maharashtra"));
  CHECK(u.affiliation == Affiliation::ProBJP);
  CHECK(u.role == Role::Seed);
  CHECK(loaded.users.at("u2").location_raw == std::optional<std::string>());

  CHECK(loaded.follow_edges == original.follow_edges);
  CHECK(loaded.retweet_edges == original.retweet_edges);
  CHECK(loaded.time_window == original.time_window);
}

TEST_CASE("corrupted bundles are rejected") {
  std::string path = temp_file("corrupt.bin");
  SUBCASE("wrong magic") {
    io::write_file(path, "not a bundle at all");
    CHECK_THROWS_AS(bundle_io::load_bundle(path), std::runtime_error);
  }
  SUBCASE("truncated payload") {
    bundle_io::save_bundle(sample_bundle(), path);
    std::string bytes = io::read_file(path);
    io::write_file(path, bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(bundle_io::load_bundle(path), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(bundle_io::load_bundle(temp_file("nope.bin")), std::runtime_error);
  }
}
