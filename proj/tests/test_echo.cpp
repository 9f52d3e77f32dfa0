#include <doctest.h>

#include <filesystem>

#include "echoflow/echo.hpp"
#include "echoflow/io_util.hpp"

using namespace echoflow;
using namespace echoflow::echo;
namespace fs = std::filesystem;

namespace {

HashtagLexicon score_lexicon() {
  fs::path dir = fs::temp_directory_path() / "echoflow_echo_tests";
  fs::create_directories(dir);
  std::string path = (dir / "lex.csv").string();
  io::write_file(path,
                 "hashtag,label\nup1,pro-bjp\nup2,anti-congress\ndown1,anti-bjp\n"
                 "down2,pro-congress\nflat,neutral\n");
  return load_lexicon(path);
}

void add_tweet(DatasetBundle& bundle, const char* id, const char* user,
               std::vector<std::string> tags) {
  TweetRecord t;
  t.tweet_id = id;
  t.user_id = user;
  t.timestamp = 1;
  t.hashtags = std::move(tags);
  bundle.tweets.push_back(t);
  if (!bundle.users.count(user)) bundle.users[user].user_id = user;
}

}  // namespace

TEST_CASE("hashtag scores map the two poles to 1 and 0") {
  CHECK(hashtag_score(HashtagLabel::ProBJP) == 1);
  CHECK(hashtag_score(HashtagLabel::AntiBJP) == 0);
  CHECK(hashtag_score(HashtagLabel::ProCongress) == 0);
  CHECK(hashtag_score(HashtagLabel::Neutral) == std::nullopt);
  CHECK(hashtag_score(HashtagLabel::AntiCongress) == 1);  // default
  ScoreConfig drop;
  drop.anti_congress_score = std::nullopt;
  CHECK(hashtag_score(HashtagLabel::AntiCongress, drop) == std::nullopt);
  ScoreConfig zero;
  zero.anti_congress_score = 0;
  CHECK(hashtag_score(HashtagLabel::AntiCongress, zero) == 0);
}

TEST_CASE("production polarity is the exact mean of binary scores") {
  HashtagLexicon lex = score_lexicon();
  DatasetBundle bundle;
  add_tweet(bundle, "t1", "u1", {"up1", "up2", "down1", "flat", "mystery"});
  graph::SocialGraph follow;
  follow.kind = GraphKind::Follow;

  auto p = polarity_profile("u1", bundle, lex, follow);
  REQUIRE(p.has_value());
  CHECK(p->production_polarity == Rational(2, 3));
  // Population variance: (2*(1 - 2/3)^2 + 1*(2/3)^2) / 3 = 2/9.
  CHECK(p->production_variance == Rational(2, 9));
  CHECK(p->produced_hashtag_count == 3);
  CHECK(!p->consumption_polarity.has_value());
}

TEST_CASE("variance equals the Bernoulli identity for every mean") {
  HashtagLexicon lex = score_lexicon();
  // All (ones, zeros) splits up to 12 hashtags.
  for (long long n = 1; n <= 12; ++n) {
    for (long long ones = 0; ones <= n; ++ones) {
      DatasetBundle bundle;
      std::vector<std::string> tags;
      for (long long i = 0; i < ones; ++i) tags.push_back("up1");
      for (long long i = 0; i < n - ones; ++i) tags.push_back("down1");
      add_tweet(bundle, "t", "u", tags);
      graph::SocialGraph follow;
      auto p = polarity_profile("u", bundle, lex, follow);
      REQUIRE(p.has_value());
      Rational mean = p->production_polarity;
      CHECK(p->production_variance == mean * (Rational(1) - mean));
    }
  }
}

TEST_CASE("users with no scored hashtags have no profile") {
  HashtagLexicon lex = score_lexicon();
  DatasetBundle bundle;
  add_tweet(bundle, "t1", "u1", {"flat", "unknown_tag"});
  graph::SocialGraph follow;
  CHECK(!polarity_profile("u1", bundle, lex, follow).has_value());
  CHECK_THROWS_AS(polarity_profile("ghost", bundle, lex, follow), std::invalid_argument);
}

TEST_CASE("consumption pools every followee's scored hashtags") {
  HashtagLexicon lex = score_lexicon();
  DatasetBundle bundle;
  add_tweet(bundle, "t1", "a", {"up1", "up1"});     // polarity 1
  add_tweet(bundle, "t2", "b", {"down1"});          // polarity 0
  add_tweet(bundle, "t3", "c", {"up1"});
  bundle.users["c"].user_id = "c";

  // c follows a and b: the Follow graph stores content flow source->consumer.
  graph::SocialGraph follow;
  follow.kind = GraphKind::Follow;
  follow.add_edge("a", "c");
  follow.add_edge("b", "c");

  auto p = polarity_profile("c", bundle, lex, follow);
  REQUIRE(p.has_value());
  REQUIRE(p->consumption_polarity.has_value());
  // Pooled multiset: {1, 1, 0} -> mean 2/3 over three consumed hashtags.
  CHECK(*p->consumption_polarity == Rational(2, 3));
  CHECK(p->consumed_hashtag_count == 3);
  REQUIRE(p->consumption_variance.has_value());
  CHECK(*p->consumption_variance == Rational(2, 3) * Rational(1, 3));
}

TEST_CASE("profile map covers exactly the users with scored production") {
  HashtagLexicon lex = score_lexicon();
  DatasetBundle bundle;
  add_tweet(bundle, "t1", "scored", {"up1"});
  add_tweet(bundle, "t2", "unscored", {"flat"});
  graph::SocialGraph follow;
  auto all = polarity_profiles(bundle, lex, follow);
  CHECK(all.size() == 1);
  CHECK(all.count("scored") == 1);
}
