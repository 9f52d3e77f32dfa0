#include <doctest.h>

#include <filesystem>

#include "echoflow/io_util.hpp"
#include "echoflow/lexicon.hpp"

using namespace echoflow;
using namespace echoflow::lexicon;
namespace fs = std::filesystem;

namespace {

HashtagLexicon tiny_lexicon() {
  fs::path dir = fs::temp_directory_path() / "echoflow_lexicon_tests";
  fs::create_directories(dir);
  std::string path = (dir / "lex.csv").string();
  io::write_file(path,
                 "hashtag,label\npro1,pro-bjp\npro2,pro-bjp\nanti1,anti-bjp\ncong1,pro-congress\n"
                 "acong1,anti-congress\nneut1,neutral\n");
  return load_lexicon(path);
}

}  // namespace

TEST_CASE("leaning ratios divide annotated counts exactly") {
  HashtagLexicon lex = tiny_lexicon();
  // 4 pro-bjp, 1 anti-bjp, 5 neutral, 2 unlabeled.
  std::vector<std::string> tags = {"pro1", "pro1", "pro2", "pro1", "anti1", "neut1",
                                   "neut1", "neut1", "neut1", "neut1", "zzz", "yyy"};
  LeaningRatios r = compute_leaning_ratios(tags, lex);
  CHECK(r.annotated_count == 5);
  CHECK(r.not_neutral_count == 7);  // annotated + unlabeled; neutral excluded
  CHECK(r.total_hashtags == 12);
  CHECK(r.pro_bjp_ratio == Rational(4, 5));
  CHECK(r.anti_bjp_ratio == Rational(1, 5));
  CHECK(r.pro_congress_ratio == Rational(0));
  CHECK(r.percent_used == Rational(5, 7));
}

TEST_CASE("threshold comparison is strict") {
  HashtagLexicon lex = tiny_lexicon();
  // 1 annotated of 10 not-neutral: percent_used exactly 1/10.
  std::vector<std::string> tags = {"pro1"};
  for (int i = 0; i < 9; ++i) tags.push_back("unlabeled" + std::to_string(i));
  LeaningRatios r = compute_leaning_ratios(tags, lex);
  REQUIRE(r.percent_used == Rational(1, 10));
  // Exactly at threshold -> not below -> classified.
  CHECK(assign_affiliation(r, Rational(1, 10)) == Affiliation::ProBJP);
  // Just above -> below threshold -> Unknown.
  CHECK(assign_affiliation(r, Rational(1, 10) + Rational(1, 1000000)) == Affiliation::Unknown);
}

TEST_CASE("argmax ties within a pole resolve; ties across poles abstain") {
  HashtagLexicon lex = tiny_lexicon();
  SUBCASE("same pole") {
    // 2 pro-bjp + 2 anti-congress: tie at the top, both map to the BJP pole.
    LeaningRatios r = compute_leaning_ratios({"pro1", "pro1", "acong1", "acong1", "anti1"}, lex);
    CHECK(assign_affiliation(r, Rational(0)) == Affiliation::ProBJP);
  }
  SUBCASE("cross pole") {
    LeaningRatios r = compute_leaning_ratios({"pro1", "anti1"}, lex);
    CHECK(assign_affiliation(r, Rational(0)) == Affiliation::Unknown);
  }
  SUBCASE("no annotated hashtags") {
    LeaningRatios r = compute_leaning_ratios({"zzz"}, lex);
    CHECK(assign_affiliation(r, Rational(0)) == Affiliation::Unknown);
  }
  SUBCASE("anti-congress pole is configurable") {
    LeaningRatios r = compute_leaning_ratios({"acong1"}, lex);
    CHECK(assign_affiliation(r, Rational(0)) == Affiliation::ProBJP);
    PoleMapping flipped;
    flipped.anti_congress = Affiliation::Other;
    CHECK(assign_affiliation(r, Rational(0), flipped) == Affiliation::Other);
  }
}

TEST_CASE("invalid thresholds are rejected") {
  HashtagLexicon lex = tiny_lexicon();
  LeaningRatios r = compute_leaning_ratios({"pro1"}, lex);
  CHECK_THROWS_AS(assign_affiliation(r, Rational(-1, 10)), std::invalid_argument);
  CHECK_THROWS_AS(assign_affiliation(r, Rational(11, 10)), std::invalid_argument);
}

TEST_CASE("screen-name keywords decide before descriptions") {
  KeywordConfig kw = KeywordConfig::defaults();
  // Screen name hit decides even when the description says the opposite.
  CHECK(metadata_affiliation("proud_bjp_fan", "i love rahul gandhi", kw) == Affiliation::ProBJP);
  CHECK(metadata_affiliation("inc_volunteer", "modi for india", kw) == Affiliation::Other);
  // Both parties in the screen name -> stage abstains entirely.
  CHECK(metadata_affiliation("modi_vs_congress", "anything", kw) == std::nullopt);
  // No screen hit -> description decides, on word boundaries.
  CHECK(metadata_affiliation("plainname", "supporter of narendra modi", kw) == Affiliation::ProBJP);
  CHECK(metadata_affiliation("plainname", "vote for rahul gandhi", kw) == Affiliation::Other);
  // Substring inside a longer word does not count for descriptions.
  CHECK(metadata_affiliation("plainname", "commodity trader", kw) == std::nullopt);
  CHECK(metadata_affiliation("plainname", "nothing political", kw) == std::nullopt);
}

TEST_CASE("sweep rows must be ascending and unknown counts never fall") {
  HashtagLexicon lex = tiny_lexicon();
  std::vector<LeaningRatios> users;
  for (int k = 1; k <= 9; ++k) {
    std::vector<std::string> tags(static_cast<std::size_t>(k), "pro1");
    for (int u = 0; u < 10 - k; ++u) tags.push_back("unlabeled" + std::to_string(u));
    users.push_back(compute_leaning_ratios(tags, lex));
  }
  std::vector<Rational> thresholds = {Rational(0), Rational(1, 4), Rational(1, 2),
                                      Rational(3, 4), Rational(1)};
  std::vector<SweepRow> rows = threshold_sweep(users, thresholds);
  REQUIRE(rows.size() == thresholds.size());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].unknown >= rows[i - 1].unknown);
  for (const SweepRow& row : rows) CHECK(row.pro_bjp + row.other + row.unknown == users.size());

  CHECK_THROWS_AS(threshold_sweep(users, {Rational(1, 2), Rational(1, 4)}), std::invalid_argument);
}

TEST_CASE("resolution precedence is curated, then metadata, then ratios") {
  HashtagLexicon lex = tiny_lexicon();
  DatasetBundle bundle;
  auto add_user = [&](const char* id, const char* screen, const char* desc) {
    UserProfile u;
    u.user_id = id;
    u.screen_name = screen;
    u.description = desc;
    bundle.users[id] = u;
  };
  auto add_tweet = [&](const char* id, const char* user, std::vector<std::string> tags) {
    TweetRecord t;
    t.tweet_id = id;
    t.user_id = user;
    t.timestamp = 1;
    t.hashtags = std::move(tags);
    bundle.tweets.push_back(t);
  };
  add_user("curated_user", "modi_fan", "bjp supporter");  // metadata would say ProBJP
  add_user("metadata_user", "inc_fan", "");
  add_tweet("t1", "metadata_user", {"pro1", "pro1"});  // ratios would say ProBJP
  add_user("ratio_user", "plain", "no politics");
  add_tweet("t2", "ratio_user", {"pro1", "pro2"});
  add_user("nobody", "plain2", "quiet");

  std::map<std::string, Affiliation> curated = {{"curated_user", Affiliation::Other}};
  AffiliationStats stats = resolve_affiliations(bundle, lex, curated);

  CHECK(bundle.users["curated_user"].affiliation == Affiliation::Other);
  CHECK(bundle.users["metadata_user"].affiliation == Affiliation::Other);
  CHECK(bundle.users["ratio_user"].affiliation == Affiliation::ProBJP);
  CHECK(bundle.users["nobody"].affiliation == Affiliation::Unknown);
  CHECK(stats.curated == 1);
  CHECK(stats.metadata == 1);
  CHECK(stats.ratios == 1);
  CHECK(stats.unknown == 1);
}

TEST_CASE("missing curated file skips the stage silently") {
  CHECK(load_curated("") == std::nullopt);
  CHECK(load_curated("/nonexistent/curated.csv") == std::nullopt);
}
