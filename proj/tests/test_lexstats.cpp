#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "echoflow/lexstats.hpp"

using namespace echoflow;
using namespace echoflow::lexstats;

namespace {

std::vector<std::vector<std::string>> repeat_docs(int with, int without,
                                                  std::vector<std::string> payload) {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < with; ++i) docs.push_back(payload);
  for (int i = 0; i < without; ++i) docs.push_back({"filler", "noise"});
  return docs;
}

const OddsRatioRow* find_row(const std::vector<OddsRatioRow>& rows,
                             const std::vector<std::string>& ngram) {
  for (const OddsRatioRow& r : rows)
    if (r.ngram == ngram) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("term frequencies sort by count then alphabetically") {
  std::vector<std::vector<std::string>> docs = {{"b", "a", "b"}, {"a", "c", "a"}};
  auto table = term_frequencies(docs, 0);
  REQUIRE(table.size() == 3);
  CHECK(table[0] == std::pair<std::string, long long>{"a", 3});
  CHECK(table[1] == std::pair<std::string, long long>{"b", 2});
  CHECK(table[2] == std::pair<std::string, long long>{"c", 1});

  auto top2 = term_frequencies(docs, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[1].first == "b");

  auto tied = term_frequencies({{"zed", "ant"}, {"ant", "zed"}}, 0);
  CHECK(tied[0].first == "ant");  // equal counts, alphabetical
  CHECK(tied[1].first == "zed");
}

TEST_CASE("term frequencies match a straightforward recount") {
  std::mt19937_64 rng(8);
  const char* words[] = {"w0", "w1", "w2", "w3", "w4", "w5", "w6"};
  std::vector<std::vector<std::string>> docs;
  std::map<std::string, long long> expect;
  for (int d = 0; d < 40; ++d) {
    std::vector<std::string> doc;
    for (int t = 0; t < 12; ++t) {
      std::string w = words[rng() % 7];
      doc.push_back(w);
      ++expect[w];
    }
    docs.push_back(doc);
  }
  auto table = term_frequencies(docs, 0);
  REQUIRE(table.size() == expect.size());
  long long prev = table.front().second;
  for (const auto& [term, count] : table) {
    CHECK(count == expect.at(term));
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("hashtag frequencies count the multiset minus exclusions") {
  DatasetBundle bundle;
  TweetRecord t1;
  t1.tweet_id = "t1";
  t1.hashtags = {"vote", "india", "vote"};
  TweetRecord t2;
  t2.tweet_id = "t2";
  t2.hashtags = {"india", "skip"};
  bundle.tweets = {t1, t2};

  auto table = hashtag_frequencies(bundle, 0, {"skip"});
  REQUIRE(table.size() == 2);
  // Both tags count 2; the tie resolves alphabetically.
  CHECK(table[0] == std::pair<std::string, long long>{"india", 2});
  CHECK(table[1] == std::pair<std::string, long long>{"vote", 2});
}

TEST_CASE("odds ratio reproduces the ten-versus-one hand value") {
  auto docs_a = repeat_docs(10, 90, {"alpha", "beta"});
  auto docs_b = repeat_docs(1, 99, {"alpha", "beta"});
  auto rows = ngram_odds_ratios(docs_a, docs_b, 2, 1);
  const OddsRatioRow* row = find_row(rows, {"alpha", "beta"});
  REQUIRE(row != nullptr);
  CHECK(row->count_a == 10);
  CHECK(row->count_b == 1);
  CHECK(row->odds == Rational(1393, 181));  // (10.5/90.5)/(1.5/99.5) reduced
  double value = static_cast<double>(row->odds.numerator()) /
                 static_cast<double>(row->odds.denominator());
  CHECK(std::abs(value - 7.70) <= 0.01);
}

TEST_CASE("odds ratios in the two directions multiply to exactly one") {
  std::mt19937_64 rng(15);
  const char* words[] = {"p", "q", "r", "s", "t"};
  auto corpus = [&](int docs) {
    std::vector<std::vector<std::string>> out;
    for (int d = 0; d < docs; ++d) {
      std::vector<std::string> doc;
      for (int t = 0; t < 6; ++t) doc.push_back(words[rng() % 5]);
      out.push_back(doc);
    }
    return out;
  };
  auto docs_a = corpus(30);
  auto docs_b = corpus(25);
  auto forward = ngram_odds_ratios(docs_a, docs_b, 2, 1);
  auto backward = ngram_odds_ratios(docs_b, docs_a, 2, 1);
  REQUIRE(forward.size() == backward.size());
  REQUIRE(!forward.empty());
  for (const OddsRatioRow& f : forward) {
    const OddsRatioRow* b = find_row(backward, f.ngram);
    REQUIRE(b != nullptr);
    CHECK(f.odds * b->odds == Rational(1));  // exact, no tolerance
    CHECK(f.count_a == b->count_b);
    CHECK(f.count_b == b->count_a);
  }
}

TEST_CASE("rare n-grams fall under the minimum count") {
  std::vector<std::vector<std::string>> docs_a = {{"p", "q"}, {"p", "q"}, {"r", "s"}};
  std::vector<std::vector<std::string>> docs_b = {{"p", "q"}};
  auto rows = ngram_odds_ratios(docs_a, docs_b, 2, 3);
  CHECK(find_row(rows, {"p", "q"}) != nullptr);  // 2 + 1 meets the floor
  CHECK(find_row(rows, {"r", "s"}) == nullptr);  // 1 + 0 does not
}

TEST_CASE("an n-gram counts once per document regardless of repeats") {
  std::vector<std::vector<std::string>> docs_a = {{"p", "q", "p", "q"}};
  std::vector<std::vector<std::string>> docs_b = {{"z", "z", "z"}};
  auto rows = ngram_odds_ratios(docs_a, docs_b, 2, 1);
  const OddsRatioRow* pq = find_row(rows, {"p", "q"});
  REQUIRE(pq != nullptr);
  CHECK(pq->count_a == 1);
  const OddsRatioRow* zz = find_row(rows, {"z", "z"});
  REQUIRE(zz != nullptr);
  CHECK(zz->count_b == 1);
}

TEST_CASE("rows sort by descending odds with alphabetical ties") {
  std::vector<std::vector<std::string>> docs_a = {{"c", "d"}, {"a", "b"}};
  std::vector<std::vector<std::string>> docs_b = {{"x", "y"}};
  auto rows = ngram_odds_ratios(docs_a, docs_b, 2, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ngram == std::vector<std::string>{"a", "b"});
  CHECK(rows[1].ngram == std::vector<std::string>{"c", "d"});
  CHECK(rows[0].odds == rows[1].odds);
  CHECK(rows[2].ngram == std::vector<std::string>{"x", "y"});
}

TEST_CASE("odds grow strictly with the presence count") {
  std::vector<std::vector<std::string>> docs_b = {{"m", "n"}, {"u", "v"}};
  Rational prev{0};
  for (int a = 0; a <= 3; ++a) {
    std::vector<std::vector<std::string>> docs_a;
    for (int i = 0; i < a; ++i) docs_a.push_back({"m", "n"});
    for (int i = a; i < 3; ++i) docs_a.push_back({"u", "v"});
    auto rows = ngram_odds_ratios(docs_a, docs_b, 2, 1);
    const OddsRatioRow* row = find_row(rows, {"m", "n"});
    REQUIRE(row != nullptr);
    if (a > 0) CHECK(row->odds > prev);
    prev = row->odds;
  }
}

TEST_CASE("trigrams work and other orders are rejected") {
  std::vector<std::vector<std::string>> docs_a = {{"a", "b", "c", "d"}};
  std::vector<std::vector<std::string>> docs_b = {{"a", "b", "c"}};
  auto rows = ngram_odds_ratios(docs_a, docs_b, 3, 1);
  const OddsRatioRow* abc = find_row(rows, {"a", "b", "c"});
  REQUIRE(abc != nullptr);
  CHECK(abc->n == 3);
  CHECK(abc->count_a == 1);
  CHECK(abc->count_b == 1);
  CHECK(find_row(rows, {"b", "c", "d"}) != nullptr);
  CHECK(ngram_to_string({"a", "b", "c"}) == "a b c");

  CHECK_THROWS_AS(ngram_odds_ratios(docs_a, docs_b, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(ngram_odds_ratios(docs_a, docs_b, 4, 1), std::invalid_argument);
}

TEST_CASE("documents shorter than the order contribute nothing") {
  std::vector<std::vector<std::string>> docs_a = {{"solo"}, {"p", "q"}};
  std::vector<std::vector<std::string>> docs_b = {{"p", "q"}};
  auto rows = ngram_odds_ratios(docs_a, docs_b, 2, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].count_a == 1);
}
