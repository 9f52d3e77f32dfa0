#include <doctest.h>

#include <cmath>
#include <random>

#include "echoflow/text.hpp"

using namespace echoflow;
using namespace echoflow::text;

TEST_CASE("preprocessing lowercases, strips urls and handles, drops stopwords") {
  std::set<std::string> stop = default_stopwords();
  auto tokens = preprocess_text("Check THIS out http://t.co/abc @friend now!", stop);
  CHECK(tokens == std::vector<std::string>{"check", "out", "now"});

  CHECK(preprocess_text("visit www.example.com today", stop) ==
        std::vector<std::string>{"visit", "today"});
  CHECK(preprocess_text("", stop).empty());
}

TEST_CASE("non-latin words survive preprocessing") {
  std::set<std::string> stop = default_stopwords();
  auto tokens = preprocess_text("नमस्ते world", stop);
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0] == "नमस्ते");
  CHECK(tokens[1] == "world");
}

TEST_CASE("hashtag extraction lowercases and drops the marker") {
  auto tags = extract_hashtags("Big #Rally today #ModiJi #rally");
  CHECK(tags == std::vector<std::string>{"rally", "modiji", "rally"});
  CHECK(extract_hashtags("no tags here").empty());
  CHECK(extract_hashtags("trailing #").empty());
}

TEST_CASE("vocabulary keeps only terms at or above min_df and sorts them") {
  std::vector<std::vector<std::string>> docs = {
      {"apple", "banana"}, {"apple", "cherry"}, {"banana", "apple"}};
  VectorizedCorpus corpus = vectorize_corpus(docs, 2);
  REQUIRE(corpus.vocabulary.terms == std::vector<std::string>{"apple", "banana"});
  CHECK(corpus.vocabulary.lookup("cherry") == -1);
  // Raw counts: doc 2 repeats nothing; doc 0 has one of each.
  CHECK(corpus.vectors[0].counts.at(0) == 1.0);
  CHECK(corpus.vectors[0].counts.at(1) == 1.0);
}

TEST_CASE("dot and cosine agree with hand arithmetic") {
  TermVector a, b;
  a.counts = {{0, 3.0}, {1, 4.0}};
  b.counts = {{1, 4.0}, {2, 3.0}};
  CHECK(dot(a, b) == doctest::Approx(16.0));
  // cos = 16 / (5 * 5)
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.64));
}

TEST_CASE("squared distance to a centroid matches the expansion identity") {
  std::mt19937_64 rng(99);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 200; ++trial) {
    TermVector v;
    std::vector<double> centroid(6, 0.0);
    for (int i = 0; i < 6; ++i) {
      if (rng() % 2) v.counts[i] = unit();
      centroid[i] = unit();
    }
    v.l2_normalize();
    double c_sq = 0;
    for (double c : centroid) c_sq += c * c;
    // Independent recompute: explicit sum of squared differences.
    double direct = 0;
    for (int i = 0; i < 6; ++i) {
      double vi = v.counts.count(i) ? v.counts.at(i) : 0.0;
      direct += (vi - centroid[i]) * (vi - centroid[i]);
    }
    CHECK(squared_distance(v, centroid, c_sq) == doctest::Approx(direct).epsilon(1e-12));
  }
}
