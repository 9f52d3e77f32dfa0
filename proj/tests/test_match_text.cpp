#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "echoflow/match_text.hpp"

using namespace echoflow;
using namespace echoflow::match;

namespace {

text::Vocabulary two_term_vocab() {
  text::Vocabulary v;
  v.index = {{"aa", 0}, {"bb", 1}};
  v.terms = {"aa", "bb"};
  return v;
}

/// Unit vector at Euclidean distance d from the unit centroid [1, 0].
text::TermVector unit_at_distance(double d) {
  double c = 1.0 - d * d / 2.0;  // cosine
  double s = std::sqrt(1.0 - c * c);
  text::TermVector v;
  v.counts = {{0, c}, {1, s}};
  v.l2_normalized = true;
  return v;
}

MatchableTweet tweet(std::string id, std::int64_t ts, std::vector<std::string> tokens) {
  return MatchableTweet{std::move(id), ts, std::move(tokens)};
}

}  // namespace

TEST_CASE("default cluster count follows the square-root heuristic") {
  CHECK(default_cluster_count(0) == 1);
  CHECK(default_cluster_count(1) == 1);
  CHECK(default_cluster_count(2) == 1);
  CHECK(default_cluster_count(50) == 5);
  CHECK(default_cluster_count(100) == 8);  // ceil(sqrt(50))
}

TEST_CASE("match threshold is strict at the boundary") {
  CHECK(within_match_threshold(0.449 * 0.449, 0.45));
  CHECK_FALSE(within_match_threshold(0.450 * 0.450, 0.45));  // equality loses
  CHECK_FALSE(within_match_threshold(0.451 * 0.451, 0.45));
}

TEST_CASE("match decision on constructed vectors near the boundary") {
  text::Vocabulary vocab = two_term_vocab();
  text::TermVector anchor;
  anchor.counts = {{0, 1.0}};
  anchor.l2_normalized = true;
  TextClusterModel model = train_text_clusters({anchor}, vocab, 1, 7);
  REQUIRE(model.k == 1);
  REQUIRE(model.centroids[0][0] == doctest::Approx(1.0));

  std::optional<TextMatch> hit = match_text(unit_at_distance(0.449), model);
  REQUIRE(hit.has_value());
  CHECK(hit->distance == doctest::Approx(0.449).epsilon(1e-9));
  CHECK_FALSE(match_text(unit_at_distance(0.451), model).has_value());

  // A vector that lost every vocabulary term can never match.
  text::TermVector empty;
  CHECK_FALSE(match_text(empty, model).has_value());
}

TEST_CASE("cosine equals one minus half the squared distance on unit vectors") {
  std::mt19937_64 rng(99);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 200; ++trial) {
    text::TermVector a, b;
    for (int i = 0; i < 5; ++i) {
      a.counts[i] = unit() + 0.01;
      b.counts[i] = unit() + 0.01;
    }
    a.l2_normalize();
    b.l2_normalize();
    // Independent distance computation from dense coordinates.
    double d2 = 0;
    for (int i = 0; i < 5; ++i) {
      double diff = a.counts[i] - b.counts[i];
      d2 += diff * diff;
    }
    double cos = text::cosine_similarity(a, b);
    CHECK(std::abs(cos - (1.0 - d2 / 2.0)) <= 1e-9);
  }
}

TEST_CASE("k-means is deterministic for a fixed seed") {
  std::mt19937_64 rng(31);
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<std::string>> docs;
  const char* words[] = {"red", "green", "blue", "cyan", "teal", "plum"};
  for (int d = 0; d < 12; ++d) {
    std::vector<std::string> doc;
    for (int t = 0; t < 6; ++t) doc.push_back(words[static_cast<int>(unit() * 6) % 6]);
    docs.push_back(doc);
  }
  text::VectorizedCorpus corpus = text::vectorize_corpus(docs, 1);
  for (text::TermVector& v : corpus.vectors) v.l2_normalize();

  TextClusterModel m1 = train_text_clusters(corpus.vectors, corpus.vocabulary, 3, 5);
  TextClusterModel m2 = train_text_clusters(corpus.vectors, corpus.vocabulary, 3, 5);
  CHECK(m1.inertia == m2.inertia);
  REQUIRE(m1.centroids.size() == m2.centroids.size());
  for (std::size_t c = 0; c < m1.centroids.size(); ++c)
    CHECK(m1.centroids[c] == m2.centroids[c]);  // bitwise identical
}

TEST_CASE("duplicate points with k equal to n converge via empty-cluster rescue") {
  text::Vocabulary vocab = two_term_vocab();
  text::TermVector e0, e1;
  e0.counts = {{0, 1.0}};
  e1.counts = {{1, 1.0}};
  std::vector<text::TermVector> vectors = {e0, e0, e1};
  TextClusterModel model = train_text_clusters(vectors, vocab, 3, 7);
  CHECK(model.inertia == doctest::Approx(0.0));
  for (const text::TermVector& v : vectors) {
    std::optional<TextMatch> hit = match_text(v, model);
    REQUIRE(hit.has_value());
    CHECK(hit->distance == doctest::Approx(0.0));
  }
}

TEST_CASE("cluster training rejects bad k") {
  text::Vocabulary vocab = two_term_vocab();
  text::TermVector e0;
  e0.counts = {{0, 1.0}};
  std::vector<text::TermVector> vectors = {e0, e0, e0};
  CHECK_THROWS_AS(train_text_clusters(vectors, vocab, 0, 7), std::invalid_argument);
  CHECK_THROWS_AS(train_text_clusters(vectors, vocab, 4, 7), std::invalid_argument);
}

TEST_CASE("pair mapping picks the most similar counterpart and counts collisions") {
  std::vector<std::string> shared = {"alpha", "beta", "gamma", "delta", "epsi"};
  std::vector<std::string> unrelated = {"zeta", "eta", "theta", "iota", "kappa"};
  std::vector<MatchableTweet> apps = {tweet("a1", 100, shared), tweet("a2", 400, shared)};
  std::vector<MatchableTweet> others = {tweet("o1", 200, shared), tweet("o2", 50, unrelated)};

  PairMapping m = map_similar_pairs(apps, others, false);
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0].app_tweet_id == "a1");
  CHECK(m.pairs[0].other_tweet_id == "o1");
  CHECK(m.pairs[0].cosine == doctest::Approx(1.0));
  CHECK(m.pairs[0].app_first);
  CHECK_FALSE(m.pairs[0].same_timestamp);
  CHECK(m.pairs[1].app_tweet_id == "a2");
  CHECK(m.pairs[1].other_tweet_id == "o1");
  CHECK_FALSE(m.pairs[1].app_first);
  CHECK(m.collisions == 1);  // o1 claimed twice
  CHECK(m.app_duplicates_dropped == 0);
  CHECK(m.other_duplicates_dropped == 0);
}

TEST_CASE("equal-cosine ties resolve by earliest timestamp then smallest id") {
  std::vector<std::string> shared = {"alpha", "beta", "gamma", "delta", "epsi"};
  std::vector<MatchableTweet> apps = {tweet("a1", 500, shared)};
  std::vector<MatchableTweet> others = {tweet("o9", 500, shared), tweet("o1", 500, shared),
                                        tweet("o0", 600, shared)};
  PairMapping m = map_similar_pairs(apps, others, false);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].other_tweet_id == "o1");  // ts 500 beats 600; id o1 beats o9
  CHECK(m.pairs[0].same_timestamp);
  CHECK_FALSE(m.pairs[0].app_first);
}

TEST_CASE("dedup keeps the earliest instance of identical token sequences") {
  std::vector<std::string> shared = {"alpha", "beta", "gamma", "delta", "epsi"};
  std::vector<MatchableTweet> apps = {tweet("a1", 50, shared), tweet("a0", 50, shared)};
  std::vector<MatchableTweet> others = {tweet("x2", 300, shared), tweet("x1", 100, shared)};
  PairMapping m = map_similar_pairs(apps, others, true);
  CHECK(m.app_duplicates_dropped == 1);
  CHECK(m.other_duplicates_dropped == 1);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].app_tweet_id == "a0");  // same timestamp, smaller id kept
  CHECK(m.pairs[0].other_tweet_id == "x1");
  CHECK(m.pairs[0].app_first);
  CHECK(m.collisions == 0);
}

TEST_CASE("first-poster statistics split over strictly ordered pairs") {
  std::vector<TweetPair> pairs(4);
  pairs[0].app_first = true;
  pairs[1].app_first = true;
  pairs[2].app_first = false;
  pairs[3].same_timestamp = true;
  FirstPosterStats st = first_poster_stats(pairs);
  CHECK(st.app_first == 2);
  CHECK(st.other_first == 1);
  CHECK(st.simultaneous == 1);
  CHECK(st.app_first_fraction == doctest::Approx(2.0 / 3.0));
  CHECK(st.other_first_fraction == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(first_poster_stats({}), std::invalid_argument);
}
