#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "echoflow/graph.hpp"

using namespace echoflow;
using namespace echoflow::graph;

namespace {

double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

/// Exhaustive best modularity over every partition of the node set
/// (restricted-growth-string enumeration). Only feasible for tiny n.
double brute_force_best_q(const SocialGraph& g) {
  std::vector<std::string> nodes(g.nodes.begin(), g.nodes.end());
  std::size_t n = nodes.size();
  std::vector<int> rgs(n, 0);
  double best = -1.0;
  while (true) {
    std::map<std::string, int> assignment;
    for (std::size_t i = 0; i < n; ++i) assignment[nodes[i]] = rgs[i];
    best = std::max(best, modularity(g, assignment));

    // Next restricted growth string.
    std::size_t i = n;
    while (i-- > 1) {
      int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
      if (rgs[i] < cap) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
      rgs[i] = 0;
      if (i == 1) return best;
    }
    if (n <= 1) return best;
  }
}

/// Adjusted Rand index between two labelings of the same keys.
double adjusted_rand_index(const std::map<std::string, int>& a,
                           const std::map<std::string, int>& b) {
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> count_a, count_b;
  long long n = 0;
  for (const auto& [node, la] : a) {
    int lb = b.at(node);
    ++joint[{la, lb}];
    ++count_a[la];
    ++count_b[lb];
    ++n;
  }
  auto choose2 = [](long long k) { return k * (k - 1) / 2.0; };
  double sum_joint = 0, sum_a = 0, sum_b = 0;
  for (const auto& [key, c] : joint) sum_joint += choose2(c);
  for (const auto& [key, c] : count_a) sum_a += choose2(c);
  for (const auto& [key, c] : count_b) sum_b += choose2(c);
  double total = choose2(n);
  double expected = sum_a * sum_b / total;
  double max_index = (sum_a + sum_b) / 2.0;
  if (max_index == expected) return 1.0;
  return (sum_joint - expected) / (max_index - expected);
}

}  // namespace

TEST_CASE("edge direction conventions per graph kind") {
  DatasetBundle bundle;
  bundle.users["u"].user_id = "u";
  bundle.users["v"].user_id = "v";
  bundle.follow_edges = {{"u", "v"}};   // u follows v
  bundle.retweet_edges = {{"u", "v"}};  // u retweeted v

  SocialGraph follow = build_graph(bundle, GraphKind::Follow);
  CHECK(follow.edges.count({"v", "u"}) == 1);  // content flows v -> u
  SocialGraph friends = build_graph(bundle, GraphKind::Friends);
  CHECK(friends.edges.count({"u", "v"}) == 1);
  SocialGraph retweet = build_graph(bundle, GraphKind::Retweet);
  CHECK(retweet.edges.count({"v", "u"}) == 1);
}

TEST_CASE("self-loops are dropped and parallel edges collapse into weights") {
  SocialGraph g;
  g.add_edge("a", "a");
  g.add_edge("a", "b");
  g.add_edge("a", "b", 2.0);
  CHECK(g.edges.size() == 1);
  CHECK(g.edges.at({"a", "b"}) == doctest::Approx(3.0));
  CHECK(g.total_weight() == doctest::Approx(3.0));
}

TEST_CASE("two cliques joined by one edge split exactly") {
  SocialGraph g;
  std::vector<std::string> left = {"a", "b", "c", "d"}, right = {"e", "f", "g", "h"};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      g.add_edge(left[i], left[j]);
      g.add_edge(right[i], right[j]);
    }
  g.add_edge("d", "e");

  CommunityPartition p = detect_communities(g, 7);
  std::set<int> left_ids, right_ids;
  for (const std::string& v : left) left_ids.insert(p.assignment.at(v));
  for (const std::string& v : right) right_ids.insert(p.assignment.at(v));
  CHECK(left_ids.size() == 1);
  CHECK(right_ids.size() == 1);
  CHECK(*left_ids.begin() != *right_ids.begin());
}

TEST_CASE("detected modularity is near the exhaustive optimum on small graphs") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    SocialGraph g;
    std::vector<std::string> nodes;
    for (int i = 0; i < 8; ++i) nodes.push_back("n" + std::to_string(i));
    for (const std::string& v : nodes) g.nodes.insert(v);
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        if (unit(rng) < 0.35) g.add_edge(nodes[i], nodes[j]);
    if (g.edges.empty()) continue;

    double best = brute_force_best_q(g);
    CommunityPartition p = detect_communities(g, 7);
    CHECK(p.modularity_q >= 0.95 * best - 1e-12);
    // Reported Q must equal an independent recompute on the original graph.
    CHECK(p.modularity_q == doctest::Approx(modularity(g, p.assignment)).epsilon(1e-12));
  }
}

TEST_CASE("planted three-block graph is recovered almost perfectly") {
  std::mt19937_64 rng(11);
  SocialGraph g;
  std::map<std::string, int> truth;
  std::vector<std::string> nodes;
  for (int i = 0; i < 200; ++i) {
    std::string id = "u" + std::to_string(100 + i);
    nodes.push_back(id);
    g.nodes.insert(id);
    truth[id] = i < 70 ? 0 : i < 140 ? 1 : 2;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      double p = truth[nodes[i]] == truth[nodes[j]] ? 0.3 : 0.01;
      if (unit(rng) < p) g.add_edge(nodes[i], nodes[j]);
    }

  CommunityPartition p = detect_communities(g, 7);
  CHECK(adjusted_rand_index(truth, p.assignment) >= 0.95);
}

TEST_CASE("community labels are ordered by size") {
  SocialGraph g;
  // Sizes 3 and 2.
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  g.add_edge("a", "c");
  g.add_edge("x", "y");
  CommunityPartition p = detect_communities(g, 7);
  std::map<int, int> sizes;
  for (const auto& [node, c] : p.assignment) ++sizes[c];
  REQUIRE(sizes.size() == 2);
  CHECK(sizes.at(0) == 3);
  CHECK(sizes.at(1) == 2);
}

TEST_CASE("affiliation fractions sum to one exactly per community") {
  CommunityPartition p;
  p.assignment = {{"a", 0}, {"b", 0}, {"c", 0}, {"x", 1}, {"y", 1}};
  std::map<std::string, Affiliation> aff = {{"a", Affiliation::ProBJP},
                                            {"b", Affiliation::ProBJP},
                                            {"c", Affiliation::Other},
                                            {"x", Affiliation::Unknown},
                                            {"y", Affiliation::ProBJP}};
  std::vector<FractionRow> rows = affiliation_fractions(p, aff);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].community == 0);  // larger first
  CHECK(rows[0].pro_bjp == Rational(2, 3));
  CHECK(rows[0].other == Rational(1, 3));
  CHECK(rows[0].unknown == Rational(0));
  CHECK(rows[1].pro_bjp + rows[1].other + rows[1].unknown == Rational(1));

  std::map<std::string, Affiliation> missing = {{"a", Affiliation::ProBJP}};
  CHECK_THROWS_AS(affiliation_fractions(p, missing), std::invalid_argument);
}

TEST_CASE("empty graph is rejected") {
  SocialGraph g;
  CHECK_THROWS_AS(detect_communities(g, 7), std::invalid_argument);
}

TEST_CASE("restarts never lower the reported modularity") {
  std::mt19937_64 rng(2024);
  SocialGraph g;
  std::vector<std::string> nodes;
  for (int i = 0; i < 14; ++i) nodes.push_back("m" + std::to_string(i));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (unit(rng) < 0.3) g.add_edge(nodes[i], nodes[j]);

  LouvainOptions one_shot;
  one_shot.restarts = 1;
  LouvainOptions many;
  many.restarts = 8;
  double q1 = detect_communities(g, 21, one_shot).modularity_q;
  double q8 = detect_communities(g, 21, many).modularity_q;
  CHECK(q8 >= q1 - 1e-12);
}
