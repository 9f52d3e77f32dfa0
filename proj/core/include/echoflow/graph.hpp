#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "echoflow/types.hpp"

namespace echoflow::graph {

/// Directed weighted graph over user ids. Parallel edges are collapsed
/// into weights; self-loops are dropped at construction.
struct SocialGraph {
  GraphKind kind = GraphKind::Follow;
  std::set<std::string> nodes;
  std::map<UserEdge, double> edges;  // (from, to) -> weight

  void add_edge(const std::string& from, const std::string& to, double w = 1.0);
  SocialGraph reversed() const;
  double total_weight() const;
};

/// Edge direction encodes information flow: "u follows v" puts v->u in
/// the Follow graph (content flows from v to u) and u->v in Friends.
/// "u retweeted v" puts v->u in the Retweet graph.
SocialGraph build_graph(const DatasetBundle& bundle, GraphKind kind);

struct CommunityPartition {
  std::map<std::string, int> assignment;  // community ids 0..C-1, largest first
  double modularity_q = 0.0;
};

struct LouvainOptions {
  double resolution = 1.0;
  int restarts = 5;  // best-Q partition over seeds seed, seed+1, ...
};

/// Greedy modularity maximization on the symmetrized graph. Fixed seed
/// gives a bit-identical partition; community ids are relabeled by
/// descending size.
CommunityPartition detect_communities(const SocialGraph& graph, std::uint64_t seed,
                                      const LouvainOptions& options = {});

/// Newman modularity of an assignment, on the symmetrized weights.
/// Zero-weight graphs score 0.
double modularity(const SocialGraph& graph, const std::map<std::string, int>& assignment,
                  double resolution = 1.0);

struct FractionRow {
  int community = 0;
  std::size_t size = 0;
  Rational pro_bjp{0};
  Rational other{0};
  Rational unknown{0};  // the three sum to 1 exactly
};

/// Per-community affiliation composition, largest community first.
/// Throws std::invalid_argument when a partition node has no
/// affiliation entry.
std::vector<FractionRow> affiliation_fractions(
    const CommunityPartition& partition,
    const std::map<std::string, Affiliation>& affiliations);

/// source,target,weight rows in sorted order.
void write_edge_list(const SocialGraph& graph, const std::string& path);

/// user_id, affiliation, community, degree (weighted in+out).
void write_node_table(const SocialGraph& graph, const CommunityPartition& partition,
                      const std::map<std::string, Affiliation>& affiliations,
                      const std::string& path);

}  // namespace echoflow::graph
