#include "echoflow/graph.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <stdexcept>

#include "echoflow/io_util.hpp"

namespace echoflow::graph {

void SocialGraph::add_edge(const std::string& from, const std::string& to, double w) {
  nodes.insert(from);
  nodes.insert(to);
  if (from == to) return;
  edges[{from, to}] += w;
}

SocialGraph SocialGraph::reversed() const {
  SocialGraph r;
  r.kind = kind == GraphKind::Follow ? GraphKind::Friends
           : kind == GraphKind::Friends ? GraphKind::Follow
                                        : kind;
  r.nodes = nodes;
  for (const auto& [edge, w] : edges) r.edges[{edge.second, edge.first}] = w;
  return r;
}

double SocialGraph::total_weight() const {
  double sum = 0;
  for (const auto& [edge, w] : edges) sum += w;
  return sum;
}

SocialGraph build_graph(const DatasetBundle& bundle, GraphKind kind) {
  SocialGraph g;
  g.kind = kind;
  for (const auto& [id, user] : bundle.users) g.nodes.insert(id);
  const std::vector<UserEdge>& records =
      kind == GraphKind::Retweet ? bundle.retweet_edges : bundle.follow_edges;
  for (const auto& [from, to] : records) {
    // A record (u, v) means u follows / retweeted v; content flows v->u.
    if (kind == GraphKind::Friends) g.add_edge(from, to);
    else g.add_edge(to, from);
  }
  return g;
}

namespace {

/// Symmetrized adjacency in index space. Self-loop weight w contributes
/// 2w to its node's degree, matching the convention where A_uu = 2w.
struct UndirectedGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // excludes self-loops
  std::vector<double> self_loop;                                 // raw weight, A_uu = 2*self_loop
  std::vector<double> degree;                                    // includes self-loop part
  double two_m = 0;                                              // sum of degrees
};

UndirectedGraph symmetrize(const SocialGraph& g, std::vector<std::string>& index_to_node,
                           std::map<std::string, std::size_t>& node_to_index) {
  index_to_node.assign(g.nodes.begin(), g.nodes.end());
  node_to_index.clear();
  for (std::size_t i = 0; i < index_to_node.size(); ++i) node_to_index[index_to_node[i]] = i;

  std::map<std::pair<std::size_t, std::size_t>, double> und;
  for (const auto& [edge, w] : g.edges) {
    std::size_t a = node_to_index.at(edge.first);
    std::size_t b = node_to_index.at(edge.second);
    if (a > b) std::swap(a, b);
    und[{a, b}] += w;
  }

  UndirectedGraph u;
  u.n = index_to_node.size();
  u.adj.resize(u.n);
  u.self_loop.assign(u.n, 0.0);
  u.degree.assign(u.n, 0.0);
  for (const auto& [pair, w] : und) {
    if (pair.first == pair.second) {
      u.self_loop[pair.first] += w;
    } else {
      u.adj[pair.first].emplace_back(pair.second, w);
      u.adj[pair.second].emplace_back(pair.first, w);
    }
  }
  for (std::size_t i = 0; i < u.n; ++i) {
    double d = 2.0 * u.self_loop[i];
    for (const auto& [j, w] : u.adj[i]) d += w;
    u.degree[i] = d;
    u.two_m += d;
  }
  return u;
}

double modularity_indexed(const UndirectedGraph& g, const std::vector<int>& com,
                          double resolution) {
  if (g.two_m <= 0) return 0.0;
  int max_com = 0;
  for (int c : com) max_com = std::max(max_com, c);
  std::vector<double> internal(max_com + 1, 0.0), total(max_com + 1, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    total[com[i]] += g.degree[i];
    internal[com[i]] += 2.0 * g.self_loop[i];
    for (const auto& [j, w] : g.adj[i])
      if (com[i] == com[j]) internal[com[i]] += w;  // each edge hit from both sides
  }
  double q = 0;
  for (int c = 0; c <= max_com; ++c) {
    double frac_tot = total[c] / g.two_m;
    q += internal[c] / g.two_m - resolution * frac_tot * frac_tot;
  }
  return q;
}

/// One level of local moves. Returns true when at least one node moved.
bool local_moves(const UndirectedGraph& g, std::vector<int>& com, double resolution,
                 std::mt19937_64& rng) {
  std::vector<double> com_total(g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) com_total[com[i]] += g.degree[i];

  std::vector<std::size_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates on the raw engine: std::shuffle's draw sequence is
  // implementation-defined, which would tie partitions to one standard
  // library.
  for (std::size_t i = g.n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t u : order) {
      int cur = com[u];
      com_total[cur] -= g.degree[u];

      // Weight from u into each neighboring community.
      std::map<int, double> links;
      links[cur];  // staying is always an option
      for (const auto& [v, w] : g.adj[u]) links[com[v]] += w;

      int best_com = cur;
      double best_gain = links[cur] / g.two_m -
                         resolution * g.degree[u] * com_total[cur] / (g.two_m * g.two_m);
      for (const auto& [c, k_uc] : links) {
        if (c == best_com) continue;
        double gain =
            k_uc / g.two_m - resolution * g.degree[u] * com_total[c] / (g.two_m * g.two_m);
        if (gain > best_gain + 1e-12 ||
            (gain > best_gain - 1e-12 && c < best_com)) {
          best_gain = gain;
          best_com = c;
        }
      }

      com_total[best_com] += g.degree[u];
      if (best_com != cur) {
        com[u] = best_com;
        improved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

/// Renumber community labels to 0..C-1 preserving first-seen order.
std::size_t compact(std::vector<int>& com) {
  std::map<int, int> relabel;
  for (int& c : com) {
    auto [it, inserted] = relabel.emplace(c, static_cast<int>(relabel.size()));
    c = it->second;
  }
  return relabel.size();
}

UndirectedGraph aggregate(const UndirectedGraph& g, const std::vector<int>& com,
                          std::size_t n_com) {
  std::map<std::pair<std::size_t, std::size_t>, double> und;
  std::vector<double> self(n_com, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    self[com[i]] += g.self_loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (i > j) continue;  // visit each undirected edge once
      std::size_t a = com[i], b = com[j];
      if (a == b) self[a] += w;
      else und[{std::min(a, b), std::max(a, b)}] += w;
    }
  }
  UndirectedGraph out;
  out.n = n_com;
  out.adj.resize(n_com);
  out.self_loop = std::move(self);
  out.degree.assign(n_com, 0.0);
  for (const auto& [pair, w] : und) {
    out.adj[pair.first].emplace_back(pair.second, w);
    out.adj[pair.second].emplace_back(pair.first, w);
  }
  for (std::size_t i = 0; i < out.n; ++i) {
    double d = 2.0 * out.self_loop[i];
    for (const auto& [j, w] : out.adj[i]) d += w;
    out.degree[i] = d;
    out.two_m += d;
  }
  return out;
}

std::vector<int> louvain_once(const UndirectedGraph& base, double resolution,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> final_com(base.n);
  std::iota(final_com.begin(), final_com.end(), 0);

  UndirectedGraph level = base;
  std::vector<int> com(level.n);
  std::iota(com.begin(), com.end(), 0);

  while (true) {
    bool moved = local_moves(level, com, resolution, rng);
    std::size_t n_com = compact(com);
    for (int& c : final_com) c = com[c];
    if (!moved || n_com == level.n) break;
    level = aggregate(level, com, n_com);
    com.assign(level.n, 0);
    std::iota(com.begin(), com.end(), 0);
  }
  // Refinement at the original-node level: aggregation can never split a
  // community, so let single nodes relocate once the hierarchy settles.
  // Moves are accepted only on positive gain, so Q cannot drop.
  local_moves(base, final_com, resolution, rng);
  compact(final_com);
  return final_com;
}

}  // namespace

CommunityPartition detect_communities(const SocialGraph& graph, std::uint64_t seed,
                                      const LouvainOptions& options) {
  if (graph.nodes.empty()) throw std::invalid_argument("detect_communities: empty graph");

  std::vector<std::string> index_to_node;
  std::map<std::string, std::size_t> node_to_index;
  UndirectedGraph und = symmetrize(graph, index_to_node, node_to_index);

  std::vector<int> best;
  double best_q = -2.0;
  int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> com = louvain_once(und, options.resolution, seed + static_cast<std::uint64_t>(r));
    double q = modularity_indexed(und, com, options.resolution);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = std::move(com);
    }
  }

  // Relabel by size descending; ties go to the community whose smallest
  // member sorts first.
  std::size_t n_com = 0;
  for (int c : best) n_com = std::max<std::size_t>(n_com, c + 1);
  std::vector<std::size_t> size(n_com, 0);
  std::vector<std::size_t> first_member(n_com, SIZE_MAX);
  for (std::size_t i = 0; i < best.size(); ++i) {
    ++size[best[i]];
    first_member[best[i]] = std::min(first_member[best[i]], i);
  }
  std::vector<int> old_ids(n_com);
  std::iota(old_ids.begin(), old_ids.end(), 0);
  std::sort(old_ids.begin(), old_ids.end(), [&](int a, int b) {
    if (size[a] != size[b]) return size[a] > size[b];
    return first_member[a] < first_member[b];
  });
  std::vector<int> relabel(n_com);
  for (std::size_t new_id = 0; new_id < old_ids.size(); ++new_id)
    relabel[old_ids[new_id]] = static_cast<int>(new_id);

  CommunityPartition part;
  for (std::size_t i = 0; i < best.size(); ++i)
    part.assignment[index_to_node[i]] = relabel[best[i]];
  part.modularity_q = modularity_indexed(und, best, options.resolution);
  return part;
}

double modularity(const SocialGraph& graph, const std::map<std::string, int>& assignment,
                  double resolution) {
  std::vector<std::string> index_to_node;
  std::map<std::string, std::size_t> node_to_index;
  UndirectedGraph und = symmetrize(graph, index_to_node, node_to_index);
  std::vector<int> com(und.n, 0);
  for (std::size_t i = 0; i < und.n; ++i) {
    auto it = assignment.find(index_to_node[i]);
    if (it == assignment.end())
      throw std::invalid_argument("modularity: node missing from assignment: " + index_to_node[i]);
    com[i] = it->second;
  }
  return modularity_indexed(und, com, resolution);
}

std::vector<FractionRow> affiliation_fractions(
    const CommunityPartition& partition,
    const std::map<std::string, Affiliation>& affiliations) {
  std::map<int, std::array<long long, 3>> counts;  // [ProBJP, Other, Unknown]
  for (const auto& [node, community] : partition.assignment) {
    auto it = affiliations.find(node);
    if (it == affiliations.end())
      throw std::invalid_argument("affiliation_fractions: no affiliation for node " + node);
    ++counts[community][static_cast<int>(it->second)];
  }

  std::vector<FractionRow> rows;
  for (const auto& [community, tally] : counts) {
    FractionRow row;
    row.community = community;
    long long total = tally[0] + tally[1] + tally[2];
    row.size = static_cast<std::size_t>(total);
    row.pro_bjp = Rational(tally[0], total);
    row.other = Rational(tally[1], total);
    row.unknown = Rational(tally[2], total);
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const FractionRow& a, const FractionRow& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.community < b.community;
  });
  return rows;
}

void write_edge_list(const SocialGraph& graph, const std::string& path) {
  std::string out = "source,target,weight\n";
  for (const auto& [edge, w] : graph.edges) {
    out += io::join_csv_line({edge.first, edge.second, io::format_double(w)});
    out += '\n';
  }
  io::write_file(path, out);
}

void write_node_table(const SocialGraph& graph, const CommunityPartition& partition,
                      const std::map<std::string, Affiliation>& affiliations,
                      const std::string& path) {
  std::map<std::string, double> degree;
  for (const auto& [edge, w] : graph.edges) {
    degree[edge.first] += w;
    degree[edge.second] += w;
  }
  std::string out = "user_id,affiliation,community,degree\n";
  for (const std::string& node : graph.nodes) {
    auto aff_it = affiliations.find(node);
    const char* aff = aff_it == affiliations.end() ? "unknown" : to_string(aff_it->second);
    auto com_it = partition.assignment.find(node);
    std::string com = com_it == partition.assignment.end() ? "" : std::to_string(com_it->second);
    out += io::join_csv_line({node, aff, com, io::format_double(degree[node])});
    out += '\n';
  }
  io::write_file(path, out);
}

}  // namespace echoflow::graph
