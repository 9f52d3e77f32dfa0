// echoflow — command-line front end for the analysis toolkit.
//
// Subcommands mirror the pipeline stages: ingest, partition, echo,
// graph, match-text, match-image, temporal, hawkes, lexstats, plus the
// end-to-end `run`, and `synth` for generating the bundled fixture.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "echoflow/bundle_io.hpp"
#include "echoflow/echo.hpp"
#include "echoflow/graph.hpp"
#include "echoflow/hawkes.hpp"
#include "echoflow/image.hpp"
#include "echoflow/ingest.hpp"
#include "echoflow/io_util.hpp"
#include "echoflow/lexicon.hpp"
#include "echoflow/lexstats.hpp"
#include "echoflow/match_text.hpp"
#include "echoflow/pipeline.hpp"
#include "echoflow/report.hpp"
#include "echoflow/synth.hpp"
#include "echoflow/text.hpp"

namespace {

using namespace echoflow;
namespace fs = std::filesystem;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Header-addressed CSV column lookup; returns row values for the two
/// requested columns. Throws when a column is missing.
std::vector<std::pair<std::string, std::string>> read_two_columns(const std::string& path,
                                                                  const std::string& col_a,
                                                                  const std::string& col_b) {
  std::vector<std::string> lines = io::read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> header = io::split_csv_line(lines[0]);
  int ia = -1, ib = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == col_a) ia = static_cast<int>(i);
    if (header[i] == col_b) ib = static_cast<int>(i);
  }
  if (ia < 0 || ib < 0)
    throw std::runtime_error(path + ": need columns \"" + col_a + "\" and \"" + col_b + "\"");
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cells = io::split_csv_line(lines[i]);
    if (cells.size() <= static_cast<std::size_t>(std::max(ia, ib)))
      throw std::runtime_error(path + ": short row " + std::to_string(i + 1));
    rows.emplace_back(cells[ia], cells[ib]);
  }
  return rows;
}

std::map<std::string, Affiliation> load_affiliation_csv(const std::string& path) {
  std::map<std::string, Affiliation> out;
  for (const auto& [id, label] : read_two_columns(path, "user_id", "affiliation")) {
    std::optional<Affiliation> a = affiliation_from_string(label);
    if (!a) throw std::runtime_error(path + ": unknown affiliation \"" + label + "\"");
    out[id] = *a;
  }
  return out;
}

std::set<std::string> stopword_set(const std::string& extra_path) {
  std::set<std::string> stop = text::default_stopwords();
  if (!extra_path.empty())
    for (const std::string& w : text::load_stopwords(extra_path)) stop.insert(w);
  return stop;
}

struct MatchCorpus {
  std::vector<match::MatchableTweet> apps;
  std::vector<match::MatchableTweet> others;
};

MatchCorpus matchable_corpus(const DatasetBundle& bundle, std::size_t min_tokens,
                             const std::set<std::string>& stop) {
  MatchCorpus out;
  for (const TweetRecord& t : bundle.tweets) {
    if (t.retweet_of) continue;
    match::MatchableTweet m;
    m.tweet_id = t.tweet_id;
    m.timestamp = t.timestamp;
    m.tokens = text::preprocess_text(ingest::strip_source_tag(t.text), stop);
    if (m.tokens.size() < min_tokens) continue;
    if (t.source_tag != SourceTag::Other) out.apps.push_back(std::move(m));
    else out.others.push_back(std::move(m));
  }
  return out;
}

void write_pairs_csv(const match::PairMapping& mapping, const std::string& path) {
  std::string csv = "app_tweet_id,other_tweet_id,cosine,app_first,same_timestamp\n";
  for (const match::TweetPair& p : mapping.pairs) {
    csv += io::join_csv_line({p.app_tweet_id, p.other_tweet_id, io::format_double(p.cosine),
                              p.app_first ? "1" : "0", p.same_timestamp ? "1" : "0"});
    csv += '\n';
  }
  io::write_file(path, csv);
}

std::vector<match::TweetPair> read_pairs_csv(const std::string& path) {
  std::vector<std::string> lines = io::read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  if (io::split_csv_line(lines[0]) !=
      std::vector<std::string>{"app_tweet_id", "other_tweet_id", "cosine", "app_first",
                               "same_timestamp"})
    throw std::runtime_error(path + ": unexpected header");
  std::vector<match::TweetPair> pairs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> c = io::split_csv_line(lines[i]);
    if (c.size() != 5) throw std::runtime_error(path + ": bad row " + std::to_string(i + 1));
    match::TweetPair p;
    p.app_tweet_id = c[0];
    p.other_tweet_id = c[1];
    p.cosine = std::stod(c[2]);
    p.app_first = c[3] == "1";
    p.same_timestamp = c[4] == "1";
    pairs.push_back(std::move(p));
  }
  return pairs;
}

// ---- subcommand bodies ----

struct IngestArgs {
  std::string tweets, users, edges_follow, edges_retweet, out;
  std::string schema, city_to_state, foreign_places;
};

int cmd_ingest(const IngestArgs& a) {
  ingest::DatasetPaths paths{a.tweets, a.users, a.edges_follow, a.edges_retweet};
  ingest::SchemaConfig schema =
      a.schema.empty() ? ingest::SchemaConfig::defaults() : ingest::SchemaConfig::from_file(a.schema);
  ingest::ParseResult r = ingest::parse_dataset(paths, schema);
  if (!a.city_to_state.empty()) {
    ingest::LocationMapper mapper =
        ingest::LocationMapper::from_files(a.city_to_state, a.foreign_places);
    ingest::LocationStats ls = ingest::apply_locations(r.bundle, mapper);
    std::printf("locations: resolved %zu, removed %zu, unresolved %zu\n", ls.resolved, ls.removed,
                ls.unresolved);
  }
  bundle_io::save_bundle(r.bundle, a.out);
  std::printf("tweets %zu (skipped %zu), users %zu (skipped %zu, stubs %zu), "
              "follow edges %zu, retweet edges %zu\n",
              r.stats.tweets_parsed, r.stats.tweets_skipped, r.stats.users_parsed,
              r.stats.users_skipped, r.stats.stub_users, r.stats.follow_edges_parsed,
              r.stats.retweet_edges_parsed);
  return 0;
}

struct PartitionArgs {
  std::string bundle, lexicon, curated, keywords, out;
  std::string threshold = "1/10";
};

int cmd_partition(const PartitionArgs& a) {
  DatasetBundle bundle = bundle_io::load_bundle(a.bundle);
  HashtagLexicon lexicon = load_lexicon(a.lexicon);
  auto curated = lexicon::load_curated(a.curated);
  lexicon::KeywordConfig keywords = a.keywords.empty() ? lexicon::KeywordConfig::defaults()
                                                       : lexicon::KeywordConfig::from_file(a.keywords);
  lexicon::AffiliationStats stats = lexicon::resolve_affiliations(
      bundle, lexicon, curated, keywords, pipeline::parse_rational(a.threshold));
  std::string csv = "user_id,affiliation\n";
  for (const auto& [id, user] : bundle.users)
    csv += io::join_csv_line({id, to_string(user.affiliation)}) + "\n";
  io::write_file(a.out, csv);
  std::printf("curated %zu, metadata %zu, ratios %zu, unknown %zu\n", stats.curated, stats.metadata,
              stats.ratios, stats.unknown);
  return 0;
}

struct EchoArgs {
  std::string bundle, lexicon, affiliations, out;
};

int cmd_echo(const EchoArgs& a) {
  DatasetBundle bundle = bundle_io::load_bundle(a.bundle);
  HashtagLexicon lexicon = load_lexicon(a.lexicon);
  std::map<std::string, Affiliation> affiliations = load_affiliation_csv(a.affiliations);
  graph::SocialGraph follow = graph::build_graph(bundle, GraphKind::Follow);
  auto profiles = echo::polarity_profiles(bundle, lexicon, follow);
  std::string csv =
      "user_id,production_polarity,production_variance,consumption_polarity,"
      "consumption_variance,affiliation\n";
  for (const auto& [id, p] : profiles) {
    auto it = affiliations.find(id);
    csv += io::join_csv_line(
        {id, io::format_double(to_double(p.production_polarity)),
         io::format_double(to_double(p.production_variance)),
         p.consumption_polarity ? io::format_double(to_double(*p.consumption_polarity)) : "",
         p.consumption_variance ? io::format_double(to_double(*p.consumption_variance)) : "",
         it == affiliations.end() ? to_string(Affiliation::Unknown) : to_string(it->second)});
    csv += '\n';
  }
  io::write_file(a.out, csv);
  std::printf("polarity profiles: %zu\n", profiles.size());
  return 0;
}

struct GraphArgs {
  std::string bundle, kind = "follow", affiliations, out_prefix;
  std::uint64_t seed = 7;
};

int cmd_graph(const GraphArgs& a) {
  DatasetBundle bundle = bundle_io::load_bundle(a.bundle);
  std::optional<GraphKind> kind = graph_kind_from_string(a.kind);
  if (!kind) throw std::runtime_error("unknown graph kind \"" + a.kind + "\"");
  graph::SocialGraph g = graph::build_graph(bundle, *kind);
  std::map<std::string, Affiliation> affiliations = load_affiliation_csv(a.affiliations);
  for (const std::string& node : g.nodes)
    if (!affiliations.count(node)) affiliations[node] = Affiliation::Unknown;
  graph::CommunityPartition partition = graph::detect_communities(g, a.seed);
  graph::write_edge_list(g, a.out_prefix + "_edges.csv");
  graph::write_node_table(g, partition, affiliations, a.out_prefix + "_nodes.csv");
  std::string csv = "community,size,pro_bjp,other,unknown\n";
  for (const graph::FractionRow& row : graph::affiliation_fractions(partition, affiliations)) {
    csv += io::join_csv_line({std::to_string(row.community), std::to_string(row.size),
                              io::format_double(to_double(row.pro_bjp)),
                              io::format_double(to_double(row.other)),
                              io::format_double(to_double(row.unknown))});
    csv += '\n';
  }
  io::write_file(a.out_prefix + "_communities.csv", csv);
  std::printf("nodes %zu, modularity %.6f\n", g.nodes.size(), partition.modularity_q);
  return 0;
}

struct MatchTextArgs {
  std::string bundle, out, stopwords;
  int k = 0;
  std::uint64_t seed = 7;
  double threshold = 0.45;
  std::size_t min_tokens = 5;
  bool dedup = false;
};

int cmd_match_text(const MatchTextArgs& a) {
  DatasetBundle bundle = bundle_io::load_bundle(a.bundle);
  MatchCorpus corpus = matchable_corpus(bundle, a.min_tokens, stopword_set(a.stopwords));
  if (corpus.apps.empty()) throw std::runtime_error("no app-sourced tweets of usable length");

  std::vector<std::vector<std::string>> docs;
  for (const auto& m : corpus.apps) docs.push_back(m.tokens);
  text::VectorizedCorpus vc = text::vectorize_corpus(docs, 2);
  std::vector<text::TermVector> vectors;
  for (text::TermVector v : vc.vectors) {
    v.l2_normalize();
    vectors.push_back(std::move(v));
  }
  int k = a.k > 0 ? a.k : match::default_cluster_count(vectors.size());
  match::TextClusterModel model =
      match::train_text_clusters(vectors, vc.vocabulary, k, a.seed, a.threshold);

  std::vector<match::MatchableTweet> gated;
  for (const auto& m : corpus.others) {
    text::TermVector v = text::vectorize_doc(m.tokens, model.vocabulary);
    v.l2_normalize();
    if (!v.empty() && match::match_text(v, model)) gated.push_back(m);
  }
  match::PairMapping mapping = match::map_similar_pairs(corpus.apps, gated, a.dedup);
  write_pairs_csv(mapping, a.out);
  std::printf("app tweets %zu, candidates %zu, matched %zu, pairs %zu, collisions %zu\n",
              corpus.apps.size(), corpus.others.size(), gated.size(), mapping.pairs.size(),
              mapping.collisions);
  return 0;
}

struct MatchImageArgs {
  std::string images, out, hash_cache;
  int eps = 10;
  int min_points = 2;
};

int cmd_match_image(const MatchImageArgs& a) {
  std::vector<image::HashedImage> hashes;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.images)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error(a.images + ": no netpbm images found");
  for (const fs::path& f : files)
    hashes.push_back({f.stem().string(), image::phash64_file(f.string())});
  if (!a.hash_cache.empty()) image::save_hash_cache(hashes, a.hash_cache);

  image::ClusterResult clusters = image::cluster_images(hashes, a.eps, a.min_points);
  std::vector<std::string> rows;
  for (std::size_t c = 0; c < clusters.clusters.size(); ++c)
    for (std::size_t m : clusters.clusters[c].members)
      rows.push_back(io::join_csv_line({hashes[m].content_id, std::to_string(c),
                                        m == clusters.clusters[c].medoid ? "1" : "0"}));
  for (std::size_t m : clusters.noise)
    rows.push_back(io::join_csv_line({hashes[m].content_id, "-1", "0"}));
  std::sort(rows.begin(), rows.end());
  std::string csv = "content_id,cluster,is_medoid\n";
  for (const std::string& r : rows) csv += r + "\n";
  io::write_file(a.out, csv);
  std::printf("images %zu, clusters %zu, noise %zu\n", hashes.size(), clusters.clusters.size(),
              clusters.noise.size());
  return 0;
}

struct TemporalArgs {
  std::string pairs, out;
  bool dedup = false;
};

int cmd_temporal(const TemporalArgs& a) {
  std::vector<match::TweetPair> pairs = read_pairs_csv(a.pairs);
  if (a.dedup) {
    // Keep only the first pair naming each other-side tweet so reused
    // tweets are not double-counted.
    std::set<std::string> seen;
    std::vector<match::TweetPair> unique;
    for (const match::TweetPair& p : pairs)
      if (seen.insert(p.other_tweet_id).second) unique.push_back(p);
    pairs = std::move(unique);
  }
  match::FirstPosterStats s = match::first_poster_stats(pairs);
  std::string json = "{\n";
  json += "  \"pairs\": " + std::to_string(pairs.size()) + ",\n";
  json += "  \"app_first\": " + std::to_string(s.app_first) + ",\n";
  json += "  \"other_first\": " + std::to_string(s.other_first) + ",\n";
  json += "  \"simultaneous\": " + std::to_string(s.simultaneous) + ",\n";
  json += "  \"app_first_fraction\": " + io::format_double(s.app_first_fraction) + ",\n";
  json += "  \"other_first_fraction\": " + io::format_double(s.other_first_fraction) + "\n";
  json += "}\n";
  io::write_file(a.out, json);
  std::printf("pairs %zu, app first %zu, other first %zu, simultaneous %zu\n", pairs.size(),
              s.app_first, s.other_first, s.simultaneous);
  return 0;
}

struct HawkesArgs {
  std::string events, out;
  std::string platforms = "namo,twitter";
  std::string dt = "720,1440,2880";
  std::uint64_t seed = 7;
};

int cmd_hawkes(const HawkesArgs& a) {
  std::vector<std::string> platforms = split_commas(a.platforms);
  std::vector<int> dts;
  for (const std::string& s : split_commas(a.dt)) dts.push_back(std::stoi(s));
  if (platforms.empty() || dts.empty())
    throw std::runtime_error("need at least one platform and one time window");

  auto events = hawkes::filter_multi_platform(hawkes::load_events(a.events), platforms);
  std::string json = "{\n  \"platforms\": [";
  for (std::size_t i = 0; i < platforms.size(); ++i)
    json += (i ? ", " : "") + ("\"" + platforms[i] + "\"");
  json += "],\n  \"images\": " + std::to_string(events.size()) + ",\n  \"results\": [";
  bool first_entry = true;
  for (int dt : dts) {
    std::vector<hawkes::HawkesModel> models;
    for (const auto& [image_id, list] : events) {
      (void)image_id;
      models.push_back(hawkes::fit(hawkes::build_event_series(list, platforms), dt, a.seed).model);
    }
    if (models.empty()) continue;
    hawkes::InfluenceSummary mean = hawkes::mean_weight_matrix(models);
    json += first_entry ? "\n" : ",\n";
    first_entry = false;
    json += "    {\"delta_t\": " + std::to_string(dt) +
            ", \"image_count\": " + std::to_string(mean.image_count) + ", \"mean_W\": [";
    for (std::size_t i = 0; i < mean.mean_W.size(); ++i) {
      json += i ? ", [" : "[";
      for (std::size_t j = 0; j < mean.mean_W[i].size(); ++j)
        json += (j ? ", " : "") + io::format_double(mean.mean_W[i][j]);
      json += "]";
    }
    json += "]}";
  }
  json += "\n  ]\n}\n";
  io::write_file(a.out, json);
  std::printf("images with all platforms: %zu, windows: %zu\n", events.size(), dts.size());
  return 0;
}

struct LexstatsArgs {
  std::string bundle, roles, out, stopwords;
  std::string term_freq_out, hashtag_freq_out, exclude;
  int n = 2;
  int min_count = 3;
  int top_n = 20;
};

int cmd_lexstats(const LexstatsArgs& a) {
  DatasetBundle bundle = bundle_io::load_bundle(a.bundle);

  if (!a.term_freq_out.empty()) {
    std::set<std::string> stop = stopword_set(a.stopwords);
    std::vector<std::vector<std::string>> docs;
    for (const TweetRecord& t : bundle.tweets)
      docs.push_back(text::preprocess_text(ingest::strip_source_tag(t.text), stop));
    std::string csv = "term,count\n";
    for (const auto& [term, count] : lexstats::term_frequencies(docs, a.top_n))
      csv += io::join_csv_line({term, std::to_string(count)}) + "\n";
    io::write_file(a.term_freq_out, csv);
  }
  if (!a.hashtag_freq_out.empty()) {
    std::set<std::string> exclusions;
    for (const std::string& e : split_commas(a.exclude)) exclusions.insert(text::ascii_lower(e));
    std::string csv = "hashtag,count\n";
    for (const auto& [tag, count] : lexstats::hashtag_frequencies(bundle, a.top_n, exclusions))
      csv += io::join_csv_line({tag, std::to_string(count)}) + "\n";
    io::write_file(a.hashtag_freq_out, csv);
  }
  if (!a.out.empty()) {
    if (a.roles.empty()) throw std::runtime_error("--roles is required with --out");
    std::vector<std::vector<std::string>> seed_docs, aux_docs;
    for (const auto& [id, role] : read_two_columns(a.roles, "user_id", "role")) {
      auto user = bundle.users.find(id);
      if (user == bundle.users.end()) continue;
      if (role == "seed") seed_docs.push_back(text::tokenize(user->second.description));
      else if (role == "auxiliary") aux_docs.push_back(text::tokenize(user->second.description));
    }
    std::string csv = "ngram,n,count_seed,count_aux,odds_ratio\n";
    for (const lexstats::OddsRatioRow& row :
         lexstats::ngram_odds_ratios(seed_docs, aux_docs, a.n, a.min_count)) {
      csv += io::join_csv_line({lexstats::ngram_to_string(row.ngram), std::to_string(row.n),
                                std::to_string(row.count_a), std::to_string(row.count_b),
                                io::format_double(to_double(row.odds))});
      csv += '\n';
    }
    io::write_file(a.out, csv);
    std::printf("seed docs %zu, auxiliary docs %zu\n", seed_docs.size(), aux_docs.size());
  }
  return 0;
}

struct RunArgs {
  std::string config, out;
};

int cmd_run(const RunArgs& a) {
  pipeline::PipelineConfig config = pipeline::PipelineConfig::from_file(a.config);
  std::vector<std::string> written = pipeline::run_pipeline(config, a.out);
  std::printf("wrote %zu files to %s\n", written.size(), a.out.c_str());
  return 0;
}

struct SynthArgs {
  std::string spec, out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int cmd_synth(const SynthArgs& a) {
  synth::SynthOptions options =
      a.spec.empty() ? synth::SynthOptions{} : synth::SynthOptions::from_file(a.spec);
  if (a.seed_set) options.seed = a.seed;
  synth::generate(a.out, options);
  std::printf("fixture written to %s\n", a.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partisan-app content propagation analysis toolkit"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  CLI::App* ing = app.add_subcommand("ingest", "Parse raw dumps into a binary bundle");
  ing->add_option("--tweets", ingest_args.tweets, "Tweet JSON-lines file")->required();
  ing->add_option("--users", ingest_args.users, "User JSON-lines file")->required();
  ing->add_option("--edges-follow", ingest_args.edges_follow, "Follow edge CSV");
  ing->add_option("--edges-retweet", ingest_args.edges_retweet, "Retweet edge CSV");
  ing->add_option("--schema", ingest_args.schema, "Field-path overrides (JSON)");
  ing->add_option("--city-to-state", ingest_args.city_to_state, "City gazetteer CSV");
  ing->add_option("--foreign-places", ingest_args.foreign_places, "Foreign place list");
  ing->add_option("--out", ingest_args.out, "Output bundle path")->required();

  PartitionArgs partition_args;
  CLI::App* par = app.add_subcommand("partition", "Assign political affiliations");
  par->add_option("--bundle", partition_args.bundle, "Input bundle")->required();
  par->add_option("--lexicon", partition_args.lexicon, "Labeled hashtag CSV")->required();
  par->add_option("--curated", partition_args.curated, "Hand-checked affiliation CSV");
  par->add_option("--keywords", partition_args.keywords, "Metadata keyword config");
  par->add_option("--threshold", partition_args.threshold,
                  "Minimum annotated fraction (e.g. 1/10 or 0.1)");
  par->add_option("--out", partition_args.out, "Output affiliation CSV")->required();

  EchoArgs echo_args;
  CLI::App* ech = app.add_subcommand("echo", "Per-user polarity production/consumption");
  ech->add_option("--bundle", echo_args.bundle, "Input bundle")->required();
  ech->add_option("--lexicon", echo_args.lexicon, "Labeled hashtag CSV")->required();
  ech->add_option("--affiliations", echo_args.affiliations, "Affiliation CSV")->required();
  ech->add_option("--out", echo_args.out, "Output polarity CSV")->required();

  GraphArgs graph_args;
  CLI::App* gra = app.add_subcommand("graph", "Build a graph and detect communities");
  gra->add_option("--bundle", graph_args.bundle, "Input bundle")->required();
  gra->add_option("--kind", graph_args.kind, "follow|friends|retweet");
  gra->add_option("--affiliations", graph_args.affiliations, "Affiliation CSV")->required();
  gra->add_option("--seed", graph_args.seed, "Random seed");
  gra->add_option("--out-prefix", graph_args.out_prefix, "Output file prefix")->required();

  MatchTextArgs match_text_args;
  CLI::App* mtx = app.add_subcommand("match-text", "Pair app tweets with similar others");
  mtx->add_option("--bundle", match_text_args.bundle, "Input bundle")->required();
  mtx->add_option("--k", match_text_args.k, "Cluster count (0 = auto)");
  mtx->add_option("--seed", match_text_args.seed, "Random seed");
  mtx->add_option("--threshold", match_text_args.threshold, "Match distance threshold");
  mtx->add_option("--min-tokens", match_text_args.min_tokens, "Minimum tokens per tweet");
  mtx->add_option("--stopwords", match_text_args.stopwords, "Extra stopword list");
  mtx->add_flag("--dedup", match_text_args.dedup, "Collapse duplicate texts first");
  mtx->add_option("--out", match_text_args.out, "Output pair CSV")->required();

  MatchImageArgs match_image_args;
  CLI::App* mim = app.add_subcommand("match-image", "Cluster near-duplicate images");
  mim->add_option("--images", match_image_args.images, "Directory of netpbm images")->required();
  mim->add_option("--eps", match_image_args.eps, "Hamming radius (strict)");
  mim->add_option("--min-points", match_image_args.min_points, "Core point threshold");
  mim->add_option("--hash-cache", match_image_args.hash_cache, "Also write hash CSV here");
  mim->add_option("--out", match_image_args.out, "Output cluster CSV")->required();

  TemporalArgs temporal_args;
  CLI::App* tem = app.add_subcommand("temporal", "First-poster statistics over pairs");
  tem->add_option("--pairs", temporal_args.pairs, "Pair CSV from match-text")->required();
  tem->add_flag("--dedup", temporal_args.dedup, "Count each other-side tweet once");
  tem->add_option("--out", temporal_args.out, "Output stats JSON")->required();

  HawkesArgs hawkes_args;
  CLI::App* haw = app.add_subcommand("hawkes", "Fit cross-platform influence weights");
  haw->add_option("--events", hawkes_args.events, "Event CSV (image_id,platform,utc_minute)")
      ->required();
  haw->add_option("--platforms", hawkes_args.platforms, "Comma-separated platform names");
  haw->add_option("--dt", hawkes_args.dt, "Comma-separated window lengths (minutes)");
  haw->add_option("--seed", hawkes_args.seed, "Random seed");
  haw->add_option("--out", hawkes_args.out, "Output influence JSON")->required();

  LexstatsArgs lexstats_args;
  CLI::App* lex = app.add_subcommand("lexstats", "Frequency tables and odds ratios");
  lex->add_option("--bundle", lexstats_args.bundle, "Input bundle")->required();
  lex->add_option("--roles", lexstats_args.roles, "CSV with user_id and role columns");
  lex->add_option("--n", lexstats_args.n, "n-gram size (2 or 3)");
  lex->add_option("--min-count", lexstats_args.min_count, "Minimum combined document count");
  lex->add_option("--top-n", lexstats_args.top_n, "Rows for frequency tables");
  lex->add_option("--stopwords", lexstats_args.stopwords, "Extra stopword list");
  lex->add_option("--term-freq", lexstats_args.term_freq_out, "Write term frequency CSV here");
  lex->add_option("--hashtag-freq", lexstats_args.hashtag_freq_out,
                  "Write hashtag frequency CSV here");
  lex->add_option("--exclude", lexstats_args.exclude, "Comma list of hashtags to exclude");
  lex->add_option("--out", lexstats_args.out, "Output odds-ratio CSV");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute the full pipeline");
  run->add_option("--config", run_args.config, "Pipeline config JSON")->required();
  run->add_option("--out", run_args.out, "Report directory")->required();

  SynthArgs synth_args;
  CLI::App* syn = app.add_subcommand("synth", "Generate the synthetic fixture dataset");
  syn->add_option("--spec", synth_args.spec, "Generator options JSON");
  CLI::Option* seed_opt = syn->add_option("--seed", synth_args.seed, "Random seed override");
  syn->add_option("--out", synth_args.out, "Fixture directory")->required();

  CLI11_PARSE(app, argc, argv);
  synth_args.seed_set = seed_opt->count() > 0;

  try {
    if (ing->parsed()) return cmd_ingest(ingest_args);
    if (par->parsed()) return cmd_partition(partition_args);
    if (ech->parsed()) return cmd_echo(echo_args);
    if (gra->parsed()) return cmd_graph(graph_args);
    if (mtx->parsed()) return cmd_match_text(match_text_args);
    if (mim->parsed()) return cmd_match_image(match_image_args);
    if (tem->parsed()) return cmd_temporal(temporal_args);
    if (haw->parsed()) return cmd_hawkes(hawkes_args);
    if (lex->parsed()) return cmd_lexstats(lexstats_args);
    if (run->parsed()) return cmd_run(run_args);
    if (syn->parsed()) return cmd_synth(synth_args);
  } catch (const pipeline::StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
