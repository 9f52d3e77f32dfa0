#include "echoflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

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
#include "echoflow/report.hpp"
#include "echoflow/text.hpp"

namespace echoflow::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw std::runtime_error("config: unknown key \"" + key + "\" in " + where);
  }
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  return path.is_absolute() ? path.string() : (base / path).lexically_normal().string();
}

/// The whole end-to-end run as one object so stages can hand each
/// other intermediate products without a pile of parameters.
class Run {
 public:
  Run(const PipelineConfig& config, const std::string& out_dir)
      : cfg_(config), out_(out_dir) {}

  std::vector<std::string> execute() {
    fs::create_directories(out_);
    try {
      stage("ingest", [this] { ingest(); });
      stage("partition", [this] { partition(); });
      stage("echo", [this] { echo(); });
      stage("graph", [this] { graphs(); });
      stage("match", [this] { match(); });
      stage("temporal", [this] { temporal(); });
      stage("hawkes", [this] { influence(); });
      stage("lexstats", [this] { lexstats(); });
      stage("report", [this] { report(); });
      manifest();
    } catch (...) {
      for (const std::string& name : written_) {
        std::error_code ec;
        fs::remove(fs::path(out_) / name, ec);
      }
      throw;
    }
    return written_;
  }

 private:
  template <typename Fn>
  void stage(const char* name, Fn&& fn) {
    try {
      fn();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  }

  std::string out_path(const std::string& name) { return (fs::path(out_) / name).string(); }

  void write_out(const std::string& name, const std::string& content) {
    io::write_file(out_path(name), content);
    written_.push_back(name);
  }

  void write_ecdf(const std::string& name, const std::vector<double>& values) {
    std::string csv = "x,cdf\n";
    if (!values.empty()) {
      for (const auto& [x, f] : report::ecdf(values)) {
        csv += io::format_double(x);
        csv += ',';
        csv += io::format_double(f);
        csv += '\n';
      }
    }
    write_out(name, csv);
  }

  // ---- stages ----

  void ingest() {
    ingest::DatasetPaths paths;
    paths.tweets = cfg_.tweets;
    paths.users = cfg_.users;
    paths.edges_follow = cfg_.edges_follow;
    paths.edges_retweet = cfg_.edges_retweet;
    ingest::SchemaConfig schema = cfg_.schema.empty() ? ingest::SchemaConfig::defaults()
                                                      : ingest::SchemaConfig::from_file(cfg_.schema);
    ingest::ParseResult parsed = ingest::parse_dataset(paths, schema);
    bundle_ = std::move(parsed.bundle);
    parse_stats_ = parsed.stats;

    if (!cfg_.city_to_state.empty()) {
      ingest::LocationMapper mapper =
          ingest::LocationMapper::from_files(cfg_.city_to_state, cfg_.foreign_places);
      location_stats_ = ingest::apply_locations(bundle_, mapper);
    }
    bundle_io::save_bundle(bundle_, out_path("bundle.bin"));
    written_.push_back("bundle.bin");
  }

  void partition() {
    lexicon_ = load_lexicon(cfg_.lexicon);
    auto curated = lexicon::load_curated(cfg_.curated);
    lexicon::KeywordConfig keywords = cfg_.keywords.empty()
                                          ? lexicon::KeywordConfig::defaults()
                                          : lexicon::KeywordConfig::from_file(cfg_.keywords);
    affiliation_stats_ =
        lexicon::resolve_affiliations(bundle_, lexicon_, curated, keywords, cfg_.threshold);

    std::string csv = "user_id,affiliation\n";
    for (const auto& [id, user] : bundle_.users)
      csv += io::join_csv_line({id, to_string(user.affiliation)}) + "\n";
    write_out("affiliations.csv", csv);
  }

  void echo() {
    follow_graph_ = graph::build_graph(bundle_, GraphKind::Follow);
    auto profiles = echo::polarity_profiles(bundle_, lexicon_, follow_graph_);
    std::string csv =
        "user_id,production_polarity,production_variance,consumption_polarity,"
        "consumption_variance,produced,consumed\n";
    for (const auto& [id, p] : profiles) {
      csv += io::join_csv_line(
          {id, io::format_double(to_double(p.production_polarity)),
           io::format_double(to_double(p.production_variance)),
           p.consumption_polarity ? io::format_double(to_double(*p.consumption_polarity)) : "",
           p.consumption_variance ? io::format_double(to_double(*p.consumption_variance)) : "",
           std::to_string(p.produced_hashtag_count), std::to_string(p.consumed_hashtag_count)});
      csv += '\n';
    }
    write_out("polarity.csv", csv);
    polarity_rows_ = profiles.size();
  }

  void graphs() {
    partition_ = graph::detect_communities(follow_graph_, cfg_.seed);

    std::map<std::string, Affiliation> affiliations;
    for (const auto& [id, user] : bundle_.users) affiliations[id] = user.affiliation;

    graph::write_edge_list(follow_graph_, out_path("graph_follow_edges.csv"));
    written_.push_back("graph_follow_edges.csv");
    graph::write_node_table(follow_graph_, partition_, affiliations,
                            out_path("graph_follow_nodes.csv"));
    written_.push_back("graph_follow_nodes.csv");

    graph::SocialGraph friends = graph::build_graph(bundle_, GraphKind::Friends);
    graph::write_edge_list(friends, out_path("graph_friends_edges.csv"));
    written_.push_back("graph_friends_edges.csv");
    graph::SocialGraph retweet = graph::build_graph(bundle_, GraphKind::Retweet);
    graph::write_edge_list(retweet, out_path("graph_retweet_edges.csv"));
    written_.push_back("graph_retweet_edges.csv");

    std::string csv = "community,size,pro_bjp,other,unknown\n";
    for (const graph::FractionRow& row : graph::affiliation_fractions(partition_, affiliations)) {
      csv += io::join_csv_line({std::to_string(row.community), std::to_string(row.size),
                                io::format_double(to_double(row.pro_bjp)),
                                io::format_double(to_double(row.other)),
                                io::format_double(to_double(row.unknown))});
      csv += '\n';
    }
    write_out("community_fractions.csv", csv);
  }

  match::MatchableTweet matchable(const TweetRecord& t, const std::set<std::string>& stop) const {
    match::MatchableTweet m;
    m.tweet_id = t.tweet_id;
    m.timestamp = t.timestamp;
    m.tokens = text::preprocess_text(ingest::strip_source_tag(t.text), stop);
    return m;
  }

  void match() {
    std::set<std::string> stop = text::default_stopwords();
    if (!cfg_.stopwords.empty())
      for (const std::string& w : text::load_stopwords(cfg_.stopwords)) stop.insert(w);

    std::vector<match::MatchableTweet> apps, others;
    for (const TweetRecord& t : bundle_.tweets) {
      if (t.retweet_of) continue;  // reposts carry no original text
      match::MatchableTweet m = matchable(t, stop);
      if (m.tokens.size() < cfg_.min_tokens) continue;
      if (t.source_tag != SourceTag::Other) apps.push_back(std::move(m));
      else others.push_back(std::move(m));
    }
    if (apps.empty()) throw std::runtime_error("no app-sourced tweets of usable length");

    // Cluster the app corpus, then keep the other-side tweets that fall
    // inside a cluster within the match threshold.
    std::vector<std::vector<std::string>> docs;
    docs.reserve(apps.size());
    for (const auto& m : apps) docs.push_back(m.tokens);
    text::VectorizedCorpus corpus = text::vectorize_corpus(docs, 2);
    std::vector<text::TermVector> vectors;
    vectors.reserve(corpus.vectors.size());
    for (text::TermVector v : corpus.vectors) {
      v.l2_normalize();
      vectors.push_back(std::move(v));
    }
    int k = cfg_.k > 0 ? cfg_.k : match::default_cluster_count(vectors.size());
    model_ = match::train_text_clusters(vectors, corpus.vocabulary, k, cfg_.seed,
                                        cfg_.match_threshold);

    std::vector<match::MatchableTweet> gated;
    for (const auto& m : others) {
      text::TermVector v = text::vectorize_doc(m.tokens, model_.vocabulary);
      v.l2_normalize();
      if (!v.empty() && match::match_text(v, model_)) gated.push_back(m);
    }
    app_candidates_ = apps.size();
    other_candidates_ = others.size();
    gated_others_ = gated.size();

    mapping_ = match::map_similar_pairs(apps, gated, cfg_.dedup);

    std::string csv = "app_tweet_id,other_tweet_id,cosine,app_first,same_timestamp\n";
    for (const match::TweetPair& p : mapping_.pairs) {
      csv += io::join_csv_line({p.app_tweet_id, p.other_tweet_id, io::format_double(p.cosine),
                                p.app_first ? "1" : "0", p.same_timestamp ? "1" : "0"});
      csv += '\n';
    }
    write_out("pairs.csv", csv);

    // Matched non-app tweets decide auxiliary roles.
    std::set<std::string> matched_ids;
    for (const match::TweetPair& p : mapping_.pairs) matched_ids.insert(p.other_tweet_id);
    ingest::classify_users(bundle_, matched_ids);

    std::string users_csv = "user_id,affiliation,role,state\n";
    for (const auto& [id, user] : bundle_.users)
      users_csv += io::join_csv_line({id, to_string(user.affiliation), to_string(user.role),
                                      user.state.value_or("")}) +
                   "\n";
    write_out("users.csv", users_csv);
  }

  void temporal() {
    ordered_json j;
    j["pairs"] = mapping_.pairs.size();
    j["collisions"] = mapping_.collisions;
    j["app_duplicates_dropped"] = mapping_.app_duplicates_dropped;
    j["other_duplicates_dropped"] = mapping_.other_duplicates_dropped;
    if (!mapping_.pairs.empty()) {
      match::FirstPosterStats s = match::first_poster_stats(mapping_.pairs);
      j["app_first"] = s.app_first;
      j["other_first"] = s.other_first;
      j["simultaneous"] = s.simultaneous;
      j["app_first_fraction"] = s.app_first_fraction;
      j["other_first_fraction"] = s.other_first_fraction;
    }
    write_out("first_poster.json", j.dump(2) + "\n");
  }

  std::map<std::string, std::vector<hawkes::Event>> derived_events() {
    // Hash every image file, cluster near-duplicates, and emit one
    // event per posting of a clustered image: cluster identity, the
    // poster's platform, and the posting minute.
    std::vector<image::HashedImage> hashes;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg_.images_dir)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files)
      hashes.push_back({f.stem().string(), image::phash64_file(f.string())});
    image::save_hash_cache(hashes, out_path("image_hashes.csv"));
    written_.push_back("image_hashes.csv");

    image::ClusterResult clusters = image::cluster_images(hashes, cfg_.eps, cfg_.min_points);
    std::map<std::string, std::size_t> cluster_of;  // content id -> cluster index
    std::string csv = "content_id,cluster,is_medoid\n";
    {
      std::vector<std::string> rows;
      for (std::size_t c = 0; c < clusters.clusters.size(); ++c)
        for (std::size_t m : clusters.clusters[c].members) {
          cluster_of[hashes[m].content_id] = c;
          rows.push_back(io::join_csv_line({hashes[m].content_id, std::to_string(c),
                                            m == clusters.clusters[c].medoid ? "1" : "0"}));
        }
      for (std::size_t m : clusters.noise)
        rows.push_back(io::join_csv_line({hashes[m].content_id, "-1", "0"}));
      std::sort(rows.begin(), rows.end());
      for (const std::string& r : rows) csv += r + "\n";
    }
    write_out("image_clusters.csv", csv);
    image_cluster_count_ = clusters.clusters.size();
    image_noise_count_ = clusters.noise.size();

    if (cfg_.platforms.size() != 2)
      throw std::runtime_error("deriving events needs exactly two platform names");
    std::map<std::string, std::vector<hawkes::Event>> events;
    for (const TweetRecord& t : bundle_.tweets) {
      const std::string& platform =
          t.source_tag != SourceTag::Other ? cfg_.platforms[0] : cfg_.platforms[1];
      for (const std::string& ref : t.image_refs) {
        auto it = cluster_of.find(ref);
        if (it == cluster_of.end()) continue;
        const image::ImageCluster& c = clusters.clusters[it->second];
        events[hashes[c.medoid].content_id].push_back({t.timestamp / 60, platform});
      }
    }
    return events;
  }

  void influence() {
    std::map<std::string, std::vector<hawkes::Event>> events;
    if (!cfg_.events_csv.empty()) events = hawkes::load_events(cfg_.events_csv);
    else if (!cfg_.images_dir.empty()) events = derived_events();
    else return;  // nothing to fit; influence tables omitted

    events = hawkes::filter_multi_platform(events, cfg_.platforms);
    hawkes_images_used_ = events.size();

    ordered_json summary;
    summary["platforms"] = cfg_.platforms;
    summary["images"] = events.size();
    summary["results"] = ordered_json::array();
    for (int dt : cfg_.delta_t) {
      std::vector<hawkes::HawkesModel> models;
      for (const auto& [image_id, list] : events) {
        (void)image_id;
        hawkes::EventSeries series = hawkes::build_event_series(list, cfg_.platforms);
        models.push_back(hawkes::fit(series, dt, cfg_.seed).model);
      }
      if (models.empty()) continue;
      hawkes::InfluenceSummary mean = hawkes::mean_weight_matrix(models);

      ordered_json entry;
      entry["delta_t"] = dt;
      entry["image_count"] = mean.image_count;
      entry["mean_W"] = mean.mean_W;
      summary["results"].push_back(entry);

      std::string csv = "source";
      for (const std::string& p : cfg_.platforms) csv += "," + p;
      csv += '\n';
      for (std::size_t i = 0; i < mean.mean_W.size(); ++i) {
        csv += cfg_.platforms[i];
        for (double w : mean.mean_W[i]) csv += "," + io::format_double(w);
        csv += '\n';
      }
      write_out("mean_w_" + std::to_string(dt) + ".csv", csv);
    }
    write_out("influence.json", summary.dump(2) + "\n");
  }

  void lexstats() {
    std::set<std::string> stop = text::default_stopwords();
    if (!cfg_.stopwords.empty())
      for (const std::string& w : text::load_stopwords(cfg_.stopwords)) stop.insert(w);

    std::vector<std::vector<std::string>> docs;
    for (const TweetRecord& t : bundle_.tweets)
      docs.push_back(text::preprocess_text(ingest::strip_source_tag(t.text), stop));
    std::string terms_csv = "term,count\n";
    for (const auto& [term, count] : lexstats::term_frequencies(docs, cfg_.top_n))
      terms_csv += io::join_csv_line({term, std::to_string(count)}) + "\n";
    write_out("term_frequencies.csv", terms_csv);

    std::string tags_csv = "hashtag,count\n";
    for (const auto& [tag, count] :
         lexstats::hashtag_frequencies(bundle_, cfg_.top_n, cfg_.exclude_hashtags))
      tags_csv += io::join_csv_line({tag, std::to_string(count)}) + "\n";
    write_out("hashtag_frequencies.csv", tags_csv);

    std::vector<std::vector<std::string>> seed_docs, aux_docs;
    for (const auto& [id, user] : bundle_.users) {
      (void)id;
      if (user.role == Role::Seed) seed_docs.push_back(text::tokenize(user.description));
      else if (user.role == Role::Auxiliary) aux_docs.push_back(text::tokenize(user.description));
    }
    for (int n : {2, 3}) {
      std::string csv = "ngram,n,count_seed,count_aux,odds_ratio\n";
      for (const lexstats::OddsRatioRow& row :
           lexstats::ngram_odds_ratios(seed_docs, aux_docs, n, cfg_.min_count)) {
        csv += io::join_csv_line({lexstats::ngram_to_string(row.ngram), std::to_string(row.n),
                                  std::to_string(row.count_a), std::to_string(row.count_b),
                                  io::format_double(to_double(row.odds))});
        csv += '\n';
      }
      write_out(n == 2 ? "or_bigrams.csv" : "or_trigrams.csv", csv);
    }
  }

  void report() {
    engagement_ = report::normalized_engagement(mapping_.pairs, bundle_);
    std::string csv =
        "app_tweet_id,other_tweet_id,app_likes,app_retweets,app_followers,"
        "other_likes,other_retweets,other_followers,app_likes_norm,app_retweets_norm,"
        "other_likes_norm,other_retweets_norm\n";
    auto opt = [](const std::optional<double>& v) {
      return v ? io::format_double(*v) : std::string();
    };
    std::vector<double> app_likes, other_likes, app_rts, other_rts;
    std::vector<double> app_likes_n, other_likes_n, app_rts_n, other_rts_n;
    for (const report::EngagementRecord& r : engagement_.records) {
      csv += io::join_csv_line(
          {r.app_tweet_id, r.other_tweet_id, std::to_string(r.app_likes),
           std::to_string(r.app_retweets), std::to_string(r.app_followers),
           std::to_string(r.other_likes), std::to_string(r.other_retweets),
           std::to_string(r.other_followers), opt(r.app_likes_norm), opt(r.app_retweets_norm),
           opt(r.other_likes_norm), opt(r.other_retweets_norm)});
      csv += '\n';
      app_likes.push_back(static_cast<double>(r.app_likes));
      other_likes.push_back(static_cast<double>(r.other_likes));
      app_rts.push_back(static_cast<double>(r.app_retweets));
      other_rts.push_back(static_cast<double>(r.other_retweets));
      if (r.app_likes_norm) app_likes_n.push_back(*r.app_likes_norm);
      if (r.app_retweets_norm) app_rts_n.push_back(*r.app_retweets_norm);
      if (r.other_likes_norm) other_likes_n.push_back(*r.other_likes_norm);
      if (r.other_retweets_norm) other_rts_n.push_back(*r.other_retweets_norm);
    }
    write_out("engagement_pairs.csv", csv);
    write_ecdf("ecdf_likes_app.csv", app_likes);
    write_ecdf("ecdf_likes_other.csv", other_likes);
    write_ecdf("ecdf_retweets_app.csv", app_rts);
    write_ecdf("ecdf_retweets_other.csv", other_rts);
    write_ecdf("ecdf_likes_norm_app.csv", app_likes_n);
    write_ecdf("ecdf_likes_norm_other.csv", other_likes_n);
    write_ecdf("ecdf_retweets_norm_app.csv", app_rts_n);
    write_ecdf("ecdf_retweets_norm_other.csv", other_rts_n);

    std::set<std::string> affected;
    for (const auto& [id, user] : bundle_.users)
      if (user.role != Role::None) affected.insert(id);
    std::string states_csv = "state,frac_affected,frac_general\n";
    for (const report::StateRow& row : report::state_fractions(affected, bundle_)) {
      states_csv += io::join_csv_line({row.state, io::format_double(to_double(row.frac_affected)),
                                       io::format_double(to_double(row.frac_general))});
      states_csv += '\n';
    }
    write_out("state_fractions.csv", states_csv);
    affected_users_ = affected.size();

    ordered_json s;
    s["tweets_parsed"] = parse_stats_.tweets_parsed;
    s["tweets_skipped"] = parse_stats_.tweets_skipped;
    s["users_parsed"] = parse_stats_.users_parsed;
    s["users_skipped"] = parse_stats_.users_skipped;
    s["follow_edges"] = parse_stats_.follow_edges_parsed;
    s["retweet_edges"] = parse_stats_.retweet_edges_parsed;
    s["stub_users"] = parse_stats_.stub_users;
    s["locations"] = ordered_json{{"resolved", location_stats_.resolved},
                                  {"removed", location_stats_.removed},
                                  {"unresolved", location_stats_.unresolved}};
    s["affiliations"] = ordered_json{{"curated", affiliation_stats_.curated},
                                     {"metadata", affiliation_stats_.metadata},
                                     {"ratios", affiliation_stats_.ratios},
                                     {"unknown", affiliation_stats_.unknown}};
    s["polarity_profiles"] = polarity_rows_;
    s["communities"] = partition_.assignment.empty()
                           ? 0
                           : 1 + std::max_element(partition_.assignment.begin(),
                                                  partition_.assignment.end(),
                                                  [](const auto& a, const auto& b) {
                                                    return a.second < b.second;
                                                  })
                                     ->second;
    s["modularity"] = partition_.modularity_q;
    s["match"] = ordered_json{{"app_candidates", app_candidates_},
                              {"other_candidates", other_candidates_},
                              {"cluster_gated_others", gated_others_},
                              {"k", model_.k},
                              {"pairs", mapping_.pairs.size()},
                              {"collisions", mapping_.collisions}};
    s["image_clusters"] = image_cluster_count_;
    s["image_noise"] = image_noise_count_;
    s["hawkes_images_used"] = hawkes_images_used_;
    s["engagement"] = ordered_json{{"records", engagement_.records.size()},
                                   {"skipped_missing", engagement_.skipped_missing},
                                   {"zero_follower_sides", engagement_.zero_follower_sides}};
    s["affected_users"] = affected_users_;
    write_out("summary.json", s.dump(2) + "\n");
  }

  void manifest() {
    ordered_json m;
    m["tool"] = "echoflow";
    m["version"] = version();
    m["seed"] = cfg_.seed;
    ordered_json inputs = ordered_json::object();
    auto digest = [&](const char* key, const std::string& path) {
      if (!path.empty()) inputs[key] = io::to_hex64(io::fnv1a64_file(path));
    };
    digest("tweets", cfg_.tweets);
    digest("users", cfg_.users);
    digest("edges_follow", cfg_.edges_follow);
    digest("edges_retweet", cfg_.edges_retweet);
    digest("lexicon", cfg_.lexicon);
    digest("curated", cfg_.curated);
    digest("keywords", cfg_.keywords);
    digest("city_to_state", cfg_.city_to_state);
    digest("foreign_places", cfg_.foreign_places);
    digest("stopwords", cfg_.stopwords);
    digest("events", cfg_.events_csv);
    m["input_digests"] = inputs;
    ordered_json outputs = ordered_json::object();
    std::vector<std::string> names = written_;
    std::sort(names.begin(), names.end());
    for (const std::string& name : names)
      outputs[name] = io::to_hex64(io::fnv1a64_file(out_path(name)));
    m["output_digests"] = outputs;
    write_out("manifest.json", m.dump(2) + "\n");
  }

  PipelineConfig cfg_;
  std::string out_;
  std::vector<std::string> written_;

  DatasetBundle bundle_;
  ingest::ParseStats parse_stats_;
  ingest::LocationStats location_stats_;
  HashtagLexicon lexicon_;
  lexicon::AffiliationStats affiliation_stats_;
  graph::SocialGraph follow_graph_;
  graph::CommunityPartition partition_;
  match::TextClusterModel model_;
  match::PairMapping mapping_;
  report::EngagementResult engagement_;
  std::size_t polarity_rows_ = 0;
  std::size_t app_candidates_ = 0, other_candidates_ = 0, gated_others_ = 0;
  std::size_t image_cluster_count_ = 0, image_noise_count_ = 0;
  std::size_t hawkes_images_used_ = 0;
  std::size_t affected_users_ = 0;
};

}  // namespace

const char* version() { return "0.1.0"; }

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long num = std::stoll(text.substr(0, slash));
    long long den = std::stoll(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text), 1);
  std::string frac = text.substr(dot + 1);
  if (frac.size() > 9) throw std::invalid_argument("too many decimal digits: " + text);
  long long den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::string head = text.substr(0, dot);
  bool negative = !head.empty() && head[0] == '-';
  long long whole = head.empty() || head == "-" ? 0 : std::stoll(head);
  long long num = std::llabs(whole) * den + (frac.empty() ? 0 : std::stoll(frac));
  return Rational(negative ? -num : num, den);
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  json doc = json::parse(io::read_file(path));
  if (!doc.is_object()) throw std::runtime_error("config: top level must be a JSON object");
  check_keys(doc, "top level",
             {"seed", "inputs", "partition", "match", "image", "hawkes", "lexstats"});

  PipelineConfig cfg;
  fs::path base = fs::path(path).parent_path();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();

  if (!doc.contains("inputs")) throw std::runtime_error("config: missing \"inputs\" section");
  const json& in = doc["inputs"];
  check_keys(in, "inputs",
             {"tweets", "users", "edges_follow", "edges_retweet", "lexicon", "curated", "keywords",
              "city_to_state", "foreign_places", "stopwords", "images_dir", "events", "schema"});
  auto in_path = [&](const char* key) {
    return in.contains(key) ? resolve(base, in[key].get<std::string>()) : std::string();
  };
  cfg.tweets = in_path("tweets");
  cfg.users = in_path("users");
  cfg.edges_follow = in_path("edges_follow");
  cfg.edges_retweet = in_path("edges_retweet");
  cfg.lexicon = in_path("lexicon");
  cfg.curated = in_path("curated");
  cfg.keywords = in_path("keywords");
  cfg.city_to_state = in_path("city_to_state");
  cfg.foreign_places = in_path("foreign_places");
  cfg.stopwords = in_path("stopwords");
  cfg.images_dir = in_path("images_dir");
  cfg.events_csv = in_path("events");
  cfg.schema = in_path("schema");
  if (cfg.tweets.empty() || cfg.users.empty())
    throw std::runtime_error("config: inputs.tweets and inputs.users are required");
  if (cfg.lexicon.empty()) throw std::runtime_error("config: inputs.lexicon is required");

  if (doc.contains("partition")) {
    const json& p = doc["partition"];
    check_keys(p, "partition", {"threshold"});
    if (p.contains("threshold")) {
      if (p["threshold"].is_string()) cfg.threshold = parse_rational(p["threshold"].get<std::string>());
      else cfg.threshold = parse_rational(io::format_double(p["threshold"].get<double>()));
    }
  }
  if (doc.contains("match")) {
    const json& mj = doc["match"];
    check_keys(mj, "match", {"k", "threshold", "min_tokens", "dedup"});
    if (mj.contains("k")) cfg.k = mj["k"].get<int>();
    if (mj.contains("threshold")) cfg.match_threshold = mj["threshold"].get<double>();
    if (mj.contains("min_tokens")) cfg.min_tokens = mj["min_tokens"].get<std::size_t>();
    if (mj.contains("dedup")) cfg.dedup = mj["dedup"].get<bool>();
  }
  if (doc.contains("image")) {
    const json& ij = doc["image"];
    check_keys(ij, "image", {"eps", "min_points"});
    if (ij.contains("eps")) cfg.eps = ij["eps"].get<int>();
    if (ij.contains("min_points")) cfg.min_points = ij["min_points"].get<int>();
  }
  if (doc.contains("hawkes")) {
    const json& hj = doc["hawkes"];
    check_keys(hj, "hawkes", {"delta_t", "platforms"});
    if (hj.contains("delta_t")) cfg.delta_t = hj["delta_t"].get<std::vector<int>>();
    if (hj.contains("platforms")) cfg.platforms = hj["platforms"].get<std::vector<std::string>>();
  }
  if (doc.contains("lexstats")) {
    const json& lj = doc["lexstats"];
    check_keys(lj, "lexstats", {"top_n", "min_count", "exclude_hashtags"});
    if (lj.contains("top_n")) cfg.top_n = lj["top_n"].get<int>();
    if (lj.contains("min_count")) cfg.min_count = lj["min_count"].get<int>();
    if (lj.contains("exclude_hashtags"))
      for (const auto& h : lj["exclude_hashtags"]) cfg.exclude_hashtags.insert(h.get<std::string>());
  }
  for (int dt : cfg.delta_t)
    if (dt < 1) throw std::runtime_error("config: hawkes.delta_t entries must be positive");
  if (cfg.platforms.empty()) throw std::runtime_error("config: hawkes.platforms must be nonempty");
  return cfg;
}

std::vector<std::string> run_pipeline(const PipelineConfig& config, const std::string& out_dir) {
  return Run(config, out_dir).execute();
}

}  // namespace echoflow::pipeline
