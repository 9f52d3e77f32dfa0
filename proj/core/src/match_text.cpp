#include "echoflow/match_text.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace echoflow::match {
namespace {

/// Uniform double in [0,1) from the raw engine stream; avoids the
/// library-defined distribution adaptors so streams are portable.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t weighted_pick(const std::vector<double>& weights, double total,
                          std::mt19937_64& rng) {
  double target = next_unit(rng) * total;
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  // Fall through on rounding; last positive weight wins.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0) return i;
  return 0;
}

std::vector<double> densify(const text::TermVector& v, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (const auto& [idx, val] : v.counts) out[idx] = val;
  return out;
}

double sq_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

int default_cluster_count(std::size_t n_vectors) {
  if (n_vectors == 0) return 1;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_vectors) / 2.0)));
}

bool within_match_threshold(double squared_distance, double threshold) {
  return squared_distance < threshold * threshold;
}

TextClusterModel train_text_clusters(const std::vector<text::TermVector>& vectors,
                                     const text::Vocabulary& vocabulary, int k,
                                     std::uint64_t seed, double match_threshold,
                                     const KMeansOptions& options) {
  const std::size_t n = vectors.size();
  if (k < 1) throw std::invalid_argument("train_text_clusters: k must be positive");
  if (static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("train_text_clusters: k exceeds number of vectors");
  if (match_threshold <= 0)
    throw std::invalid_argument("train_text_clusters: threshold must be positive");
  const std::size_t dim = vocabulary.size();

  std::mt19937_64 rng(seed);
  TextClusterModel model;
  model.vocabulary = vocabulary;
  model.k = k;
  model.match_threshold = match_threshold;

  // k-means++ seeding: first pick uniform, then proportional to the
  // squared distance to the nearest chosen centroid.
  std::vector<std::size_t> chosen;
  chosen.push_back(static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n)) % n);
  std::vector<double> min_d2(n);
  {
    std::vector<double> c = densify(vectors[chosen[0]], dim);
    double cn = sq_norm(c);
    for (std::size_t i = 0; i < n; ++i) min_d2[i] = text::squared_distance(vectors[i], c, cn);
  }
  while (chosen.size() < static_cast<std::size_t>(k)) {
    double total = 0;
    for (double d : min_d2) total += d;
    std::size_t pick;
    if (total <= 0) {
      // All mass already covered; fall back to the first unchosen index.
      pick = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
          pick = i;
          break;
        }
      }
    } else {
      pick = weighted_pick(min_d2, total, rng);
    }
    chosen.push_back(pick);
    std::vector<double> c = densify(vectors[pick], dim);
    double cn = sq_norm(c);
    for (std::size_t i = 0; i < n; ++i)
      min_d2[i] = std::min(min_d2[i], text::squared_distance(vectors[i], c, cn));
  }

  model.centroids.clear();
  for (std::size_t idx : chosen) model.centroids.push_back(densify(vectors[idx], dim));
  model.centroid_sq_norms.resize(k);
  for (int c = 0; c < k; ++c) model.centroid_sq_norms[c] = sq_norm(model.centroids[c]);

  std::vector<int> assignment(n, 0);
  std::vector<double> best_d2(n, 0.0);
  double prev_inertia = -1;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Assignment step; ties go to the lower centroid index.
    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = text::squared_distance(vectors[i], model.centroids[0], model.centroid_sq_norms[0]);
      for (int c = 1; c < k; ++c) {
        double d = text::squared_distance(vectors[i], model.centroids[c], model.centroid_sq_norms[c]);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      assignment[i] = best;
      best_d2[i] = bd;
      inertia += bd;
    }

    // Any empty cluster grabs the point farthest from its centroid.
    std::vector<std::size_t> count(k, 0);
    for (int a : assignment) ++count[a];
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (count[assignment[i]] <= 1) continue;  // keep donors nonempty
        if (best_d2[i] > far_d) {
          far_d = best_d2[i];
          far = i;
        }
      }
      --count[assignment[far]];
      assignment[far] = c;
      count[c] = 1;
      best_d2[far] = 0;
    }

    // Update step: mean of members.
    for (int c = 0; c < k; ++c) std::fill(model.centroids[c].begin(), model.centroids[c].end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double>& cent = model.centroids[assignment[i]];
      for (const auto& [idx, val] : vectors[i].counts) cent[idx] += val;
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      double inv = 1.0 / static_cast<double>(count[c]);
      for (double& x : model.centroids[c]) x *= inv;
      model.centroid_sq_norms[c] = sq_norm(model.centroids[c]);
    }

    model.inertia = inertia;
    if (prev_inertia >= 0) {
      double drop = prev_inertia - inertia;
      if (drop <= options.relative_tolerance * std::max(prev_inertia, 1e-300)) break;
    }
    if (inertia == 0) break;
    prev_inertia = inertia;
  }

  // Report the inertia of the final centroids.
  double inertia = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double bd = text::squared_distance(vectors[i], model.centroids[0], model.centroid_sq_norms[0]);
    for (int c = 1; c < k; ++c)
      bd = std::min(bd, text::squared_distance(vectors[i], model.centroids[c], model.centroid_sq_norms[c]));
    inertia += bd;
  }
  model.inertia = inertia;
  return model;
}

std::optional<TextMatch> match_text(const text::TermVector& vector,
                                    const TextClusterModel& model) {
  if (vector.empty() || model.centroids.empty()) return std::nullopt;
  int best = 0;
  double bd = text::squared_distance(vector, model.centroids[0], model.centroid_sq_norms[0]);
  for (int c = 1; c < model.k; ++c) {
    double d = text::squared_distance(vector, model.centroids[c], model.centroid_sq_norms[c]);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  if (!within_match_threshold(bd, model.match_threshold)) return std::nullopt;
  return TextMatch{best, std::sqrt(bd)};
}

namespace {

std::vector<MatchableTweet> dedup_earliest(const std::vector<MatchableTweet>& tweets,
                                           std::size_t& dropped) {
  std::map<std::string, std::size_t> first;  // token-sequence key -> index
  std::vector<bool> keep(tweets.size(), false);
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    std::string key;
    for (const std::string& tok : tweets[i].tokens) {
      key += tok;
      key += '\x1f';
    }
    auto it = first.find(key);
    if (it == first.end()) {
      first[key] = i;
      keep[i] = true;
      continue;
    }
    const MatchableTweet& held = tweets[it->second];
    bool replace = tweets[i].timestamp < held.timestamp ||
                   (tweets[i].timestamp == held.timestamp && tweets[i].tweet_id < held.tweet_id);
    if (replace) {
      keep[it->second] = false;
      keep[i] = true;
      it->second = i;
    }
    ++dropped;
  }
  std::vector<MatchableTweet> out;
  for (std::size_t i = 0; i < tweets.size(); ++i)
    if (keep[i]) out.push_back(tweets[i]);
  return out;
}

}  // namespace

PairMapping map_similar_pairs(const std::vector<MatchableTweet>& app_tweets,
                              const std::vector<MatchableTweet>& other_tweets,
                              bool dedup_first_instance) {
  PairMapping result;
  std::vector<MatchableTweet> app = app_tweets;
  std::vector<MatchableTweet> other = other_tweets;
  if (dedup_first_instance) {
    app = dedup_earliest(app, result.app_duplicates_dropped);
    other = dedup_earliest(other, result.other_duplicates_dropped);
  }
  if (app.empty() || other.empty()) return result;

  // One vocabulary over the union corpus keeps both sides in the same
  // space for cosine.
  std::vector<std::vector<std::string>> docs;
  docs.reserve(app.size() + other.size());
  for (const auto& t : app) docs.push_back(t.tokens);
  for (const auto& t : other) docs.push_back(t.tokens);
  text::VectorizedCorpus corpus = text::vectorize_corpus(docs, 2);
  for (text::TermVector& v : corpus.vectors) v.l2_normalize();

  const text::TermVector* app_vecs = corpus.vectors.data();
  const text::TermVector* other_vecs = corpus.vectors.data() + app.size();

  std::map<std::string, int> claims;
  for (std::size_t a = 0; a < app.size(); ++a) {
    std::size_t best = 0;
    double best_cos = -1;
    for (std::size_t o = 0; o < other.size(); ++o) {
      double cs = text::cosine_similarity(app_vecs[a], other_vecs[o]);
      bool better = cs > best_cos;
      if (!better && cs == best_cos) {
        const MatchableTweet& cur = other[best];
        const MatchableTweet& cand = other[o];
        better = cand.timestamp < cur.timestamp ||
                 (cand.timestamp == cur.timestamp && cand.tweet_id < cur.tweet_id);
      }
      if (better) {
        best_cos = cs;
        best = o;
      }
    }
    TweetPair pair;
    pair.app_tweet_id = app[a].tweet_id;
    pair.other_tweet_id = other[best].tweet_id;
    pair.cosine = std::max(best_cos, 0.0);
    pair.app_first = app[a].timestamp < other[best].timestamp;
    pair.same_timestamp = app[a].timestamp == other[best].timestamp;
    result.pairs.push_back(pair);
    ++claims[other[best].tweet_id];
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const TweetPair& x, const TweetPair& y) { return x.app_tweet_id < y.app_tweet_id; });
  for (const auto& [id, n] : claims)
    if (n > 1) ++result.collisions;
  return result;
}

FirstPosterStats first_poster_stats(const std::vector<TweetPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("first_poster_stats: no pairs");
  FirstPosterStats st;
  for (const TweetPair& p : pairs) {
    if (p.same_timestamp) ++st.simultaneous;
    else if (p.app_first) ++st.app_first;
    else ++st.other_first;
  }
  std::size_t ordered = st.app_first + st.other_first;
  if (ordered > 0) {
    st.app_first_fraction = static_cast<double>(st.app_first) / static_cast<double>(ordered);
    st.other_first_fraction = static_cast<double>(st.other_first) / static_cast<double>(ordered);
  }
  return st;
}

}  // namespace echoflow::match
