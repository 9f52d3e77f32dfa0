// Microbenchmarks for the hot paths: influence fitting, community
// detection, hash clustering, perceptual hashing, and vectorization.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "echoflow/graph.hpp"
#include "echoflow/hawkes.hpp"
#include "echoflow/image.hpp"
#include "echoflow/match_text.hpp"
#include "echoflow/text.hpp"

using namespace echoflow;

namespace {

double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

const hawkes::SimulationResult& simulated_series() {
  static hawkes::SimulationResult sim = [] {
    hawkes::HawkesModel truth =
        hawkes::make_model({0.02, 0.03}, {{0.2, 0.1}, {0.15, 0.25}}, 120);
    return hawkes::simulate(truth, 5000, 42);
  }();
  return sim;
}

const graph::SocialGraph& planted_graph() {
  static graph::SocialGraph g = [] {
    graph::SocialGraph out;
    std::mt19937_64 rng(11);
    std::vector<std::string> nodes;
    for (int i = 0; i < 200; ++i) {
      nodes.push_back("u" + std::to_string(100 + i));
      out.nodes.insert(nodes.back());
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        bool same = i / 67 == j / 67;
        if (unit(rng) < (same ? 0.3 : 0.01)) out.add_edge(nodes[i], nodes[j]);
      }
    return out;
  }();
  return g;
}

const std::vector<image::HashedImage>& clumpy_hashes() {
  static std::vector<image::HashedImage> hashes = [] {
    std::vector<image::HashedImage> out;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) out.push_back({"u" + std::to_string(i), rng()});
    for (int i = 0; i < 300; ++i) {
      std::uint64_t base = out[rng() % out.size()].hash;
      for (std::uint64_t f = rng() % 13; f > 0; --f) base ^= 1ull << (rng() % 64);
      out.push_back({"p" + std::to_string(i), base});
    }
    return out;
  }();
  return hashes;
}

const image::Image& sample_image() {
  static image::Image img = [] {
    image::Image out;
    out.channels = 1;
    out.width = 64;
    out.height = 64;
    std::mt19937_64 rng(3);
    out.pixels.resize(64 * 64);
    for (auto& p : out.pixels) p = static_cast<std::uint8_t>(rng() % 256);
    return out;
  }();
  return img;
}

const std::vector<std::vector<std::string>>& sample_docs() {
  static std::vector<std::vector<std::string>> docs = [] {
    std::vector<std::vector<std::string>> out;
    std::mt19937_64 rng(5);
    for (int d = 0; d < 2000; ++d) {
      std::vector<std::string> doc;
      for (int t = 0; t < 8; ++t) doc.push_back("w" + std::to_string(rng() % 400));
      out.push_back(doc);
    }
    return out;
  }();
  return docs;
}

void BM_HawkesFit(benchmark::State& state) {
  const hawkes::SimulationResult& sim = simulated_series();
  for (auto _ : state) {
    hawkes::FitResult fit = hawkes::fit(sim.series, 120, 42);
    benchmark::DoNotOptimize(fit.log_likelihood);
  }
}
BENCHMARK(BM_HawkesFit)->Unit(benchmark::kMillisecond);

void BM_CommunityDetection(benchmark::State& state) {
  const graph::SocialGraph& g = planted_graph();
  for (auto _ : state) {
    graph::CommunityPartition p = graph::detect_communities(g, 7);
    benchmark::DoNotOptimize(p.modularity_q);
  }
}
BENCHMARK(BM_CommunityDetection)->Unit(benchmark::kMillisecond);

void BM_HashClustering(benchmark::State& state) {
  const std::vector<image::HashedImage>& hashes = clumpy_hashes();
  for (auto _ : state) {
    image::ClusterResult r = image::cluster_images(hashes, 10, 2);
    benchmark::DoNotOptimize(r.clusters.size());
  }
}
BENCHMARK(BM_HashClustering)->Unit(benchmark::kMillisecond);

void BM_PerceptualHash(benchmark::State& state) {
  const image::Image& img = sample_image();
  for (auto _ : state) benchmark::DoNotOptimize(image::phash64(img));
}
BENCHMARK(BM_PerceptualHash)->Unit(benchmark::kMicrosecond);

void BM_VectorizeCorpus(benchmark::State& state) {
  const std::vector<std::vector<std::string>>& docs = sample_docs();
  for (auto _ : state) {
    text::VectorizedCorpus corpus = text::vectorize_corpus(docs, 2);
    benchmark::DoNotOptimize(corpus.vectors.size());
  }
}
BENCHMARK(BM_VectorizeCorpus)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
