#include "echoflow/lexstats.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace echoflow::lexstats {
namespace {

std::vector<std::pair<std::string, long long>> sorted_top(
    const std::map<std::string, long long>& counts, int top_n) {
  std::vector<std::pair<std::string, long long>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (top_n > 0 && rows.size() > static_cast<std::size_t>(top_n)) rows.resize(top_n);
  return rows;
}

}  // namespace

std::vector<std::pair<std::string, long long>> term_frequencies(
    const std::vector<std::vector<std::string>>& docs, int top_n) {
  std::map<std::string, long long> counts;
  for (const auto& doc : docs)
    for (const std::string& tok : doc) ++counts[tok];
  return sorted_top(counts, top_n);
}

std::vector<std::pair<std::string, long long>> hashtag_frequencies(
    const DatasetBundle& bundle, int top_n, const std::set<std::string>& exclusions) {
  std::map<std::string, long long> counts;
  for (const TweetRecord& t : bundle.tweets)
    for (const std::string& tag : t.hashtags)
      if (!exclusions.count(tag)) ++counts[tag];
  return sorted_top(counts, top_n);
}

std::string ngram_to_string(const std::vector<std::string>& ngram) {
  std::string out;
  for (std::size_t i = 0; i < ngram.size(); ++i) {
    if (i) out += ' ';
    out += ngram[i];
  }
  return out;
}

std::vector<OddsRatioRow> ngram_odds_ratios(const std::vector<std::vector<std::string>>& docs_a,
                                            const std::vector<std::vector<std::string>>& docs_b,
                                            int n, int min_count) {
  if (n != 2 && n != 3) throw std::invalid_argument("ngram_odds_ratios: n must be 2 or 3");

  // Document presence: each doc contributes each distinct n-gram once.
  auto count_presence = [n](const std::vector<std::vector<std::string>>& docs) {
    std::map<std::vector<std::string>, long long> counts;
    for (const auto& doc : docs) {
      if (doc.size() < static_cast<std::size_t>(n)) continue;
      std::set<std::vector<std::string>> seen;
      for (std::size_t i = 0; i + n <= doc.size(); ++i)
        seen.insert(std::vector<std::string>(doc.begin() + i, doc.begin() + i + n));
      for (const auto& g : seen) ++counts[g];
    }
    return counts;
  };

  std::map<std::vector<std::string>, long long> in_a = count_presence(docs_a);
  std::map<std::vector<std::string>, long long> in_b = count_presence(docs_b);
  const long long total_a = static_cast<long long>(docs_a.size());
  const long long total_b = static_cast<long long>(docs_b.size());

  std::set<std::vector<std::string>> grams;
  for (const auto& [g, c] : in_a) grams.insert(g);
  for (const auto& [g, c] : in_b) grams.insert(g);

  std::vector<OddsRatioRow> rows;
  for (const auto& g : grams) {
    OddsRatioRow row;
    row.ngram = g;
    row.n = n;
    auto ita = in_a.find(g);
    auto itb = in_b.find(g);
    row.count_a = ita == in_a.end() ? 0 : ita->second;
    row.count_b = itb == in_b.end() ? 0 : itb->second;
    if (row.count_a + row.count_b < min_count) continue;
    // Doubling both sides of each fraction clears the halves, keeping
    // every factor a positive integer.
    Rational numerator(2 * row.count_a + 1, 2 * (total_a - row.count_a) + 1);
    Rational denominator(2 * row.count_b + 1, 2 * (total_b - row.count_b) + 1);
    row.odds = numerator / denominator;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const OddsRatioRow& a, const OddsRatioRow& b) {
    if (a.odds != b.odds) return b.odds < a.odds;
    return a.ngram < b.ngram;
  });
  return rows;
}

}  // namespace echoflow::lexstats
