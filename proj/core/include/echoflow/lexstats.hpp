#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "echoflow/types.hpp"

namespace echoflow::lexstats {

/// Token counts over a corpus, descending; ties alphabetical.
/// top_n <= 0 returns the full table.
std::vector<std::pair<std::string, long long>> term_frequencies(
    const std::vector<std::vector<std::string>>& docs, int top_n);

/// Multiset hashtag counts over all tweets, minus the exclusion list.
std::vector<std::pair<std::string, long long>> hashtag_frequencies(
    const DatasetBundle& bundle, int top_n, const std::set<std::string>& exclusions = {});

struct OddsRatioRow {
  std::vector<std::string> ngram;
  int n = 0;
  long long count_a = 0;  // documents in A containing the n-gram
  long long count_b = 0;
  Rational odds{1};       // Haldane-smoothed, exact
};

/// Document-presence odds ratios with additive 0.5 smoothing:
/// OR = ((a+1/2)/(|A|-a+1/2)) / ((b+1/2)/(|B|-b+1/2)), kept as an exact
/// rational so OR(A,B) * OR(B,A) == 1 holds identically. Rows with
/// count_a + count_b < min_count are dropped; sorted by odds descending
/// (ties: n-gram ascending). n must be 2 or 3.
std::vector<OddsRatioRow> ngram_odds_ratios(const std::vector<std::vector<std::string>>& docs_a,
                                            const std::vector<std::vector<std::string>>& docs_b,
                                            int n, int min_count = 3);

std::string ngram_to_string(const std::vector<std::string>& ngram);

}  // namespace echoflow::lexstats
