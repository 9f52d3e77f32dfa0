#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "echoflow/types.hpp"

namespace echoflow::lexicon {

/// Multiset leaning statistics for one user's hashtags. Ratios divide by
/// annotated_count; percent_used divides by not_neutral_count. All exact.
struct LeaningRatios {
  Rational pro_bjp_ratio{0};
  Rational pro_congress_ratio{0};
  Rational anti_bjp_ratio{0};
  Rational anti_congress_ratio{0};
  long long annotated_count = 0;   // carries one of the four partisan labels
  long long not_neutral_count = 0; // annotated + unlabeled
  long long total_hashtags = 0;
  Rational percent_used{0};        // annotated / not_neutral, 0 when empty
};

LeaningRatios compute_leaning_ratios(const std::vector<std::string>& user_hashtags,
                                     const HashtagLexicon& lexicon);

/// Where the argmax winner lands on the two-pole scheme. AntiCongress
/// defaults to the pro-BJP pole; flip it here if needed.
struct PoleMapping {
  Affiliation pro_bjp = Affiliation::ProBJP;
  Affiliation anti_bjp = Affiliation::Other;
  Affiliation pro_congress = Affiliation::Other;
  Affiliation anti_congress = Affiliation::ProBJP;
};

/// Unknown when annotated_count is 0 or percent_used < threshold; else
/// the pole of the largest ratio. A tie spanning both poles is Unknown.
/// Throws std::invalid_argument when threshold is outside [0,1].
Affiliation assign_affiliation(const LeaningRatios& ratios,
                               const Rational& threshold = Rational(1, 10),
                               const PoleMapping& mapping = {});

/// Keyword lists for the metadata stage, all lowercase. Screen-name
/// matching is plain substring; description matching requires word
/// boundaries around the phrase.
struct KeywordConfig {
  std::set<std::string> bjp_screen;
  std::set<std::string> congress_screen;
  std::set<std::string> bjp_description;
  std::set<std::string> congress_description;

  static KeywordConfig defaults();
  /// INI-style file: [bjp_screen] / [congress_screen] /
  /// [bjp_description] / [congress_description] sections, one keyword
  /// per line, '#' comments.
  static KeywordConfig from_file(const std::string& path);
};

/// Screen name is checked first; any screen hit decides (both parties
/// hitting → nullopt). Only when the screen name says nothing is the
/// description consulted the same way. nullopt = stage abstains.
std::optional<Affiliation> metadata_affiliation(const std::string& screen_name,
                                                const std::string& description,
                                                const KeywordConfig& keywords = KeywordConfig::defaults());

/// user_id -> affiliation from a hand-checked list; highest-precedence
/// stage. Missing file -> std::nullopt (stage skipped).
std::optional<std::map<std::string, Affiliation>> load_curated(const std::string& path);

struct SweepRow {
  Rational threshold{0};
  std::size_t pro_bjp = 0;
  std::size_t other = 0;
  std::size_t unknown = 0;
};

/// Reclassifies every ratio set at each threshold. Thresholds must be
/// sorted ascending (throws std::invalid_argument otherwise); the
/// Unknown count is then non-decreasing across rows.
std::vector<SweepRow> threshold_sweep(const std::vector<LeaningRatios>& users,
                                      const std::vector<Rational>& thresholds,
                                      const PoleMapping& mapping = {});

enum class AffiliationStage { Curated, Metadata, Ratios, Unassigned };

struct AffiliationStats {
  std::size_t curated = 0;
  std::size_t metadata = 0;
  std::size_t ratios = 0;
  std::size_t unknown = 0;  // all stages abstained or Unknown
};

/// Runs the three stages in precedence order over every user in the
/// bundle and writes UserProfile::affiliation. Returns per-stage counts.
AffiliationStats resolve_affiliations(
    DatasetBundle& bundle, const HashtagLexicon& lexicon,
    const std::optional<std::map<std::string, Affiliation>>& curated,
    const KeywordConfig& keywords = KeywordConfig::defaults(),
    const Rational& threshold = Rational(1, 10), const PoleMapping& mapping = {});

}  // namespace echoflow::lexicon
