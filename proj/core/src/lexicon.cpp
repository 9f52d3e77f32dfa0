#include "echoflow/lexicon.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "echoflow/io_util.hpp"
#include "echoflow/text.hpp"

namespace echoflow::lexicon {
namespace {

bool is_word_byte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool contains_any(const std::string& haystack, const std::set<std::string>& needles) {
  for (const std::string& n : needles)
    if (!n.empty() && haystack.find(n) != std::string::npos) return true;
  return false;
}

/// Substring match with non-word (or edge) characters on both sides, so
/// "inc" does not fire inside "principal".
bool contains_word(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_word_byte(haystack[pos - 1]);
    std::size_t end = pos + needle.size();
    bool right_ok = end == haystack.size() || !is_word_byte(haystack[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

bool contains_any_word(const std::string& haystack, const std::set<std::string>& needles) {
  for (const std::string& n : needles)
    if (contains_word(haystack, n)) return true;
  return false;
}

}  // namespace

LeaningRatios compute_leaning_ratios(const std::vector<std::string>& user_hashtags,
                                     const HashtagLexicon& lexicon) {
  LeaningRatios r;
  long long pro_bjp = 0, anti_bjp = 0, pro_congress = 0, anti_congress = 0;
  for (const std::string& tag : user_hashtags) {
    ++r.total_hashtags;
    std::optional<HashtagLabel> label = lexicon.lookup(tag);
    if (!label) {
      ++r.not_neutral_count;  // unlabeled counts toward the denominator
      continue;
    }
    switch (*label) {
      case HashtagLabel::ProBJP: ++pro_bjp; break;
      case HashtagLabel::AntiBJP: ++anti_bjp; break;
      case HashtagLabel::ProCongress: ++pro_congress; break;
      case HashtagLabel::AntiCongress: ++anti_congress; break;
      case HashtagLabel::Neutral: continue;
    }
    ++r.annotated_count;
    ++r.not_neutral_count;
  }
  if (r.annotated_count > 0) {
    r.pro_bjp_ratio = Rational(pro_bjp, r.annotated_count);
    r.anti_bjp_ratio = Rational(anti_bjp, r.annotated_count);
    r.pro_congress_ratio = Rational(pro_congress, r.annotated_count);
    r.anti_congress_ratio = Rational(anti_congress, r.annotated_count);
  }
  if (r.not_neutral_count > 0)
    r.percent_used = Rational(r.annotated_count, r.not_neutral_count);
  return r;
}

Affiliation assign_affiliation(const LeaningRatios& ratios, const Rational& threshold,
                               const PoleMapping& mapping) {
  if (threshold < Rational(0) || threshold > Rational(1))
    throw std::invalid_argument("affiliation threshold must lie in [0,1]");
  if (ratios.annotated_count == 0 || ratios.percent_used < threshold)
    return Affiliation::Unknown;

  struct Entry {
    Rational value;
    Affiliation pole;
  };
  const Entry entries[4] = {
      {ratios.pro_bjp_ratio, mapping.pro_bjp},
      {ratios.anti_bjp_ratio, mapping.anti_bjp},
      {ratios.pro_congress_ratio, mapping.pro_congress},
      {ratios.anti_congress_ratio, mapping.anti_congress},
  };
  Rational best = entries[0].value;
  for (int i = 1; i < 4; ++i) best = std::max(best, entries[i].value);

  std::set<Affiliation> winning_poles;
  for (const Entry& e : entries)
    if (e.value == best) winning_poles.insert(e.pole);
  if (winning_poles.size() != 1) return Affiliation::Unknown;
  return *winning_poles.begin();
}

KeywordConfig KeywordConfig::defaults() {
  KeywordConfig k;
  k.bjp_screen = {"bjp", "modi", "namo"};
  k.congress_screen = {"congress", "inc", "cong"};
  k.bjp_description = {"bjp",      "modi",        "namo",
                       "narendra modi", "bhartiya janta party", "amit shah",
                       "amitshah", "narendramodi", "bjp4india"};
  k.congress_description = {"rahul gandhi", "congress",        "inc",
                            "priyanka gandhi", "raga", "shashi tharoor"};
  return k;
}

KeywordConfig KeywordConfig::from_file(const std::string& path) {
  KeywordConfig k;  // file fully replaces defaults
  std::set<std::string>* current = nullptr;
  std::size_t lineno = 0;
  for (std::string line : io::read_lines(path)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line.erase(0, start);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unterminated section");
      std::string section = line.substr(1, line.size() - 2);
      if (section == "bjp_screen") current = &k.bjp_screen;
      else if (section == "congress_screen") current = &k.congress_screen;
      else if (section == "bjp_description") current = &k.bjp_description;
      else if (section == "congress_description") current = &k.congress_description;
      else
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown section [" + section + "]");
      continue;
    }
    if (!current)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": keyword before any section");
    current->insert(text::ascii_lower(line));
  }
  return k;
}

std::optional<Affiliation> metadata_affiliation(const std::string& screen_name,
                                                const std::string& description,
                                                const KeywordConfig& keywords) {
  const std::string screen = text::ascii_lower(screen_name);
  bool bjp = contains_any(screen, keywords.bjp_screen);
  bool congress = contains_any(screen, keywords.congress_screen);
  if (bjp || congress) {
    if (bjp && congress) return std::nullopt;  // ambiguous
    return bjp ? Affiliation::ProBJP : Affiliation::Other;
  }

  const std::string desc = text::ascii_lower(description);
  bjp = contains_any_word(desc, keywords.bjp_description);
  congress = contains_any_word(desc, keywords.congress_description);
  if (bjp && congress) return std::nullopt;
  if (bjp) return Affiliation::ProBJP;
  if (congress) return Affiliation::Other;
  return std::nullopt;
}

std::optional<std::map<std::string, Affiliation>> load_curated(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  std::map<std::string, Affiliation> out;
  bool first = true;
  std::size_t lineno = 0;
  for (const std::string& line : io::read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells = io::split_csv_line(line);
    if (first) {
      first = false;
      if (cells.size() >= 2 && text::ascii_lower(cells[0]) == "user_id") continue;
    }
    if (cells.size() != 2 || cells[0].empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected user_id,affiliation");
    std::optional<Affiliation> aff = affiliation_from_string(cells[1]);
    if (!aff)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad affiliation '" + cells[1] + "'");
    out[cells[0]] = *aff;
  }
  return out;
}

std::vector<SweepRow> threshold_sweep(const std::vector<LeaningRatios>& users,
                                      const std::vector<Rational>& thresholds,
                                      const PoleMapping& mapping) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (thresholds[i] < thresholds[i - 1])
      throw std::invalid_argument("threshold_sweep: thresholds must be sorted ascending");

  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (const Rational& t : thresholds) {
    SweepRow row;
    row.threshold = t;
    for (const LeaningRatios& r : users) {
      switch (assign_affiliation(r, t, mapping)) {
        case Affiliation::ProBJP: ++row.pro_bjp; break;
        case Affiliation::Other: ++row.other; break;
        case Affiliation::Unknown: ++row.unknown; break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

AffiliationStats resolve_affiliations(
    DatasetBundle& bundle, const HashtagLexicon& lexicon,
    const std::optional<std::map<std::string, Affiliation>>& curated,
    const KeywordConfig& keywords, const Rational& threshold, const PoleMapping& mapping) {
  std::map<std::string, std::vector<std::string>> hashtags_by_user;
  for (const TweetRecord& t : bundle.tweets) {
    auto& v = hashtags_by_user[t.user_id];
    v.insert(v.end(), t.hashtags.begin(), t.hashtags.end());
  }

  AffiliationStats stats;
  static const std::vector<std::string> kNoTags;
  for (auto& [id, user] : bundle.users) {
    if (curated) {
      auto it = curated->find(id);
      if (it != curated->end()) {
        user.affiliation = it->second;
        ++stats.curated;
        continue;
      }
    }
    if (std::optional<Affiliation> meta =
            metadata_affiliation(user.screen_name, user.description, keywords)) {
      user.affiliation = *meta;
      ++stats.metadata;
      continue;
    }
    auto tags_it = hashtags_by_user.find(id);
    const std::vector<std::string>& tags = tags_it == hashtags_by_user.end() ? kNoTags : tags_it->second;
    Affiliation aff = assign_affiliation(compute_leaning_ratios(tags, lexicon), threshold, mapping);
    user.affiliation = aff;
    if (aff == Affiliation::Unknown) ++stats.unknown;
    else ++stats.ratios;
  }
  return stats;
}

}  // namespace echoflow::lexicon
