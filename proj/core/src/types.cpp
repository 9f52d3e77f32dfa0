#include "echoflow/types.hpp"

#include <stdexcept>

#include "echoflow/io_util.hpp"

namespace echoflow {

const char* to_string(SourceTag t) {
  switch (t) {
    case SourceTag::AppMyNt: return "app_mynt";
    case SourceTag::AppNaMo: return "app_namo";
    case SourceTag::Other: return "other";
  }
  return "other";
}

const char* to_string(Affiliation a) {
  switch (a) {
    case Affiliation::ProBJP: return "pro_bjp";
    case Affiliation::Other: return "other";
    case Affiliation::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Role r) {
  switch (r) {
    case Role::Seed: return "seed";
    case Role::Auxiliary: return "auxiliary";
    case Role::None: return "none";
  }
  return "none";
}

const char* to_string(HashtagLabel l) {
  switch (l) {
    case HashtagLabel::ProBJP: return "pro-bjp";
    case HashtagLabel::AntiBJP: return "anti-bjp";
    case HashtagLabel::ProCongress: return "pro-congress";
    case HashtagLabel::AntiCongress: return "anti-congress";
    case HashtagLabel::Neutral: return "neutral";
  }
  return "neutral";
}

const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Follow: return "follow";
    case GraphKind::Friends: return "friends";
    case GraphKind::Retweet: return "retweet";
  }
  return "follow";
}

std::optional<Affiliation> affiliation_from_string(const std::string& s) {
  if (s == "pro_bjp" || s == "pro-bjp" || s == "bjp") return Affiliation::ProBJP;
  if (s == "other" || s == "congress" || s == "inc") return Affiliation::Other;
  if (s == "unknown") return Affiliation::Unknown;
  return std::nullopt;
}

std::optional<HashtagLabel> hashtag_label_from_string(const std::string& s) {
  if (s == "pro-bjp") return HashtagLabel::ProBJP;
  if (s == "anti-bjp") return HashtagLabel::AntiBJP;
  if (s == "pro-congress") return HashtagLabel::ProCongress;
  if (s == "anti-congress") return HashtagLabel::AntiCongress;
  if (s == "neutral") return HashtagLabel::Neutral;
  return std::nullopt;
}

std::optional<GraphKind> graph_kind_from_string(const std::string& s) {
  if (s == "follow") return GraphKind::Follow;
  if (s == "friends") return GraphKind::Friends;
  if (s == "retweet") return GraphKind::Retweet;
  return std::nullopt;
}

std::map<std::string, std::vector<std::size_t>> DatasetBundle::tweet_index_by_user() const {
  std::map<std::string, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    index[tweets[i].user_id].push_back(i);
  }
  return index;
}

HashtagLexicon load_lexicon(const std::string& path) {
  std::map<std::string, HashtagLabel> labels;
  auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = io::split_csv_line(lines[i]);
    if (i == 0 && fields.size() >= 2 && fields[0] == "hashtag") continue;  // header
    if (fields.size() < 2) {
      throw std::runtime_error(path + ": malformed lexicon line " + std::to_string(i + 1));
    }
    auto label = hashtag_label_from_string(fields[1]);
    if (!label) {
      throw std::runtime_error(path + ": unknown label '" + fields[1] + "' on line " +
                               std::to_string(i + 1));
    }
    labels[fields[0]] = *label;
  }
  return HashtagLexicon(std::move(labels));
}

}  // namespace echoflow
