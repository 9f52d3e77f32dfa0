#include "echoflow/text.hpp"

#include <cctype>
#include <cmath>

#include "echoflow/io_util.hpp"

namespace echoflow::text {

char32_t decode_utf8(const std::string& s, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((c & 0xE0) == 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    extra = 3;
    cp = c & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + extra >= s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += extra + 1;
  return cp;
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  // Punctuation living inside letter blocks.
  switch (cp) {
    case 0x00D7:  // multiplication sign
    case 0x00F7:  // division sign
    case 0x060C:  // arabic comma
    case 0x061B:  // arabic semicolon
    case 0x061F:  // arabic question mark
    case 0x0964:  // devanagari danda
    case 0x0965:  // devanagari double danda
      return false;
    default:
      break;
  }
  if (cp >= 0x00C0 && cp <= 0x024F) return true;  // latin supplements
  if (cp >= 0x0370 && cp <= 0x04FF) return true;  // greek, cyrillic
  if (cp >= 0x0530 && cp <= 0x06FF) return true;  // armenian, hebrew, arabic
  if (cp >= 0x0900 && cp <= 0x0DFF) return true;  // indic scripts
  if (cp >= 0x0E00 && cp <= 0x0E7F) return true;  // thai
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;  // latin extended additional
  if (cp >= 0x3040 && cp <= 0x30FF) return true;  // kana
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;  // cjk
  if (cp >= 0xAC00 && cp <= 0xD7AF) return true;  // hangul
  return false;
}

std::string ascii_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

namespace {

bool starts_with_ci(const std::string& s, std::size_t pos, const char* prefix) {
  for (std::size_t k = 0; prefix[k]; ++k) {
    if (pos + k >= s.size()) return false;
    char a = s[pos + k];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (a != prefix[k]) return false;
  }
  return true;
}

bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Replaces URLs and @handles with spaces, in place on a copy.
std::string blank_urls_and_handles(std::string s) {
  std::size_t i = 0;
  while (i < s.size()) {
    bool at_token_start = (i == 0) || is_space_byte(s[i - 1]);
    if ((starts_with_ci(s, i, "http://") || starts_with_ci(s, i, "https://") ||
         (at_token_start && starts_with_ci(s, i, "www.")))) {
      while (i < s.size() && !is_space_byte(s[i])) s[i++] = ' ';
    } else if (s[i] == '@') {
      s[i++] = ' ';
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        s[i++] = ' ';
      }
    } else {
      ++i;
    }
  }
  return s;
}

std::vector<std::string> tokenize_word_runs(const std::string& s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  std::string current;
  while (i < s.size()) {
    std::size_t start = i;
    char32_t cp = decode_utf8(s, i);
    if (is_word_char(cp)) {
      current.append(s, start, i - start);
    } else if (!current.empty()) {
      tokens.push_back(ascii_lower(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(ascii_lower(current));
  return tokens;
}

}  // namespace

std::vector<std::string> preprocess_text(const std::string& text,
                                         const std::set<std::string>& stopwords) {
  std::vector<std::string> tokens = tokenize_word_runs(blank_urls_and_handles(text));
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (auto& t : tokens) {
    if (!stopwords.count(t)) kept.push_back(std::move(t));
  }
  return kept;
}

std::vector<std::string> tokenize(const std::string& text) {
  return tokenize_word_runs(text);
}

std::vector<std::string> extract_hashtags(const std::string& text) {
  std::vector<std::string> tags;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '#') {
      ++i;
      std::string tag;
      while (i < text.size()) {
        std::size_t start = i;
        std::size_t j = i;
        char32_t cp = decode_utf8(text, j);
        if (!is_word_char(cp)) break;
        tag.append(text, start, j - start);
        i = j;
      }
      if (!tag.empty()) tags.push_back(ascii_lower(tag));
    } else {
      ++i;
    }
  }
  return tags;
}

double TermVector::norm() const {
  double sq = 0.0;
  for (const auto& [idx, c] : counts) sq += c * c;
  return std::sqrt(sq);
}

void TermVector::l2_normalize() {
  double n = norm();
  if (n <= 0.0) return;
  for (auto& [idx, c] : counts) c /= n;
  l2_normalized = true;
}

VectorizedCorpus vectorize_corpus(const std::vector<std::vector<std::string>>& docs,
                                  int min_df) {
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const auto& t : seen) df[t]++;
  }
  VectorizedCorpus out;
  for (const auto& [term, count] : df) {
    if (count >= min_df) {
      out.vocabulary.index[term] = static_cast<int>(out.vocabulary.terms.size());
      out.vocabulary.terms.push_back(term);
    }
  }
  out.vectors.reserve(docs.size());
  for (const auto& doc : docs) {
    out.vectors.push_back(vectorize_doc(doc, out.vocabulary));
  }
  return out;
}

TermVector vectorize_doc(const std::vector<std::string>& doc, const Vocabulary& vocab) {
  TermVector v;
  for (const auto& t : doc) {
    int idx = vocab.lookup(t);
    if (idx >= 0) v.counts[idx] += 1.0;
  }
  return v;
}

double dot(const TermVector& a, const TermVector& b) {
  const TermVector& small = a.counts.size() <= b.counts.size() ? a : b;
  const TermVector& large = a.counts.size() <= b.counts.size() ? b : a;
  double s = 0.0;
  for (const auto& [idx, c] : small.counts) {
    auto it = large.counts.find(idx);
    if (it != large.counts.end()) s += c * it->second;
  }
  return s;
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
  double na = a.norm();
  double nb = b.norm();
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

double squared_distance(const TermVector& v, const std::vector<double>& centroid,
                        double centroid_sq_norm) {
  double d = centroid_sq_norm;
  for (const auto& [idx, c] : v.counts) {
    if (idx >= 0 && static_cast<std::size_t>(idx) < centroid.size()) {
      double ci = centroid[idx];
      d += c * c - 2.0 * c * ci;
    } else {
      d += c * c;
    }
  }
  // Guard against tiny negative residue from cancellation.
  return d < 0.0 ? 0.0 : d;
}

std::set<std::string> default_stopwords() {
  static const char* kWords[] = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",   "but",  "by",
      "for",  "from", "had",  "has",  "have", "he",   "her",  "his",  "i",
      "in",   "is",   "it",   "its",  "of",   "on",   "or",   "our",  "she",
      "that", "the",  "their", "they", "this", "to",   "was",  "we",   "were",
      "will", "with", "you",  "your"};
  std::set<std::string> s;
  for (const char* w : kWords) s.insert(w);
  return s;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::set<std::string> s;
  for (const auto& line : io::read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    s.insert(ascii_lower(line));
  }
  return s;
}

}  // namespace echoflow::text
