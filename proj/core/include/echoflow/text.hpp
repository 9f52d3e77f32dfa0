#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace echoflow::text {

/// Decodes one UTF-8 codepoint starting at `i`, advancing `i` past it.
/// Malformed bytes decode as U+FFFD and advance by one.
char32_t decode_utf8(const std::string& s, std::size_t& i);

/// Word characters: ASCII alphanumerics plus letter blocks of the major
/// scripts (Latin extended, Greek, Cyrillic, Arabic, Hebrew, the Indic
/// scripts including Devanagari, Thai, CJK, Hangul). Everything else —
/// punctuation, emoji, symbols — separates tokens.
bool is_word_char(char32_t cp);

std::string ascii_lower(std::string s);

/// Tokenization pipeline: strip URLs (http/https/www…) and @handles,
/// split on non-word characters, ASCII-lowercase, drop stopwords.
/// Devanagari and other non-Latin words pass through unchanged.
std::vector<std::string> preprocess_text(const std::string& text,
                                         const std::set<std::string>& stopwords);

/// Tokenize only; no URL/handle stripping, no stopwords. Used for
/// n-gram statistics over user descriptions.
std::vector<std::string> tokenize(const std::string& text);

/// Hashtags appearing in the text: '#' followed by word characters,
/// returned lowercase without the '#'.
std::vector<std::string> extract_hashtags(const std::string& text);

/// term -> column index; terms sorted lexicographically so indices are
/// reproducible for a given corpus.
struct Vocabulary {
  std::map<std::string, int> index;
  std::vector<std::string> terms;

  int lookup(const std::string& term) const {
    auto it = index.find(term);
    return it == index.end() ? -1 : it->second;
  }
  std::size_t size() const { return terms.size(); }
};

/// Sparse count vector over a Vocabulary.
struct TermVector {
  std::map<int, double> counts;
  bool l2_normalized = false;

  double norm() const;
  void l2_normalize();
  bool empty() const { return counts.empty(); }
};

/// Builds the vocabulary from terms with document frequency >= min_df
/// and the per-document raw count vectors restricted to it.
struct VectorizedCorpus {
  Vocabulary vocabulary;
  std::vector<TermVector> vectors;
};
VectorizedCorpus vectorize_corpus(const std::vector<std::vector<std::string>>& docs,
                                  int min_df = 2);

/// Vector for one document against an existing vocabulary.
TermVector vectorize_doc(const std::vector<std::string>& doc, const Vocabulary& vocab);

double dot(const TermVector& a, const TermVector& b);

/// Cosine similarity; 0 when either vector is empty.
double cosine_similarity(const TermVector& a, const TermVector& b);

/// Squared Euclidean distance between a sparse vector and a dense
/// centroid, given the centroid's precomputed squared norm.
double squared_distance(const TermVector& v, const std::vector<double>& centroid,
                        double centroid_sq_norm);

/// Small built-in English stopword list; callers usually extend it from
/// a config file (one word per line, '#' comments).
std::set<std::string> default_stopwords();
std::set<std::string> load_stopwords(const std::string& path);

}  // namespace echoflow::text
