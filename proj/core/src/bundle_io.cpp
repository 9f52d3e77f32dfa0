#include "echoflow/bundle_io.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace echoflow::bundle_io {
namespace {

constexpr std::uint32_t kMagic = 0x4e424645;  // "EFBN"
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void opt_str(const std::optional<std::string>& s) {
    u8(s ? 1 : 0);
    if (s) str(*s);
  }
  void str_list(const std::vector<std::string>& v) {
    u64(v.size());
    for (const auto& s : v) str(s);
  }
  void finish() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failure while saving bundle");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open for reading: " + path);
  }
  std::uint8_t u8() {
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) fail();
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::string str() {
    std::uint64_t n = u64();
    if (n > (1ull << 32)) fail();  // corrupt length guard
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::uint64_t>(in_.gcount()) != n) fail();
    return s;
  }
  std::optional<std::string> opt_str() {
    if (u8() == 0) return std::nullopt;
    return str();
  }
  std::vector<std::string> str_list() {
    std::uint64_t n = u64();
    if (n > (1ull << 32)) fail();
    std::vector<std::string> v;
    v.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) v.push_back(str());
    return v;
  }

 private:
  [[noreturn]] void fail() { throw std::runtime_error("truncated or corrupt bundle file"); }
  std::ifstream in_;
};

}  // namespace

void save_bundle(const DatasetBundle& bundle, const std::string& path) {
  Writer w(path);
  w.u32(kMagic);
  w.u32(kVersion);

  w.u64(bundle.tweets.size());
  for (const TweetRecord& t : bundle.tweets) {
    w.str(t.tweet_id);
    w.str(t.user_id);
    w.i64(t.timestamp);
    w.str(t.text);
    w.str_list(t.hashtags);
    w.u8(static_cast<std::uint8_t>(t.source_tag));
    w.opt_str(t.retweet_of);
    w.i64(t.like_count);
    w.i64(t.retweet_count);
    w.str_list(t.image_refs);
    w.opt_str(t.place_name);
    w.u8(t.geo_enabled ? 1 : 0);
  }

  w.u64(bundle.users.size());
  for (const auto& [id, u] : bundle.users) {
    w.str(u.user_id);
    w.str(u.screen_name);
    w.str(u.description);
    w.i64(u.followers_count);
    w.opt_str(u.location_raw);
    w.opt_str(u.state);
    w.u8(static_cast<std::uint8_t>(u.affiliation));
    w.u8(static_cast<std::uint8_t>(u.role));
  }

  auto edges = [&w](const std::vector<UserEdge>& list) {
    w.u64(list.size());
    for (const auto& [a, b] : list) {
      w.str(a);
      w.str(b);
    }
  };
  edges(bundle.follow_edges);
  edges(bundle.retweet_edges);
  w.i64(bundle.time_window.first);
  w.i64(bundle.time_window.second);
  w.finish();
}

DatasetBundle load_bundle(const std::string& path) {
  Reader r(path);
  if (r.u32() != kMagic) throw std::runtime_error("not a bundle file: " + path);
  std::uint32_t version = r.u32();
  if (version != kVersion)
    throw std::runtime_error("unsupported bundle version " + std::to_string(version));

  DatasetBundle b;
  std::uint64_t n_tweets = r.u64();
  for (std::uint64_t i = 0; i < n_tweets; ++i) {
    TweetRecord t;
    t.tweet_id = r.str();
    t.user_id = r.str();
    t.timestamp = r.i64();
    t.text = r.str();
    t.hashtags = r.str_list();
    std::uint8_t tag = r.u8();
    if (tag > 2) throw std::runtime_error("corrupt source tag in bundle");
    t.source_tag = static_cast<SourceTag>(tag);
    t.retweet_of = r.opt_str();
    t.like_count = r.i64();
    t.retweet_count = r.i64();
    t.image_refs = r.str_list();
    t.place_name = r.opt_str();
    t.geo_enabled = r.u8() != 0;
    b.tweets.push_back(std::move(t));
  }

  std::uint64_t n_users = r.u64();
  for (std::uint64_t i = 0; i < n_users; ++i) {
    UserProfile u;
    u.user_id = r.str();
    u.screen_name = r.str();
    u.description = r.str();
    u.followers_count = r.i64();
    u.location_raw = r.opt_str();
    u.state = r.opt_str();
    std::uint8_t aff = r.u8();
    if (aff > 2) throw std::runtime_error("corrupt affiliation in bundle");
    u.affiliation = static_cast<Affiliation>(aff);
    std::uint8_t role = r.u8();
    if (role > 2) throw std::runtime_error("corrupt role in bundle");
    u.role = static_cast<Role>(role);
    b.users[u.user_id] = std::move(u);
  }

  auto edges = [&r](std::vector<UserEdge>& list) {
    std::uint64_t n = r.u64();
    list.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string a = r.str();
      std::string bb = r.str();
      list.emplace_back(std::move(a), std::move(bb));
    }
  };
  edges(b.follow_edges);
  edges(b.retweet_edges);
  b.time_window.first = r.i64();
  b.time_window.second = r.i64();
  return b;
}

}  // namespace echoflow::bundle_io
