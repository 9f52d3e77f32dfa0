#include "echoflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "echoflow/hawkes.hpp"
#include "echoflow/image.hpp"
#include "echoflow/io_util.hpp"

namespace echoflow::synth {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::int64_t kEpochBase = 1546300800;  // 2019-01-01T00:00:00Z

std::string uid(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%05zu", i);
  return buf;
}

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

/// Planted per-user hashtag multiset and the affiliation it forces.
struct PlantedUser {
  long long ones = 0;          // score-1 hashtags
  long long zeros = 0;         // score-0 hashtags
  long long unknown_tags = 0;  // absent from the lexicon
  long long neutral_tags = 0;
  std::string expected_affiliation;  // pro_bjp | other | unknown
  std::vector<std::string> hashtags;
};

/// Affiliation the ratio stage must produce, derived with plain integer
/// arithmetic (independent of the classifier under test).
std::string expected_from_counts(long long ones, long long zeros, long long unknown_tags) {
  long long annotated = ones + zeros;
  long long not_neutral = annotated + unknown_tags;
  if (annotated == 0 || not_neutral == 0) return "unknown";
  // percent_used < 1/10  <=>  10*annotated < not_neutral
  if (10 * annotated < not_neutral) return "unknown";
  long long op = (ones + 1) / 2, oa = ones / 2;        // pro-bjp, anti-congress
  long long zb = (zeros + 1) / 2, zp = zeros / 2;      // anti-bjp, pro-congress
  long long best = std::max({op, oa, zb, zp});
  bool pro_pole = op == best || oa == best;
  bool other_pole = zb == best || zp == best;
  if (pro_pole && other_pole) return "unknown";
  return pro_pole ? "pro_bjp" : "other";
}

PlantedUser plant_user(std::size_t i, std::size_t n_blocks_users) {
  PlantedUser u;
  long long n = 4 + static_cast<long long>((i * 7) % 9);  // 4..12 scored tags

  int pattern;
  if (i <= 70 && i <= n_blocks_users) pattern = (i % 2) ? 4 : 3;           // block 0: high
  else if (i <= 140 && i <= n_blocks_users) pattern = (i % 2) ? 0 : 1;     // block 1: low
  else if (i <= n_blocks_users) pattern = 2;                               // block 2: mixed
  else pattern = static_cast<int>(i % 5);
  static const double targets[5] = {0.0, 0.25, 0.5, 0.75, 1.0};

  bool low_percent = i > 900 && i <= 1000 && i > n_blocks_users;
  if (low_percent) {
    // A single scored tag buried under unlabeled ones: percent_used
    // 1/16 < 1/10, so the ratio stage must say unknown.
    u.ones = 1;
    u.zeros = 0;
    u.unknown_tags = 15;
  } else {
    u.ones = std::llround(targets[pattern] * static_cast<double>(n));
    u.zeros = n - u.ones;
    if (i % 4 == 0) {
      u.unknown_tags = 2;
      u.neutral_tags = 1;
    }
  }
  u.expected_affiliation = expected_from_counts(u.ones, u.zeros, u.unknown_tags);

  char buf[32];
  long long op = (u.ones + 1) / 2;
  for (long long j = 0; j < u.ones; ++j) {
    std::snprintf(buf, sizeof buf, "%s_%02lld", j < op ? "probjp" : "anticong", (i + j) % 20);
    u.hashtags.push_back(buf);
  }
  long long zb = (u.zeros + 1) / 2;
  for (long long j = 0; j < u.zeros; ++j) {
    std::snprintf(buf, sizeof buf, "%s_%02lld", j < zb ? "antibjp" : "procong", (i + j) % 20);
    u.hashtags.push_back(buf);
  }
  for (long long j = 0; j < u.unknown_tags; ++j) {
    std::snprintf(buf, sizeof buf, "misc_%02lld", (i + j) % 30);
    u.hashtags.push_back(buf);
  }
  for (long long j = 0; j < u.neutral_tags; ++j) {
    std::snprintf(buf, sizeof buf, "neutral_%02lld", (i + j) % 10);
    u.hashtags.push_back(buf);
  }
  return u;
}

const std::vector<std::string>& tweet_templates() {
  static const std::vector<std::string> t = {
      "digital outreach program connects citizens directly across every village sector%zu",
      "new highway project inaugurated today linking northern districts milestone sector%zu",
      "clean water initiative reaches thousand more households this quarter sector%zu",
      "skill training centers open doors for young graduates nationwide sector%zu",
      "solar power capacity doubles in western region this year sector%zu",
      "farmers receive direct benefit transfer ahead of sowing season sector%zu",
      "railway modernization drive adds express routes between major cities sector%zu",
      "housing scheme hands over keys to first thousand families sector%zu",
      "startup registrations hit record numbers in tier two towns sector%zu",
      "vaccination coverage crosses ninety percent in rural districts sector%zu",
      "broadband fiber rollout reaches remote mountain settlements finally sector%zu",
      "crop insurance claims settled within fortnight for flood hit belt sector%zu",
  };
  return t;
}

std::string format_template(const std::string& tpl, std::size_t n) {
  char buf[256];
  std::snprintf(buf, sizeof buf, tpl.c_str(), n);
  return buf;
}

const std::vector<std::string>& seed_descriptions() {
  static const std::vector<std::string> d = {
      "development agenda growth jobs economy nation first",
      "growth jobs economy infrastructure vision nation first",
      "development agenda digital india growth jobs",
      "nation first development agenda growth economy",
  };
  return d;
}

const std::vector<std::string>& aux_descriptions() {
  static const std::vector<std::string> d = {
      "farmers rights welfare protest voice of people",
      "welfare protest social justice voice of people",
      "farmers rights social justice welfare equality",
      "voice of people farmers rights welfare equality",
  };
  return d;
}

const std::vector<std::string>& neutral_descriptions() {
  static const std::vector<std::string> d = {
      "cricket fan and foodie",
      "love travel and photography",
      "engineer by day dreamer by night",
      "music movies and chai",
  };
  return d;
}

struct LocationPlan {
  std::string location;
  std::string expectation;  // state name, "removed", or "unresolved"
};

LocationPlan location_for(std::size_t i) {
  switch (i % 10) {
    case 0: return {"New Delhi", "Delhi"};
    case 1: return {"Mumbai", "Maharashtra"};
    case 2: return {"Lucknow", "Uttar Pradesh"};
    case 3: return {"Bengaluru", "Karnataka"};
    case 4: return {"Chennai", "Tamil Nadu"};
    case 5: return {"Patna", "Bihar"};
    case 6: return {"Mumbai, Pune", "removed"};
    case 7: return {"London", "removed"};
    case 8: return {"", "West Bengal"};  // resolved via a geo-tagged tweet place
    default: return {"Jaipur", "Rajasthan"};
  }
}

/// Blocky low-frequency pattern: coarse random grid upscaled by nearest
/// neighbor, plus a faint texture. Distinct draws land far apart in
/// pHash space.
image::Image make_pattern(int size, std::mt19937_64& rng) {
  constexpr int kGrid = 6;
  std::array<std::uint8_t, kGrid * kGrid> grid{};
  for (auto& g : grid) g = static_cast<std::uint8_t>(next_below(rng, 256));
  image::Image img;
  img.width = size;
  img.height = size;
  img.channels = 1;
  img.pixels.resize(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      int gx = x * kGrid / size, gy = y * kGrid / size;
      int v = grid[gy * kGrid + gx] + ((x * 7 + y * 13) % 9) - 4;
      img.pixels[static_cast<std::size_t>(y) * size + x] =
          static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return img;
}

image::Image perturb(const image::Image& base, int brightness, std::uint64_t salt) {
  image::Image out = base;
  std::mt19937_64 rng(salt);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    int v = out.pixels[i] + brightness;
    if (i % 7 == 0) v += static_cast<int>(next_below(rng, 5)) - 2;
    out.pixels[i] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
  }
  return out;
}

ordered_json tweet_json(const std::string& id, const std::string& user, std::int64_t ts,
                        const std::string& text, const std::vector<std::string>& hashtags,
                        long long likes, long long rts) {
  ordered_json j;
  j["id_str"] = id;
  j["user"] = ordered_json{{"id_str", user}};
  j["timestamp"] = ts;
  j["text"] = text;
  ordered_json tags = ordered_json::array();
  for (const std::string& h : hashtags) tags.push_back(ordered_json{{"text", h}});
  j["entities"] = ordered_json{{"hashtags", tags}, {"media", ordered_json::array()}};
  j["favorite_count"] = likes;
  j["retweet_count"] = rts;
  return j;
}

}  // namespace

SynthOptions SynthOptions::from_file(const std::string& path) {
  SynthOptions o;
  nlohmann::json doc = nlohmann::json::parse(io::read_file(path));
  if (!doc.is_object()) throw std::runtime_error("synth spec must be a JSON object");
  if (doc.contains("seed")) o.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("polarity_users")) o.polarity_users = doc["polarity_users"].get<std::size_t>();
  if (doc.contains("block_sizes")) o.block_sizes = doc["block_sizes"].get<std::vector<std::size_t>>();
  if (doc.contains("block_p_in")) o.block_p_in = doc["block_p_in"].get<double>();
  if (doc.contains("block_p_out")) o.block_p_out = doc["block_p_out"].get<double>();
  if (doc.contains("image_groups")) o.image_groups = doc["image_groups"].get<std::size_t>();
  if (doc.contains("image_variants")) o.image_variants = doc["image_variants"].get<std::size_t>();
  if (doc.contains("noise_images")) o.noise_images = doc["noise_images"].get<std::size_t>();
  if (doc.contains("image_size")) o.image_size = doc["image_size"].get<int>();
  if (doc.contains("hawkes_images")) o.hawkes_images = doc["hawkes_images"].get<std::size_t>();
  if (doc.contains("hawkes_T")) o.hawkes_T = doc["hawkes_T"].get<std::size_t>();
  if (doc.contains("delta_t_max")) o.delta_t_max = doc["delta_t_max"].get<int>();
  if (doc.contains("extra_users")) o.extra_users = doc["extra_users"].get<std::size_t>();
  return o;
}

void generate(const std::string& out_dir, const SynthOptions& opt) {
  if (opt.polarity_users < 1 || opt.block_sizes.empty())
    throw std::invalid_argument("synth: need at least one user and one block");

  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "images");
  auto path_of = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  std::size_t n_block_users = 0;
  for (std::size_t b : opt.block_sizes) n_block_users += b;
  if (n_block_users > opt.polarity_users)
    throw std::invalid_argument("synth: blocks cannot exceed polarity users");
  const std::size_t n_users = opt.polarity_users + opt.extra_users;
  const std::size_t n_seeds = 50, n_aux = 30;

  ordered_json manifest;
  manifest["seed"] = opt.seed;

  // ---- lexicon ----
  {
    std::string csv = "hashtag,label\n";
    char buf[48];
    for (int j = 0; j < 20; ++j) {
      std::snprintf(buf, sizeof buf, "probjp_%02d,pro-bjp\n", j);
      csv += buf;
      std::snprintf(buf, sizeof buf, "antibjp_%02d,anti-bjp\n", j);
      csv += buf;
      std::snprintf(buf, sizeof buf, "procong_%02d,pro-congress\n", j);
      csv += buf;
      std::snprintf(buf, sizeof buf, "anticong_%02d,anti-congress\n", j);
      csv += buf;
    }
    for (int j = 0; j < 10; ++j) {
      std::snprintf(buf, sizeof buf, "neutral_%02d,neutral\n", j);
      csv += buf;
    }
    io::write_file(path_of("lexicon.csv"), csv);
  }

  // ---- users ----
  std::vector<PlantedUser> planted(n_users + 1);
  ordered_json polarity_truth = ordered_json::object();
  ordered_json affiliation_truth = ordered_json::object();
  {
    std::string jsonl;
    for (std::size_t i = 1; i <= n_users; ++i) {
      ordered_json j;
      std::string id = uid(i);
      j["id_str"] = id;
      std::string screen = "user" + std::to_string(10000 + i);
      std::string desc;
      std::string expected;

      if (i <= opt.polarity_users) {
        planted[i] = plant_user(i, n_block_users);
        expected = planted[i].expected_affiliation;
        if (i <= n_seeds) desc = seed_descriptions()[i % seed_descriptions().size()];
        else if (i <= n_seeds + n_aux) desc = aux_descriptions()[i % aux_descriptions().size()];
        else desc = neutral_descriptions()[i % neutral_descriptions().size()];
        polarity_truth[id] = ordered_json{{"ones", planted[i].ones},
                                          {"zeros", planted[i].zeros}};
      } else {
        std::size_t e = i - opt.polarity_users;  // 1-based extra index
        desc = neutral_descriptions()[i % neutral_descriptions().size()];
        switch (e) {
          case 1: screen = "Krish_BJP"; expected = "pro_bjp"; break;
          case 2: screen = "Shivam_INC"; expected = "other"; break;
          case 3: screen = "modi_vs_congress"; expected = "unknown"; break;
          case 4:
            desc = "proud supporter of narendra modi and the development agenda";
            expected = "pro_bjp";
            break;
          case 5:
            desc = "rahul gandhi inspires our youth movement forward";
            expected = "other";
            break;
          case 6: expected = "pro_bjp"; break;  // curated below
          case 7: expected = "other";   break;  // curated below
          case 8: screen = "INC_fan_" + std::to_string(i); expected = "pro_bjp"; break;
          default: expected = "unknown"; break;
        }
      }
      affiliation_truth[id] = expected;

      j["screen_name"] = screen;
      j["description"] = desc;
      // A spread of audience sizes; every 13th profile has none.
      j["followers_count"] = (i % 13 == 0) ? 0 : static_cast<long long>((i * 137) % 50000 + 10);
      j["location"] = location_for(i).location;
      j["geo_enabled"] = i % 10 == 8;
      jsonl += j.dump();
      jsonl += '\n';
    }
    io::write_file(path_of("users.jsonl"), jsonl);
  }
  manifest["users"] = n_users;
  manifest["planted_polarity"] = polarity_truth;
  manifest["expected_affiliations"] = affiliation_truth;

  // ---- curated list ----
  io::write_file(path_of("curated.csv"),
                 "user_id,affiliation\n" + uid(opt.polarity_users + 6) + ",pro_bjp\n" +
                     uid(opt.polarity_users + 7) + ",other\n" + uid(opt.polarity_users + 8) +
                     ",pro_bjp\n");

  // ---- keywords config (defaults spelled out) ----
  io::write_file(path_of("keywords.conf"),
                 "[bjp_screen]\nbjp\nmodi\nnamo\n\n[congress_screen]\ncongress\ninc\ncong\n\n"
                 "[bjp_description]\nbjp\nmodi\nnamo\nnarendra modi\nbhartiya janta party\n"
                 "amit shah\namitshah\nnarendramodi\nbjp4india\n\n"
                 "[congress_description]\nrahul gandhi\ncongress\ninc\npriyanka gandhi\nraga\n"
                 "shashi tharoor\n");

  // ---- gazetteer ----
  io::write_file(path_of("city_to_state.csv"),
                 "city,state\nnew delhi,Delhi\ndelhi,Delhi\nmumbai,Maharashtra\n"
                 "pune,Maharashtra\nlucknow,Uttar Pradesh\nkanpur,Uttar Pradesh\n"
                 "bengaluru,Karnataka\nchennai,Tamil Nadu\npatna,Bihar\njaipur,Rajasthan\n"
                 "kolkata,West Bengal\nahmedabad,Gujarat\n");
  io::write_file(path_of("foreign_places.txt"), "london\nnew york\ndubai\nkarachi\nkathmandu\n");
  io::write_file(path_of("stopwords.txt"),
                 "# extra corpus stopwords\nrt\namp\n");

  // ---- images ----
  std::mt19937_64 img_rng(opt.seed * 7919 + 17);
  std::vector<std::uint64_t> base_hashes;
  std::vector<std::string> all_image_ids;
  ordered_json image_groups = ordered_json::array();
  {
    std::vector<std::uint64_t> member_hashes;
    for (std::size_t g = 0; g < opt.image_groups; ++g) {
      image::Image base;
      std::uint64_t base_hash = 0;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 500) throw std::runtime_error("synth: cannot place distinct image group");
        base = make_pattern(opt.image_size, img_rng);
        base_hash = image::phash64(base);
        bool ok = true;
        for (std::uint64_t h : base_hashes)
          if (image::hamming(h, base_hash) < 26) {
            ok = false;
            break;
          }
        if (ok) break;
      }
      base_hashes.push_back(base_hash);

      ordered_json group;
      char name[48];
      std::snprintf(name, sizeof name, "img_g%02zu_v0", g);
      group["members"] = ordered_json::array({name});
      all_image_ids.push_back(name);
      image::save_netpbm(base, path_of("images/" + std::string(name) + ".pgm"));
      member_hashes.push_back(base_hash);

      static const int brightness[] = {6, -6, 3, -3, 9, -9};
      for (std::size_t v = 1; v < opt.image_variants; ++v) {
        image::Image variant;
        std::uint64_t vh = 0;
        for (int attempt = 0;; ++attempt) {
          if (attempt > 500) throw std::runtime_error("synth: cannot perturb image within budget");
          variant = perturb(base, brightness[(v - 1) % 6],
                            opt.seed * 131071 + g * 1009 + v * 101 + attempt);
          vh = image::phash64(variant);
          if (image::hamming(vh, base_hash) <= 7) break;
        }
        std::snprintf(name, sizeof name, "img_g%02zu_v%zu", g, v);
        group["members"].push_back(name);
        all_image_ids.push_back(name);
        image::save_netpbm(variant, path_of("images/" + std::string(name) + ".pgm"));
        member_hashes.push_back(vh);
      }
      group["base_hash"] = image::hash_to_hex(base_hash);
      image_groups.push_back(group);
    }

    ordered_json noise_list = ordered_json::array();
    for (std::size_t nz = 0; nz < opt.noise_images; ++nz) {
      image::Image img;
      std::uint64_t h = 0;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 500) throw std::runtime_error("synth: cannot place noise image");
        img = make_pattern(opt.image_size, img_rng);
        h = image::phash64(img);
        bool ok = true;
        for (std::uint64_t mh : member_hashes)
          if (image::hamming(mh, h) < 12) {
            ok = false;
            break;
          }
        if (ok) break;
      }
      member_hashes.push_back(h);
      char name[48];
      std::snprintf(name, sizeof name, "img_noise%02zu", nz);
      noise_list.push_back(name);
      image::save_netpbm(img, path_of("images/" + std::string(name) + ".pgm"));
    }
    manifest["image_groups"] = image_groups;
    manifest["noise_images"] = noise_list;
  }

  // ---- tweets ----
  std::string tweets_jsonl;
  std::vector<std::pair<std::string, std::string>> retweet_edges_rows;
  ordered_json copy_map = ordered_json::object();
  std::vector<std::string> app_tweet_ids;
  std::vector<std::string> app_tweet_texts;
  std::vector<std::int64_t> app_tweet_times;
  std::vector<std::size_t> app_tweet_group;  // image group or SIZE_MAX
  std::size_t expected_app_first = 0, expected_other_first = 0;
  {
    char idbuf[32];
    // Hashtag carriers, one per polarity user.
    for (std::size_t i = 1; i <= opt.polarity_users; ++i) {
      std::snprintf(idbuf, sizeof idbuf, "tw_h_%05zu", i);
      std::string text = "daily thoughts update number " + std::to_string(i);
      for (const std::string& h : planted[i].hashtags) text += " #" + h;
      ordered_json j = tweet_json(idbuf, uid(i), kEpochBase + static_cast<std::int64_t>(i) * 60,
                                  text, planted[i].hashtags,
                                  static_cast<long long>(i % 50), static_cast<long long>(i % 20));
      if (i % 10 == 8) {
        j["place"] = ordered_json{{"full_name", "Kolkata"}};
        j["user"]["geo_enabled"] = true;
      }
      tweets_jsonl += j.dump();
      tweets_jsonl += '\n';
    }

    // App-tagged tweets from the seed users.
    const auto& templates = tweet_templates();
    for (std::size_t s = 1; s <= n_seeds; ++s) {
      for (int rep = 0; rep < 2; ++rep) {
        std::snprintf(idbuf, sizeof idbuf, "tw_a_%03zu_%d", s, rep);
        std::string body = format_template(templates[(s * 2 + rep) % templates.size()], s);
        std::string tag = s <= 40 ? " via NaMo App" : " via MyNt App";
        std::int64_t ts = kEpochBase + 100000 + static_cast<std::int64_t>(s * 2 + rep) * 180;
        ordered_json j = tweet_json(idbuf, uid(s), ts, body + tag, {},
                                    static_cast<long long>((s * 31) % 400),
                                    static_cast<long long>((s * 11) % 150));
        std::size_t group = SIZE_MAX;
        if (rep == 0 && s <= opt.image_groups) {
          group = s - 1;
          char img[32];
          std::snprintf(img, sizeof img, "img_g%02zu_v0", group);
          j["entities"]["media"].push_back(ordered_json{{"id_str", img}});
        }
        app_tweet_ids.push_back(idbuf);
        app_tweet_texts.push_back(body);
        app_tweet_times.push_back(ts);
        app_tweet_group.push_back(group);
        tweets_jsonl += j.dump();
        tweets_jsonl += '\n';
      }
    }

    // Non-app copies by auxiliary users: same body, no client tag.
    for (std::size_t a = 1; a <= n_aux; ++a) {
      std::size_t src = (a - 1) * 2 % app_tweet_ids.size();  // rep-0 tweet of seed a
      std::snprintf(idbuf, sizeof idbuf, "tw_m_%03zu", a);
      std::int64_t offset = (a % 3 == 0) ? -600 : 600;
      if (offset > 0) ++expected_app_first;
      else ++expected_other_first;
      std::int64_t ts = app_tweet_times[src] + offset;
      ordered_json j = tweet_json(idbuf, uid(n_seeds + a), ts, app_tweet_texts[src], {},
                                  static_cast<long long>((a * 17) % 300),
                                  static_cast<long long>((a * 7) % 90));
      if (app_tweet_group[src] != SIZE_MAX) {
        char img[32];
        std::snprintf(img, sizeof img, "img_g%02zu_v%zu", app_tweet_group[src],
                      1 + (a % (opt.image_variants - 1)));
        j["entities"]["media"].push_back(ordered_json{{"id_str", img}});
      }
      copy_map[idbuf] = app_tweet_ids[src];
      tweets_jsonl += j.dump();
      tweets_jsonl += '\n';
    }

    // Duplicate texts; earliest instance wins dedup.
    for (int d = 1; d <= 3; ++d) {
      std::snprintf(idbuf, sizeof idbuf, "tw_d_%d", d);
      ordered_json j = tweet_json(
          idbuf, uid(80 + d), kEpochBase + 200000 + (d - 1) * 600,
          "identical duplicate content spreading across network quickly", {}, 5, 2);
      tweets_jsonl += j.dump();
      tweets_jsonl += '\n';
    }

    // Retweets of app tweets (short texts, excluded from matching).
    for (std::size_t r = 1; r <= 40; ++r) {
      std::snprintf(idbuf, sizeof idbuf, "tw_r_%03zu", r);
      std::size_t src = (r * 3) % app_tweet_ids.size();
      std::string retweeter = uid(n_seeds + 1 + (r % n_aux));
      ordered_json j = tweet_json(idbuf, retweeter,
                                  kEpochBase + 300000 + static_cast<std::int64_t>(r) * 120,
                                  "sharing this again", {}, 1, 0);
      j["retweeted_status"] = ordered_json{{"id_str", app_tweet_ids[src]}};
      tweets_jsonl += j.dump();
      tweets_jsonl += '\n';
      // Row direction: retweeter retweeted the seed author.
      std::string seed_author = uid((src / 2) + 1);
      if (retweeter != seed_author) retweet_edges_rows.emplace_back(retweeter, seed_author);
    }

    // Too short for the matcher's token filter.
    for (int s = 0; s < 8; ++s) {
      std::snprintf(idbuf, sizeof idbuf, "tw_s_%02d", s);
      ordered_json j = tweet_json(idbuf, uid(100 + s),
                                  kEpochBase + 400000 + s * 60, "ok great day", {}, 0, 0);
      tweets_jsonl += j.dump();
      tweets_jsonl += '\n';
    }
    io::write_file(path_of("tweets.jsonl"), tweets_jsonl);
  }
  manifest["app_tweets"] = app_tweet_ids.size();
  manifest["aux_copy_map"] = copy_map;
  manifest["duplicate_text_group"] = ordered_json::array({"tw_d_1", "tw_d_2", "tw_d_3"});
  // First-poster split among the planted exact-copy pairs only; the
  // full pair mapping also assigns near-copies to unpaired app posts.
  manifest["expected_copy_app_first"] = expected_app_first;
  manifest["expected_copy_other_first"] = expected_other_first;

  // ---- follow edges ----
  ordered_json block_of = ordered_json::object();
  {
    std::mt19937_64 rng(opt.seed * 31 + 5);
    std::vector<std::size_t> block_index(n_block_users + 1, 0);
    std::size_t start = 1;
    for (std::size_t b = 0; b < opt.block_sizes.size(); ++b) {
      for (std::size_t i = start; i < start + opt.block_sizes[b]; ++i) block_index[i] = b;
      start += opt.block_sizes[b];
    }
    for (std::size_t i = 1; i <= n_block_users; ++i) block_of[uid(i)] = block_index[i];

    std::string csv = "from_id,to_id\n";
    for (std::size_t i = 1; i <= n_block_users; ++i) {
      for (std::size_t j = i + 1; j <= n_block_users; ++j) {
        double p = block_index[i] == block_index[j] ? opt.block_p_in : opt.block_p_out;
        if (next_unit(rng) >= p) continue;
        bool flip = rng() & 1;
        csv += io::join_csv_line({uid(flip ? j : i), uid(flip ? i : j)});
        csv += '\n';
      }
    }
    // Consumption edges: later polarity users follow earlier ones.
    for (std::size_t i = n_block_users + 1; i <= opt.polarity_users; ++i) {
      std::size_t f1 = (i * 13) % n_block_users + 1;
      std::size_t f2 = (i * 29) % opt.polarity_users + 1;
      if (f2 == i) f2 = f2 % opt.polarity_users + 1;
      csv += io::join_csv_line({uid(i), uid(f1)});
      csv += '\n';
      if (f2 != i && f2 != f1) {
        csv += io::join_csv_line({uid(i), uid(f2)});
        csv += '\n';
      }
    }
    io::write_file(path_of("edges_follow.csv"), csv);
  }
  manifest["planted_blocks"] = block_of;
  manifest["block_p_in"] = opt.block_p_in;
  manifest["block_p_out"] = opt.block_p_out;

  // ---- retweet edges ----
  {
    std::string csv = "from_id,to_id\n";
    for (const auto& [from, to] : retweet_edges_rows) {
      csv += io::join_csv_line({from, to});
      csv += '\n';
    }
    io::write_file(path_of("edges_retweet.csv"), csv);
  }

  // ---- pre-simulated event logs with known parameters ----
  {
    std::vector<double> lambda0 = {0.02, 0.03};
    std::vector<std::vector<double>> W = {{0.2, 0.1}, {0.15, 0.25}};
    hawkes::HawkesModel model =
        hawkes::make_model(lambda0, W, opt.delta_t_max, {}, {"namo", "twitter"});
    std::map<std::string, std::vector<hawkes::Event>> events;
    ordered_json per_image = ordered_json::object();
    for (std::size_t im = 0; im < opt.hawkes_images; ++im) {
      hawkes::SimulationResult sim =
          hawkes::simulate(model, opt.hawkes_T, opt.seed * 1000 + im);
      char name[32];
      std::snprintf(name, sizeof name, "sim_img_%02zu", im);
      std::vector<hawkes::Event>& list = events[name];
      for (std::size_t t = 0; t < sim.series.T; ++t)
        for (std::size_t k = 0; k < sim.series.K; ++k)
          for (long long c = 0; c < sim.series.s(t, k); ++c)
            list.push_back({static_cast<std::int64_t>(t), sim.series.platform_names[k]});
      per_image[name] = list.size();
    }
    hawkes::save_events(events, path_of("events.csv"));
    manifest["hawkes"] = ordered_json{{"lambda0", lambda0},
                                      {"W", W},
                                      {"delta_t_max", opt.delta_t_max},
                                      {"T", opt.hawkes_T},
                                      {"platforms", {"namo", "twitter"}},
                                      {"events_per_image", per_image}};
  }

  // ---- pipeline config ----
  {
    ordered_json cfg;
    cfg["seed"] = opt.seed;
    cfg["inputs"] = ordered_json{{"tweets", "tweets.jsonl"},
                                 {"users", "users.jsonl"},
                                 {"edges_follow", "edges_follow.csv"},
                                 {"edges_retweet", "edges_retweet.csv"},
                                 {"lexicon", "lexicon.csv"},
                                 {"curated", "curated.csv"},
                                 {"keywords", "keywords.conf"},
                                 {"city_to_state", "city_to_state.csv"},
                                 {"foreign_places", "foreign_places.txt"},
                                 {"stopwords", "stopwords.txt"},
                                 {"images_dir", "images"}};
    cfg["partition"] = ordered_json{{"threshold", "1/10"}};
    // k matches the number of distinct post templates so the cluster
    // gate admits every planted copy.
    cfg["match"] = ordered_json{{"k", 12}, {"threshold", 0.45}, {"min_tokens", 5}, {"dedup", true}};
    cfg["image"] = ordered_json{{"eps", 10}, {"min_points", 2}};
    cfg["hawkes"] = ordered_json{{"delta_t", {720, 1440, 2880}},
                                 {"platforms", {"namo", "twitter"}}};
    cfg["lexstats"] = ordered_json{{"top_n", 20},
                                   {"min_count", 3},
                                   {"exclude_hashtags", ordered_json::array()}};
    io::write_file(path_of("config.json"), cfg.dump(2) + "\n");
  }

  manifest["tweets"] = static_cast<long long>(std::count(tweets_jsonl.begin(), tweets_jsonl.end(), '\n'));
  io::write_file(path_of("manifest.json"), manifest.dump(2) + "\n");
}

}  // namespace echoflow::synth
