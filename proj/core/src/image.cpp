#include "echoflow/image.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "echoflow/io_util.hpp"

namespace echoflow::image {
namespace {

constexpr int kDctSize = 32;
constexpr int kBlock = 8;

int read_pnm_int(std::istream& in) {
  // Header tokens are separated by whitespace; '#' starts a comment.
  int c = in.get();
  while (c != std::char_traits<char>::eof()) {
    if (c == '#') {
      while (c != '\n' && c != std::char_traits<char>::eof()) c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (!std::isdigit(c)) throw std::runtime_error("malformed netpbm header");
  int value = 0;
  while (std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 24) throw std::runtime_error("absurd netpbm header value");
    c = in.get();
  }
  return value;
}

}  // namespace

Image load_netpbm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image: " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw std::runtime_error("unsupported image format (want binary P5/P6): " + path);

  Image img;
  img.channels = magic[1] == '5' ? 1 : 3;
  img.width = read_pnm_int(in);
  img.height = read_pnm_int(in);
  int maxval = read_pnm_int(in);
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("unsupported netpbm dimensions/maxval: " + path);
  // Exactly one whitespace byte separates the header from the raster.
  std::size_t count = static_cast<std::size_t>(img.width) * img.height * img.channels;
  img.pixels.resize(count);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw std::runtime_error("truncated image data: " + path);
  return img;
}

void save_netpbm(const Image& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3)
    throw std::runtime_error("save_netpbm: channels must be 1 or 3");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw std::runtime_error("write failure: " + path);
}

Image to_grayscale(const Image& img) {
  if (img.channels == 1) return img;
  Image gray;
  gray.width = img.width;
  gray.height = img.height;
  gray.channels = 1;
  gray.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double luma = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
      gray.pixels[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<std::uint8_t>(std::lround(std::min(luma, 255.0)));
    }
  }
  return gray;
}

Image resize_area(const Image& gray, int out_w, int out_h) {
  if (gray.channels != 1) throw std::runtime_error("resize_area expects grayscale");
  if (out_w <= 0 || out_h <= 0) throw std::runtime_error("resize_area: bad target size");
  Image out;
  out.width = out_w;
  out.height = out_h;
  out.channels = 1;
  out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);

  const double sx = static_cast<double>(gray.width) / out_w;
  const double sy = static_cast<double>(gray.height) / out_h;
  for (int oy = 0; oy < out_h; ++oy) {
    double y0 = oy * sy, y1 = (oy + 1) * sy;
    int iy0 = static_cast<int>(std::floor(y0));
    int iy1 = std::min(static_cast<int>(std::ceil(y1)), gray.height);
    for (int ox = 0; ox < out_w; ++ox) {
      double x0 = ox * sx, x1 = (ox + 1) * sx;
      int ix0 = static_cast<int>(std::floor(x0));
      int ix1 = std::min(static_cast<int>(std::ceil(x1)), gray.width);
      double sum = 0, area = 0;
      for (int iy = iy0; iy < iy1; ++iy) {
        double hy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
        if (hy <= 0) continue;
        for (int ix = ix0; ix < ix1; ++ix) {
          double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
          if (wx <= 0) continue;
          sum += gray.at(ix, iy) * hy * wx;
          area += hy * wx;
        }
      }
      out.pixels[static_cast<std::size_t>(oy) * out_w + ox] =
          static_cast<std::uint8_t>(std::lround(sum / area));
    }
  }
  return out;
}

namespace {

/// Orthonormal DCT-II basis, computed once.
const std::array<std::array<double, kDctSize>, kDctSize>& dct_matrix() {
  static const auto m = [] {
    std::array<std::array<double, kDctSize>, kDctSize> c{};
    const double pi = std::acos(-1.0);
    for (int u = 0; u < kDctSize; ++u) {
      double alpha = std::sqrt((u == 0 ? 1.0 : 2.0) / kDctSize);
      for (int x = 0; x < kDctSize; ++x)
        c[u][x] = alpha * std::cos((2 * x + 1) * u * pi / (2.0 * kDctSize));
    }
    return c;
  }();
  return m;
}

}  // namespace

std::uint64_t phash64(const Image& img) {
  Image small = resize_area(to_grayscale(img), kDctSize, kDctSize);
  const auto& c = dct_matrix();

  // D = C * P * C^T, computed as two passes.
  std::array<std::array<double, kDctSize>, kDctSize> tmp{};
  for (int u = 0; u < kDctSize; ++u)
    for (int x = 0; x < kDctSize; ++x) {
      double s = 0;
      for (int y = 0; y < kDctSize; ++y)
        s += c[u][y] * small.pixels[static_cast<std::size_t>(y) * kDctSize + x];
      tmp[u][x] = s;
    }
  std::array<double, kBlock * kBlock> block{};
  for (int u = 0; u < kBlock; ++u)
    for (int v = 0; v < kBlock; ++v) {
      double s = 0;
      for (int x = 0; x < kDctSize; ++x) s += tmp[u][x] * c[v][x];
      block[u * kBlock + v] = s;
    }

  std::array<double, kBlock * kBlock> sorted = block;
  std::sort(sorted.begin(), sorted.end());
  double median = (sorted[31] + sorted[32]) / 2.0;

  std::uint64_t hash = 0;
  for (int i = 0; i < kBlock * kBlock; ++i)
    if (block[i] > median) hash |= 1ull << (63 - i);
  return hash;
}

std::uint64_t phash64_file(const std::string& path) { return phash64(load_netpbm(path)); }

int hamming(std::uint64_t a, std::uint64_t b) { return std::popcount(a ^ b); }

std::string hash_to_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t hash_from_hex(const std::string& hex) {
  if (hex.size() != 16) throw std::runtime_error("hash hex must be 16 digits: " + hex);
  std::uint64_t v = 0;
  for (char ch : hex) {
    v <<= 4;
    if (ch >= '0' && ch <= '9') v |= static_cast<std::uint64_t>(ch - '0');
    else if (ch >= 'a' && ch <= 'f') v |= static_cast<std::uint64_t>(ch - 'a' + 10);
    else if (ch >= 'A' && ch <= 'F') v |= static_cast<std::uint64_t>(ch - 'A' + 10);
    else throw std::runtime_error("bad hash hex digit in " + hex);
  }
  return v;
}

ClusterResult cluster_images(const std::vector<HashedImage>& hashes, int eps, int min_points) {
  if (min_points < 1) throw std::invalid_argument("cluster_images: min_points must be >= 1");
  const std::size_t n = hashes.size();
  const int max_dist = eps - 1;  // "distance less than eps"

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (hamming(hashes[i].hash, hashes[j].hash) <= max_dist) {
        neighbors[i].push_back(j);
        neighbors[j].push_back(i);
      }

  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i)
    core[i] = neighbors[i].size() + 1 >= static_cast<std::size_t>(min_points);

  // Clusters are connected components of core points; border points then
  // attach to their closest core point, which keeps the outcome
  // independent of scan order.
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || label[i] != -1) continue;
    int id = next++;
    std::vector<std::size_t> stack{i};
    label[i] = id;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : neighbors[u]) {
        if (!core[v] || label[v] != -1) continue;
        label[v] = id;
        stack.push_back(v);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (core[i] || neighbors[i].empty()) continue;
    int best_d = 65;
    std::size_t best_core = n;
    for (std::size_t v : neighbors[i]) {
      if (!core[v]) continue;
      int d = hamming(hashes[i].hash, hashes[v].hash);
      bool better = d < best_d ||
                    (d == best_d && best_core < n &&
                     (hashes[v].hash < hashes[best_core].hash ||
                      (hashes[v].hash == hashes[best_core].hash && v < best_core)));
      if (better) {
        best_d = d;
        best_core = v;
      }
    }
    if (best_core < n) label[i] = label[best_core];
  }

  std::vector<std::vector<std::size_t>> members(next);
  ClusterResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) members[label[i]].push_back(i);
    else result.noise.push_back(i);
  }

  std::sort(members.begin(), members.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::vector<std::size_t>& m : members) {
    ImageCluster cluster;
    cluster.members = std::move(m);
    long long best_sum = -1;
    std::size_t best = cluster.members.front();
    for (std::size_t cand : cluster.members) {
      long long sum = 0;
      for (std::size_t other : cluster.members)
        sum += hamming(hashes[cand].hash, hashes[other].hash);
      bool better = best_sum < 0 || sum < best_sum ||
                    (sum == best_sum && (hashes[cand].hash < hashes[best].hash ||
                                         (hashes[cand].hash == hashes[best].hash && cand < best)));
      if (better) {
        best_sum = sum;
        best = cand;
      }
    }
    cluster.medoid = best;
    result.clusters.push_back(std::move(cluster));
  }
  return result;
}

ImageAssignment assign_image(std::uint64_t hash, const std::vector<HashedImage>& hashes,
                             const ClusterResult& clusters) {
  if (clusters.clusters.empty())
    throw std::invalid_argument("assign_image: no clusters to assign to");
  ImageAssignment best{0, 65};
  for (std::size_t c = 0; c < clusters.clusters.size(); ++c) {
    int d = hamming(hash, hashes[clusters.clusters[c].medoid].hash);
    if (d < best.distance) {
      best.cluster = c;
      best.distance = d;
    }
  }
  return best;
}

void save_hash_cache(const std::vector<HashedImage>& hashes, const std::string& path) {
  std::vector<HashedImage> sorted = hashes;
  std::sort(sorted.begin(), sorted.end(),
            [](const HashedImage& a, const HashedImage& b) { return a.content_id < b.content_id; });
  std::string out = "content_id,hash\n";
  for (const HashedImage& h : sorted) {
    out += io::join_csv_line({h.content_id, hash_to_hex(h.hash)});
    out += '\n';
  }
  io::write_file(path, out);
}

std::vector<HashedImage> load_hash_cache(const std::string& path) {
  std::vector<HashedImage> out;
  bool first = true;
  for (const std::string& line : io::read_lines(path)) {
    if (line.empty()) continue;
    std::vector<std::string> cells = io::split_csv_line(line);
    if (first) {
      first = false;
      if (cells.size() == 2 && cells[0] == "content_id") continue;
    }
    if (cells.size() != 2) throw std::runtime_error("bad hash cache row: " + line);
    out.push_back({cells[0], hash_from_hex(cells[1])});
  }
  return out;
}

}  // namespace echoflow::image
