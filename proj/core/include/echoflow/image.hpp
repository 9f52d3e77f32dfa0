#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace echoflow::image {

/// 8-bit image, interleaved rows; channels is 1 (gray) or 3 (RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// Binary netpbm only: P5 (grayscale) and P6 (RGB), maxval <= 255.
/// Throws std::runtime_error on anything else.
Image load_netpbm(const std::string& path);
void save_netpbm(const Image& img, const std::string& path);

/// Rec.601 luma, integer rounded.
Image to_grayscale(const Image& img);

/// Area-average (box) resampling; exact pixel-area overlap weights, so
/// downscales are independent of traversal order.
Image resize_area(const Image& gray, int out_w, int out_h);

/// Canonical 64-bit perceptual hash: grayscale, 32x32 area resize,
/// 2-D DCT-II, top-left 8x8 coefficient block (DC included), each bit
/// set iff its coefficient exceeds the block median. Bit for block
/// position (i,j) lands at bit 63-(i*8+j).
std::uint64_t phash64(const Image& img);

std::uint64_t phash64_file(const std::string& path);

int hamming(std::uint64_t a, std::uint64_t b);

/// 16 lowercase hex digits.
std::string hash_to_hex(std::uint64_t h);
std::uint64_t hash_from_hex(const std::string& hex);

struct HashedImage {
  std::string content_id;
  std::uint64_t hash = 0;
};

struct ImageCluster {
  std::vector<std::size_t> members;  // indices into the input list
  std::size_t medoid = 0;            // member minimizing mean Hamming distance
};

struct ClusterResult {
  std::vector<ImageCluster> clusters;  // ordered by smallest member index
  std::vector<std::size_t> noise;
};

/// DBSCAN over the Hamming metric. eps follows a strict reading of
/// "distance less than eps": points are neighbors iff distance <= eps-1.
/// min_points counts the point itself. Medoid ties break to the
/// numerically smallest hash, then the smallest index.
ClusterResult cluster_images(const std::vector<HashedImage>& hashes, int eps = 10,
                             int min_points = 2);

struct ImageAssignment {
  std::size_t cluster = 0;  // index into ClusterResult::clusters
  int distance = 0;         // Hamming distance to that cluster's medoid
};

/// Nearest medoid; ties break to the lower cluster index. Throws
/// std::invalid_argument when there are no clusters.
ImageAssignment assign_image(std::uint64_t hash, const std::vector<HashedImage>& hashes,
                             const ClusterResult& clusters);

/// Cache file: content_id,hex_hash rows, sorted by content id.
void save_hash_cache(const std::vector<HashedImage>& hashes, const std::string& path);
std::vector<HashedImage> load_hash_cache(const std::string& path);

}  // namespace echoflow::image
