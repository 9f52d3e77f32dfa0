#pragma once

#include <string>

#include "echoflow/types.hpp"

namespace echoflow::bundle_io {

/// Versioned little-endian binary snapshot of a bundle. Deterministic:
/// the same bundle always serializes to the same bytes.
void save_bundle(const DatasetBundle& bundle, const std::string& path);

/// Throws std::runtime_error on bad magic, unsupported version, or a
/// truncated/corrupt stream.
DatasetBundle load_bundle(const std::string& path);

}  // namespace echoflow::bundle_io
