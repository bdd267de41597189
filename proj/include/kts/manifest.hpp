#pragma once

#include <string>
#include <vector>

#include "kts/integrals.hpp"

namespace kts {

/// One positive training sample: an image plus the window-sized crop that
/// contains the object.
struct PositiveEntry {
  std::string image;  // resolved path
  Region crop;
};

/// Parsed and validated dataset description. Image paths in the file are
/// resolved relative to the manifest's directory; every referenced image
/// must exist and every crop must lie inside its image.
struct DatasetManifest {
  std::string root;  // directory the manifest lives in
  int window_w = 0;
  int window_h = 0;
  int margin = 0;
  std::vector<PositiveEntry> positives;
  std::vector<std::string> negatives;  // person-free source images, resolved paths
};

/// Load a line-oriented manifest:
///   WINDOW <w> <h>        required header
///   MARGIN <m>            optional, default 0
///   P <image> <x> <y> <w> <h>   positive crop
///   N <image>                   negative source image
/// Blank lines and lines starting with '#' are ignored. Throws ParseError
/// with the offending line number, or MissingFile naming the first missing
/// image.
DatasetManifest load_manifest(const std::string& path);

}  // namespace kts
