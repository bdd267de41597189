#include "kts/manifest.hpp"

#include <fstream>
#include <sstream>

#include "kts/image.hpp"

namespace kts {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw ParseError("manifest line " + std::to_string(line) + ": " + message);
}

std::string dir_of(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open manifest " + path);

  DatasetManifest m;
  m.root = dir_of(path);
  bool have_window = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;

    if (tag == "WINDOW") {
      if (!(ss >> m.window_w >> m.window_h) || m.window_w < 1 || m.window_h < 1) {
        fail(line_no, "WINDOW needs two positive integers");
      }
      have_window = true;
    } else if (tag == "MARGIN") {
      if (!(ss >> m.margin) || m.margin < 0) fail(line_no, "MARGIN needs a nonnegative integer");
    } else if (tag == "P") {
      PositiveEntry e;
      std::string image;
      if (!(ss >> image >> e.crop.x0 >> e.crop.y0 >> e.crop.w >> e.crop.h)) {
        fail(line_no, "P needs <image> <x> <y> <w> <h>");
      }
      e.image = m.root + "/" + image;
      if (e.crop.w < 1 || e.crop.h < 1 || e.crop.x0 < 0 || e.crop.y0 < 0) {
        fail(line_no, "crop extent must be positive and origin nonnegative");
      }
      const auto [iw, ih] = read_pgm_size(e.image);  // throws MissingFile / ParseError
      if (e.crop.x0 + e.crop.w > iw || e.crop.y0 + e.crop.h > ih) {
        fail(line_no, "crop " + std::to_string(e.crop.w) + "x" + std::to_string(e.crop.h) + "+" +
                          std::to_string(e.crop.x0) + "+" + std::to_string(e.crop.y0) +
                          " exceeds " + e.image + " (" + std::to_string(iw) + "x" +
                          std::to_string(ih) + ")");
      }
      m.positives.push_back(std::move(e));
    } else if (tag == "N") {
      std::string image;
      if (!(ss >> image)) fail(line_no, "N needs <image>");
      const std::string resolved = m.root + "/" + image;
      read_pgm_size(resolved);  // existence + header check
      m.negatives.push_back(resolved);
    } else {
      fail(line_no, "unknown record '" + tag + "'");
    }
  }

  if (!have_window) throw ParseError("manifest: missing WINDOW header");
  if (m.positives.empty()) throw ParseError("manifest: no positive samples");
  return m;
}

}  // namespace kts
