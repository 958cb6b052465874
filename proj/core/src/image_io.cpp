#include "tgv/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tgv {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& is) {
  std::string tok;
  int c;
  while ((c = is.get()) != EOF) {
    if (c == '#') {
      while ((c = is.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_int(std::istream& is, const std::string& path, const char* what) {
  const std::string tok = next_token(is);
  if (tok.empty()) fail(path, std::string("corrupt header: missing ") + what);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(path, std::string("corrupt header: bad ") + what + " '" + tok + "'");
  }
}

}  // namespace

ScalarField load_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(path, "cannot open file");
  std::string magic = next_token(is);
  if (magic != "P2" && magic != "P5")
    fail(path, "unsupported format (magic '" + magic + "', want P2 or P5)");
  const int width = parse_int(is, path, "width");
  const int height = parse_int(is, path, "height");
  const int maxval = parse_int(is, path, "maxval");
  if (width < 2 || height < 2) fail(path, "image dimensions must be at least 2x2");
  if (maxval < 1 || maxval > 65535) fail(path, "maxval out of range");
  ScalarField u(height, width);
  const std::size_t n = u.pixels();
  if (magic == "P2") {
    for (std::size_t k = 0; k < n; ++k) {
      const int v = parse_int(is, path, "pixel");
      if (v < 0 || v > maxval) fail(path, "pixel value out of range");
      u.data[k] = static_cast<double>(v) / maxval;
    }
  } else {
    // single whitespace after maxval, then binary raster
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(is.gcount()) != raw.size()) fail(path, "truncated raster");
    for (std::size_t k = 0; k < n; ++k) {
      const int v = bytes == 1 ? raw[k] : (raw[2 * k] << 8) | raw[2 * k + 1];
      if (v > maxval) fail(path, "pixel value out of range");
      u.data[k] = static_cast<double>(v) / maxval;
    }
  }
  return u;
}

void save_image(const ScalarField& u, const std::string& path) {
  if (u.empty()) throw std::invalid_argument("save_image: empty field");
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(path, "cannot open for writing");
  os << "P5\n" << u.cols << ' ' << u.rows << "\n255\n";
  std::vector<unsigned char> raw(u.pixels());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    double v = u.data[k];
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    raw[k] = static_cast<unsigned char>(std::floor(v * 255.0 + 0.5));
  }
  os.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!os) fail(path, "write failed");
}

void save_csv(const std::vector<BenchmarkRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  os << "image,factor,method,alpha,psnr_db,time_s,iters\n";
  char buf[256];
  for (const BenchmarkRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%g,%s,%g,%.4f,%.6f,%ld\n", r.image.c_str(),
                  r.factor, r.method.c_str(), r.alpha, r.psnr_db, r.time_s, r.iters);
    os << buf;
  }
  if (!os) fail(path, "write failed");
}

void save_sweep_csv(const std::vector<SweepEntry>& entries, const std::string& method,
                    const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  os << "image,factor,method,param,psnr_db,best\n";
  char buf[256];
  for (const SweepEntry& e : entries) {
    for (const SweepPoint& p : e.grid) {
      std::snprintf(buf, sizeof buf, "%s,%g,%s,%g,%.4f,%d\n", e.image.c_str(), e.factor,
                    method.c_str(), p.param, p.psnr_db, p.param == e.best_param ? 1 : 0);
      os << buf;
    }
  }
  if (!os) fail(path, "write failed");
}

void save_trace(const std::vector<std::pair<long, double>>& trace,
                const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  os << "iter,relative_gap\n";
  char buf[64];
  for (const auto& [it, g] : trace) {
    std::snprintf(buf, sizeof buf, "%ld,%.12e\n", it, g);
    os << buf;
  }
  if (!os) fail(path, "write failed");
}

}  // namespace tgv
