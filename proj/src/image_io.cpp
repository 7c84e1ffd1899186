#include "htvseg/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace htvseg::io {

namespace {

constexpr char kFloatMagic[8] = {'H', 'T', 'V', 'F', 'L', 'T', '6', '4'};
constexpr char kLabelMagic[8] = {'H', 'T', 'V', 'L', 'B', 'L', '3', '2'};

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FormatError("write failed for " + path.string());
}

template <class U>
void put_le(std::vector<unsigned char>& out, U v) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xFF));
}

template <class U>
U get_le(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(U) > in.size()) throw FormatError("truncated file");
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(in[pos + b]) << (8 * b);
  pos += sizeof(U);
  return v;
}

bool has_magic(const std::vector<unsigned char>& bytes, const char (&magic)[8]) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), magic, 8) == 0;
}

struct RawHeader {
  int rows;
  int cols;
  std::size_t pos;
};

RawHeader read_raw_header(const std::vector<unsigned char>& bytes, const char (&magic)[8], std::size_t elem) {
  if (!has_magic(bytes, magic)) throw FormatError("bad magic");
  std::size_t pos = 8;
  const auto rows = get_le<std::uint32_t>(bytes, pos);
  const auto cols = get_le<std::uint32_t>(bytes, pos);
  if (rows < 1 || cols < 1 || rows > (1u << 30) || cols > (1u << 30)) throw FormatError("bad dimensions");
  if (bytes.size() - pos != static_cast<std::size_t>(rows) * cols * elem) throw FormatError("payload size mismatch");
  return {static_cast<int>(rows), static_cast<int>(cols), pos};
}

// Reads one header token of a PNM file, skipping whitespace and comments.
long pnm_token(const std::vector<unsigned char>& b, std::size_t& pos) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= b.size() || !std::isdigit(b[pos])) throw FormatError("malformed PGM header");
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > (1L << 31)) throw FormatError("malformed PGM header");
    ++pos;
  }
  return v;
}

struct Pgm {
  int rows;
  int cols;
  int maxval;
  std::vector<int> samples;
};

Pgm parse_pgm(const std::vector<unsigned char>& b) {
  if (b.size() < 2 || b[0] != 'P' || b[1] != '5') throw FormatError("not a binary graymap (P5)");
  std::size_t pos = 2;
  const long width = pnm_token(b, pos);
  const long height = pnm_token(b, pos);
  const long maxval = pnm_token(b, pos);
  if (width < 1 || height < 1) throw FormatError("PGM dimensions must be positive");
  if (maxval < 1 || maxval > 65535) throw FormatError("PGM maxval out of range");
  if (pos >= b.size() || !std::isspace(b[pos])) throw FormatError("malformed PGM header");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const std::size_t bytes_per = maxval < 256 ? 1 : 2;
  if (b.size() - pos < n * bytes_per) throw FormatError("truncated PGM data");
  Pgm p{static_cast<int>(height), static_cast<int>(width), static_cast<int>(maxval), std::vector<int>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const int s = bytes_per == 1 ? b[pos + k] : (b[pos + 2 * k] << 8) | b[pos + 2 * k + 1];
    if (s > maxval) throw FormatError("PGM sample exceeds maxval");
    p.samples[k] = s;
  }
  return p;
}

std::vector<unsigned char> pgm_header(int rows, int cols, int maxval) {
  const std::string h = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n" + std::to_string(maxval) + "\n";
  return {h.begin(), h.end()};
}

void put_sample(std::vector<unsigned char>& out, int s, int maxval) {
  if (maxval > 255) out.push_back(static_cast<unsigned char>(s >> 8));
  out.push_back(static_cast<unsigned char>(s & 0xFF));
}

}  // namespace

ScalarField load_image(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (has_magic(bytes, kFloatMagic)) return load_raw(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return load_pgm(path);
  throw FormatError("unrecognized image format: " + path.string());
}

ScalarField load_pgm(const std::filesystem::path& path) {
  const Pgm p = parse_pgm(read_all(path));
  ScalarField out(p.rows, p.cols);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(p.samples[k]) / p.maxval;
  return out;
}

void save_pgm(const ScalarField& field, const std::filesystem::path& path, int bits) {
  if (bits != 8 && bits != 16) throw std::invalid_argument("save_pgm: bits must be 8 or 16");
  const int maxval = bits == 8 ? 255 : 65535;
  auto out = pgm_header(field.rows(), field.cols(), maxval);
  for (double v : field.values()) {
    const double c = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
    // nearbyint honours the default round-to-nearest-even mode.
    put_sample(out, static_cast<int>(std::nearbyint(c * maxval)), maxval);
  }
  write_all(path, out);
}

ScalarField load_raw(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  RawHeader h = read_raw_header(bytes, kFloatMagic, sizeof(double));
  ScalarField out(h.rows, h.cols);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, h.pos));
  return out;
}

void save_raw(const ScalarField& field, const std::filesystem::path& path) {
  std::vector<unsigned char> out(kFloatMagic, kFloatMagic + 8);
  put_le(out, static_cast<std::uint32_t>(field.rows()));
  put_le(out, static_cast<std::uint32_t>(field.cols()));
  for (double v : field.values()) put_le(out, std::bit_cast<std::uint64_t>(v));
  write_all(path, out);
}

cluster::LabelMap load_labels(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  RawHeader h = read_raw_header(bytes, kLabelMagic, sizeof(std::int32_t));
  cluster::LabelMap m{h.rows, h.cols, std::vector<int>(static_cast<std::size_t>(h.rows) * h.cols)};
  for (int& l : m.labels) l = static_cast<std::int32_t>(get_le<std::uint32_t>(bytes, h.pos));
  return m;
}

void save_labels(const cluster::LabelMap& labels, const std::filesystem::path& path) {
  std::vector<unsigned char> out(kLabelMagic, kLabelMagic + 8);
  put_le(out, static_cast<std::uint32_t>(labels.rows));
  put_le(out, static_cast<std::uint32_t>(labels.cols));
  for (int l : labels.labels) put_le(out, static_cast<std::uint32_t>(static_cast<std::int32_t>(l)));
  write_all(path, out);
}

void save_label_pgm(const cluster::LabelMap& labels, int phases, const std::filesystem::path& path) {
  if (phases < 1) throw std::invalid_argument("save_label_pgm: phases must be >= 1");
  auto out = pgm_header(labels.rows, labels.cols, 255);
  for (int l : labels.labels) {
    const int s = phases == 1 ? 0 : static_cast<int>(std::lround(255.0 * (l - 1) / (phases - 1)));
    out.push_back(static_cast<unsigned char>(std::clamp(s, 0, 255)));
  }
  write_all(path, out);
}

cluster::LabelMap load_truth(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (has_magic(bytes, kLabelMagic)) return load_labels(path);
  const Pgm p = parse_pgm(bytes);
  std::map<int, int> level;
  for (int s : p.samples) level.emplace(s, 0);
  int next = 1;
  for (auto& [gray, l] : level) l = next++;
  cluster::LabelMap m{p.rows, p.cols, std::vector<int>(p.samples.size())};
  for (std::size_t k = 0; k < p.samples.size(); ++k) m.labels[k] = level[p.samples[k]];
  return m;
}

}  // namespace htvseg::io
