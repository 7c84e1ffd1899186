#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "htvseg/image_io.hpp"
#include "htvseg/phantom.hpp"
#include "oracles.hpp"

using namespace htvseg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "htvseg_unit";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream os(p, std::ios::binary);
  os << bytes;
}

int count_label(const metrics::GroundTruth& t, int l) {
  return static_cast<int>(std::count(t.labels.labels.begin(), t.labels.labels.end(), l));
}

}  // namespace

TEST_CASE("disk phantom") {
  const auto none = phantom::make_two_phase(16, 16, phantom::Shape::disk, 0.2, 0.8, 0.0);
  CHECK(count_label(none.truth, 2) == 0);
  CHECK(none.image.max() == 0.2);
  const auto full = phantom::make_two_phase(16, 16, phantom::Shape::disk, 0.2, 0.8, 100.0);
  CHECK(count_label(full.truth, 1) == 0);

  const int n = 40;
  const double r = 9.0;
  const auto d = phantom::make_two_phase(n, n, phantom::Shape::disk, 0.1, 0.9, r);
  int expect = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dx = i + 0.5 - n / 2.0, dy = j + 0.5 - n / 2.0;
      const bool in = dx * dx + dy * dy < r * r;
      expect += in;
      CHECK(d.truth.labels(i, j) == (in ? 2 : 1));
      CHECK(d.image(i, j) == (in ? 0.9 : 0.1));
    }
  CHECK(count_label(d.truth, 2) == expect);
  CHECK(d.truth.phases == 2);
  CHECK(d.constants == std::vector<double>{0.1, 0.9});
}

TEST_CASE("bars, text and three-phase phantoms") {
  const auto b = phantom::make_two_phase(8, 16, phantom::Shape::bars, 0.0, 1.0, 4.0);
  for (int j = 0; j < 16; ++j) CHECK(b.truth.labels(3, j) == ((j / 4) % 2 ? 2 : 1));

  const auto t = phantom::make_two_phase(64, 96, phantom::Shape::text, 0.2, 0.8);
  CHECK(count_label(t.truth, 2) > 0);
  CHECK(count_label(t.truth, 1) > count_label(t.truth, 2));

  const auto s = phantom::make_three_phase(64, 64, 0.1, 0.5, 0.9);
  CHECK(s.truth.phases == 3);
  CHECK(s.truth.labels(32, 32) == 3);
  CHECK(s.truth.labels(0, 0) == 1);
  CHECK(count_label(s.truth, 2) > 0);
  CHECK_THROWS_AS(phantom::make_three_phase(64, 64, 0.5, 0.4, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(phantom::make_two_phase(8, 8, phantom::Shape::disk, 0.8, 0.2), std::invalid_argument);
  CHECK(phantom::parse_shape("bars") == phantom::Shape::bars);
  CHECK_THROWS(phantom::parse_shape("star"));
}

TEST_CASE("graymap loading") {
  const auto p = scratch("a.pgm");
  write_bytes(p, std::string("P5\n# note\n3 1\n255\n") + char(255) + char(128) + char(0));
  const auto f = io::load_image(p);
  CHECK(f.rows() == 1);
  CHECK(f.cols() == 3);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 128.0 / 255.0);
  CHECK(f[2] == 0.0);

  write_bytes(p, std::string("P5 2 1 1000\n") + char(0x03) + char(0xE8) + char(0x01) + char(0xF4));
  const auto w = io::load_pgm(p);
  CHECK(w[0] == 1.0);
  CHECK(w[1] == 0.5);

  write_bytes(p, std::string("P5\n2 1\n100\n") + char(50) + char(101));
  CHECK_THROWS_AS(io::load_pgm(p), io::FormatError);
  write_bytes(p, std::string("P5\n2 1\n255\n") + char(50));
  CHECK_THROWS_AS(io::load_pgm(p), io::FormatError);
  write_bytes(p, "P2\n1 1\n255\n0\n");
  CHECK_THROWS_AS(io::load_image(p), io::FormatError);
}

TEST_CASE("graymap saving rounds half to even") {
  const auto p = scratch("b.pgm");
  const ScalarField f(1, 4, std::vector<double>{0.5 / 255.0, 1.5 / 255.0, 1.2, -0.3});
  io::save_pgm(f, p, 8);
  const auto g = io::load_pgm(p);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 2.0 / 255.0);
  CHECK(g[2] == 1.0);
  CHECK(g[3] == 0.0);

  std::mt19937_64 rng(2);
  const auto r = oracle::random_field(5, 7, rng, 0.0, 1.0);
  io::save_pgm(r, p, 16);
  const auto back = io::load_pgm(p);
  for (std::size_t k = 0; k < r.size(); ++k) CHECK(std::abs(back[k] - r[k]) <= 0.5 / 65535.0 + 1e-15);
}

TEST_CASE("raw float and label files round trip exactly") {
  std::mt19937_64 rng(3);
  const auto f = oracle::random_field(6, 9, rng, -1e3, 1e3);
  const auto p = scratch("c.f64");
  io::save_raw(f, p);
  CHECK(io::load_raw(p) == f);
  CHECK(io::load_image(p) == f);

  const cluster::LabelMap l{2, 3, {1, 2, 3, 3, 2, 1}};
  const auto q = scratch("d.lbl");
  io::save_labels(l, q);
  const auto m = io::load_labels(q);
  CHECK(m.labels == l.labels);
  CHECK(io::load_truth(q).labels == l.labels);

  const auto g = scratch("e.pgm");
  io::save_label_pgm(l, 3, g);
  const auto t = io::load_truth(g);
  CHECK(t.labels == l.labels);

  write_bytes(p, "HTVFLT64\x02");
  CHECK_THROWS_AS(io::load_raw(p), io::FormatError);
}
