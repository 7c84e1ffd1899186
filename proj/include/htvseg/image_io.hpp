#pragma once

#include <filesystem>

#include "htvseg/cluster.hpp"
#include "htvseg/field.hpp"

/// File formats:
///
///   PGM (P5)       8-bit (maxval <= 255) or 16-bit big-endian (maxval <= 65535)
///                  samples. Loading divides by maxval; saving clamps to [0, 1]
///                  and rounds half-to-even to the chosen depth.
///   raw float      "HTVFLT64", uint32 rows, uint32 cols (little-endian), then
///                  rows*cols IEEE-754 doubles, little-endian, row-major.
///   raw labels     "HTVLBL32", uint32 rows, uint32 cols, then rows*cols int32
///                  labels, all little-endian, row-major.
namespace htvseg::io {

/// Thrown for malformed or unreadable files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dispatches on the magic bytes (P5 or raw float).
ScalarField load_image(const std::filesystem::path& path);

ScalarField load_pgm(const std::filesystem::path& path);
/// bits must be 8 or 16.
void save_pgm(const ScalarField& field, const std::filesystem::path& path, int bits = 8);

ScalarField load_raw(const std::filesystem::path& path);
void save_raw(const ScalarField& field, const std::filesystem::path& path);

cluster::LabelMap load_labels(const std::filesystem::path& path);
void save_labels(const cluster::LabelMap& labels, const std::filesystem::path& path);

/// Labels 1..K spread evenly over 0..maxval of an 8-bit graymap.
void save_label_pgm(const cluster::LabelMap& labels, int phases, const std::filesystem::path& path);

/// Ground truth from a raw label file, or from a graymap whose sorted distinct
/// gray levels become labels 1..K.
cluster::LabelMap load_truth(const std::filesystem::path& path);

}  // namespace htvseg::io
