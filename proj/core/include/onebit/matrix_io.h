#pragma once

#include <cstdint>
#include <filesystem>

#include "onebit/model.h"

namespace onebit {

// Binary sensing-matrix cache.
//
// Layout (all little-endian):
//   bytes  0..3   magic "OBR1"
//   bytes  4..7   u32 format version (currently 1)
//   bytes  8..15  u64 rows m
//   bytes 16..23  u64 cols n
//   then m*n f64 values, row-major.
inline constexpr char kMatrixMagic[4] = {'O', 'B', 'R', '1'};
inline constexpr std::uint32_t kMatrixFormatVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 24;

void WriteSensingMatrix(const std::filesystem::path& path,
                        const SensingEnsemble& ensemble);

// The file does not carry the seed; the caller supplies it.
SensingEnsemble ReadSensingMatrix(const std::filesystem::path& path,
                                  std::uint64_t seed = 0);

// Loads `<dir>/A_<m>x<n>_<seed>.bin` when present, otherwise generates the
// matrix and writes it there.
SensingEnsemble LoadOrGenerateSensingMatrix(const std::filesystem::path& dir,
                                            Index m, Index n,
                                            std::uint64_t seed);

// Plain text vectors: one value per line, written with round-trip precision.
void WriteVector(const std::filesystem::path& path, const VectorXd& v);
VectorXd ReadVector(const std::filesystem::path& path);

// Two whitespace-separated columns per line: y_i and true_flip_i (the second
// column may be omitted). A "# sigma <value>" first line is optional.
void WriteMeasurements(const std::filesystem::path& path,
                       const BinaryMeasurements& meas);
BinaryMeasurements ReadMeasurements(const std::filesystem::path& path);

}  // namespace onebit
