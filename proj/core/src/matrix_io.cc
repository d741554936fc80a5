#include "onebit/matrix_io.h"

#include <fmt/format.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "onebit/error.h"

namespace onebit {
namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <typename T>
T ToLittle(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&v, bytes, sizeof(T));
  }
  return v;
}

template <typename T>
void Put(std::ostream& out, T v) {
  v = ToLittle(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T Get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return ToLittle(v);
}

}  // namespace

void WriteSensingMatrix(const std::filesystem::path& path,
                        const SensingEnsemble& ensemble) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out.write(kMatrixMagic, sizeof(kMatrixMagic));
  Put<std::uint32_t>(out, kMatrixFormatVersion);
  Put<std::uint64_t>(out, static_cast<std::uint64_t>(ensemble.m()));
  Put<std::uint64_t>(out, static_cast<std::uint64_t>(ensemble.n()));
  for (Index i = 0; i < ensemble.m(); ++i) {
    for (Index j = 0; j < ensemble.n(); ++j) {
      Put<double>(out, ensemble.matrix(i, j));
    }
  }
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

SensingEnsemble ReadSensingMatrix(const std::filesystem::path& path,
                                  std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMatrixMagic, sizeof(magic)) != 0) {
    throw IoError(fmt::format("{}: bad magic, not an OBR1 matrix", path.string()));
  }
  const auto version = Get<std::uint32_t>(in);
  if (version != kMatrixFormatVersion) {
    throw IoError(fmt::format("{}: unsupported format version {}",
                              path.string(), version));
  }
  const auto m = Get<std::uint64_t>(in);
  const auto n = Get<std::uint64_t>(in);
  if (!in || m == 0 || n == 0) {
    throw IoError(fmt::format("{}: truncated or empty header", path.string()));
  }
  const auto expected = kMatrixHeaderBytes + m * n * sizeof(double);
  if (std::filesystem::file_size(path) != expected) {
    throw IoError(fmt::format("{}: expected {} bytes for a {}x{} matrix",
                              path.string(), expected, m, n));
  }
  SensingEnsemble ensemble{MatrixXd(static_cast<Index>(m), static_cast<Index>(n)),
                           seed};
  std::vector<double> row(n);
  for (Index i = 0; i < ensemble.m(); ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    for (Index j = 0; j < ensemble.n(); ++j) {
      ensemble.matrix(i, j) = ToLittle(row[j]);
    }
  }
  if (!in) throw IoError(fmt::format("{}: truncated payload", path.string()));
  return ensemble;
}

SensingEnsemble LoadOrGenerateSensingMatrix(const std::filesystem::path& dir,
                                            Index m, Index n,
                                            std::uint64_t seed) {
  const auto path = dir / fmt::format("A_{}x{}_{}.bin", m, n, seed);
  if (std::filesystem::exists(path)) {
    return ReadSensingMatrix(path, seed);
  }
  SensingEnsemble ensemble = GenerateSensingMatrix(m, n, seed);
  std::filesystem::create_directories(dir);
  // Write to a temporary name first so concurrent readers never see a
  // partial file.
  const auto tmp = path.string() + fmt::format(".tmp{}", seed);
  WriteSensingMatrix(tmp, ensemble);
  std::filesystem::rename(tmp, path);
  return ensemble;
}

void WriteVector(const std::filesystem::path& path, const VectorXd& v) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  for (Index i = 0; i < v.size(); ++i) {
    out << fmt::format("{:.17g}\n", v[i]);
  }
}

VectorXd ReadVector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) {
      throw IoError(fmt::format("{}: cannot parse '{}'", path.string(), line));
    }
    values.push_back(v);
  }
  return Eigen::Map<VectorXd>(values.data(), static_cast<Index>(values.size()));
}

void WriteMeasurements(const std::filesystem::path& path,
                       const BinaryMeasurements& meas) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out << fmt::format("# sigma {:.17g}\n", meas.sigma());
  for (Index i = 0; i < meas.m(); ++i) {
    if (meas.true_flips()) {
      out << fmt::format("{} {}\n", static_cast<int>(meas.y()[i]),
                         static_cast<int>((*meas.true_flips())[i]));
    } else {
      out << fmt::format("{}\n", static_cast<int>(meas.y()[i]));
    }
  }
}

BinaryMeasurements ReadMeasurements(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::vector<double> y;
  std::vector<double> flips;
  double sigma = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "sigma") ls >> sigma;
      continue;
    }
    double yi;
    if (!(ls >> yi)) {
      throw IoError(fmt::format("{}: cannot parse '{}'", path.string(), line));
    }
    y.push_back(yi);
    double fi;
    if (ls >> fi) flips.push_back(fi);
  }
  VectorXd yv = Eigen::Map<VectorXd>(y.data(), static_cast<Index>(y.size()));
  std::optional<VectorXd> fv;
  if (!flips.empty()) {
    if (flips.size() != y.size()) {
      throw IoError(fmt::format("{}: flip column is incomplete", path.string()));
    }
    fv = Eigen::Map<VectorXd>(flips.data(), static_cast<Index>(flips.size()));
  }
  return BinaryMeasurements(std::move(yv), sigma, std::move(fv));
}

}  // namespace onebit
