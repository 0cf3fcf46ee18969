#include "bsr/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace bsr {

std::string to_string(Shape s) {
  return "(" + std::to_string(s.rows) + ", " + std::to_string(s.cols) + ")";
}

void require_shape(const Matrix& m, Shape expected, const char* what) {
  if (shape_of(m) != expected) {
    throw DimensionError(std::string(what) + ": expected shape " + to_string(expected) +
                         ", got " + to_string(shape_of(m)));
  }
}

}  // namespace bsr

namespace bsr::io {
namespace {

template <typename T>
T byteswap_if_needed(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <typename T>
void put(std::ostream& os, T v) {
  v = byteswap_if_needed(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("matrix file truncated");
  return byteswap_if_needed(v);
}

constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 34;

}  // namespace

std::size_t NdArray::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void write_array(std::ostream& os, const NdArray& a) {
  if (a.dims.size() > 255) throw IoError("too many dimensions");
  if (a.element_count() != a.data.size()) throw IoError("array payload does not match dims");
  os.write(kMagic, 4);
  put<std::uint8_t>(os, kDtypeF64);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(a.dims.size()));
  for (auto d : a.dims) put<std::uint64_t>(os, d);
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(a.data.data()),
             static_cast<std::streamsize>(a.data.size() * sizeof(double)));
  } else {
    for (double v : a.data) put<double>(os, v);
  }
  if (!os) throw IoError("write failed");
}

NdArray read_array(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a BSR1 matrix file");
  const auto dtype = get<std::uint8_t>(is);
  if (dtype != kDtypeF64) throw IoError("unsupported dtype " + std::to_string(dtype));
  const auto ndim = get<std::uint8_t>(is);
  NdArray a;
  a.dims.resize(ndim);
  std::uint64_t total = 1;
  for (auto& d : a.dims) {
    d = get<std::uint64_t>(is);
    if (d != 0 && total > kMaxElements / d) throw IoError("matrix file too large");
    total *= d;
  }
  a.data.resize(static_cast<std::size_t>(total));
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char*>(a.data.data()),
            static_cast<std::streamsize>(a.data.size() * sizeof(double)));
    if (!is && total > 0) throw IoError("matrix file truncated");
  } else {
    for (auto& v : a.data) v = get<double>(is);
  }
  return a;
}

void save_array(const std::filesystem::path& path, const NdArray& a) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_array(os, a);
}

NdArray load_array(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_array(is);
}

NdArray from_matrix(const Matrix& m) {
  NdArray a;
  a.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  a.data.resize(static_cast<std::size_t>(m.size()));
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      a.data.data(), m.rows(), m.cols()) = m;
  return a;
}

NdArray from_vector(const Vector& v) {
  NdArray a;
  a.dims = {static_cast<std::uint64_t>(v.size())};
  a.data.assign(v.data(), v.data() + v.size());
  return a;
}

NdArray from_stack(const std::vector<Matrix>& ms) {
  NdArray a;
  const Index rows = ms.empty() ? 0 : ms.front().rows();
  const Index cols = ms.empty() ? 0 : ms.front().cols();
  a.dims = {ms.size(), static_cast<std::uint64_t>(rows), static_cast<std::uint64_t>(cols)};
  a.data.resize(ms.size() * static_cast<std::size_t>(rows * cols));
  for (std::size_t i = 0; i < ms.size(); ++i) {
    require_shape(ms[i], {rows, cols}, "stacked matrix");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        a.data.data() + i * static_cast<std::size_t>(rows * cols), rows, cols) = ms[i];
  }
  return a;
}

Matrix to_matrix(const NdArray& a) {
  if (a.dims.size() == 1) {
    return Eigen::Map<const Vector>(a.data.data(), static_cast<Index>(a.dims[0]));
  }
  if (a.dims.size() != 2) {
    throw IoError("expected a 1D or 2D array, got " + std::to_string(a.dims.size()) + "D");
  }
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      a.data.data(), static_cast<Index>(a.dims[0]), static_cast<Index>(a.dims[1]));
}

Vector to_vector(const NdArray& a) {
  if (a.dims.size() != 1 && !(a.dims.size() == 2 && (a.dims[0] == 1 || a.dims[1] == 1))) {
    throw IoError("expected a vector");
  }
  return Eigen::Map<const Vector>(a.data.data(), static_cast<Index>(a.data.size()));
}

std::vector<Matrix> to_stack(const NdArray& a) {
  if (a.dims.size() == 1 || a.dims.size() == 2) return {to_matrix(a)};
  if (a.dims.size() != 3) throw IoError("expected a 3D stack");
  const auto rows = static_cast<Index>(a.dims[1]);
  const auto cols = static_cast<Index>(a.dims[2]);
  std::vector<Matrix> out;
  out.reserve(a.dims[0]);
  for (std::size_t i = 0; i < a.dims[0]; ++i) {
    out.emplace_back(
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            a.data.data() + i * static_cast<std::size_t>(rows * cols), rows, cols));
  }
  return out;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) { save_array(path, from_matrix(m)); }
Matrix load_matrix(const std::filesystem::path& path) { return to_matrix(load_array(path)); }
void save_stack(const std::filesystem::path& path, const std::vector<Matrix>& ms) {
  save_array(path, from_stack(ms));
}
std::vector<Matrix> load_stack(const std::filesystem::path& path) { return to_stack(load_array(path)); }

void write_csv(std::ostream& os, const Matrix& m) {
  char buf[32];
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      auto res = std::to_chars(buf, buf + sizeof buf, m(r, c));
      os.write(buf, res.ptr - buf);
    }
    os << '\n';
  }
  if (!os) throw IoError("CSV write failed");
}

Matrix read_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      while (p < end && *p == ' ') ++p;
      double v = 0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) throw IoError("malformed CSV value in line: " + line);
      row.push_back(v);
      p = res.ptr;
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (*p != ',') throw IoError("malformed CSV separator in line: " + line);
      ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw IoError("ragged CSV rows");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

void save_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(os, m);
}

Matrix load_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_csv(is);
}

Matrix load_matrix_any(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_csv(path);
  return load_matrix(path);
}

}  // namespace bsr::io
