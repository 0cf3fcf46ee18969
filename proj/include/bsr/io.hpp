#pragma once

#include "bsr/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace bsr::io {

// Matrix file format: magic "BSR1", u8 dtype (0 = f64), u8 ndim, ndim x u64
// dims, then the row-major f64 payload. Everything little-endian.

inline constexpr char kMagic[4] = {'B', 'S', 'R', '1'};
inline constexpr std::uint8_t kDtypeF64 = 0;

struct NdArray {
  std::vector<std::uint64_t> dims;
  std::vector<double> data;  // row-major

  std::size_t element_count() const;
};

void write_array(std::ostream& os, const NdArray& a);
NdArray read_array(std::istream& is);

void save_array(const std::filesystem::path& path, const NdArray& a);
NdArray load_array(const std::filesystem::path& path);

NdArray from_matrix(const Matrix& m);
NdArray from_vector(const Vector& v);
/// Stacks equally shaped matrices into a (count, rows, cols) array.
NdArray from_stack(const std::vector<Matrix>& ms);

/// 1D arrays become a column; 2D arrays keep their shape.
Matrix to_matrix(const NdArray& a);
Vector to_vector(const NdArray& a);
/// 3D arrays split along the first axis; a 2D array is a stack of one.
std::vector<Matrix> to_stack(const NdArray& a);

void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);
void save_stack(const std::filesystem::path& path, const std::vector<Matrix>& ms);
std::vector<Matrix> load_stack(const std::filesystem::path& path);

// CSV mirror for 1D/2D: one row per line, comma separated, round-trip precision.
void write_csv(std::ostream& os, const Matrix& m);
Matrix read_csv(std::istream& is);
void save_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_csv(const std::filesystem::path& path);

/// Dispatches on extension: ".csv" reads CSV, anything else the binary format.
Matrix load_matrix_any(const std::filesystem::path& path);

}  // namespace bsr::io
