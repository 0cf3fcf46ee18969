#include "bsr/ingest.hpp"

#include "bsr/io.hpp"

#include <cmath>

namespace bsr {

void ThermalSequence::validate() const {
  if (frames.empty()) throw DimensionError("thermal sequence has no frames");
  for (const auto& f : frames) {
    require_shape(f, {n_y(), n_r()}, "thermal frame");
    if (!f.allFinite()) throw ConfigError("thermal sequence contains non-finite values");
  }
}

Matrix vertical_mean(const ThermalSequence& seq) {
  seq.validate();
  Matrix out(seq.n_r(), seq.n_t());
  for (Index t = 0; t < seq.n_t(); ++t) out.col(t) = seq.frames[static_cast<std::size_t>(t)].colwise().mean().transpose();
  return out;
}

Index select_max_mean_rise(const Matrix& rise) {
  if (rise.cols() < 2) return 0;
  Index best = 1;
  double best_mean = rise.col(1).mean();
  for (Index t = 2; t < rise.cols(); ++t) {
    const double m = rise.col(t).mean();
    if (m > best_mean) {
      best_mean = m;
      best = t;
    }
  }
  return best;
}

Thermogram maximum_thermogram(const Matrix& profile, const FrameSelector& select) {
  if (profile.cols() < 1) throw DimensionError("maximum thermogram needs at least one frame");
  if (profile.cols() == 1) return {profile.col(0), 0};
  const Matrix rise = profile.colwise() - profile.col(0);
  const Index t = select(rise);
  if (t < 0 || t >= rise.cols()) throw DimensionError("frame selector returned an invalid frame");
  return {rise.col(t), t};
}

MeasurementSet assemble_measurements(const std::vector<Vector>& reduced) {
  if (reduced.empty()) throw DimensionError("no measurements to assemble");
  const Index n = reduced.front().size();
  MeasurementSet out(n, static_cast<Index>(reduced.size()));
  for (std::size_t m = 0; m < reduced.size(); ++m) {
    if (reduced[m].size() != n) throw DimensionError("ragged measurements: lengths differ");
    out.col(static_cast<Index>(m)) = reduced[m];
  }
  return out;
}

ThermalSequence load_sequence(const std::filesystem::path& path) {
  const io::NdArray a = io::load_array(path);
  if (a.dims.size() != 3) throw IoError(path.string() + ": expected a (N_y, N_r, N_t) array");
  const auto ny = static_cast<Index>(a.dims[0]);
  const auto nr = static_cast<Index>(a.dims[1]);
  const auto nt = static_cast<Index>(a.dims[2]);
  ThermalSequence s;
  s.frames.assign(static_cast<std::size_t>(nt), Matrix(ny, nr));
  for (Index y = 0; y < ny; ++y)
    for (Index r = 0; r < nr; ++r)
      for (Index t = 0; t < nt; ++t)
        s.frames[static_cast<std::size_t>(t)](y, r) = a.data[static_cast<std::size_t>((y * nr + r) * nt + t)];
  return s;
}

void save_sequence(const std::filesystem::path& path, const ThermalSequence& seq) {
  seq.validate();
  io::NdArray a;
  const Index ny = seq.n_y(), nr = seq.n_r(), nt = seq.n_t();
  a.dims = {static_cast<std::uint64_t>(ny), static_cast<std::uint64_t>(nr), static_cast<std::uint64_t>(nt)};
  a.data.resize(static_cast<std::size_t>(ny * nr * nt));
  for (Index y = 0; y < ny; ++y)
    for (Index r = 0; r < nr; ++r)
      for (Index t = 0; t < nt; ++t)
        a.data[static_cast<std::size_t>((y * nr + r) * nt + t)] = seq.frames[static_cast<std::size_t>(t)](y, r);
  io::save_array(path, a);
}

}  // namespace bsr
