#include "bsr/datagen.hpp"

#include <cmath>
#include <sstream>

namespace bsr {
namespace {

double noise_variance_for(double mu2, double snr_db) { return mu2 / std::pow(10.0, snr_db / 10.0); }

void add_noise(Matrix& y, double sigma, Rng& rng) {
  if (sigma == 0.0) return;
  std::normal_distribution<double> n01(0.0, 1.0);
  for (Index c = 0; c < y.cols(); ++c)
    for (Index r = 0; r < y.rows(); ++r) y(r, c) += sigma * n01(rng);
}

}  // namespace

void GaussianCaseConfig::validate() const {
  if (n_r < 1 || n_meas < 1 || n_d < 1 || n_train < 0 || n_test < 0) {
    throw ConfigError("gaussian case: dimensions must be positive");
  }
  if (!(pnz > 0.0 && pnz <= 1.0)) throw ConfigError("gaussian case: pnz must lie in (0, 1]");
  if (!std::isfinite(snr_db)) throw ConfigError("gaussian case: snr must be finite");
}

GaussianProblem gen_gaussian_problem(const GaussianCaseConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n_r * cfg.n_meas;
  Rng arng = make_rng(cfg.seed, Stream::operator_matrix);
  std::normal_distribution<double> a_dist(0.0, 1.0 / std::sqrt(static_cast<double>(cfg.n_d)));
  Matrix a(cfg.n_d, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < cfg.n_d; ++r) a(r, c) = a_dist(arng);

  GaussianProblem p{LinearModel::dense({a, cfg.n_r, cfg.n_meas}), {}, {}, 0.0};
  const double mu2 = cfg.pnz * static_cast<double>(n) / static_cast<double>(cfg.n_d);
  p.noise_variance = noise_variance_for(mu2, cfg.snr_db);
  const double sigma = std::sqrt(p.noise_variance);

  auto make = [&](Index count, Index first_index, ProblemSet& set) {
    for (Index e = 0; e < count; ++e) {
      const auto idx = static_cast<std::uint64_t>(first_index + e);
      Rng srng = make_rng(cfg.seed, Stream::support, idx);
      Rng vrng = make_rng(cfg.seed, Stream::values, idx);
      Rng nrng = make_rng(cfg.seed, Stream::noise, idx);
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      std::normal_distribution<double> n01(0.0, 1.0);
      MMVSignal x = MMVSignal::Zero(cfg.n_r, cfg.n_meas);
      for (Index k = 0; k < cfg.n_r; ++k) {
        if (u01(srng) >= cfg.pnz) continue;
        for (Index m = 0; m < cfg.n_meas; ++m) x(k, m) = n01(vrng);
      }
      Matrix y = apply(p.model, x);
      add_noise(y, sigma, nrng);
      set.x.push_back(std::move(x));
      set.y.push_back(std::move(y));
    }
  };
  make(cfg.n_train, 0, p.train);
  make(cfg.n_test, cfg.n_train, p.test);
  return p;
}

void ThermalPSFConfig::validate() const {
  if (!(diffusivity >= 0.0) || !(evaluation_time >= 0.0) || !(pulse_length >= 0.0)) {
    throw ConfigError("psf: physical parameters must be nonnegative");
  }
  if (!(amplitude > 0.0)) throw ConfigError("psf: amplitude must be positive");
  if (kernel_radius < 0) throw ConfigError("psf: kernel_radius must be nonnegative");
}

void ThermalCaseConfig::validate() const {
  if (n_r < 1 || n_meas < 1 || n_train < 0 || n_test < 0) throw ConfigError("thermal case: bad dimensions");
  if (!(defect_width > 0.0) || !(line_width > 0.0) || !(pixel_pitch > 0.0)) {
    throw ConfigError("thermal case: widths and pitch must be positive");
  }
  if (!(defect_pnz >= 0.0 && defect_pnz <= 1.0) || !(illum_pnz >= 0.0 && illum_pnz <= 1.0)) {
    throw ConfigError("thermal case: pnz must lie in [0, 1]");
  }
  for (double a : {absorption_low, absorption_high}) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("thermal case: absorption levels must lie in [0, 1]");
  }
  psf.validate();
}

Index run_pixels(double width, double pixel_pitch) {
  return std::max<Index>(1, static_cast<Index>(std::llround(width / pixel_pitch)));
}

Vector paint_runs(Index n, const std::vector<Index>& centers, Index width_px, double low, double high) {
  Vector v = Vector::Constant(n, low);
  for (Index c : centers) {
    const Index start = c - width_px / 2;
    for (Index i = std::max<Index>(0, start); i < std::min<Index>(n, start + width_px); ++i) v[i] = high;
  }
  return v;
}

std::vector<Index> draw_centers(Index n, double p, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Index> centers;
  for (Index i = 0; i < n; ++i) {
    if (u01(rng) < p) centers.push_back(i);
  }
  return centers;
}

Vector gen_defect_pattern(const ThermalCaseConfig& cfg, Rng& rng) {
  return paint_runs(cfg.n_r, draw_centers(cfg.n_r, cfg.defect_pnz, rng),
                    run_pixels(cfg.defect_width, cfg.pixel_pitch), cfg.absorption_low, cfg.absorption_high);
}

Vector gen_illumination(const ThermalCaseConfig& cfg, Rng& rng) {
  return paint_runs(cfg.n_r, draw_centers(cfg.n_r, cfg.illum_pnz, rng),
                    run_pixels(cfg.line_width, cfg.pixel_pitch), 0.0, 1.0);
}

ConvKernel thermal_psf(const ThermalPSFConfig& cfg, double pixel_pitch, std::vector<std::string>* warnings) {
  cfg.validate();
  const double t_eff = cfg.evaluation_time + 0.5 * cfg.pulse_length;
  const double spread = 4.0 * cfg.diffusivity * t_eff;  // length^2
  const Index radius = cfg.kernel_radius;
  ConvKernel k;
  k.pixel_pitch = pixel_pitch;
  k.taps.assign(static_cast<std::size_t>(2 * radius + 1), 0.0);
  auto profile = [&](Index r) {
    if (spread == 0.0) return r == 0 ? 1.0 : 0.0;
    const double d = static_cast<double>(r) * pixel_pitch;
    return std::exp(-d * d / spread);
  };
  double sum = 0.0;
  for (Index r = -radius; r <= radius; ++r) {
    const double v = profile(r);
    k.taps[static_cast<std::size_t>(r + radius)] = v;
    sum += v;
  }
  for (auto& t : k.taps) t = cfg.amplitude * t / sum;

  if (warnings != nullptr && spread > 0.0) {
    // Untruncated mass: sum out to where the Gaussian is negligible.
    const double sigma_px = std::sqrt(spread / 2.0) / pixel_pitch;
    const auto far = static_cast<Index>(std::ceil(12.0 * sigma_px)) + radius + 1;
    double total = 0.0;
    for (Index r = -far; r <= far; ++r) total += profile(r);
    if (sum < 0.999 * total) {
      std::ostringstream msg;
      msg << "psf kernel_radius " << radius << " holds only " << 100.0 * sum / total
          << "% of the kernel mass (< 99.9%)";
      warnings->push_back(msg.str());
    }
  }
  return k;
}

ThermalProblem gen_thermal_problem(const ThermalCaseConfig& cfg) {
  cfg.validate();
  std::vector<std::string> warnings;
  ConvKernel kernel = thermal_psf(cfg.psf, cfg.pixel_pitch, &warnings);
  ThermalProblem p{LinearModel::conv(std::move(kernel), cfg.n_r, cfg.n_meas), {}, {}, 0.0, 0.0, std::move(warnings)};

  auto make_clean = [&](Index count, Index first_index, ProblemSet& set) {
    for (Index e = 0; e < count; ++e) {
      const auto idx = static_cast<std::uint64_t>(first_index + e);
      Rng drng = make_rng(cfg.seed, Stream::defect, idx);
      Rng irng = make_rng(cfg.seed, Stream::illumination, idx);
      Vector a = gen_defect_pattern(cfg, drng);
      MMVSignal x(cfg.n_r, cfg.n_meas);
      for (Index m = 0; m < cfg.n_meas; ++m) x.col(m) = gen_illumination(cfg, irng).cwiseProduct(a);
      set.y.push_back(apply(p.model, x));
      set.x.push_back(std::move(x));
      set.defect.push_back(std::move(a));
    }
  };
  make_clean(cfg.n_train, 0, p.train);
  make_clean(cfg.n_test, cfg.n_train, p.test);

  double energy = 0.0;
  double count = 0.0;
  for (const auto* set : {&p.train, &p.test}) {
    for (const auto& y : set->y) {
      energy += y.squaredNorm();
      count += static_cast<double>(y.size());
    }
  }
  p.signal_power = count > 0.0 ? energy / count : 0.0;
  p.noise_variance = noise_variance_for(p.signal_power, cfg.snr_db);
  const double sigma = std::sqrt(p.noise_variance);
  auto noisy = [&](ProblemSet& set, Index first_index) {
    for (std::size_t e = 0; e < set.y.size(); ++e) {
      Rng nrng = make_rng(cfg.seed, Stream::noise, static_cast<std::uint64_t>(first_index) + e);
      add_noise(set.y[e], sigma, nrng);
    }
  };
  noisy(p.train, 0);
  noisy(p.test, cfg.n_train);
  return p;
}

}  // namespace bsr
