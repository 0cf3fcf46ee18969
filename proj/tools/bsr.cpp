#include "bsr/bista.hpp"
#include "bsr/config.hpp"
#include "bsr/datagen.hpp"
#include "bsr/ingest.hpp"
#include "bsr/io.hpp"
#include "bsr/kernels.hpp"
#include "bsr/lbista.hpp"
#include "bsr/metrics.hpp"
#include "bsr/serialize.hpp"
#include "bsr/svg.hpp"
#include "bsr/train.hpp"
#include "bsr/version.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace bsr;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

// Resolved configuration and tool version, written into every output directory.
void write_run_record(const fs::path& dir, const std::string& command, const Json& config) {
  fs::create_directories(dir);
  write_json(dir / "run.json", {{"tool", kToolName}, {"version", kVersion}, {"command", command}, {"config", config}});
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

double mean_square(const std::vector<Matrix>& ms) {
  double sum = 0.0;
  double count = 0.0;
  for (const auto& m : ms) {
    sum += m.squaredNorm();
    count += static_cast<double>(m.size());
  }
  return count > 0.0 ? sum / count : 0.0;
}

// Signal power over noise power measured on the generated data itself.
Json realized_snr(const LinearModel& model, const std::vector<const ProblemSet*>& sets) {
  std::vector<Matrix> clean, noise;
  for (const auto* s : sets) {
    for (std::size_t e = 0; e < s->size(); ++e) {
      Matrix c = apply(model, s->x[e]);
      noise.push_back(s->y[e] - c);
      clean.push_back(std::move(c));
    }
  }
  const double ps = mean_square(clean);
  const double pn = mean_square(noise);
  return {{"signal_power", ps}, {"noise_power", pn}, {"snr_db", json_number(10.0 * std::log10(ps / pn))}};
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  fs::path config;
  fs::path out;
};

int run_gen(const GenArgs& a) {
  const Json doc = read_json(a.config);
  Json manifest{{"format_version", kFormatVersion}, {"tool", kToolName}, {"version", kVersion}, {"case", a.kind}};
  if (a.kind == "gaussian") {
    const auto cfg = gaussian_config_from_json(doc);
    const auto p = gen_gaussian_problem(cfg);
    save_model(a.out, p.model);
    save_problem_set(a.out, "train", p.train);
    save_problem_set(a.out, "test", p.test);
    manifest["config"] = to_json(cfg);
    manifest["noise_variance"] = p.noise_variance;
    manifest["snr_reference"] = "mu^2 = pnz * N_r * N_meas / N_d (expected power of A vec(X))";
    manifest["realized"] = realized_snr(p.model, {&p.train, &p.test});
    manifest["splits"] = {{"train", p.train.size()}, {"test", p.test.size()}};
    write_run_record(a.out, "gen gaussian", to_json(cfg));
  } else {
    const auto cfg = thermal_config_from_json(doc);
    const auto p = gen_thermal_problem(cfg);
    save_model(a.out, p.model);
    save_problem_set(a.out, "train", p.train);
    save_problem_set(a.out, "test", p.test);
    manifest["config"] = to_json(cfg);
    manifest["noise_variance"] = p.noise_variance;
    manifest["signal_power"] = p.signal_power;
    manifest["snr_reference"] = "mean squared clean measurement over all train and test elements";
    manifest["realized"] = realized_snr(p.model, {&p.train, &p.test});
    manifest["splits"] = {{"train", p.train.size()}, {"test", p.test.size()}};
    manifest["warnings"] = p.warnings;
    for (const auto& w : p.warnings) std::cerr << "warning: " << w << '\n';
    write_run_record(a.out, "gen thermal", to_json(cfg));
  }
  manifest["seed_streams"] = {{"operator_matrix", 1}, {"support", 2}, {"values", 3}, {"noise", 4},
                              {"defect", 5},          {"illumination", 6}};
  write_json(a.out / "manifest.json", manifest);
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  fs::path data;
  std::string mode;
  fs::path config;
  fs::path out;
};

void plot_loss(const fs::path& path, const TrainReport& r) {
  svg::Series s;
  s.label = "training loss";
  double step = 0.0;
  for (const auto& st : r.stages) {
    for (double l : st.loss) {
      s.x.push_back(step++);
      s.y.push_back(l > 0.0 ? 10.0 * std::log10(l) : -INFINITY);
    }
  }
  svg::save(path.string(), {"Layerwise training (" + std::string(to_string(r.mode)) + ")", "Adam step",
                            "loss [dB]", {s}});
}

int run_train(const TrainArgs& a) {
  const Mode mode = mode_from_string(a.mode);
  auto doc = train_config_from_json(read_json(a.config), mode);
  const LinearModel model = load_model(a.data);
  if (!doc.gamma_given) doc.train.gamma = default_gamma(model);
  const ProblemSet train = load_problem_set(a.data, "train");
  if (train.size() == 0) throw ConfigError("dataset has no training elements");
  const TrainSet set = TrainSet::pack(BatchShape::of(model), train.x, train.y);

  const Json resolved = to_document(doc.train);
  auto [params, report] = train_layerwise(set, model, doc.train, [](const StageRecord& s) {
    std::cerr << "stage layer=" << s.layer << " kind=" << s.kind << " rate=" << s.rate << " steps=" << s.loss.size()
              << " loss=" << (s.loss.empty() ? NAN : s.loss.back()) << '\n';
  });

  write_run_record(a.out, "train", resolved);
  save_params(a.out / "params", params, {{"config", resolved}, {"data", fs::absolute(a.data).string()}});
  write_json(a.out / "report.json", to_json(report));
  auto os = open_out(a.out / "loss.csv");
  write_loss_csv(os, report);
  plot_loss(a.out / "loss.svg", report);
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string method;
  fs::path data;
  fs::path model;
  fs::path truth;
  fs::path params;
  fs::path out;
  double lambda = kDefaultLambda;
  double gamma = 0.0;  // 0: model default
  int iters = 500;
  long depth = 0;      // 0: all layers
};

// Dataset files live next to model.json; use it unless --model was given.
LinearModel resolve_model(const SolveArgs& a) {
  if (!a.model.empty()) return load_model(a.model);
  const fs::path guess = a.data.parent_path() / "model.json";
  if (!fs::exists(guess)) throw ConfigError("no --model given and no model.json next to the data file");
  return load_model(guess);
}

void plot_defects(const fs::path& path, const Matrix& profiles) {
  svg::Plot plot{"Defect estimate", "position [px]", "normalized amplitude", {}};
  const Index shown = std::min<Index>(profiles.cols(), 4);
  for (Index c = 0; c < shown; ++c) {
    svg::Series s;
    s.label = "instance " + std::to_string(c);
    s.color = kPalette[c % 6];
    for (Index k = 0; k < profiles.rows(); ++k) {
      s.x.push_back(static_cast<double>(k));
      s.y.push_back(profiles(k, c));
    }
    plot.series.push_back(std::move(s));
  }
  svg::save(path.string(), plot);
}

std::string trace_name(std::size_t i, std::size_t n) {
  return n == 1 ? "trace.csv" : "trace_" + std::to_string(i) + ".csv";
}

int run_solve(const SolveArgs& a) {
  const std::vector<Matrix> data = io::load_stack(a.data);
  std::vector<Matrix> truth;
  if (!a.truth.empty()) {
    truth = io::load_stack(a.truth);
    if (truth.size() != data.size()) throw DimensionError("--truth and --data hold different instance counts");
  }
  fs::create_directories(a.out / "traces");
  std::vector<Matrix> estimates;
  Json resolved{{"schema_version", kSchemaVersion},
                {"method", a.method},
                {"data", fs::absolute(a.data).string()},
                {"truth", a.truth.empty() ? Json() : Json(fs::absolute(a.truth).string())}};

  if (a.method == "bista") {
    const LinearModel model = resolve_model(a);
    const double gamma = a.gamma > 0.0 ? a.gamma : default_gamma(model);
    resolved["lambda"] = a.lambda;
    resolved["gamma"] = gamma;
    resolved["iters"] = a.iters;
    for (std::size_t i = 0; i < data.size(); ++i) {
      // NMSE is undefined against an all-zero truth; that trace leaves the column empty.
      auto gt = truth.empty() || truth[i].squaredNorm() == 0.0 ? std::optional<MMVSignal>{}
                                                               : std::optional<MMVSignal>{truth[i]};
      auto r = bista_solve(model, data[i], a.lambda, gamma, a.iters, gt);
      auto os = open_out(a.out / "traces" / trace_name(i, data.size()));
      write_trace_csv(os, r.trace);
      estimates.push_back(std::move(r.x));
    }
  } else {
    const NetworkParams params = load_params(a.params);
    const Index depth = a.depth > 0 ? a.depth : params.layers;
    resolved["params"] = fs::absolute(a.params).string();
    resolved["depth"] = depth;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Matrix y = params.shape.pack_data({data[i]});
      const auto t0 = std::chrono::steady_clock::now();
      const ForwardTape tape = forward_tape(params, y, depth);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      auto os = open_out(a.out / "traces" / trace_name(i, data.size()));
      os.precision(17);
      os << "layer,nmse_db,seconds\n";
      for (Index d = 0; d <= depth; ++d) {
        os << d << ',';
        if (!truth.empty() && truth[i].squaredNorm() > 0.0) {
          const double v = nmse_db(params.shape.unpack_signal(tape.x[d], 0), truth[i]);
          if (std::isinf(v)) os << (v < 0 ? "-inf" : "inf"); else os << v;
        }
        os << ',' << (d == depth ? secs : 0.0) << '\n';
      }
      estimates.push_back(params.shape.unpack_signal(tape.x[depth], 0));
    }
  }

  write_run_record(a.out, "solve " + a.method, resolved);
  if (estimates.size() == 1) io::save_matrix(a.out / "xhat.bsr", estimates.front());
  else io::save_stack(a.out / "xhat.bsr", estimates);

  Matrix profiles(estimates.front().rows(), static_cast<Index>(estimates.size()));
  for (std::size_t i = 0; i < estimates.size(); ++i) profiles.col(static_cast<Index>(i)) = defect_estimate(estimates[i]);
  io::save_csv(a.out / "defect_profile.csv", profiles);
  plot_defects(a.out / "defect_profile.svg", profiles);
  return 0;
}

// ---------------------------------------------------------------- preprocess

struct PreprocessArgs {
  fs::path sequences;
  fs::path out;
};

int run_preprocess(const PreprocessArgs& a) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.sequences)) {
    if (e.is_regular_file() && e.path().extension() == ".bsr") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .bsr sequences in " + a.sequences.string());

  std::vector<Vector> reduced;
  Json chosen = Json::array();
  for (const auto& f : files) {
    const ThermalSequence seq = load_sequence(f);
    const Thermogram mt = maximum_thermogram(vertical_mean(seq));
    chosen.push_back({{"file", f.filename().string()}, {"frame", mt.frame}, {"frames", seq.n_t()}});
    reduced.push_back(mt.values);
  }
  const MeasurementSet y = assemble_measurements(reduced);
  const fs::path dir = a.out.has_parent_path() ? a.out.parent_path() : fs::path(".");
  fs::create_directories(dir);
  io::save_matrix(a.out, y);
  write_json(fs::path(a.out).concat(".manifest.json"),
             {{"tool", kToolName},
              {"version", kVersion},
              {"command", "preprocess"},
              {"config", {{"schema_version", kSchemaVersion},
                          {"sequences", fs::absolute(a.sequences).string()},
                          {"selector", "max mean rise after background subtraction"}}},
              {"shape", {y.rows(), y.cols()}},
              {"chosen_frames", chosen}});
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::vector<fs::path> estimates;
  std::vector<std::string> labels;
  fs::path truth;
  fs::path defect;
  std::vector<fs::path> curves;
  fs::path out;
};

// nmse_db column of every CSV in `dir`, one vector per file.
std::vector<std::vector<double>> read_curves(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::vector<double>> curves;
  for (const auto& f : files) {
    std::ifstream is(f);
    std::string line;
    std::getline(is, line);
    std::vector<std::string> header;
    for (std::size_t p = 0, q; p <= line.size(); p = q + 1) {
      q = line.find(',', p);
      if (q == std::string::npos) q = line.size();
      header.push_back(line.substr(p, q - p));
    }
    const auto col = std::find(header.begin(), header.end(), "nmse_db") - header.begin();
    if (col == static_cast<long>(header.size())) throw IoError(f.string() + ": no nmse_db column");
    std::vector<double> c;
    std::size_t blank = 0, rows = 0;
    while (std::getline(is, line)) {
      ++rows;
      std::size_t p = 0;
      for (long k = 0; k < col; ++k) p = line.find(',', p) + 1;
      const std::string cell = line.substr(p, line.find(',', p) - p);
      if (cell.empty()) {
        ++blank;
        continue;
      }
      c.push_back(cell == "-inf" ? -INFINITY : cell == "inf" ? INFINITY : std::stod(cell));
    }
    // A trace solved against an all-zero truth has no NMSE at all and is left out.
    if (rows > 0 && blank == rows) continue;
    if (blank > 0) throw IoError(f.string() + ": missing nmse_db value");
    curves.push_back(std::move(c));
  }
  if (curves.size() < 2) throw ConfigError("a confidence curve needs at least two trace files in " + dir.string());
  return curves;
}

Json interval_json(const Interval& iv) {
  return {{"mean", json_number(iv.mean)}, {"lower", json_number(iv.lower)}, {"upper", json_number(iv.upper)}};
}

// NaN marks an instance without a defined value.
Json summary_json(const std::vector<double>& v) {
  std::vector<double> valid;
  for (double x : v)
    if (!std::isnan(x)) valid.push_back(x);
  if (valid.empty()) return nullptr;
  Json j = valid.size() >= 2 ? interval_json(ci95(valid)) : Json{{"mean", json_number(valid[0])}};
  j["count"] = valid.size();
  return j;
}

int run_eval(const EvalArgs& a) {
  const std::vector<Matrix> truth = io::load_stack(a.truth);
  std::vector<Vector> defects;
  if (!a.defect.empty()) {
    for (const auto& m : io::load_stack(a.defect)) defects.emplace_back(Eigen::Map<const Vector>(m.data(), m.size()));
    if (defects.size() != truth.size()) throw DimensionError("--defect and --truth hold different instance counts");
  } else {
    for (const auto& t : truth) defects.push_back(defect_estimate(t));
  }

  Json report{{"format_version", kFormatVersion},
              {"interval", "normal approximation, mean +/- 1.96 s / sqrt(n)"},
              {"instances", truth.size()}};
  Json per_estimate = Json::array();
  std::vector<std::vector<double>> nmse_all, w_all;
  for (std::size_t e = 0; e < a.estimates.size(); ++e) {
    const std::vector<Matrix> est = io::load_stack(a.estimates[e]);
    if (est.size() != truth.size()) throw DimensionError("--estimate and --truth hold different instance counts");
    std::vector<double> nmse, w;
    Json w_json = Json::array();
    for (std::size_t i = 0; i < est.size(); ++i) {
      nmse.push_back(truth[i].squaredNorm() > 0.0 ? nmse_db(est[i], truth[i]) : NAN);
      const Vector target = clamp_nonnegative(defects[i]);
      const Vector mine = clamp_nonnegative(defect_estimate(est[i]));
      if (target.sum() <= 0.0) {
        w.push_back(NAN);
        w_json.push_back(nullptr);
      } else {
        // An estimate without positive mass is as far from the truth as possible.
        w.push_back(mine.sum() > 0.0 ? wasserstein1(mine, target) : 1.0);
        w_json.push_back(w.back());
      }
    }
    Json entry{{"label", e < a.labels.size() ? a.labels[e] : a.estimates[e].stem().string()},
               {"file", fs::absolute(a.estimates[e]).string()},
               {"nmse_db", summary_json(nmse)},
               {"nmse_db_per_instance", Json::array()},
               {"wasserstein1", summary_json(w)},
               {"wasserstein1_per_instance", w_json}};
    for (double x : nmse) entry["nmse_db_per_instance"].push_back(std::isnan(x) ? Json() : json_number(x));
    per_estimate.push_back(entry);
    nmse_all.push_back(std::move(nmse));
    w_all.push_back(std::move(w));
  }
  report["estimates"] = per_estimate;

  if (a.estimates.size() >= 2) {
    // Pairwise against the first estimate: share of instances where the other is better.
    Json cmp = Json::array();
    for (std::size_t e = 1; e < a.estimates.size(); ++e) {
      std::size_t nmse_wins = 0, nmse_count = 0, w_wins = 0, w_count = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!std::isnan(nmse_all[0][i])) {
          ++nmse_count;
          nmse_wins += nmse_all[e][i] < nmse_all[0][i];
        }
        if (std::isfinite(w_all[0][i])) {
          ++w_count;
          w_wins += w_all[e][i] < w_all[0][i];
        }
      }
      cmp.push_back({{"reference", per_estimate[0]["label"]},
                     {"candidate", per_estimate[e]["label"]},
                     {"nmse_better_fraction",
                      nmse_count ? Json(static_cast<double>(nmse_wins) / static_cast<double>(nmse_count)) : Json()},
                     {"wasserstein_better_fraction",
                      w_count ? Json(static_cast<double>(w_wins) / static_cast<double>(w_count)) : Json()}});
    }
    report["comparison"] = cmp;
  }

  fs::create_directories(a.out);
  if (!a.curves.empty()) {
    svg::Plot plot{"NMSE over iterations", "iteration / layer", "NMSE [dB]", {}};
    Json curves = Json::array();
    for (std::size_t c = 0; c < a.curves.size(); ++c) {
      const NmseCurve curve = nmse_curve(read_curves(a.curves[c]));
      svg::Series s;
      s.label = a.curves[c].filename().string();
      s.color = kPalette[c % 6];
      s.lower.emplace();
      s.upper.emplace();
      Json pts = Json::array();
      for (std::size_t k = 0; k < curve.points.size(); ++k) {
        s.x.push_back(static_cast<double>(k));
        s.y.push_back(curve.points[k].mean);
        s.lower->push_back(curve.points[k].lower);
        s.upper->push_back(curve.points[k].upper);
        pts.push_back(interval_json(curve.points[k]));
      }
      plot.series.push_back(std::move(s));
      curves.push_back({{"source", fs::absolute(a.curves[c]).string()},
                        {"test_set_size", curve.test_set_size},
                        {"points", pts}});
    }
    report["curves"] = curves;
    svg::save((a.out / "nmse_curve.svg").string(), plot);
  }

  svg::Plot bars{"Per-instance NMSE", "instance", "NMSE [dB]", {}};
  for (std::size_t e = 0; e < nmse_all.size(); ++e) {
    svg::Series s;
    s.label = per_estimate[e]["label"].get<std::string>();
    s.color = kPalette[e % 6];
    for (std::size_t i = 0; i < nmse_all[e].size(); ++i) {
      s.x.push_back(static_cast<double>(i));
      s.y.push_back(nmse_all[e][i]);
    }
    bars.series.push_back(std::move(s));
  }
  svg::save((a.out / "nmse_instances.svg").string(), bars);

  Json resolved{{"schema_version", kSchemaVersion}, {"truth", fs::absolute(a.truth).string()}};
  if (!a.defect.empty()) resolved["defect"] = fs::absolute(a.defect).string();
  write_run_record(a.out, "eval", resolved);
  write_json(a.out / "metrics.json", report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse recovery: data generation, learned unrolled solvers and evaluation"};
  app.set_version_flag("--version", std::string(kVersion));
  int threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic dataset");
  g->add_option("case", gen.kind, "gaussian | thermal")->required()->check(CLI::IsMember({"gaussian", "thermal"}));
  g->add_option("--config", gen.config)->required();
  g->add_option("--out", gen.out)->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Layerwise training of the unrolled network");
  t->add_option("--data", tr.data, "Dataset directory")->required();
  t->add_option("--mode", tr.mode)->required()->check(CLI::IsMember({"tied", "untied"}));
  t->add_option("--config", tr.config)->required();
  t->add_option("--out", tr.out)->required();

  SolveArgs so;
  auto* s = app.add_subcommand("solve", "Reconstruct signals from measurements");
  s->add_option("method", so.method, "bista | lbista")->required()->check(CLI::IsMember({"bista", "lbista"}));
  s->add_option("--data", so.data, "Measurement file (2D, or 3D stack of instances)")->required();
  s->add_option("--out", so.out)->required();
  s->add_option("--model", so.model, "model.json or dataset directory (default: next to --data)");
  s->add_option("--truth", so.truth, "Ground truth for NMSE traces");
  s->add_option("--lambda", so.lambda);
  s->add_option("--gamma", so.gamma, "Step size (default 1/(sqrt(2) L))");
  s->add_option("--iters", so.iters)->check(CLI::PositiveNumber);
  s->add_option("--params", so.params, "Trained network directory");
  s->add_option("--depth", so.depth, "Layers to evaluate (default: all)")->check(CLI::NonNegativeNumber);

  PreprocessArgs pp;
  auto* p = app.add_subcommand("preprocess", "Maximum-thermogram reduction of thermal sequences");
  p->add_option("--sequences", pp.sequences)->required()->check(CLI::ExistingDirectory);
  p->add_option("--out", pp.out)->required();

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "NMSE and Wasserstein metrics");
  e->add_option("--estimate", ev.estimates)->required();
  e->add_option("--label", ev.labels);
  e->add_option("--truth", ev.truth)->required();
  e->add_option("--defect", ev.defect, "Ground-truth defect profiles (default: from --truth)");
  e->add_option("--curve", ev.curves, "Directory of trace CSVs");
  e->add_option("--out", ev.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    kernels::set_max_threads(threads);
    if (*g) return run_gen(gen);
    if (*t) return run_train(tr);
    if (*s) {
      if (so.method == "lbista" && so.params.empty()) throw ConfigError("solve lbista needs --params");
      return run_solve(so);
    }
    if (*p) return run_preprocess(pp);
    if (*e) return run_eval(ev);
  } catch (const NumericalAbort& err) {
    std::cerr << "numerical abort: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const IoError& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "i/o error: " << err.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
