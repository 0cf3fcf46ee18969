#include "bsr/serialize.hpp"

#include "bsr/io.hpp"
#include "bsr/version.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace bsr {
namespace fs = std::filesystem;

namespace {

fs::path manifest_path(const fs::path& p, const char* name) {
  return fs::is_directory(p) ? p / name : p;
}

Json shape_json(const Weight& w) {
  if (const auto* cw = std::get_if<ConvWeight>(&w)) return Json::array({cw->taps.size()});
  const auto& m = std::get<Matrix>(w);
  return Json::array({m.rows(), m.cols()});
}

Json save_weight(const fs::path& dir, const std::string& stem, const Weight& w) {
  Json j;
  j["file"] = stem + ".bsr";
  j["shape"] = shape_json(w);
  if (const auto* cw = std::get_if<ConvWeight>(&w)) {
    io::save_array(dir / (stem + ".bsr"), io::from_vector(Eigen::Map<const Vector>(cw->taps.data(), static_cast<Index>(cw->taps.size()))));
    Json corners = Json::array();
    for (std::size_t i = 0; i < cw->boundary.size(); ++i) {
      const std::string f = stem + "_corner" + std::to_string(i) + ".bsr";
      io::save_matrix(dir / f, cw->boundary[i].block);
      corners.push_back({{"offset", cw->boundary[i].offset}, {"file", f}});
    }
    j["corners"] = corners;
  } else {
    io::save_matrix(dir / (stem + ".bsr"), std::get<Matrix>(w));
  }
  return j;
}

Weight load_weight(const fs::path& dir, const Json& j, bool conv) {
  const fs::path file = dir / j.at("file").get<std::string>();
  if (conv) {
    const Vector v = io::to_vector(io::load_array(file));
    ConvWeight cw;
    cw.taps.assign(v.data(), v.data() + v.size());
    if (j.contains("corners")) {
      for (const auto& c : j.at("corners")) {
        cw.boundary.push_back({c.at("offset").get<Index>(), io::load_matrix(dir / c.at("file").get<std::string>())});
      }
    }
    return cw;
  }
  return io::load_matrix(file);
}

}  // namespace

Json json_number(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  return v;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IoError("write failed: " + path.string());
}

Json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_params(const fs::path& dir, const NetworkParams& p, const Json& provenance) {
  p.validate();
  fs::create_directories(dir);
  Json j;
  j["format_version"] = kFormatVersion;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["mode"] = std::string(to_string(p.mode));
  j["layers"] = p.layers;
  j["signal"] = {{"kind", p.shape.conv ? "conv" : "dense"},
                 {"n_r", p.shape.n_r},
                 {"n_meas", p.shape.n_meas},
                 {"data_rows", p.shape.data_rows}};
  j["lambda"] = p.lambda;
  Json b = Json::array(), s = Json::array();
  for (std::size_t i = 0; i < p.B.size(); ++i) b.push_back(save_weight(dir, "B_" + std::to_string(i), p.B[i]));
  for (std::size_t i = 0; i < p.S.size(); ++i) s.push_back(save_weight(dir, "S_" + std::to_string(i), p.S[i]));
  j["weights"] = {{"B", b}, {"S", s}};
  if (!provenance.is_null()) j["training"] = provenance;
  write_json(dir / "params.json", j);
}

NetworkParams load_params(const fs::path& path) {
  const fs::path manifest = manifest_path(path, "params.json");
  const fs::path dir = manifest.parent_path();
  const Json j = read_json(manifest);
  try {
    NetworkParams p;
    p.mode = mode_from_string(j.at("mode").get<std::string>());
    p.layers = j.at("layers").get<Index>();
    const auto& sig = j.at("signal");
    p.shape.conv = sig.at("kind").get<std::string>() == "conv";
    p.shape.n_r = sig.at("n_r").get<Index>();
    p.shape.n_meas = sig.at("n_meas").get<Index>();
    p.shape.data_rows = sig.at("data_rows").get<Index>();
    p.lambda = j.at("lambda").get<std::vector<double>>();
    for (const auto& w : j.at("weights").at("B")) p.B.push_back(load_weight(dir, w, p.shape.conv));
    for (const auto& w : j.at("weights").at("S")) p.S.push_back(load_weight(dir, w, p.shape.conv));
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
}

void save_model(const fs::path& dir, const LinearModel& model) {
  fs::create_directories(dir);
  Json j;
  j["format_version"] = kFormatVersion;
  if (model.is_conv()) {
    const auto& k = model.kernel();
    io::save_array(dir / "kernel.bsr", io::from_vector(Eigen::Map<const Vector>(k.taps.data(), k.size())));
    j["kind"] = "conv";
    j["kernel"] = "kernel.bsr";
    j["pixel_pitch"] = k.pixel_pitch;
  } else {
    io::save_matrix(dir / "A.bsr", model.dense_model().entries);
    j["kind"] = "dense";
    j["matrix"] = "A.bsr";
  }
  j["n_r"] = model.signal_shape().rows;
  j["n_meas"] = model.signal_shape().cols;
  write_json(dir / "model.json", j);
}

LinearModel load_model(const fs::path& path) {
  const fs::path manifest = manifest_path(path, "model.json");
  const fs::path dir = manifest.parent_path();
  const Json j = read_json(manifest);
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto n_r = j.at("n_r").get<Index>();
    const auto n_meas = j.at("n_meas").get<Index>();
    if (kind == "conv") {
      const Vector v = io::to_vector(io::load_array(dir / j.at("kernel").get<std::string>()));
      ConvKernel k{{v.data(), v.data() + v.size()}, j.value("pixel_pitch", 1.0)};
      return LinearModel::conv(std::move(k), n_r, n_meas);
    }
    if (kind == "dense") {
      return LinearModel::dense({io::load_matrix(dir / j.at("matrix").get<std::string>()), n_r, n_meas});
    }
    throw ConfigError("unknown model kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
}

void save_problem_set(const fs::path& dir, const std::string& name, const ProblemSet& set) {
  fs::create_directories(dir);
  io::save_stack(dir / ("x_" + name + ".bsr"), set.x);
  io::save_stack(dir / ("y_" + name + ".bsr"), set.y);
  if (!set.defect.empty()) {
    std::vector<Matrix> a(set.defect.begin(), set.defect.end());
    io::save_stack(dir / ("a_" + name + ".bsr"), a);
  }
}

ProblemSet load_problem_set(const fs::path& dir, const std::string& name) {
  ProblemSet s;
  s.x = io::load_stack(dir / ("x_" + name + ".bsr"));
  s.y = io::load_stack(dir / ("y_" + name + ".bsr"));
  if (s.x.size() != s.y.size()) throw IoError("x and y stacks differ in length for split " + name);
  const fs::path a = dir / ("a_" + name + ".bsr");
  if (fs::exists(a)) {
    for (auto& m : io::load_stack(a)) s.defect.emplace_back(Eigen::Map<const Vector>(m.data(), m.size()));
  }
  return s;
}

Json to_json(const TrainConfig& cfg) {
  return {{"mode", std::string(to_string(cfg.mode))},
          {"layers", cfg.layers},
          {"gamma", cfg.gamma},
          {"lambda0", cfg.lambda0},
          {"rate", cfg.rate},
          {"refinements", cfg.refinements},
          {"max_iter", cfg.max_iter},
          {"seed", cfg.seed}};
}

Json to_json(const TrainReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json vars = Json::array();
    for (auto v : s.variables) vars.push_back(to_string(v));
    stages.push_back({{"layer", s.layer},
                      {"kind", s.kind},
                      {"rate", s.rate},
                      {"steps", s.loss.size()},
                      {"variables", vars},
                      {"initial_loss", s.loss.empty() ? Json() : json_number(s.loss.front())},
                      {"final_loss", s.loss.empty() ? Json() : json_number(s.loss.back())}});
  }
  return {{"format_version", kFormatVersion},
          {"mode", std::string(to_string(r.mode))},
          {"seed", r.seed},
          {"total_steps", r.total_steps},
          {"initial_loss", json_number(r.initial_loss())},
          {"final_loss", json_number(r.final_loss())},
          {"final_lambda", r.final_lambda},
          {"stages", stages},
          {"timing", {{"wall_seconds", r.seconds}}}};
}

void write_loss_csv(std::ostream& os, const TrainReport& r) {
  os << "stage,layer,kind,rate,step,loss\n";
  os.precision(17);
  for (std::size_t s = 0; s < r.stages.size(); ++s) {
    const auto& st = r.stages[s];
    for (std::size_t i = 0; i < st.loss.size(); ++i) {
      os << s << ',' << st.layer << ',' << st.kind << ',' << st.rate << ',' << i << ',' << st.loss[i] << '\n';
    }
  }
}

}  // namespace bsr
