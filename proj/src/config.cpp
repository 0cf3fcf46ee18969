#include "bsr/config.hpp"

#include <set>

namespace bsr {
namespace {

// Reads fields of one JSON object and remembers which keys were consumed.
class Fields {
 public:
  Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <class T>
  bool get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) return false;
    try {
      out = it->template get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
    return true;
  }

  template <class T>
  void require(const char* key, T& out) {
    if (!get(key, out)) throw ConfigError(where_ + ": missing key '" + key + "'");
  }

  const Json& object(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) throw ConfigError(where_ + ": missing section '" + key + "'");
    return *it;
  }

  bool has(const char* key) const { return obj_.contains(key); }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!seen_.count(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const Json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

std::uint64_t read_header(Fields& top, std::uint64_t seed) {
  int version = 0;
  top.require("schema_version", version);
  if (version != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  }
  top.get("seed", seed);
  return seed;
}

Json header(std::uint64_t seed) { return {{"schema_version", kSchemaVersion}, {"seed", seed}}; }

}  // namespace

GaussianCaseConfig gaussian_config_from_json(const Json& doc) {
  GaussianCaseConfig c;
  Fields top(doc, "config");
  c.seed = read_header(top, c.seed);
  Fields g(top.object("gaussian"), "gaussian");
  g.get("n_r", c.n_r);
  g.get("n_meas", c.n_meas);
  g.get("n_d", c.n_d);
  g.get("n_train", c.n_train);
  g.get("n_test", c.n_test);
  g.get("pnz", c.pnz);
  g.get("snr_db", c.snr_db);
  g.finish();
  top.finish();
  c.validate();
  return c;
}

Json to_json(const GaussianCaseConfig& c) {
  Json j = header(c.seed);
  j["gaussian"] = {{"n_r", c.n_r},         {"n_meas", c.n_meas}, {"n_d", c.n_d},
                   {"n_train", c.n_train}, {"n_test", c.n_test}, {"pnz", c.pnz},
                   {"snr_db", c.snr_db}};
  return j;
}

ThermalCaseConfig thermal_config_from_json(const Json& doc) {
  ThermalCaseConfig c;
  Fields top(doc, "config");
  c.seed = read_header(top, c.seed);
  Fields t(top.object("thermal"), "thermal");
  t.get("n_r", c.n_r);
  t.get("n_meas", c.n_meas);
  t.get("n_train", c.n_train);
  t.get("n_test", c.n_test);
  t.get("defect_width", c.defect_width);
  t.get("defect_pnz", c.defect_pnz);
  t.get("absorption_low", c.absorption_low);
  t.get("absorption_high", c.absorption_high);
  t.get("line_width", c.line_width);
  t.get("illum_pnz", c.illum_pnz);
  t.get("snr_db", c.snr_db);
  t.get("pixel_pitch", c.pixel_pitch);
  if (t.has("psf")) {
    Fields p(t.object("psf"), "thermal.psf");
    p.get("diffusivity", c.psf.diffusivity);
    p.get("evaluation_time", c.psf.evaluation_time);
    p.get("pulse_length", c.psf.pulse_length);
    p.get("amplitude", c.psf.amplitude);
    p.get("kernel_radius", c.psf.kernel_radius);
    p.finish();
  }
  t.finish();
  top.finish();
  c.validate();
  return c;
}

Json to_json(const ThermalCaseConfig& c) {
  Json j = header(c.seed);
  j["thermal"] = {{"n_r", c.n_r},
                  {"n_meas", c.n_meas},
                  {"n_train", c.n_train},
                  {"n_test", c.n_test},
                  {"defect_width", c.defect_width},
                  {"defect_pnz", c.defect_pnz},
                  {"absorption_low", c.absorption_low},
                  {"absorption_high", c.absorption_high},
                  {"line_width", c.line_width},
                  {"illum_pnz", c.illum_pnz},
                  {"snr_db", c.snr_db},
                  {"pixel_pitch", c.pixel_pitch},
                  {"psf",
                   {{"diffusivity", c.psf.diffusivity},
                    {"evaluation_time", c.psf.evaluation_time},
                    {"pulse_length", c.psf.pulse_length},
                    {"amplitude", c.psf.amplitude},
                    {"kernel_radius", c.psf.kernel_radius}}}};
  return j;
}

TrainDocument train_config_from_json(const Json& doc, Mode mode) {
  TrainDocument d;
  d.train.mode = mode;
  Fields top(doc, "config");
  d.train.seed = read_header(top, d.train.seed);
  Fields t(top.object("train"), "train");
  std::string mode_name;
  if (t.get("mode", mode_name) && mode_from_string(mode_name) != mode) {
    throw ConfigError("train.mode '" + mode_name + "' contradicts the requested mode");
  }
  t.get("layers", d.train.layers);
  d.gamma_given = t.get("gamma", d.train.gamma);
  t.get("lambda0", d.train.lambda0);
  t.get("rate", d.train.rate);
  t.get("refinements", d.train.refinements);
  t.get("max_iter", d.train.max_iter);
  t.finish();
  top.finish();
  d.train.validate();
  return d;
}

Json to_document(const TrainConfig& cfg) {
  Json j = header(cfg.seed);
  Json t = to_json(cfg);
  t.erase("seed");
  j["train"] = t;
  return j;
}

}  // namespace bsr
