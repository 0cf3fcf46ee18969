#pragma once

#include "bsr/datagen.hpp"
#include "bsr/lbista.hpp"
#include "bsr/train.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>

namespace bsr {

using Json = nlohmann::ordered_json;

/// Writes `dir/params.json` plus one matrix file per weight (and per fixed
/// corner correction). `provenance` is stored verbatim under "training".
void save_params(const std::filesystem::path& dir, const NetworkParams& params, const Json& provenance = {});
/// Accepts the directory or the params.json path.
NetworkParams load_params(const std::filesystem::path& path);

/// Writes `dir/model.json` plus the kernel or matrix file.
void save_model(const std::filesystem::path& dir, const LinearModel& model);
/// Accepts the directory or the model.json path.
LinearModel load_model(const std::filesystem::path& path);

/// x_<name>.bsr, y_<name>.bsr and (when present) a_<name>.bsr stacks.
void save_problem_set(const std::filesystem::path& dir, const std::string& name, const ProblemSet& set);
ProblemSet load_problem_set(const std::filesystem::path& dir, const std::string& name);

Json to_json(const TrainConfig& cfg);
/// Timing lives under "timing" so the rest is comparable across runs.
Json to_json(const TrainReport& report);
/// CSV "stage,layer,kind,rate,step,loss".
void write_loss_csv(std::ostream& os, const TrainReport& report);

/// Doubles that may be infinite become the strings "inf" / "-inf".
Json json_number(double v);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace bsr
