#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "json.hpp"

#include "pfw/cascade.hpp"
#include "pfw/encode.hpp"
#include "pfw/error.hpp"
#include "pfw/verify.hpp"

namespace pfw {

struct Config {
  double tolerance = kSolutionTolerance;
  int cascade_level_cap = 12;
  std::size_t cell_budget = kDefaultCellBudget;
  std::uint64_t enumeration_budget = kDefaultEnumerationBudget;
  std::string output_dir = ".";

  static constexpr const char* kOutputDirEnv = "PFW_OUTPUT_DIR";

  void validate() const {
    if (!(tolerance > 0.0)) throw Error(Errc::InvalidInput, "config: tolerance must be positive");
    if (cascade_level_cap <= 0) throw Error(Errc::InvalidInput, "config: cascade_level_cap must be positive");
    if (cell_budget == 0) throw Error(Errc::InvalidInput, "config: cell_budget must be positive");
    if (enumeration_budget == 0) throw Error(Errc::InvalidInput, "config: enumeration_budget must be positive");
  }

  /// Overrides present keys; unknown keys are rejected.
  void merge(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(Errc::InvalidInput, "config: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
      try {
        if (key == "tolerance") tolerance = value.get<double>();
        else if (key == "cascade_level_cap") cascade_level_cap = value.get<int>();
        else if (key == "cell_budget") cell_budget = value.get<std::size_t>();
        else if (key == "enumeration_budget") enumeration_budget = value.get<std::uint64_t>();
        else if (key == "output_dir") output_dir = value.get<std::string>();
        else throw Error(Errc::InvalidInput, "config: unknown key '" + key + "'");
      } catch (const nlohmann::json::exception&) {
        throw Error(Errc::InvalidInput, "config: field '" + key + "' has the wrong type");
      }
    }
    validate();
  }

  void apply_environment() {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) output_dir = dir;
  }
};

}  // namespace pfw
