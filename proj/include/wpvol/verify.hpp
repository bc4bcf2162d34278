#pragma once

#include "wpvol/volume.hpp"

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wpvol {

struct CaseResult {
  std::string id;
  std::string expected;
  std::string computed;
  bool pass = false;
};

struct VerifyOptions {
  EngineOptions engine;
  // space whose first non-main chamber is the stress target
  StabilitySpace stress{2, 2};
  int positivity_points = 20;
  unsigned seed = 1;
};

struct VerifyGroup {
  std::string name;
  std::string suite;  // "paper", "invariants" or "stress"
  std::function<std::vector<CaseResult>(VolumeEngine&, const VerifyOptions&)> run;
};

const std::vector<VerifyGroup>& verify_groups();
const VerifyGroup& verify_group(const std::string& name);

// suite: paper | invariants | stress | all; each group gets a fresh engine and intersection cache.
// Throws std::invalid_argument for an unknown suite.
std::vector<CaseResult> run_verify(const std::string& suite, const VerifyOptions& opt = {});
std::vector<CaseResult> run_group(const VerifyGroup& g, const VerifyOptions& opt = {});

nlohmann::json verify_report(const std::string& suite, const std::vector<CaseResult>& cases);

}  // namespace wpvol
