#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hhdx/gs.hpp"
#include "hhdx/tower.hpp"
#include <json.hpp>

namespace hhdx {

constexpr const char* kReportSchemaVersion = "1.0.0";

class UnknownScenarioError : public std::invalid_argument {
 public:
  explicit UnknownScenarioError(const std::string& what) : std::invalid_argument(what) {}
};

class InvalidPrimeError : public std::invalid_argument {
 public:
  explicit InvalidPrimeError(const std::string& what) : std::invalid_argument(what) {}
};

struct ScenarioConfig {
  std::string scenario;
  std::uint32_t prime = 2;
  unsigned depth = 2;
  int degree_bound = 16;
  int dp_cap = 8;
  /// Weierstrass coefficients for the elliptic scenario.
  Cubic curve{0, -1, 0};
};

struct Report {
  nlohmann::ordered_json json;
  /// Every certified assertion passed. Uncertified ones never count as passes
  /// and never fail the run.
  bool passed = false;
};

const std::vector<std::string>& scenario_names();

/// Runs a named scenario. Throws UnknownScenarioError, InvalidPrimeError,
/// CapacityError, TruncationError.
Report run(const ScenarioConfig& cfg);

/// One line per table entry and assertion.
std::string render_text(const Report& r);

/// Small presheaves of finite algebras used for cup-product checks: a point
/// with M_2, a chain of truncated polynomial rings, and a three-element
/// poset shaped like the cover of the projective line.
std::vector<std::pair<std::string, AlgebraPresheaf>> cup_presheaves(PrimeField f);

struct LeibnizRun {
  std::size_t checked = 0;
  std::size_t failures = 0;
};

/// Leibniz rule on `trials` random bihomogeneous pairs whose product stays
/// in range with room for one differential.
LeibnizRun random_leibniz(const GSComplex& c, std::size_t trials, std::mt19937& rng);

}  // namespace hhdx
