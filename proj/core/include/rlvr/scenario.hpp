#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rlvr/batch.hpp"
#include "rlvr/distribution.hpp"
#include "rlvr/error.hpp"
#include "rlvr/simulator.hpp"

namespace rlvr {

// Scenario and simulation-config files share one JSON-based format with an
// explicit integer "version". See docs/file-formats.md for the schema.

inline constexpr int kScenarioVersion = 1;

struct ExplicitLogits {
  std::vector<double> logits;
  friend bool operator==(const ExplicitLogits&, const ExplicitLogits&) = default;
};

enum class GeneratorKind { uniform, seeded, dirichlet };

struct GeneratedLogits {
  GeneratorKind kind = GeneratorKind::uniform;
  std::size_t vocab_size = 2;
  double correct_logit = 3.0;               // seeded
  std::optional<std::size_t> anchor_index;  // seeded
  double anchor_logit = 5.0;                // seeded
  double concentration = 1.0;               // dirichlet
  std::uint64_t seed = 0;                   // dirichlet
  friend bool operator==(const GeneratedLogits&, const GeneratedLogits&) = default;
};

struct ExplicitCorrectSet {
  std::vector<std::size_t> indices;
  friend bool operator==(const ExplicitCorrectSet&, const ExplicitCorrectSet&) = default;
};

enum class Placement { first, last, random };

struct PlacedCorrectSet {
  std::size_t count = 1;
  Placement placement = Placement::first;
  std::uint64_t seed = 0;  // random placement
  friend bool operator==(const PlacedCorrectSet&, const PlacedCorrectSet&) = default;
};

struct ExplicitBatch {
  std::vector<std::size_t> sampled_correct;
  std::vector<std::size_t> sampled_incorrect;
  std::map<std::size_t, std::size_t> multiplicities;  // optional
  friend bool operator==(const ExplicitBatch&, const ExplicitBatch&) = default;
};

struct SampledBatch {
  std::uint64_t seed = 0;  // draws "n" tokens i.i.d. from the distribution
  friend bool operator==(const SampledBatch&, const SampledBatch&) = default;
};

struct ScenarioFile {
  int version = kScenarioVersion;
  std::variant<ExplicitLogits, GeneratedLogits> distribution;
  double temperature = 1.0;
  std::variant<ExplicitCorrectSet, PlacedCorrectSet> correct;
  RewardScheme rewards{};
  std::variant<ExplicitBatch, SampledBatch> batch;
  double eta = 0.1;
  std::size_t n = 1;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

struct Diagnostic {
  ErrorCode code;
  std::string path;  // JSON-pointer-like location, e.g. "/batch/sampled_correct/0"
  std::string message;
};

/// Thrown by the parsers; carries every violation found, not just the first.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// A scenario resolved into domain objects.
struct Scenario {
  LabeledDistribution dist;
  RolloutBatch batch;
  RewardScheme rewards;
  double eta;
};

ScenarioFile parse_scenario(const std::string& text);
std::string serialize_scenario(const ScenarioFile& scenario);
Scenario materialize(const ScenarioFile& scenario);

/// Simulation config: optional "preset" ("desk" | "large") plus overrides.
SimulationConfig parse_simulation_config(const std::string& text);
std::string serialize_simulation_config(const SimulationConfig& config);

std::string read_text_file(const std::string& path);

}  // namespace rlvr
