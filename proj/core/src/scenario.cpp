#include "rlvr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rlvr/rng.hpp"
#include "rlvr/sampling.hpp"

namespace rlvr {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string summarize(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  os << diags.size() << " problem(s) in input";
  for (const auto& d : diags) {
    os << "\n  [" << to_string(d.code) << "] " << (d.path.empty() ? "/" : d.path) << ": "
       << d.message;
  }
  return os.str();
}

ErrorCode primary_code(const std::vector<Diagnostic>& diags) {
  return diags.empty() ? ErrorCode::parse_error : diags.front().code;
}

/// Field reader that records a diagnostic for every problem and keeps going.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void fail(ErrorCode code, std::string path, std::string message) {
    diags_.push_back({code, std::move(path), std::move(message)});
  }

  const json* object(const json& parent, const std::string& key, const std::string& path,
                     bool required = true) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ErrorCode::missing_field, path + "/" + key, "required field missing");
      return nullptr;
    }
    if (!it->is_object()) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected an object");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& parent, const std::string& key,
                               const std::string& path, bool required) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ErrorCode::missing_field, path + "/" + key, "required field missing");
      return std::nullopt;
    }
    if (!it->is_number()) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected a number");
      return std::nullopt;
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> count(const json& parent, const std::string& key,
                                     const std::string& path, bool required) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ErrorCode::missing_field, path + "/" + key, "required field missing");
      return std::nullopt;
    }
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected a non-negative integer");
      return std::nullopt;
    }
    return it->get<std::uint64_t>();
  }

  std::optional<std::string> text(const json& parent, const std::string& key,
                                  const std::string& path, bool required) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ErrorCode::missing_field, path + "/" + key, "required field missing");
      return std::nullopt;
    }
    if (!it->is_string()) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& parent, const std::string& key,
                                             const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) return std::nullopt;
    if (!it->is_array()) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& e = (*it)[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(ErrorCode::invalid_input, path + "/" + key + "/" + std::to_string(i),
             "expected a finite number");
        ok = false;
        continue;
      }
      out.push_back(e.get<double>());
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::vector<std::size_t>> indices(const json& parent, const std::string& key,
                                                  const std::string& path, bool required) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(ErrorCode::missing_field, path + "/" + key, "required field missing");
      return std::nullopt;
    }
    if (!it->is_array()) {
      fail(ErrorCode::invalid_input, path + "/" + key, "expected an array of indices");
      return std::nullopt;
    }
    std::vector<std::size_t> out;
    bool ok = true;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& e = (*it)[i];
      if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<long long>() >= 0)) {
        fail(ErrorCode::invalid_input, path + "/" + key + "/" + std::to_string(i),
             "expected a non-negative integer index");
        ok = false;
        continue;
      }
      out.push_back(e.get<std::size_t>());
    }
    if (!ok) return std::nullopt;
    return out;
  }

 private:
  std::vector<Diagnostic>& diags_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({{ErrorCode::parse_error, "", e.what()}});
  }
}

void check_version(Reader& r, const json& root) {
  const auto version = r.count(root, "version", "", true);
  if (version && *version != static_cast<std::uint64_t>(kScenarioVersion)) {
    r.fail(ErrorCode::unknown_version, "/version",
           "unsupported version " + std::to_string(*version) + " (expected " +
               std::to_string(kScenarioVersion) + ")");
  }
}

std::vector<bool> build_mask(const ScenarioFile& s, std::size_t vocab) {
  std::vector<bool> mask(vocab, false);
  if (const auto* e = std::get_if<ExplicitCorrectSet>(&s.correct)) {
    for (std::size_t i : e->indices) mask.at(i) = true;
    return mask;
  }
  const auto& placed = std::get<PlacedCorrectSet>(s.correct);
  std::vector<std::size_t> order(vocab);
  std::iota(order.begin(), order.end(), std::size_t{0});
  switch (placed.placement) {
    case Placement::first:
      break;
    case Placement::last:
      std::reverse(order.begin(), order.end());
      break;
    case Placement::random: {
      Rng rng(derive_seed(placed.seed, SeedStream::placement));
      // Fisher-Yates with the library-independent uniform01.
      for (std::size_t i = vocab; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
        std::swap(order[i - 1], order[std::min(j, i - 1)]);
      }
      break;
    }
  }
  for (std::size_t k = 0; k < placed.count && k < vocab; ++k) mask[order[k]] = true;
  return mask;
}

std::size_t vocab_of(const ScenarioFile& s) {
  if (const auto* e = std::get_if<ExplicitLogits>(&s.distribution)) return e->logits.size();
  return std::get<GeneratedLogits>(s.distribution).vocab_size;
}

std::vector<double> build_logits(const ScenarioFile& s, const std::vector<bool>& mask) {
  if (const auto* e = std::get_if<ExplicitLogits>(&s.distribution)) return e->logits;
  const auto& g = std::get<GeneratedLogits>(s.distribution);
  std::vector<double> z(g.vocab_size, 0.0);
  switch (g.kind) {
    case GeneratorKind::uniform:
      break;
    case GeneratorKind::seeded:
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (mask[i]) z[i] = g.correct_logit;
      }
      if (g.anchor_index) z.at(*g.anchor_index) = g.anchor_logit;
      break;
    case GeneratorKind::dirichlet: {
      // Dirichlet(alpha) probabilities via normalized Gamma(alpha, 1) draws;
      // the logits are their logs (softmax removes the normalizer).
      Rng rng(derive_seed(g.seed, SeedStream::generator));
      std::gamma_distribution<double> gamma(g.concentration, 1.0);
      for (double& v : z) v = std::log(std::max(gamma(rng), 1e-200));
      break;
    }
  }
  return z;
}

std::string_view placement_name(Placement p) {
  switch (p) {
    case Placement::first: return "first";
    case Placement::last: return "last";
    case Placement::random: return "random";
  }
  return "first";
}

std::string_view generator_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::uniform: return "uniform";
    case GeneratorKind::seeded: return "seeded";
    case GeneratorKind::dirichlet: return "dirichlet";
  }
  return "uniform";
}

// Semantic checks that need the resolved mask; appends to diags.
void check_consistency(const ScenarioFile& s, std::vector<Diagnostic>& diags) {
  Reader r(diags);
  const std::size_t vocab = vocab_of(s);
  if (vocab < 2) {
    r.fail(ErrorCode::invalid_input, "/distribution", "vocabulary needs at least 2 tokens");
    return;
  }
  if (const auto* e = std::get_if<ExplicitCorrectSet>(&s.correct)) {
    for (std::size_t k = 0; k < e->indices.size(); ++k) {
      if (e->indices[k] >= vocab) {
        r.fail(ErrorCode::inconsistent_mask, "/correct/indices/" + std::to_string(k),
               "correct index " + std::to_string(e->indices[k]) + " outside vocabulary of " +
                   std::to_string(vocab));
      }
    }
    if (!diags.empty()) return;
  } else {
    const auto& placed = std::get<PlacedCorrectSet>(s.correct);
    if (placed.count == 0 || placed.count >= vocab) {
      r.fail(ErrorCode::inconsistent_mask, "/correct/count",
             "need 0 < count < vocabulary size");
      return;
    }
  }
  const auto mask = build_mask(s, vocab);
  const auto correct = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  if (correct == 0 || correct == vocab) {
    r.fail(ErrorCode::inconsistent_mask, "/correct",
           "need at least one correct and one incorrect token");
  }
  if (const auto* g = std::get_if<GeneratedLogits>(&s.distribution)) {
    if (g->anchor_index && *g->anchor_index >= vocab) {
      r.fail(ErrorCode::invalid_input, "/distribution/anchor_index", "anchor outside vocabulary");
    }
    if (g->kind == GeneratorKind::dirichlet && !(g->concentration > 0.0)) {
      r.fail(ErrorCode::invalid_input, "/distribution/concentration", "must be positive");
    }
  }
  if (const auto* b = std::get_if<ExplicitBatch>(&s.batch)) {
    for (std::size_t k = 0; k < b->sampled_correct.size(); ++k) {
      const std::size_t idx = b->sampled_correct[k];
      const std::string path = "/batch/sampled_correct/" + std::to_string(k);
      if (idx >= vocab) {
        r.fail(ErrorCode::invalid_batch, path,
               "index " + std::to_string(idx) + " outside vocabulary");
      } else if (!mask[idx]) {
        r.fail(ErrorCode::invalid_batch, path,
               "sampled-correct index " + std::to_string(idx) + " is labeled incorrect");
      }
    }
    for (std::size_t k = 0; k < b->sampled_incorrect.size(); ++k) {
      const std::size_t idx = b->sampled_incorrect[k];
      const std::string path = "/batch/sampled_incorrect/" + std::to_string(k);
      if (idx >= vocab) {
        r.fail(ErrorCode::invalid_batch, path,
               "index " + std::to_string(idx) + " outside vocabulary");
      } else if (mask[idx]) {
        r.fail(ErrorCode::invalid_batch, path,
               "sampled-incorrect index " + std::to_string(idx) + " is labeled correct");
      }
    }
  }
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Diagnostic> diagnostics)
    : Error(primary_code(diagnostics), summarize(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

ScenarioFile parse_scenario(const std::string& text) {
  const json root = parse_json(text);
  std::vector<Diagnostic> diags;
  Reader r(diags);
  if (!root.is_object()) throw ScenarioError({{ErrorCode::parse_error, "", "expected a JSON object"}});

  ScenarioFile s;
  check_version(r, root);

  if (const json* d = r.object(root, "distribution", "")) {
    if (d->contains("logits")) {
      if (auto z = r.numbers(*d, "logits", "/distribution")) s.distribution = ExplicitLogits{*z};
    } else if (auto kind = r.text(*d, "generator", "/distribution", true)) {
      GeneratedLogits g;
      if (*kind == "uniform") {
        g.kind = GeneratorKind::uniform;
      } else if (*kind == "seeded") {
        g.kind = GeneratorKind::seeded;
      } else if (*kind == "dirichlet") {
        g.kind = GeneratorKind::dirichlet;
      } else {
        r.fail(ErrorCode::invalid_input, "/distribution/generator",
               "unknown generator '" + *kind + "' (uniform | seeded | dirichlet)");
      }
      if (auto v = r.count(*d, "vocab_size", "/distribution", true)) g.vocab_size = *v;
      if (auto v = r.number(*d, "correct_logit", "/distribution", false)) g.correct_logit = *v;
      if (auto v = r.count(*d, "anchor_index", "/distribution", false)) g.anchor_index = *v;
      if (auto v = r.number(*d, "anchor_logit", "/distribution", false)) g.anchor_logit = *v;
      if (auto v = r.number(*d, "concentration", "/distribution", false)) g.concentration = *v;
      if (auto v = r.count(*d, "seed", "/distribution", false)) g.seed = *v;
      s.distribution = g;
    }
  }

  if (auto t = r.number(root, "temperature", "", false)) {
    if (*t > 0.0) {
      s.temperature = *t;
    } else {
      r.fail(ErrorCode::invalid_input, "/temperature", "must be positive");
    }
  }

  if (const json* c = r.object(root, "correct", "")) {
    if (c->contains("indices")) {
      if (auto idx = r.indices(*c, "indices", "/correct", true)) {
        s.correct = ExplicitCorrectSet{*idx};
      }
    } else {
      PlacedCorrectSet placed;
      if (auto v = r.count(*c, "count", "/correct", true)) placed.count = *v;
      if (auto p = r.text(*c, "placement", "/correct", false)) {
        if (*p == "first") {
          placed.placement = Placement::first;
        } else if (*p == "last") {
          placed.placement = Placement::last;
        } else if (*p == "random") {
          placed.placement = Placement::random;
        } else {
          r.fail(ErrorCode::invalid_input, "/correct/placement",
                 "unknown placement '" + *p + "' (first | last | random)");
        }
      }
      if (auto v = r.count(*c, "seed", "/correct", false)) placed.seed = *v;
      s.correct = placed;
    }
  }

  if (const json* rw = r.object(root, "rewards", "", false)) {
    if (auto v = r.number(*rw, "correct", "/rewards", true)) s.rewards.correct = *v;
    if (auto v = r.number(*rw, "incorrect", "/rewards", true)) s.rewards.incorrect = *v;
    if (!(s.rewards.correct > s.rewards.incorrect)) {
      r.fail(ErrorCode::invalid_input, "/rewards", "need correct reward > incorrect reward");
    }
  }

  if (const json* b = r.object(root, "batch", "")) {
    if (const json* sample = r.object(*b, "sample", "/batch", false)) {
      SampledBatch sb;
      if (auto v = r.count(*sample, "seed", "/batch/sample", false)) sb.seed = *v;
      s.batch = sb;
    } else {
      ExplicitBatch eb;
      if (auto a = r.indices(*b, "sampled_correct", "/batch", true)) eb.sampled_correct = *a;
      if (auto bb = r.indices(*b, "sampled_incorrect", "/batch", true)) {
        eb.sampled_incorrect = *bb;
      }
      if (const json* m = r.object(*b, "multiplicities", "/batch", false)) {
        for (const auto& [key, value] : m->items()) {
          const std::string path = "/batch/multiplicities/" + key;
          std::size_t idx = 0;
          try {
            std::size_t used = 0;
            idx = std::stoul(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
          } catch (const std::exception&) {
            r.fail(ErrorCode::invalid_input, path, "key must be a token index");
            continue;
          }
          if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
            r.fail(ErrorCode::invalid_input, path, "multiplicity must be a positive integer");
            continue;
          }
          eb.multiplicities[idx] = value.get<std::size_t>();
        }
      }
      std::set<std::size_t> a(eb.sampled_correct.begin(), eb.sampled_correct.end());
      for (std::size_t k = 0; k < eb.sampled_incorrect.size(); ++k) {
        if (a.count(eb.sampled_incorrect[k])) {
          r.fail(ErrorCode::invalid_batch, "/batch/sampled_incorrect/" + std::to_string(k),
                 "index " + std::to_string(eb.sampled_incorrect[k]) +
                     " also listed as sampled-correct");
        }
      }
      s.batch = eb;
    }
  }

  if (auto v = r.number(root, "eta", "", true)) {
    if (*v > 0.0) {
      s.eta = *v;
    } else {
      r.fail(ErrorCode::invalid_input, "/eta", "must be positive");
    }
  }
  if (auto v = r.count(root, "n", "", true)) {
    if (*v > 0) {
      s.n = *v;
    } else {
      r.fail(ErrorCode::invalid_input, "/n", "must be positive");
    }
  }

  if (diags.empty()) check_consistency(s, diags);
  if (diags.empty()) {
    // Remaining invariants (multiplicity sums, underflow) are enforced by
    // the domain constructors; surface them as diagnostics too.
    try {
      (void)materialize(s);
    } catch (const Error& e) {
      diags.push_back({e.code(), "", e.what()});
    }
  }
  if (!diags.empty()) throw ScenarioError(std::move(diags));
  return s;
}

Scenario materialize(const ScenarioFile& s) {
  const std::size_t vocab = vocab_of(s);
  auto mask = build_mask(s, vocab);
  auto logits = build_logits(s, mask);
  LabeledDistribution dist(std::move(logits), std::move(mask), s.temperature);

  RolloutBatch batch;
  if (const auto* eb = std::get_if<ExplicitBatch>(&s.batch)) {
    batch = RolloutBatch(eb->sampled_correct, eb->sampled_incorrect, s.n, eb->multiplicities);
    batch.validate_against(dist);
  } else {
    const auto& sb = std::get<SampledBatch>(s.batch);
    const auto p = dist.probabilities();
    const CategoricalSampler sampler(p);
    Rng rng(derive_seed(sb.seed, SeedStream::rollout));
    batch = sample_batch(dist, sampler, s.n, rng);
  }
  s.rewards.validate();
  return Scenario{std::move(dist), std::move(batch), s.rewards, s.eta};
}

std::string serialize_scenario(const ScenarioFile& s) {
  ordered_json root;
  root["version"] = s.version;
  ordered_json dist;
  if (const auto* e = std::get_if<ExplicitLogits>(&s.distribution)) {
    dist["logits"] = e->logits;
  } else {
    const auto& g = std::get<GeneratedLogits>(s.distribution);
    dist["generator"] = generator_name(g.kind);
    dist["vocab_size"] = g.vocab_size;
    dist["correct_logit"] = g.correct_logit;
    if (g.anchor_index) dist["anchor_index"] = *g.anchor_index;
    dist["anchor_logit"] = g.anchor_logit;
    dist["concentration"] = g.concentration;
    dist["seed"] = g.seed;
  }
  root["distribution"] = dist;
  root["temperature"] = s.temperature;
  ordered_json correct;
  if (const auto* e = std::get_if<ExplicitCorrectSet>(&s.correct)) {
    correct["indices"] = e->indices;
  } else {
    const auto& p = std::get<PlacedCorrectSet>(s.correct);
    correct["count"] = p.count;
    correct["placement"] = placement_name(p.placement);
    correct["seed"] = p.seed;
  }
  root["correct"] = correct;
  root["rewards"] = {{"correct", s.rewards.correct}, {"incorrect", s.rewards.incorrect}};
  ordered_json batch;
  if (const auto* e = std::get_if<ExplicitBatch>(&s.batch)) {
    batch["sampled_correct"] = e->sampled_correct;
    batch["sampled_incorrect"] = e->sampled_incorrect;
    if (!e->multiplicities.empty()) {
      ordered_json m = ordered_json::object();
      for (const auto& [k, v] : e->multiplicities) m[std::to_string(k)] = v;
      batch["multiplicities"] = m;
    }
  } else {
    batch["sample"] = {{"seed", std::get<SampledBatch>(s.batch).seed}};
  }
  root["batch"] = batch;
  root["eta"] = s.eta;
  root["n"] = s.n;
  return root.dump(2);
}

SimulationConfig parse_simulation_config(const std::string& text) {
  const json root = parse_json(text);
  if (!root.is_object()) throw ScenarioError({{ErrorCode::parse_error, "", "expected a JSON object"}});
  std::vector<Diagnostic> diags;
  Reader r(diags);
  check_version(r, root);

  SimulationConfig c;
  if (auto preset = r.text(root, "preset", "", false)) {
    if (*preset == "desk") {
      c = SimulationConfig::desk_preset();
    } else if (*preset == "large") {
      c = SimulationConfig::large_preset();
    } else {
      r.fail(ErrorCode::invalid_input, "/preset", "unknown preset '" + *preset + "' (desk | large)");
    }
  }
  if (auto v = r.count(root, "vocab_size", "", false)) c.vocab_size = *v;
  if (auto v = r.count(root, "num_correct", "", false)) c.num_correct = *v;
  if (const json* rw = r.object(root, "rewards", "", false)) {
    if (auto v = r.number(*rw, "correct", "/rewards", true)) c.rewards.correct = *v;
    if (auto v = r.number(*rw, "incorrect", "/rewards", true)) c.rewards.incorrect = *v;
  }
  if (auto v = r.text(root, "init", "", false)) {
    if (*v == "zeros") {
      c.init = InitMode::zeros;
    } else if (*v == "seeded") {
      c.init = InitMode::seeded;
    } else {
      r.fail(ErrorCode::invalid_input, "/init", "unknown init '" + *v + "' (zeros | seeded)");
    }
  }
  if (auto v = r.number(root, "seeded_correct_logit", "", false)) c.seeded_correct_logit = *v;
  if (root.contains("anchor_index") && root["anchor_index"].is_null()) {
    c.anchor_index.reset();
  } else if (auto v = r.count(root, "anchor_index", "", false)) {
    c.anchor_index = *v;
  }
  if (auto v = r.number(root, "anchor_logit", "", false)) c.anchor_logit = *v;
  if (auto v = r.number(root, "temperature", "", false)) c.temperature = *v;
  if (auto v = r.count(root, "n_rollouts", "", false)) c.n_rollouts = *v;
  if (auto v = r.count(root, "steps", "", false)) c.steps = *v;
  if (auto v = r.number(root, "learning_rate", "", false)) c.learning_rate = *v;
  if (auto v = r.text(root, "optimizer", "", false)) {
    if (*v == "plain_gradient") {
      c.optimizer = OptimizerKind::plain_gradient;
    } else if (*v == "adaptive_moments") {
      c.optimizer = OptimizerKind::adaptive_moments;
    } else {
      r.fail(ErrorCode::invalid_input, "/optimizer",
             "unknown optimizer '" + *v + "' (plain_gradient | adaptive_moments)");
    }
  }
  if (const json* a = r.object(root, "adaptive_params", "", false)) {
    if (auto v = r.number(*a, "beta1", "/adaptive_params", false)) c.beta1 = *v;
    if (auto v = r.number(*a, "beta2", "/adaptive_params", false)) c.beta2 = *v;
    if (auto v = r.number(*a, "epsilon", "/adaptive_params", false)) c.epsilon = *v;
    if (auto v = r.number(*a, "weight_decay", "/adaptive_params", false)) c.weight_decay = *v;
  }
  if (auto v = r.text(root, "baseline", "", false)) {
    if (*v == "batch_mean") {
      c.baseline = BaselineMode::batch_mean;
    } else if (*v == "probability_weighted") {
      c.baseline = BaselineMode::probability_weighted;
    } else {
      r.fail(ErrorCode::invalid_input, "/baseline",
             "unknown baseline '" + *v + "' (batch_mean | probability_weighted)");
    }
  }
  if (auto v = r.text(root, "sampling", "", false)) {
    if (*v == "iid") {
      c.sampling = SamplingMode::iid;
    } else if (*v == "exhaustive") {
      c.sampling = SamplingMode::exhaustive;
    } else {
      r.fail(ErrorCode::invalid_input, "/sampling", "unknown sampling '" + *v + "' (iid | exhaustive)");
    }
  }
  if (auto v = r.count(root, "seed", "", false)) c.seed = *v;

  if (diags.empty()) {
    try {
      c.validate();
    } catch (const Error& e) {
      diags.push_back({e.code(), "", e.what()});
    }
  }
  if (!diags.empty()) throw ScenarioError(std::move(diags));
  return c;
}

std::string serialize_simulation_config(const SimulationConfig& c) {
  ordered_json root;
  root["version"] = kScenarioVersion;
  root["vocab_size"] = c.vocab_size;
  root["num_correct"] = c.num_correct;
  root["rewards"] = {{"correct", c.rewards.correct}, {"incorrect", c.rewards.incorrect}};
  root["init"] = to_string(c.init);
  root["seeded_correct_logit"] = c.seeded_correct_logit;
  root["anchor_index"] = c.anchor_index ? ordered_json(*c.anchor_index) : ordered_json(nullptr);
  root["anchor_logit"] = c.anchor_logit;
  root["temperature"] = c.temperature;
  root["n_rollouts"] = c.n_rollouts;
  root["steps"] = c.steps;
  root["learning_rate"] = c.learning_rate;
  root["optimizer"] = to_string(c.optimizer);
  root["adaptive_params"] = {{"beta1", c.beta1},
                             {"beta2", c.beta2},
                             {"epsilon", c.epsilon},
                             {"weight_decay", c.weight_decay}};
  root["baseline"] = to_string(c.baseline);
  root["sampling"] = to_string(c.sampling);
  root["seed"] = c.seed;
  return root.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace rlvr
