#pragma once

#include "refine/grammar.hpp"
#include "refine/syntax.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace refine {

using World = std::string;
using Pair = std::pair<World, World>;

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SigmaModel {
  std::set<World> worlds;
  std::map<Character, std::set<Pair>> relations;
  std::map<std::string, std::set<World>> valuation;
  bool operator==(const SigmaModel &) const = default;
};

// Least extension closed under converse symmetry and under R_s subset R_x for
// every production x -> s of the system.
SigmaModel saturate(const CfcstSystem &s, const SigmaModel &m);
bool is_saturated(const CfcstSystem &s, const SigmaModel &m);

bool check_sigma(const SigmaModel &m, const World &w, const Formula &f);
bool globally_true(const SigmaModel &m, const Formula &f);

struct DsModel {
  std::set<World> worlds;
  std::set<Pair> choice;
  std::set<World> ideal;
  std::map<std::string, std::set<World>> valuation;
  int k = 0;
  bool operator==(const DsModel &) const = default;
};

bool check_ds(const DsModel &m, const World &w, const Formula &f);
bool globally_true(const DsModel &m, const Formula &f);

// Names of the violated frame conditions: P, Ck, D1, D2, D3. Empty means ok.
std::vector<std::string> validate_ds(const DsModel &m);

// Choice cells of a model whose choice relation is an equivalence.
std::vector<std::set<World>> choice_classes(const DsModel &m);

struct ModelBounds {
  std::size_t max_worlds = 4;
  std::vector<std::string> atoms{"p", "q"};
  double edge_probability = 0.3;
  double truth_probability = 0.5;
};

// Deterministic per seed.
class ModelGenerator {
public:
  explicit ModelGenerator(std::uint64_t seed, ModelBounds b = {}) : rng_(seed), bounds_(b) {}

  // Saturated for the given system; the extra characters get random
  // relations too.
  SigmaModel sigma(const CfcstSystem &s, const std::set<Character> &extra = {});
  // Always passes validate_ds.
  DsModel ds(int k);

private:
  std::set<World> make_worlds();
  std::map<std::string, std::set<World>> make_valuation(const std::set<World> &w);
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::mt19937_64 rng_;
  ModelBounds bounds_;
};

} // namespace refine
