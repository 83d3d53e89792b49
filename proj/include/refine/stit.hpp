#pragma once

#include "refine/proof.hpp"
#include "refine/semantics.hpp"
#include "refine/sequent.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace refine {

class StitError : public std::runtime_error {
public:
  enum class Kind { NotForest, NotApplicable, NotStable };
  StitError(Kind k, const std::string &msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

struct LabelFlags {
  bool saturated = false;
  bool box_realized = false;
  bool choice_realized = false;  // [0]
  bool obl_realized = false;     // [o]
  bool dia_propagated = false;
  bool chdia_propagated = false; // <0>
  bool perm_propagated = false;  // <o>
  bool all() const {
    return saturated && box_realized && choice_realized && obl_realized && dia_propagated &&
           chdia_propagated && perm_propagated;
  }
};

struct StabilityReport {
  std::map<Label, LabelFlags> labels;
  bool d2_satisfied = false;
  bool ck_satisfied = false;
  bool stable = false;
};

// Blocking conditions of the sequent for choice bound k (0 = unbounded).
// Throws NotForest.
StabilityReport stability_report(int k, const Sequent &s);

// One premise per pair among the first k+1 choice-tree roots, each adding
// R_[0] from the earlier root to the later one. Throws NotApplicable unless
// k > 0 and there are more than k choice-trees.
std::vector<Sequent> apc_branches(int k, const Sequent &s);

// Countermodel read off a stable sequent; `root` is the label of the end
// formula. The ideal set is the closure of the I-labels when there are any,
// otherwise the root's choice cell. An atom asserted positively somewhere is
// true wherever it is not asserted; any other atom is true exactly where its
// negation is asserted. Throws NotStable.
DsModel extract_model(int k, const Sequent &s, const Label &root);

struct DsResult {
  enum class Verdict { Proved, Refuted };
  Verdict verdict = Verdict::Refuted;
  std::optional<Proof> proof;
  std::optional<DsModel> model;
  std::optional<Sequent> stable;  // the sequent the model was read from
  Label root = "w0";
  std::vector<std::string> trace;
  std::size_t steps = 0;
  std::size_t max_labels = 0;     // largest sequent met on any branch
  bool forest_ok = true;          // every visited sequent was a rooted forest
};

std::string to_string(DsResult::Verdict v);

// Decides w0: f in DS_0^k. With `trace` every bottom-up step is logged.
DsResult prove_ds(int k, const Formula &f, bool trace = false);

// Checks a DS_0^k L derivation. Id closes on any dual pair w:phi, w:~phi.
std::optional<ProofError> check_ds_proof(int k, const Proof &p);

} // namespace refine
