#pragma once

#include "refine/grammar.hpp"
#include "refine/proof.hpp"
#include "refine/semantics.hpp"
#include "refine/sequent.hpp"

#include <optional>
#include <string>

namespace refine {

// Checks a Km(S)L proof node by node. Premises may either keep the
// principal formula or drop it.
std::optional<ProofError> check_proof(const CfcstSystem &s, const Proof &p);

struct Budget {
  std::size_t max_labels = 16;
  std::size_t max_steps = 5000;
};

struct GrammarResult {
  enum class Verdict { Valid, Refuted, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::optional<Proof> proof;
  std::optional<SigmaModel> model;  // saturated counter-model
  Label root;
  std::string reason;  // why Unknown
  std::size_t steps = 0;
};

std::string to_string(GrammarResult::Verdict v);

// Bounded backward search for ∅ |- w0: f.
GrammarResult prove_bounded(const CfcstSystem &s, const Formula &f, const Budget &b = {});

// Same search from an arbitrary tree sequent rooted at root. A refutation
// falsifies every labelled formula of the input sequent.
GrammarResult prove_sequent(const CfcstSystem &s, const Sequent &start,
                            const Label &root, const Budget &b = {});

class FlipError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Replaces R_x wu by R_x' uw in every sequent of the proof.
Proof flip_atom(const Proof &p, const RelAtom &atom);

} // namespace refine
