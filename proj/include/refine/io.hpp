#pragma once

#include "refine/interpolation.hpp"
#include "refine/nested.hpp"
#include "refine/proof.hpp"
#include "refine/semantics.hpp"
#include "refine/sequent.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace refine {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Formulas travel as their printed text.
Json to_json(const Formula &f);
Formula formula_from_json(const Json &j);

Json to_json(const RelAtom &a);
RelAtom atom_from_json(const Json &j);

Json to_json(const Sequent &s);
Sequent sequent_from_json(const Json &j);

Json to_json(const Witness &w);
Witness witness_from_json(const Json &j);

Json to_json(const Proof &p);
Proof proof_from_json(const Json &j);

Json to_json(const NestedProof &p);
NestedProof nested_proof_from_json(const Json &j);

Json to_json(const SigmaModel &m);
SigmaModel sigma_model_from_json(const Json &j);

Json to_json(const DsModel &m);
DsModel ds_model_from_json(const Json &j);

Json to_json(const LiteralAudit &a);

// {chi, left_proof, right_proof, literal_audit} plus status and interpolant.
Json to_json(const InterpolationResult &r);

std::string read_file(const std::string &path);  // throws IoError
void write_file(const std::string &path, const std::string &text);

} // namespace refine
