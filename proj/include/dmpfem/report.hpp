#pragma once

#include <iosfwd>

#include "json.hpp"

#include "dmpfem/dmp.hpp"
#include "dmpfem/solver.hpp"

namespace dmpfem {

nlohmann::json solve_result_to_json(const SolveResult& result);

/// Certificate document. Top-level keys k_star, sup_uh, theorem_3_2,
/// theorem_3_3, assumption_a, element_condition, edge_condition,
/// level_sets, de_giorgi and angles each carry a "verdict" of pass, fail or
/// not-applicable; "mesh" and "params" hold context.
nlohmann::json certificate_to_json(const Mesh& mesh, const DmpCertificate& cert);

/// `k,measure` rows.
void write_levelset_csv(std::ostream& os, const LevelSetProfile& profile);

}  // namespace dmpfem
