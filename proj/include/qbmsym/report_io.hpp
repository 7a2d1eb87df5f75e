#pragma once
#include <json.hpp>

#include "qbmsym/assembly.hpp"
#include "qbmsym/equations.hpp"
#include "qbmsym/lm.hpp"

namespace qbmsym {

nlohmann::json machine_json(const MachineSpec& spec);
nlohmann::json analyze_report_json(const SymmetryGroupReport& report);
nlohmann::json equations_report_json(const MachineSpec& spec, const EquationSystem& sys);
nlohmann::json solution_set_json(const SolutionSet& set);

}  // namespace qbmsym
