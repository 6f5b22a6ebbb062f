#ifndef ADAPTSIM_SCENARIO_IO_HPP
#define ADAPTSIM_SCENARIO_IO_HPP

#include <string>

#include "adaptsim/refinement.hpp"
#include "adaptsim/sim_engine.hpp"

namespace adaptsim {

/// Parses and fully validates a scenario file (strict: unknown keys are
/// rejected). The graph is refined per the declared style and memory
/// traces are loaded relative to the scenario file's directory.
Scenario load_scenario(const std::string& path);

/// Re-refines the scenario's abstract graph with a different style.
void apply_style(Scenario& scenario, StyleChoice style);

}  // namespace adaptsim

#endif
