#pragma once

#include <json.hpp>

#include "transitmc/petri.hpp"
#include "transitmc/pipeline.hpp"

namespace transitmc {

nlohmann::json json_marking(const PetriNet& net, const Marking& m);
nlohmann::json json_lasso(const PetriNet& net, const Lasso& lasso);
// Alternating place/transition trace plus the loop re-entry index (into the
// places of the trace); null for chains that stop moving.
nlohmann::json json_chain(const PetriNet& net, const WitnessChain& chain,
                          std::uint32_t index);
nlohmann::json json_result(const PetriNet& net, const PipelineResult& res);

}  // namespace transitmc
