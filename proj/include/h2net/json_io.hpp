#pragma once

#include <optional>
#include <string>

#include "h2net/graphs.hpp"
#include "h2net/model.hpp"
#include "h2net/netsim.hpp"
#include "h2net/synthesis.hpp"

namespace h2net {

// Model file: {"A": [[..]], "B": .., "C1": .., "D1": .., "C2": .., "D2": .., "E": ..}
AgentModel load_model(const std::string& path);

// Graph file: {"nodes": N, "edges": [[i, j, w], ...]} with 0-based indices.
WeightedGraph load_graph(const std::string& path);

// Scenario file: {"x0": [[..]..], "w0": [[..]..] | "zeros", "disturbance": {..},
//                 "T": seconds, "dt": seconds}
Scenario load_scenario(const std::string& path);

// Gains file: {"F": [[..]], "G": [[..]], "certificate": {..}}; the certificate
// is written by design/sweep and ignored on load.
void save_gains(const std::string& path, const ProtocolGains& gains,
                const DesignCertificate& cert, bool feasible);
ProtocolGains load_gains(const std::string& path);

std::string case_name(CaseSelect c);
std::string noise_form_name(NoiseForm f);
NoiseForm parse_noise_form(const std::string& s);

} // namespace h2net
