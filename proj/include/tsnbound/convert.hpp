#pragma once

#include <string>
#include <vector>

#include "tsnbound/network.hpp"

namespace tsnb {

// Server name for an output port: "<node>-<port>" with pre-existing hyphens
// doubled so distinct (node, port) pairs never collide.
std::string output_port_name(const std::string& node, const std::string& port);

// Keeps one server per (node, output port) pair that lies on a flow hop and
// resolves service parameters through the chain link -> node -> network;
// links without service anywhere are dummies and produce no server. Flows
// become sequences of traversed non-dummy ports; multicast flows split into
// unicast flows "<name>_<k>" sharing the source arrival curve. Flows whose
// whole path is dummy are dropped with a warning.
OutputPortNetwork physical_to_output_port(const PhysicalNetwork& phys,
                                          std::vector<std::string>* warnings = nullptr);

// Attaches each server to its own switch (single output port "o0" feeding a
// hub station), adds per-flow source and sink stations, and copies capacities
// onto the switch output links. Converting the result back yields a network
// with the same analysis semantics up to the server renaming above.
PhysicalNetwork output_port_to_physical(const OutputPortNetwork& net);

} // namespace tsnb
