// Network file format: a JSON object with a "variables" array and a
// "cpds" array.  The exact grammar lives in docs/network-format.md.
// Loading is strict (unknown keys rejected); saving is deterministic and
// round-trips every double exactly.
#pragma once

#include <string>

#include "cive/network.hpp"

namespace cive {

Network load_network(const std::string& path);
Network parse_network(const std::string& text);

void save_network(const Network& net, const std::string& path);
std::string serialize_network(const Network& net);

}  // namespace cive
