#pragma once

#include <string>
#include <vector>

#include "ns4/derivation.hpp"

namespace ns4 {

enum class System { Ns4, PrawitzV1, PrawitzV2, PrawitzV3 };
const char* system_name(System s);

struct Violation {
  Path path;
  std::string rule;    // short tag: "structure", "discharge", "box-intro", ...
  std::string reason;
};

struct CheckReport {
  bool valid = true;
  std::vector<Violation> violations;
};

struct CheckOptions {
  // A box introduction whose premiss depends on no assumption at all is
  // accepted by default under every Prawitz variant.
  bool allow_closed_box_premiss = true;
};

CheckReport check_ns4(const Derivation& d);
CheckReport check_prawitz(const Derivation& d, System version, const CheckOptions& opts = {});
CheckReport check_system(const Derivation& d, System system, const CheckOptions& opts = {});

}  // namespace ns4
