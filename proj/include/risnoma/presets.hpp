#pragma once

#include <string>
#include <vector>

#include "risnoma/sweep.hpp"

namespace risnoma {

/// Named scenario reproducing one evaluation figure: a config plus its
/// default sweep. `overrides` lists every departure from the reference
/// parameter table.
struct Preset {
    std::string name;
    std::string figure;
    std::string summary;
    std::vector<std::string> overrides;
    SweepSpec sweep;
};

const std::vector<Preset>& presets();

/// Throws ValidationError("preset", ...) for unknown names.
const Preset& find_preset(const std::string& name);

/// Multi-line human-readable description used by `preset --describe`.
std::string describe(const Preset& preset);

}  // namespace risnoma
