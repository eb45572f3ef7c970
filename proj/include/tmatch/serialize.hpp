// JSON views of result records.
#pragma once

#include <json.hpp>

#include "tmatch/blur.hpp"
#include "tmatch/egs.hpp"
#include "tmatch/result.hpp"

namespace tmatch {

nlohmann::json to_json(const MatchResult& result);
nlohmann::json to_json(const EGSResult& result);

// Sidecar record written alongside the optimized blurred image.
nlohmann::json opta_sidecar(const OptAResult& result);

}  // namespace tmatch
