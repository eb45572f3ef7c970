#include "tmatch/serialize.hpp"

namespace tmatch {

using nlohmann::json;

json to_json(const MatchResult& result) {
    json j;
    j["mode"] = to_string(result.mode);
    j["best"] = {{"row", result.best_row}, {"col", result.best_col}, {"rho", result.best_rho}};
    j["refined"] = {{"row", result.refined_row},
                    {"col", result.refined_col},
                    {"rho", result.refined_rho}};
    j["below_threshold"] = result.below_threshold;
    j["stats"] = {{"centers", result.stats.centers},
                  {"eliminated", result.stats.eliminated},
                  {"retained", result.stats.retained},
                  {"elim_pct", result.stats.elim_pct},
                  {"ops", result.stats.ops},
                  {"ms", result.stats.wall_ms}};
    return j;
}

json to_json(const EGSResult& result) {
    json trace = json::array();
    for (const EgsIteration& it : result.trace)
        trace.push_back({{"h", it.h}, {"w", it.w}, {"cost", it.cost.total}});
    return json{{"h_e", result.h}, {"w_e", result.w}, {"cost", result.cost.total},
                {"trace", trace}};
}

json opta_sidecar(const OptAResult& result) {
    json restored = json::array();
    for (const OptAIteration& it : result.trace) restored.push_back(it.restored);
    return json{{"h_e", result.egs.h},     {"w_e", result.egs.w},
                {"cost", result.egs.cost.total}, {"kappa", result.kappa},
                {"lambda", result.lambda}, {"restored_counts", restored}};
}

}  // namespace tmatch
