#include "abcselect/registry.hpp"

#include "abcselect/errors.hpp"
#include "abcselect/models/coalescent.hpp"
#include "abcselect/models/randomwalk.hpp"

namespace abcselect {

namespace {

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

}  // namespace

std::vector<std::string> known_model_names() {
    return {"gauss1",     "gauss2",      "coal-const", "coal-growth",
            "coal-island", "rw-brown",   "rw-persist", "rw-biased"};
}

std::vector<std::string> known_pool_names() { return {"gaussian5", "popgen11", "walk5"}; }

ModelSpec make_model(const std::string& name, const RegistryOptions& opts) {
    if (name == "gauss1") return gaussian_models(opts.gaussian)[0];
    if (name == "gauss2") return gaussian_models(opts.gaussian)[1];
    if (name == "coal-const" || name == "coal-growth" || name == "coal-island") {
        auto models = coalescent_models(opts.theta_lo, opts.theta_hi,
                                        opts.coalescent_sample_size);
        if (name == "coal-const") return models[0];
        if (name == "coal-growth") return models[1];
        return models[2];
    }
    if (name == "rw-brown" || name == "rw-persist" || name == "rw-biased") {
        auto models = walk_models(opts.walk_steps);
        if (name == "rw-brown") return models[0];
        if (name == "rw-persist") return models[1];
        return models[2];
    }
    throw ConfigError("unknown model '" + name + "'; available models: " +
                      join_names(known_model_names()));
}

StatisticPool make_pool(const std::string& name) {
    if (name == "gaussian5") return gaussian_pool();
    if (name == "popgen11") return popgen_pool();
    if (name == "walk5") return walk_pool();
    throw ConfigError("unknown pool '" + name + "'; available pools: " +
                      join_names(known_pool_names()));
}

}  // namespace abcselect
