// registry.hpp — Named model and pool lookup for configuration files.
#pragma once

#include <string>
#include <vector>

#include "abcselect/model_spec.hpp"
#include "abcselect/models/gaussian.hpp"
#include "abcselect/statistic_pool.hpp"

namespace abcselect {

/// Family-level knobs that configuration files may override.
struct RegistryOptions {
    GaussianPairSpec gaussian;
    int coalescent_sample_size = 100;
    double theta_lo = 5.0;
    double theta_hi = 30.0;
    int walk_steps = 200;
};

std::vector<std::string> known_model_names();
std::vector<std::string> known_pool_names();

/// Model by registry name; throws ConfigError listing the known names.
ModelSpec make_model(const std::string& name, const RegistryOptions& opts = {});

/// Pool by registry name; throws ConfigError listing the known names.
StatisticPool make_pool(const std::string& name);

}  // namespace abcselect
