// errors.hpp — Typed error hierarchy.
#pragma once

#include <stdexcept>
#include <string>

namespace abcselect {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A statistic was evaluated on a dataset variant it does not accept.
class VariantMismatchError : public Error {
public:
    VariantMismatchError(const std::string& statistic, const std::string& detail)
        : Error("statistic '" + statistic + "': " + detail), statistic_(statistic) {}
    const std::string& statistic() const noexcept { return statistic_; }

private:
    std::string statistic_;
};

/// A statistic evaluator produced a NaN or infinity.
class NonFiniteStatisticError : public Error {
public:
    explicit NonFiniteStatisticError(const std::string& statistic)
        : Error("statistic '" + statistic + "' produced a non-finite value"),
          statistic_(statistic) {}
    const std::string& statistic() const noexcept { return statistic_; }

private:
    std::string statistic_;
};

/// Two summary vectors of different lengths were compared.
class LengthMismatchError : public Error {
public:
    using Error::Error;
};

/// Two sample clouds of different dimension were compared.
class DimMismatchError : public Error {
public:
    using Error::Error;
};

/// An ABC run exhausted its proposal budget with zero acceptances.
class EpsilonTooTightError : public Error {
public:
    EpsilonTooTightError(double epsilon, double min_distance_seen, std::size_t proposals)
        : Error("epsilon too tight: no acceptance in " + std::to_string(proposals) +
                " proposals at epsilon=" + std::to_string(epsilon) +
                " (minimum distance seen: " + std::to_string(min_distance_seen) + ")"),
          min_distance_seen_(min_distance_seen) {}
    double min_distance_seen() const noexcept { return min_distance_seen_; }

private:
    double min_distance_seen_;
};

/// Invalid construction of a domain object (bad invariant).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace abcselect
