#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tqg {

/// Error with a machine-readable category, rendered by the CLI as
/// "error: <category>: <detail>".
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& detail)
        : std::runtime_error("error: " + category + ": " + detail),
          category_(std::move(category)),
          detail_(detail) {}

    const std::string& category() const noexcept { return category_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string category_;
    std::string detail_;
};

inline Error config_error(const std::string& detail) { return Error("config", detail); }
inline Error io_error(const std::string& detail) { return Error("io", detail); }
inline Error numeric_error(const std::string& detail) { return Error("numeric", detail); }
inline Error size_error(const std::string& detail) { return Error("size", detail); }
inline Error field_error(const std::string& detail) { return Error("invalid-field", detail); }
inline Error usage_error(const std::string& detail) { return Error("usage", detail); }

/// Thrown by the time stepper when the fixed-point iteration does not reach
/// the requested tolerance; carries the last residual so the caller can
/// decide on a retry.
class StepFailure : public Error {
public:
    StepFailure(double residual, int iterations)
        : Error("step-failure",
                "fixed-point iteration did not converge after " +
                    std::to_string(iterations) +
                    " iterations (residual " + std::to_string(residual) + ")"),
          residual_(residual),
          iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

}  // namespace tqg
