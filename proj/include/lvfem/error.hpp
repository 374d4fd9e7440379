#pragma once

#include <stdexcept>
#include <string>

namespace lvfem {

/// Base of every error thrown by the library. `category()` is a short
/// machine-readable tag used by the CLI for its one-line error report.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

class MeshError : public Error {
public:
    explicit MeshError(const std::string& what) : Error("mesh", what) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double final_residual, int iterations)
        : Error("solver", what), final_residual_(final_residual), iterations_(iterations) {}

    double final_residual() const noexcept { return final_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double final_residual_;
    int iterations_;
};

class PoleError : public Error {
public:
    explicit PoleError(const std::string& what) : Error("pole", what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

} // namespace lvfem
