#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dsc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateCell : public Error {
public:
    DegenerateCell(long cell, const std::string& what)
        : Error("degenerate cell " + std::to_string(cell) + ": " + what), cell_(cell) {}
    long cell() const { return cell_; }

private:
    long cell_;
};

class SingularBasis : public Error {
public:
    using Error::Error;
};

class InvalidDimensions : public Error {
public:
    using Error::Error;
};

/// Raised when the mesh fails validation; carries every finding.
class MeshError : public Error {
public:
    MeshError(const std::string& summary, std::vector<std::string> findings)
        : Error(summary), findings_(std::move(findings)) {}
    const std::vector<std::string>& findings() const { return findings_; }

private:
    std::vector<std::string> findings_;
};

class NearSingularDenominator : public Error {
public:
    NearSingularDenominator(long face, double magnitude)
        : Error("near-singular port update denominator at face " + std::to_string(face)
                + " (|d| = " + std::to_string(magnitude) + ")"),
          face_(face), magnitude_(magnitude) {}
    long face() const { return face_; }
    double magnitude() const { return magnitude_; }

private:
    long face_;
    double magnitude_;
};

class UnknownTag : public Error {
public:
    using Error::Error;
};

class NonFiniteUpdate : public Error {
public:
    NonFiniteUpdate(long cell, const std::string& field)
        : Error("non-finite " + field + " update in cell " + std::to_string(cell)), cell_(cell) {}
    long cell() const { return cell_; }

private:
    long cell_;
};

class SorDiverged : public Error {
public:
    SorDiverged(int sweeps, double residual)
        : Error("SOR diverged after " + std::to_string(sweeps) + " sweeps (residual "
                + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class NotConverged : public Error {
public:
    NotConverged(int iterations, double residual)
        : Error("pressure projection not converged after " + std::to_string(iterations)
                + " outer iterations (sum |I| = " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class ReconstructionMismatch : public Error {
public:
    using Error::Error;
};

/// Wraps (via std::throw_with_nested) a module error raised inside a time
/// step with the step index and time.
class StepFailure : public Error {
public:
    StepFailure(long step, double time, const std::string& what)
        : Error("step " + std::to_string(step) + " (t = " + std::to_string(time) + " s): " + what),
          step_(step), time_(time) {}
    long step() const { return step_; }
    double time() const { return time_; }

private:
    long step_;
    double time_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidProbe : public Error {
public:
    using Error::Error;
};

/// Schema violations collected over a whole configuration text.
class SchemaError : public Error {
public:
    explicit SchemaError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v)
    {
        std::string s = "configuration invalid:";
        for (const auto& e : v) s += "\n  " + e;
        return s;
    }
    std::vector<std::string> violations_;
};

} // namespace dsc
