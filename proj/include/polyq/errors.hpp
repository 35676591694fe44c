#ifndef POLYQ_ERRORS_HPP
#define POLYQ_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyq {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- polygon construction ---------------------------------------------------

class NotClosed : public Error {
  public:
    explicit NotClosed(const std::string& what) : Error("NotClosed: " + what) {}
};

class SelfIntersecting : public Error {
  public:
    explicit SelfIntersecting(const std::string& what) : Error("SelfIntersecting: " + what) {}
};

class AngleCertificateMismatch : public Error {
  public:
    AngleCertificateMismatch(std::size_t vertex, double certified, double measured)
        : Error("AngleCertificateMismatch: vertex " + std::to_string(vertex) +
                ", certified " + std::to_string(certified) + " rad, measured " +
                std::to_string(measured) + " rad"),
          vertex_index(vertex), certified_angle(certified), measured_angle(measured) {}

    std::size_t vertex_index;
    double certified_angle;
    double measured_angle;
};

class GroupNotFinite : public Error {
  public:
    explicit GroupNotFinite(std::size_t cap)
        : Error("GroupNotFinite: closure exceeded cap of " + std::to_string(cap) +
                " elements (non-rational input?)") {}
};

class RegionOutsideDomain : public Error {
  public:
    explicit RegionOutsideDomain(const std::string& what)
        : Error("RegionOutsideDomain: " + what) {}
};

// --- billiard flow -----------------------------------------------------------

class StuckAtBoundary : public Error {
  public:
    explicit StuckAtBoundary(const std::string& what) : Error("StuckAtBoundary: " + what) {}
};

class MaxBouncesExceeded : public Error {
  public:
    explicit MaxBouncesExceeded(std::size_t cap)
        : Error("MaxBouncesExceeded: more than " + std::to_string(cap) + " reflections") {}
};

class TooManyVertexEvents : public Error {
  public:
    TooManyVertexEvents(std::size_t discards, std::size_t samples)
        : Error("TooManyVertexEvents: " + std::to_string(discards) + " vertex hits in " +
                std::to_string(samples) + " samples (geometry bug?)") {}
};

// --- mesh / FEM ---------------------------------------------------------------

class DegenerateInput : public Error {
  public:
    explicit DegenerateInput(const std::string& what) : Error("DegenerateInput: " + what) {}
};

class SingularElement : public Error {
  public:
    explicit SingularElement(std::size_t tri)
        : Error("SingularElement: triangle " + std::to_string(tri) + " has non-positive area") {}
};

class NoConvergence : public Error {
  public:
    NoConvergence(std::string what, std::vector<double> residuals_)
        : Error("NoConvergence: " + what), residuals(std::move(residuals_)) {}

    std::vector<double> residuals;
};

// --- analysis / pipeline ------------------------------------------------------

class EmptyWindow : public Error {
  public:
    explicit EmptyWindow(double cutoff)
        : Error("EmptyWindow: no eigenvalues at or below cutoff " + std::to_string(cutoff)) {}
};

class ConfigInvalid : public Error {
  public:
    ConfigInvalid(const std::string& field_, const std::string& what)
        : Error("ConfigInvalid: " + field_ + ": " + what), field(field_) {}

    std::string field;
};

class StageFailed : public Error {
  public:
    StageFailed(const std::string& stage_, const std::string& what)
        : Error("StageFailed: " + stage_ + ": " + what), stage(stage_) {}

    std::string stage;
};

}  // namespace polyq

#endif  // POLYQ_ERRORS_HPP
