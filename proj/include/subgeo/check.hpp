#pragma once

#include <map>
#include <string>
#include <vector>

#include "subgeo/errors.hpp"
#include "subgeo/linalg.hpp"

namespace subgeo {

enum class Status { Pass, Fail, Inconclusive, PremiseFailed, Error };

std::string to_string(Status s);

/// Named residual report for one check.
struct CheckResult {
    std::string name;
    std::string reference;
    int samples = 0;
    int incidents = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    Status status = Status::Inconclusive;
    double wall_time_ms = 0.0;
    std::map<std::string, double> components;
    std::vector<std::string> notes;

    bool passed() const { return status == Status::Pass; }
};

/// Running maxima of named residual components.
class ResidualSink {
public:
    void record(const std::string& component, double residual);
    void record(const std::string& component, const Vector& residual) {
        record(component, residual.size() == 0 ? 0.0 : residual.cwiseAbs().maxCoeff());
    }
    double max() const { return max_; }
    const std::map<std::string, double>& components() const { return components_; }

private:
    double max_ = 0.0;
    std::map<std::string, double> components_;
};

/// Fraction of samples that must evaluate without a numeric incident.
inline constexpr double kMinEvaluatedFraction = 0.9;

/// Evaluates `residual(point, sink)` at every point. Points that raise a
/// numeric incident (domain error, singular matrix, rank drop) are skipped and
/// counted; more than 10% incidents turn the result into Status::Error.
template <typename F>
CheckResult evaluate_samples(std::string name, std::string reference, const std::vector<Point>& points,
                             double tolerance, F&& residual) {
    CheckResult out;
    out.name = std::move(name);
    out.reference = std::move(reference);
    out.tolerance = tolerance;
    ResidualSink sink;
    for (const auto& p : points) {
        try {
            residual(p, sink);
            ++out.samples;
        } catch (const EvalDomain&) {
            ++out.incidents;
        } catch (const SingularMatrix&) {
            ++out.incidents;
        } catch (const RankDrop&) {
            ++out.incidents;
        }
    }
    out.max_residual = sink.max();
    out.components = sink.components();
    const int total = out.samples + out.incidents;
    if (total == 0) {
        out.status = Status::Inconclusive;
    } else if (static_cast<double>(out.samples) < kMinEvaluatedFraction * total) {
        out.status = Status::Error;
        out.notes.push_back(std::to_string(out.incidents) + " of " + std::to_string(total) +
                            " samples raised numeric incidents");
    } else {
        out.status = out.max_residual <= tolerance ? Status::Pass : Status::Fail;
    }
    return out;
}

}  // namespace subgeo
