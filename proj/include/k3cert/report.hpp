#ifndef K3CERT_REPORT_HPP
#define K3CERT_REPORT_HPP

#include <json.hpp>

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "k3cert/parse.hpp"
#include "k3cert/projective.hpp"

namespace k3cert {

using Json = nlohmann::ordered_json;

/// One certification check: what it measured, against which threshold, and
/// which identity of the construction it certifies (closed vocabulary).
struct CheckResult {
    std::string name;
    std::string certifies;
    std::string status;  // pass | fail | inconclusive
    double deviation = 0;
    double threshold = 0;
    double elapsed_ms = 0;
};

struct Report {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    std::string overall;  // pass iff every check passes
    Json payload;         // command-specific fields
    std::vector<std::string> notes;

    void finish() {
        overall = "pass";
        for (const auto& c : checks)
            if (c.status != "pass") overall = "fail";
    }
    bool passed() const { return overall == "pass"; }
};

/// The closed set of identity tags a check may certify.
inline const std::set<std::string>& certifies_vocabulary() {
    static const std::set<std::string> v = {
        "surface-nonsingularity",
        "singular-witness-soundness",
        "pivot-agreement",
        "chart-overlap-agreement",
        "form-nondegeneracy",
        "transition-identity",
        "quaternion-and-metric",
        "kahler-angle-identity",
        "angle-matrix-consistency",
        "angle-violation-detectability",
        "intertwining-residual",
        "angle-sum-constancy",
        "bezout-count",
        "tangency-multiplicity",
        "slice-triple-finiteness",
        "slice-singular-branch",
        "map-h-identity",
        "map-h-holomorphy",
        "map-h-origin",
        "map-h-constant-coordinate",
        "determinism",
    };
    return v;
}

inline Json to_json(const CheckResult& c, bool stable) {
    Json j;
    j["name"] = c.name;
    j["certifies"] = c.certifies;
    j["status"] = c.status;
    j["deviation"] = c.deviation;
    j["threshold"] = c.threshold;
    j["elapsed_ms"] = stable ? 0.0 : c.elapsed_ms;
    return j;
}

namespace detail_report {
inline void scrub_timings(Json& j) {
    if (j.is_object()) {
        for (auto& [key, value] : j.items()) {
            if (key == "elapsed_ms" || key == "worst_pair_ms")
                value = 0.0;
            else
                scrub_timings(value);
        }
    } else if (j.is_array()) {
        for (auto& value : j) scrub_timings(value);
    }
}
}  // namespace detail_report

inline Json to_json(const Report& r, bool stable) {
    Json j;
    j["command"] = r.command;
    j["seed"] = r.seed;
    j["overall"] = r.overall;
    j["checks"] = Json::array();
    for (const auto& c : r.checks) j["checks"].push_back(to_json(c, stable));
    j["payload"] = r.payload;
    if (stable) detail_report::scrub_timings(j["payload"]);
    j["notes"] = r.notes;
    return j;
}

inline Json point_to_json(const ProjPointQ& p) {
    Json coords = Json::array();
    for (const auto& c : p.coords) coords.push_back(c.str());
    return Json{{"coords", coords}};
}

inline Json point_to_json(const ProjPointC& p) {
    Json coords = Json::array();
    for (const auto& c : p.coords) coords.push_back(Json::array({c.real(), c.imag()}));
    return Json{{"coords", coords}};
}

/// Decode {"coords": [...]}: strings in the coefficient syntax for exact
/// points, [re, im] float pairs for numeric ones.
inline ProjPointQ exact_point_from_json(const Json& j) {
    std::vector<GaussRat> coords;
    for (const auto& c : j.at("coords")) coords.push_back(parse_gauss_rat(c.get<std::string>()));
    return ProjPointQ(std::move(coords));
}

inline ProjPointC numeric_point_from_json(const Json& j) {
    std::vector<Complex> coords;
    for (const auto& c : j.at("coords"))
        coords.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    return ProjPointC(std::move(coords));
}

/// Millisecond stopwatch for per-check timings.
class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace k3cert

#endif
