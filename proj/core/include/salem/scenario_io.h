#ifndef SALEM_SCENARIO_IO_H_
#define SALEM_SCENARIO_IO_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "salem/dimension.h"
#include "salem/measure.h"
#include "salem/qsets.h"
#include "salem/rational.h"
#include "salem/spectrum.h"

namespace salem {

using Json = nlohmann::json;

// Keys: m, n, theta, Q {kind, payload | path}, Psi {family, tau | table},
// a, h {family, c, p | xs, ys}, Mset, and optionally K. A relative Q path is
// resolved against base_dir.
Scenario ScenarioFromJson(const Json& j, const std::string& base_dir = "");
Json ScenarioToJson(const Scenario& s);
Scenario LoadScenario(const std::string& path);

// Optional "predict": {"descriptor": ..., "params": {name: "p/q" | number}}.
struct PredictSpec {
  std::string descriptor;
  std::map<std::string, Rational> params;
};
std::optional<PredictSpec> PredictFromJson(const Json& j);

// FNV-1a 64 of the compact canonical dump, as 16 hex digits.
std::string Fnv1a64Hex(std::string_view bytes);
std::string ScenarioHash(const Scenario& s);

// Named scenario documents selected on the command line as preset:NAME.
const std::vector<std::string>& ScenarioPresetNames();
Json ScenarioPreset(const std::string& name);

// Shortest round-trip decimal form, so outputs are byte-stable.
std::string FormatReal(double x);
// Numbers as JSON, with non-finite values mapped to null.
Json RealJson(double x);

Json CertReportToJson(const CertReport& r);

void WriteSpectrumCsv(const SpectrumTable& t, std::ostream& out);
Json SpectrumMetaJson(const SpectrumTable& t);

void WriteDensityCsv(const MeasureBuilder& b, int k, std::ostream& out);
// Columns: xi coordinates, re, im, err, g, ratio = |mu^| / g.
void WriteFourierCsv(const SpectralGrid& grid, const Envelope& g, std::ostream& out);
Json MeasureSummaryJson(const MeasureBuilder& b, const std::string& scenario_hash);
Json ConvergenceToJson(const ConvergenceReport& r);
Json SupportToJson(const SupportReport& r);

Json PredictionToJson(const Prediction& p);
Json DimensionReportToJson(const DimensionReport& r);
void WriteAnnuliCsv(const std::vector<FourierAnnulus>& annuli, std::ostream& out);
Json CoverSumToJson(const CoverSum& c);

}  // namespace salem

#endif  // SALEM_SCENARIO_IO_H_
