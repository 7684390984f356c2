#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strata/montecarlo.hpp"

namespace strata {

// Summary CSV.
// Header: stratum_id,N,n,mean_x,mean_y,sd_x,sd_y,rho
// optionally extended by any subsequence of: cx,cy,beta2x,f_override.
// "." decimal point, no locale handling, LF or CRLF.
StratifiedDesign parse_summary_csv(std::string_view text);

// Inverse of parse_summary_csv; doubles carry 17 significant digits, so the
// round trip is exact. Optional columns appear iff some stratum holds them.
std::string write_summary_csv(const StratifiedDesign& design);

// Microdata CSV. Header: stratum_id,y,x. Rows group by stratum_id in
// first-appearance order; moments use divisor (count - 1).
struct MicroData {
  SurveySample sample;
  // filled when the file is read as a full census of its strata
  std::optional<FinitePopulation> population;
};
MicroData parse_micro_csv(std::string_view text, bool census = false);

enum class FConvention { computed, tabulated };

const char* f_convention_name(FConvention convention) noexcept;

// The bundled survey dataset(s). "kadilar-cingi-1999": apple production (y)
// vs apple trees (x) in 854 Turkish villages, six strata, n = 140. The
// tabulated variant applies the source table's printed f values (including
// its internally inconsistent f6 = 0.006) as overrides.
StratifiedDesign builtin_dataset(const std::string& name,
                                 FConvention convention = FConvention::computed);
std::vector<std::string> builtin_dataset_names();

enum class ReportFormat { json, table };

// AnalysisReport serialization. json: stable key order, full-precision
// numbers. table: fixed-width PRE table with two-decimal PREs plus a footer
// of the tuning optima.
std::string write_report(const AnalysisReport& report, ReportFormat format);

// Parses write_report's JSON output back; the round trip is field-exact.
AnalysisReport report_from_json(std::string_view json_text);

// Deterministic text renderings used by the CLI and the determinism checks.
std::string write_simulation_report(const SimulationReport& report);
std::string write_enumeration_report(const EnumerationResult& result);

}  // namespace strata
