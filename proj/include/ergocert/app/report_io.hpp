#pragma once

#include <iosfwd>
#include <string>

#include "ergocert/app/config.hpp"
#include "ergocert/certify.hpp"

namespace ergocert::app {

/// Column order of the certification CSV.
extern const char* const kReportColumns;

/// One row per analysed level, full precision, deterministic.
void write_report_csv(const CertificationRun& run, std::ostream& out);

/// One structured line per visited level.
void write_trace(const CertificationRun& run, std::ostream& out);

/// name = value [formula] for every constant of the accepted report.
void write_provenance(const BoundReport& report, std::ostream& out);

/// gamma_hat, delta, L, A, K, B and hat_alpha with their formulas.
void write_drift_summary(const ResolvedModel& model, std::ostream& out);

void write_validation(const ValidationSummary& summary, std::ostream& out);

/// %.17g
std::string exact(double v);

}  // namespace ergocert::app
