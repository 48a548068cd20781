// Deterministic exports: CSV and JSON writers used by the command-line tool.
// All numbers are formatted with shortest round-trip formatting (to_chars),
// so identical runs produce bit-identical files regardless of locale.  Every
// file starts with a three-line comment header carrying the tool version and
// the model / config fingerprints.
#pragma once

#include <string>
#include <vector>

#include "twave/dispersion1d.hpp"
#include "twave/minimize2d.hpp"
#include "twave/nonlinearity.hpp"
#include "twave/quadrature1d.hpp"

namespace twave {

// shortest representation that parses back to the same double
std::string fmt_double(double v);

struct OutputHeader {
  std::string model_hash;   // 16 hex digits
  std::string config_hash;  // 16 hex digits
};

OutputHeader make_header(const Nonlinearity& m, const std::string& config_canonical);

void write_profile_csv(const std::string& path, const OutputHeader& h,
                       const WaveProfile1D& prof);
void write_invariants_json(const std::string& path, const OutputHeader& h,
                           const WaveInvariants& w);
void write_dispersion_csv(const std::string& path, const OutputHeader& h,
                          const DispersionCurve& curve);
// envelope sampled on a uniform momentum grid over [0, pi]
void write_envelope_csv(const std::string& path, const OutputHeader& h,
                        const Envelope& env, int n_grid);
void write_diagnostics_json(const std::string& path, const OutputHeader& h,
                            const CurveDiagnostics& d);
void write_scan_csv(const std::string& path, const OutputHeader& h,
                    const LambdaScan& scan);
void write_scan_json(const std::string& path, const OutputHeader& h,
                     const LambdaScan& scan);
void write_field_csv(const std::string& path, const OutputHeader& h,
                     const Field2D& f);
void write_assumptions_json(const std::string& path, const OutputHeader& h,
                            const AssumptionReport& rep);

}  // namespace twave
