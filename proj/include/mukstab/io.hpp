#ifndef MUKSTAB_IO_HPP
#define MUKSTAB_IO_HPP

#include <string>

#include <json.hpp>

#include "mukstab/futaki.hpp"
#include "mukstab/volmin.hpp"

namespace mukstab {

using Json = nlohmann::ordered_json;

// Polytope schema:
//   {"dim": n,
//    "halfspaces": [{"normal": [int...], "offset": "p/q"}, ...],
//    "vertices": [["p/q", ...], ...]}        (optional, cross-checked)
// Rationals are strings "p/q" (or plain integers).
Polytope polytope_from_json(const Json& j);
Json polytope_to_json(const Polytope& P);

// PL schema: {"pieces": [{"gradient": ["p/q", ...], "constant": "p/q"}, ...]}
PLFunction pl_from_json(const Json& j);
Json pl_to_json(const PLFunction& q);

// Sampler schema: {"count": N, "max_pieces": m, "coeff_bound": B, "seed": s}
SamplerSpec sampler_from_json(const Json& j);

Json params_to_json(const Params& p);
Json futaki_report_to_json(const FutakiReport& rep);
Json critical_point_to_json(const CriticalPoint& cp);
Json limit_diagnostics_to_json(const LimitDiagnostics& diag);
Json scan_report_to_json(const ScanReport& rep, bool include_samples);

Json load_json_file(const std::string& path);

// Fixed-format double serialization so reports are byte-stable.
std::string format_double(double v);
Json json_double(double v);

// Plain-text table rendering of a (possibly nested) JSON report.
std::string render_table(const Json& j);

}  // namespace mukstab

#endif
