#include "mukstab/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mukstab {

Rat parse_rational(const std::string& s) {
  auto bad = [&]() { return Error(ErrorKind::ParseError, "malformed rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  std::string num = s, den = "1";
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (num.empty() || den.empty()) throw bad();
  }
  auto check_int = [&](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad();
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw bad();
    }
  };
  check_int(num);
  check_int(den);
  Int d(den);
  if (d == 0) throw bad();
  return Rat(Int(num), d);
}

std::string format_rational(const Rat& r) {
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

Rat rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(static_cast<long long>(j.get<std::int64_t>()));
  throw Error(ErrorKind::ParseError, "expected a rational as \"p/q\" string or integer");
}

Json rational_to_json(const Rat& r) { return Json(format_rational(r)); }

}  // namespace

Polytope polytope_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("halfspaces"))
    throw Error(ErrorKind::ParseError, "polytope JSON needs a 'halfspaces' field");
  std::vector<Halfspace> hs;
  for (const auto& h : j.at("halfspaces")) {
    if (!h.contains("normal") || !h.contains("offset"))
      throw Error(ErrorKind::ParseError, "halfspace needs 'normal' and 'offset'");
    Halfspace half;
    for (const auto& x : h.at("normal")) {
      if (!x.is_number_integer())
        throw Error(ErrorKind::ParseError, "halfspace normals must be integer vectors");
      half.normal.push_back(Int(static_cast<long long>(x.get<std::int64_t>())));
    }
    half.offset = rational_from_json(h.at("offset"));
    hs.push_back(std::move(half));
  }
  Polytope P = from_halfspaces(hs);
  if (j.contains("dim") && j.at("dim").get<int>() != P.dim())
    throw Error(ErrorKind::ValidationError, "declared 'dim' does not match the halfspace data");
  if (j.contains("vertices")) {
    std::vector<RatVec> declared;
    for (const auto& v : j.at("vertices")) {
      RatVec p;
      for (const auto& x : v) p.push_back(rational_from_json(x));
      declared.push_back(std::move(p));
    }
    std::sort(declared.begin(), declared.end(), [](const RatVec& a, const RatVec& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
      }
      return false;
    });
    if (declared != P.vertices())
      throw Error(ErrorKind::ValidationError, "declared vertices disagree with the halfspace data");
  }
  return P;
}

Json polytope_to_json(const Polytope& P) {
  Json j;
  j["dim"] = P.dim();
  j["halfspaces"] = Json::array();
  for (const auto& f : P.facets()) {
    Json h;
    h["normal"] = Json::array();
    for (const auto& x : f.normal) h["normal"].push_back(static_cast<std::int64_t>(x));
    h["offset"] = rational_to_json(f.offset);
    j["halfspaces"].push_back(std::move(h));
  }
  j["vertices"] = Json::array();
  for (const auto& v : P.vertices()) {
    Json p = Json::array();
    for (const auto& x : v) p.push_back(rational_to_json(x));
    j["vertices"].push_back(std::move(p));
  }
  return j;
}

PLFunction pl_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("pieces"))
    throw Error(ErrorKind::ParseError, "PL JSON needs a 'pieces' field");
  PLFunction q;
  for (const auto& pj : j.at("pieces")) {
    PLFunction::Piece piece;
    for (const auto& g : pj.at("gradient")) piece.gradient.push_back(rational_from_json(g));
    piece.constant = rational_from_json(pj.at("constant"));
    q.pieces.push_back(std::move(piece));
  }
  if (q.pieces.empty()) throw Error(ErrorKind::ParseError, "PL function has no pieces");
  return q;
}

Json pl_to_json(const PLFunction& q) {
  Json j;
  j["pieces"] = Json::array();
  for (const auto& p : q.pieces) {
    Json pj;
    pj["gradient"] = Json::array();
    for (const auto& g : p.gradient) pj["gradient"].push_back(rational_to_json(g));
    pj["constant"] = rational_to_json(p.constant);
    j["pieces"].push_back(std::move(pj));
  }
  return j;
}

SamplerSpec sampler_from_json(const Json& j) {
  SamplerSpec s;
  if (j.contains("count")) s.count = j.at("count").get<int>();
  if (j.contains("max_pieces")) s.max_pieces = j.at("max_pieces").get<int>();
  if (j.contains("coeff_bound")) s.coeff_bound = j.at("coeff_bound").get<double>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

Json params_to_json(const Params& p) {
  Json j;
  j["lambda"] = p.lambda;
  j["hbar"] = p.hbar;
  j["xi"] = p.xi;
  Json eff = Json::array();
  for (double x : p.xi_eff()) eff.push_back(x);
  j["xi_eff"] = std::move(eff);
  return j;
}

Json futaki_report_to_json(const FutakiReport& rep) {
  Json j;
  j["value"] = rep.value;
  j["breakdown"] = {
      {"kappa_term", rep.kappa_term},
      {"lambda_sigma_term", rep.lambda_sigma_term},
      {"mean_s", rep.mean_s},
      {"I0", rep.I0},
      {"B0", rep.B0},
      {"Iq", rep.Iq},
      {"Bq", rep.Bq},
      {"Iq1", rep.Iq1},
      {"I1_xi", rep.I1_xi},
      {"hbar_normalized", rep.hbar_normalized()},
      {"fut_ino2", rep.fut_ino2()},
  };
  j["params"] = params_to_json(rep.params);
  if (rep.zeta) j["zeta"] = *rep.zeta;
  if (rep.q) j["q"] = pl_to_json(*rep.q);
  return j;
}

Json critical_point_to_json(const CriticalPoint& cp) {
  Json j;
  j["xi"] = cp.xi;
  j["lambda"] = cp.lambda;
  j["gradient_norm"] = cp.gradient_norm;
  j["hessian_spectrum"] = cp.hessian_spectrum;
  j["newton_iters"] = cp.newton_iters;
  switch (cp.status) {
    case CriticalStatus::converged: j["status"] = "converged"; break;
    case CriticalStatus::max_iters: j["status"] = "max_iters"; break;
    case CriticalStatus::indefinite_hessian: j["status"] = "indefinite_hessian"; break;
  }
  return j;
}

Json limit_diagnostics_to_json(const LimitDiagnostics& diag) {
  Json j;
  j["xi_ext"] = diag.xi_ext;
  j["relative_probe"] = diag.relative_probe;
  j["samples"] = Json::array();
  for (const auto& s : diag.samples) {
    Json sj;
    sj["lambda"] = s.lambda;
    sj["xi_lambda"] = s.xi_lambda;
    sj["lambda_xi"] = s.lambda_xi;
    sj["deviation"] = s.deviation;
    sj["futaki_probe"] = s.futaki_probe;
    sj["relative_probe_gap"] = s.relative_probe_gap;
    j["samples"].push_back(std::move(sj));
  }
  return j;
}

Json scan_report_to_json(const ScanReport& rep, bool include_samples) {
  Json j;
  j["min_value"] = rep.min_value;
  j["argmin_index"] = rep.argmin_index;
  j["count"] = rep.entries.size();
  if (!rep.entries.empty()) j["argmin_q"] = pl_to_json(rep.entries.front().q);
  if (include_samples) {
    j["entries"] = Json::array();
    for (const auto& e : rep.entries) {
      Json ej;
      ej["sample_index"] = e.sample_index;
      ej["futaki"] = e.futaki;
      ej["q"] = pl_to_json(e.q);
      j["entries"].push_back(std::move(ej));
    }
  }
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("JSON parse failure in ") + path + ": " + e.what());
  }
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json json_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::ComputeError, "non-finite value in report");
  return Json(v);
}

namespace {

void render_into(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      std::string path = prefix.empty() ? key : prefix + "." + key;
      render_into(value, path, out);
    }
  } else if (j.is_array()) {
    bool scalar = true;
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) scalar = false;
    }
    if (scalar) {
      out << prefix << " = " << j.dump() << "\n";
    } else {
      int i = 0;
      for (const auto& v : j) {
        render_into(v, prefix + "[" + std::to_string(i++) + "]", out);
      }
    }
  } else {
    out << prefix << " = " << j.dump() << "\n";
  }
}

}  // namespace

std::string render_table(const Json& j) {
  std::ostringstream out;
  render_into(j, "", out);
  return out.str();
}

}  // namespace mukstab
