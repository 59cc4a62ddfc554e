#include "latmaj/report.hpp"

#include <cstdio>

namespace latmaj {

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string format_fixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  std::string out = buf;
  if (out == "-0.0000") out = "0.0000";
  return out;
}

namespace {

Json real_array(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(format_real(v));
  return out;
}

Json rational_array(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Json optional_real(const std::optional<double>& v) {
  return v ? Json(format_real(*v)) : Json(nullptr);
}

}  // namespace

Json to_json(const PCVector& pc) {
  Json out;
  out["m"] = pc.m;
  out["sum"] = pc.sum;
  out["mean"] = to_string(pc.mean);
  out["mean_decimal"] = format_real(to_double(pc.mean));
  out["theta"] = pc.theta;
  out["frac"] = to_string(pc.frac);
  out["values"] = pc.values;
  out["sorted"] = pc.sorted;
  return out;
}

Json to_json(const DiscrepancyValue& value) {
  Json out;
  out["value"] = format_real(value.value);
  out["squared"] = format_real(value.squared);
  out["bound"] = format_real(value.bound_squared);
  if (value.warning) out["warning"] = *value.warning;
  return out;
}

Json to_json(const CriterionReport& r) {
  Json out;
  out["n"] = r.n;
  out["s"] = r.s;
  out["q"] = r.q;
  Json schur = Json::array();
  for (const auto& e : r.schur) {
    schur.push_back({{"kernel", e.kernel}, {"value", format_real(e.value)}, {"bound", format_real(e.bound)}});
  }
  out["schur"] = schur;
  out["gwp"] = {{"value", real_array(r.gwp.A)},
                {"exact", rational_array(r.gwp.exact)},
                {"bound", real_array(r.benchmarks.Astar)}};
  out["deviation"] = {{"value", real_array(r.deviation.B)}, {"bound", real_array(r.benchmarks.Bstar)}};
  out["psi_c"] = {{"value", rational_array(r.deviation.psiC)}};
  out["ave_chi2"] = r.ave_chi2 ? Json{{"value", format_real(*r.ave_chi2)},
                                      {"bound", optional_real(r.ave_chi2_bound)},
                                      {"three_level", optional_real(r.ave_chi2_three_level)}}
                               : Json(nullptr);
  out["e_s2"] = r.e_s2 ? Json{{"value", format_real(*r.e_s2)}, {"bound", optional_real(r.e_s2_bound)}}
                       : Json(nullptr);
  if (r.categorical) {
    Json cat = to_json(*r.categorical);
    cat["params"] = {{"a", format_real(r.categorical_params->a)},
                     {"b", format_real(r.categorical_params->b)},
                     {"mu", format_real(r.categorical_params->mu())},
                     {"rho", format_real(r.categorical_params->rho())}};
    out["categorical_d2"] = cat;
  } else {
    out["categorical_d2"] = nullptr;
  }
  out["cl2"] = r.cl2 ? to_json(*r.cl2) : Json(nullptr);
  out["wl2"] = r.wl2 ? to_json(*r.wl2) : Json(nullptr);
  return out;
}

std::string trace_jsonl(const DescentTrace& trace) {
  std::string out;
  for (std::size_t it = 0; it < trace.iterations.size(); ++it) {
    const auto& step = trace.iterations[it];
    Json rec;
    rec["iter"] = it + 1;
    rec["i"] = step.swap.i + 1;
    rec["t"] = step.swap.t + 1;
    rec["j"] = step.swap.j + 1;
    rec["delta"] = format_real(step.swap.delta);
    rec["psi"] = format_real(step.psi);
    out += rec.dump() + "\n";
  }
  Json fin;
  fin["final_psi"] = format_real(trace.final_psi);
  fin["bound"] = format_real(trace.bound);
  fin["terminated"] = std::string(to_string(trace.terminated));
  out += fin.dump() + "\n";
  return out;
}

}  // namespace latmaj
