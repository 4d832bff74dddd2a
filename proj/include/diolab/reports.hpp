#ifndef DIOLAB_REPORTS_HPP
#define DIOLAB_REPORTS_HPP

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "diolab/correspondence.hpp"
#include "diolab/goodness.hpp"
#include "diolab/io.hpp"
#include "diolab/measures.hpp"
#include "diolab/nondivergence.hpp"
#include "diolab/oracle.hpp"

namespace diolab {

using Json = nlohmann::ordered_json;

// JSON has no encoding for non-finite doubles; report them as strings.
inline Json num_or_str(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

inline Json base_report(const std::string& command) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  return j;
}

inline Json formula_tags() {
  Json j;
  j["gamma_formula"] = "(v-n)/(n(v+1))";
  j["gamma_sharp_formula"] = "(v-n)/(v+1)";
  j["standard_flow"] = "diag(2^nt, 2^-t, ..., 2^-t)";
  j["multiplicative_flow"] = "diag(2^t, 2^-t_1, ..., 2^-t_n), t = sum t_i";
  return j;
}

// ---- trajectory ----

inline std::string traj_csv(const TrajectoryRecord& rec, const mpq_class* height_at_zero = nullptr) {
  std::vector<std::vector<std::string>> rows;
  if (height_at_zero)
    rows.push_back({"0", rat_str(*height_at_zero), fmt_double(log2_mpq(*height_at_zero))});
  for (const auto& pt : rec.points)
    rows.push_back({std::to_string(pt.t), rat_str(pt.lambda1), fmt_double(pt.log2_lambda1)});
  std::ostringstream os;
  write_csv(os, {"t", "lambda1", "log2_lambda1"}, rows);
  return os.str();
}

inline Json traj_json(const TrajectoryRecord& rec) {
  Json j;
  j["kind"] = rec.kind == FlowKind::Standard ? "standard" : "multiplicative";
  j["points"] = rec.points.size();
  j["tail_start"] = rec.tail_start;
  j["gamma_hat"] = num_or_str(rec.gamma_hat);
  j["omega_hat_sharp"] = num_or_str(rec.omega_hat_sharp);
  j["omega_hat_paper"] = num_or_str(rec.omega_hat_paper);
  j["h_min"] = rat_str(rec.h_min);
  j["h_min_t"] = rec.h_min_t;
  j["precision_exhausted"] = rec.precision_exhausted;
  return j;
}

// ---- oracle tables ----

inline std::string oracle_csv(const BestApproximationTable& tab) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : tab.rows) {
    std::string qs;
    for (size_t i = 0; i < row.arg_q.size(); ++i)
      qs += (i ? ";" : "") + std::to_string(row.arg_q[i]);
    rows.push_back({std::to_string(row.s), rat_str(row.m), row.arg_p.get_str(), qs,
                    fmt_double(row.v_scale)});
  }
  std::ostringstream os;
  write_csv(os, {"s", "m", "p", "q", "v_scale"}, rows);
  return os.str();
}

inline Json oracle_json(const BestApproximationTable& tab) {
  Json j;
  j["s_max"] = tab.s_max;
  j["tail_start"] = tab.tail_start;
  j["omega_limsup"] = num_or_str(tab.omega_limsup);
  j["omega_slope"] = num_or_str(tab.omega_slope);
  j["omega_infinite"] = tab.omega_infinite;
  return j;
}

inline std::string mult_csv(const MultiplicativeTable& tab) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : tab.rows)
    rows.push_back({std::to_string(row.s), rat_str(row.m), fmt_double(row.v_mult),
                    fmt_double(row.v_standard)});
  std::ostringstream os;
  write_csv(os, {"s", "m", "v_mult", "v_standard"}, rows);
  return os.str();
}

inline Json mult_json(const MultiplicativeTable& tab) {
  Json j;
  j["s_max"] = tab.s_max;
  j["omega_mult"] = num_or_str(tab.omega_mult);
  j["omega_standard"] = num_or_str(tab.omega_standard);
  j["omega_infinite"] = tab.omega_infinite;
  j["ordering_ok"] = !(tab.omega_mult < tab.omega_standard);
  return j;
}

// ---- measure property reports ----

inline Json property_json(const PropertyReport& rep) {
  Json j;
  switch (rep.property) {
    case MeasureProperty::Federer:
      j["property"] = "federer";
      j["D_hat"] = rep.D_hat;
      break;
    case MeasureProperty::AbsDecay:
      j["property"] = "abs_decay";
      j["C_hat"] = rep.C_hat;
      j["alpha_hat"] = rep.alpha_hat;
      break;
    case MeasureProperty::Scaling:
      j["property"] = "scaling";
      j["c_hat"] = rep.c_hat;
      j["beta_hat"] = rep.beta_hat;
      break;
  }
  j["trials"] = rep.trials;
  j["discarded"] = rep.discarded;
  j["pass"] = rep.pass;
  return j;
}

inline Json goodness_json(const GoodnessReport& rep) {
  Json j;
  j["C_hat"] = rep.C_hat;
  j["alpha_hat"] = rep.alpha_hat;
  j["rho_hat"] = rep.rho_hat;
  j["worst_c"] = rep.worst_c;
  j["worst_ball"] = rep.worst_ball;
  j["trials"] = rep.trials;
  j["discarded"] = rep.discarded;
  j["degenerate"] = rep.degenerate;
  j["pass"] = rep.pass;
  return j;
}

inline Json nonplanar_json(const NonplanarReport& rep) {
  Json j;
  j["nonplanar"] = rep.nonplanar;
  j["sigma_min"] = rep.sigma_min;
  j["sigma_ratio"] = rep.sigma_ratio;
  j["rows"] = rep.rows;
  return j;
}

// ---- nondivergence ----

inline std::string scan_csv(const NondivergenceScan& sc) {
  std::vector<std::string> header{"t"};
  for (const auto& e : sc.eps_grid) header.push_back("eps=" + rat_str(e));
  std::vector<std::vector<std::string>> rows;
  for (size_t ti = 0; ti < sc.t_list.size(); ++ti) {
    std::vector<std::string> row{std::to_string(sc.t_list[ti])};
    for (double r : sc.ratios[ti]) row.push_back(fmt_double(r));
    rows.push_back(std::move(row));
  }
  std::ostringstream os;
  write_csv(os, header, rows);
  return os.str();
}

inline Json scan_json(const NondivergenceScan& sc) {
  Json j;
  j["t_list"] = sc.t_list;
  Json eps = Json::array();
  for (const auto& e : sc.eps_grid) eps.push_back(rat_str(e));
  j["eps_grid"] = eps;
  j["slopes"] = sc.slopes;
  j["alpha_bound"] = sc.alpha_bound;
  j["K_hat"] = sc.K_hat;
  j["theorem_bound_holds"] = sc.theorem_bound_holds;
  j["hypothesis_unverified"] = sc.hypothesis_unverified;
  j["samples"] = sc.samples;
  return j;
}

inline std::string bc_csv(const BcSeries& bc) {
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < bc.terms.size(); ++i)
    rows.push_back({std::to_string(i + 1), fmt_double(bc.terms[i]), fmt_double(bc.partial_sums[i])});
  std::ostringstream os;
  write_csv(os, {"t", "term", "partial_sum"}, rows);
  return os.str();
}

inline Json bc_json(const BcSeries& bc) {
  Json j;
  j["v"] = rat_str(bc.v);
  j["gamma"] = rat_str(bc.gamma);
  j["hypothesis_ok"] = bc.hypothesis_ok;
  j["total"] = bc.partial_sums.empty() ? 0.0 : bc.partial_sums.back();
  j["converged"] = bc.converged;
  j["samples"] = bc.samples;
  return j;
}

inline std::string extremality_csv(const ExtremalityResult& res) {
  std::vector<std::string> header{"sample", "omega_sharp"};
  bool mult = !res.omegas_mult.empty();
  if (mult) header.push_back("omega_mult");
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < res.omegas.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), fmt_double(res.omegas[i])};
    if (mult) row.push_back(fmt_double(res.omegas_mult[i]));
    rows.push_back(std::move(row));
  }
  std::ostringstream os;
  write_csv(os, header, rows);
  return os.str();
}

inline Json extremality_json(const ExtremalityResult& res) {
  Json j;
  j["t_max"] = res.t_max;
  j["samples"] = res.samples;
  j["median_omega"] = res.median_omega;
  if (!res.omegas_mult.empty()) j["median_omega_mult"] = res.median_omega_mult;
  j["margin"] = res.margin;
  j["frac_exceeding"] = res.frac_exceeding;
  return j;
}

}  // namespace diolab

#endif  // DIOLAB_REPORTS_HPP
