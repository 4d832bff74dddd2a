// diolab: exact Diophantine-approximation experiments from the command line.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "diolab/reports.hpp"

using namespace diolab;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "2^-1..2^-10" expands to the inclusive power range; otherwise a comma list
// of exact values ("1/2,0.25,2^-3").
std::vector<mpq_class> parse_eps(const std::string& s) {
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    if (a.rfind("2^", 0) != 0 || b.rfind("2^", 0) != 0)
      throw std::invalid_argument("range grammar needs power-of-two endpoints: " + s);
    long ea = std::stol(a.substr(2)), eb = std::stol(b.substr(2));
    std::vector<mpq_class> out;
    if (ea >= eb)
      for (long e = ea; e >= eb; --e) out.push_back(pow2_mpq(e));
    else
      for (long e = ea; e <= eb; ++e) out.push_back(pow2_mpq(e));
    return out;
  }
  std::vector<mpq_class> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_exact(tok));
  return out;
}

// "start:stop:step" or a comma list
std::vector<long> parse_tlist(const std::string& s) {
  std::vector<long> out;
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    auto parts = split(s, ':');
    if (parts.size() != 3) throw std::invalid_argument("t grammar is start:stop:step");
    long start = std::stol(parts[0]), stop = std::stol(parts[1]), step = std::stol(parts[2]);
    if (step <= 0) throw std::invalid_argument("t step must be positive");
    for (long t = start; t <= stop; t += step) out.push_back(t);
    return out;
  }
  for (const auto& tok : split(s, ',')) out.push_back(std::stol(tok));
  return out;
}

// veronese:N | identity:D | poly:c0,c1,...[;c0,c1,...]
MapSpec parse_map(const std::string& s) {
  auto colon = s.find(':');
  std::string kind = s.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "veronese") return MapSpec::veronese(std::stoi(rest));
  if (kind == "identity") return MapSpec::identity(std::stoi(rest));
  if (kind == "poly") {
    std::vector<std::vector<mpq_class>> coeffs;
    for (const auto& grp : split(rest, ';')) {
      std::vector<mpq_class> c;
      for (const auto& tok : split(grp, ',')) c.push_back(parse_exact(tok));
      coeffs.push_back(std::move(c));
    }
    return MapSpec::polynomial(std::move(coeffs));
  }
  throw std::invalid_argument("unknown map spec: " + s);
}

// lebesgue:lo,hi[;lo,hi...] | cantor[:depth] | ifs:ratio;off1;off2[;...]
MeasureSampler parse_measure(const std::string& s, uint64_t seed, int res_bits) {
  auto colon = s.find(':');
  std::string kind = s.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (kind == "lebesgue") {
    Point center;
    mpq_class radius = -1;
    for (const auto& dim : split(rest, ';')) {
      auto lohi = split(dim, ',');
      if (lohi.size() != 2) throw std::invalid_argument("lebesgue grammar is lo,hi[;lo,hi]");
      mpq_class lo = parse_exact(lohi[0]), hi = parse_exact(lohi[1]);
      if (hi <= lo) throw std::invalid_argument("lebesgue interval needs lo < hi");
      mpq_class r = (hi - lo) / 2;
      if (radius >= 0 && r != radius)
        throw std::invalid_argument("lebesgue box must have equal side lengths");
      radius = r;
      center.push_back((lo + hi) / 2);
    }
    MeasureSampler ms = MeasureSampler::lebesgue(std::move(center), radius, seed);
    ms.res_bits = res_bits;
    return ms;
  }
  if (kind == "cantor") {
    int depth = rest.empty() ? 64 : std::stoi(rest);
    return MeasureSampler::cantor(seed, depth);
  }
  if (kind == "ifs") {
    auto parts = split(rest, ';');
    if (parts.size() < 3) throw std::invalid_argument("ifs grammar is ratio;off1;off2[;...]");
    mpq_class ratio = parse_exact(parts[0]);
    std::vector<IfsMap> maps;
    for (size_t i = 1; i < parts.size(); ++i)
      maps.push_back(IfsMap{ratio, {parse_exact(parts[i])}, 1.0});
    return MeasureSampler::ifs(std::move(maps), 64, seed);
  }
  throw std::invalid_argument("unknown measure spec: " + s);
}

DomainBall parse_ball(const std::string& s) {
  std::vector<double> center;
  double radius = -1;
  for (const auto& dim : split(s, ';')) {
    auto lohi = split(dim, ',');
    if (lohi.size() != 2) throw std::invalid_argument("ball grammar is lo,hi[;lo,hi]");
    double lo = parse_exact(lohi[0]).get_d(), hi = parse_exact(lohi[1]).get_d();
    center.push_back((lo + hi) / 2);
    double r = (hi - lo) / 2;
    radius = radius < 0 ? r : std::max(radius, r);
  }
  return DomainBall{std::move(center), radius};
}

TargetVector make_target(const std::string& ystr, int n, unsigned long precision) {
  auto toks = split(ystr, ',');
  if ((int)toks.size() != n)
    throw std::invalid_argument("--y needs exactly n comma-separated coordinates");
  std::vector<mpq_class> vals;
  for (const auto& t : toks) vals.push_back(parse_exact(t));
  return TargetVector::from_rationals(vals, precision);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

void emit(const Json& j, const std::string& json_path, const std::string& csv,
          const std::string& csv_path) {
  if (!csv_path.empty()) {
    if (csv.empty()) throw std::runtime_error("this command produces no CSV");
    write_text(csv_path, csv);
  }
  std::string dump = j.dump(2) + "\n";
  if (json_path.empty())
    std::cout << dump;
  else
    write_text(json_path, dump);
}

struct CommonFlags {
  std::string out_csv, out_json;
  uint64_t seed = 0;
  int threads = 1;
  int res_bits = 400;

  void attach(CLI::App* cmd, bool with_measure_flags = false) {
    cmd->add_option("--out", out_csv, "CSV output path");
    cmd->add_option("--json", out_json, "JSON output path (default: stdout)");
    cmd->add_option("--threads", threads, "worker cap; outputs are invariant under it");
    if (with_measure_flags) {
      cmd->add_option("--seed", seed, "sampler seed");
      cmd->add_option("--resbits", res_bits, "dyadic resolution of Lebesgue draws");
    }
  }

  Json config() const {
    Json c;
    c["seed"] = seed;
    c["threads"] = threads;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diolab: lattice-flow experiments for Diophantine approximation"};
  app.require_subcommand(1);

  // shared option storage
  std::string y_str, map_str, measure_str, ball_str, eps_str, tlist_str, mode = "both";
  std::string kind = "standard", v_str = "2", gamma_str = "0", eps0_str = "1/10";
  int n = 1;
  long t_max = 100, s_max = 20, stride = 1, Q = 0;
  unsigned long precision = 0;
  uint64_t samples = 20000;
  double chat = 0, alphahat = 0, rhohat = 0;
  std::string property = "federer";
  uint64_t ref_size = 1000000;
  int trials = 100;
  bool mult = false;

  CommonFlags cf;

  auto add_target = [&](CLI::App* cmd) {
    cmd->add_option("--y", y_str, "target coordinates, comma separated (decimal, p/q, 2^k)")
        ->required();
    cmd->add_option("--n", n, "dimension");
    cmd->add_option("--precision", precision, "dyadic precision bits (default (n+1)t_max+64)");
  };

  CLI::App* traj = app.add_subcommand("traj", "trajectory heights of g_t u_y");
  add_target(traj);
  traj->add_option("--tmax", t_max, "largest flow time");
  traj->add_option("--stride", stride, "schedule stride");
  traj->add_option("--kind", kind, "standard|mult");
  cf.attach(traj);

  CLI::App* expo = app.add_subcommand("exponent", "exponent estimates, dynamical and brute force");
  add_target(expo);
  expo->add_option("--mode", mode, "dyn|oracle|both");
  expo->add_option("--tmax", t_max, "flow horizon");
  expo->add_option("--smax", s_max, "oracle scan exponent (|q| <= 2^smax)");
  cf.attach(expo);

  CLI::App* ba = app.add_subcommand("ba", "finite-horizon badly-approximable verdict");
  add_target(ba);
  ba->add_option("--tmax", t_max, "flow horizon");
  ba->add_option("--eps0", eps0_str, "height threshold (exact grammar)");
  ba->add_option("--Q", Q, "also scan c(Q) = min |yq+p| |q|^n up to |q| <= Q");
  cf.attach(ba);

  CLI::App* orc = app.add_subcommand("oracle", "exhaustive best-approximation table");
  add_target(orc);
  orc->add_option("--smax", s_max, "scan exponent");
  cf.attach(orc);

  CLI::App* mlt = app.add_subcommand("mult", "multiplicative best-approximation table");
  add_target(mlt);
  mlt->add_option("--smax", s_max, "scan exponent");
  cf.attach(mlt);

  CLI::App* chk = app.add_subcommand("check-measure", "empirical measure property report");
  chk->add_option("--measure", measure_str, "measure spec")->required();
  chk->add_option("--property", property, "federer|decay|scaling");
  chk->add_option("--ref", ref_size, "reference sample size");
  chk->add_option("--trials", trials, "census size");
  cf.attach(chk, true);

  CLI::App* good = app.add_subcommand("check-good", "sublevel decay and nonplanarity report");
  good->add_option("--map", map_str, "map spec")->required();
  good->add_option("--measure", measure_str, "measure spec")->required();
  good->add_option("--ball", ball_str, "domain ball lo,hi[;lo,hi]");
  good->add_option("--ref", ref_size, "reference sample size");
  cf.attach(good, true);

  CLI::App* nds = app.add_subcommand("nondiv-scan", "sublevel ratios of lattice heights");
  nds->add_option("--map", map_str, "map spec")->required();
  nds->add_option("--measure", measure_str, "measure spec")->required();
  nds->add_option("--ball", ball_str, "domain ball");
  nds->add_option("--eps", eps_str, "epsilon grid, e.g. 2^-1..2^-10");
  nds->add_option("--tlist", tlist_str, "flow times, e.g. 5:100:5");
  nds->add_option("--samples", samples, "per-cell sample count");
  nds->add_option("--chat", chat, "certified C for the bound fit");
  nds->add_option("--alphahat", alphahat, "certified alpha for the bound fit");
  nds->add_option("--rhohat", rhohat, "certified rho for the bound fit");
  cf.attach(nds, true);

  CLI::App* bcs = app.add_subcommand("bc-series", "partial sums of sublevel measures");
  bcs->add_option("--map", map_str, "map spec")->required();
  bcs->add_option("--measure", measure_str, "measure spec")->required();
  bcs->add_option("--ball", ball_str, "domain ball");
  bcs->add_option("--v", v_str, "exponent v (exact grammar)");
  bcs->add_option("--gamma", gamma_str, "decay rate gamma (exact grammar)");
  bcs->add_option("--tmax", t_max, "horizon");
  bcs->add_option("--samples", samples, "sample count");
  cf.attach(bcs, true);

  CLI::App* ext = app.add_subcommand("extremality", "per-sample exponent distribution");
  ext->add_option("--map", map_str, "map spec")->required();
  ext->add_option("--measure", measure_str, "measure spec")->required();
  ext->add_option("--ball", ball_str, "domain ball");
  ext->add_option("--tmax", t_max, "flow horizon");
  ext->add_option("--samples", samples, "sample count");
  ext->add_flag("--mult", mult, "also run the multiplicative flow");
  cf.attach(ext, true);

  CLI11_PARSE(app, argc, argv);

  int exit_code = 0;
  try {
    auto resolved_precision = [&](long horizon) {
      return precision ? precision : (unsigned long)((n + 1) * horizon + 64);
    };
    auto ball_or_default = [&](const MeasureSampler& ms) {
      if (!ball_str.empty()) return parse_ball(ball_str);
      if (ms.kind == MeasureKind::LebesgueBall) {
        std::vector<double> c;
        for (const auto& q : ms.center) c.push_back(q.get_d());
        return DomainBall{c, ms.radius.get_d()};
      }
      return DomainBall::interval(0, 1);
    };

    if (*traj) {
      unsigned long prec = resolved_precision(t_max);
      TargetVector y = make_target(y_str, n, prec);
      TrajectoryOptions opt;
      opt.t_max = t_max;
      opt.stride = stride;
      if (kind == "mult")
        opt.kind = FlowKind::Multiplicative;
      else if (kind != "standard")
        throw std::invalid_argument("--kind must be standard or mult");
      TrajectoryRecord rec = trajectory(y, opt);
      mpq_class h0 = first_minimum(build_u(y)).sup_norm;

      Json j = base_report("traj");
      j["config"] = cf.config();
      j["config"]["y"] = y_str;
      j["config"]["n"] = n;
      j["config"]["tmax"] = t_max;
      j["config"]["stride"] = stride;
      j["config"]["kind"] = kind;
      j["config"]["precision"] = prec;
      j["formulas"] = formula_tags();
      j["result"] = traj_json(rec);
      emit(j, cf.out_json, traj_csv(rec, &h0), cf.out_csv);
    } else if (*expo) {
      unsigned long prec = resolved_precision(t_max);
      TargetVector y = make_target(y_str, n, prec);
      Json j = base_report("exponent");
      j["config"] = cf.config();
      j["config"]["y"] = y_str;
      j["config"]["n"] = n;
      j["config"]["mode"] = mode;
      j["config"]["tmax"] = t_max;
      j["config"]["smax"] = s_max;
      j["config"]["precision"] = prec;
      j["formulas"] = formula_tags();
      if (mode == "dyn" || mode == "both") {
        TrajectoryOptions opt;
        opt.t_max = t_max;
        TrajectoryRecord rec = trajectory(y, opt);
        j["dyn"] = traj_json(rec);
      }
      if (mode == "oracle" || mode == "both") {
        BestApproximationTable tab = best_approximations(y, s_max);
        j["oracle"] = oracle_json(tab);
        ApproxFront f = approximation_front(y, s_max);
        j["oracle"]["omega_front"] = front_omega_sharp(f, s_max);
      }
      if (mode != "dyn" && mode != "oracle" && mode != "both")
        throw std::invalid_argument("--mode must be dyn, oracle or both");
      emit(j, cf.out_json, "", cf.out_csv);
    } else if (*ba) {
      unsigned long prec = resolved_precision(t_max);
      TargetVector y = make_target(y_str, n, prec);
      TrajectoryOptions opt;
      opt.t_max = t_max;
      TrajectoryRecord rec = trajectory(y, opt);
      BaVerdict v = detect_ba(rec, parse_exact(eps0_str));
      Json j = base_report("ba");
      j["config"] = cf.config();
      j["config"]["y"] = y_str;
      j["config"]["n"] = n;
      j["config"]["tmax"] = t_max;
      j["config"]["eps0"] = eps0_str;
      j["result"]["badly_approximable"] = v.badly_approximable;
      j["result"]["h_min"] = rat_str(v.h_min);
      j["result"]["h_min_t"] = v.h_min_t;
      if (Q > 0) j["result"]["c_Q"] = rat_str(ba_constant_estimate(y, Q));
      emit(j, cf.out_json, traj_csv(rec), cf.out_csv);
    } else if (*orc) {
      TargetVector y = make_target(y_str, n, precision ? precision : 256);
      BestApproximationTable tab = best_approximations(y, s_max);
      Json j = base_report("oracle");
      j["config"] = cf.config();
      j["config"]["y"] = y_str;
      j["config"]["n"] = n;
      j["config"]["smax"] = s_max;
      j["result"] = oracle_json(tab);
      emit(j, cf.out_json, oracle_csv(tab), cf.out_csv);
    } else if (*mlt) {
      TargetVector y = make_target(y_str, n, precision ? precision : 256);
      MultiplicativeTable tab = multiplicative_best(y, s_max);
      Json j = base_report("mult");
      j["config"] = cf.config();
      j["config"]["y"] = y_str;
      j["config"]["n"] = n;
      j["config"]["smax"] = s_max;
      j["result"] = mult_json(tab);
      emit(j, cf.out_json, mult_csv(tab), cf.out_csv);
    } else if (*chk) {
      MeasureSampler ms = parse_measure(measure_str, cf.seed, cf.res_bits);
      PropertyCheckOptions opt;
      opt.ref_size = ref_size;
      opt.trials = trials;
      PropertyReport rep;
      if (property == "federer")
        rep = check_federer(ms, opt);
      else if (property == "decay")
        rep = check_abs_decay(ms, opt);
      else if (property == "scaling")
        rep = check_scaling(ms, opt);
      else
        throw std::invalid_argument("--property must be federer, decay or scaling");
      Json j = base_report("check-measure");
      j["config"] = cf.config();
      j["config"]["measure"] = measure_str;
      j["config"]["property"] = property;
      j["config"]["ref"] = ref_size;
      j["config"]["trials"] = trials;
      j["result"] = property_json(rep);
      emit(j, cf.out_json, "", cf.out_csv);
    } else if (*good) {
      MeasureSampler ms = parse_measure(measure_str, cf.seed, cf.res_bits);
      MapSpec map = parse_map(map_str);
      DomainBall ball = ball_or_default(ms);
      GoodnessOptions opt;
      opt.ref_size = ref_size;
      GoodnessReport rep = check_good(map, ms, ball, opt);
      NonplanarReport np = check_nonplanar(map, ms, ball, 64);
      Json j = base_report("check-good");
      j["config"] = cf.config();
      j["config"]["map"] = map_str;
      j["config"]["measure"] = measure_str;
      j["config"]["ref"] = ref_size;
      j["result"] = goodness_json(rep);
      j["nonplanar"] = nonplanar_json(np);
      emit(j, cf.out_json, "", cf.out_csv);
      if (rep.degenerate > 0) exit_code = 2;
    } else if (*nds) {
      MeasureSampler ms = parse_measure(measure_str, cf.seed, cf.res_bits);
      MapSpec map = parse_map(map_str);
      DomainBall ball = ball_or_default(ms);
      ScanOptions opt;
      if (!eps_str.empty()) opt.eps_grid = parse_eps(eps_str);
      if (!tlist_str.empty()) opt.t_list = parse_tlist(tlist_str);
      opt.samples = samples;
      opt.threads = cf.threads;
      opt.C_hat = chat;
      opt.alpha_hat = alphahat;
      opt.rho_hat = rhohat;
      NondivergenceScan sc = scan(map, ms, ball, opt);
      Json j = base_report("nondiv-scan");
      j["config"] = cf.config();
      j["config"]["map"] = map_str;
      j["config"]["measure"] = measure_str;
      j["config"]["samples"] = samples;
      j["config"]["resbits"] = cf.res_bits;
      j["formulas"] = formula_tags();
      j["result"] = scan_json(sc);
      emit(j, cf.out_json, scan_csv(sc), cf.out_csv);
      if (sc.hypothesis_unverified) exit_code = 2;
    } else if (*bcs) {
      MeasureSampler ms = parse_measure(measure_str, cf.seed, cf.res_bits);
      MapSpec map = parse_map(map_str);
      DomainBall ball = ball_or_default(ms);
      BcOptions opt;
      opt.t_max = t_max;
      opt.samples = samples;
      opt.threads = cf.threads;
      mpq_class v = parse_exact(v_str), gamma = parse_exact(gamma_str);
      BcSeries bc = borel_cantelli_series(map, ms, ball, v, gamma, opt);
      Json j = base_report("bc-series");
      j["config"] = cf.config();
      j["config"]["map"] = map_str;
      j["config"]["measure"] = measure_str;
      j["config"]["v"] = rat_str(v);
      j["config"]["gamma"] = rat_str(gamma);
      j["config"]["tmax"] = t_max;
      j["config"]["samples"] = samples;
      j["formulas"] = formula_tags();
      j["result"] = bc_json(bc);
      emit(j, cf.out_json, bc_csv(bc), cf.out_csv);
      if (!bc.hypothesis_ok) exit_code = 2;
    } else if (*ext) {
      MeasureSampler ms = parse_measure(measure_str, cf.seed, cf.res_bits);
      MapSpec map = parse_map(map_str);
      DomainBall ball = ball_or_default(ms);
      ExtremalityOptions opt;
      opt.t_max = t_max;
      opt.samples = samples;
      opt.threads = cf.threads;
      opt.multiplicative = mult;
      ExtremalityResult res = extremality_experiment(map, ms, ball, opt);
      Json j = base_report("extremality");
      j["config"] = cf.config();
      j["config"]["map"] = map_str;
      j["config"]["measure"] = measure_str;
      j["config"]["tmax"] = t_max;
      j["config"]["samples"] = samples;
      j["config"]["resbits"] = cf.res_bits;
      j["formulas"] = formula_tags();
      j["result"] = extremality_json(res);
      emit(j, cf.out_json, extremality_csv(res), cf.out_csv);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget refusal: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
