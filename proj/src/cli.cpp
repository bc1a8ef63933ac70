#include "qcbounds/cli.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "qcbounds/certcheck.hpp"
#include "qcbounds/moment_gamma.hpp"
#include "qcbounds/reduced_sdp.hpp"

namespace qcb {

using Json = nlohmann::ordered_json;

Bound parse_bound(const std::string& s) {
  if (s == "lp") return Bound::lp;
  if (s == "delsarte") return Bound::delsarte;
  if (s == "lovasz") return Bound::lovasz;
  if (s == "gamma") return Bound::gamma;
  if (s == "sdp") return Bound::sdp;
  if (s == "sdp-relax") return Bound::sdp_relax;
  throw std::invalid_argument("unknown bound '" + s + "' (lp, delsarte, lovasz, gamma, sdp, sdp-relax)");
}

const char* to_string(Bound b) {
  switch (b) {
    case Bound::lp: return "lp";
    case Bound::delsarte: return "delsarte";
    case Bound::lovasz: return "lovasz";
    case Bound::gamma: return "gamma";
    case Bound::sdp: return "sdp";
    case Bound::sdp_relax: return "sdp-relax";
  }
  return "?";
}

namespace {

StabType parse_stab(const std::string& s) {
  if (s == "I" || s == "1") return StabType::type1;
  if (s == "II" || s == "2") return StabType::type2;
  if (s.empty() || s == "none") return StabType::none;
  throw std::invalid_argument("--stab takes I or II");
}

std::vector<Bound> parse_bounds(const Json& v) {
  std::vector<Bound> out;
  if (v.is_array())
    for (const auto& b : v) out.push_back(parse_bound(b.get<std::string>()));
  else
    out.push_back(parse_bound(v.get<std::string>()));
  return out;
}

const char* verdict_text(Status s) {
  switch (s) {
    case Status::feasible: return "feasible at this relaxation level; the parameters are not excluded";
    case Status::infeasible_certified: return "infeasible with an exact certificate: no code with these parameters exists";
    case Status::infeasible_numeric: return "no code at this relaxation level, uncertified";
    default: return "solver did not reach a verdict";
  }
}

Json header(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["n"] = cfg.n;
  j["K"] = cfg.K;
  j["delta"] = cfg.delta;
  return j;
}

Json strings(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

LpOptions lp_options(const RunConfig& cfg) {
  LpOptions o;
  o.shadow = cfg.shadow;
  o.pure = cfg.pure;
  o.stab = cfg.stab;
  return o;
}

SdpOptions sdp_options(const RunConfig& cfg) {
  SdpOptions o;
  o.tol = cfg.tol;
  o.feas_tol = cfg.feas_tol;
  return o;
}

ReducedOptions reduced_options(const RunConfig& cfg) {
  ReducedOptions o;
  o.shadow = cfg.shadow;
  o.stab = cfg.stab;
  o.pure = cfg.pure;
  o.complement = cfg.complement;
  return o;
}

// The float program a bound is solved (and exported) as.
ConicProgram<double> float_model(const RunConfig& cfg, Bound b, std::string& model) {
  switch (b) {
    case Bound::lp:
      model = "lp";
      return to_float(build_lp_bound(cfg.n, cfg.K, cfg.delta, lp_options(cfg)));
    case Bound::delsarte: {
      model = "quantum_delsarte";
      DelsarteOptions o;
      o.shadow = cfg.shadow;
      return to_float(build_delsarte(cfg.n, cfg.delta, o));
    }
    case Bound::lovasz:
      model = "red_lovasz";
      return solver_form(build_reduced_lovasz(cfg.n, cfg.delta));
    case Bound::gamma: {
      model = "gamma";
      GammaOptions o;
      o.pure = cfg.pure;
      o.shadow = cfg.shadow;
      o.stab_type = cfg.stab;
      o.stabilizer = cfg.stab != StabType::none;
      return to_float(build_gamma_sdp(cfg.n, cfg.K, cfg.delta, o).program);
    }
    case Bound::sdp:
      model = "sdpx";
      return solver_form(build_reduced_sdp(cfg.n, cfg.K, cfg.delta, reduced_options(cfg)));
    case Bound::sdp_relax:
      model = "sdpx_relax";
      return solver_form(build_reduced_relaxation(cfg.n, cfg.K, cfg.delta));
  }
  throw std::logic_error("unhandled bound");
}

Json check_lp(const RunConfig& cfg, Status& status) {
  Json j;
  j["model"] = "lp";
  const ConicProgram<Rational> p = build_lp_bound(cfg.n, cfg.K, cfg.delta, lp_options(cfg));
  const SolveReport r = solve_lp_exact(p);
  status = r.status == Status::optimal ? Status::feasible : r.status;
  if (status == Status::feasible) j["witness"] = strings(r.exact_x);
  if (r.farkas) {
    j["farkas"] = {{"eq", strings(r.farkas->eq)}, {"ineq", strings(r.farkas->ineq)}};
    j["farkas_verified"] = verify_farkas(p, *r.farkas);
    if (!verify_farkas(p, *r.farkas)) status = Status::error;
  }
  return j;
}

Json check_delsarte(const RunConfig& cfg, Status& status) {
  Json j;
  j["model"] = "quantum_delsarte";
  DelsarteOptions o;
  o.shadow = cfg.shadow;
  const SolveReport r = solve_lp_exact(build_delsarte(cfg.n, cfg.delta, o));
  const Rational threshold = pow_int(Rational(2), cfg.n);
  j["threshold"] = to_string(threshold);
  if (r.status == Status::optimal) {
    j["eta"] = to_string(r.exact_objective);
    status = r.exact_objective >= threshold ? Status::feasible : Status::infeasible_certified;
  } else {
    // Infeasible rows (possible with the shadow extension) exclude the code as well.
    status = r.status == Status::infeasible_certified ? Status::infeasible_certified : Status::error;
    j["solver_status"] = to_string(r.status);
  }
  return j;
}

Json check_sdp(const RunConfig& cfg, Bound b, Status& status) {
  Json j;
  std::string model;
  const ConicProgram<double> p = float_model(cfg, b, model);
  j["model"] = model;
  j["variables"] = p.num_vars;
  j["blocks"] = p.blocks.size();
  const SolveReport r = solve_sdp(p, sdp_options(cfg));
  status = r.status;
  j["shift"] = r.infeasibility;
  j["iterations"] = r.iterations;
  if (!r.message.empty()) j["solver_message"] = r.message;
  return j;
}

Json check_one(const RunConfig& cfg, Bound b, Status& status) {
  Json j;
  try {
    switch (b) {
      case Bound::lp: j = check_lp(cfg, status); break;
      case Bound::delsarte: j = check_delsarte(cfg, status); break;
      default: j = check_sdp(cfg, b, status); break;
    }
  } catch (const std::exception& e) {
    status = Status::error;
    j["error"] = e.what();
  }
  Json out;
  out["bound"] = to_string(b);
  out["status"] = to_string(status);
  out["verdict"] = verdict_text(status);
  out.update(j);
  return out;
}

}  // namespace

void apply_config_json(const std::string& json_text, RunConfig& cfg, const std::set<std::string>& given) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a flat JSON object");
  auto take = [&](const char* key) { return j.contains(key) && !given.count(key); };
  try {
    if (take("bound")) cfg.bounds = parse_bounds(j["bound"]);
    if (take("n")) cfg.n = j["n"].get<int>();
    if (take("K")) cfg.K = j["K"].get<long>();
    if (take("d")) cfg.delta = j["d"].get<int>();
    if (take("pure")) cfg.pure = j["pure"].get<bool>();
    if (take("shadow")) cfg.shadow = j["shadow"].get<bool>();
    if (take("complement")) cfg.complement = j["complement"].get<bool>();
    if (take("stab")) cfg.stab = parse_stab(j["stab"].get<std::string>());
    if (take("tol")) cfg.tol = j["tol"].get<double>();
    if (take("feas_tol")) cfg.feas_tol = j["feas_tol"].get<double>();
    if (take("output")) cfg.output = j["output"].get<std::string>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.command == "verify") {
    if (cfg.input.empty()) throw std::invalid_argument("verify needs a certificate file");
    return;
  }
  if (cfg.n < 1) throw std::invalid_argument("-n must be a positive integer");
  if (cfg.K < 1) throw std::invalid_argument("-K must be a positive integer");
  if (cfg.delta < 1 || cfg.delta > cfg.n) throw std::invalid_argument("-d must satisfy 1 <= d <= n");
  if (!(cfg.tol > 0) || !(cfg.feas_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (cfg.bounds.empty()) throw std::invalid_argument("no bound selected");
  for (Bound b : cfg.bounds) {
    if ((b == Bound::lovasz || b == Bound::delsarte) && cfg.K != 1)
      throw std::invalid_argument(std::string(to_string(b)) + " is a bound for self-dual codes and needs K = 1");
    if (b == Bound::gamma && cfg.n > 5) throw std::invalid_argument("gamma is limited to n <= 5");
    if (b == Bound::sdp_relax && (cfg.pure || cfg.shadow || cfg.stab != StabType::none))
      throw std::invalid_argument("sdp-relax takes no option flags");
  }
  if (cfg.command == "certify") {
    if (cfg.bounds.size() != 1 || (cfg.bounds[0] != Bound::lovasz && cfg.bounds[0] != Bound::sdp_relax))
      throw std::invalid_argument("certify supports --bound lovasz or --bound sdp-relax");
  }
  if (cfg.command == "export" && cfg.bounds.size() != 1) throw std::invalid_argument("export takes one bound");
}

CommandResult cmd_check(const RunConfig& cfg) {
  validate(cfg);
  const std::size_t count = cfg.bounds.size();
  std::vector<Json> results(count);
  std::vector<Status> status(count, Status::error);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) results[i] = check_one(cfg, cfg.bounds[i], status[i]);
  };
  const int workers = std::clamp<int>(cfg.threads, 1, static_cast<int>(count));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Json j = header(cfg);
  j["results"] = results;
  CommandResult res;
  auto any = [&](Status s) { return std::find(status.begin(), status.end(), s) != status.end(); };
  if (any(Status::infeasible_certified)) res.exit_code = kExitCertified;
  else if (any(Status::infeasible_numeric)) res.exit_code = kExitNumeric;
  else if (any(Status::error) || any(Status::unbounded) || any(Status::optimal)) res.exit_code = kExitError;
  else res.exit_code = kExitFeasible;
  res.report = j.dump(1);
  return res;
}

CommandResult cmd_certify(const RunConfig& cfg) {
  validate(cfg);
  const ReducedModel m = cfg.bounds[0] == Bound::lovasz ? build_reduced_lovasz(cfg.n, cfg.delta)
                                                        : build_reduced_relaxation(cfg.n, cfg.K, cfg.delta);
  CertifyOptions opt;
  opt.sdp = sdp_options(cfg);
  opt.verbose = cfg.verbose;
  const CertifyResult c = extract_certificate(m, opt);
  Json j = header(cfg);
  j["bound"] = to_string(cfg.bounds[0]);
  j["model"] = to_string(m.shape);
  j["certified"] = c.certified;
  j["message"] = c.message;
  j["float_alpha"] = c.float_alpha;
  j["rounds"] = c.rounds;
  j["margin"] = c.margin;
  CommandResult res;
  if (c.certified) {
    j["verification"] = Json::parse(c.report.to_json());
    j["verdict"] = verdict_text(Status::infeasible_certified);
    res.artifact = certificate_to_json(c.certificate);
    res.exit_code = kExitCertified;
  } else {
    j["verdict"] = "no certificate";
    res.exit_code = kExitNumeric;
  }
  res.report = j.dump(1);
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  validate(cfg);
  const DualCertificate c = load_certificate(cfg.input);
  const VerificationReport r = verify_certificate(c);
  Json j;
  j["command"] = "verify";
  j["file"] = cfg.input;
  j["n"] = c.n;
  j["K"] = c.K;
  j["delta"] = c.delta;
  j["model"] = to_string(c.shape);
  j["report"] = Json::parse(r.to_json());
  j["verdict"] = r.certified ? verdict_text(Status::infeasible_certified) : "certificate rejected: " + r.verdict;
  CommandResult res;
  res.exit_code = r.certified ? kExitCertified : kExitNumeric;
  res.report = j.dump(1);
  return res;
}

CommandResult cmd_export(const RunConfig& cfg) {
  validate(cfg);
  std::string model;
  CommandResult res;
  res.artifact = export_sdpa(float_model(cfg, cfg.bounds[0], model));
  Json j = header(cfg);
  j["bound"] = to_string(cfg.bounds[0]);
  j["model"] = model;
  j["bytes"] = res.artifact.size();
  res.report = j.dump(1);
  res.exit_code = kExitFeasible;
  return res;
}

}  // namespace qcb
