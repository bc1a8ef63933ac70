// qcbounds check|certify|verify|export [--bound B] [-n N] [-K K] [-d D] [--pure]
//          [--shadow] [--stab I|II] [--tol T] [-o PATH] [--config FILE]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qcbounds/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

int env_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* v = std::getenv("QCBOUNDS_THREADS");
  if (!v) return static_cast<int>(hw);
  const int t = std::atoi(v);
  return t >= 1 ? t : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear and semidefinite bounds on qubit quantum codes"};
  app.require_subcommand(1);

  qcb::RunConfig cfg;
  std::vector<std::string> bounds{"sdp"};
  std::string stab, config, cert_out;
  bool no_complement = false;

  struct Flags {
    CLI::Option *bound, *n, *K, *d, *pure, *shadow, *stab, *nocomp, *tol, *feas, *out;
  };
  std::map<std::string, Flags> flags;
  auto common = [&](CLI::App* sub) {
    Flags f{};
    f.bound = sub->add_option("--bound", bounds, "lp, delsarte, lovasz, gamma, sdp, sdp-relax (repeatable for check)");
    f.n = sub->add_option("-n", cfg.n, "number of qubits");
    f.K = sub->add_option("-K", cfg.K, "code dimension");
    f.d = sub->add_option("-d", cfg.delta, "minimum distance");
    f.pure = sub->add_flag("--pure", cfg.pure, "purity zeros");
    f.shadow = sub->add_flag("--shadow", cfg.shadow, "shadow constraints");
    f.stab = sub->add_option("--stab", stab, "stabilizer type I or II");
    f.nocomp = sub->add_flag("--no-complement", no_complement, "drop the complement blocks of the sdp bound");
    f.tol = sub->add_option("--tol", cfg.tol, "solver tolerance");
    f.feas = sub->add_option("--feas-tol", cfg.feas_tol, "feasibility tolerance on the shift");
    f.out = sub->add_option("-o,--output", cfg.output, "output path (default stdout)");
    sub->add_option("--config", config, "flat JSON config; flags take precedence");
    sub->add_flag("-v,--verbose", cfg.verbose, "progress on stderr");
    flags[sub->get_name()] = f;
  };
  CLI::App* check = app.add_subcommand("check", "solve the chosen bounds and print a verdict");
  CLI::App* certify = app.add_subcommand("certify", "produce and verify an exact dual certificate");
  CLI::App* verify = app.add_subcommand("verify", "verify a certificate file");
  CLI::App* exp = app.add_subcommand("export", "write the model in SDPA sparse format");
  for (CLI::App* s : {check, certify, exp}) common(s);
  verify->add_option("file", cfg.input, "certificate JSON")->required();
  verify->add_option("-o,--output", cfg.output, "report path (default stdout)");
  certify->add_option("--cert", cert_out, "certificate path (default: -o, else stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcb::kExitError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    cfg.threads = env_threads();
    if (cfg.command != "verify") {
      const Flags& f = flags[cfg.command];
      cfg.bounds.clear();
      for (const auto& b : bounds) cfg.bounds.push_back(qcb::parse_bound(b));
      if (!stab.empty()) cfg.stab = stab == "I" ? qcb::StabType::type1
                                   : stab == "II" ? qcb::StabType::type2
                                                  : throw std::invalid_argument("--stab takes I or II");
      if (no_complement) cfg.complement = false;
      if (!config.empty()) {
        std::set<std::string> given;
        auto mark = [&](CLI::Option* o, const char* key) {
          if (o->count()) given.insert(key);
        };
        mark(f.bound, "bound");
        mark(f.n, "n");
        mark(f.K, "K");
        mark(f.d, "d");
        mark(f.pure, "pure");
        mark(f.shadow, "shadow");
        mark(f.stab, "stab");
        mark(f.nocomp, "complement");
        mark(f.tol, "tol");
        mark(f.feas, "feas_tol");
        mark(f.out, "output");
        qcb::apply_config_json(read_file(config), cfg, given);
      }
    }

    qcb::CommandResult r;
    if (cfg.command == "check") r = qcb::cmd_check(cfg);
    else if (cfg.command == "certify") r = qcb::cmd_certify(cfg);
    else if (cfg.command == "verify") r = qcb::cmd_verify(cfg);
    else r = qcb::cmd_export(cfg);

    if (cfg.command == "export") {
      if (cfg.output.empty()) std::cout << r.artifact;
      else write_file(cfg.output, r.artifact);
      std::cerr << r.report << "\n";
    } else if (cfg.command == "certify") {
      const std::string path = cert_out.empty() ? cfg.output : cert_out;
      if (!r.artifact.empty()) {
        if (path.empty()) std::cout << r.artifact << "\n";
        else write_file(path, r.artifact);
      }
      std::cerr << r.report << "\n";
    } else if (cfg.output.empty()) {
      std::cout << r.report << "\n";
    } else {
      write_file(cfg.output, r.report);
    }
    return r.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n" << app.get_subcommands().front()->help() << "\n";
    return qcb::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qcb::kExitError;
  }
}
