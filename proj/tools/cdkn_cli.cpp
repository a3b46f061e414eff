// Command-line front end: model constants, per-density verifications, and
// parameter sweeps. Exit codes: 0 success or inequality holds, 1 inequality
// violation, 2 usage or input error, 3 solver bracket failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdkn/coeffs.hpp"
#include "cdkn/density.hpp"
#include "cdkn/functional.hpp"
#include "cdkn/io.hpp"
#include "cdkn/localize.hpp"
#include "cdkn/ptrig.hpp"
#include "cdkn/spectral.hpp"
#include "cdkn/transport1d.hpp"

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kBracket = 3;

struct Options {
  double p = 2.0;
  double K = 0.0;
  double N = 2.0;
  double D = 1.0;
  double tol = 1e-8;
  int grid = 2000;
  std::string density;
  std::string a0, a1;
  double t = 0.5;
  double alpha = 0.0;
  double q = 2.0;
  unsigned seed = 0;
  int trials = 100;
  std::string format = "json";
  std::string out;
};

json provenance(const std::string& solver, int grid, double tol) {
  return json{{"solver", solver}, {"grid", grid}, {"tolerance", tol}};
}

void emit(const Options& opt, const json& j) {
  std::string text;
  if (opt.format == "csv") {
    std::string header, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "provenance") continue;
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += it.key();
      if (it.value().is_number())
        row += cdkn::io::format_double(it.value().get<double>());
      else
        row += it.value().dump();
    }
    text = header + "\n" + row + "\n";
  } else {
    text = j.dump(2) + "\n";
  }
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    f << text;
  }
}

cdkn::density::GridDensity load_or_model(const Options& opt) {
  if (!opt.density.empty()) return cdkn::io::read_density_csv(opt.density);
  // default models all live on [0, D] so CLI interval coordinates start at 0
  cdkn::coeffs::CdParams cd{opt.K, opt.N, opt.D};
  if (opt.N == 1.0 || opt.K == 0.0)
    return cdkn::density::model_density(
        opt.N == 1.0 ? cdkn::density::ModelKind::Constant
                     : cdkn::density::ModelKind::Power,
        cd, 0.0, static_cast<std::size_t>(opt.grid));
  return cdkn::density::model_density(
      opt.K > 0.0 ? cdkn::density::ModelKind::Sin
                  : cdkn::density::ModelKind::Sinh,
      cd, 0.0, static_cast<std::size_t>(opt.grid));
}

int cmd_lambda(const Options& opt) {
  const auto res =
      cdkn::spectral::lambda_model(opt.p, opt.K, opt.N, opt.D, opt.tol);
  json j{{"lambda", res.lambda},
         {"bracket_lo", res.bracket_lo},
         {"bracket_hi", res.bracket_hi},
         {"iterations", res.iterations},
         {"at_bonnet_myers", res.at_pole}};
  if (auto cf =
          cdkn::spectral::lambda_closed_form(opt.p, opt.K, opt.N, opt.D))
    j["closed_form"] = *cf;
  j["provenance"] = provenance("shooting+bisection", 20000, opt.tol);
  emit(opt, j);
  return kOk;
}

int cmd_cheeger(const Options& opt) {
  json j;
  if (!opt.density.empty()) {
    const auto h = cdkn::io::read_density_csv(opt.density);
    const auto res = cdkn::functional::cheeger_density(h, false);
    j["cheeger"] = res.value;
    j["side_mass"] = res.side_mass;
    j["optimal_cut"] = cdkn::io::format_interval_set(res.optimal_cut);
    j["provenance"] =
        provenance("interval-cut scan", static_cast<int>(h.size()), opt.tol);
  } else {
    j["cheeger_model"] = cdkn::functional::cheeger_model(opt.K, opt.N, opt.D);
    j["provenance"] = provenance("model family shift infimum", 2400, opt.tol);
  }
  emit(opt, j);
  return kOk;
}

int cmd_logsob(const Options& opt) {
  const auto rep = cdkn::functional::logsob_estimate(opt.K, opt.N, opt.D, 8,
                                                     opt.seed, opt.tol);
  json j = cdkn::io::report_json(rep);
  j["upper_bound"] = rep.upper_bound;
  j["provenance"] = provenance("variational minimization", opt.grid, opt.tol);
  emit(opt, j);
  return rep.holds ? kOk : kViolation;
}

int cmd_sobolev(const Options& opt) {
  const auto rep = cdkn::functional::sobolev_estimate(
      opt.K, opt.N, opt.D, opt.p, opt.q, 8, opt.seed, opt.tol);
  json j = cdkn::io::report_json(rep);
  j["upper_bound"] = rep.upper_bound;
  j["provenance"] = provenance("variational minimization", opt.grid, opt.tol);
  emit(opt, j);
  return rep.holds ? kOk : kViolation;
}

int cmd_bm(const Options& opt) {
  if (opt.a0.empty() || opt.a1.empty()) {
    std::cerr << "bm: --A0 and --A1 are required\n";
    return kUsage;
  }
  const auto h = load_or_model(opt);
  const auto A0 = cdkn::io::parse_interval_set(opt.a0);
  const auto A1 = cdkn::io::parse_interval_set(opt.a1);
  const auto rep =
      cdkn::transport1d::verify_bm(h, opt.K, opt.N, A0, A1, opt.t, opt.tol);
  json j{{"lhs", rep.lhs},
         {"rhs", rep.rhs},
         {"theta", rep.theta},
         {"slack", rep.slack},
         {"holds", rep.holds},
         {"infinite_coefficient", rep.infinite_coefficient},
         {"support", {h.origin, h.node(h.size() - 1)}}};
  j["provenance"] =
      provenance("interval mass arithmetic", static_cast<int>(h.size()),
                 opt.tol);
  emit(opt, j);
  return rep.holds ? kOk : kViolation;
}

int cmd_talagrand(const Options& opt) {
  const auto h = load_or_model(opt);
  if (!(opt.alpha > 0.0)) {
    std::cerr << "talagrand: --alpha must be positive\n";
    return kUsage;
  }
  // randomized absolutely continuous mu against the reference density
  const auto ref = cdkn::transport1d::Measure1D::from_density(h);
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = cdkn::coeffs::kInf;
  bool all_hold = true;
  for (int trial = 0; trial < opt.trials; ++trial) {
    std::vector<double> g(h.size());
    for (double& v : g) v = gauss(rng);
    for (int pass = 0; pass < 20; ++pass)
      for (std::size_t i = 1; i + 1 < g.size(); ++i)
        g[i] = 0.25 * g[i - 1] + 0.5 * g[i] + 0.25 * g[i + 1];
    std::vector<double> vals(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
      vals[i] = h.values[i] * std::exp(0.5 * g[i]);
    const auto mu = cdkn::transport1d::Measure1D::from_density(
        cdkn::density::GridDensity(h.origin, h.step, vals));
    const auto rep =
        cdkn::functional::talagrand_check(h, mu, opt.alpha, opt.tol);
    worst = std::min(worst, rep.slack);
    all_hold = all_hold && rep.holds;
  }
  json j{{"alpha", opt.alpha},
         {"trials", opt.trials},
         {"worst_slack", worst},
         {"holds", all_hold}};
  j["provenance"] = provenance("quantile-coupling W2", opt.grid, opt.tol);
  emit(opt, j);
  return all_hold ? kOk : kViolation;
}

int cmd_validate(const Options& opt) {
  if (opt.density.empty()) {
    std::cerr << "validate: --density is required\n";
    return kUsage;
  }
  const auto h = cdkn::io::read_density_csv(opt.density);
  const auto rep = cdkn::density::validate_cd(h, opt.K, opt.N,
                                              std::max(opt.tol, 1e-8));
  json j{{"valid", rep.valid},
         {"worst_violation", rep.worst_violation},
         {"checks_run", rep.checks_run}};
  if (rep.witness)
    j["witness"] = {(*rep.witness)[0], (*rep.witness)[1], (*rep.witness)[2]};
  j["provenance"] = provenance("sigma-concavity sampling",
                               static_cast<int>(h.size()), opt.tol);
  emit(opt, j);
  return rep.valid ? kOk : kViolation;
}

int cmd_localize(const Options& opt) {
  if (opt.density.empty()) {
    std::cerr << "localize: --density must name a disintegration JSON\n";
    return kUsage;
  }
  const auto d = cdkn::io::read_disintegration(opt.density);
  const auto rep = cdkn::localize::verify_disintegration(d, opt.K, opt.N);
  json j{{"valid", rep.valid}, {"weight_defect", rep.weight_defect}};
  if (rep.worst_fiber) {
    j["worst_fiber"] = *rep.worst_fiber;
    j["worst_violation"] = rep.worst_violation;
  }
  j["provenance"] = provenance("fiberwise CD validation", opt.grid, opt.tol);
  emit(opt, j);
  return rep.valid ? kOk : kViolation;
}

// range spec: single value "2" or "lo:hi:count"
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("range: expected lo:hi:count");
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const int n = std::stoi(text.substr(c2 + 1));
  if (n < 1) throw std::invalid_argument("range: empty");
  for (int i = 0; i < n; ++i)
    out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

int cmd_sweep(const Options& opt, const std::string& pr,
              const std::string& kr, const std::string& nr,
              const std::string& dr) {
  std::vector<double> ps, ks, ns, ds;
  try {
    ps = parse_range(pr);
    ks = parse_range(kr);
    ns = parse_range(nr);
    ds = parse_range(dr);
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return kUsage;
  }
  std::ostringstream os;
  os << "p,K,N,D,lambda,error\n";
  for (double p : ps)
    for (double K : ks)
      for (double N : ns)
        for (double D : ds) {
          os << cdkn::io::format_double(p) << ','
             << cdkn::io::format_double(K) << ','
             << cdkn::io::format_double(N) << ','
             << cdkn::io::format_double(D) << ',';
          try {
            const auto res =
                cdkn::spectral::lambda_model(p, K, N, D, opt.tol);
            os << cdkn::io::format_double(res.lambda) << ',';
          } catch (const std::exception& e) {
            os << ',' << '"' << e.what() << '"';
          }
          os << '\n';
        }
  if (opt.out.empty())
    std::cout << os.str();
  else {
    std::ofstream f(opt.out);
    f << os.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp comparison constants of 1-D CD(K,N) densities"};
  app.require_subcommand(1);
  Options opt;
  std::string pr = "2", kr = "0", nr = "2", dr = "1";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", opt.p);
    sub->add_option("--K", opt.K);
    sub->add_option("--N", opt.N);
    sub->add_option("--D", opt.D);
    sub->add_option("--tol", opt.tol);
    sub->add_option("--grid", opt.grid)->check(CLI::Range(16, 1000000));
    sub->add_option("--density", opt.density);
    sub->add_option("--A0", opt.a0);
    sub->add_option("--A1", opt.a1);
    sub->add_option("--t", opt.t);
    sub->add_option("--alpha", opt.alpha);
    sub->add_option("--q", opt.q);
    sub->add_option("--seed", opt.seed);
    sub->add_option("--trials", opt.trials);
    sub->add_option("--format", opt.format)
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", opt.out);
  };

  auto* lambda = app.add_subcommand("lambda", "model p-spectral gap");
  auto* cheeger = app.add_subcommand("cheeger", "Cheeger constant");
  auto* logsob = app.add_subcommand("logsob", "log-Sobolev upper bound");
  auto* sobolev = app.add_subcommand("sobolev", "(p,q)-Sobolev upper bound");
  auto* bm = app.add_subcommand("bm", "Brunn-Minkowski verification");
  auto* talagrand = app.add_subcommand("talagrand", "Talagrand check suite");
  auto* validate = app.add_subcommand("validate", "CD(K,N) density check");
  auto* localize = app.add_subcommand("localize", "disintegration check");
  auto* sweep = app.add_subcommand("sweep", "lambda over parameter ranges");
  for (auto* sub :
       {lambda, cheeger, logsob, sobolev, bm, talagrand, validate, localize})
    add_common(sub);
  sweep->add_option("--p", pr);
  sweep->add_option("--K", kr);
  sweep->add_option("--N", nr);
  sweep->add_option("--D", dr);
  sweep->add_option("--tol", opt.tol);
  sweep->add_option("--out", opt.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (lambda->parsed()) return cmd_lambda(opt);
    if (cheeger->parsed()) return cmd_cheeger(opt);
    if (logsob->parsed()) return cmd_logsob(opt);
    if (sobolev->parsed()) return cmd_sobolev(opt);
    if (bm->parsed()) return cmd_bm(opt);
    if (talagrand->parsed()) return cmd_talagrand(opt);
    if (validate->parsed()) return cmd_validate(opt);
    if (localize->parsed()) return cmd_localize(opt);
    if (sweep->parsed()) return cmd_sweep(opt, pr, kr, nr, dr);
  } catch (const cdkn::io::CsvError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    return what.find("bracket") != std::string::npos ? kBracket : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
