// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cdkn/density.hpp"
#include "cdkn/functional.hpp"
#include "cdkn/localize.hpp"
#include "cdkn/ptrig.hpp"
#include "cdkn/spectral.hpp"
#include "cdkn/transport1d.hpp"
#include "test_support.hpp"

using namespace cdkn;
using density::GridDensity;
using density::ModelKind;
using transport1d::IntervalSet;
using transport1d::Measure1D;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("%-4s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

GridDensity uniform(double D, std::size_t n = 2001) {
  return GridDensity(0.0, D / (n - 1), std::vector<double>(n, 1.0));
}

GridDensity sin_model(double N, std::size_t n = 2000) {
  coeffs::CdParams cd{N - 1.0, N, std::numbers::pi};
  return density::normalize(
      density::model_density(ModelKind::Sin, cd, 0.0, n));
}

// mixed-parameter randomized CD density suite
std::vector<std::tuple<GridDensity, double, double>> density_suite(
    int count, unsigned seed) {
  std::mt19937 rng(seed);
  const std::vector<std::tuple<double, double, double>> params = {
      {0.0, 2.0, 1.0}, {1.0, 2.0, 2.5}, {-1.0, 3.0, 2.0},
      {2.0, 4.0, 2.0}, {0.0, 3.0, 1.5}};
  std::vector<std::tuple<GridDensity, double, double>> out;
  for (int i = 0; i < count; ++i) {
    const auto& [K, N, D] = params[i % params.size()];
    out.emplace_back(testsupport::random_cd_density(K, N, D, rng), K, N);
  }
  return out;
}

void criterion_1() {
  bool ok = true;
  std::string detail;
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (double N : {1.5, 2.0, 5.0})
      for (double D : {0.5, 1.0, std::numbers::pi}) {
        const double expected = (p - 1.0) * std::pow(ptrig::pi_p(p) / D, p);
        const double got = spectral::lambda_model(p, 0.0, N, D).lambda;
        if (std::abs(got - expected) > 1e-8 * expected) {
          ok = false;
          detail = "p=" + std::to_string(p) + " D=" + std::to_string(D);
        }
      }
  report(1, "K=0 closed form (rel 1e-8)", ok, detail);
}

void criterion_2() {
  bool ok = true;
  std::string detail;
  for (double N : {2.0, 2.5, 3.0, 5.0}) {
    const double lam =
        spectral::lambda_model(2.0, N - 1.0, N, std::numbers::pi, 1e-10)
            .lambda;
    if (std::abs(lam - N) > 1e-6) {
      ok = false;
      detail += "N=" + std::to_string(N) + " lam=" + std::to_string(lam) +
                " ";
    }
  }
  report(2, "Lichnerowicz endpoint lambda = N (1e-6)", ok, detail);
}

void criterion_3() {
  bool ok = true;
  std::string detail;
  for (double N : {2.0, 3.0, 4.0}) {
    const double lam = spectral::rayleigh_p(sin_model(N, 2000), 2.0);
    if (std::abs(lam - N) > 1e-3) {
      ok = false;
      detail += "N=" + std::to_string(N) + " lam=" + std::to_string(lam) +
                " ";
    }
  }
  report(3, "Rayleigh p=2 oracle on the model (1e-3)", ok, detail);
}

void criterion_4() {
  const std::vector<double> grid = {std::numbers::pi / 4,
                                    std::numbers::pi / 2,
                                    3 * std::numbers::pi / 4,
                                    std::numbers::pi};
  std::vector<double> lams;
  for (double D : grid)
    lams.push_back(spectral::lambda_model(2.0, 1.0, 2.0, D, 1e-10).lambda);
  bool ok = true;
  for (std::size_t i = 1; i < lams.size(); ++i)
    ok = ok && lams[i] < lams[i - 1];
  for (std::size_t i = 0; i + 1 < lams.size(); ++i)
    ok = ok && lams[i] > lams.back() + 1e-6;
  report(4, "strict diameter monotonicity of lambda", ok);
}

void criterion_5() {
  bool ok = true;
  for (double p : {2.0, 3.0})
    for (double K : {0.5, 1.0, 2.0})
      for (double N : {2.0, 4.0}) {
        const double D = 0.9 * std::numbers::pi * std::sqrt((N - 1.0) / K);
        const double lam = spectral::lambda_model(p, K, N, D, 1e-9).lambda;
        ok = ok && lam >= spectral::li_wang_bound(p, K, N) - 1e-9;
      }
  report(5, "Li-Wang lower bound dominated", ok);
}

void criterion_6() {
  bool ok = true;
  std::string detail;
  for (double D : {1.0, 2.0, std::numbers::pi}) {
    const double v = functional::cheeger_density(uniform(D)).value;
    if (std::abs(v - 2.0 / D) > 1e-6) {
      ok = false;
      detail += "flat D=" + std::to_string(D) + " ";
    }
  }
  const auto suite = density_suite(100, 106);
  for (const auto& [h, K, N] : suite) {
    const auto [one, two] = functional::cheeger_interval_vs_two(h, 5);
    if (one - two > 1e-6) {
      ok = false;
      detail = "interval gap " + std::to_string(one - two);
    }
  }
  report(6, "Cheeger flat 2/D and 1-vs-2-interval agreement", ok, detail);
}

void criterion_7() {
  bool ok = true;
  std::string detail;
  for (double N : {2.0, 3.0, 5.0}) {
    const double model =
        functional::cheeger_model(N - 1.0, N, std::numbers::pi);
    const double direct =
        functional::cheeger_density(sin_model(N, 2400)).value;
    if (std::abs(model - direct) > 1e-4) {
      ok = false;
      detail += "N=" + std::to_string(N) + " gap=" +
                std::to_string(model - direct) + " ";
    }
  }
  report(7, "Cheeger model vs density cross-check (1e-4)", ok, detail);
}

void criterion_8() {
  bool ok = true;
  std::string detail;
  const auto suite = density_suite(50, 108);
  for (const auto& [h, K, N] : suite) {
    const double ch = functional::cheeger_density(h).value;
    const double l11 = functional::lambda_11(h);
    if (std::abs(l11 - ch) > 2e-2 * std::max(1.0, ch)) {
      ok = false;
      detail = "cheeger=" + std::to_string(ch) +
               " lambda11=" + std::to_string(l11);
    }
  }
  report(8, "h = lambda^{1,1} identity (2e-2, 50 densities)", ok, detail);
}

void criterion_9() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(109);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto [K, N, D] : {std::tuple{0.0, 2.0, 1.0}, {1.0, 2.0, 2.5},
                         {-1.0, 3.0, 2.0}}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto h = testsupport::random_cd_density(K, N, D, rng, 700);
      const double a0 = unif(rng) * 0.6 * D;
      const double b0 = std::min(D, a0 + (0.05 + 0.3 * unif(rng)) * D);
      const double a1 = unif(rng) * 0.6 * D;
      const double b1 = std::min(D, a1 + (0.05 + 0.3 * unif(rng)) * D);
      const double t = 0.05 + 0.9 * unif(rng);
      const auto rep = transport1d::verify_bm(h, K, N, IntervalSet{{a0, b0}},
                                              IntervalSet{{a1, b1}}, t);
      if (rep.slack < -1e-9) {
        ok = false;
        detail = "K=" + std::to_string(K) +
                 " slack=" + std::to_string(rep.slack);
      }
    }
  }
  // flat equality case
  const auto flat = uniform(1.0);
  for (double t : {0.25, 0.5, 0.75}) {
    const auto rep =
        transport1d::verify_bm(flat, 0.0, 2.0, IntervalSet{{0.1, 0.3}},
                               IntervalSet{{0.6, 0.8}}, t);
    if (std::abs(rep.slack) > 1e-10) {
      ok = false;
      detail = "flat slack " + std::to_string(rep.slack);
    }
  }
  report(9, "Brunn-Minkowski suite (3000 trials + flat equality)", ok,
         detail);
}

void criterion_10() {
  bool ok = true;
  std::string detail;
  for (double N : {2.0, 3.0}) {
    const auto rep =
        functional::logsob_estimate(N - 1.0, N, std::numbers::pi, 6, 110);
    const bool in_band = rep.constant_estimate >= 0.99 * N &&
                         rep.constant_estimate <= 1.05 * N;
    const bool ref_ok = rep.reference && std::abs(*rep.reference - N) < 1e-12;
    // perturbative witness directly
    const auto h = sin_model(N, 2000);
    auto [lam, v2] = spectral::detail::neumann_eig2(h);
    (void)lam;
    std::vector<double> f(h.size());
    double vmax = 0.0;
    for (double v : v2) vmax = std::max(vmax, std::abs(v));
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = 1.0 + 1e-3 * v2[i] / vmax;
    const double ratio = functional::logsob_ratio(h, f);
    const bool pert_ok = std::abs(ratio - N) <= 0.01 * N;
    if (!(in_band && ref_ok && pert_ok)) {
      ok = false;
      detail += "N=" + std::to_string(N) + " est=" +
                std::to_string(rep.constant_estimate) + " ratio=" +
                std::to_string(ratio) + " ";
    }
  }
  report(10, "log-Sobolev sharpness at the model", ok, detail);
}

void criterion_11() {
  bool ok = true;
  std::string detail;
  const double N = 2.0;
  const auto h = sin_model(N, 1500);
  std::mt19937 rng(111);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> g(h.size());
    for (double& v : g) v = gauss(rng);
    for (int pass = 0; pass < 20; ++pass)
      for (std::size_t i = 1; i + 1 < g.size(); ++i)
        g[i] = 0.25 * g[i - 1] + 0.5 * g[i] + 0.25 * g[i + 1];
    std::vector<double> vals(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
      vals[i] = h.values[i] * std::exp(0.6 * g[i]);
    const auto mu =
        Measure1D::from_density(GridDensity(h.origin, h.step, vals));
    const auto rep = functional::talagrand_check(h, mu, N);
    if (!rep.holds) {
      ok = false;
      detail = "trial " + std::to_string(trial) +
               " slack=" + std::to_string(rep.slack);
    }
  }
  report(11, "Talagrand suite (alpha = N, 200 measures)", ok, detail);
}

void criterion_12() {
  const double N = 4.0, p = 2.0 * N / (N - 2.0);
  const auto h = sin_model(N, 2000);
  auto [lam, v2] = spectral::detail::neumann_eig2(h);
  (void)lam;
  std::vector<double> f(h.size());
  double vmax = 0.0;
  for (double v : v2) vmax = std::max(vmax, std::abs(v));
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = 1.0 + 1e-3 * v2[i] / vmax;
  const double ratio = functional::sobolev_ratio(h, f, p, 2.0);
  const bool ok = std::abs(ratio - N) <= 0.02 * N;
  report(12, "Sobolev perturbative quotient (2% of N)", ok,
         "ratio=" + std::to_string(ratio));
}

void criterion_13() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(113);
  const std::vector<std::tuple<double, double, double>> params = {
      {1.0, 3.0, 2.0}, {-1.0, 3.0, 2.0}, {0.0, 2.0, 1.0}, {2.0, 4.0, 2.0}};
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const auto& [K, N, D] = params[trial % params.size()];
    const auto h = testsupport::random_cd_density(K, N, D, rng, 800);
    double prev = -1.0;
    for (double eps : {0.05, 0.02}) {
      const auto he = density::mollify(h, N, eps);
      const auto rep = density::validate_cd(he, K, N);
      if (!rep.valid) {
        ok = false;
        detail = "K=" + std::to_string(K) + " eps=" + std::to_string(eps) +
                 " worst=" + std::to_string(rep.worst_violation);
      }
      // sup distance over the window common to both eps values
      double dist = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (h.node(i) < h.origin + 0.05 - 1e-12) continue;
        dist = std::max(dist, std::abs(he.at(h.node(i)) - h.values[i]));
      }
      if (prev >= 0.0 && dist > prev + 1e-12) {
        ok = false;
        detail = "sup-distance not monotone";
      }
      prev = dist;
    }
  }
  report(13, "mollifier preserves CD and converges (200 densities)", ok,
         detail);
}

void criterion_14() {
  bool ok = true;
  std::string detail;
  std::mt19937 rng(114);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // spectral aggregation trials: flat CD(0,2) fibers, mode mixtures with a
  // guaranteed share above the ground mode
  for (int trial = 0; trial < 200 && ok; ++trial) {
    localize::Disintegration d;
    const int nf = 2 + static_cast<int>(unif(rng) * 3.0);
    std::vector<double> w(nf);
    double wsum = 0.0;
    for (double& v : w) {
      v = 0.2 + unif(rng);
      wsum += v;
    }
    const double D = 1.0;
    for (int i = 0; i < nf; ++i) {
      GridDensity h = uniform(D, 601);
      std::vector<double> f(h.size(), 0.0);
      const double a1 = 0.3 * (2.0 * unif(rng) - 1.0);
      for (int mode = 2; mode <= 4; ++mode) {
        const double a = (0.4 + unif(rng)) * (unif(rng) < 0.5 ? -1.0 : 1.0);
        for (std::size_t k = 0; k < f.size(); ++k)
          f[k] += a * std::cos(mode * std::numbers::pi * h.node(k) / D);
      }
      for (std::size_t k = 0; k < f.size(); ++k)
        f[k] += a1 * std::cos(std::numbers::pi * h.node(k) / D);
      // enforce the zero p-mean precondition
      std::vector<double> wh(h.size());
      for (std::size_t k = 0; k < h.size(); ++k)
        wh[k] = ((k == 0 || k + 1 == h.size()) ? 0.5 : 1.0) * h.values[k] *
                h.step;
      const double c = spectral::detail::p_mean_shift(f, wh, 2.0);
      for (double& v : f) v -= c;
      d.fibers.push_back({w[i] / wsum, h, f});
    }
    const auto rep = localize::aggregate_spectral(d, 2.0, 0.0, 2.0, D);
    if (!rep.holds || rep.global_slack < -1e-9) {
      ok = false;
      detail = "spectral trial " + std::to_string(trial);
    }
  }

  // BM aggregation trials: constant fibers, shared mass fractions so the
  // ratio precondition holds exactly
  for (int trial = 0; trial < 200 && ok; ++trial) {
    localize::Disintegration d;
    const int nf = 2 + static_cast<int>(unif(rng) * 3.0);
    std::vector<double> w(nf);
    double wsum = 0.0;
    for (double& v : w) {
      v = 0.2 + unif(rng);
      wsum += v;
    }
    const double K = unif(rng) < 0.5 ? 0.0 : -1.0;
    const double N = 2.0 + 2.0 * unif(rng);
    const double u0a = 0.05 + 0.3 * unif(rng);
    const double u0b = u0a + 0.1 + 0.2 * unif(rng);
    const double u1a = 0.35 + 0.3 * unif(rng);
    const double u1b = u1a + 0.1 + 0.2 * unif(rng);
    const double t = 0.1 + 0.8 * unif(rng);
    std::vector<IntervalSet> A0, A1;
    for (int i = 0; i < nf; ++i) {
      const double L = 0.5 + 2.0 * unif(rng);
      d.fibers.push_back({w[i] / wsum, uniform(L, 501),
                          std::vector<double>(501, 0.0)});
      A0.push_back(IntervalSet{{u0a * L, u0b * L}});
      A1.push_back(IntervalSet{{u1a * L, u1b * L}});
    }
    const auto rep = localize::aggregate_bm(d, A0, A1, t, K, N);
    if (!rep.holds || rep.global_slack < -1e-9) {
      ok = false;
      detail = "bm trial " + std::to_string(trial) + " slack " +
               std::to_string(rep.global_slack);
    }
  }

  // log-Sobolev aggregation trials at the sharp model
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto hsin = sin_model(2.0, 801);
  for (int trial = 0; trial < 200 && ok; ++trial) {
    localize::Disintegration d;
    const int nf = 1 + static_cast<int>(unif(rng) * 3.0);
    std::vector<double> w(nf);
    double wsum = 0.0;
    for (double& v : w) {
      v = 0.2 + unif(rng);
      wsum += v;
    }
    const double zshare = 0.2 * unif(rng);
    for (int i = 0; i < nf; ++i) {
      std::vector<double> g(hsin.size());
      for (double& v : g) v = gauss(rng);
      for (int pass = 0; pass < 25; ++pass)
        for (std::size_t k = 1; k + 1 < g.size(); ++k)
          g[k] = 0.25 * g[k - 1] + 0.5 * g[k] + 0.25 * g[k + 1];
      std::vector<double> f(hsin.size());
      for (std::size_t k = 0; k < f.size(); ++k)
        f[k] = std::exp(0.2 * g[k]);
      // normalize with the same product rule the aggregator applies
      const double mass = localize::detail::integral(hsin, f);
      for (double& v : f) v /= mass;
      d.fibers.push_back({(1.0 - zshare) * w[i] / wsum, hsin, f});
    }
    if (zshare > 0.0) d.singular.push_back({zshare, 1.0});
    const auto rep =
        localize::aggregate_logsob(d, 1.0, 2.0, std::numbers::pi);
    if (!rep.holds || rep.global_slack < -1e-9) {
      ok = false;
      detail = "logsob trial " + std::to_string(trial) + " slack " +
               std::to_string(rep.global_slack);
    }
  }

  // 4-functions trials satisfying the two sufficient conditions
  for (int trial = 0; trial < 200 && ok; ++trial) {
    localize::Disintegration d;
    localize::FourFunctionsInput in;
    const int nf = 1 + static_cast<int>(unif(rng) * 3.0);
    const int nz = static_cast<int>(unif(rng) * 3.0);
    std::vector<double> w(nf + nz);
    double wsum = 0.0;
    for (double& v : w) {
      v = 0.2 + unif(rng);
      wsum += v;
    }
    const double alpha = 0.5 + unif(rng);
    const double beta = 0.5 + unif(rng);
    const double c = 0.5 + 2.0 * unif(rng);
    for (int i = 0; i < nf; ++i) {
      GridDensity h = uniform(1.0, 301);
      std::vector<double> f1(h.size()), f2(h.size()), f3(h.size()),
          f4(h.size());
      for (std::size_t k = 0; k < h.size(); ++k) {
        f1[k] = 0.5 + unif(rng);
        f2[k] = 0.5 + unif(rng);
        f3[k] = c * f1[k];
        f4[k] = std::pow(c, -alpha / beta) * f2[k] * (1.0 + 0.5 * unif(rng));
      }
      d.fibers.push_back({w[i] / wsum, h, {}});
      in.f1.push_back(f1);
      in.f2.push_back(f2);
      in.f3.push_back(f3);
      in.f4.push_back(f4);
    }
    for (int i = 0; i < nz; ++i) {
      const double z1 = 0.5 + unif(rng), z2 = 0.5 + unif(rng);
      d.singular.push_back({w[nf + i] / wsum, 0.0});
      in.z_values.push_back(
          {z1, z2, c * z1,
           std::pow(c, -alpha / beta) * z2 * (1.0 + 0.5 * unif(rng))});
    }
    const auto rep = localize::four_functions(d, in, alpha, beta);
    if (!rep.holds || rep.global_slack < -1e-9) {
      ok = false;
      detail = "four-functions trial " + std::to_string(trial);
    }
  }

  // single-fiber reductions, bit for bit
  {
    std::mt19937 r2(214);
    const auto h = testsupport::random_cd_density(1.0, 2.0, 2.5, r2);
    localize::Disintegration d;
    d.fibers.push_back({1.0, h, std::vector<double>(h.size(), 0.0)});
    IntervalSet A0{{0.2, 0.8}}, A1{{1.4, 2.1}};
    const auto direct = transport1d::verify_bm(h, 1.0, 2.0, A0, A1, 0.37);
    const auto agg = localize::aggregate_bm(d, {A0}, {A1}, 0.37, 1.0, 2.0);
    if (!(agg.fiber_reports.size() == 1 &&
          agg.fiber_reports[0].slack == direct.slack &&
          agg.fiber_reports[0].lhs == direct.lhs &&
          agg.fiber_reports[0].rhs == direct.rhs)) {
      ok = false;
      detail = "single-fiber BM reduction differs";
    }
  }

  report(14, "localization bench (4 x 200 trials + reductions)", ok, detail);
}

void criterion_15() {
  const auto start = std::chrono::steady_clock::now();
  const double gap = spectral::rigidity_gap(2.0, 3.0, 0.5, {0.0, 0.01});
  const auto secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  const bool ok = gap > 0.0 && secs < 60.0;
  report(15, "almost-rigidity gap positive", ok,
         "gap=" + std::to_string(gap) + " in " + std::to_string(secs) + "s");
}

void criterion_16() {
  bool ok = true;
  std::string detail;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double pip = ptrig::pi_p(p);
    double worst = 0.0;
    for (int k = -300; k <= 600; ++k) {
      const double t = k * pip / 150.0;
      const double s = ptrig::sin_p(p, t);
      const double c = ptrig::cos_p(p, t);
      worst = std::max(worst, std::abs(std::pow(std::abs(s), p) +
                                       std::pow(std::abs(c), p) - 1.0));
    }
    if (worst > 1e-10) {
      ok = false;
      detail += "p=" + std::to_string(p) + " err=" + std::to_string(worst) +
                " ";
    }
  }
  report(16, "p-trig identity (1e-10)", ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();
  criterion_15();
  criterion_16();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
