// qatlab: command-line front end. One subcommand per run; JSON or CSV on
// stdout unless --out is given.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qatlab/common.hpp"
#include "qatlab/exact_oracle.hpp"
#include "qatlab/hopfield.hpp"
#include "qatlab/parisi.hpp"
#include "qatlab/phase_diagram.hpp"
#include "qatlab/pimc.hpp"
#include "qatlab/verification.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Global {
  int threads = 0;
  std::uint64_t seed = 1;
  std::string out;
};

// Primary output goes to --out when given, else stdout.
void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + g.out);
  f << text;
}

void emit(const Global& g, const json& j) { emit(g, j.dump(2) + "\n"); }

json path_json(const qat::StepPath& p) { return {{"m", p.m}, {"q", p.q}}; }

qat::GaussianRule parse_rule(const std::string& s) {
  if (s == "grid") return qat::GaussianRule::grid;
  if (s == "gauss-hermite") return qat::GaussianRule::gauss_hermite;
  throw std::invalid_argument("unknown rule '" + s + "'");
}

struct QuadOpts {
  std::size_t gh_nodes = 64, pmf_slices = 256;
  std::string rule = "grid";

  void add(CLI::App* c) {
    c->add_option("--gh-nodes", gh_nodes, "Gauss-Hermite nodes per level")->check(CLI::Range(8, 512));
    c->add_option("--pmf-slices", pmf_slices, "slices for the time-average law")->check(CLI::Range(64, 1 << 16));
    c->add_option("--rule", rule, "Gaussian rule: grid or gauss-hermite");
  }
  qat::QuadratureSpec spec() const {
    qat::QuadratureSpec q;
    q.gh_nodes = gh_nodes;
    q.pmf_slices = pmf_slices;
    q.rule = parse_rule(rule);
    return q;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-overlap-corrected quantum SK toolkit"};
  app.require_subcommand(1, 1);
  // global flags may also follow the subcommand
  app.fallthrough();
  app.set_config("--config", "", "key = value file; [subcommand] sections supply defaults");
  Global g;
  app.add_option("--threads", g.threads, "worker threads (default: QATLAB_THREADS or hardware)");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--out", g.out, "write the primary output here instead of stdout");

  // phase-diagram
  auto* pd = app.add_subcommand("phase-diagram", "classify a (b, T) grid");
  qat::ScanWindow win;
  std::size_t grid = 50, levels = 2;
  std::string svg;
  QuadOpts pdq;
  pd->add_option("--b-min", win.b_min);
  pd->add_option("--b-max", win.b_max);
  pd->add_option("--t-min", win.t_min);
  pd->add_option("--t-max", win.t_max);
  pd->add_option("--grid", grid, "points per axis")->check(CLI::Range(2, 10000));
  pd->add_option("--levels", levels, "replica-symmetry-breaking levels r")->check(CLI::Range(1, 8));
  pd->add_option("--svg", svg, "also render an SVG heat map");
  pdq.add(pd);

  // at-line
  auto* al = app.add_subcommand("at-line", "quantum AT temperature T(b)");
  double al_b = 0.5;
  al->add_option("--b", al_b)->required();

  // parisi
  auto* pa = app.add_subcommand("parisi", "minimize the k-RSB functional");
  double pa_beta = 1.0, pa_b = 0.0;
  std::size_t pa_levels = 1;
  QuadOpts paq;
  pa->add_option("--beta", pa_beta)->required();
  pa->add_option("--b", pa_b)->required();
  pa->add_option("--levels", pa_levels)->check(CLI::Range(1, 8));
  paq.add(pa);

  // classical-at
  auto* ca = app.add_subcommand("classical-at", "classical AT condition for SK in a field");
  double ca_beta = 1.0, ca_h = 0.0;
  ca->add_option("--beta", ca_beta)->required();
  ca->add_option("--field", ca_h, "longitudinal field h");

  // mc
  auto* mc = app.add_subcommand("mc", "path-integral Monte Carlo estimators");
  double mc_beta = 1.0, mc_b = 0.5, mc_lambda = 1.0;
  std::size_t mc_n = 8, mc_lambda_points = 17;
  std::string mc_est = "self-overlap", mc_mode = "corrected";
  qat::RunConfig rc;
  mc->add_option("--beta", mc_beta);
  mc->add_option("--b", mc_b);
  mc->add_option("--n", mc_n, "spins")->check(CLI::Range(1, 4096));
  mc->add_option("--slices", rc.slices)->check(CLI::Range(1, 4096));
  mc->add_option("--sweeps", rc.sweeps);
  mc->add_option("--burn-in", rc.burn_in);
  mc->add_option("--mode", mc_mode, "plain or corrected");
  mc->add_option("--lambda", mc_lambda, "lambda1 = lambda2");
  mc->add_option("--estimator", mc_est, "self-overlap, replica or pressure");
  mc->add_option("--lambda-points", mc_lambda_points, "thermodynamic-integration grid size")
      ->check(CLI::Range(8, 1000));

  // exact
  auto* ex = app.add_subcommand("exact", "exact enumeration and diagonalization");
  double ex_beta = 1.0, ex_b = 0.5, ex_l1 = 1.0, ex_l2 = 1.0;
  std::size_t ex_n = 2, ex_L = 4;
  std::string ex_what = "path", ex_mode = "corrected";
  ex->add_option("--beta", ex_beta);
  ex->add_option("--b", ex_b);
  ex->add_option("--lambda1", ex_l1);
  ex->add_option("--lambda2", ex_l2);
  ex->add_option("--n", ex_n)->check(CLI::Range(1, 22));
  ex->add_option("--slices", ex_L)->check(CLI::Range(1, 22));
  ex->add_option("--mode", ex_mode, "plain or corrected");
  ex->add_option("--what", ex_what, "trace, path, overlap, annealed or second-moment");

  // hopfield
  auto* hp = app.add_subcommand("hopfield", "Curie-Weiss bound for a biased Hopfield model");
  std::size_t hp_n = 64, hp_m = 2;
  double hp_g = 0.5, hp_beta = 1.0, hp_b = 0.5;
  hp->add_option("--n", hp_n)->check(CLI::Range(1, 1 << 20));
  hp->add_option("--m", hp_m)->check(CLI::Range(1, 1024));
  hp->add_option("--g", hp_g);
  hp->add_option("--beta", hp_beta);
  hp->add_option("--b", hp_b);

  // verify
  auto* vf = app.add_subcommand("verify", "numerical identity checks");
  std::string suite = "all";
  vf->add_option("--suite", suite, "all, identities, sigma, pinelis or gip");

  // plot
  auto* pl = app.add_subcommand("plot", "render a phase-diagram CSV as SVG");
  std::string pl_in;
  pl->add_option("--in", pl_in, "CSV written by phase-diagram")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (g.threads > 0) qat::set_thread_count(g.threads);

    if (*pd) {
      qat::Tolerances tol;
      tol.levels = levels;
      tol.quad = pdq.spec();
      win.nb = win.nt = grid;
      auto r = qat::scan_grid(win, tol);
      std::ostringstream csv;
      qat::write_csv(csv, r);
      emit(g, csv.str());
      if (!svg.empty()) {
        std::ofstream f(svg);
        if (!f) throw std::runtime_error("cannot open " + svg);
        qat::write_svg(f, r);
      }
    } else if (*al) {
      emit(g, json{{"b", al_b}, {"T", qat::at_line_temperature(al_b)}});
    } else if (*pa) {
      auto r = qat::minimize_k_rsb(qat::make_params(pa_beta, pa_b), pa_levels, paq.spec());
      emit(g, json{{"beta", pa_beta},
                   {"b", pa_b},
                   {"levels", pa_levels},
                   {"value", r.value},
                   {"path", path_json(r.path)},
                   {"stagnated", r.stagnated}});
    } else if (*ca) {
      auto r = qat::classical_at_line(ca_beta, ca_h);
      emit(g, json{{"beta", ca_beta}, {"h", ca_h}, {"q_star", r.q_star}, {"at_value", r.at_value}, {"is_rs", r.is_rs}});
    } else if (*mc) {
      auto p = qat::make_params(mc_beta, mc_b, mc_lambda, mc_lambda);
      auto d = qat::make_disorder(mc_n, g.seed);
      rc.seed = g.seed;
      rc.mode = qat::parse_path_mode(mc_mode);
      if (rc.mode == qat::PathMode::constrained) throw std::invalid_argument("mc supports plain and corrected");
      json j{{"beta", mc_beta}, {"b", mc_b}, {"lambda", mc_lambda}, {"n", mc_n}, {"slices", rc.slices},
             {"mode", mc_mode}, {"estimator", mc_est}, {"seed", g.seed}};
      auto est = [](const qat::McEstimate& e) {
        return json{{"mean", e.mean}, {"std_error", e.std_error}, {"n_samples", e.n_samples},
                    {"autocorrelation_time", e.autocorrelation_time}};
      };
      if (mc_est == "self-overlap") {
        auto r = qat::estimate_self_overlap(p, d, rc);
        j["norm_sq"] = est(r.norm_sq);
      } else if (mc_est == "replica") {
        j["replica_norm_sq"] = est(qat::estimate_replica_overlap(p, d, rc));
      } else if (mc_est == "pressure") {
        std::vector<double> grid_l(mc_lambda_points);
        for (std::size_t i = 0; i < mc_lambda_points; ++i)
          grid_l[i] = mc_lambda * static_cast<double>(i) / static_cast<double>(mc_lambda_points - 1);
        auto r = qat::pressure_thermo_integration(p, d, grid_l, rc);
        j["pressure"] = {{"value", r.value}, {"std_error", r.std_error}, {"coarse_value", r.coarse_value},
                         {"refinement_warning", r.refinement_warning}};
      } else {
        throw std::invalid_argument("unknown estimator '" + mc_est + "'");
      }
      emit(g, j);
    } else if (*ex) {
      auto p = qat::make_params(ex_beta, ex_b, ex_l1, ex_l2);
      auto mode = qat::parse_path_mode(ex_mode);
      if (mode == qat::PathMode::constrained) throw std::invalid_argument("exact supports plain and corrected");
      json j{{"beta", ex_beta}, {"b", ex_b}, {"lambda1", ex_l1}, {"lambda2", ex_l2},
             {"n", ex_n}, {"slices", ex_L}, {"mode", ex_mode}, {"what", ex_what}, {"seed", g.seed}};
      if (ex_what == "trace") {
        j["partition"] = qat::trace_partition(p, qat::make_disorder(ex_n, g.seed));
      } else if (ex_what == "path") {
        j["partition"] = qat::enumerate_path_partition(p, qat::make_disorder(ex_n, g.seed), ex_L, mode);
      } else if (ex_what == "overlap") {
        auto r = qat::gibbs_overlap_exact(p, qat::make_disorder(ex_n, g.seed), ex_L, mode);
        j["self_overlap_sq"] = r.self_overlap_sq;
        j["replica_overlap_sq"] = r.replica_overlap_sq;
        j["partition"] = r.partition;
      } else if (ex_what == "annealed") {
        j["annealed_partition"] = qat::annealed_path_partition(p, ex_n, ex_L, mode);
      } else if (ex_what == "second-moment") {
        auto r = qat::exact_second_moment(p, ex_n, ex_L);
        j["first"] = r.first;
        j["second"] = r.second;
        j["ratio"] = r.ratio();
      } else {
        throw std::invalid_argument("unknown quantity '" + ex_what + "'");
      }
      emit(g, j);
    } else if (*hp) {
      auto pat = qat::random_sign_patterns(hp_n, hp_m, g.seed);
      auto sb = qat::sup_bound(pat, hp_g, hp_beta, hp_b);
      emit(g, json{{"m", hp_m},
                   {"n", hp_n},
                   {"g", hp_g},
                   {"beta", hp_beta},
                   {"b", hp_b},
                   {"overlap_norm", qat::pattern_overlap_norm(pat)},
                   {"rs_condition", qat::rs_condition(pat, hp_g, hp_beta, hp_b)},
                   {"sup_bound", sb.value},
                   {"maximizer", sb.maximizer}});
    } else if (*vf) {
      auto checks = qat::run_verification_suite(suite, g.seed);
      json arr = json::array();
      bool ok = true;
      for (const auto& c : checks) {
        ok = ok && c.passed;
        arr.push_back({{"name", c.name}, {"pass", c.passed}, {"measured", c.measured},
                       {"threshold", c.threshold}, {"detail", c.detail}});
      }
      emit(g, json{{"suite", suite}, {"seed", g.seed}, {"pass", ok}, {"checks", arr}});
      return ok ? 0 : 1;
    } else if (*pl) {
      std::ifstream in(pl_in);
      auto r = qat::read_scan_csv(in);
      std::ostringstream s;
      qat::write_svg(s, r);
      emit(g, s.str());
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
