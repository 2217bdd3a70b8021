#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "morseinf/audits.hpp"
#include "morseinf/bvp.hpp"
#include "morseinf/config.hpp"
#include "morseinf/models.hpp"
#include "morseinf/normal_form.hpp"
#include "morseinf/reduction.hpp"
#include "morseinf/reporting.hpp"
#include "morseinf/rng.hpp"

using namespace morseinf;

namespace {

FunctionalProblem make_model(const std::string& name,
                             const KeyValueConfig& cfg) {
  const double eps = cfg.get_double("eps", 0.1);
  const double gamma = cfg.get_double("gamma", 1.0);
  const double R = cfg.get_double("infinity_radius", 10.0);
  if (name == "trig") return make_trig_model(eps, gamma, R);
  if (name == "damped_trig") return make_damped_trig_model(eps, gamma, R);
  if (name == "coupled")
    return make_coupled_model(cfg.get_double("coupling", 0.1), R);
  if (name == "quadratic") {
    if (cfg.has("b_inf"))
      return make_quadratic_model(
          SymOperator::parse_text(cfg.get_string("b_inf", "")), R);
    Matrix b = Matrix::Zero(3, 3);
    b(0, 0) = 2.0;
    b(1, 1) = -2.0;
    return make_quadratic_model(SymOperator(std::move(b)), R);
  }
  throw ConfigParse("unknown model: " + name);
}

ReductionSolver make_solver(const FunctionalProblem& p,
                            const KeyValueConfig& cfg, std::uint64_t seed) {
  const SpectralSplit split =
      spectral_split(p.B_inf, cfg.get_double("zero_tol", 1e-9));
  const OperatorConstants oc = operator_constants(p.B_inf, split);
  const double kappa = cfg.get_double("kappa", 2.0);
  const double trial_rho = cfg.get_double("trial_rho", 1.0);
  const double R1 = cfg.get_double("R1", std::max(p.infinity_radius, 10.0));
  const ContractionData cd =
      estimate_contraction(p, split, oc, kappa, trial_rho, R1, 50,
                           ContractionMode::E_prime_infty, seed);
  return ReductionSolver(p, split, oc, cd, cfg.get_double("fp_tol", 1e-10),
                         cfg.get_int("max_iter", 10000));
}

NonlinearitySpec make_nonlinearity(const std::string& kind, double a0,
                                   double a, const KeyValueConfig& cfg) {
  if (kind == "default") return make_default_nonlinearity(a);
  if (kind == "zero") return make_zero_nonlinearity(a);
  if (kind == "interpolating") return make_interpolating_nonlinearity(a0, a);
  if (kind == "oscillating") return make_oscillating_nonlinearity(a);
  if (kind == "custom-table") {
    const std::string path = cfg.get_string("table", "");
    if (path.empty())
      throw ConfigParse("custom-table nonlinearity needs table=<path>");
    std::ifstream f(path);
    if (!f) throw IoFailure("cannot open table: " + path);
    std::vector<std::array<double, 4>> rows;
    std::array<double, 4> row{};
    while (f >> row[0] >> row[1] >> row[2] >> row[3]) rows.push_back(row);
    return make_table_nonlinearity(rows, a);
  }
  throw ConfigParse("unknown nonlinearity: " + kind);
}

int exit_code_for(const HypothesisReport& rep) {
  return rep.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitting lemmas at infinity, finite Galerkin dimension"};
  app.require_subcommand(1);

  std::string config_path, model = "trig", out_path, report_path;
  std::uint64_t seed = 1;
  int samples = 50;
  double zero_tol = 1e-9;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--seed", seed, "RNG seed");
  };

  auto* sc_split = app.add_subcommand("split", "spectral split of B(inf)");
  sc_split->add_option("--model", model);
  sc_split->add_option("--zero-tol", zero_tol);
  add_common(sc_split);

  auto* sc_audit = app.add_subcommand("audit", "hypothesis audits");
  sc_audit->add_option("--model", model);
  sc_audit->add_option("--samples", samples);
  sc_audit->add_option("--report", report_path);
  add_common(sc_audit);

  int grid_points = 33;
  auto* sc_reduce = app.add_subcommand("reduce", "reduced functional grid");
  sc_reduce->add_option("--model", model);
  sc_reduce->add_option("--out", out_path, "CSV output path");
  sc_reduce->add_option("--grid", grid_points);
  add_common(sc_reduce);

  bool nondegenerate = false;
  auto* sc_chart = app.add_subcommand("chart", "normal-form verification");
  sc_chart->add_option("--model", model);
  sc_chart->add_option("--samples", samples);
  sc_chart->add_option("--out", out_path, "CSV of residuals");
  sc_chart->add_flag("--nondegenerate", nondegenerate,
                     "run the nondegenerate-at-infinity path");
  add_common(sc_chart);

  int modes = 8, starts = 32;
  double a0 = 0.5, a = 1.0;
  std::string nonlinearity = "default", scenario = "direct";
  auto* sc_bvp = app.add_subcommand("bvp", "resonant BVP pipeline");
  sc_bvp->add_option("--modes", modes);
  sc_bvp->add_option("--a0", a0);
  sc_bvp->add_option("--a", a);
  sc_bvp->add_option("--nonlinearity", nonlinearity);
  sc_bvp->add_option("--scenario", scenario);
  sc_bvp->add_option("--starts", starts);
  sc_bvp->add_option("--report", report_path);
  sc_bvp->add_option("--out", out_path, "solutions CSV path");
  add_common(sc_bvp);

  auto* sc_report = app.add_subcommand("report", "full pipeline report");
  sc_report->add_option("--model", model);
  sc_report->add_option("--samples", samples);
  sc_report->add_option("--out", report_path);
  add_common(sc_report);

  CLI11_PARSE(app, argc, argv);

  try {
    KeyValueConfig cfg;
    if (!config_path.empty()) cfg = KeyValueConfig::parse_file(config_path);
    // flags win over the file
    for (const auto* sub : app.get_subcommands()) {
      for (const auto* opt : sub->get_options()) {
        if (opt->count() == 0) continue;
        std::string key = opt->get_name();
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        for (auto& ch : key)
          if (ch == '-') ch = '_';
        if (!opt->results().empty()) cfg.set(key, opt->results().front());
      }
    }

    if (sc_split->parsed()) {
      const FunctionalProblem p = make_model(model, cfg);
      const SpectralSplit s = spectral_split(p.B_inf, zero_tol);
      std::cout << "nu=" << s.nu << " mu=" << s.mu
                << " a_infty=" << format_double(s.a_infty);
      if (s.nu < s.dim()) {
        const OperatorConstants oc = operator_constants(p.B_inf, s);
        std::cout << " c1_infty=" << format_double(oc.c1_infty)
                  << " c2_infty=" << format_double(oc.c2_infty);
      }
      std::cout << "\n";
      return 0;
    }

    if (sc_audit->parsed()) {
      const FunctionalProblem p = make_model(model, cfg);
      const SpectralSplit s = spectral_split(p.B_inf, zero_tol);
      HypothesisReport rep = audit_gradient(p, samples, seed);
      {
        const HypothesisReport h = audit_hessian(p, samples, seed);
        rep.entries.insert(rep.entries.end(), h.entries.begin(),
                           h.entries.end());
      }
      {
        const double R = p.infinity_radius;
        const HypothesisReport d = audit_D_infty(
            p, s, {R, 10.0 * R, 100.0 * R}, std::max(8, samples / 4), seed);
        rep.entries.insert(rep.entries.end(), d.entries.begin(),
                           d.entries.end());
      }
      std::cout << hypothesis_table_markdown(rep);
      if (!report_path.empty()) {
        std::string body = artifact_header(cfg.values(), seed, '>') + "\n" +
                           "# hypothesis audits: " + model + "\n\n" +
                           hypothesis_table_markdown(rep);
        write_text_file(report_path, body);
      }
      return exit_code_for(rep);
    }

    if (sc_reduce->parsed()) {
      const FunctionalProblem p = make_model(model, cfg);
      const ReductionSolver rs = make_solver(p, cfg, seed);
      if (rs.split().nu == 0) throw ConfigParse("reduce: model has no kernel");
      const double R1 = rs.cdata().R1;
      std::ostringstream csv;
      csv << artifact_header(cfg.values(), seed, '#');
      csv << "# columns: z..., h_norm, L_reduced, reduced_grad_norm\n";
      for (int i = 0; i < grid_points; ++i) {
        const double t =
            R1 + (3.0 * R1 - R1) * i / std::max(1, grid_points - 1);
        for (double sgn : {-1.0, 1.0}) {
          const Vector z = sgn * t * rs.split().basis_zero.col(0);
          std::vector<double> row;
          for (int j = 0; j < rs.split().nu; ++j)
            row.push_back(z.dot(rs.split().basis_zero.col(j)));
          row.push_back(rs.solve_h(z).norm());
          row.push_back(rs.reduced_value(z));
          row.push_back(rs.reduced_gradient(z).norm());
          csv << csv_line(row);
        }
      }
      if (out_path.empty())
        std::cout << csv.str();
      else
        write_text_file(out_path, csv.str());
      return 0;
    }

    if (sc_chart->parsed()) {
      const FunctionalProblem p = make_model(model, cfg);
      std::ostringstream csv;
      csv << artifact_header(cfg.values(), seed, '#');
      csv << "# columns: sample_index, normal_form_residual\n";
      double worst = 0.0;
      if (nondegenerate) {
        const SpectralSplit s = spectral_split(p.B_inf, zero_tol);
        if (s.nu != 0)
          throw ConfigParse("--nondegenerate requires a model with nu = 0");
        const OperatorConstants oc = operator_constants(p.B_inf, s);
        ContractionData cd;
        cd.R1 = p.infinity_radius;
        const ReductionSolver rs(p, s, oc, cd);
        const NormalFormChart chart(rs, 1.0);
        Rng rng(seed);
        for (int i = 0; i < samples; ++i) {
          double resid;
          if (s.mu == 0) {
            const Vector u =
                (1.0 + i * 0.1) * unit_sphere(rng, p.dim) * chart.working_radius();
            const Vector phi = chart.nondeg_chart_definite(u);
            resid = std::abs(p.eval_L(phi) - u.squaredNorm());
          } else {
            const Vector up = subspace_sphere(rng, s.basis_plus,
                                              chart.working_radius() * (1.0 + i * 0.1));
            const Vector v = subspace_ball(rng, s.basis_minus, 2.0);
            const Vector phi = chart.nondeg_chart_indefinite(up, v);
            resid = std::abs(p.eval_L(phi) -
                             (up.squaredNorm() - v.squaredNorm()));
          }
          worst = std::max(worst, resid);
          csv << csv_line({static_cast<double>(i), resid});
        }
      } else {
        const ReductionSolver rs = make_solver(p, cfg, seed);
        const NormalFormChart chart(rs, rs.cdata().R1);
        Rng rng(seed);
        for (int i = 0; i < samples; ++i) {
          ChartPoint cp;
          cp.z = subspace_sphere(rng, rs.split().basis_zero,
                                 chart.working_radius() * (1.0 + 0.5 * i / samples));
          cp.u_plus = subspace_ball(rng, rs.split().basis_plus, 1.0);
          cp.u_minus = subspace_ball(rng, rs.split().basis_minus, 1.0);
          const auto [phi, resid] = chart.phi_chart(cp);
          (void)phi;
          worst = std::max(worst, resid);
          csv << csv_line({static_cast<double>(i), resid});
        }
      }
      if (out_path.empty())
        std::cout << csv.str();
      else
        write_text_file(out_path, csv.str());
      std::cerr << "worst residual (tolerance 1e-8): " << format_double(worst)
                << "\n";
      return worst <= 1e-8 ? 0 : 2;
    }

    if (sc_bvp->parsed()) {
      const NonlinearitySpec sp = make_nonlinearity(nonlinearity, a0, a, cfg);
      const GalerkinBVP g(modes, sp);
      const MorseData md = morse_data(g, sp.a);
      BvpScenario sc = BvpScenario::direct;
      if (scenario == "theorem_4_7_a") sc = BvpScenario::theorem_4_7_a;
      else if (scenario == "theorem_4_7_b") sc = BvpScenario::theorem_4_7_b;
      else if (scenario == "theorem_4_7_c") sc = BvpScenario::theorem_4_7_c;
      else if (scenario != "direct")
        throw ConfigParse("unknown scenario: " + scenario);

      const HypothesisReport rep = check_resonance_conditions(g);
      const auto sols = solve_bvp(g, sc, starts, seed);

      std::ostringstream csv;
      csv << artifact_header(cfg.values(), seed, '#');
      csv << "# columns: coeffs x " << modes
          << ", norm_H, grad_norm, nontrivial, from_reduction\n";
      for (const auto& s : sols) {
        std::vector<double> row(s.coeffs.data(),
                                s.coeffs.data() + s.coeffs.size());
        row.push_back(s.norm_H);
        row.push_back(s.grad_norm);
        row.push_back(s.nontrivial ? 1.0 : 0.0);
        row.push_back(s.from_reduction ? 1.0 : 0.0);
        csv << csv_line(row);
      }
      if (out_path.empty())
        std::cout << csv.str();
      else
        write_text_file(out_path, csv.str());

      if (!report_path.empty()) {
        std::ostringstream md_os;
        md_os << artifact_header(cfg.values(), seed, '>') << "\n";
        md_os << "# BVP report\n\n";
        md_os << "## Morse data at infinity\n\n";
        md_os << "nu_infty=" << md.nu << ", mu_infty=" << md.mu;
        if (md.nu > 0) {
          md_os << ", m-=" << md.m_minus << ", m+=" << md.m_plus
                << "; critical groups vanish outside [" << (md.m_minus - 1)
                << ", " << md.m_plus << "]";
        }
        md_os << "\n\n## Constants\n\n";
        if (md.nu > 0) {
          const C1Detail c1 = c1_infinity_detail(g, sp.a);
          md_os << "C1_infty (direct eigenvalue oracle, tolerance 1e-12) = "
                << format_double(c1.direct) << "\n";
          md_os << "C1_infty (closed form as printed) = "
                << format_double(c1.closed_form)
                << (c1.discrepancy ? "  [DISCREPANCY FLAGGED]" : "") << "\n";
        }
        const double s1v = 0.5 * (2.0 / 3.0 + sp.s);
        md_os << "iota(s) = " << format_double((sp.s - s1v) / (s1v * sp.s))
              << "\n";
        md_os << "\n## Hypothesis audits\n\n" << hypothesis_table_markdown(rep);
        md_os << "\n## Solutions (grad tolerance 1e-8, doubled quadrature)\n\n";
        md_os << "| norm_H | grad_norm | nontrivial | from_reduction |\n";
        md_os << "|---|---|---|---|\n";
        for (const auto& s : sols)
          md_os << "| " << format_double(s.norm_H) << " | "
                << format_double(s.grad_norm) << " | "
                << (s.nontrivial ? "yes" : "no") << " | "
                << (s.from_reduction ? "yes" : "no") << " |\n";
        write_text_file(report_path, md_os.str());
      }
      return exit_code_for(rep);
    }

    if (sc_report->parsed()) {
      const FunctionalProblem p = make_model(model, cfg);
      const SpectralSplit s = spectral_split(p.B_inf, zero_tol);
      HypothesisReport rep = audit_gradient(p, samples, seed);
      {
        const HypothesisReport h = audit_hessian(p, samples, seed);
        rep.entries.insert(rep.entries.end(), h.entries.begin(),
                           h.entries.end());
      }
      std::ostringstream os;
      os << artifact_header(cfg.values(), seed, '>') << "\n";
      os << "# pipeline report: " << model << "\n\n";
      os << "## Config\n\nsee header lines above\n\n";
      os << "## Audits (gradient tol 1e-5, hessian tol 1e-4)\n\n"
         << hypothesis_table_markdown(rep);
      if (s.nu < s.dim()) {
        const OperatorConstants oc = operator_constants(p.B_inf, s);
        os << "\n## Constants\n\nnu=" << s.nu << ", mu=" << s.mu
           << ", a_infty=" << format_double(s.a_infty)
           << ", C1_infty=" << format_double(oc.c1_infty)
           << ", C2_infty=" << format_double(oc.c2_infty) << "\n";
      }
      if (s.nu > 0) {
        const ReductionSolver rs = make_solver(p, cfg, seed);
        const double R1 = rs.cdata().R1;
        os << "\n## Reduction grid summary (fp_tol "
           << format_double(rs.fp_tol()) << ")\n\n";
        double worst_h = 0.0, worst_g = 0.0;
        for (int i = 0; i < 9; ++i) {
          const Vector z =
              (R1 + i * 0.25 * R1) * rs.split().basis_zero.col(0);
          worst_h = std::max(worst_h, rs.solve_h(z).norm());
          worst_g = std::max(worst_g, rs.reduced_gradient(z).norm());
        }
        os << "max ||h|| over grid = " << format_double(worst_h)
           << ", max ||reduced grad|| = " << format_double(worst_g) << "\n";
        const NormalFormChart chart(rs, R1);
        Rng rng(seed);
        double worst_resid = 0.0;
        for (int i = 0; i < std::max(4, samples / 4); ++i) {
          ChartPoint cp;
          cp.z = subspace_sphere(rng, rs.split().basis_zero, R1);
          cp.u_plus = subspace_ball(rng, rs.split().basis_plus, 1.0);
          cp.u_minus = subspace_ball(rng, rs.split().basis_minus, 1.0);
          worst_resid = std::max(worst_resid, chart.phi_chart(cp).second);
        }
        os << "\n## Chart residuals (tolerance 1e-8)\n\nworst = "
           << format_double(worst_resid) << "\n";
      }
      if (report_path.empty())
        std::cout << os.str();
      else
        write_text_file(report_path, os.str());
      return exit_code_for(rep);
    }

    return 0;
  } catch (const ConfigParse& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
