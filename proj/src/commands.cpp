#include "kickscope/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kickscope/errors.hpp"
#include "kickscope/sampling.hpp"
#include "kickscope/verify.hpp"

namespace kickscope::cli {
namespace fs = std::filesystem;
using experiment::BranchState;
using experiment::ScreenPattern;

namespace {

void report_warnings(const config::RunConfig& cfg, std::ostream& err) {
  for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
}

std::string optional_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("NA");
}

std::string summary_text(const config::RunConfig& cfg, const Analysis& a) {
  std::ostringstream os;
  os << "basis=" << cfg.basis.name() << '\n';
  os << "c=" << format_real(cfg.detector.overlap_magnitude) << '\n';
  os << "theta=" << format_real(cfg.detector.overlap_phase) << '\n';
  os << "V_theory=" << format_real(cfg.detector.overlap_magnitude) << '\n';
  os << "V_measured=" << format_real(a.fringe.visibility) << '\n';
  os << "fringes_resolved=" << (a.fringe.resolved ? "true" : "false") << '\n';
  os << "fringe_period=" << format_real(a.fringe.fringe_period) << '\n';
  os << "central_fringe_shift=" << format_real(a.fringe.central_fringe_shift) << '\n';
  os << "F_k_theory=" << format_real(a.kick.fk_theory) << '\n';
  os << "F_k_branch=" << format_real(a.kick.fk_branch) << '\n';
  os << "p0=" << format_real(a.kick.p0) << '\n';
  os << "p0_measured=" << optional_real(a.kick.p0_measured) << '\n';
  os << "dp=" << format_real(a.kick.dp) << '\n';
  os << "p_e=" << format_real(a.kick.p_e) << '\n';
  os << "eq14_residual=" << format_real(a.kick.kick_identity_residual) << '\n';
  os << "storey_lhs=" << format_real(a.storey.lhs) << '\n';
  os << "storey_rhs=" << format_real(a.storey.rhs) << '\n';
  os << "storey_satisfied=" << (a.storey.satisfied ? "true" : "false") << '\n';
  for (std::size_t b = 0; b < 3; ++b)
    os << "P_" << hilbert::outcome_name(hilbert::outcome_for(cfg.basis, b)) << '='
       << format_real(a.probabilities[b]) << '\n';
  return os.str();
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Analysis analyze(const config::RunConfig& cfg, ScreenPattern* pattern, BranchState* pattern_state,
                 std::vector<std::vector<double>>* momentum_densities) {
  cfg.validate();
  const auto coeffs = hilbert::build_uqsd(cfg.detector);
  const BranchState computational = experiment::assemble(cfg.geometry, cfg.grid, coeffs);

  Analysis a;
  {
    const hilbert::BasisChoice kick_basis = cfg.basis.kind == hilbert::BasisKind::Computational
                                       ? hilbert::BasisChoice::symmetric()
                                       : cfg.basis;
    const BranchState at_slits = experiment::change_basis(computational, kick_basis);
    a.kick = experiment::kick_report(at_slits, cfg.geometry, cfg.units.hbar, cfg.detector);
  }

  BranchState state = experiment::change_basis(computational, cfg.basis);
  a.probabilities = state.probabilities();
  if (momentum_densities) {
    momentum_densities->clear();
    for (const auto& psi : state.branches)
      momentum_densities->push_back(wavepacket::to_momentum(psi, cfg.units.hbar).density());
  }
  state = experiment::propagate_all(state, cfg.units);
  ScreenPattern rho = experiment::screen_density(state);
  a.fringe = experiment::fringe_analysis(
      rho, experiment::FringeWindow::centered(cfg.geometry, cfg.units));
  a.storey = experiment::storey_bound_report(std::clamp(a.fringe.visibility, 0.0, 1.0));
  if (pattern) *pattern = std::move(rho);
  if (pattern_state) *pattern_state = std::move(state);
  return a;
}

void write_outputs(const fs::path& dir, const std::vector<OutputFile>& files) {
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& f : files) {
      const fs::path final_path = dir / f.name;
      const fs::path tmp = dir / (f.name + ".partial");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      staged.emplace_back(tmp, final_path);
      out << f.contents;
      out.close();
      if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
  } catch (...) {
    for (const auto& [tmp, _] : staged) fs::remove(tmp);
    throw;
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

int cmd_run(const config::RunConfig& cfg, const fs::path& out_dir, std::ostream& log,
            std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    report_warnings(cfg, err);
    ScreenPattern rho;
    BranchState state;
    std::vector<std::vector<double>> spectra;
    const Analysis a = analyze(cfg, &rho, &state, &spectra);

    const auto& grid = cfg.grid;
    const std::size_t stride = cfg.output.stride;
    std::ostringstream pattern_csv;
    pattern_csv << "x,rho_total,rho_branch1,rho_branch2,rho_branch3\n";
    for (std::size_t j = 0; j < grid.n; j += stride) {
      pattern_csv << format_real(grid.x(j)) << ',' << format_real(rho.density[j]);
      for (const auto& psi : state.branches) pattern_csv << ',' << format_real(std::norm(psi[j]));
      pattern_csv << '\n';
    }

    const wavepacket::MomentumSpectrum axis(grid, cfg.units.hbar,
                                           std::vector<Complex>(grid.n));
    std::ostringstream momentum_csv;
    momentum_csv << "p,spec_branch1,spec_branch2,spec_branch3\n";
    for (std::size_t k = 0; k < grid.n; k += stride) {
      momentum_csv << format_real(axis.p(k));
      for (const auto& s : spectra) momentum_csv << ',' << format_real(s[k]);
      momentum_csv << '\n';
    }

    const std::string summary = summary_text(cfg, a);
    write_outputs(out_dir, {{"pattern.csv", pattern_csv.str()},
                            {"momentum.csv", momentum_csv.str()},
                            {"summary.txt", summary}});
    log << summary;
    return kExitOk;
  });
}

int cmd_scan(const config::RunConfig& cfg, const std::vector<double>& c_values,
             const fs::path& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    if (c_values.empty()) throw ConfigError("scan needs at least one c value");
    for (double c : c_values)
      if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("scan c values must lie in [0, 1]");
    report_warnings(cfg, err);

    std::ostringstream csv;
    csv << "c,V_measured,F_k_branch,p0_measured,eq14_residual\n";
    for (double c : c_values) {
      config::RunConfig row = cfg;
      row.detector.overlap_magnitude = c;
      const Analysis a = analyze(row);
      const std::string line = format_real(c) + ',' + format_real(a.fringe.visibility) + ',' +
                               format_real(a.kick.fk_branch) + ',' +
                               optional_real(a.kick.p0_measured) + ',' +
                               format_real(a.kick.kick_identity_residual);
      csv << line << '\n';
      log << line << '\n';
    }
    write_outputs(out_dir, {{"scan.csv", csv.str()}});
    return kExitOk;
  });
}

int cmd_sample(const config::RunConfig& cfg, const fs::path& out_dir, std::ostream& log,
               std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    report_warnings(cfg, err);
    const auto coeffs = hilbert::build_uqsd(cfg.detector);
    BranchState state = experiment::change_basis(
        experiment::assemble(cfg.geometry, cfg.grid, coeffs), cfg.basis);
    state = experiment::propagate_all(state, cfg.units);
    const auto events = experiment::sample_events(state, cfg.sampling.count, cfg.sampling.seed);

    std::ostringstream csv;
    csv << "outcome,x\n";
    for (const auto& e : events)
      csv << hilbert::outcome_name(e.outcome) << ',' << format_real(e.x) << '\n';

    const auto counts = sampling::outcome_counts(events);
    const auto probs = state.probabilities();
    const auto fit = sampling::chi_square_against(events, experiment::screen_density(state));
    std::ostringstream summary;
    summary << "basis=" << cfg.basis.name() << '\n';
    summary << "count=" << events.size() << '\n';
    summary << "seed=" << cfg.sampling.seed << '\n';
    for (std::size_t b = 0; b < 3; ++b) {
      const auto name = hilbert::outcome_name(hilbert::outcome_for(cfg.basis, b));
      summary << "n_" << name << '=' << counts[b] << '\n';
      summary << "freq_" << name << '='
              << format_real(static_cast<double>(counts[b]) / static_cast<double>(events.size()))
              << '\n';
      summary << "P_" << name << '=' << format_real(probs[b]) << '\n';
    }
    summary << "chi2_statistic=" << format_real(fit.statistic) << '\n';
    summary << "chi2_dof=" << fit.dof << '\n';
    summary << "chi2_p_value=" << format_real(fit.p_value) << '\n';

    write_outputs(out_dir, {{"events.csv", csv.str()}, {"sample_summary.txt", summary.str()}});
    log << summary.str();
    return kExitOk;
  });
}

int cmd_verify(const config::RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    report_warnings(cfg, err);
    const auto checks = verify::run_suite(cfg);
    verify::print_table(checks, log);
    if (verify::all_passed(checks)) return kExitOk;
    err << "verification failed:\n";
    for (const auto& c : checks)
      if (c.status == verify::Status::Fail) err << "  " << c.module << '/' << c.name << '\n';
    return kExitVerifyFailed;
  });
}

}  // namespace kickscope::cli
