#include "kickscope/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "kickscope/experiment.hpp"
#include "kickscope/sampling.hpp"

namespace kickscope::verify {
namespace {

using experiment::BranchState;
using hilbert::BasisChoice;
using wavepacket::GridSpec;
using wavepacket::SlitGeometry;
using wavepacket::Wavefunction;

class Suite {
 public:
  explicit Suite(double scale) : scale_(scale) {}

  // |value| <= tol * scale
  void within(const std::string& module, const std::string& name, double value, double tol,
              const std::string& note = {}) {
    std::ostringstream os;
    os << std::setprecision(3) << "|err| = " << value << " (tol " << tol * scale_ << ")";
    if (!note.empty()) os << "  " << note;
    add(module, name, std::abs(value) <= tol * scale_, os.str());
  }

  void expect(const std::string& module, const std::string& name, bool ok, std::string detail) {
    add(module, name, ok, std::move(detail));
  }

  void skip(const std::string& module, const std::string& name, std::string why) {
    checks_.push_back({module, name, Status::Skipped, std::move(why)});
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  void add(const std::string& module, const std::string& name, bool ok, std::string detail) {
    checks_.push_back({module, name, ok ? Status::Pass : Status::Fail, std::move(detail)});
  }

  double scale_;
  std::vector<Check> checks_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

double max_branch_difference(const BranchState& a, const BranchState& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
    worst = std::max(worst, a.branches[k].max_abs_difference(b.branches[k]));
  return worst;
}

BranchState assemble_for(const config::RunConfig& cfg, double c, double theta) {
  hilbert::DetectorConfig det{c, theta};
  return experiment::assemble(cfg.geometry, cfg.grid, hilbert::build_uqsd(det));
}

void hilbert_checks(Suite& s) {
  double norm_err = 0.0;
  double overlap_err = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double c = i / 20.0;
    for (double theta : {0.0, kPi / 3.0, -kPi / 2.0, kPi}) {
      const hilbert::DetectorConfig det{c, theta};
      const auto k = hilbert::build_uqsd(det);
      norm_err = std::max({norm_err, std::abs(k.alpha * k.alpha + std::norm(k.beta) - 1.0),
                           std::abs(k.gamma * k.gamma + std::norm(k.delta) - 1.0)});
      const auto [d1, d2] = hilbert::detector_states(k);
      overlap_err = std::max(overlap_err, std::abs(hilbert::inner(d1, d2) - det.overlap()));
    }
  }
  s.within("hilbert", "uqsd normalization", norm_err, 1e-12);
  s.within("hilbert", "overlap reproduction", overlap_err, 1e-12);

  const std::vector<BasisChoice> bases{BasisChoice::computational(), BasisChoice::symmetric(),
                                       BasisChoice::tilted(kPi / 4.0),
                                       BasisChoice::tilted(kPi / 2.0), BasisChoice::tilted(-2.0)};
  double round_trip = 0.0;
  double unitarity = 0.0;
  for (const auto& a : bases) {
    for (const auto& b : bases) {
      const auto ab = hilbert::basis_matrix(a, b);
      round_trip = std::max(round_trip, hilbert::max_abs_difference(
                                            hilbert::multiply(ab, hilbert::basis_matrix(b, a)),
                                            hilbert::identity3()));
      unitarity = std::max(unitarity,
                           hilbert::max_abs_difference(hilbert::multiply(ab, hilbert::adjoint(ab)),
                                                       hilbert::identity3()));
    }
  }
  s.within("hilbert", "basis round trip", round_trip, 1e-12);
  s.within("hilbert", "basis unitarity", unitarity, 1e-12);
  s.within("hilbert", "tilted(0) equals symmetric",
           hilbert::max_abs_difference(hilbert::basis_vectors(BasisChoice::tilted(0.0)),
                                       hilbert::basis_vectors(BasisChoice::symmetric())),
           1e-12);
}

void wavepacket_checks(Suite& s, const config::RunConfig& cfg) {
  using wavepacket::Slit;
  const auto& geom = cfg.geometry;
  const auto& grid = cfg.grid;
  const auto& units = cfg.units;

  const Wavefunction psi1 = wavepacket::slit_state(geom, grid, Slit::One);
  const Wavefunction psi2 = wavepacket::slit_state(geom, grid, Slit::Two);
  s.within("wavepacket", "slit state normalization",
           std::max(std::abs(psi1.norm() - 1.0), std::abs(psi2.norm() - 1.0)), 1e-10);

  const Wavefunction ref = experiment::reference_state(geom, grid);
  const auto phi = wavepacket::to_momentum(ref, units.hbar);
  s.within("wavepacket", "parseval", phi.norm() - ref.norm(), 1e-10);
  s.within("wavepacket", "fourier round trip",
           wavepacket::to_position(phi).max_abs_difference(ref), 1e-12);

  const Wavefunction evolved1 = wavepacket::propagate_fft(psi1, units);
  const Wavefunction evolved2 = wavepacket::propagate_fft(psi2, units);
  s.within("wavepacket", "propagation unitarity",
           std::max(std::abs(evolved1.norm() - 1.0), std::abs(evolved2.norm() - 1.0)), 1e-10);
  const double oracle = std::max(
      evolved1.max_abs_difference(wavepacket::propagate_analytic(geom, grid, units, Slit::One)),
      evolved2.max_abs_difference(wavepacket::propagate_analytic(geom, grid, units, Slit::Two)));
  s.within("wavepacket", "fft propagation matches closed form", oracle, 1e-8);

  const double p0 = kPi * units.hbar / geom.d;
  const auto kicked = wavepacket::to_momentum(wavepacket::apply_kick(ref, p0, units.hbar),
                                              units.hbar);
  const double shift = experiment::momentum_shift(kicked.density(), phi.density(), phi.dp(),
                                                  2.0 * kPi * units.hbar / geom.d);
  s.within("wavepacket", "kick shifts momentum by p", (shift - p0) / phi.dp(), 1.0);
}

void experiment_checks(Suite& s, const config::RunConfig& cfg) {
  const auto& geom = cfg.geometry;
  const auto& grid = cfg.grid;
  const auto& units = cfg.units;
  const auto window = experiment::FringeWindow::centered(geom, units);
  const double hbar = units.hbar;
  const double period_p = 2.0 * kPi * hbar / geom.d;
  const double p0 = kPi * hbar / geom.d;

  const Wavefunction psi1t =
      wavepacket::propagate_fft(wavepacket::slit_state(geom, grid, wavepacket::Slit::One), units);
  const Wavefunction psi2t =
      wavepacket::propagate_fft(wavepacket::slit_state(geom, grid, wavepacket::Slit::Two), units);

  double prob_err = 0.0;
  double sum_err = 0.0;
  double fk_branch_err = 0.0;
  double fk_vis_err = 0.0;
  double vis_err = 0.0;
  double kick_err_bins = 0.0;
  double density_oracle = 0.0;
  std::string vis_detail;
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const BranchState s0 = assemble_for(cfg, c, 0.0);
    const auto probs = s0.probabilities();
    prob_err = std::max(prob_err, std::abs(probs[2] - c));
    sum_err = std::max(sum_err, std::abs(probs[0] + probs[1] + probs[2] - 1.0));

    const BranchState st = experiment::propagate_all(s0, units);
    const auto rho = experiment::screen_density(st);
    density_oracle = std::max(
        density_oracle,
        max_abs_difference(rho.density, experiment::two_path_density(psi1t, psi2t, c).density));
    const auto fringe = experiment::fringe_analysis(rho, window);
    vis_err = std::max(vis_err, std::abs(fringe.visibility - c));
    vis_detail += "c=" + fmt(c) + ":V=" + fmt(fringe.visibility) + " ";

    const BranchState sym = experiment::change_basis(s0, BasisChoice::symmetric());
    const hilbert::DetectorConfig det{c, 0.0};
    const auto kick = experiment::kick_report(sym, geom, hbar, det);
    fk_branch_err = std::max(fk_branch_err, std::abs(kick.fk_branch - 0.5 * (1.0 - c)));
    fk_vis_err = std::max(fk_vis_err, std::abs(kick.fk_branch - 0.5 * (1.0 - fringe.visibility)));
    if (c > 0.0 && c < 1.0 && kick.p0_measured) {
      kick_err_bins = std::max(
          kick_err_bins, experiment::circular_distance(*kick.p0_measured, p0, period_p) / kick.dp);
    }
  }
  s.within("experiment", "failure probability equals c", prob_err, 1e-10);
  s.within("experiment", "branch probabilities sum to 1", sum_err, 1e-10);
  s.within("experiment", "visibility law |V - c|", vis_err, 0.02, vis_detail);
  s.within("experiment", "kick fraction from branch norm", fk_branch_err, 1e-10);
  s.within("experiment", "kick fraction from visibility", fk_vis_err, 0.01);
  s.within("experiment", "kick magnitude (bins) for c in (0,1)", kick_err_bins, 1.0);
  s.within("experiment", "two-path density formula (theta = 0)", density_oracle, 1e-10);

  // configured detector, every basis
  const double c = cfg.detector.overlap_magnitude;
  const double theta = cfg.detector.overlap_phase;
  const BranchState s0 = assemble_for(cfg, c, theta);
  const BranchState st = experiment::propagate_all(s0, units);
  const auto rho = experiment::screen_density(st);
  s.within("experiment", "two-path density formula (configured c, theta)",
           max_abs_difference(rho.density,
                              experiment::two_path_density(psi1t, psi2t, cfg.detector.overlap())
                                  .density),
           1e-10);
  double basis_invariance = 0.0;
  for (const auto& b : {BasisChoice::symmetric(), BasisChoice::tilted(kPi / 4.0), cfg.basis}) {
    basis_invariance = std::max(
        basis_invariance,
        max_abs_difference(rho.density,
                           experiment::screen_density(experiment::change_basis(st, b)).density));
  }
  s.within("experiment", "screen density basis invariance", basis_invariance, 1e-12);
  s.within("experiment", "propagation commutes with basis change",
           max_branch_difference(
               experiment::propagate_all(experiment::change_basis(s0, cfg.basis), units),
               experiment::change_basis(st, cfg.basis)),
           1e-12);

  if (c > 0.0 && c < 1.0) {
    const BranchState sym = experiment::change_basis(s0, BasisChoice::symmetric());
    const auto kick = experiment::kick_report(sym, geom, hbar, cfg.detector);
    s.within("experiment", "configured kick magnitude (bins)",
             experiment::circular_distance(*kick.p0_measured, p0, period_p) / kick.dp, 1.0);
    double tilted_err = 0.0;
    for (double tp : {0.0, kPi / 4.0, kPi / 2.0}) {
      const double rel = experiment::tilted_relative_kick(s0, tp, geom, hbar);
      tilted_err = std::max(tilted_err, experiment::circular_distance(rel, p0, period_p) / kick.dp);
    }
    s.within("experiment", "tilted relative kick (bins)", tilted_err, 1.0);
  } else {
    s.skip("experiment", "configured kick magnitude (bins)",
           "q- branch empty or kick fraction 1/2 trivially; c = " + fmt(c));
    s.skip("experiment", "tilted relative kick (bins)", "not applicable at c = " + fmt(c));
  }

  {
    const BranchState sym0 =
        experiment::change_basis(assemble_for(cfg, 0.5, 0.0), BasisChoice::symmetric());
    const auto plus = experiment::conditional_density(sym0, hilbert::Outcome::QPlus);
    const auto fail = experiment::conditional_density(sym0, hilbert::Outcome::Q3);
    s.within("experiment", "q+ and q3 conditional patterns coincide",
             max_abs_difference(plus.pattern->density, fail.pattern->density) *
                 grid.dx(),
             1e-10);

    const auto v0 = experiment::fringe_analysis(
        experiment::screen_density(experiment::propagate_all(sym0, units)), window);
    double shift_err = 0.0;
    double vis_change = 0.0;
    for (double th : {kPi / 4.0, kPi / 2.0, kPi}) {
      const BranchState symt =
          experiment::change_basis(assemble_for(cfg, 0.5, th), BasisChoice::symmetric());
      const double shift = experiment::phase_kick_shift(symt, sym0, geom, hbar);
      const double dp = 2.0 * kPi * hbar / grid.extent();
      shift_err =
          std::max(shift_err, experiment::circular_distance(shift, th * hbar / geom.d, period_p) / dp);
      const auto vt = experiment::fringe_analysis(
          experiment::screen_density(experiment::propagate_all(symt, units)), window);
      vis_change = std::max(vis_change, std::abs(vt.visibility - v0.visibility));
    }
    s.within("experiment", "phase kick equals theta hbar/d (bins)", shift_err, 1.0);
    s.within("experiment", "visibility unchanged by theta", vis_change, 0.01);
  }

  {
    std::vector<double> residuals;
    std::string detail;
    for (double ratio : {0.005, 0.01, 0.02, 0.05}) {
      SlitGeometry g{geom.d, ratio * geom.d};
      const double dx = g.sigma / 8.0;
      std::size_t n = 16;
      while (static_cast<double>(n) * dx < g.d + 40.0 * g.sigma) n *= 2;
      residuals.push_back(
          experiment::kick_identity_residual(g, GridSpec::centered(g, n, dx), hbar));
      detail += fmt(residuals.back()) + " ";
    }
    s.within("experiment", "kick identity residual at sigma/d = 0.01", residuals[1], 0.05);
    s.expect("experiment", "kick identity residual increases with sigma/d",
             std::is_sorted(residuals.begin(), residuals.end(), std::less_equal<>()) &&
                 std::adjacent_find(residuals.begin(), residuals.end()) == residuals.end(),
             detail);
  }

  {
    bool ok = true;
    for (int i = 0; i <= 10; ++i) {
      const auto r = experiment::storey_bound_report(i / 10.0);
      ok = ok && r.satisfied && r.lhs == kPi;
    }
    s.expect("experiment", "storey bound report", ok, "lhs = pi for V in {0, 0.1, ..., 1}");
  }

  {
    const BranchState sym =
        experiment::propagate_all(experiment::change_basis(assemble_for(cfg, 0.5, 0.0),
                                                           BasisChoice::symmetric()),
                                  units);
    const std::size_t n = cfg.sampling.count;
    const auto events = experiment::sample_events(sym, n, cfg.sampling.seed);
    const auto counts = sampling::outcome_counts(events);
    const double freq = static_cast<double>(counts[1]) / static_cast<double>(n);
    s.within("experiment", "monte carlo q- frequency",
             (freq - 0.25) / (3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(n))), 1.0);
    const auto fit = sampling::chi_square_against(events, experiment::screen_density(sym));
    s.expect("experiment", "monte carlo position goodness of fit", fit.p_value > 0.01,
             "chi2 p = " + fmt(fit.p_value));
    const auto again = experiment::sample_events(sym, n, cfg.sampling.seed);
    bool same = again.size() == events.size();
    for (std::size_t i = 0; same && i < events.size(); ++i)
      same = again[i].outcome == events[i].outcome && again[i].x == events[i].x;
    s.expect("experiment", "monte carlo seed reproducibility", same, "identical event lists");
  }
}

}  // namespace

std::vector<Check> run_suite(const config::RunConfig& cfg) {
  Suite s(cfg.tolerance_scale);
  hilbert_checks(s);
  wavepacket_checks(s, cfg);
  experiment_checks(s, cfg);
  return s.take();
}

void print_table(const std::vector<Check>& checks, std::ostream& out) {
  for (const auto& c : checks) {
    const char* tag = c.status == Status::Pass ? "PASS" : c.status == Status::Fail ? "FAIL" : "SKIP";
    out << std::left << std::setw(5) << tag << ' ' << std::setw(11) << c.module << ' '
        << std::setw(50) << c.name << ' ' << c.detail << '\n';
  }
}

bool all_passed(const std::vector<Check>& checks) {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == Status::Fail; });
}

}  // namespace kickscope::verify
