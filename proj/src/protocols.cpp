#include "starwell/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "starwell/errors.hpp"

namespace starwell {

namespace {

using std::numbers::pi;

std::vector<double> stage_grid(double t0, double duration, int samples, bool include_start) {
  std::vector<double> g;
  if (duration <= 0.0) {
    g.push_back(t0);
    return g;
  }
  const int n = std::max(samples, 2);
  for (int i = include_start ? 0 : 1; i < n; ++i)
    g.push_back(t0 + duration * i / (n - 1));
  return g;
}

TimeSeries concat(const std::vector<TimeSeries>& parts, int particles) {
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.times.size();
  TimeSeries ts;
  ts.particles = particles;
  ts.times.resize(total);
  for (auto& pop : ts.populations) pop.resize(total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    const Eigen::Index n = p.times.size();
    ts.times.segment(at, n) = p.times;
    for (int s = 0; s < 4; ++s)
      ts.populations[static_cast<std::size_t>(s)].segment(at, n) =
          p.populations[static_cast<std::size_t>(s)];
    at += n;
  }
  return ts;
}

void parallel_over(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(scan_thread_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < workers; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

}  // namespace

ProtocolReport run_schedule(const FockBasis& basis, const Schedule& schedule,
                            const AnalyticOverlay& overlay) {
  if (schedule.stages.empty())
    throw std::invalid_argument("run_schedule: schedule needs at least one stage");

  ProtocolReport report;
  std::vector<TimeSeries> parts;
  StateVector psi = schedule.initial;
  double t0 = schedule.start_time;
  bool first = true;
  for (const Stage& stage : schedule.stages) {
    if (stage.duration < 0.0)
      throw std::invalid_argument("run_schedule: negative stage duration");
    const LinearOperator h = stage.field
                                 ? broken_hamiltonian(basis, stage.params, *stage.field)
                                 : reduced_hamiltonian(basis, stage.params);
    const auto spec = SpectralDecomposition::compute(h);
    const std::vector<double> local = stage_grid(0.0, stage.duration, stage.samples, first);
    TimeSeries part = population_series(psi, spec, basis, local);
    part.times.array() += t0;  // shift to global time
    parts.push_back(std::move(part));
    psi = spec.evolve(psi, stage.duration);
    t0 += stage.duration;
    report.stage_boundaries.push_back(t0);
    first = false;
  }
  report.series = concat(parts, basis.particles());
  report.final_state = psi;

  if (overlay) {
    report.analytic.particles = basis.particles();
    const Eigen::Index n = report.series.times.size();
    report.analytic.times = report.series.times;
    for (auto& pop : report.analytic.populations) pop.resize(n);
    double dev = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto a = overlay(report.series.times[i]);
      for (int s = 0; s < 4; ++s) {
        report.analytic.populations[static_cast<std::size_t>(s)][i] =
            a[static_cast<std::size_t>(s)];
        dev = std::max(dev, std::abs(a[static_cast<std::size_t>(s)] -
                                     report.series.populations[static_cast<std::size_t>(s)][i]));
      }
    }
    report.max_abs_deviation = dev;
  }
  return report;
}

ProtocolReport demux_1to2(const FockBasis& basis, int n1, int n4, int k,
                          const ReducedParams& p, const FieldConfig& f) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("demux_1to2: k must be in 1..3");
  const FieldConfig fk(f.nu(), k);
  const FockState ini{{n1, 0, 0, n4}};
  const double tau = transfer_time(zeta(p, fk, n4));

  Schedule s{fock_state_vector(basis, ini), {Stage{p, fk, tau, 160}}};
  ProtocolReport report = run_schedule(
      basis, s, [&](double t) { return populations_broken(ini, p, fk, t); });

  const auto& pops = report.series.populations;
  const Eigen::Index last = report.series.times.size() - 1;
  const double denom = n1 > 0 ? n1 : 1.0;
  const int drain = (k == 2) ? 3 : (k == 3 ? 2 : 1);
  const int other = (k == 1) ? 2 : ((drain == 3) ? 2 : 3);
  report.verdicts["transfer_efficiency"] =
      pops[static_cast<std::size_t>(drain - 1)][last] / denom;
  report.verdicts["leakage"] = pops[static_cast<std::size_t>(other - 1)][last] / denom;
  report.verdicts["tau"] = tau;
  if (k == 1) report.verdicts["source_retention"] = pops[0][last] / denom;
  return report;
}

ProtocolReport mux_2to1(const FockBasis& basis, int n1, int n2, int n4, int k,
                        const ReducedParams& p, const FieldConfig& f) {
  if (k != 1 && k != 2)
    throw std::invalid_argument("mux_2to1: k must be 1 or 2");
  const FieldConfig fk(f.nu(), k);
  const FockState ini{{n1, n2, 0, n4}};
  const double tau = transfer_time(zeta(p, fk, n4));

  Schedule s{fock_state_vector(basis, ini), {Stage{p, fk, tau, 160}}};
  ProtocolReport report = run_schedule(
      basis, s, [&](double t) { return populations_broken(ini, p, fk, t); });

  const Eigen::Index last = report.series.times.size() - 1;
  report.verdicts["n3_at_tau"] = report.series.populations[2][last];
  report.verdicts["n3_predicted"] = (k == 1) ? n2 : n1;
  report.verdicts["tau"] = tau;
  return report;
}

ProtocolReport amplitude_demux(const FockBasis& basis, int n1, int n4, int k, double q,
                               const ReducedParams& p, const FieldConfig& f) {
  if (k != 2 && k != 3)
    throw std::invalid_argument("amplitude_demux: k must be 2 or 3");
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("amplitude_demux: q must lie in [0,1]");
  const FieldConfig fk(f.nu(), k);
  const FockState ini{{n1, 0, 0, n4}};
  const double tau = transfer_time(zeta(p, fk, n4));
  const FieldConfig f1(f.nu(), 1);
  const FockState mid = routing_table(ini, k);

  Schedule s{fock_state_vector(basis, ini),
             {Stage{p, fk, tau, 160}, Stage{p, f1, q * tau, 160}}};
  ProtocolReport report = run_schedule(basis, s, [&](double t) {
    return t <= tau ? populations_broken(ini, p, fk, t)
                    : populations_broken(mid, p, f1, t - tau);
  });

  const Eigen::Index last = report.series.times.size() - 1;
  const double denom = n1 > 0 ? n1 : 1.0;
  report.verdicts["imbalance"] =
      (report.series.populations[1][last] - report.series.populations[2][last]) / denom;
  report.verdicts["imbalance_predicted"] = imbalance_prediction(q, k);
  report.verdicts["tau"] = tau;
  return report;
}

ProtocolReport amplitude_mux(const FockBasis& basis, int n1, int n4, double q, int k,
                             const ReducedParams& p, const FieldConfig& f,
                             std::span<const double> stage2_times) {
  if (k != 1 && k != 2)
    throw std::invalid_argument("amplitude_mux: k must be 1 or 2");
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("amplitude_mux: q must lie in [0,1]");
  if (stage2_times.empty() || stage2_times.front() < 0.0)
    throw std::invalid_argument("amplitude_mux: stage-2 grid must start at t >= 0");
  const FockState ini{{n1, 0, 0, n4}};
  const double tau = transfer_time(zeta(p, f, n4));
  const FieldConfig f3(f.nu(), 3);
  const FieldConfig fk(f.nu(), k);

  // Preparation: F_3 from t = -q*tau to 0 forms the pair state on wells 1,2.
  const LinearOperator h3 = broken_hamiltonian(basis, p, f3);
  const auto spec3 = SpectralDecomposition::compute(h3);
  const StateVector psi_ini = fock_state_vector(basis, ini);
  std::vector<double> prep_grid =
      stage_grid(0.0, q * tau, std::max(2, static_cast<int>(60 * q) + 2), true);
  TimeSeries prep = population_series(psi_ini, spec3, basis, prep_grid);
  prep.times.array() -= q * tau;
  const StateVector psi0 = spec3.evolve(psi_ini, q * tau);

  // Stage 2 under F_k.
  const LinearOperator hk = broken_hamiltonian(basis, p, fk);
  const auto speck = SpectralDecomposition::compute(hk);
  TimeSeries main = population_series(psi0, speck, basis, stage2_times);

  ProtocolReport report;
  report.series = concat({prep, main}, basis.particles());
  report.stage_boundaries = {0.0, stage2_times.back()};
  report.final_state = speck.evolve(psi0, stage2_times.back());

  // Overlay: broken-symmetry form during preparation, two-stage form after.
  report.analytic.particles = basis.particles();
  report.analytic.times = report.series.times;
  const Eigen::Index n = report.series.times.size();
  for (auto& pop : report.analytic.populations) pop.resize(n);
  double dev_stage2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = report.series.times[i];
    const auto a = t < 0.0 ? populations_broken(ini, p, f3, t + q * tau)
                           : populations_two_stage(q, k, n1, n4, p, fk, t);
    for (int s = 0; s < 4; ++s) {
      report.analytic.populations[static_cast<std::size_t>(s)][i] =
          a[static_cast<std::size_t>(s)];
      const double d = std::abs(a[static_cast<std::size_t>(s)] -
                                report.series.populations[static_cast<std::size_t>(s)][i]);
      if (t >= 0.0) dev_stage2 = std::max(dev_stage2, d);
    }
  }
  report.max_abs_deviation = dev_stage2;

  double amp_num = 0.0;
  for (Eigen::Index i = prep.times.size(); i < n; ++i)
    amp_num = std::max(amp_num, report.series.populations[2][i]);
  report.verdicts["channel_amplitude"] = amp_num;
  report.verdicts["channel_amplitude_predicted"] =
      (k == 1) ? amplitude_a2(q, n1) : amplitude_a1(q, n1);
  report.verdicts["tau"] = tau;
  report.verdicts["transferred_phase"] = transferred_phase(p, fk);

  // Fidelity of psi(tau) against the predicted phase-shifted pair state.
  const StateVector at_tau = speck.evolve(psi0, tau);
  CoherentPairState target = coherent_pair(q, n1, {k, 3}, n4);
  const double phi = transferred_phase(p, fk);
  const Complex rot = std::exp(Complex(0.0, k == 1 ? -phi : phi));
  target.beta *= rot;
  const StateVector target_vec = expand_to_fock(target, basis);
  report.verdicts["pair_fidelity_at_tau"] =
      std::abs(target_vec.amplitudes().dot(at_tau.amplitudes()));
  return report;
}

SigmaScan sigma_scan_fidelity(const FockBasis& basis, const ReducedParams& p_template,
                              std::span<const double> sigma_grid, const FockState& ini) {
  SigmaScan scan;
  const std::size_t n = sigma_grid.size();
  std::vector<std::optional<std::pair<double, double>>> slots(n);
  std::vector<char> skipped(n, 0);

  parallel_over(n, [&](std::size_t i) {
    ReducedParams p = p_template;
    p.sigma = sigma_grid[i];
    if (std::abs(p.sigma - sigma_crit(p)) < 1e-6) {
      skipped[i] = 1;
      return;
    }
    double jeff;
    try {
      jeff = effective_hopping(p, ini[3]);
    } catch (const SingularParameter&) {
      skipped[i] = 1;
      return;
    }
    const double period = 2.0 * pi / (3.0 * std::abs(jeff));
    const LinearOperator h = reduced_hamiltonian(basis, p);
    const auto spec = SpectralDecomposition::compute(h);
    const StateVector psi0 = fock_state_vector(basis, ini);
    slots[i] = {p.sigma / p.J, fidelity(psi0, spec, period)};
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (skipped[i])
      scan.skipped.push_back(sigma_grid[i]);
    else if (slots[i])
      scan.points.push_back(*slots[i]);
  }
  return scan;
}

}  // namespace starwell
