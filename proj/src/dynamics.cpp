#include "starwell/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "starwell/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace starwell {

namespace {

std::once_flag blas_threads_flag;

// Point parallelism beats OpenBLAS-internal threading for d <= 969 solves.
void pin_blas_single_threaded() {
  std::call_once(blas_threads_flag, [] { openblas_set_num_threads(1); });
}

bool is_real(const Matrix& m) { return m.imag().cwiseAbs().maxCoeff() < 1e-14; }

Eigen::VectorXd lapack_eigh_real(Eigen::MatrixXd a, Eigen::MatrixXd* vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n,
                                  w.data());
  if (info != 0)
    throw std::runtime_error("dsyevd failed with info = " + std::to_string(info));
  if (vectors) *vectors = std::move(a);
  return w;
}

Eigen::VectorXd lapack_eigh_complex(Matrix a, Matrix* vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n,
                                  w.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed with info = " + std::to_string(info));
  if (vectors) *vectors = std::move(a);
  return w;
}

}  // namespace

SpectralDecomposition SpectralDecomposition::compute(const LinearOperator& h) {
  if (!h.is_hermitian())
    throw std::invalid_argument("SpectralDecomposition: operator is not Hermitian");
  pin_blas_single_threaded();
  if (is_real(h.matrix())) {
    Eigen::MatrixXd v;
    Eigen::VectorXd w = lapack_eigh_real(h.matrix().real(), &v);
    return SpectralDecomposition(std::move(w), v.cast<Complex>(), h.particles());
  }
  Matrix v;
  Eigen::VectorXd w = lapack_eigh_complex(h.matrix(), &v);
  return SpectralDecomposition(std::move(w), std::move(v), h.particles());
}

Eigen::VectorXd eigenvalues_of(const LinearOperator& h) {
  if (!h.is_hermitian())
    throw std::invalid_argument("eigenvalues_of: operator is not Hermitian");
  pin_blas_single_threaded();
  if (is_real(h.matrix())) return lapack_eigh_real(h.matrix().real(), nullptr);
  return lapack_eigh_complex(h.matrix(), nullptr);
}

StateVector SpectralDecomposition::evolve(const StateVector& psi0, double t) const {
  if (psi0.dim() != dim())
    throw std::invalid_argument("evolve: state/operator dimension mismatch");
  if (!std::isfinite(t))
    throw std::invalid_argument("evolve: time must be finite");
  Vector c = v_.adjoint() * psi0.amplitudes();
  for (Eigen::Index m = 0; m < c.size(); ++m)
    c[m] *= std::exp(Complex(0.0, -w_[m] * t));
  return StateVector(v_ * c, particles_);
}

Vector SpectralDecomposition::coefficients(const StateVector& psi) const {
  if (psi.dim() != dim())
    throw std::invalid_argument("coefficients: dimension mismatch");
  return v_.adjoint() * psi.amplitudes();
}

TimeSeries population_series(const StateVector& psi0, const SpectralDecomposition& spec,
                             const FockBasis& basis, std::span<const double> times,
                             bool record_fidelity) {
  if (basis.size() != spec.dim() || psi0.dim() != spec.dim())
    throw std::invalid_argument("population_series: dimension mismatch");
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("population_series: time grid must be sorted");

  const auto d = static_cast<Eigen::Index>(spec.dim());
  const int N = basis.particles();
  const Vector c0 = spec.coefficients(psi0);

  TimeSeries ts;
  ts.particles = N;
  const auto nt = static_cast<Eigen::Index>(times.size());
  ts.times = Eigen::Map<const Eigen::VectorXd>(times.data(), nt);
  for (auto& p : ts.populations) p.resize(nt);
  if (record_fidelity) ts.fidelity_to_initial.resize(nt);

  Vector c(d), amp(d);
  for (Eigen::Index it = 0; it < nt; ++it) {
    const double t = times[static_cast<std::size_t>(it)];
    Complex overlap = 0.0;
    for (Eigen::Index m = 0; m < d; ++m) {
      const Complex phase = std::exp(Complex(0.0, -spec.eigenvalues()[m] * t));
      c[m] = phase * c0[m];
      overlap += std::norm(c0[m]) * phase;
    }
    amp.noalias() = spec.eigenvectors() * c;
    const double nrm = amp.norm();
    if (std::abs(nrm - 1.0) > 1e-10)
      throw InternalConsistencyError("population_series: norm drift " +
                                     std::to_string(nrm - 1.0));
    std::array<double, 4> pop{};
    for (Eigen::Index i = 0; i < d; ++i) {
      const double p2 = std::norm(amp[i]);
      const FockState& s = basis.state(static_cast<std::size_t>(i));
      for (int site = 0; site < 4; ++site) pop[static_cast<std::size_t>(site)] += p2 * s[site];
    }
    double total = 0.0;
    for (int site = 0; site < 4; ++site) {
      const double v = pop[static_cast<std::size_t>(site)];
      if (v < -1e-8 || v > N + 1e-8)
        throw InternalConsistencyError("population_series: population out of [0,N]");
      ts.populations[static_cast<std::size_t>(site)][it] = v;
      total += v;
    }
    if (std::abs(total - N) > 1e-8)
      throw InternalConsistencyError("population_series: total population drift " +
                                     std::to_string(total - N));
    if (record_fidelity) ts.fidelity_to_initial[it] = std::abs(overlap);
  }
  return ts;
}

double fidelity(const StateVector& psi0, const SpectralDecomposition& spec, double t) {
  const Vector c0 = spec.coefficients(psi0);
  Complex overlap = 0.0;
  for (Eigen::Index m = 0; m < c0.size(); ++m)
    overlap += std::norm(c0[m]) * std::exp(Complex(0.0, -spec.eigenvalues()[m] * t));
  const double f = std::abs(overlap);
  if (f > 1.0 + 1e-12)
    throw InternalConsistencyError("fidelity: value above 1: " + std::to_string(f));
  return std::min(f, 1.0);
}

std::vector<std::pair<double, Eigen::VectorXd>> spectrum_scan(
    const FockBasis& basis, const ReducedParams& p_template, std::span<const double> u_grid) {
  std::vector<std::pair<double, Eigen::VectorXd>> out(u_grid.size());
  const unsigned workers =
      std::min<unsigned>(scan_thread_count(), std::max<std::size_t>(u_grid.size(), 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < u_grid.size();) {
      ReducedParams p = p_template;
      p.U = u_grid[i];
      const LinearOperator h = reduced_hamiltonian(basis, p);
      out[i] = {p.U * p.N / p.J, eigenvalues_of(h)};
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

BandGapStats band_spacing_stats(const Eigen::VectorXd& levels, double e_center, double window,
                                double degeneracy_tol) {
  if (window <= 0.0)
    throw std::invalid_argument("band_spacing_stats: window must be positive");
  std::vector<double> in;
  for (Eigen::Index i = 0; i < levels.size(); ++i)
    if (std::abs(levels[i] - e_center) <= window) in.push_back(levels[i]);
  std::sort(in.begin(), in.end());
  if (in.size() < 3)
    throw InsufficientData("band_spacing_stats: only " + std::to_string(in.size()) +
                           " levels in window");

  if (degeneracy_tol < 0.0) {
    const double span = in.back() - in.front();
    degeneracy_tol = 0.5 * span / static_cast<double>(in.size() - 1);
  }
  std::vector<double> centers;
  double acc = in.front();
  int run = 1;
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (in[i] - in[i - 1] < degeneracy_tol) {
      acc += in[i];
      ++run;
    } else {
      centers.push_back(acc / run);
      acc = in[i];
      run = 1;
    }
  }
  centers.push_back(acc / run);
  if (centers.size() < 3)
    throw InsufficientData("band_spacing_stats: only " + std::to_string(centers.size()) +
                           " distinct levels after degeneracy merging");

  std::vector<double> gaps(centers.size() - 1);
  for (std::size_t i = 0; i + 1 < centers.size(); ++i) gaps[i] = centers[i + 1] - centers[i];
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= gaps.size();

  BandGapStats st;
  st.mean_gap = mean;
  st.gap_std = std::sqrt(var);
  st.level_count = static_cast<int>(in.size());
  st.cluster_count = static_cast<int>(centers.size());
  return st;
}

BandGapStats band_spacing_stats(const SpectralDecomposition& spec, double e_center,
                                double window, double degeneracy_tol) {
  return band_spacing_stats(spec.eigenvalues(), e_center, window, degeneracy_tol);
}

std::vector<std::pair<std::size_t, std::size_t>> detect_bands(const Eigen::VectorXd& levels,
                                                              double gap_factor) {
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  const auto n = static_cast<std::size_t>(levels.size());
  if (n == 0) return bands;
  if (n == 1) return {{0, 0}};
  std::vector<double> gaps(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = levels[i + 1] - levels[i];
  std::vector<double> sorted = gaps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double cut = gap_factor * median;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (gaps[i] > cut) {
      bands.emplace_back(start, i);
      start = i + 1;
    }
  }
  bands.emplace_back(start, n - 1);
  return bands;
}

unsigned scan_thread_count() {
  if (const char* env = std::getenv("STARWELL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace starwell
