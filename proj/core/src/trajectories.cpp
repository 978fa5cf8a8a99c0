#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "manycopies/dynamics.hpp"

namespace manycopies {

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Portable uniform in [0, 1); std::uniform_real_distribution is
// implementation-defined and would break cross-platform reproducibility.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct TrajectoryOutcome {
  std::vector<double> pointer_populations;
  std::size_t jumps = 0;
  long resolved = -1;
};

class JumpSimulator {
 public:
  JumpSimulator(const CollapseDynamics& dyn, double dt, const NumericConfig& config)
      : space_(dyn.collapse.space()), dt_(dt) {
    space_.require_ket_fits(config);
    dim_ = space_.dimension();
    n_ = space_.n_copies();
    d_ = space_.local_dim();

    const ComplexMatrix& u = dyn.collapse.pointer_basis();
    ComplexMatrix h = u.adjoint() * dyn.local_h.matrix() * u;
    h = 0.5 * (h + h.adjoint()).eval();
    has_h_ = h.cwiseAbs().maxCoeff() > 0.0;
    if (has_h_) local_step_ = unitary_propagator(Operator::hermitian(h, config), dt, dyn.hbar);
    // H_eff = H - i Gamma/2 with sum L^dagger L = Gamma I: the norm decays uniformly.
    damping_ = std::exp(-0.5 * dyn.total_decay_rate() * dt);

    const double a2 = dyn.collapse.alpha() * dyn.collapse.alpha();
    gamma2_ = dyn.objective_gamma * dyn.objective_gamma;
    pointer_.resize(d_);
    for (std::size_t m = 0; m < d_; ++m) pointer_[m] = pointer_index(space_, m);
    symbols_.resize(dim_ * n_);
    rates_.resize(dim_ * d_);
    for (std::size_t s = 0; s < dim_; ++s) {
      const BasisLabel label = BasisLabel::from_index(space_, s);
      for (std::size_t j = 0; j < n_; ++j) symbols_[s * n_ + j] = label[j];
      for (std::size_t m = 0; m < d_; ++m) rates_[s * d_ + m] = a2 * dyn.collapse.weight(label, m);
    }
    strides_.resize(n_);
    std::size_t stride = 1;
    for (std::size_t j = n_; j-- > 0;) {
      strides_[j] = stride;
      stride *= d_;
    }
  }

  TrajectoryOutcome run(ComplexVector psi, std::size_t steps, std::mt19937_64& rng) const {
    TrajectoryOutcome out;
    double threshold = 1.0 - uniform01(rng);
    ComplexVector scratch(static_cast<Eigen::Index>(d_));
    for (std::size_t step = 0; step < steps; ++step) {
      if (has_h_) {
        for (std::size_t j = 0; j < n_; ++j) apply_local(psi, j, scratch);
      }
      psi *= damping_;
      if (psi.squaredNorm() < threshold) {
        jump(psi, rng);
        ++out.jumps;
        threshold = 1.0 - uniform01(rng);
      }
    }
    const double norm2 = psi.squaredNorm();
    out.pointer_populations.resize(d_);
    for (std::size_t m = 0; m < d_; ++m) {
      const double p = std::norm(psi(static_cast<Eigen::Index>(pointer_[m]))) / norm2;
      out.pointer_populations[m] = p;
      if (p > 1.0 - 1e-6) out.resolved = static_cast<long>(m);
    }
    return out;
  }

 private:
  void apply_local(ComplexVector& psi, std::size_t copy, ComplexVector& scratch) const {
    const std::size_t stride = strides_[copy];
    const std::size_t block = stride * d_;
    for (std::size_t base = 0; base < dim_; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t a = 0; a < d_; ++a) {
          scratch(static_cast<Eigen::Index>(a)) = psi(static_cast<Eigen::Index>(base + off + a * stride));
        }
        for (std::size_t a = 0; a < d_; ++a) {
          Complex acc = 0.0;
          for (std::size_t b = 0; b < d_; ++b) {
            acc += local_step_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                   scratch(static_cast<Eigen::Index>(b));
          }
          psi(static_cast<Eigen::Index>(base + off + a * stride)) = acc;
        }
      }
    }
  }

  void jump(ComplexVector& psi, std::mt19937_64& rng) const {
    const double norm2 = psi.squaredNorm();
    double total = 0.0;
    for (std::size_t s = 0; s < dim_; ++s) {
      const double w = std::norm(psi(static_cast<Eigen::Index>(s)));
      for (std::size_t m = 0; m < d_; ++m) total += rates_[s * d_ + m] * w;
    }
    const double objective_total = gamma2_ * static_cast<double>(n_) * norm2;
    double target = uniform01(rng) * (total + objective_total);

    if (target < total) {
      std::size_t chosen = d_ - 1;
      for (std::size_t s = 0; s < dim_ && target >= 0.0; ++s) {
        const double w = std::norm(psi(static_cast<Eigen::Index>(s)));
        for (std::size_t m = 0; m < d_; ++m) {
          target -= rates_[s * d_ + m] * w;
          if (target < 0.0) {
            chosen = m;
            break;
          }
        }
      }
      psi.setZero();
      psi(static_cast<Eigen::Index>(pointer_[chosen])) = 1.0;
      return;
    }

    target -= total;
    // gamma P_m^{(j)}: weight gamma^2 ||P psi||^2, copy-major order.
    for (std::size_t j = 0; j < n_; ++j) {
      std::vector<double> weights(d_, 0.0);
      for (std::size_t s = 0; s < dim_; ++s) {
        weights[symbols_[s * n_ + j]] += gamma2_ * std::norm(psi(static_cast<Eigen::Index>(s)));
      }
      for (std::size_t m = 0; m < d_; ++m) {
        if (target < weights[m] || (j + 1 == n_ && m + 1 == d_)) {
          for (std::size_t s = 0; s < dim_; ++s) {
            if (symbols_[s * n_ + j] != m) psi(static_cast<Eigen::Index>(s)) = 0.0;
          }
          psi.normalize();
          return;
        }
        target -= weights[m];
      }
    }
  }

  CopySpace space_;
  double dt_;
  std::size_t dim_ = 0, n_ = 0, d_ = 0;
  bool has_h_ = false;
  ComplexMatrix local_step_;
  double damping_ = 1.0;
  double gamma2_ = 0.0;
  std::vector<std::size_t> pointer_;
  std::vector<std::size_t> symbols_;
  std::vector<double> rates_;
  std::vector<std::size_t> strides_;
};

}  // namespace

TrajectoryHistogram jump_trajectories(const CollapseDynamics& dynamics, const Ket& psi0, double t_final,
                                      double dt, std::size_t n_traj, std::uint64_t seed,
                                      std::size_t workers, const NumericConfig& config) {
  const CopySpace& space = dynamics.collapse.space();
  space.require_ket_fits(config);
  if (psi0.dim() != space.dimension()) throw DimensionMismatch("jump_trajectories: ket dim differs from copy space");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(t_final >= 0.0)) throw InvalidArgument("final time must be >= 0");
  if (n_traj == 0) throw InvalidArgument("need at least one trajectory");

  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double step_dt = steps == 0 ? dt : t_final / static_cast<double>(steps);
  const JumpSimulator sim(dynamics, step_dt, config);

  // Pointer frame amplitudes W^dagger psi, applied copy by copy.
  ComplexVector psi = psi0.amplitudes();
  const ComplexMatrix u_adj = dynamics.collapse.pointer_basis().adjoint();
  {
    const std::size_t d = space.local_dim();
    const std::size_t dim = space.dimension();
    std::size_t stride = dim;
    ComplexVector scratch(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < space.n_copies(); ++j) {
      stride /= d;
      const std::size_t block = stride * d;
      for (std::size_t base = 0; base < dim; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
          for (std::size_t a = 0; a < d; ++a) scratch(static_cast<Eigen::Index>(a)) = psi(static_cast<Eigen::Index>(base + off + a * stride));
          const ComplexVector mapped = u_adj * scratch;
          for (std::size_t a = 0; a < d; ++a) psi(static_cast<Eigen::Index>(base + off + a * stride)) = mapped(static_cast<Eigen::Index>(a));
        }
      }
    }
  }

  std::vector<TrajectoryOutcome> outcomes(n_traj);
  const std::size_t n_workers = std::clamp<std::size_t>(workers, 1, n_traj);
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < n_traj; i += n_workers) {
      std::mt19937_64 rng(derive_stream_seed(seed, i));
      outcomes[i] = sim.run(psi, steps, rng);
    }
  };
  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  const std::size_t d = space.local_dim();
  TrajectoryHistogram hist;
  hist.counts.assign(d, 0);
  hist.n_traj = n_traj;
  std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
  for (const auto& o : outcomes) {
    hist.total_jumps += o.jumps;
    if (o.resolved >= 0) {
      ++hist.counts[static_cast<std::size_t>(o.resolved)];
    } else {
      ++hist.unresolved;
    }
    for (std::size_t m = 0; m < d; ++m) {
      sum[m] += o.pointer_populations[m];
      sum_sq[m] += o.pointer_populations[m] * o.pointer_populations[m];
    }
  }
  const double n = static_cast<double>(n_traj);
  hist.mean_pointer_populations.resize(d);
  hist.stderr_pointer_populations.resize(d);
  for (std::size_t m = 0; m < d; ++m) {
    const double mean = sum[m] / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq[m] - n * mean * mean) / (n - 1)) : 0.0;
    hist.mean_pointer_populations[m] = mean;
    hist.stderr_pointer_populations[m] = std::sqrt(var / n);
  }
  return hist;
}

}  // namespace manycopies
