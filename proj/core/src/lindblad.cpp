#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "manycopies/dynamics.hpp"
#include "rk4.hpp"

namespace manycopies {

namespace {

double spectral_norm_hermitian(const ComplexMatrix& h) {
  if (h.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("norm: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::size_t step_count(double t_final, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw InvalidArgument("final time must be >= 0");
  return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

void require_stable(double stiffness, double dt, const NumericConfig& config) {
  if (stiffness * dt > config.rk4_stability_limit) {
    throw IntegrationError("step dt = " + std::to_string(dt) +
                           " is outside the RK4 stability region; use dt <= " +
                           std::to_string(config.rk4_stability_limit / stiffness));
  }
}

// Dense generator L(rho) = G rho + rho G^dagger + sum_k L_k rho L_k^dagger with
// G = -i H / hbar - K / 2.
class DenseStepper {
 public:
  explicit DenseStepper(const LindbladModel& model) {
    const auto n = static_cast<Eigen::Index>(model.dim());
    g_ = Complex(0.0, -1.0 / model.hbar()) * model.hamiltonian().matrix() - 0.5 * model.decay_operator();
    g_adj_ = g_.adjoint();
    for (const auto& l : model.jumps()) {
      if (l.matrix().cwiseAbs().maxCoeff() == 0.0) continue;
      jumps_.push_back(l.matrix());
      jumps_adj_.push_back(l.matrix().adjoint());
    }
    k1_.resize(n, n);
    k2_ = k3_ = k4_ = tmp_ = k1_;
  }

  void step(ComplexMatrix& rho, double dt) {
    detail::rk4_step(rho, dt, [this](const ComplexMatrix& x, ComplexMatrix& out) { deriv(x, out); },
                     k1_, k2_, k3_, k4_, tmp_);
  }

  void deriv(const ComplexMatrix& rho, ComplexMatrix& out) const {
    out.noalias() = g_ * rho;
    out.noalias() += rho * g_adj_;
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      out.noalias() += jumps_[k] * rho * jumps_adj_[k];
    }
  }

 private:
  ComplexMatrix g_, g_adj_;
  std::vector<ComplexMatrix> jumps_, jumps_adj_;
  ComplexMatrix k1_, k2_, k3_, k4_, tmp_;
};

// Works in the pointer frame rho' = W^dagger rho W where every collapse jump
// is |p_m><s| and sum L^dagger L is a multiple of the identity.
class StructuredStepper {
 public:
  StructuredStepper(const CollapseDynamics& dyn, const NumericConfig& config)
      : space_(dyn.collapse.space()) {
    space_.require_operator_fits(config);
    dim_ = space_.dimension();
    const std::size_t d = space_.local_dim();
    const auto n = static_cast<Eigen::Index>(dim_);

    frame_ = dyn.collapse.pointer_frame(config);
    identity_frame_ = (frame_ - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0;

    const ComplexMatrix h = copy_hamiltonian(dyn.local_h, space_, config).matrix();
    has_h_ = h.cwiseAbs().maxCoeff() > 0.0;
    if (has_h_) {
      const ComplexMatrix hp = identity_frame_ ? h : ComplexMatrix(frame_.adjoint() * h * frame_);
      minus_i_h_ = Complex(0.0, -1.0 / dyn.hbar) * hp;
    }

    decay_ = dyn.collapse.total_decay_rate();
    const double a2 = dyn.collapse.alpha() * dyn.collapse.alpha();
    pointer_.resize(d);
    for (std::size_t m = 0; m < d; ++m) pointer_[m] = pointer_index(space_, m);
    gain_.assign(dim_ * d, 0.0);
    for (std::size_t s = 0; s < dim_; ++s) {
      const BasisLabel label = BasisLabel::from_index(space_, s);
      for (std::size_t m = 0; m < d; ++m) {
        gain_[s * d + m] = a2 * static_cast<double>(dyn.collapse.weight(label, m));
      }
    }

    const double g2 = dyn.objective_gamma * dyn.objective_gamma;
    has_dephasing_ = g2 > 0.0;
    if (has_dephasing_) {
      dephasing_.resize(n, n);
      std::vector<BasisLabel> labels;
      labels.reserve(dim_);
      for (std::size_t s = 0; s < dim_; ++s) labels.push_back(BasisLabel::from_index(space_, s));
      for (std::size_t s = 0; s < dim_; ++s) {
        for (std::size_t t = 0; t < dim_; ++t) {
          std::size_t hamming = 0;
          for (std::size_t j = 0; j < space_.n_copies(); ++j) hamming += labels[s][j] != labels[t][j];
          dephasing_(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) =
              g2 * static_cast<double>(hamming);
        }
      }
    }

    stiffness_ = 2.0 * dyn.hamiltonian_norm() / dyn.hbar + decay_ + g2 * space_.n_copies();
    k1_.resize(n, n);
    k2_ = k3_ = k4_ = tmp_ = k1_;
  }

  double stiffness() const { return stiffness_; }

  ComplexMatrix to_pointer_frame(const ComplexMatrix& rho) const {
    return identity_frame_ ? rho : ComplexMatrix(frame_.adjoint() * rho * frame_);
  }
  ComplexMatrix to_computational(const ComplexMatrix& rho) const {
    return identity_frame_ ? rho : ComplexMatrix(frame_ * rho * frame_.adjoint());
  }

  void step(ComplexMatrix& rho, double dt) {
    detail::rk4_step(rho, dt, [this](const ComplexMatrix& x, ComplexMatrix& out) { deriv(x, out); },
                     k1_, k2_, k3_, k4_, tmp_);
  }

  void deriv(const ComplexMatrix& rho, ComplexMatrix& out) const {
    if (has_h_) {
      out.noalias() = minus_i_h_ * rho;
      out.noalias() -= rho * minus_i_h_;
      out -= decay_ * rho;
    } else {
      out = -decay_ * rho;
    }
    if (has_dephasing_) out.array() -= dephasing_.array() * rho.array();
    const std::size_t d = pointer_.size();
    for (std::size_t m = 0; m < d; ++m) {
      double gain = 0.0;
      for (std::size_t s = 0; s < dim_; ++s) {
        gain += gain_[s * d + m] * rho(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real();
      }
      const auto p = static_cast<Eigen::Index>(pointer_[m]);
      out(p, p) += gain;
    }
  }

  const std::vector<std::size_t>& pointers() const { return pointer_; }

 private:
  CopySpace space_;
  std::size_t dim_ = 0;
  ComplexMatrix frame_;
  bool identity_frame_ = true;
  bool has_h_ = false;
  ComplexMatrix minus_i_h_;
  double decay_ = 0.0;
  std::vector<std::size_t> pointer_;
  std::vector<double> gain_;
  bool has_dephasing_ = false;
  Eigen::MatrixXd dephasing_;
  double stiffness_ = 0.0;
  ComplexMatrix k1_, k2_, k3_, k4_, tmp_;
};

double trace_error(const ComplexMatrix& rho) { return std::abs(rho.trace() - Complex(1.0, 0.0)); }

// Shared driver: advance, track trace drift, record and check positivity.
template <typename Stepper, typename ToOutput>
EvolutionResult run_fixed_step(Stepper& stepper, ComplexMatrix rho, double t_final, double dt,
                               const EvolveOptions& options, const NumericConfig& config,
                               ToOutput&& to_output) {
  EvolutionResult result;
  result.steps = step_count(t_final, dt);
  result.dt = result.steps == 0 ? dt : t_final / static_cast<double>(result.steps);
  require_stable(stepper.stiffness(), result.dt, config);

  const bool check = options.check_positivity &&
                     static_cast<std::size_t>(rho.rows()) <= config.positivity_check_max_dim;
  const std::size_t stride = std::max<std::size_t>(options.record_stride, 1);

  auto record = [&](std::size_t step) {
    if (check) {
      const double lo = min_eigenvalue(rho);
      result.min_eigenvalue = std::min(result.min_eigenvalue, lo);
      if (lo < config.positivity_floor) {
        throw IntegrationError("state lost positivity (min eigenvalue " + std::to_string(lo) +
                               ") at t = " + std::to_string(step * result.dt) + "; reduce dt");
      }
    }
    result.times.push_back(static_cast<double>(step) * result.dt);
    result.states.push_back(to_output(rho));
  };

  result.trace_drift = trace_error(rho);
  record(0);
  for (std::size_t step = 1; step <= result.steps; ++step) {
    stepper.step(rho, result.dt);
    result.trace_drift = std::max(result.trace_drift, trace_error(rho));
    if (result.trace_drift > config.trace_drift_max) {
      throw IntegrationError("trace drift " + std::to_string(result.trace_drift) + " at t = " +
                             std::to_string(step * result.dt) + "; reduce dt");
    }
    if (step % stride == 0 || step == result.steps) record(step);
  }
  return result;
}

class DenseAdapter {
 public:
  explicit DenseAdapter(const LindbladModel& model) : stepper_(model), stiffness_(model.stiffness()) {}
  double stiffness() const { return stiffness_; }
  void step(ComplexMatrix& rho, double dt) { stepper_.step(rho, dt); }

 private:
  DenseStepper stepper_;
  double stiffness_;
};

void require_commuting_pointers(const CollapseDynamics& dyn) {
  const ComplexMatrix& h = dyn.local_h.matrix();
  const ComplexMatrix& u = dyn.collapse.pointer_basis();
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (Eigen::Index m = 0; m < u.cols(); ++m) {
    const ComplexMatrix p = u.col(m) * u.col(m).adjoint();
    if ((h * p - p * h).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw InvalidArgument("final_state requires a local Hamiltonian commuting with the pointer projectors");
    }
  }
}

}  // namespace

LindbladModel::LindbladModel(Operator hamiltonian, std::vector<Operator> jumps, double hbar)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)), hbar_(hbar) {
  if (!hamiltonian_.is_hermitian()) throw InvalidArgument("Lindblad Hamiltonian must be hermitian");
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  const auto n = static_cast<Eigen::Index>(hamiltonian_.dim());
  decay_ = ComplexMatrix::Zero(n, n);
  for (const auto& l : jumps_) {
    if (l.dim() != hamiltonian_.dim()) {
      throw DimensionMismatch("jump operator dim " + std::to_string(l.dim()) +
                              " differs from Hamiltonian dim " + std::to_string(hamiltonian_.dim()));
    }
    decay_.noalias() += l.matrix().adjoint() * l.matrix();
  }
  stiffness_ = 2.0 * spectral_norm_hermitian(hamiltonian_.matrix()) / hbar_ +
               spectral_norm_hermitian(0.5 * (decay_ + decay_.adjoint()));
}

CollapseDynamics::CollapseDynamics(CollapseModel collapse_, Operator local_h_, double objective_gamma_,
                                   double hbar_)
    : collapse(std::move(collapse_)), local_h(std::move(local_h_)), objective_gamma(objective_gamma_),
      hbar(hbar_) {
  if (!local_h.is_hermitian()) throw InvalidArgument("local Hamiltonian must be hermitian");
  if (local_h.dim() != collapse.space().local_dim()) {
    throw DimensionMismatch("local Hamiltonian dim differs from copy local dim");
  }
  if (!(objective_gamma >= 0.0)) throw InvalidArgument("objective collapse rate must be >= 0");
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
}

CollapseDynamics::CollapseDynamics(CollapseModel collapse_)
    : CollapseDynamics(collapse_, 0.0 * Operator::identity(collapse_.space().local_dim())) {}

double CollapseDynamics::total_decay_rate() const {
  return collapse.total_decay_rate() +
         objective_gamma * objective_gamma * static_cast<double>(collapse.space().n_copies());
}

double CollapseDynamics::hamiltonian_norm() const {
  return static_cast<double>(collapse.space().n_copies()) * spectral_norm_hermitian(local_h.matrix());
}

LindbladModel to_lindblad(const CollapseDynamics& dynamics, const NumericConfig& config) {
  const CollapseModel& model = dynamics.collapse;
  const ComplexMatrix w = model.pointer_frame(config);
  const CollapseOperatorSet set = collapse_lindblads(model, config);
  std::vector<Operator> jumps;
  jumps.reserve(set.operators.size());
  for (const auto& j : set.operators) {
    const auto t = static_cast<Eigen::Index>(j.target);
    const auto s = static_cast<Eigen::Index>(j.source);
    jumps.emplace_back(ComplexMatrix(j.amplitude * (w.col(t) * w.col(s).adjoint())), false, false, config);
  }
  if (dynamics.objective_gamma > 0.0) {
    auto objective = objective_collapse_lindblads(model.space(), dynamics.objective_gamma,
                                                  model.pointer_basis(), config);
    jumps.insert(jumps.end(), objective.begin(), objective.end());
  }
  return LindbladModel(copy_hamiltonian(dynamics.local_h, model.space(), config), std::move(jumps),
                       dynamics.hbar);
}

double recommended_dt(const LindbladModel& model) {
  const double rate = spectral_norm_hermitian(model.hamiltonian().matrix()) / model.hbar() +
                      spectral_norm_hermitian(model.decay_operator());
  return rate > 0.0 ? 0.05 / rate : 0.05;
}

double recommended_dt(const CollapseDynamics& dynamics) {
  return 0.05 / (dynamics.hamiltonian_norm() / dynamics.hbar + dynamics.total_decay_rate());
}

EvolutionResult evolve_dense(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                             double dt, const EvolveOptions& options, const NumericConfig& config) {
  if (rho0.dim() != model.dim()) throw DimensionMismatch("evolve_dense: state and model dims differ");
  const std::size_t entries = model.dim() * model.dim();
  if (entries > config.dense_cap) throw CapExceeded("dense density matrix", entries, config.dense_cap);
  DenseAdapter stepper(model);
  return run_fixed_step(stepper, rho0.matrix(), t_final, dt, options, config,
                        [](const ComplexMatrix& rho) { return rho; });
}

EvolutionResult evolve_structured(const CollapseDynamics& dynamics, const DensityMatrix& rho0,
                                  double t_final, double dt, const EvolveOptions& options,
                                  const NumericConfig& config) {
  const CopySpace& space = dynamics.collapse.space();
  space.require_operator_fits(config);
  if (rho0.dim() != space.dimension()) {
    throw DimensionMismatch("evolve_structured: state dim differs from copy space dim");
  }
  StructuredStepper stepper(dynamics, config);
  return run_fixed_step(stepper, stepper.to_pointer_frame(rho0.matrix()), t_final, dt, options, config,
                        [&stepper](const ComplexMatrix& rho) { return stepper.to_computational(rho); });
}

ComplexMatrix evolve_exact(const LindbladModel& model, const DensityMatrix& rho0, double t,
                           const NumericConfig& config) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  if (model.dim() > 16) {
    throw CapExceeded("superoperator exponentiation", model.dim() * model.dim() * model.dim() * model.dim(),
                      16 * 16 * 16 * 16);
  }
  (void)config;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix g =
      Complex(0.0, -1.0 / model.hbar()) * model.hamiltonian().matrix() - 0.5 * model.decay_operator();
  // Column-major vec: vec(A X B) = (B^T (x) A) vec(X).
  ComplexMatrix super = kron(id, g) + kron(ComplexMatrix(g.adjoint().transpose()), id);
  for (const auto& l : model.jumps()) super += kron(ComplexMatrix(l.matrix().conjugate()), l.matrix());
  const ComplexMatrix propagator = (super * t).exp();
  const ComplexVector vec0 = Eigen::Map<const ComplexVector>(rho0.matrix().data(), n * n);
  const ComplexVector vec_t = propagator * vec0;
  return Eigen::Map<const ComplexMatrix>(vec_t.data(), n, n);
}

std::vector<double> pointer_populations(const CollapseModel& model, const ComplexMatrix& rho,
                                        const NumericConfig& config) {
  const ComplexMatrix w = model.pointer_frame(config);
  std::vector<double> out(model.space().local_dim());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const auto p = static_cast<Eigen::Index>(pointer_index(model.space(), m));
    out[m] = (w.col(p).adjoint() * rho * w.col(p))(0, 0).real();
  }
  return out;
}

double pointer_coherence(const CollapseModel& model, const ComplexMatrix& rho, std::size_t m,
                         std::size_t n, const NumericConfig& config) {
  const ComplexMatrix w = model.pointer_frame(config);
  const auto pm = static_cast<Eigen::Index>(pointer_index(model.space(), m));
  const auto pn = static_cast<Eigen::Index>(pointer_index(model.space(), n));
  return std::abs((w.col(pm).adjoint() * rho * w.col(pn))(0, 0));
}

FinalState final_state(const CollapseDynamics& dynamics, const DensityMatrix& rho0,
                       const FinalStateOptions& options, const NumericConfig& config) {
  require_commuting_pointers(dynamics);
  const CollapseModel& model = dynamics.collapse;
  const double dt = options.dt > 0.0 ? options.dt : recommended_dt(dynamics);
  const double max_time = options.max_time > 0.0 ? options.max_time : 1e4 / dynamics.total_decay_rate();
  const std::size_t d = model.space().local_dim();

  std::vector<double> previous;
  std::vector<double> current;
  double t = 0.0;
  double drift = 0.0;

  auto converge = [&](auto& stepper, ComplexMatrix rho, auto&& populations) {
    require_stable(stepper.stiffness(), dt, config);
    previous = populations(rho);
    while (true) {
      stepper.step(rho, dt);
      t += dt;
      drift = std::max(drift, trace_error(rho));
      if (drift > config.trace_drift_max) {
        throw IntegrationError("trace drift " + std::to_string(drift) + " during final_state; reduce dt");
      }
      current = populations(rho);
      double rate = 0.0;
      for (std::size_t m = 0; m < d; ++m) rate = std::max(rate, std::abs(current[m] - previous[m]) / dt);
      if (rate < options.rate_tol) return rho;
      if (t > max_time) {
        throw ConvergenceError("pointer populations still changing at rate " + std::to_string(rate) +
                               " after t = " + std::to_string(t));
      }
      previous.swap(current);
    }
  };

  ComplexMatrix rho_final;
  if (options.engine == Engine::dense) {
    const LindbladModel lindblad = to_lindblad(dynamics, config);
    DenseAdapter stepper(lindblad);
    const ComplexMatrix w = model.pointer_frame(config);
    rho_final = converge(stepper, rho0.matrix(), [&](const ComplexMatrix& rho) {
      std::vector<double> p(d);
      for (std::size_t m = 0; m < d; ++m) {
        const auto idx = static_cast<Eigen::Index>(pointer_index(model.space(), m));
        p[m] = (w.col(idx).adjoint() * rho * w.col(idx))(0, 0).real();
      }
      return p;
    });
  } else {
    StructuredStepper stepper(dynamics, config);
    const ComplexMatrix rho_pf = converge(stepper, stepper.to_pointer_frame(rho0.matrix()),
                                          [&](const ComplexMatrix& rho) {
                                            std::vector<double> p(d);
                                            for (std::size_t m = 0; m < d; ++m) {
                                              const auto idx = static_cast<Eigen::Index>(stepper.pointers()[m]);
                                              p[m] = rho(idx, idx).real();
                                            }
                                            return p;
                                          });
    rho_final = stepper.to_computational(rho_pf);
  }

  ComplexMatrix hermitian_part = 0.5 * (rho_final + rho_final.adjoint());
  hermitian_part /= hermitian_part.trace().real();
  FinalState out{DensityMatrix(std::move(hermitian_part), config), current, t};
  return out;
}

}  // namespace manycopies
