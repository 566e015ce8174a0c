#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qred/channel.hpp"
#include "qred/disturbance.hpp"
#include "qred/entropy.hpp"

namespace qred {

/// Petz recovery map X -> sigma^{1/2} Phi^dag(Phi(sigma)^{-1/2} X Phi(sigma)^{-1/2}) sigma^{1/2}
/// in Kraus form, obtained from the Choi matrix of that composition.
///
/// Requires Phi(sigma) to have full rank; a direction below the support
/// cutoff is reported with its eigenvalue.
inline QuantumOperation petz_map(const QuantumOperation& phi, const PositiveOperator& sigma) {
  if (sigma.dims() != phi.in_dims()) throw std::invalid_argument("petz_map: sigma dims do not match the channel input");
  const auto out = phi(sigma);
  const auto s = out.clamped_spectrum();
  const double cut = s.support_threshold();
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) <= cut) {
      std::ostringstream msg;
      msg << "petz_map: Phi(sigma) is degenerate, eigenvalue " << s.values(i) << " at or below cutoff " << cut;
      throw std::domain_error(msg.str());
    }
  }
  RealVector inv(s.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = 1.0 / std::sqrt(s.values(i));
  const Matrix out_inv_sqrt = s.vectors * inv.asDiagonal() * s.vectors.adjoint();
  const Matrix sigma_sqrt = sqrt_psd(sigma).matrix();
  const AdjointMap dual = adjoint(phi);

  auto action = [&](const Matrix& x) -> Matrix {
    return sigma_sqrt * dual.apply_matrix(out_inv_sqrt * x * out_inv_sqrt) * sigma_sqrt;
  };
  return kraus_from_choi(choi_from_action(action, phi.out_dims(), phi.in_dims()));
}

struct RecoveryReport {
  ExtendedReal delta;
  double fidelity_recovered = 0.0;          // root fidelity F(rho, Psi o Phi(rho))
  double fidelity_recovered_squared = 0.0;  // its square
  double sigma_residual = 0.0;              // trace distance of Psi o Phi(sigma) from sigma
  bool bound_satisfied = false;             // F >= exp(-delta / 2), root fidelity
  bool bound_satisfied_squared = false;     // same bound with the squared fidelity
};

/// Builds the Petz map of (Phi, sigma) and evaluates how well it recovers rho.
inline RecoveryReport reversibility_report(const QuantumOperation& phi, const PositiveOperator& rho,
                                           const PositiveOperator& sigma) {
  if (!phi.is_channel()) throw std::invalid_argument("reversibility_report: Phi must be a channel");
  require_unit_trace(rho, "reversibility_report", 1e-8);
  require_unit_trace(sigma, "reversibility_report", 1e-8);
  const auto d = delta(phi, rho, sigma);
  if (d.out_of_domain()) throw std::domain_error("reversibility_report: D(Phi rho||Phi sigma) is infinite");

  const auto psi = petz_map(phi, sigma);
  const auto recovered = psi(phi(rho));
  RecoveryReport r;
  r.delta = *d.delta;
  r.fidelity_recovered = fidelity(rho, recovered);
  r.fidelity_recovered_squared = r.fidelity_recovered * r.fidelity_recovered;
  r.sigma_residual = trace_distance(psi(phi(sigma)), sigma);
  const double bound = r.delta.is_infinite() ? 0.0 : std::exp(-0.5 * r.delta.value());
  r.bound_satisfied = r.fidelity_recovered >= bound - 1e-12;
  r.bound_satisfied_squared = r.fidelity_recovered_squared >= bound - 1e-12;
  return r;
}

}  // namespace qred
