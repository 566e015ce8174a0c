#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qred/channel.hpp"
#include "qred/disturbance.hpp"
#include "qred/entropy.hpp"
#include "qred/random.hpp"
#include "qred/report.hpp"

namespace qred {

inline constexpr int kDefaultWindowStart = 20;
inline constexpr int kDefaultWindowEnd = 200;

/// One term (rho_n, sigma_n, Phi_n) of a sequence.
struct SequencePoint {
  PositiveOperator rho;
  PositiveOperator sigma;
  QuantumOperation phi;
};

/// Deterministic generator n -> (rho_n, sigma_n, Phi_n) with an optional
/// known limit and an optional known jump of n -> D(rho_n||sigma_n).
struct SequenceFamily {
  std::string name;
  std::function<SequencePoint(int)> generator;
  std::optional<SequencePoint> limit;
  std::optional<double> analytic_jump;

  SequencePoint at(int n) const { return generator(n); }
  const SequencePoint& limit_point() const {
    if (!limit) throw std::domain_error(name + ": family has no declared limit");
    return *limit;
  }
};

/// Windowed proxy for limsup f(x_n) - f(x_0): the maximum of f over
/// n in [n0, n_end] minus the value at the limit.
struct JumpEstimate {
  ExtendedReal f_limit;
  ExtendedReal tail_max;
  ExtendedReal dj_hat;
  int n0 = 0;
  int n = 0;
  int argmax = 0;
};

inline void check_window(int n0, int n) {
  if (n0 < 1 || n < n0) throw std::invalid_argument("window must satisfy 1 <= N0 <= N");
}

inline JumpEstimate dj_estimate(const std::function<ExtendedReal(int)>& f, ExtendedReal f_limit, int n0, int n) {
  check_window(n0, n);
  if (f_limit.is_infinite()) throw std::domain_error("dj_estimate: value at the limit is infinite");
  JumpEstimate e{f_limit, f(n0), 0.0, n0, n, n0};
  for (int k = n0 + 1; k <= n; ++k) {
    const auto v = f(k);
    if (v > e.tail_max) {
      e.tail_max = v;
      e.argmax = k;
    }
  }
  e.dj_hat = e.tail_max.is_infinite() ? ExtendedReal::infinity() : ExtendedReal(e.tail_max.value() - f_limit.value());
  return e;
}

enum class Functional {
  relative_entropy,         // D(rho_n||sigma_n)
  output_relative_entropy,  // D(Phi_n rho_n||Phi_n sigma_n)
  disturbance               // Delta_{Phi_n}(rho_n, sigma_n)
};

inline ExtendedReal evaluate(Functional f, const SequencePoint& p) {
  switch (f) {
    case Functional::relative_entropy:
      return relative_entropy(p.rho, p.sigma);
    case Functional::output_relative_entropy:
      return relative_entropy(p.phi(p.rho), p.phi(p.sigma));
    case Functional::disturbance:
      return delta(p.phi, p.rho, p.sigma).value();
  }
  throw std::logic_error("evaluate: unknown functional");
}

inline JumpEstimate dj_estimate(const SequenceFamily& family, Functional f, int n0 = kDefaultWindowStart,
                                int n = kDefaultWindowEnd) {
  return dj_estimate([&](int k) { return evaluate(f, family.at(k)); }, evaluate(f, family.limit_point()), n0, n);
}

/// Trace-norm distances of the generator output at n from the declared limit.
struct LimitDistance {
  double rho = 0.0;
  double sigma = 0.0;
  double kraus = 0.0;  // max entrywise distance between Choi matrices
};

inline LimitDistance limit_distance(const SequenceFamily& family, int n) {
  const auto p = family.at(n);
  const auto& l = family.limit_point();
  return {2.0 * trace_distance(p.rho, l.rho), 2.0 * trace_distance(p.sigma, l.sigma),
          (choi(p.phi).j - choi(l.phi).j).cwiseAbs().maxCoeff()};
}

// ---------------------------------------------------------------------------
// Builtin families
// ---------------------------------------------------------------------------

namespace families {

/// Channel attached to the vanishing-mass states.
enum class VanishingMassChannel { identity, dephasing, depolarizing, partial_trace, drift };

inline constexpr std::string_view vanishing_mass_channels[] = {"identity", "dephasing", "depolarizing",
                                                               "partial_trace", "drift"};

/// rho_n = diag(1 - 1/n, 1/n), sigma_n = diag(1 - d_n, d_n), d_n = e^{-n}/n.
/// The second term of D(rho_n||sigma_n) is exactly 1 for every n while the
/// limit pair is (|0><0|, |0><0|), so the jump is one nat.
///
/// Channels: identity; complete dephasing; complete depolarizing;
/// partial_trace, where the states carry a maximally mixed ancilla that
/// the channel discards; drift, depolarizing with p_n = 1/n tending to the
/// identity.
inline SequenceFamily vanishing_mass(VanishingMassChannel channel = VanishingMassChannel::identity,
                                     std::size_t ancilla_dim = 2) {
  if (ancilla_dim == 0) throw std::invalid_argument("vanishing_mass: ancilla dimension must be positive");
  const bool with_ancilla = channel == VanishingMassChannel::partial_trace;
  auto embed = [=](const PositiveOperator& x) {
    return with_ancilla ? tensor(x, PositiveOperator::maximally_mixed(Dims{ancilla_dim})) : x;
  };
  auto channel_at = [=](std::optional<int> n) -> QuantumOperation {
    switch (channel) {
      case VanishingMassChannel::identity:
        return channels::identity(Dims{2});
      case VanishingMassChannel::dephasing:
        return channels::dephasing(2);
      case VanishingMassChannel::depolarizing:
        return channels::depolarizing(1.0, 2);
      case VanishingMassChannel::partial_trace:
        return channels::partial_trace(Dims{2, ancilla_dim}, {0});
      case VanishingMassChannel::drift:
        return n ? channels::depolarizing(1.0 / *n, 2) : channels::identity(Dims{2});
    }
    throw std::logic_error("vanishing_mass: unknown channel");
  };

  SequenceFamily f;
  f.name = "vanishing_mass/" + std::string(vanishing_mass_channels[static_cast<int>(channel)]);
  f.generator = [=](int n) {
    if (n < 1) throw std::invalid_argument("vanishing_mass: n must be positive");
    const double eps = 1.0 / n;
    const double delta_n = std::exp(-static_cast<double>(n)) / n;
    return SequencePoint{embed(PositiveOperator::diagonal({1.0 - eps, eps})),
                         embed(PositiveOperator::diagonal({1.0 - delta_n, delta_n})), channel_at(n)};
  };
  const auto ground = PositiveOperator::diagonal({1.0, 0.0});
  f.limit = SequencePoint{embed(ground), embed(ground), channel_at(std::nullopt)};
  f.analytic_jump = 1.0;
  return f;
}

/// Closed form of D(rho_n||sigma_n) for the vanishing-mass family.
inline double vanishing_mass_divergence(int n) {
  const double eps = 1.0 / n;
  const double delta_n = std::exp(-static_cast<double>(n)) / n;
  const double head = eps < 1.0 ? (1.0 - eps) * std::log((1.0 - eps) / (1.0 - delta_n)) : 0.0;
  return head + 1.0;
}

inline std::optional<VanishingMassChannel> parse_vanishing_mass_channel(std::string_view name) {
  for (std::size_t i = 0; i < std::size(vanishing_mass_channels); ++i)
    if (vanishing_mass_channels[i] == name) return static_cast<VanishingMassChannel>(i);
  return std::nullopt;
}

/// Classical distributions in dimension d: rho_n keeps mass 1 - 1/n on level
/// 0 and spreads 1/n over the other d - 1 levels; sigma_n puts
/// e^{-n J}/n on each of those levels. The tail contributes
/// J - ln(d - 1)/n to D, so the jump at the common limit |0><0| is J.
inline SequenceFamily classical_tail(std::size_t d, double jump) {
  if (d < 2) throw std::invalid_argument("classical_tail: dimension must be at least 2");
  if (!(jump > 0.0) || jump > 3.0) throw std::invalid_argument("classical_tail: jump must lie in (0, 3]");
  SequenceFamily f;
  f.name = "classical_tail";
  f.generator = [=](int n) {
    if (n < 1) throw std::invalid_argument("classical_tail: n must be positive");
    const double eps = 1.0 / n;
    const double q = std::exp(-jump * n) / n;
    std::vector<double> p(d, eps / static_cast<double>(d - 1));
    std::vector<double> s(d, q);
    p[0] = 1.0 - eps;
    s[0] = 1.0 - static_cast<double>(d - 1) * q;
    return SequencePoint{PositiveOperator::diagonal(std::span<const double>(p)),
                         PositiveOperator::diagonal(std::span<const double>(s)), channels::identity(Dims{d})};
  };
  std::vector<double> ground(d, 0.0);
  ground[0] = 1.0;
  const auto g = PositiveOperator::diagonal(std::span<const double>(ground));
  f.limit = SequencePoint{g, g, channels::identity(Dims{d})};
  f.analytic_jump = jump;
  return f;
}

/// Full-rank states and a channel, all converging geometrically:
/// x_n = (1 - r^n) x_0 + r^n x', channels mixed the same way. rate = 0 gives
/// the constant family.
inline SequenceFamily channel_drift(std::size_t d, std::uint64_t seed, double rate = std::exp(-1.0)) {
  if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("channel_drift: rate must lie in [0, 1)");
  Rng rng(seed);
  const auto rho0 = random_state(rng, d);
  const auto sigma0 = random_state(rng, d);
  const auto rho1 = random_state(rng, d);
  const auto sigma1 = random_state(rng, d);
  const auto phi0 = random_channel(rng, d, d, 2);
  const auto phi1 = random_channel(rng, d, d, 2);
  SequenceFamily f;
  f.name = rate == 0.0 ? "channel_drift/constant" : "channel_drift";
  f.generator = [=](int n) {
    const double e = rate == 0.0 ? 0.0 : std::pow(rate, n);
    return SequencePoint{(1.0 - e) * rho0 + e * rho1, (1.0 - e) * sigma0 + e * sigma1,
                         channels::mixture(1.0 - e, phi0, phi1)};
  };
  f.limit = SequencePoint{rho0, sigma0, phi0};
  return f;
}

enum class CompressionMode { to_identity, remark3 };

/// Fixed (rho, sigma) and compressions Phi_n = A_n (.) A_n^dag.
///
/// to_identity: A_n = I - e^{-n} B with B diagonal, entries in [0, 1], so
/// ||A_n|| <= 1 and A_n -> I. remark3: sigma vanishes on the last level
/// while rho has full rank, and A_n projects onto levels n..d-1, reaching
/// zero at n = d.
inline SequenceFamily contraction_compress(CompressionMode mode, std::size_t d, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("contraction_compress: dimension must be at least 2");
  Rng rng(seed);
  const auto n_d = static_cast<Eigen::Index>(d);
  SequenceFamily f;
  if (mode == CompressionMode::to_identity) {
    const auto rho = random_state(rng, d);
    const auto sigma = random_state(rng, d);
    RealVector b(n_d);
    for (Eigen::Index i = 0; i < n_d; ++i) b(i) = rng.uniform();
    f.name = "contraction_compress/to_identity";
    f.generator = [=](int n) {
      const double e = std::exp(-static_cast<double>(n));
      Matrix a = Matrix::Identity(n_d, n_d);
      for (Eigen::Index i = 0; i < n_d; ++i) a(i, i) -= e * b(i);
      return SequencePoint{rho, sigma, channels::compression(a, Dims{d})};
    };
    f.limit = SequencePoint{rho, sigma, channels::identity(Dims{d})};
    return f;
  }
  auto w = random_weights(rng, d);
  auto v = random_weights(rng, d - 1);
  v.push_back(0.0);
  const auto rho = PositiveOperator::diagonal(std::span<const double>(w));
  const auto sigma = PositiveOperator::diagonal(std::span<const double>(v));
  f.name = "contraction_compress/remark3";
  f.generator = [=](int n) {
    Matrix a = Matrix::Zero(n_d, n_d);
    for (Eigen::Index i = std::max<Eigen::Index>(n, 0); i < n_d; ++i) a(i, i) = 1.0;
    return SequencePoint{rho, sigma, channels::compression(a, Dims{d})};
  };
  f.limit = SequencePoint{rho, sigma, channels::compression(Matrix::Zero(n_d, n_d), Dims{d})};
  return f;
}

struct GibbsDriftParams {
  double beta = std::log(2.0);  // inverse temperature of the input Gibbs state
  double beta_prime0 = 1.0;     // limit inverse temperature of the output
  double mix = 0.5;             // weight t of the replacer part
  double rate = std::exp(-1.0); // beta'_n = beta'_0 + rate^n
  double twist = 0.0;           // rotation angle applied after the channel; nonzero breaks Gibbs outputs
  bool converging_input = true; // rho_n -> gamma with a geometric excited-state admixture, else constant
};

/// Thermal populations (1 - x, x) of H = diag(0, 1) at inverse temperature b.
inline double qubit_excited_population(double b) { return 1.0 / (1.0 + std::exp(b)); }

/// Qubit with H_A = H_B = diag(0, 1) and Phi_n = (1 - t) id + t Tr(.) tau_n,
/// tau_n diagonal and chosen so that Phi_n(gamma_beta) = gamma_{beta'_n}.
inline SequenceFamily gibbs_drift(const GibbsDriftParams& p = {}) {
  require_positive_beta(p.beta);
  require_positive_beta(p.beta_prime0);
  if (!(p.mix > 0.0 && p.mix <= 1.0)) throw std::invalid_argument("gibbs_drift: mix must lie in (0, 1]");
  if (!(p.rate >= 0.0 && p.rate < 1.0)) throw std::invalid_argument("gibbs_drift: rate must lie in [0, 1)");
  const double x_in = qubit_excited_population(p.beta);
  const auto gamma = PositiveOperator::diagonal({1.0 - x_in, x_in});
  Matrix rot(2, 2);
  rot << std::cos(p.twist), -std::sin(p.twist), std::sin(p.twist), std::cos(p.twist);

  auto channel_for = [=](double beta_prime) {
    const double g = (qubit_excited_population(beta_prime) - (1.0 - p.mix) * x_in) / p.mix;
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("gibbs_drift: parameters give no valid replacer state");
    const auto tau = PositiveOperator::diagonal({1.0 - g, g});
    auto phi = channels::mixture(1.0 - p.mix, channels::identity(Dims{2}), channels::replacer(tau, Dims{2}));
    if (p.twist != 0.0) phi = channels::compose(phi, channels::unitary(rot));
    return phi;
  };
  auto input_at = [=](double e) {
    return (1.0 - e) * gamma + e * PositiveOperator::diagonal({0.0, 1.0});
  };

  SequenceFamily f;
  f.name = p.twist != 0.0 ? "gibbs_drift/twisted" : "gibbs_drift";
  f.generator = [=](int n) {
    const double e = p.rate == 0.0 ? 0.0 : std::pow(p.rate, n);
    return SequencePoint{p.converging_input ? input_at(e) : gamma, gamma, channel_for(p.beta_prime0 + e)};
  };
  f.limit = SequencePoint{gamma, gamma, channel_for(p.beta_prime0)};
  return f;
}

}  // namespace families

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Jump of D along the family versus the jump of D after a channel: the
/// fixed `phi` when given, otherwise the family's own Phi_n.
struct JumpContractionResult {
  JumpEstimate input;
  JumpEstimate output;
  double tolerance = 1e-6;
  bool pass = false;
};

inline JumpContractionResult jump_contraction_experiment(const SequenceFamily& family,
                                                         const QuantumOperation* phi = nullptr,
                                                         int n0 = kDefaultWindowStart, int n = kDefaultWindowEnd,
                                                         double tolerance = 1e-6) {
  JumpContractionResult r;
  r.tolerance = tolerance;
  r.input = dj_estimate(family, Functional::relative_entropy, n0, n);
  if (phi) {
    auto out = [&](const SequencePoint& p) { return relative_entropy((*phi)(p.rho), (*phi)(p.sigma)); };
    r.output = dj_estimate([&](int k) { return out(family.at(k)); }, out(family.limit_point()), n0, n);
  } else {
    r.output = dj_estimate(family, Functional::output_relative_entropy, n0, n);
  }
  r.pass = residual_of(Relation::at_most, r.output.dj_hat, r.input.dj_hat) <= tolerance;
  return r;
}

/// min over the window of Delta_{Phi_n}(rho_n, sigma_n) against the value
/// at the limit. Out-of-domain points are counted and left out.
struct LscResult {
  ExtendedReal delta_limit;
  ExtendedReal min_delta;
  int argmin = 0;
  int n0 = 0;
  int n = 0;
  int out_of_domain = 0;
  double tolerance = 1e-6;
  bool pass = false;
};

inline LscResult lsc_experiment(const SequenceFamily& family, int n0 = kDefaultWindowStart,
                                int n = kDefaultWindowEnd, double tolerance = 1e-6) {
  check_window(n0, n);
  const auto& l = family.limit_point();
  const auto d0 = delta(l.phi, l.rho, l.sigma);
  if (d0.out_of_domain()) throw std::domain_error(family.name + ": disturbance at the limit is undefined");
  LscResult r;
  r.delta_limit = *d0.delta;
  r.n0 = n0;
  r.n = n;
  r.tolerance = tolerance;
  bool any = false;
  for (int k = n0; k <= n; ++k) {
    const auto p = family.at(k);
    const auto d = delta(p.phi, p.rho, p.sigma);
    if (d.out_of_domain()) {
      ++r.out_of_domain;
      continue;
    }
    if (!any || *d.delta < r.min_delta) {
      r.min_delta = *d.delta;
      r.argmin = k;
      any = true;
    }
  }
  if (!any) throw std::domain_error(family.name + ": no point of the window lies in the domain");
  // min_delta >= delta_limit - tolerance, i.e. delta_limit <= min_delta + tolerance.
  r.pass = residual_of(Relation::at_most, r.delta_limit, r.min_delta) <= tolerance;
  return r;
}

/// For compression families converging to the identity: the largest
/// |D(A_n rho A_n||A_n sigma A_n) - D(rho||sigma)| over window points with
/// ||A_n - I|| below `norm_gate`.
struct CompressionResult {
  ExtendedReal d_limit;
  double max_deviation = 0.0;
  int first_gated = 0;
  int gated_points = 0;
  double tolerance = 1e-6;
  bool pass = false;
};

inline CompressionResult compression_probe(const SequenceFamily& family, int n0 = 1, int n = 60,
                                           double norm_gate = 1e-8, double tolerance = 1e-6) {
  check_window(n0, n);
  const auto& l = family.limit_point();
  CompressionResult r;
  r.d_limit = relative_entropy(l.phi(l.rho), l.phi(l.sigma));
  r.tolerance = tolerance;
  for (int k = n0; k <= n; ++k) {
    const auto p = family.at(k);
    if (p.phi.kraus_count() != 1) throw std::invalid_argument("compression_probe: family is not a compression");
    const Matrix& a = p.phi.kraus().front();
    const double dist = Eigen::JacobiSVD<Matrix>(a - Matrix::Identity(a.rows(), a.cols())).singularValues()(0);
    if (dist >= norm_gate) continue;
    if (r.gated_points++ == 0) r.first_gated = k;
    const auto v = relative_entropy(p.phi(p.rho), p.phi(p.sigma));
    const auto dev = residual_of(Relation::equal, v, r.d_limit);
    r.max_deviation = std::max(r.max_deviation, dev.is_infinite() ? INFINITY : dev.value());
  }
  r.pass = r.gated_points > 0 && r.max_deviation < tolerance;
  return r;
}

/// D(A_n rho A_n||A_n sigma A_n) for n = 0..d+extra on the remark3 family.
/// Expected: +inf while the last level survives (n < d), exactly 0 after.
struct Remark3Result {
  std::vector<ExtendedReal> values;
  std::size_t d = 0;
  bool pass = false;
};

inline Remark3Result remark3_scan(std::size_t d, std::uint64_t seed, int extra = 3) {
  const auto f = families::contraction_compress(families::CompressionMode::remark3, d, seed);
  Remark3Result r;
  r.d = d;
  r.pass = relative_entropy(f.limit_point().rho, f.limit_point().sigma).is_infinite();
  for (int n = 0; n < static_cast<int>(d) + extra; ++n) {
    const auto p = f.at(n);
    const auto v = relative_entropy(p.phi(p.rho), p.phi(p.sigma));
    r.values.push_back(v);
    const bool expected = n < static_cast<int>(d) ? v.is_infinite() : (v.is_finite() && v.value() == 0.0);
    r.pass = r.pass && expected;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gibbs and energy probes
// ---------------------------------------------------------------------------

/// beta' from a least-squares fit of ln <e_i|out|e_i> against -beta' h_i + c
/// in the eigenbasis of H, weighted by the populations so that levels
/// carrying negligible mass do not dominate, and the trace distance of
/// `out` from the fitted Gibbs state.
struct GibbsFit {
  double beta_prime = 0.0;
  double residual = INFINITY;
  bool compatible = false;
};

inline constexpr double kGibbsFitGate = 1e-6;

inline GibbsFit fit_gibbs(const PositiveOperator& out, const EnergyObservable& h, double gate = kGibbsFitGate) {
  if (out.dims() != h.dims()) throw std::invalid_argument("fit_gibbs: dims mismatch");
  const auto& s = h.spectrum();
  const Eigen::Index n = s.values.size();
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pop = (s.vectors.col(i).adjoint() * out.matrix() * s.vectors.col(i))(0, 0).real();
    if (!(pop > 0.0)) return {};
    const double x = s.values(i);
    const double y = std::log(pop);
    sw += pop;
    sx += pop * x;
    sy += pop * y;
    sxx += pop * x * x;
    sxy += pop * x * y;
  }
  const double var = sxx - sx * sx / sw;
  if (!(var > 0.0)) throw std::invalid_argument("fit_gibbs: H has a single energy level");
  GibbsFit g;
  g.beta_prime = -(sxy - sx * sy / sw) / var;
  if (!(g.beta_prime > 0.0)) return g;
  g.residual = trace_distance(out, gibbs_state(h, g.beta_prime));
  g.compatible = g.residual <= gate;
  return g;
}

/// Mean photon number of the thermal state with inverse temperature beta.
inline double thermal_photon_number(double beta) { return 1.0 / std::expm1(beta); }
inline double thermal_beta(double photons) { return std::log1p(1.0 / photons); }

/// Thermal state with mean photon number N on Fock levels 0..cutoff-1.
inline PositiveOperator thermal_state(double photons, std::size_t cutoff) {
  return gibbs_state(number_operator(cutoff), thermal_beta(photons));
}

struct AttenuatorThermalResult {
  double photons_in = 0.0;
  double photons_out = 0.0;
  double expected = 0.0;  // k^2 N
  GibbsFit fit;           // output against thermal states
  double fitted_photons = 0.0;
};

inline AttenuatorThermalResult attenuator_thermal_check(double k, std::size_t cutoff, double photons) {
  const auto h = number_operator(cutoff);
  const auto phi = channels::truncated_attenuator(k, cutoff);
  const auto in = thermal_state(photons, cutoff);
  const auto out = phi(in);
  AttenuatorThermalResult r;
  r.photons_in = mean_energy(h, in).value();
  r.photons_out = mean_energy(h, out).value();
  r.expected = k * k * photons;
  r.fit = fit_gibbs(out, h);
  r.fitted_photons = r.fit.beta_prime > 0.0 ? thermal_photon_number(r.fit.beta_prime) : INFINITY;
  return r;
}

/// Largest output energy over deterministic and seeded sample states with
/// input energy at most `energy_cap`, for a channel checked to map
/// gamma_{H_A,beta} to a Gibbs state of H_B.
struct EnergyLimitedResult {
  double energy_cap = 0.0;
  double sup_output_energy = 0.0;
  double max_input_energy = 0.0;
  std::size_t samples = 0;
  GibbsFit fit;
  std::optional<double> linear_bound;  // ratio * energy_cap when a ratio is declared
  bool pass = false;
};

inline std::vector<PositiveOperator> energy_constrained_samples(const EnergyObservable& h, double cap,
                                                                 std::uint64_t seed, std::size_t random_count) {
  const std::size_t d = h.op().dim();
  const auto& s = h.spectrum();
  std::vector<PositiveOperator> out;
  // Eigenstates within the cap.
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (s.values(i) <= cap) out.push_back(PositiveOperator::pure(s.vectors.col(i), h.dims()));
  // Gibbs states within the cap, on a grid of temperatures.
  for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto g = gibbs_state(h, beta);
    if (mean_energy(h, g).value() <= cap) out.push_back(g);
  }
  // Random states, mixed with the ground state until the cap holds.
  Rng rng(seed);
  const auto ground = PositiveOperator::pure(s.vectors.col(0), h.dims());
  const std::size_t low = std::min<std::size_t>(d, 6);
  for (std::size_t k = 0; k < random_count; ++k) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto r = random_state(rng, low);
    const Matrix basis = s.vectors.leftCols(static_cast<Eigen::Index>(low));
    m = basis * r.matrix() * basis.adjoint();
    PositiveOperator x(HermitianOperator(h.dims(), m), PositiveOperator::Trusted{});
    const double e = mean_energy(h, x).value();
    const double e0 = s.min();
    if (e > cap) {
      const double lam = (cap - e0) / (e - e0);
      x = lam * x + (1.0 - lam) * ground;
    }
    out.push_back(x);
  }
  return out;
}

inline EnergyLimitedResult energy_limited_probe(const QuantumOperation& phi, const EnergyObservable& ha,
                                                const EnergyObservable& hb, double beta, double energy_cap,
                                                std::uint64_t seed, std::size_t random_count = 32,
                                                std::optional<double> ratio = std::nullopt,
                                                double slack = 1e-3) {
  EnergyLimitedResult r;
  r.energy_cap = energy_cap;
  r.fit = fit_gibbs(phi(gibbs_state(ha, beta)), hb);
  const auto samples = energy_constrained_samples(ha, energy_cap, seed, random_count);
  r.samples = samples.size();
  for (const auto& x : samples) {
    r.max_input_energy = std::max(r.max_input_energy, mean_energy(ha, x).value());
    r.sup_output_energy = std::max(r.sup_output_energy, mean_energy(hb, phi(x)).value());
  }
  if (ratio) r.linear_bound = *ratio * energy_cap;
  r.pass = r.fit.compatible && std::isfinite(r.sup_output_energy) && r.max_input_energy <= energy_cap + 1e-12 &&
           (!r.linear_bound || r.sup_output_energy <= *r.linear_bound + slack);
  return r;
}

/// dj of E_B(Phi_n(rho_n)) against (beta / beta'_0) dj of E_A(rho_n) on a
/// family whose channels map gamma_{H_A,beta} to Gibbs states of H_B.
struct HCaseResult {
  JumpEstimate output_energy;
  JumpEstimate input_energy;
  double beta = 0.0;
  double beta_prime0 = 0.0;
  ExtendedReal lhs;
  ExtendedReal rhs;
  double worst_fit_residual = 0.0;
  bool compatible = false;
  double tolerance = 1e-6;
  bool pass = false;
};

inline HCaseResult h_case_jump_probe(const SequenceFamily& family, const EnergyObservable& ha,
                                     const EnergyObservable& hb, double beta, int n0 = kDefaultWindowStart,
                                     int n = kDefaultWindowEnd, double tolerance = 1e-6) {
  check_window(n0, n);
  HCaseResult r;
  r.beta = beta;
  r.tolerance = tolerance;
  const auto gamma = gibbs_state(ha, beta);
  const auto& l = family.limit_point();
  const auto fit0 = fit_gibbs(l.phi(gamma), hb);
  r.beta_prime0 = fit0.beta_prime;
  r.compatible = fit0.compatible;
  r.worst_fit_residual = fit0.residual;
  for (int k = n0; k <= n; ++k) {
    const auto fit = fit_gibbs(family.at(k).phi(gamma), hb);
    r.compatible = r.compatible && fit.compatible;
    r.worst_fit_residual = std::max(r.worst_fit_residual, fit.residual);
  }
  auto e_out = [&](const SequencePoint& p) { return mean_energy(hb, p.phi(p.rho)); };
  auto e_in = [&](const SequencePoint& p) { return mean_energy(ha, p.rho); };
  r.output_energy = dj_estimate([&](int k) { return e_out(family.at(k)); }, e_out(l), n0, n);
  r.input_energy = dj_estimate([&](int k) { return e_in(family.at(k)); }, e_in(l), n0, n);
  r.lhs = r.output_energy.dj_hat;
  if (r.compatible) {
    r.rhs = (beta / r.beta_prime0) * r.input_energy.dj_hat;
    r.pass = residual_of(Relation::at_most, r.lhs, r.rhs) <= tolerance;
  } else {
    r.rhs = 0.0;
    r.pass = false;
  }
  return r;
}

/// Samples t -> E(Phi_t rho), S(Phi_t rho), D(Phi_t rho||gamma_{beta'_t})
/// for the attenuator semigroup k_t = e^{-t/2} on [0, t_max], for each grid
/// size, and reports the largest change between adjacent grid points.
struct SemigroupResult {
  std::vector<int> grid_sizes;
  std::vector<double> max_variation;
  double slope = 0.0;             // log2 ratio of the last two variations
  double worst_fit_residual = 0.0;
  bool pass = false;
};

inline SemigroupResult semigroup_continuity_probe(std::size_t cutoff = 30, double photons = 1.0, double t_max = 2.0,
                                                  std::vector<int> grid_sizes = {10, 20, 40, 80},
                                                  std::uint64_t seed = 7) {
  if (grid_sizes.size() < 2) throw std::invalid_argument("semigroup_continuity_probe: need at least two grids");
  const auto h = number_operator(cutoff);
  const auto gamma = thermal_state(photons, cutoff);
  Rng rng(seed);
  const std::size_t low = std::min<std::size_t>(cutoff, 5);
  const auto r_low = random_state(rng, low);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(cutoff), static_cast<Eigen::Index>(cutoff));
  m.topLeftCorner(static_cast<Eigen::Index>(low), static_cast<Eigen::Index>(low)) = r_low.matrix();
  const PositiveOperator rho(HermitianOperator(Dims{cutoff}, m), PositiveOperator::Trusted{});

  SemigroupResult r;
  r.grid_sizes = grid_sizes;
  for (int g : grid_sizes) {
    if (g < 1) throw std::invalid_argument("semigroup_continuity_probe: grid sizes must be positive");
    double prev[3] = {0, 0, 0};
    double worst = 0.0;
    for (int j = 0; j <= g; ++j) {
      const double t = t_max * j / g;
      const double k = std::exp(-0.5 * t);
      const auto phi = channels::truncated_attenuator(k, cutoff);
      const auto fit = fit_gibbs(phi(gamma), h);
      r.worst_fit_residual = std::max(r.worst_fit_residual, fit.residual);
      const auto out = phi(rho);
      const double beta_t = thermal_beta(k * k * photons);
      const double cur[3] = {mean_energy(h, out).value(), von_neumann_entropy(out).value(),
                             relative_entropy(out, gibbs_state(h, beta_t)).value()};
      if (j > 0)
        for (int q = 0; q < 3; ++q) worst = std::max(worst, std::abs(cur[q] - prev[q]));
      std::copy(cur, cur + 3, prev);
    }
    r.max_variation.push_back(worst);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < r.max_variation.size(); ++i)
    decreasing = decreasing && r.max_variation[i] < r.max_variation[i - 1];
  const auto nv = r.max_variation.size();
  r.slope = std::log2(r.max_variation[nv - 2] / r.max_variation[nv - 1]);
  r.pass = decreasing && r.worst_fit_residual <= kGibbsFitGate;
  return r;
}

}  // namespace qred
