#pragma once

// Information measures, the binary alert sensor and the Bayes filter over the
// per-region occupancy variable S = [S_j].

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "infoplan/graph_model.hpp"

namespace infoplan {

/// Tolerance on Σp = 1 accepted by Pmf.
inline constexpr double kPmfTolerance = 1e-9;

class Pmf {
 public:
  /// Throws InvalidArgument on negative entries or |Σp - 1| > kPmfTolerance.
  explicit Pmf(std::vector<double> probabilities);
  static Pmf uniform(std::size_t outcomes);
  static Pmf point_mass(std::size_t outcomes, std::size_t at);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probabilities() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// Joint pmf of (X, Y), row-major: value(x, y) = values[x * ny + y].
class JointPmf {
 public:
  JointPmf(std::size_t nx, std::size_t ny, std::vector<double> values);

  std::size_t x_size() const noexcept { return nx_; }
  std::size_t y_size() const noexcept { return ny_; }
  double operator()(std::size_t x, std::size_t y) const { return pmf_[x * ny_ + y]; }
  Pmf marginal_x() const;
  Pmf marginal_y() const;

 private:
  std::size_t nx_;
  std::size_t ny_;
  Pmf pmf_;
};

/// Shannon entropy in bits; 0 log 0 = 0.
double entropy(const Pmf& p);
double binary_entropy(double p);
/// H(X | Y) in bits.
double conditional_entropy(const JointPmf& joint);
/// I(X; Y) in bits, from the log-ratio definition.
double mutual_information(const JointPmf& joint);

/// Binary alert sensor with range-decayed detection and a constant false
/// alarm rate. neighborhoods[q] is N_o(q) with the d_M distances.
struct SensorModel {
  double peak_detection = 0.9;  // mu0
  double decay = 0.01;          // lambda, per unit of d_M
  double false_alarm = 0.01;    // r
  std::vector<std::vector<ObservationLink>> neighborhoods;

  static SensorModel from_transition_system(const TransitionSystem& ts, double peak_detection,
                                            double decay, double false_alarm);

  std::size_t region_count() const noexcept { return neighborhoods.size(); }
  /// mu(q, q_j) = mu0 * exp(-lambda * d_M(q, q_j)).
  double detection(double distance) const;
  void validate() const;
};

/// f(y, s, q) for a full occupancy vector (one byte per region, 0 or 1).
double alert_likelihood(const SensorModel& model, std::span<const std::uint8_t> occupied, Region q,
                        bool report);
/// Same, with the occupancy vector packed into the bits of `outcome`.
double alert_likelihood(const SensorModel& model, std::uint64_t outcome, Region q, bool report);

/// Posterior over S. Joint keeps the exact pmf over all 2^n outcomes (bit j
/// of the outcome index is S_j); Factored keeps independent per-cell
/// marginals Pr(S_j = 1).
class Belief {
 public:
  enum class Mode { Joint, Factored };
  static constexpr std::size_t kDefaultJointCap = 12;
  /// Factored marginals are kept inside [kClamp, 1 - kClamp] after updates.
  static constexpr double kClamp = 1e-12;

  static Belief factored(std::vector<double> marginals);
  static Belief uniform(std::size_t cells, double marginal = 0.5);
  static Belief joint(std::size_t cells, Pmf pmf, std::size_t cap = kDefaultJointCap);
  /// Product-form joint pmf with the given marginals.
  static Belief joint_from_marginals(std::span<const double> marginals,
                                     std::size_t cap = kDefaultJointCap);

  Mode mode() const noexcept;
  std::size_t cell_count() const noexcept { return cells_; }
  /// Pr(S_j = 1) in either mode.
  double marginal(std::size_t cell) const;
  std::vector<double> marginals() const;
  /// Joint mode only.
  const Pmf& joint_pmf() const;

  /// In-place Bayes update with report y taken at q. Throws
  /// InconsistentReport when the report has zero probability.
  void observe(const SensorModel& model, Region q, bool report);

 private:
  struct Joint {
    Pmf pmf;
  };
  struct Factored {
    std::vector<double> m;
  };
  Belief(std::size_t cells, std::variant<Joint, Factored> state)
      : cells_(cells), state_(std::move(state)) {}

  std::size_t cells_;
  std::variant<Joint, Factored> state_;
};

Belief bayes_update(const Belief& belief, const SensorModel& model, Region q, bool report);
double belief_entropy(const Belief& belief);
/// Pmf over {0, 1}: index 1 is Pr(alert at q) under the belief.
Pmf predictive_report_pmf(const Belief& belief, const SensorModel& model, Region q);
/// Pr(alert at q) under the belief (the index-1 entry above, without
/// constructing a Pmf).
double alert_probability(const Belief& belief, const SensorModel& model, Region q);

}  // namespace infoplan
