#include "infoplan/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infoplan/error.hpp"

namespace infoplan {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

Pmf::Pmf(std::vector<double> probabilities) : p_(std::move(probabilities)) {
  if (p_.empty()) throw Error(ErrorCode::InvalidArgument, "pmf over an empty outcome space");
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pmf entries must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > kPmfTolerance) {
    throw Error(ErrorCode::InvalidArgument, "pmf sums to " + std::to_string(total));
  }
}

Pmf Pmf::uniform(std::size_t outcomes) {
  return Pmf(std::vector<double>(outcomes, 1.0 / static_cast<double>(outcomes)));
}

Pmf Pmf::point_mass(std::size_t outcomes, std::size_t at) {
  std::vector<double> p(outcomes, 0.0);
  p.at(at) = 1.0;
  return Pmf(std::move(p));
}

JointPmf::JointPmf(std::size_t nx, std::size_t ny, std::vector<double> values)
    : nx_(nx), ny_(ny), pmf_(std::move(values)) {
  if (pmf_.size() != nx * ny) throw Error(ErrorCode::InvalidArgument, "joint pmf shape mismatch");
}

Pmf JointPmf::marginal_x() const {
  std::vector<double> m(nx_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x) {
    for (std::size_t y = 0; y < ny_; ++y) m[x] += (*this)(x, y);
  }
  return Pmf(std::move(m));
}

Pmf JointPmf::marginal_y() const {
  std::vector<double> m(ny_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x) {
    for (std::size_t y = 0; y < ny_; ++y) m[y] += (*this)(x, y);
  }
  return Pmf(std::move(m));
}

double entropy(const Pmf& p) {
  double h = 0.0;
  for (double v : p.probabilities()) h -= plogp(v);
  return std::max(h, 0.0);
}

double binary_entropy(double p) { return std::max(-plogp(p) - plogp(1.0 - p), 0.0); }

double conditional_entropy(const JointPmf& joint) {
  const Pmf py = joint.marginal_y();
  double h = 0.0;
  for (std::size_t x = 0; x < joint.x_size(); ++x) {
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
      const double pxy = joint(x, y);
      if (pxy > 0.0) h -= pxy * std::log2(pxy / py[y]);
    }
  }
  return std::max(h, 0.0);
}

double mutual_information(const JointPmf& joint) {
  const Pmf px = joint.marginal_x();
  const Pmf py = joint.marginal_y();
  double i = 0.0;
  for (std::size_t x = 0; x < joint.x_size(); ++x) {
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
      const double pxy = joint(x, y);
      if (pxy > 0.0) i += pxy * std::log2(pxy / (px[x] * py[y]));
    }
  }
  return std::max(i, 0.0);
}

// ---------------------------------------------------------------------------
// Sensor

SensorModel SensorModel::from_transition_system(const TransitionSystem& ts, double peak_detection,
                                                double decay, double false_alarm) {
  SensorModel m;
  m.peak_detection = peak_detection;
  m.decay = decay;
  m.false_alarm = false_alarm;
  m.neighborhoods.reserve(ts.region_count());
  for (Region q = 0; q < ts.region_count(); ++q) {
    m.neighborhoods.push_back(ts.observation_neighborhood(q));
  }
  m.validate();
  return m;
}

double SensorModel::detection(double distance) const {
  return peak_detection * std::exp(-decay * distance);
}

void SensorModel::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(peak_detection) || !unit(false_alarm)) {
    throw Error(ErrorCode::InvalidArgument, "detection and false-alarm rates must lie in [0, 1]");
  }
  if (!(decay >= 0.0)) throw Error(ErrorCode::InvalidArgument, "decay rate must be >= 0");
  for (Region q = 0; q < neighborhoods.size(); ++q) {
    const auto& n = neighborhoods[q];
    const bool has_self = std::any_of(n.begin(), n.end(), [&](const ObservationLink& l) {
      return l.region == q && l.distance == 0.0;
    });
    if (!has_self) {
      throw Error(ErrorCode::InvalidArgument,
                  "observation neighborhood of region " + std::to_string(q) + " lacks itself");
    }
    for (const auto& l : n) {
      if (l.region >= neighborhoods.size()) {
        throw Error(ErrorCode::InvalidArgument, "observation link to an unknown region");
      }
    }
  }
}

namespace {

template <typename Occupied>
double alarm_probability(const SensorModel& model, Region q, Occupied&& occupied) {
  const auto& links = model.neighborhoods.at(q);
  bool any = false;
  double miss = 1.0;
  for (const auto& l : links) {
    if (!occupied(l.region)) continue;
    any = true;
    miss *= 1.0 - model.detection(l.distance);
  }
  return any ? 1.0 - miss : model.false_alarm;
}

}  // namespace

double alert_likelihood(const SensorModel& model, std::span<const std::uint8_t> occupied, Region q,
                        bool report) {
  if (occupied.size() != model.region_count()) {
    throw Error(ErrorCode::InvalidArgument, "occupancy vector does not cover every region");
  }
  const double p1 = alarm_probability(model, q, [&](Region j) { return occupied[j] != 0; });
  return report ? p1 : 1.0 - p1;
}

double alert_likelihood(const SensorModel& model, std::uint64_t outcome, Region q, bool report) {
  const double p1 = alarm_probability(model, q, [&](Region j) { return (outcome >> j) & 1u; });
  return report ? p1 : 1.0 - p1;
}

// ---------------------------------------------------------------------------
// Belief

Belief Belief::factored(std::vector<double> marginals) {
  for (double m : marginals) {
    if (!(m >= 0.0 && m <= 1.0)) throw Error(ErrorCode::InvalidArgument, "marginal outside [0, 1]");
  }
  const std::size_t n = marginals.size();
  return Belief(n, Factored{std::move(marginals)});
}

Belief Belief::uniform(std::size_t cells, double marginal) {
  return factored(std::vector<double>(cells, marginal));
}

Belief Belief::joint(std::size_t cells, Pmf pmf, std::size_t cap) {
  if (cells > cap || cells >= 63) {
    throw Error(ErrorCode::InvalidArgument,
                "joint belief over " + std::to_string(cells) + " cells exceeds the cap of " +
                    std::to_string(cap));
  }
  if (pmf.size() != (std::size_t{1} << cells)) {
    throw Error(ErrorCode::InvalidArgument, "joint pmf must have 2^cells outcomes");
  }
  return Belief(cells, Joint{std::move(pmf)});
}

Belief Belief::joint_from_marginals(std::span<const double> marginals, std::size_t cap) {
  const std::size_t n = marginals.size();
  if (n > cap || n >= 63) {
    throw Error(ErrorCode::InvalidArgument, "joint belief exceeds the cell cap");
  }
  std::vector<double> p(std::size_t{1} << n, 1.0);
  for (std::size_t o = 0; o < p.size(); ++o) {
    for (std::size_t j = 0; j < n; ++j) p[o] *= ((o >> j) & 1u) ? marginals[j] : 1.0 - marginals[j];
  }
  return joint(n, Pmf(std::move(p)), cap);
}

Belief::Mode Belief::mode() const noexcept {
  return std::holds_alternative<Joint>(state_) ? Mode::Joint : Mode::Factored;
}

double Belief::marginal(std::size_t cell) const {
  if (cell >= cells_) throw Error(ErrorCode::InvalidArgument, "cell out of range");
  if (const auto* f = std::get_if<Factored>(&state_)) return f->m[cell];
  const auto& p = std::get<Joint>(state_).pmf;
  double total = 0.0;
  for (std::size_t o = 0; o < p.size(); ++o) {
    if ((o >> cell) & 1u) total += p[o];
  }
  return total;
}

std::vector<double> Belief::marginals() const {
  if (const auto* f = std::get_if<Factored>(&state_)) return f->m;
  std::vector<double> out(cells_);
  for (std::size_t j = 0; j < cells_; ++j) out[j] = marginal(j);
  return out;
}

const Pmf& Belief::joint_pmf() const {
  if (const auto* j = std::get_if<Joint>(&state_)) return j->pmf;
  throw Error(ErrorCode::InvalidArgument, "belief is factored; no joint pmf");
}

void Belief::observe(const SensorModel& model, Region q, bool report) {
  if (q >= model.region_count() || model.region_count() != cells_) {
    throw Error(ErrorCode::InvalidArgument, "sensor model does not match the belief");
  }
  if (auto* joint = std::get_if<Joint>(&state_)) {
    const auto prior = joint->pmf.probabilities();
    std::vector<double> post(prior.size());
    double total = 0.0;
    for (std::size_t o = 0; o < prior.size(); ++o) {
      post[o] = alert_likelihood(model, static_cast<std::uint64_t>(o), q, report) * prior[o];
      total += post[o];
    }
    if (!(total > 0.0)) throw Error(ErrorCode::InconsistentReport, "inconsistent report");
    for (double& v : post) v /= total;
    joint->pmf = Pmf(std::move(post));
    return;
  }

  // Factored: exact posterior marginal of each observed cell under the
  // current independent marginals, followed by the independence projection.
  auto& m = std::get<Factored>(state_).m;
  const auto& links = model.neighborhoods[q];
  const double r = model.false_alarm;
  std::vector<double> updated(links.size());
  for (std::size_t a = 0; a < links.size(); ++a) {
    double miss_others = 1.0;  // Π_{i≠j} (1 - mu_i m_i)
    double empty_others = 1.0;  // Π_{i≠j} (1 - m_i)
    for (std::size_t b = 0; b < links.size(); ++b) {
      if (a == b) continue;
      const double mi = m[links[b].region];
      miss_others *= 1.0 - model.detection(links[b].distance) * mi;
      empty_others *= 1.0 - mi;
    }
    const double mj = m[links[a].region];
    const double mu = model.detection(links[a].distance);
    const double alarm_if_occupied = 1.0 - (1.0 - mu) * miss_others;
    const double alarm_if_empty = 1.0 - miss_others + r * empty_others;
    const double like1 = report ? alarm_if_occupied : 1.0 - alarm_if_occupied;
    const double like0 = report ? alarm_if_empty : 1.0 - alarm_if_empty;
    const double evidence = mj * like1 + (1.0 - mj) * like0;
    if (!(evidence > 0.0)) throw Error(ErrorCode::InconsistentReport, "inconsistent report");
    updated[a] = std::clamp(mj * like1 / evidence, kClamp, 1.0 - kClamp);
  }
  for (std::size_t a = 0; a < links.size(); ++a) m[links[a].region] = updated[a];
}

Belief bayes_update(const Belief& belief, const SensorModel& model, Region q, bool report) {
  Belief next = belief;
  next.observe(model, q, report);
  return next;
}

double belief_entropy(const Belief& belief) {
  if (belief.mode() == Belief::Mode::Joint) return entropy(belief.joint_pmf());
  double h = 0.0;
  for (double m : belief.marginals()) h += binary_entropy(m);
  return h;
}

double alert_probability(const Belief& belief, const SensorModel& model, Region q) {
  if (q >= model.region_count()) throw Error(ErrorCode::InvalidArgument, "region out of range");
  if (belief.mode() == Belief::Mode::Joint) {
    const auto p = belief.joint_pmf().probabilities();
    double total = 0.0;
    for (std::size_t o = 0; o < p.size(); ++o) {
      if (p[o] > 0.0) total += alert_likelihood(model, static_cast<std::uint64_t>(o), q, true) * p[o];
    }
    return std::clamp(total, 0.0, 1.0);
  }
  // E[f(1, S, q)] under independent marginals:
  // 1 - Π(1 - mu_i m_i) + r Π(1 - m_i).
  double miss = 1.0;
  double empty = 1.0;
  for (const auto& l : model.neighborhoods[q]) {
    const double mi = belief.marginal(l.region);
    miss *= 1.0 - model.detection(l.distance) * mi;
    empty *= 1.0 - mi;
  }
  return std::clamp(1.0 - miss + model.false_alarm * empty, 0.0, 1.0);
}

Pmf predictive_report_pmf(const Belief& belief, const SensorModel& model, Region q) {
  const double p1 = alert_probability(belief, model, q);
  return Pmf({1.0 - p1, p1});
}

}  // namespace infoplan
