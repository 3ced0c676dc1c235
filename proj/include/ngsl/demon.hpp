#ifndef NGSL_DEMON_HPP
#define NGSL_DEMON_HPP

// Measurement-feedback engines (the Szilard family) evaluated by exhaustive
// enumeration of the (true state, outcome) table. The information-aware
// second law reads
//
//   dS - dI >= 0
//
// with dS the total entropy production of the feedback cycle (bath plus
// system, in nats) and dI = -I(X;Y) the mutual information consumed by the
// feedback. Extracting more than T * I(X;Y) of work is a violation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ngsl/error.hpp"

namespace ngsl::demon {

inline constexpr std::size_t max_states = 8;
inline constexpr double normalization_tol = 1e-12;

/// Dense row-major probability table p(x, y).
class JointTable {
 public:
  JointTable() = default;
  JointTable(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), p_(rows * cols, 0.0) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t x, std::size_t y) { return p_[x * cols_ + y]; }
  double operator()(std::size_t x, std::size_t y) const { return p_[x * cols_ + y]; }

  [[nodiscard]] std::vector<double> row_marginal() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t x = 0; x < rows_; ++x)
      for (std::size_t y = 0; y < cols_; ++y) m[x] += (*this)(x, y);
    return m;
  }

  [[nodiscard]] std::vector<double> col_marginal() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t x = 0; x < rows_; ++x)
      for (std::size_t y = 0; y < cols_; ++y) m[y] += (*this)(x, y);
    return m;
  }

  [[nodiscard]] double total() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> p_;
};

/// Work and system-entropy tables are indexed [x * n_states + y] for true
/// state x and measurement outcome y.
struct FeedbackModel {
  std::size_t n_states = 2;
  std::vector<double> prior{0.5, 0.5};
  double error_rate = 0.0;
  double bath_temperature = 1.0;
  std::vector<double> work;
  std::vector<double> entropy_change;
  std::string label;
};

inline void validate(const FeedbackModel& m) {
  const std::size_t n = m.n_states;
  if (n < 2 || n > max_states) {
    throw Error(Errc::invalid_model, "n_states must lie in [2, 8]");
  }
  if (m.prior.size() != n) throw Error(Errc::invalid_model, "prior size must equal n_states");
  double sum = 0.0;
  for (double p : m.prior) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_model, "prior entries must lie in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > normalization_tol) {
    throw Error(Errc::invalid_model, "prior must sum to 1");
  }
  if (!(m.error_rate >= 0.0 && m.error_rate <= 0.5)) {
    throw Error(Errc::invalid_model, "error_rate must lie in [0, 0.5]");
  }
  if (!(m.bath_temperature > 0.0) || !std::isfinite(m.bath_temperature)) {
    throw Error(Errc::invalid_model, "bath_temperature must be positive");
  }
  if (m.work.size() != n * n) throw Error(Errc::invalid_model, "work table must be n_states^2");
  if (!m.entropy_change.empty() && m.entropy_change.size() != n * n) {
    throw Error(Errc::invalid_model, "entropy_change table must be empty or n_states^2");
  }
  for (double w : m.work) {
    if (std::isnan(w)) throw Error(Errc::invalid_model, "work table contains NaN");
  }
}

/// Symmetric confusion channel: correct with probability 1 - eps, otherwise
/// uniformly wrong.
inline double channel_probability(std::size_t x, std::size_t y, std::size_t n, double eps) {
  return x == y ? 1.0 - eps : eps / static_cast<double>(n - 1);
}

inline JointTable joint_distribution(const FeedbackModel& model) {
  validate(model);
  const std::size_t n = model.n_states;
  JointTable joint(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      joint(x, y) = model.prior[x] * channel_probability(x, y, n, model.error_rate);
  return joint;
}

/// Shannon entropy in nats, 0 ln 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

inline double mutual_information(const JointTable& joint) {
  double sum = 0.0;
  for (std::size_t x = 0; x < joint.rows(); ++x) {
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const double p = joint(x, y);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(Errc::invalid_distribution, "joint entries must be finite and nonnegative");
      }
      sum += p;
    }
  }
  if (joint.rows() == 0 || joint.cols() == 0 || std::abs(sum - 1.0) > normalization_tol) {
    throw Error(Errc::invalid_distribution, "joint distribution must sum to 1");
  }
  const auto px = joint.row_marginal();
  const auto py = joint.col_marginal();
  double info = 0.0;
  for (std::size_t x = 0; x < joint.rows(); ++x) {
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const double p = joint(x, y);
      if (p > 0.0) info += p * std::log(p / (px[x] * py[y]));
    }
  }
  // Rounding can leave a negative value of order 1e-17 for independent tables.
  return std::max(info, 0.0);
}

/// Mean extracted work, skipping impossible (state, outcome) pairs.
inline double mean_work(const FeedbackModel& model) {
  const JointTable joint = joint_distribution(model);
  const std::size_t n = model.n_states;
  double w = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (joint(x, y) > 0.0) w += joint(x, y) * model.work[x * n + y];
  return w;
}

/// dS = sum p(x,y) [ -w(x,y)/T + ds_sys(x,y) ], enumerated over every pair.
inline double entropy_production(const FeedbackModel& model) {
  const JointTable joint = joint_distribution(model);
  const std::size_t n = model.n_states;
  double ds = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double p = joint(x, y);
      if (p == 0.0) continue;
      const std::size_t k = x * n + y;
      const double ds_sys = model.entropy_change.empty() ? 0.0 : model.entropy_change[k];
      ds += p * (-model.work[k] / model.bath_temperature + ds_sys);
    }
  }
  return ds;
}

/// dI = -I(X;Y): the correlation used up by the feedback step.
inline double information_change(const FeedbackModel& model) {
  return -mutual_information(joint_distribution(model));
}

inline double ngsl_margin(const FeedbackModel& model) {
  return entropy_production(model) - information_change(model);
}

/// Szilard engine whose partition is set from the posterior of an assumed
/// error rate: w(x, y) = T ln(q(x|y) / prior(x)). With assumed_error equal to
/// the true error rate the extracted work reaches T I(X;Y).
inline FeedbackModel szilard_model(std::vector<double> prior, double error_rate,
                                   double bath_temperature, double assumed_error) {
  FeedbackModel m;
  m.n_states = prior.size();
  m.prior = std::move(prior);
  m.error_rate = error_rate;
  m.bath_temperature = bath_temperature;
  const std::size_t n = m.n_states;
  if (n < 2 || n > max_states) throw Error(Errc::invalid_model, "n_states must lie in [2, 8]");
  if (!(assumed_error >= 0.0 && assumed_error <= 0.5)) {
    throw Error(Errc::invalid_model, "assumed error must lie in [0, 0.5]");
  }
  m.work.assign(n * n, 0.0);
  for (std::size_t y = 0; y < n; ++y) {
    double evidence = 0.0;
    for (std::size_t x = 0; x < n; ++x) evidence += m.prior[x] * channel_probability(x, y, n, assumed_error);
    for (std::size_t x = 0; x < n; ++x) {
      const double posterior =
          evidence > 0.0 ? m.prior[x] * channel_probability(x, y, n, assumed_error) / evidence : 0.0;
      m.work[x * n + y] =
          m.prior[x] > 0.0 && posterior > 0.0
              ? bath_temperature * std::log(posterior / m.prior[x])
              : -std::numeric_limits<double>::infinity();
    }
  }
  m.label = "szilard(eps=" + std::to_string(error_rate) + ", assumed=" + std::to_string(assumed_error) + ")";
  return m;
}

/// Szilard engine with the partition tuned to the true error rate.
inline FeedbackModel optimal_szilard(double error_rate, double bath_temperature = 1.0,
                                     std::size_t n_states = 2) {
  auto m = szilard_model(std::vector<double>(n_states, 1.0 / static_cast<double>(n_states)),
                         error_rate, bath_temperature, error_rate);
  m.label = "optimal_szilard(eps=" + std::to_string(error_rate) + ")";
  return m;
}

/// Credits T ln n whenever the outcome matches and charges T ln n otherwise,
/// regardless of the error rate. Over-extracts for 0 < eps < 0.5.
inline FeedbackModel bit_credit_szilard(double error_rate, double bath_temperature = 1.0,
                                        std::size_t n_states = 2) {
  FeedbackModel m;
  m.n_states = n_states;
  m.prior.assign(n_states, 1.0 / static_cast<double>(n_states));
  m.error_rate = error_rate;
  m.bath_temperature = bath_temperature;
  const double quantum = bath_temperature * std::log(static_cast<double>(n_states));
  m.work.assign(n_states * n_states, -quantum);
  for (std::size_t x = 0; x < n_states; ++x) m.work[x * n_states + x] = quantum;
  m.label = "bit_credit_szilard(eps=" + std::to_string(error_rate) + ")";
  return m;
}

struct NgslReport {
  double min_margin = 0.0;
  std::size_t argmin = 0;
  bool pass = false;
  double tol = 0.0;
  std::vector<double> margins;
  std::vector<std::size_t> saturated;
};

inline NgslReport verify_ngsl(std::span<const FeedbackModel> grid, double tol) {
  if (grid.empty()) throw Error(Errc::invalid_model, "model grid is empty");
  NgslReport report;
  report.tol = tol;
  report.margins.reserve(grid.size());
  for (const auto& model : grid) report.margins.push_back(ngsl_margin(model));
  const auto it = std::min_element(report.margins.begin(), report.margins.end());
  report.argmin = static_cast<std::size_t>(it - report.margins.begin());
  report.min_margin = *it;
  report.pass = report.min_margin >= -tol;
  for (std::size_t i = 0; i < report.margins.size(); ++i)
    if (std::abs(report.margins[i]) <= tol) report.saturated.push_back(i);
  return report;
}

/// Error rates start, start + step, ... up to stop inclusive.
inline std::vector<double> error_rate_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw Error(Errc::invalid_model, "bad error-rate grid");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::min(stop, start + static_cast<double>(i) * step));
  return out;
}

}  // namespace ngsl::demon

#endif  // NGSL_DEMON_HPP
