#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace soliton {

/// Query outside the region where an object is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No grim-reaper barrier exists for the requested strip width.
class WidthError : public std::runtime_error {
 public:
  WidthError(const std::string& what, double max_admissible_m)
      : std::runtime_error(what), max_m_(max_admissible_m) {}
  double max_admissible_m() const { return max_m_; }

 private:
  double max_m_;
};

/// Newton (or inner linear) solve did not converge.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }
  double last_residual() const { return history_.empty() ? 0.0 : history_.back(); }

 private:
  std::vector<double> history_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace soliton
