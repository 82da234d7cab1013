#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sclaw {

enum class BlowupKind { guard_trip, flux_overflow, non_finite_state };

inline const char* to_string(BlowupKind kind) {
  switch (kind) {
    case BlowupKind::guard_trip: return "guard_trip";
    case BlowupKind::flux_overflow: return "flux_overflow";
    case BlowupKind::non_finite_state: return "non_finite_state";
  }
  return "unknown";
}

/// Raised when a trajectory leaves the region where it can be trusted: the
/// H1 guard radius was reached, the flux overflowed, or the state went
/// non-finite. `t` is NaN when the raising code does not know the time; the
/// stepper fills it in before rethrowing.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(BlowupKind kind, double t, double h1_norm)
      : std::runtime_error(make_message(kind, t, h1_norm)), kind_(kind), t_(t), h1_norm_(h1_norm) {}

  BlowupKind kind() const { return kind_; }
  double time() const { return t_; }
  double h1_norm() const { return h1_norm_; }

  BlowupError at_time(double t) const { return BlowupError(kind_, t, h1_norm_); }

 private:
  static std::string make_message(BlowupKind kind, double t, double h1) {
    return std::string("blowup (") + to_string(kind) + ") at t=" + std::to_string(t) +
           ", |u|_H1=" + std::to_string(h1);
  }

  BlowupKind kind_;
  double t_;
  double h1_norm_;
};

}  // namespace sclaw
