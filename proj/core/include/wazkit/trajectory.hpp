#pragma once

#include <string>
#include <vector>

#include "wazkit/types.hpp"

namespace wazkit {

/// A boundary touch without sign change: the face dipped into
/// [0, grazing_window] at a local minimum and recovered. Recorded as a
/// diagnostic, never treated as an exit.
struct GrazingEvent {
  double t = 0.0;
  std::string face;
  double min_g = 0.0;
};

/// A computed half-trajectory. Integrator-produced trajectories carry dense
/// Runge-Kutta segments and interpolate to integrator accuracy; assembled
/// witness trajectories carry samples only and interpolate linearly.
class Trajectory {
 public:
  /// One accepted step [t0, t0+h] with its stage derivatives; interpolation
  /// uses the embedded pair's quartic dense polynomial.
  struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    StateVec y0;
    std::vector<StateVec> k;  // 7 stages
  };

  void append_sample(const ExtPoint& p);
  void append_segment(DenseSegment seg);
  void add_grazing(GrazingEvent e) { grazing_.push_back(std::move(e)); }

  /// Absorb another trajectory that continues this one in time.
  void extend(const Trajectory& tail);

  bool empty() const { return samples_.empty(); }
  double t_begin() const;
  double t_end() const;
  bool has_dense() const { return !segments_.empty(); }

  const std::vector<ExtPoint>& samples() const { return samples_; }
  const std::vector<DenseSegment>& segments() const { return segments_; }
  const std::vector<GrazingEvent>& grazing() const { return grazing_; }

  /// State at time t within [t_begin, t_end].
  StateVec state_at(double t) const;

 private:
  std::vector<ExtPoint> samples_;
  std::vector<DenseSegment> segments_;
  std::vector<GrazingEvent> grazing_;
};

/// Evaluate the dense polynomial of one segment at t0 + theta*h.
StateVec dense_eval(const Trajectory::DenseSegment& seg, double theta);

}  // namespace wazkit
