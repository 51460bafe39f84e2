#include "wazkit/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wazkit {

namespace {

// Dense-output coefficient matrix of the Dormand-Prince 5(4) pair. Column j
// holds the weight of theta^(j+1) for stage i; the resulting quartic matches
// y0 at theta=0 and y1 at theta=1 and is 4th-order accurate in between.
constexpr int kStages = 7;
constexpr std::array<std::array<double, 4>, kStages> kDenseP = {{
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
}};

}  // namespace

StateVec dense_eval(const Trajectory::DenseSegment& seg, double theta) {
  const std::size_t n = seg.y0.size();
  StateVec y = seg.y0;
  // Horner in theta for sum_j P[i][j] * theta^(j+1).
  for (int i = 0; i < kStages; ++i) {
    double w = 0.0;
    for (int j = 3; j >= 0; --j) w = w * theta + kDenseP[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    w *= theta * seg.h;
    for (std::size_t d = 0; d < n; ++d) y[d] += w * seg.k[static_cast<std::size_t>(i)][d];
  }
  return y;
}

void Trajectory::append_sample(const ExtPoint& p) {
  if (!samples_.empty() && !(p.time > samples_.back().time)) {
    // Keep times strictly increasing; replace a duplicate endpoint.
    if (p.time == samples_.back().time) {
      samples_.back() = p;
      return;
    }
    throw ArgumentError("trajectory samples must have strictly increasing times");
  }
  samples_.push_back(p);
}

void Trajectory::append_segment(DenseSegment seg) { segments_.push_back(std::move(seg)); }

void Trajectory::extend(const Trajectory& tail) {
  for (const ExtPoint& p : tail.samples_) {
    if (!samples_.empty() && p.time <= samples_.back().time) continue;
    samples_.push_back(p);
  }
  for (const DenseSegment& s : tail.segments_) segments_.push_back(s);
  for (const GrazingEvent& g : tail.grazing_) grazing_.push_back(g);
}

double Trajectory::t_begin() const {
  if (samples_.empty()) throw ArgumentError("empty trajectory");
  return samples_.front().time;
}

double Trajectory::t_end() const {
  if (samples_.empty()) throw ArgumentError("empty trajectory");
  return samples_.back().time;
}

StateVec Trajectory::state_at(double t) const {
  if (samples_.empty()) throw ArgumentError("empty trajectory");
  if (t <= samples_.front().time) return samples_.front().state;
  if (t >= samples_.back().time) return samples_.back().state;

  if (!segments_.empty()) {
    // Binary search on segment start times.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const DenseSegment& s) { return value < s.t0; });
    if (it != segments_.begin()) --it;
    const DenseSegment& seg = *it;
    if (seg.h != 0.0 && t >= seg.t0 && t <= seg.t0 + seg.h) return dense_eval(seg, (t - seg.t0) / seg.h);
    // Fall through to sample interpolation outside dense coverage.
  }

  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double value, const ExtPoint& p) { return value < p.time; });
  const ExtPoint& hi = *it;
  const ExtPoint& lo = *(it - 1);
  const double u = (t - lo.time) / (hi.time - lo.time);
  StateVec y(lo.state.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (1.0 - u) * lo.state[i] + u * hi.state[i];
  return y;
}

}  // namespace wazkit
