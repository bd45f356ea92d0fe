#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace dabopt {

// One linear piece of a periodic waveform, value v0 at t0 rising linearly to v1 at t1.
// The value at t1 belongs to the next segment, so adjacent segments may jump.
struct Segment {
  double t0{0.0};
  double t1{0.0};
  double v0{0.0};
  double v1{0.0};

  double duration() const { return t1 - t0; }
  double slope() const { return duration() > 0.0 ? (v1 - v0) / duration() : 0.0; }
  double at(double t) const { return v0 + slope() * (t - t0); }
};

// Periodic piecewise-linear waveform over [0, period). All statistics are closed form.
class Pwl {
 public:
  Pwl() = default;

  Pwl(double period, std::vector<Segment> segments) : period_(period), segments_(std::move(segments)) {
    if (!(period_ > 0.0)) throw std::invalid_argument("Pwl: period must be positive");
    std::erase_if(segments_, [](const Segment& s) { return !(s.duration() > 0.0); });
  }

  // Builds a waveform from a breakpoint polyline (t_k, v_k); consecutive points form segments.
  static Pwl from_polyline(double period, std::span<const double> t, std::span<const double> v) {
    if (t.size() != v.size() || t.size() < 2) throw std::invalid_argument("Pwl: bad polyline");
    std::vector<Segment> segs;
    segs.reserve(t.size() - 1);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) segs.push_back({t[k], t[k + 1], v[k], v[k + 1]});
    return Pwl(period, std::move(segs));
  }

  double period() const { return period_; }
  std::span<const Segment> segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  double integral() const {
    double acc = 0.0;
    for (const auto& s : segments_) acc += 0.5 * (s.v0 + s.v1) * s.duration();
    return acc;
  }

  double mean() const { return integral() / period_; }

  double square_integral() const {
    double acc = 0.0;
    for (const auto& s : segments_) acc += (s.v0 * s.v0 + s.v0 * s.v1 + s.v1 * s.v1) / 3.0 * s.duration();
    return acc;
  }

  double rms() const { return std::sqrt(square_integral() / period_); }

  double abs_integral() const {
    double acc = 0.0;
    for (const auto& s : segments_) {
      const double dt = s.duration();
      if (s.v0 * s.v1 >= 0.0) {
        acc += 0.5 * std::abs(s.v0 + s.v1) * dt;
      } else {
        const double tz = s.v0 / (s.v0 - s.v1) * dt;
        acc += 0.5 * (std::abs(s.v0) * tz + std::abs(s.v1) * (dt - tz));
      }
    }
    return acc;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& s : segments_) m = std::max({m, std::abs(s.v0), std::abs(s.v1)});
    return m;
  }

  // Value at time t (wrapped into the period); zero in gaps not covered by any segment.
  double at(double t) const {
    t = std::fmod(t, period_);
    if (t < 0.0) t += period_;
    for (const auto& s : segments_)
      if (t >= s.t0 && t < s.t1) return s.at(t);
    return 0.0;
  }

  Pwl scaled(double k) const {
    auto segs = segments_;
    for (auto& s : segs) {
      s.v0 *= k;
      s.v1 *= k;
    }
    return Pwl(period_, std::move(segs));
  }

  Pwl offset(double c) const {
    auto segs = segments_;
    for (auto& s : segs) {
      s.v0 += c;
      s.v1 += c;
    }
    return Pwl(period_, std::move(segs));
  }

  // max(v, 0), splitting segments at zero crossings so the result stays exactly piecewise linear.
  Pwl positive_part() const {
    std::vector<Segment> out;
    out.reserve(segments_.size() * 2);
    for (const auto& s : segments_) {
      if (s.v0 >= 0.0 && s.v1 >= 0.0) {
        out.push_back(s);
      } else if (s.v0 <= 0.0 && s.v1 <= 0.0) {
        out.push_back({s.t0, s.t1, 0.0, 0.0});
      } else {
        const double tz = s.t0 + s.v0 / (s.v0 - s.v1) * s.duration();
        out.push_back({s.t0, tz, std::max(s.v0, 0.0), 0.0});
        out.push_back({tz, s.t1, 0.0, std::max(s.v1, 0.0)});
      }
    }
    return Pwl(period_, std::move(out));
  }

  Pwl negative_part() const { return scaled(-1.0).positive_part(); }

  // Keeps the waveform inside [from, to) (both within one period) and zeroes it elsewhere.
  Pwl gated(double from, double to) const {
    std::vector<Segment> out;
    for (const auto& s : segments_) {
      const double a = std::max(s.t0, from);
      const double b = std::min(s.t1, to);
      if (b > a) out.push_back({a, b, s.at(a), s.at(b)});
    }
    return Pwl(period_, std::move(out));
  }

  // Complex Fourier coefficient c_h such that v(t) ~ sum_h Re(c_h e^{j h w t}), h >= 1.
  std::complex<double> fourier(int harmonic) const {
    using namespace std::complex_literals;
    const double w = 2.0 * std::numbers::pi * harmonic / period_;
    std::complex<double> acc{0.0, 0.0};
    for (const auto& s : segments_) {
      const double dt = s.duration();
      const auto e0 = std::exp(-1i * (w * s.t0));
      const auto ed = std::exp(-1i * (w * dt));
      const std::complex<double> flat = (1.0 - ed) / (1i * w);
      const std::complex<double> ramp = (ed * (1.0 + 1i * (w * dt)) - 1.0) / (w * w);
      acc += e0 * (s.v0 * flat + s.slope() * ramp);
    }
    return acc * (2.0 / period_);
  }

  // RMS of harmonic h (amplitude / sqrt 2).
  double harmonic_rms(int harmonic) const { return std::abs(fourier(harmonic)) / std::numbers::sqrt2; }

  // Time-average of g(v(t)) using composite Simpson with `samples` (even) intervals per segment.
  template <typename F>
  double average_of(F&& g, int samples = 64) const {
    if (samples < 2) samples = 2;
    if (samples % 2) ++samples;
    double acc = 0.0;
    for (const auto& s : segments_) {
      const double h = s.duration() / samples;
      const double dv = (s.v1 - s.v0) / samples;
      double part = g(s.v0) + g(s.v1);
      for (int k = 1; k < samples; ++k) part += (k % 2 ? 4.0 : 2.0) * g(s.v0 + dv * k);
      acc += part * h / 3.0;
    }
    return acc / period_;
  }

 private:
  double period_{1.0};
  std::vector<Segment> segments_;
};

}  // namespace dabopt
