#pragma once

#include <algorithm>

namespace pclass {

/// Closed interval [m, M] with m < M, both finite.
class SpectrumWindow {
 public:
  SpectrumWindow(double m, double M);

  double m() const noexcept { return m_; }
  double M() const noexcept { return M_; }
  double width() const noexcept { return M_ - m_; }

  bool contains(double t, double slack = 0.0) const noexcept {
    return t >= m_ - slack && t <= M_ + slack;
  }
  bool contains(const SpectrumWindow& inner, double slack = 0.0) const noexcept {
    return contains(inner.m_, slack) && contains(inner.M_, slack);
  }
  double clamp(double t) const noexcept { return std::clamp(t, m_, M_); }

  /// Point at fraction s in [0,1] of the way from m to M.
  double lerp(double s) const noexcept { return m_ + s * (M_ - m_); }

  friend bool operator==(const SpectrumWindow&, const SpectrumWindow&) = default;

 private:
  double m_;
  double M_;
};

}  // namespace pclass
