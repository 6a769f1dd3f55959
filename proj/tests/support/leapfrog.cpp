#include "leapfrog.hpp"

#include <cmath>

namespace oracle {

namespace {
constexpr double kC[4] = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
}

Leapfrog::Leapfrog(const LeapfrogConfig& cfg, const Field& u0, const Field& v0) : cfg_(cfg) {
  n2_ = static_cast<int>(std::lround(2.0 * cfg.x2_max / cfg.dx2)) - 1;  // interior points only
  const std::size_t size = static_cast<std::size_t>(cfg.n1) * n2_;
  prev_.resize(size);
  cur_.resize(size);
  acc_.resize(size);
  std::vector<double> v(size);
  for (int i = 0; i < cfg.n1; ++i)
    for (int k = 0; k < n2_; ++k) {
      prev_[static_cast<std::size_t>(i) * n2_ + k] = u0(x1(i), x2(k));
      v[static_cast<std::size_t>(i) * n2_ + k] = v0(x1(i), x2(k));
    }
  accel(prev_, acc_);
  const double dt = cfg.dt;
  for (std::size_t s = 0; s < size; ++s) cur_[s] = prev_[s] + dt * v[s] + 0.5 * dt * dt * acc_[s];
  t_ = dt;
}

double Leapfrog::x1(int i) const { return -0.5 * cfg_.length_x1 + i * cfg_.length_x1 / cfg_.n1; }
double Leapfrog::x2(int k) const { return -cfg_.x2_max + (k + 1) * cfg_.dx2; }

void Leapfrog::accel(const std::vector<double>& u, std::vector<double>& a) const {
  const int n1 = cfg_.n1;
  const double h1 = cfg_.length_x1 / n1;
  const double i1 = 1.0 / (h1 * h1);
  const double i2 = 1.0 / (cfg_.dx2 * cfg_.dx2);
  auto at = [&](int i, int k) {
    if (k < 0 || k >= n2_) return 0.0;
    i = ((i % n1) + n1) % n1;
    return u[static_cast<std::size_t>(i) * n2_ + k];
  };
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n2_; ++k) {
      const double c = at(i, k);
      double d1 = kC[0] * c, d2 = kC[0] * c;
      for (int s = 1; s <= 3; ++s) {
        d1 += kC[s] * (at(i + s, k) + at(i - s, k));
        d2 += kC[s] * (at(i, k + s) + at(i, k - s));
      }
      const double y = x2(k);
      a[static_cast<std::size_t>(i) * n2_ + k] = d1 * i1 + d2 * i2 - y * y * c - c + c * c;
    }
}

void Leapfrog::advance_to(double t) {
  const double dt = cfg_.dt;
  while (t_ + 0.5 * dt < t) {
    accel(cur_, acc_);
    for (std::size_t s = 0; s < cur_.size(); ++s) {
      const double next = 2.0 * cur_[s] - prev_[s] + dt * dt * acc_[s];
      prev_[s] = cur_[s];
      cur_[s] = next;
    }
    t_ += dt;
  }
}

}  // namespace oracle
