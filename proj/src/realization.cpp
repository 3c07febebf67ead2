#include "affinekit/realization.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <optional>

#include "affinekit/error.hpp"
#include "affinekit/parallel.hpp"
#include "affinekit/rng.hpp"

namespace affinekit {

std::vector<std::string> MomentSystem::coordinate_names(std::size_t n) {
  std::vector<std::string> names;
  if (n == 1) return {"x", "p"};
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

MomentSystem make_system(std::string name, std::size_t n, const std::vector<std::string>& mu,
                         double box_half_width) {
  require(n >= 1, ErrorKind::InvalidInput, "system needs at least one degree of freedom");
  require(!mu.empty() && mu.size() <= n, ErrorKind::InvalidInput,
          "moment map needs between 1 and n components");
  require(box_half_width > 0, ErrorKind::InvalidInput, "domain box must be non-empty");
  MomentSystem s;
  s.name = std::move(name);
  s.n = n;
  const auto vars = MomentSystem::coordinate_names(n);
  for (const auto& m : mu) s.mu.push_back(Expression::parse(m, vars));
  s.box_lo.assign(2 * n, -box_half_width);
  s.box_hi.assign(2 * n, box_half_width);
  const double r = involutivity_residual(s, 100, 0x5eed);
  require(r < 1e-6, ErrorKind::InvalidInput,
          "moment map components do not Poisson-commute (residual " + std::to_string(r) + ")");
  return s;
}

std::vector<std::string> builtin_system_names() {
  return {"oscillator", "oscillator2", "free_particle", "anharmonic"};
}

MomentSystem builtin_system(const std::string& name) {
  if (name == "oscillator") return make_system(name, 1, {"(x^2 + p^2)/2"});
  if (name == "oscillator2")
    return make_system(name, 2, {"(x1^2 + p1^2)/2", "(x2^2 + p2^2)/2"});
  if (name == "free_particle") return make_system(name, 1, {"p"}, 5.0);
  if (name == "anharmonic") return make_system(name, 1, {"(x^2 + p^2)/2 + ((x^2 + p^2)/2)^2"}, 4.0);
  throw Error(ErrorKind::InvalidInput, "unknown built-in system '" + name + "'");
}

MomentSystem rescaled(const MomentSystem& sys, double c) {
  MomentSystem s = sys;
  const auto vars = MomentSystem::coordinate_names(sys.n);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  for (auto& m : s.mu) m = Expression::parse(std::string(buf) + "*(" + m.text() + ")", vars);
  s.name = sys.name + "*" + buf;
  return s;
}

namespace {

std::vector<double> random_point(const MomentSystem& sys, RngStream& rng) {
  std::vector<double> z(sys.phase_dim());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.uniform(sys.box_lo[i], sys.box_hi[i]);
  return z;
}

double fd_partial(const Expression& f, std::vector<double> z, std::size_t i) {
  const double h = 1e-5 * std::max(1.0, std::fabs(z[i]));
  const double z0 = z[i];
  z[i] = z0 + h;
  const double up = f.eval(z);
  z[i] = z0 - h;
  const double down = f.eval(z);
  return (up - down) / (2 * h);
}

bool inside(const MomentSystem& sys, const std::vector<double>& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(z[i] >= sys.box_lo[i] && z[i] <= sys.box_hi[i])) return false;
  return true;
}

struct Escaped {};

}  // namespace

double involutivity_residual(const MomentSystem& sys, std::size_t samples, std::uint64_t seed) {
  RngStream rng(seed, 1);
  const std::size_t n = sys.n;
  double worst = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto z = random_point(sys, rng);
    for (std::size_t a = 0; a < sys.k(); ++a)
      for (std::size_t b = a + 1; b < sys.k(); ++b) {
        double br = 0;
        for (std::size_t i = 0; i < n; ++i)
          br += fd_partial(sys.mu[a], z, i) * fd_partial(sys.mu[b], z, n + i) -
                fd_partial(sys.mu[a], z, n + i) * fd_partial(sys.mu[b], z, i);
        worst = std::max(worst, std::fabs(br));
      }
  }
  return worst;
}

std::vector<double> sigma(const MomentSystem& sys, const std::vector<double>& alpha,
                          const std::vector<double>& z) {
  const std::size_t n = sys.n;
  std::vector<double> v(2 * n, 0.0), g;
  for (std::size_t a = 0; a < sys.k(); ++a) {
    if (alpha[a] == 0) continue;
    sys.mu[a].eval_gradient(z, g);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += alpha[a] * g[n + i];
      v[n + i] -= alpha[a] * g[i];
    }
  }
  return v;
}

double moment_condition_check(const MomentSystem& sys, std::size_t samples, std::uint64_t seed) {
  RngStream rng(seed, 2);
  const std::size_t n = sys.n;
  double worst = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> alpha(sys.k());
    for (auto& a : alpha) a = rng.uniform(-1, 1);
    const auto z = random_point(sys, rng);
    for (const auto& m : sys.mu)
      require(std::isfinite(m.eval(z)), ErrorKind::DomainViolation, "moment map not finite at a sample");
    const auto v = sigma(sys, alpha, z);
    // finite-difference Hamiltonian vector field of alpha . mu
    for (std::size_t i = 0; i < n; ++i) {
      double dx = 0, dp = 0;
      for (std::size_t a = 0; a < sys.k(); ++a) {
        dx += alpha[a] * fd_partial(sys.mu[a], z, i);
        dp += alpha[a] * fd_partial(sys.mu[a], z, n + i);
      }
      worst = std::max({worst, std::fabs(v[i] - dp), std::fabs(v[n + i] + dx)});
    }
  }
  return worst;
}

std::vector<double> flow(const MomentSystem& sys, const std::vector<double>& alpha,
                         const std::vector<double>& z) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  require(inside(sys, z), ErrorKind::DomainViolation, "flow start outside the domain box");
  State x = z;
  auto rhs = [&](const State& s, State& dsdt, double) { dsdt = sigma(sys, alpha, s); };
  auto watch = [&](const State& s, double) {
    if (!inside(sys, s)) throw Escaped{};
  };
  auto stepper = odeint::make_controlled(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, 1.0, 1e-3, watch);
  } catch (const Escaped&) {
    throw Error(ErrorKind::NonCompactFiber, "flow left the domain box");
  }
  return x;
}

std::vector<double> fiber_point(const MomentSystem& sys, const std::vector<double>& b,
                                std::uint64_t seed) {
  require(b.size() == sys.k(), ErrorKind::DimMismatch, "base point has the wrong dimension");
  RngStream rng(seed, 3);
  const std::size_t k = sys.k(), d = sys.phase_dim();
  std::vector<double> g;
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = 0.25 * rng.uniform(sys.box_lo[i], sys.box_hi[i]);
    for (int it = 0; it < 200; ++it) {
      Eigen::MatrixXd J(k, d);
      Eigen::VectorXd F(k);
      for (std::size_t a = 0; a < k; ++a) {
        F(a) = sys.mu[a].eval_gradient(z, g) - b[a];
        for (std::size_t i = 0; i < d; ++i) J(a, i) = g[i];
      }
      if (!F.allFinite()) break;
      if (F.norm() < 1e-14 * std::max(1.0, Eigen::Map<const Eigen::VectorXd>(b.data(), k).norm())) {
        if (inside(sys, z) && Eigen::JacobiSVD<Eigen::MatrixXd>(J).singularValues().minCoeff() > 1e-8)
          return z;
        break;
      }
      // minimum-norm Gauss-Newton step
      const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(F);
      for (std::size_t i = 0; i < d; ++i) z[i] -= step(i);
    }
  }
  throw Error(ErrorKind::DomainViolation, "no regular point of the requested fiber inside the box");
}

PeriodLatticeEstimate period_lattice(const MomentSystem& sys, const std::vector<double>& b,
                                     std::uint64_t seed, const PeriodSearch& search) {
  const std::size_t k = sys.k(), d = sys.phase_dim();
  PeriodLatticeEstimate est;
  est.base = b;
  est.fiber_point = fiber_point(sys, b, seed);
  const auto& z0 = est.fiber_point;

  auto gap = [&](const std::vector<double>& alpha) {
    const auto z1 = flow(sys, alpha, z0);
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += (z1[i] - z0[i]) * (z1[i] - z0[i]);
    return std::sqrt(s);
  };

  // grid over [-radius, radius]^k
  const long m = std::max<long>(1, std::lround(search.radius / search.step));
  const std::size_t side = static_cast<std::size_t>(2 * m + 1);
  std::size_t total = 1;
  for (std::size_t a = 0; a < k; ++a) total *= side;
  auto alpha_of = [&](std::size_t idx) {
    std::vector<double> alpha(k);
    for (std::size_t a = 0; a < k; ++a) {
      alpha[a] = search.step * static_cast<double>(static_cast<long>(idx % side) - m);
      idx /= side;
    }
    return alpha;
  };
  const std::vector<double> dist = parallel_map<double>(total, [&](std::size_t i) { return gap(alpha_of(i)); });

  // grid-local minima away from the origin
  std::vector<std::size_t> minima;
  const std::size_t origin = (total - 1) / 2;
  for (std::size_t i = 0; i < total; ++i) {
    if (i == origin) continue;
    bool is_min = true;
    std::vector<long> c(k);
    std::size_t t = i;
    for (std::size_t a = 0; a < k; ++a) {
      c[a] = static_cast<long>(t % side);
      t /= side;
    }
    std::size_t nb = 1;
    for (std::size_t a = 0; a < k; ++a) nb *= 3;
    for (std::size_t o = 0; o < nb && is_min; ++o) {
      std::size_t oo = o, j = 0, mul = 1;
      bool valid = true, self = true;
      for (std::size_t a = 0; a < k; ++a) {
        const long off = static_cast<long>(oo % 3) - 1;
        oo /= 3;
        if (off != 0) self = false;
        const long ca = c[a] + off;
        if (ca < 0 || ca >= static_cast<long>(side)) valid = false;
        j += static_cast<std::size_t>(ca) * mul;
        mul *= side;
      }
      if (self || !valid) continue;
      if (dist[j] < dist[i]) is_min = false;
    }
    if (is_min) minima.push_back(i);
  }

  // Gauss-Newton refinement: d/d alpha_a of the time-one flow is X_a at the end point.
  struct Found {
    std::vector<double> alpha;
    double residual;
  };
  const auto refined = parallel_map<std::optional<Found>>(minima.size(), [&](std::size_t mi) -> std::optional<Found> {
    std::vector<double> alpha = alpha_of(minima[mi]);
    std::vector<double> g;
    for (int it = 0; it < 40; ++it) {
      std::vector<double> z1;
      try {
        z1 = flow(sys, alpha, z0);
      } catch (const Error&) {
        return std::nullopt;
      }
      Eigen::VectorXd F(d);
      for (std::size_t i = 0; i < d; ++i) F(i) = z1[i] - z0[i];
      const double res = F.norm();
      Eigen::MatrixXd J(d, k);
      for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> e(k, 0.0);
        e[a] = 1;
        const auto X = sigma(sys, e, z1);
        for (std::size_t i = 0; i < d; ++i) J(i, a) = X[i];
      }
      const Eigen::VectorXd delta = J.colPivHouseholderQr().solve(-F);
      if (res < search.tol && delta.norm() < 1e-12) return Found{alpha, res};
      for (std::size_t a = 0; a < k; ++a) alpha[a] += delta(a);
      if (delta.norm() < 1e-13) return res < search.tol ? std::optional<Found>(Found{alpha, res}) : std::nullopt;
    }
    const double res = gap(alpha);
    if (res < search.tol) return Found{alpha, res};
    return std::nullopt;
  });

  std::vector<Found> periods;
  for (const auto& f : refined) {
    if (!f) continue;
    double norm = 0;
    for (double x : f->alpha) norm = std::max(norm, std::fabs(x));
    if (norm < 0.5 * search.step || norm > search.radius + search.step) continue;
    bool dup = false;
    for (const auto& p : periods) {
      double diff = 0;
      for (std::size_t a = 0; a < k; ++a) diff = std::max(diff, std::fabs(p.alpha[a] - f->alpha[a]));
      dup = dup || diff < 1e-6;
    }
    if (!dup) periods.push_back(*f);
  }
  est.candidates = periods.size();

  // shortest independent periods, greedily
  auto norm2 = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return s;
  };
  std::stable_sort(periods.begin(), periods.end(), [&](const Found& a, const Found& b) {
    const double na = norm2(a.alpha), nb = norm2(b.alpha);
    if (std::fabs(na - nb) > 1e-9 * std::max(1.0, na)) return na < nb;
    return a.alpha > b.alpha;
  });
  std::vector<Found> chosen;
  for (const auto& p : periods) {
    if (chosen.size() == k) break;
    Eigen::MatrixXd M(k, chosen.size() + 1);
    for (std::size_t c = 0; c < chosen.size(); ++c)
      for (std::size_t a = 0; a < k; ++a) M(a, c) = chosen[c].alpha[a];
    for (std::size_t a = 0; a < k; ++a) M(a, chosen.size()) = p.alpha[a];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-6);
    if (static_cast<std::size_t>(lu.rank()) == chosen.size() + 1) chosen.push_back(p);
  }
  if (chosen.size() < k)
    throw Error(ErrorKind::NoReturnFound, "found " + std::to_string(chosen.size()) +
                                              " independent periods, need " + std::to_string(k));

  // sign: first significant component positive; order by that component's position
  auto lead = [](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::fabs(v[i]) > 1e-6) return i;
    return v.size();
  };
  for (auto& c : chosen)
    if (c.alpha[lead(c.alpha)] < 0)
      for (auto& x : c.alpha) x = -x;
  std::stable_sort(chosen.begin(), chosen.end(),
                   [&](const Found& a, const Found& b) { return lead(a.alpha) < lead(b.alpha); });
  for (const auto& c : chosen) {
    est.generators.push_back(c.alpha);
    est.residuals.push_back(c.residual);
  }
  return est;
}

}  // namespace affinekit
