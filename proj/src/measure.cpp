#include "affinekit/measure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "affinekit/normal_form.hpp"
#include "affinekit/parallel.hpp"
#include "affinekit/rng.hpp"

namespace affinekit {

namespace {

constexpr std::uint64_t kBatch = 8192;
constexpr double kPi = std::numbers::pi;

// Stream ids keep the estimators' random sequences apart for a shared seed.
enum Stream : std::uint64_t { kSampler = 11, kFubini = 12, kWeyl = 13, kPair = 14 };

std::size_t batch_count(std::uint64_t samples) {
  return static_cast<std::size_t>((samples + kBatch - 1) / kBatch);
}

struct Moments {
  double sum = 0, sumsq = 0;
};

// Mean and standard error of per-sample values produced by `value(index)`.
template <class F>
MassEstimate mean_estimate(std::uint64_t samples, F&& value) {
  require(samples > 0, ErrorKind::InvalidInput, "need at least one sample");
  const auto parts = parallel_map<Moments>(batch_count(samples), [&](std::size_t b) {
    Moments m;
    const std::uint64_t begin = b * kBatch, end = std::min<std::uint64_t>(samples, begin + kBatch);
    for (std::uint64_t i = begin; i < end; ++i) {
      const double v = value(i);
      m.sum += v;
      m.sumsq += v * v;
    }
    return m;
  });
  std::vector<double> s(parts.size()), q(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    s[i] = parts[i].sum;
    q[i] = parts[i].sumsq;
  }
  const double n = static_cast<double>(samples);
  const double mean = pairwise_sum(s) / n;
  const double var = std::max(0.0, pairwise_sum(q) / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

RatMatrix rational_basis_matrix(const std::vector<ExactVector>& basis) {
  const std::size_t q = basis.empty() ? 0 : basis.front().dim();
  RatMatrix M(basis.size(), q);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require(basis[i].dim() == q, ErrorKind::DimMismatch, "basis vectors of different lengths");
    const RatVector v = basis[i].rational_values();
    for (std::size_t j = 0; j < q; ++j) M(i, j) = v[j];
  }
  return M;
}

}  // namespace

Rational affine_density_exact(const std::vector<ExactVector>& basis) {
  require(!basis.empty(), ErrorKind::RankDeficient, "empty basis");
  const RatMatrix M = rational_basis_matrix(basis);
  require(M.rows() == M.cols(), ErrorKind::RankDeficient, "basis must have q vectors in R^q");
  const Rational d = determinant(M);
  require(d != 0, ErrorKind::RankDeficient, "basis vectors are dependent");
  return abs(d);
}

double affine_density(const std::vector<ExactVector>& basis) {
  bool rational = true;
  for (const auto& v : basis) rational = rational && v.is_rational();
  if (rational) return affine_density_exact(basis).get_d();
  const std::size_t q = basis.front().dim();
  require(basis.size() == q, ErrorKind::RankDeficient, "basis must have q vectors in R^q");
  Eigen::MatrixXd M(q, q);
  for (std::size_t i = 0; i < q; ++i) {
    const auto v = basis[i].to_doubles();
    for (std::size_t j = 0; j < q; ++j) M(i, j) = v[j];
  }
  // symbol bases: decide degeneracy exactly over the symbol expansion
  std::vector<ExactVector> flat;
  for (const auto& v : basis) flat.push_back(ExactVector(v.embedding()));
  require(rank(rational_basis_matrix(flat)) == q, ErrorKind::RankDeficient, "basis vectors are dependent");
  return std::fabs(M.determinant());
}

// ---------------------------------------------------------------------------

LiouvilleSampler LiouvilleSampler::box(std::vector<double> lo, std::vector<double> hi) {
  require(lo.size() == hi.size() && !lo.empty(), ErrorKind::DimMismatch, "box bounds");
  for (std::size_t i = 0; i < lo.size(); ++i)
    require(lo[i] < hi[i], ErrorKind::InvalidInput, "empty box side");
  LiouvilleSampler s;
  s.shape = Shape::Box;
  s.phase_dim = lo.size();
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

LiouvilleSampler LiouvilleSampler::ball(std::size_t phase_dim, double radius) {
  require(phase_dim > 0 && radius > 0, ErrorKind::InvalidInput, "ball needs positive dimension and radius");
  LiouvilleSampler s;
  s.shape = Shape::Ball;
  s.phase_dim = phase_dim;
  s.radius = radius;
  return s;
}

double LiouvilleSampler::volume() const {
  if (shape == Shape::Box) {
    double v = 1;
    for (std::size_t i = 0; i < phase_dim; ++i) v *= hi[i] - lo[i];
    return v;
  }
  const double d = static_cast<double>(phase_dim);
  return std::pow(kPi, d / 2) / std::tgamma(d / 2 + 1) * std::pow(radius, d);
}

std::vector<double> LiouvilleSampler::point(std::uint64_t seed, std::uint64_t index) const {
  std::vector<double> z(phase_dim);
  if (shape == Shape::Box) {
    RngStream rng(seed, kSampler, index * phase_dim);
    for (std::size_t i = 0; i < phase_dim; ++i) z[i] = rng.uniform(lo[i], hi[i]);
    return z;
  }
  // direction from normals, radius from u^{1/d}
  RngStream rng(seed, kSampler, index * (2 * phase_dim + 1));
  double norm = 0;
  for (auto& x : z) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(phase_dim));
  for (auto& x : z) x *= r / norm;
  return z;
}

double MeasureHistogram::bin_volume(std::size_t flat) const {
  double v = 1;
  for (std::size_t a = edges.size(); a-- > 0;) {
    const std::size_t i = flat % bins(a);
    flat /= bins(a);
    v *= edges[a][i + 1] - edges[a][i];
  }
  return v;
}

std::vector<double> MeasureHistogram::bin_center(std::size_t flat) const {
  std::vector<double> c(edges.size());
  for (std::size_t a = edges.size(); a-- > 0;) {
    const std::size_t i = flat % bins(a);
    flat /= bins(a);
    c[a] = 0.5 * (edges[a][i] + edges[a][i + 1]);
  }
  return c;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  require(bins > 0 && lo < hi, ErrorKind::InvalidInput, "histogram range");
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  return e;
}

MeasureHistogram dh_pushforward(const LiouvilleSampler& sampler, const std::vector<Expression>& mu,
                                const std::vector<std::vector<double>>& edges, std::uint64_t samples,
                                std::uint64_t seed) {
  require(!mu.empty() && mu.size() == edges.size(), ErrorKind::DimMismatch,
          "one edge list per moment component");
  require(samples > 0, ErrorKind::InvalidInput, "need at least one sample");
  for (const auto& m : mu)
    require(m.arity() == sampler.phase_dim, ErrorKind::DimMismatch, "moment map arity");
  std::size_t nbins = 1;
  for (const auto& e : edges) {
    require(e.size() >= 2 && std::is_sorted(e.begin(), e.end()), ErrorKind::InvalidInput, "bad bin edges");
    nbins *= e.size() - 1;
  }
  MeasureHistogram h;
  h.edges = edges;
  h.samples = samples;
  h.domain_volume = sampler.volume();

  // counts per bin, plus the kept-sample count in the last slot
  using Counts = std::vector<std::uint64_t>;
  const auto parts = parallel_map<Counts>(batch_count(samples), [&](std::size_t b) {
    Counts c(nbins + 1, 0);
    const std::uint64_t begin = b * kBatch, end = std::min<std::uint64_t>(samples, begin + kBatch);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto z = sampler.point(seed, i);
      if (sampler.keep && sampler.keep->eval(z) < 0) continue;
      ++c[nbins];
      std::size_t flat = 0;
      bool in = true;
      for (std::size_t a = 0; a < mu.size() && in; ++a) {
        const double v = mu[a].eval(z);
        const auto& e = edges[a];
        if (!(v >= e.front() && v < e.back())) {
          in = false;
          break;
        }
        const std::size_t k = static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), v) - e.begin()) - 1;
        flat = flat * (e.size() - 1) + k;
      }
      if (in) ++c[flat];
    }
    return c;
  });
  Counts total(nbins + 1, 0);
  for (const auto& c : parts)
    for (std::size_t i = 0; i <= nbins; ++i) total[i] += c[i];

  const double n = static_cast<double>(samples), V = h.domain_volume;
  auto estimate = [&](std::uint64_t count, double& mass, double& err) {
    const double p = static_cast<double>(count) / n;
    mass = V * p;
    err = V * std::sqrt(p * (1 - p) / n);
  };
  h.mass.resize(nbins);
  h.stderr_.resize(nbins);
  for (std::size_t i = 0; i < nbins; ++i) estimate(total[i], h.mass[i], h.stderr_[i]);
  estimate(total[nbins], h.total_mass, h.total_stderr);
  return h;
}

PolynomialFit polynomial_fit(const MeasureHistogram& hist, std::size_t degree) {
  require(hist.edges.size() == 1, ErrorKind::InvalidInput, "polynomial fits need a 1-D histogram");
  const std::size_t bins = hist.bins(0);
  require(bins >= 3 && degree + 2 <= bins, ErrorKind::InvalidInput, "degree must be at most bins - 2");
  const std::size_t m = bins - 2;
  Eigen::MatrixXd V(m, degree + 1);
  Eigen::VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double c = hist.bin_center(i + 1)[0];
    double p = 1;
    for (std::size_t d = 0; d <= degree; ++d, p *= c) V(i, d) = p;
    y(i) = hist.density(i + 1);
  }
  const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(y);
  PolynomialFit fit;
  fit.coefficients.assign(coef.data(), coef.data() + coef.size());
  const Eigen::VectorXd pred = V * coef;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::fabs(pred(i) - y(i));
    fit.max_relative_residual = std::max(fit.max_relative_residual, y(i) != 0 ? r / std::fabs(y(i)) : r);
  }
  return fit;
}

// ---------------------------------------------------------------------------

namespace {

using boost::math::quadrature::gauss_kronrod;

template <class F>
double quad(F f, double a, double b, double tol, double* err = nullptr) {
  double e = 0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &e);
  if (err) *err = e;
  return v;
}

std::array<double, 3> sphere_point(RngStream& rng) {
  std::array<double, 3> p{rng.normal(), rng.normal(), rng.normal()};
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  for (auto& x : p) x /= n;
  return p;
}

}  // namespace

FubiniResult fubini_check(const Expression& f, const Expression& iota, double affine_density,
                          double mu_scale, std::uint64_t samples, std::uint64_t seed) {
  require(f.arity() == 4, ErrorKind::InvalidInput, "integrand must use (x, y, z, b)");
  require(iota.arity() == 1, ErrorKind::InvalidInput, "iota must use (b)");
  require(affine_density > 0 && mu_scale > 0, ErrorKind::InvalidInput, "densities must be positive");
  FubiniResult r;
  // M has total measure mu_scale * 4 pi * affine_density
  const double weight = mu_scale * 4 * kPi * affine_density;
  const MassEstimate mc = mean_estimate(samples, [&](std::uint64_t i) {
    RngStream rng(seed, kFubini, i * 8);
    const auto p = sphere_point(rng);
    const double b = rng.uniform();
    return weight * f.eval({p[0], p[1], p[2], b});
  });
  r.lhs = mc.value;
  r.lhs_stderr = mc.stderr_;

  auto leaf = [&](double b) {
    return quad([&](double th) {
      const double s = std::sin(th), c = std::cos(th);
      return s * quad([&](double ph) { return f.eval({s * std::cos(ph), s * std::sin(ph), c, b}); },
                      0, 2 * kPi, 1e-11);
    }, 0, kPi, 1e-11);
  };
  r.rhs = quad([&](double b) { return iota.eval({b}) * leaf(b) * affine_density; }, 0, 1, 1e-10);
  r.discrepancy = r.lhs != 0 ? std::fabs(r.lhs - r.rhs) / std::fabs(r.lhs) : std::fabs(r.rhs);
  return r;
}

WeylResult weyl_su2_check(const Expression& f, std::uint64_t samples, std::uint64_t seed) {
  require(f.arity() == 1, ErrorKind::InvalidInput, "integrand must be radial, in r");
  WeylResult w;
  // importance sampling from the standard normal on R^3
  const double norm = std::pow(2 * kPi, 1.5);
  const MassEstimate mc = mean_estimate(samples, [&](std::uint64_t i) {
    RngStream rng(seed, kWeyl, i * 6);
    const double x = rng.normal(), y = rng.normal(), z = rng.normal();
    const double r2 = x * x + y * y + z * z;
    const double v = f.eval({std::sqrt(r2)});
    return v == 0 ? 0.0 : v * norm * std::exp(0.5 * r2);
  });
  w.lhs = mc.value;
  w.lhs_stderr = mc.stderr_;

  // (1/|W|) * integral over R of 4 pi r^2 f(|r|); split where radial indicators jump
  auto g = [&](double r) { return 4 * kPi * r * r * f.eval({std::fabs(r)}) / 2; };
  const double inf = std::numeric_limits<double>::infinity();
  double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
  w.rhs = quad(g, -inf, -1, 1e-13, &e1) + quad(g, -1, 0, 1e-13, &e2) + quad(g, 0, 1, 1e-13, &e3) +
          quad(g, 1, inf, 1e-13, &e4);
  w.rhs_error = e1 + e2 + e3 + e4;
  w.relative_error = w.rhs != 0 ? std::fabs(w.lhs - w.rhs) / std::fabs(w.rhs) : std::fabs(w.lhs);
  return w;
}

MassEstimate pair_groupoid_mass(double area, std::uint64_t samples, std::uint64_t seed) {
  require(area > 0 && std::isfinite(area), ErrorKind::InvalidInput, "area must be positive");
  const double R = std::sqrt(area / (4 * kPi));
  using V3 = std::array<double, 3>;
  auto cross = [](const V3& a, const V3& b) {
    return V3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto dot = [](const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  // area form of the radius-R sphere: w_p(X, Y) = (p / R) . (X x Y)
  auto sphere_form = [&](double th, double ph) {
    const V3 p{R * std::sin(th) * std::cos(ph), R * std::sin(th) * std::sin(ph), R * std::cos(th)};
    const V3 Xt{R * std::cos(th) * std::cos(ph), R * std::cos(th) * std::sin(ph), -R * std::sin(th)};
    const V3 Xp{-R * std::sin(th) * std::sin(ph), R * std::sin(th) * std::cos(ph), 0};
    return dot(p, cross(Xt, Xp)) / R;
  };
  const double param_volume = (2 * kPi * kPi) * (2 * kPi * kPi);
  const MassEstimate m = mean_estimate(samples, [&](std::uint64_t i) {
    RngStream rng(seed, kPair, i * 4);
    const double t1 = rng.uniform(0, kPi), p1 = rng.uniform(0, 2 * kPi);
    const double t2 = rng.uniform(0, kPi), p2 = rng.uniform(0, 2 * kPi);
    // Omega on (d_t1, d_p1, d_t2, d_p2); mixed pairings vanish
    double a[4][4] = {};
    a[0][1] = sphere_form(t1, p1);
    a[2][3] = -sphere_form(t2, p2);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < r; ++c) a[r][c] = -a[c][r];
    const double pf = a[0][1] * a[2][3] - a[0][2] * a[1][3] + a[0][3] * a[1][2];
    return param_volume * std::fabs(pf);
  });
  return m;
}

}  // namespace affinekit
