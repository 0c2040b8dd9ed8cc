#include "mcfs/fd_oracle.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace mcfs {

namespace {

// 4th-order centered first derivative of a vector-valued function
Eigen::VectorXd d1_4(const std::function<Eigen::VectorXd(double)>& f,
                     double eps) {
  return (8.0 * (f(eps) - f(-eps)) - (f(2 * eps) - f(-2 * eps))) / (12 * eps);
}

Eigen::VectorXd chart_partial(const EmbeddingChart& chart,
                              const Eigen::VectorXd& base, int i, double eps) {
  return d1_4(
      [&](double h) {
        Eigen::VectorXd x = base;
        x[i] += h;
        return chart(x);
      },
      eps);
}

Eigen::VectorXd chart_second(const EmbeddingChart& chart,
                             const Eigen::VectorXd& base, int i, int j,
                             double eps) {
  if (i == j) {
    auto f = [&](double h) {
      Eigen::VectorXd x = base;
      x[i] += h;
      return chart(x);
    };
    return (-f(2 * eps) + 16 * f(eps) - 30 * f(0) + 16 * f(-eps) -
            f(-2 * eps)) /
           (12 * eps * eps);
  }
  auto df_i = [&](double h) {
    Eigen::VectorXd x = base;
    x[j] += h;
    return d1_4(
        [&](double hh) {
          Eigen::VectorXd y = x;
          y[i] += hh;
          return chart(y);
        },
        eps);
  };
  return d1_4(df_i, eps);
}

}  // namespace

OracleResult fd_shape_operator(const EmbeddingChart& chart, int n_params,
                               int ambient_dim, const Eigen::VectorXd& base,
                               const Eigen::VectorXd& orient_hint,
                               double eps) {
  const Eigen::VectorXd pos = chart(base);

  Eigen::MatrixXd T(ambient_dim, n_params);
  for (int i = 0; i < n_params; ++i) T.col(i) = chart_partial(chart, base, i, eps);

  // normal: orthogonal to tangents and to the ambient-sphere position
  Eigen::MatrixXd span(ambient_dim, n_params + 1);
  span.leftCols(n_params) = T;
  span.col(n_params) = pos;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeFullU);
  Eigen::VectorXd nu = svd.matrixU().col(ambient_dim - 1);
  if (orient_hint.size() == ambient_dim && nu.dot(orient_hint) < 0) nu = -nu;

  Eigen::MatrixXd gmat = T.transpose() * T;
  Eigen::MatrixXd amat(n_params, n_params);
  for (int i = 0; i < n_params; ++i)
    for (int j = i; j < n_params; ++j) {
      const double v = -chart_second(chart, base, i, j, eps).dot(nu);
      amat(i, j) = v;
      amat(j, i) = v;
    }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(amat, gmat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("fd_shape_operator: eigensolve failed");

  OracleResult out;
  out.lambda.assign(es.eigenvalues().data(),
                    es.eigenvalues().data() + n_params);
  out.H = es.eigenvalues().sum();
  out.normal = nu;
  return out;
}

namespace {

// graph chart of the unit m-sphere about e_1 in R^{m+1}
Eigen::VectorXd sphere_chart(const Eigen::VectorXd& w) {
  const int m = static_cast<int>(w.size());
  Eigen::VectorXd v(m + 1);
  v[0] = 1.0;
  v.tail(m) = w;
  return v / v.norm();
}

EmbeddingChart product_chart(int n, int k, double u, double rho) {
  return [=](const Eigen::VectorXd& x) {
    const Eigen::VectorXd a = x.head(k);
    const Eigen::VectorXd b = x.tail(n - k);
    Eigen::VectorXd out(n + 2);
    out.head(k + 1) = rho * std::cos(u) * sphere_chart(a);
    out.tail(n - k + 1) = rho * std::sin(u) * sphere_chart(b);
    return out;
  };
}

}  // namespace

OracleResult fd_product_sphere(int n, int k, double u, double K, double eps) {
  const double rho = 1.0 / std::sqrt(K);
  auto chart = product_chart(n, k, u, rho);
  Eigen::VectorXd base = Eigen::VectorXd::Zero(n);

  // orientation hint (-sin u * omega1, cos u * omega2): the convention under
  // which the lambda = -sqrt(K) tan u block has multiplicity k
  Eigen::VectorXd hint = Eigen::VectorXd::Zero(n + 2);
  hint[0] = -std::sin(u);
  hint[k + 1] = std::cos(u);

  return fd_shape_operator(chart, n, n + 2, base, hint, eps);
}

double fd_product_sphere_dudt(int n, int k, double u, double K, double eps) {
  const double rho = 1.0 / std::sqrt(K);
  Eigen::VectorXd base = Eigen::VectorXd::Zero(n);

  auto res = fd_product_sphere(n, k, u, K, eps);

  // mean curvature vector: H_vec = -H nu with the oracle's nu; velocity of
  // the family is (du/dt) * dphi/du, so du/dt = <H_vec, phi_u>/|phi_u|^2
  auto phi_of_u = [&](double uu) {
    return product_chart(n, k, uu, rho)(base);
  };
  const Eigen::VectorXd phi_u = d1_4(
      [&](double h) { return phi_of_u(u + h); }, eps);
  const Eigen::VectorXd H_vec = -res.H * res.normal;
  return H_vec.dot(phi_u) / phi_u.squaredNorm();
}

OracleResult fd_profile_point(const ProfileCurve& p, int node, int n,
                              const Eigen::Vector3d& profile_normal_hint) {
  const int N = p.size();
  if (node < 3 || node > N - 4)
    throw std::invalid_argument("fd_profile_point: need 3 nodes on each side");

  // degree-6 Lagrange interpolation of the curve in arclength
  const auto s = p.cumulative_arclength();
  std::array<double, 7> sk;
  std::array<Eigen::Vector3d, 7> pk;
  for (int j = 0; j < 7; ++j) {
    sk[j] = s[node - 3 + j];
    pk[j] = p.nodes[node - 3 + j];
  }
  auto curve = [sk, pk](double sq) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int j = 0; j < 7; ++j) {
      double w = 1;
      for (int l = 0; l < 7; ++l)
        if (l != j) w *= (sq - sk[l]) / (sk[j] - sk[l]);
      acc += w * pk[j];
    }
    return acc;
  };

  const double rho = p.rho;
  const int m = n - 1;  // orbit chart dimension
  const double s0 = s[node];
  auto chart = [&, s0](const Eigen::VectorXd& x) {
    const double xi = s0 + x[0];
    Eigen::Vector3d c = curve(xi);
    c *= rho / c.norm();  // back onto the orbit sphere
    Eigen::VectorXd w = x.tail(m);
    Eigen::VectorXd omega = sphere_chart(w);  // in R^{n}
    Eigen::VectorXd out(n + 2);
    out[0] = c.x();
    out[1] = c.y();
    out.tail(n) = c.z() * omega;
    return out;
  };

  Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd hint = Eigen::VectorXd::Zero(n + 2);
  hint[0] = profile_normal_hint.x();
  hint[1] = profile_normal_hint.y();
  hint[2] = profile_normal_hint.z();  // omega(0) = e_1

  const double h = p.min_spacing();
  // xi step must stay well inside the 7-node window
  const double eps_xi = 0.5 * h;
  // anisotropic steps: run the generic oracle on a rescaled chart
  auto scaled = [&, eps_xi](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y[0] *= eps_xi / 1e-2;
    return chart(y);
  };
  return fd_shape_operator(scaled, n, n + 2, base, hint, 1e-2);
}

}  // namespace mcfs
