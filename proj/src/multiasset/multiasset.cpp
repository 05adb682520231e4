#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ilab/multiasset.hpp"

namespace ilab {

double condition_number(const Eigen::MatrixXd& sigma) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sigma);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0)
    return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

void validate(const MultiAssetParams& m) {
  const Eigen::Index d = m.d();
  if (d < 1) throw std::invalid_argument("MultiAssetParams: needs d >= 1");
  if (m.sigma.rows() != d || m.sigma.cols() != d || m.b.size() != d)
    throw std::invalid_argument("MultiAssetParams: dimension mismatch");
  if (!m.mask.empty() && Eigen::Index(m.mask.size()) != d)
    throw std::invalid_argument("MultiAssetParams: mask length mismatch");
  if (!(m.T > 0.0)) throw std::invalid_argument("MultiAssetParams: T must be > 0");
  if (!m.mu.allFinite() || !m.sigma.allFinite() || !m.b.allFinite() ||
      !std::isfinite(m.r))
    throw std::invalid_argument("MultiAssetParams: entries must be finite");
  const double cond = condition_number(m.sigma);
  if (!(cond < 1e10)) {
    std::ostringstream oss;
    oss << "MultiAssetParams: sigma is singular or ill-conditioned (condition number "
        << cond << ", limit 1e10)";
    throw std::invalid_argument(oss.str());
  }
}

namespace {

Eigen::VectorXd masked_b(const MultiAssetParams& m) {
  Eigen::VectorXd bm = m.b;
  for (Eigen::Index i = 0; i < m.d(); ++i)
    if (!m.insider(i)) bm(i) = 0.0;
  return bm;
}

void set_flags(PortfolioVector& pv) {
  pv.box_violation = false;
  for (Eigen::Index i = 0; i < pv.pi.size(); ++i)
    if (pv.pi(i) < 0.0 || pv.pi(i) > 1.0) pv.box_violation = true;
  pv.simplex_violation = pv.pi.sum() > 1.0;
}

// Closed-form bridge/forward portfolio for an arbitrary signal vector.
Eigen::VectorXd bf_portfolio(const MultiAssetParams& m,
                             const Eigen::VectorXd& signal) {
  const Eigen::VectorXd excess = m.mu.array() - m.r;
  const Eigen::MatrixXd gram = m.sigma * m.sigma.transpose();
  Eigen::VectorXd pi = gram.fullPivLu().solve(excess);
  pi += m.sigma.transpose().fullPivLu().solve(signal) / m.T;
  return pi;
}

Eigen::VectorXd skorokhod_indicator(const MultiAssetParams& m,
                                    const Eigen::VectorXd& signal) {
  Eigen::VectorXd pi(m.d());
  for (Eigen::Index i = 0; i < m.d(); ++i) {
    const double lhs = m.sigma.row(i).dot(signal);
    const double rhs = -(m.mu(i) - m.r) * m.T;
    pi(i) = lhs > rhs ? 1.0 : 0.0;
  }
  return pi;
}

}  // namespace

PortfolioVector mapo_pi_bridge_or_forward(const MultiAssetParams& m) {
  validate(m);
  PortfolioVector pv;
  pv.pi = bf_portfolio(m, m.b);
  set_flags(pv);
  return pv;
}

PortfolioVector mapo_pi_skorokhod(const MultiAssetParams& m) {
  validate(m);
  PortfolioVector pv;
  pv.pi = skorokhod_indicator(m, m.b);
  set_flags(pv);
  return pv;
}

double mapo_value(const MultiAssetParams& m, MapoScheme scheme) {
  validate(m);
  if (scheme == MapoScheme::BridgeOrForward) {
    const Eigen::VectorXd excess = m.mu.array() - m.r;
    Eigen::VectorXd v = m.sigma.transpose().fullPivLu().solve(excess);
    v += m.b / m.T;
    return m.r * m.T + 0.5 * m.T * v.squaredNorm();
  }
  double active_sum = 0.0;
  for (Eigen::Index i = 0; i < m.d(); ++i) {
    const double bracket = (m.mu(i) - m.r) + m.sigma.row(i).dot(m.b) / m.T;
    const bool active = m.sigma.row(i).dot(m.b) > -(m.mu(i) - m.r) * m.T;
    if (active) active_sum += bracket;
  }
  return m.r * m.T + m.T * active_sum;
}

double mapo_J(const MultiAssetParams& m, MapoScheme scheme,
              const Eigen::VectorXd& pi) {
  const Eigen::VectorXd excess = m.mu.array() - m.r;
  const Eigen::VectorXd bm = masked_b(m);
  const Eigen::VectorXd sp = m.sigma.transpose() * pi;
  double quad;
  if (scheme == MapoScheme::BridgeOrForward) {
    quad = sp.squaredNorm();
  } else {
    quad = 0.0;
    for (Eigen::Index j = 0; j < m.d(); ++j)
      if (!m.insider(j)) quad += sp(j) * sp(j);
  }
  return m.r + pi.dot(excess) + pi.dot(m.sigma * bm) / m.T - 0.5 * quad;
}

Eigen::VectorXd mapo_J_gradient(const MultiAssetParams& m, MapoScheme scheme,
                                const Eigen::VectorXd& pi) {
  const Eigen::VectorXd excess = m.mu.array() - m.r;
  const Eigen::VectorXd bm = masked_b(m);
  Eigen::VectorXd sp = m.sigma.transpose() * pi;
  if (scheme == MapoScheme::Skorokhod)
    for (Eigen::Index j = 0; j < m.d(); ++j)
      if (m.insider(j)) sp(j) = 0.0;  // quadratic only through (I-M)
  return excess + m.sigma * bm / m.T - m.sigma * sp;
}

std::pair<PortfolioVector, double> mapo_partial_info(const MultiAssetParams& m,
                                                     MapoScheme scheme) {
  validate(m);
  const Eigen::VectorXd bm = masked_b(m);
  PortfolioVector pv;
  if (scheme == MapoScheme::BridgeOrForward) {
    pv.pi = bf_portfolio(m, bm);
  } else {
    const Eigen::Index d = m.d();
    Eigen::VectorXd pi = skorokhod_indicator(m, bm);
    std::vector<Eigen::Index> outsiders;
    for (Eigen::Index i = 0; i < d; ++i)
      if (!m.insider(i)) outsiders.push_back(i);
    if (!outsiders.empty()) {
      // A = sigma (I-M) sigma'; FOC for the non-insider block.
      Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(d, d);
      for (Eigen::Index j = 0; j < d; ++j)
        if (!m.insider(j)) proj(j, j) = 1.0;
      const Eigen::MatrixXd A = m.sigma * proj * m.sigma.transpose();
      const Eigen::Index nn = Eigen::Index(outsiders.size());
      Eigen::MatrixXd Ann(nn, nn);
      Eigen::VectorXd rhs(nn);
      for (Eigen::Index a = 0; a < nn; ++a) {
        const Eigen::Index i = outsiders[std::size_t(a)];
        rhs(a) = m.mu(i) - m.r;
        for (Eigen::Index c = 0; c < nn; ++c)
          Ann(a, c) = A(i, outsiders[std::size_t(c)]);
        for (Eigen::Index j = 0; j < d; ++j)
          if (m.insider(j)) rhs(a) -= A(i, j) * pi(j);
      }
      const Eigen::VectorXd pin = Ann.fullPivLu().solve(rhs);
      for (Eigen::Index a = 0; a < nn; ++a) pi(outsiders[std::size_t(a)]) = pin(a);
    }
    pv.pi = std::move(pi);
  }
  set_flags(pv);
  return {pv, m.T * mapo_J(m, scheme, pv.pi)};
}

namespace {

Eigen::VectorXd project_box(Eigen::VectorXd y) {
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y(i) = std::min(1.0, std::max(0.0, y(i)));
  return y;
}

// Euclidean projection onto {x in [0,1]^d : sum(x) <= 1}.
Eigen::VectorXd project_box_budget(const Eigen::VectorXd& y) {
  Eigen::VectorXd x = project_box(y);
  if (x.sum() <= 1.0) return x;
  double lo = 0.0, hi = y.maxCoeff();  // x(lambda=hi) = 0
  for (int it = 0; it < 200; ++it) {
    const double lambda = 0.5 * (lo + hi);
    const double s = project_box((y.array() - lambda).matrix()).sum();
    if (s > 1.0)
      lo = lambda;
    else
      hi = lambda;
  }
  return project_box((y.array() - 0.5 * (lo + hi)).matrix());
}

Eigen::VectorXd project(const Eigen::VectorXd& y, MapoFeasible f) {
  switch (f) {
    case MapoFeasible::Unconstrained: return y;
    case MapoFeasible::Box: return project_box(y);
    case MapoFeasible::BoxAndBudget: return project_box_budget(y);
  }
  return y;
}

}  // namespace

MaximizeResult numeric_maximize_J(const MultiAssetParams& m, MapoScheme scheme,
                                  MapoFeasible feasible) {
  validate(m);
  const bool any_insider =
      m.mask.empty() ||
      std::any_of(m.mask.begin(), m.mask.end(), [](bool v) { return v; });
  if (scheme == MapoScheme::Skorokhod &&
      feasible == MapoFeasible::Unconstrained && any_insider)
    throw std::invalid_argument(
        "numeric_maximize_J: the Skorokhod objective is affine along insider "
        "directions; an unconstrained maximum does not exist");

  // Lipschitz constant of the gradient = largest eigenvalue of the quadratic.
  double lipschitz = 0.0;
  if (scheme == MapoScheme::BridgeOrForward) {
    lipschitz = (m.sigma * m.sigma.transpose()).operatorNorm();
  } else {
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(m.d(), m.d());
    for (Eigen::Index j = 0; j < m.d(); ++j)
      if (!m.insider(j)) proj(j, j) = 1.0;
    lipschitz = (m.sigma * proj * m.sigma.transpose()).operatorNorm();
  }
  const double step = 1.0 / std::max(lipschitz, 1e-12);
  const double cap_step = std::min(step, 1e6);  // affine case: finite marches

  MaximizeResult res;
  res.pi = Eigen::VectorXd::Zero(m.d());
  const std::size_t max_iter = 500000;
  const double tol = 1e-8;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    const Eigen::VectorXd g = mapo_J_gradient(m, scheme, res.pi);
    if (feasible == MapoFeasible::Unconstrained) {
      res.residual = g.norm();
      if (res.residual <= tol) {
        res.converged = true;
        return res;
      }
      res.pi += cap_step * g;
    } else {
      res.residual = (res.pi - project(res.pi + g, feasible)).norm();
      if (res.residual <= tol) {
        res.converged = true;
        return res;
      }
      res.pi = project(res.pi + cap_step * g, feasible);
    }
  }
  std::ostringstream oss;
  oss << "numeric_maximize_J: no convergence after " << max_iter
      << " iterations, residual " << res.residual;
  throw std::runtime_error(oss.str());
}

MultiAssetParams mapo_params_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("parameter JSON parse error: ") + e.what());
  }
  try {
    MultiAssetParams m;
    const auto mu = j.at("mu").get<std::vector<double>>();
    m.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), Eigen::Index(mu.size()));
    m.r = j.at("r").get<double>();
    m.T = j.at("T").get<double>();
    const auto b = j.at("b").get<std::vector<double>>();
    m.b = Eigen::Map<const Eigen::VectorXd>(b.data(), Eigen::Index(b.size()));
    const auto rows = j.at("sigma").get<std::vector<std::vector<double>>>();
    const Eigen::Index d = Eigen::Index(rows.size());
    m.sigma.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (Eigen::Index(rows[std::size_t(i)].size()) != d)
        throw DataError("parameter JSON: sigma must be a square matrix");
      for (Eigen::Index c = 0; c < d; ++c)
        m.sigma(i, c) = rows[std::size_t(i)][std::size_t(c)];
    }
    if (j.contains("mask")) m.mask = j.at("mask").get<std::vector<bool>>();
    validate(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("parameter JSON: ") + e.what());
  }
}

}  // namespace ilab
