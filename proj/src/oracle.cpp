#include "micromaser/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace micromaser {

double averaged_emission_probability(int n, double phi0, double delta_phi) {
  const double m = static_cast<double>(n) + 1.0;
  return 0.5 * (1.0 - std::cos(2.0 * phi0 * std::sqrt(m)) * std::exp(-2.0 * delta_phi * delta_phi * m));
}

double GeneratorMatrix::ground_atom_rate(int n) const {
  if (!pump_on || n >= n_max()) return 0.0;
  return params.R * averaged_emission_probability(n, params.phi0, params.delta_phi);
}

double GeneratorMatrix::excited_atom_rate(int n) const {
  if (!pump_on) return 0.0;
  return params.R - ground_atom_rate(n);
}

GeneratorMatrix build_generator(const SimParams& params, bool pump_on) {
  require_valid(params);
  GeneratorMatrix gen{params, pump_on, Eigen::MatrixXd::Zero(params.n_max + 1, params.n_max + 1)};
  for (int n = 0; n <= params.n_max; ++n) {
    const double nd = n;
    if (n < params.n_max) {
      double up = params.gamma * params.n_t * (nd + 1.0);
      if (pump_on) up += params.R * averaged_emission_probability(n, params.phi0, params.delta_phi);
      gen.q(n, n + 1) = up;
    }
    if (n > 0) gen.q(n, n - 1) = params.gamma * (params.n_t + 1.0) * nd;
    gen.q(n, n) = -gen.q.row(n).sum();
  }
  return gen;
}

namespace {

// Transitive closure of the positive off-diagonal pattern.
std::vector<std::vector<bool>> reachability(const Eigen::MatrixXd& q) {
  const auto size = static_cast<std::size_t>(q.rows());
  std::vector<std::vector<bool>> reach(size, std::vector<bool>(size, false));
  for (std::size_t i = 0; i < size; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < size; ++j)
      if (i != j && q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) reach[i][j] = true;
  }
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t i = 0; i < size; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < size; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

std::string describe(const std::vector<std::vector<int>>& classes) {
  std::ostringstream out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    out << (c ? ", " : "") << '{';
    for (std::size_t i = 0; i < classes[c].size(); ++i) out << (i ? "," : "") << classes[c][i];
    out << '}';
  }
  return out.str();
}

double dominance_gap(const Eigen::MatrixXd& q) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(q, false);
  std::vector<double> re;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) re.push_back(solver.eigenvalues()[i].real());
  std::sort(re.begin(), re.end(), std::greater<>());
  return re.size() > 1 ? std::abs(re[1]) : 0.0;
}

}  // namespace

std::vector<std::vector<int>> closed_classes(const GeneratorMatrix& gen) {
  const auto reach = reachability(gen.q);
  const int size = static_cast<int>(gen.q.rows());
  std::vector<std::vector<int>> classes;
  std::vector<bool> assigned(static_cast<std::size_t>(size), false);
  for (int i = 0; i < size; ++i) {
    if (assigned[static_cast<std::size_t>(i)]) continue;
    std::vector<int> members;
    for (int j = 0; j < size; ++j)
      if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
          reach[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
        members.push_back(j);
    for (int m : members) assigned[static_cast<std::size_t>(m)] = true;
    bool closed = true;
    for (int m : members)
      for (int j = 0; j < size; ++j)
        if (reach[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] &&
            std::find(members.begin(), members.end(), j) == members.end())
          closed = false;
    if (closed) classes.push_back(members);
  }
  return classes;
}

StationaryResult rates_of(const GeneratorMatrix& gen, std::vector<double> probability) {
  StationaryResult r;
  double ground = 0.0;
  double excited = 0.0;
  for (int n = 0; n <= gen.n_max(); ++n) {
    const double p = probability[static_cast<std::size_t>(n)];
    ground += p * gen.ground_atom_rate(n);
    excited += p * gen.excited_atom_rate(n);
  }
  r.ground_atom_rate = ground;
  r.ground_click_rate = gen.params.eta_g * ground + gen.params.r_b;
  r.excited_click_rate = gen.params.eta_e * excited;
  r.probability = std::move(probability);
  return r;
}

StationaryResult steady_state(const GeneratorMatrix& gen, const std::optional<std::vector<int>>& support) {
  std::vector<int> states;
  if (support) {
    states = *support;
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    if (states.empty()) throw std::invalid_argument("steady_state: declared support is empty");
    for (int s : states) {
      if (s < 0 || s > gen.n_max()) throw std::invalid_argument("steady_state: support state out of range");
      for (int j = 0; j <= gen.n_max(); ++j)
        if (gen.q(s, j) > 0.0 && j != s && !std::binary_search(states.begin(), states.end(), j))
          throw std::invalid_argument("steady_state: declared support is not closed (leaks from " +
                                      std::to_string(s) + " to " + std::to_string(j) + ")");
    }
  } else {
    auto classes = closed_classes(gen);
    if (classes.size() != 1) {
      const std::string what = "steady_state: chain has " + std::to_string(classes.size()) + " closed classes " +
                               describe(classes) + "; declare a support";
      throw ReducibleChainError(what, std::move(classes));
    }
    states = classes.front();
  }

  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = gen.q(states[static_cast<std::size_t>(j)], states[static_cast<std::size_t>(i)]);
  // pi Q = 0 transposed; the last balance row is redundant and becomes sum(pi) = 1.
  a.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(m - 1) = 1.0;
  const Eigen::VectorXd x = a.fullPivLu().solve(b);

  std::vector<double> pi(static_cast<std::size_t>(gen.n_max()) + 1, 0.0);
  for (Eigen::Index i = 0; i < m; ++i) pi[static_cast<std::size_t>(states[static_cast<std::size_t>(i)])] = std::max(0.0, x(i));
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= total;

  StationaryResult r = rates_of(gen, pi);
  const Eigen::Map<const Eigen::RowVectorXd> row(r.probability.data(), static_cast<Eigen::Index>(r.probability.size()));
  r.residual = (row * gen.q).cwiseAbs().maxCoeff();
  r.dominance_gap = dominance_gap(gen.q);
  return r;
}

StationaryResult quasi_stationary(const GeneratorMatrix& gen, const std::vector<int>& excluded,
                                  const QuasiStationaryOptions& options) {
  if (excluded.empty()) throw std::invalid_argument("quasi_stationary: excluded set must be nonempty");
  std::vector<int> kept;
  for (int n = 0; n <= gen.n_max(); ++n)
    if (std::find(excluded.begin(), excluded.end(), n) == excluded.end()) kept.push_back(n);
  if (kept.empty()) throw std::invalid_argument("quasi_stationary: every state is excluded");

  const auto m = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = gen.q(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);

  // Shift so that P = I + sub / lambda is nonnegative with a positive diagonal.
  const double lambda = 1.05 * sub.diagonal().cwiseAbs().maxCoeff() + 1e-300;
  const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(m, m) + sub / lambda;

  Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(m, 1.0 / static_cast<double>(m));
  double retained = 1.0;
  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::RowVectorXd next = x * step;
    retained = next.sum();
    if (!(retained > 0.0)) throw std::runtime_error("quasi_stationary: mass vanished during iteration");
    next /= retained;
    const double change = (next - x).cwiseAbs().sum();
    x = next;
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("quasi_stationary: power iteration did not converge within " +
                             std::to_string(options.max_iterations) + " iterations");

  std::vector<double> pi(static_cast<std::size_t>(gen.n_max()) + 1, 0.0);
  for (Eigen::Index i = 0; i < m; ++i) pi[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])] = std::max(0.0, x(i));
  StationaryResult r = rates_of(gen, pi);
  r.dominance_gap = lambda * (1.0 - retained);  // absorption rate out of the kept set
  r.residual = (x * sub + r.dominance_gap * x).cwiseAbs().maxCoeff();
  return r;
}

std::vector<double> evolve(const GeneratorMatrix& gen, std::vector<double> p, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve: t must be >= 0");
  const auto size = gen.q.rows();
  if (static_cast<Eigen::Index>(p.size()) != size) throw std::invalid_argument("evolve: size mismatch");
  const double lambda = gen.q.diagonal().cwiseAbs().maxCoeff();
  if (lambda == 0.0 || t == 0.0) return p;

  const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(size, size) + gen.q / lambda;
  // Chunks keep exp(-lambda h) far from underflow.
  const int chunks = std::max(1, static_cast<int>(std::ceil(lambda * t / 20.0)));
  const double mean = lambda * t / chunks;
  Eigen::RowVectorXd x = Eigen::Map<const Eigen::RowVectorXd>(p.data(), size);
  for (int c = 0; c < chunks; ++c) {
    double weight = std::exp(-mean);
    double mass = weight;
    Eigen::RowVectorXd term = x;
    Eigen::RowVectorXd acc = weight * term;
    for (int k = 1; 1.0 - mass > 1e-16 && k < 10'000; ++k) {
      term = term * step;
      weight *= mean / k;
      mass += weight;
      acc += weight * term;
    }
    x = acc / acc.sum();
  }
  for (Eigen::Index i = 0; i < size; ++i) p[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  return p;
}

std::string_view to_string(SweepBranch branch) { return branch == SweepBranch::up ? "up" : "down"; }

std::vector<HysteresisPoint> hysteresis_sweep(const SimParams& params, const std::vector<double>& R_values,
                                              const HysteresisOptions& options) {
  if (R_values.empty()) throw std::invalid_argument("hysteresis_sweep: R_values must be nonempty");
  for (std::size_t i = 0; i < R_values.size(); ++i) {
    if (!(R_values[i] > 0.0)) throw std::invalid_argument("hysteresis_sweep: R values must be positive");
    if (i > 0 && !(R_values[i] > R_values[i - 1]))
      throw std::invalid_argument("hysteresis_sweep: R values must be strictly ascending");
  }
  const double dwell = options.dwell > 0.0 ? options.dwell : 10.0 / params.gamma;

  std::vector<double> p(static_cast<std::size_t>(params.n_max) + 1, 0.0);
  p[0] = 1.0;
  std::vector<HysteresisPoint> out;
  auto visit = [&](double R, SweepBranch branch) {
    SimParams at = params;
    at.R = R;
    const auto gen = build_generator(at, true);
    p = evolve(gen, p, dwell);
    const auto rates = rates_of(gen, p);
    double mean = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
    out.push_back({R, branch, rates.ground_atom_rate, p[0], mean});
  };

  for (double R : R_values) visit(R, SweepBranch::up);
  if (options.kick_at_top) {
    std::vector<double> kicked(p.size(), 0.0);
    for (std::size_t n = 0; n + 1 < p.size(); ++n) kicked[n + 1] += p[n];
    kicked.back() += p.back();
    p = kicked;
  }
  for (auto it = R_values.rbegin(); it != R_values.rend(); ++it) visit(*it, SweepBranch::down);
  return out;
}

std::optional<BistableWindow> bistable_window(const std::vector<HysteresisPoint>& sweep, double relative_tolerance) {
  std::optional<BistableWindow> window;
  for (const auto& up : sweep) {
    if (up.branch != SweepBranch::up) continue;
    for (const auto& down : sweep) {
      if (down.branch != SweepBranch::down || down.R != up.R) continue;
      if (down.ground_atom_rate - up.ground_atom_rate > relative_tolerance * up.R) {
        if (!window) window = BistableWindow{up.R, up.R};
        window->R_low = std::min(window->R_low, up.R);
        window->R_high = std::max(window->R_high, up.R);
      }
    }
  }
  return window;
}

}  // namespace micromaser
