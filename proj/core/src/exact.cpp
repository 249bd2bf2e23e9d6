#include "depnet/exact.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "depnet/geometry.hpp"
#include "depnet/numerics.hpp"

extern "C" {
void dgesv_(const int* n, const int* nrhs, double* a, const int* lda, int* ipiv, double* b,
            const int* ldb, int* info);
}

namespace depnet {

namespace {

constexpr double kStationaryResidualTol = 1e-10;
constexpr double kNegativeClipTol = 1e-9;

// Precomputed machinery for one (network, clamp, weights) chain. The chain
// lives on the restricted space of free variables; with an empty clamp this
// is the plain chain on the full space.
struct Chain {
  std::shared_ptr<const DependencyNetwork> net;
  std::vector<int> free_vars;              // ascending
  VariableSpace rspace;                    // restricted space
  std::vector<double> node_weight;         // per free position, sums to 1
  // Per free position: leaf index for every assignment of the other free
  // variables (flat over rspace.drop(position)).
  std::vector<std::vector<std::int32_t>> leaf_cache;

  std::size_t states() const { return rspace.total_states(); }

  // out = in * T_f for the node at free position f (no weights applied).
  void apply_node(int f, std::span<const double> in, std::span<double> out) const {
    const std::size_t stride = rspace.stride(f);
    const std::size_t card = static_cast<std::size_t>(rspace.cardinality(f));
    const std::size_t block = stride * card;
    const ConditionalTable& table = net->node(free_vars[f]).table;
    const auto& leaves = leaf_cache[f];
    std::size_t reduced = 0;
    for (std::size_t base = 0; base < rspace.total_states(); base += block) {
      for (std::size_t lo = 0; lo < stride; ++lo, ++reduced) {
        double mass = 0.0;
        for (std::size_t v = 0; v < card; ++v) mass += in[base + lo + v * stride];
        const std::span<const double> row = table.row(leaves[reduced]);
        for (std::size_t v = 0; v < card; ++v) out[base + lo + v * stride] = mass * row[v];
      }
    }
  }

  // out = in * sum_f w_f T_f.
  void apply(std::span<const double> in, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t f = 0; f < free_vars.size(); ++f) {
      const double w = node_weight[f];
      if (w == 0.0) continue;
      const std::size_t stride = rspace.stride(static_cast<int>(f));
      const std::size_t card = static_cast<std::size_t>(rspace.cardinality(static_cast<int>(f)));
      const std::size_t block = stride * card;
      const ConditionalTable& table = net->node(free_vars[f]).table;
      const auto& leaves = leaf_cache[f];
      std::size_t reduced = 0;
      for (std::size_t base = 0; base < rspace.total_states(); base += block) {
        for (std::size_t lo = 0; lo < stride; ++lo, ++reduced) {
          double mass = 0.0;
          for (std::size_t v = 0; v < card; ++v) mass += in[base + lo + v * stride];
          mass *= w;
          const std::span<const double> row = table.row(leaves[reduced]);
          for (std::size_t v = 0; v < card; ++v) out[base + lo + v * stride] += mass * row[v];
        }
      }
    }
  }

  // Column-major A = T^T for the weighted chain.
  std::vector<double> assemble_transposed() const {
    const std::size_t m = states();
    std::vector<double> a(m * m, 0.0);
    for (std::size_t f = 0; f < free_vars.size(); ++f) {
      const double w = node_weight[f];
      if (w == 0.0) continue;
      const std::size_t stride = rspace.stride(static_cast<int>(f));
      const std::size_t card = static_cast<std::size_t>(rspace.cardinality(static_cast<int>(f)));
      const std::size_t block = stride * card;
      const ConditionalTable& table = net->node(free_vars[f]).table;
      const auto& leaves = leaf_cache[f];
      std::size_t reduced = 0;
      for (std::size_t base = 0; base < m; base += block) {
        for (std::size_t lo = 0; lo < stride; ++lo, ++reduced) {
          const std::span<const double> row = table.row(leaves[reduced]);
          for (std::size_t from = 0; from < card; ++from) {
            const std::size_t x = base + lo + from * stride;
            for (std::size_t to = 0; to < card; ++to) {
              a[(base + lo + to * stride) + m * x] += w * row[to];
            }
          }
        }
      }
    }
    return a;
  }
};

Chain make_chain(std::shared_ptr<const DependencyNetwork> net, const ClampSet& clamp,
                 std::vector<double> full_weights) {
  const VariableSpace& space = net->space();
  const int n = space.num_variables();

  std::vector<int> free_vars;
  for (int i = 0; i < n; ++i) {
    if (!clamp.is_clamped(i)) free_vars.push_back(i);
  }
  if (free_vars.empty()) throw DomainError("chain: all nodes clamped");

  std::vector<std::int32_t> free_cards;
  for (int i : free_vars) free_cards.push_back(space.cardinality(i));
  VariableSpace rspace(std::move(free_cards));
  if (rspace.total_states() > kDenseStateCap) {
    throw CapacityError("exact chain: " + std::to_string(rspace.total_states()) +
                        " states exceeds the dense cap");
  }

  std::vector<double> node_weight;
  node_weight.reserve(free_vars.size());
  for (int i : free_vars) node_weight.push_back(full_weights[i]);

  // Leaf caches: evaluate each source over all assignments of the other
  // free variables, with clamped values baked in.
  std::vector<std::vector<std::int32_t>> leaf_cache(free_vars.size());
  JointState full(n, 0);
  for (const auto& [var, value] : clamp.entries()) full[var] = value;
  for (std::size_t f = 0; f < free_vars.size(); ++f) {
    const InformationSource& source = net->node(free_vars[f]).source;
    const std::size_t count = rspace.total_states() /
                              static_cast<std::size_t>(rspace.cardinality(static_cast<int>(f)));
    leaf_cache[f].resize(count);
    std::vector<int> other;  // free variables except this one
    for (std::size_t g = 0; g < free_vars.size(); ++g) {
      if (g != f) other.push_back(free_vars[g]);
    }
    for (int v : other) full[v] = 0;
    for (std::size_t idx = 0; idx < count; ++idx) {
      leaf_cache[f][idx] = source.evaluate(full);
      for (int v : other) {  // odometer over the other free variables
        if (++full[v] < space.cardinality(v)) break;
        full[v] = 0;
      }
    }
    for (int v : other) full[v] = 0;
  }

  return Chain{std::move(net), std::move(free_vars), std::move(rspace), std::move(node_weight),
               std::move(leaf_cache)};
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  StableAccumulator acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(std::abs(a[i] - b[i]));
  return acc.total();
}

void normalize_in_place(std::vector<double>& v, const char* where) {
  const double mass = stable_sum(v);
  if (!(mass > 0.0)) throw DegeneracyError(std::string(where) + ": solution has no mass");
  for (double& x : v) x /= mass;
}

DenseDistribution finalize_stationary(const Chain& chain, std::vector<double> pi,
                                      const char* method) {
  for (double& v : pi) {
    if (v < 0.0) {
      if (v < -kNegativeClipTol) {
        throw DegeneracyError(std::string(method) +
                              ": solution has a significantly negative entry (" +
                              std::to_string(v) + "); chain may be non-ergodic");
      }
      v = 0.0;
    }
  }
  normalize_in_place(pi, method);
  std::vector<double> image(pi.size());
  chain.apply(pi, image);
  const double residual = l1_distance(image, pi);
  if (residual > kStationaryResidualTol) {
    throw DegeneracyError(std::string(method) + ": fixed-point residual " +
                          std::to_string(residual) + " exceeds 1e-10; chain may be non-ergodic");
  }
  return DenseDistribution(chain.rspace, std::move(pi));
}

// Solves pi = pi*T from the dense transposed operator: (T^T - I)pi = 0 with
// the first row replaced by the normalization sum(pi) = 1.
std::vector<double> solve_dense(std::vector<double> a, std::size_t m, const char* method) {
  for (std::size_t x = 0; x < m; ++x) a[x + m * x] -= 1.0;
  for (std::size_t x = 0; x < m; ++x) a[0 + m * x] = 1.0;
  std::vector<double> b(m, 0.0);
  b[0] = 1.0;
  std::vector<int> ipiv(m);
  const int n_int = static_cast<int>(m);
  const int one = 1;
  int info = 0;
  dgesv_(&n_int, &one, a.data(), &n_int, ipiv.data(), b.data(), &n_int, &info);
  if (info != 0) {
    throw DegeneracyError(std::string(method) + ": linear system is singular (info=" +
                          std::to_string(info) + "); chain is not ergodic");
  }
  return b;
}

// Matrix-free BiCGSTAB on M v = e_0 where M is (T^T - I) with row 0 replaced
// by ones. Used by the direct method above the dense cutoff.
std::vector<double> solve_bicgstab(const Chain& chain, const SolveOptions& opts) {
  const std::size_t m = chain.states();
  auto apply_m = [&](const std::vector<double>& v, std::vector<double>& out) {
    chain.apply(v, out);
    for (std::size_t x = 1; x < m; ++x) out[x] -= v[x];
    out[0] = stable_sum(v);
  };

  std::vector<double> x(m, 1.0 / static_cast<double>(m));
  std::vector<double> r(m), rhat(m), v(m, 0.0), p(m, 0.0), s(m), t(m), tmp(m);
  apply_m(x, tmp);
  r[0] = 1.0 - tmp[0];
  for (std::size_t i = 1; i < m; ++i) r[i] = -tmp[i];
  rhat = r;

  double rho = 1.0, alpha = 1.0, omega = 1.0;
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    StableAccumulator acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
    return acc.total();
  };
  auto norm2 = [&](const std::vector<double>& a) { return std::sqrt(dot(a, a)); };

  double res = norm2(r);
  for (std::size_t iter = 0; iter < opts.krylov_max_iter && res > opts.krylov_tol; ++iter) {
    const double rho_next = dot(rhat, r);
    if (rho_next == 0.0) {
      throw ConvergenceError("direct (iterative): BiCGSTAB breakdown", res);
    }
    const double beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    apply_m(p, v);
    alpha = rho / dot(rhat, v);
    for (std::size_t i = 0; i < m; ++i) s[i] = r[i] - alpha * v[i];
    apply_m(s, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] += alpha * p[i] + omega * s[i];
      r[i] = s[i] - omega * t[i];
    }
    res = norm2(r);
  }
  if (res > opts.krylov_tol) {
    throw ConvergenceError("direct (iterative): no convergence within iteration budget", res);
  }
  return x;
}

std::vector<double> solve_power(const Chain& chain, const SolveOptions& opts) {
  const std::size_t m = chain.states();
  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  std::vector<double> next(m);
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < opts.power_max_iter; ++iter) {
    chain.apply(p, next);
    normalize_in_place(next, "power");
    residual = l1_distance(next, p);
    p.swap(next);
    if (residual <= opts.power_tol) return p;
  }
  throw ConvergenceError("power iteration: residual " + std::to_string(residual) +
                             " above tolerance after max iterations",
                         residual);
}

DenseDistribution solve_stationary(const Chain& chain, StationaryMethod method,
                                   const SolveOptions& opts) {
  if (method == StationaryMethod::kAuto) {
    method = chain.states() <= opts.dense_cutoff ? StationaryMethod::kDirect
                                                 : StationaryMethod::kPower;
  }
  if (method == StationaryMethod::kPower) {
    return finalize_stationary(chain, solve_power(chain, opts), "power");
  }
  if (chain.states() <= opts.dense_cutoff) {
    return finalize_stationary(chain, solve_dense(chain.assemble_transposed(), chain.states(), "direct"),
                               "direct");
  }
  return finalize_stationary(chain, solve_bicgstab(chain, opts), "direct (iterative)");
}

std::vector<double> weights_vector(const DependencyNetwork& net) {
  return net.weights().values();
}

std::vector<double> uniform_free_weights(const DependencyNetwork& net, const ClampSet& clamp) {
  const int n = net.num_nodes();
  const std::size_t free_count = static_cast<std::size_t>(n) - clamp.size();
  if (free_count == 0) throw DomainError("clamped chain: all nodes clamped");
  std::vector<double> w(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!clamp.is_clamped(i)) w[i] = 1.0 / static_cast<double>(free_count);
  }
  return w;
}

}  // namespace

struct TransitionOperator::Impl {
  Chain chain;
};

TransitionOperator TransitionOperator::node(const DependencyNetwork& network, int i) {
  if (i < 0 || i >= network.num_nodes()) throw DomainError("TransitionOperator::node: bad node");
  std::vector<double> w(network.num_nodes(), 0.0);
  w[i] = 1.0;
  auto net = std::make_shared<const DependencyNetwork>(network);
  return TransitionOperator(
      std::make_shared<const Impl>(Impl{make_chain(std::move(net), ClampSet{}, std::move(w))}));
}

TransitionOperator TransitionOperator::random_scan(const DependencyNetwork& network) {
  auto net = std::make_shared<const DependencyNetwork>(network);
  auto w = weights_vector(network);
  return TransitionOperator(
      std::make_shared<const Impl>(Impl{make_chain(std::move(net), ClampSet{}, std::move(w))}));
}

const VariableSpace& TransitionOperator::space() const { return impl_->chain.rspace; }

void TransitionOperator::apply_raw(std::span<const double> in, std::span<double> out) const {
  if (in.size() != impl_->chain.states() || out.size() != in.size()) {
    throw DomainError("TransitionOperator::apply_raw: size mismatch");
  }
  impl_->chain.apply(in, out);
}

DenseDistribution TransitionOperator::apply(const DenseDistribution& p) const {
  if (!(p.space() == impl_->chain.rspace)) {
    throw DomainError("TransitionOperator::apply: space mismatch");
  }
  std::vector<double> out(p.size());
  impl_->chain.apply(p.probs(), out);
  return DenseDistribution(p.space(), std::move(out));
}

DenseDistribution stationary_random_scan(const DependencyNetwork& network, StationaryMethod method,
                                         const SolveOptions& options) {
  auto net = std::make_shared<const DependencyNetwork>(network);
  const Chain chain = make_chain(net, ClampSet{}, weights_vector(network));
  return solve_stationary(chain, method, options);
}

DenseDistribution stationary_clamped(const DependencyNetwork& network, const ClampSet& clamp,
                                     StationaryMethod method, const SolveOptions& options) {
  for (const auto& [var, value] : clamp.entries()) {
    if (var < 0 || var >= network.num_nodes() || value < 0 ||
        value >= network.space().cardinality(var)) {
      throw DomainError("stationary_clamped: invalid clamp entry");
    }
  }
  auto net = std::make_shared<const DependencyNetwork>(network);
  const Chain chain = make_chain(net, clamp, uniform_free_weights(network, clamp));
  return solve_stationary(chain, method, options);
}

SequentialStationary stationary_sequential_scan(const DependencyNetwork& network,
                                                std::span<const int> order,
                                                StationaryMethod method,
                                                const SolveOptions& options) {
  const int n = network.num_nodes();
  {
    std::vector<int> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(n);
    for (int i = 0; i < n; ++i) expected[i] = i;
    if (sorted != expected) {
      throw DomainError("stationary_sequential_scan: order must be a permutation of all nodes");
    }
  }
  auto net = std::make_shared<const DependencyNetwork>(network);
  const Chain chain = make_chain(net, ClampSet{}, weights_vector(network));
  const std::size_t m = chain.states();
  if (method == StationaryMethod::kAuto) {
    method = m <= options.dense_cutoff ? StationaryMethod::kDirect : StationaryMethod::kPower;
  }

  std::vector<int> free_pos(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) free_pos[r] = order[r];

  auto apply_cycle = [&](std::span<const double> in, std::vector<double>& out,
                         std::vector<double>& scratch) {
    scratch.assign(in.begin(), in.end());
    for (std::size_t r = 0; r < free_pos.size(); ++r) {
      chain.apply_node(free_pos[r], scratch, out);
      if (r + 1 < free_pos.size()) scratch.swap(out);
    }
  };

  // Stationary distribution of the composed cycle operator.
  std::vector<double> phase0;
  if (method == StationaryMethod::kPower) {
    std::vector<double> p(m, 1.0 / static_cast<double>(m));
    std::vector<double> next(m), scratch(m);
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (std::size_t iter = 0; iter < options.power_max_iter; ++iter) {
      apply_cycle(p, next, scratch);
      normalize_in_place(next, "power (cycle)");
      residual = l1_distance(next, p);
      p.swap(next);
      if (residual <= options.power_tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("power iteration (cycle): residual above tolerance", residual);
    }
    phase0 = std::move(p);
  } else {
    if (m > options.dense_cutoff) {
      throw CapacityError("stationary_sequential_scan: direct method supports up to dense_cutoff "
                          "states; use the power method");
    }
    // Dense cycle matrix, built by propagating basis vectors through the
    // node operators; a[x' + m*x] = C[x][x'].
    std::vector<double> a(m * m, 0.0);
    std::vector<double> e(m, 0.0), out(m), scratch(m);
    for (std::size_t x = 0; x < m; ++x) {
      e[x] = 1.0;
      apply_cycle(e, out, scratch);
      e[x] = 0.0;
      for (std::size_t to = 0; to < m; ++to) {
        if (out[to] != 0.0) a[to + m * x] = out[to];
      }
    }
    phase0 = solve_dense(std::move(a), m, "direct (cycle)");
  }

  // Clean phase 0 via the cycle fixed-point check, then roll the phases.
  for (double& v : phase0) {
    if (v < 0.0) {
      if (v < -kNegativeClipTol) {
        throw DegeneracyError("sequential scan: phase solution has a significantly negative "
                              "entry; a phase chain may be non-ergodic");
      }
      v = 0.0;
    }
  }
  normalize_in_place(phase0, "sequential scan");
  {
    std::vector<double> image(m), scratch(m);
    apply_cycle(phase0, image, scratch);
    const double residual = l1_distance(image, phase0);
    if (residual > kStationaryResidualTol) {
      throw DegeneracyError("sequential scan: cycle fixed-point residual " +
                            std::to_string(residual) + " exceeds 1e-10");
    }
  }

  SequentialStationary result{{}, DenseDistribution::uniform(chain.rspace)};
  result.phases.reserve(order.size());
  result.phases.emplace_back(chain.rspace, phase0);
  std::vector<double> cur = phase0;
  std::vector<double> next(m);
  for (std::size_t r = 0; r + 1 < order.size(); ++r) {
    chain.apply_node(free_pos[r], cur, next);
    cur.swap(next);
    result.phases.emplace_back(chain.rspace, cur);
  }

  std::vector<double> mean(m, 0.0);
  for (const auto& phase : result.phases) {
    for (std::size_t i = 0; i < m; ++i) mean[i] += phase[i];
  }
  const double inv = 1.0 / static_cast<double>(result.phases.size());
  for (double& v : mean) v *= inv;
  result.mixture = DenseDistribution(chain.rspace, std::move(mean));
  return result;
}

FcLimitReport verify_fc_limit(const DenseDistribution& p, const DependencyNetwork& network,
                              StationaryMethod method, const SolveOptions& options) {
  if (!(p.space() == network.space())) throw DomainError("verify_fc_limit: space mismatch");
  const DenseDistribution pi = stationary_random_scan(network, method, options);
  const ExtReal fc = fc_divergence(p, pi, network.weights());
  const ExtReal limit = fc_limit(p, network);
  const double slack = limit.as_double() - fc.as_double();
  return FcLimitReport{fc, limit, slack};
}

bool tables_bounded_below(const DependencyNetwork& network, double eps) {
  if (!(eps > 0.0)) throw DomainError("tables_bounded_below: eps must be positive");
  for (int i = 0; i < network.num_nodes(); ++i) {
    const ConditionalTable& table = network.node(i).table;
    for (std::int32_t y = 0; y < table.leaf_count(); ++y) {
      for (double v : table.row(y)) {
        if (v < eps) return false;
      }
    }
  }
  return true;
}

void write_stationary_csv(std::ostream& os, const DenseDistribution& pi) {
  const VariableSpace& space = pi.space();
  os << "index";
  for (int i = 0; i < space.num_variables(); ++i) os << ",X" << i;
  os << ",probability\n";
  char buf[64];
  JointState state(space.num_variables(), 0);
  for (std::size_t idx = 0; idx < pi.size(); ++idx) {
    os << idx;
    for (int i = 0; i < space.num_variables(); ++i) os << ',' << state[i];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), pi[idx],
                                         std::chars_format::general, 17);
    os << ',';
    os.write(buf, end - buf);
    os << '\n';
    for (int i = 0; i < space.num_variables(); ++i) {
      if (++state[i] < space.cardinality(i)) break;
      state[i] = 0;
    }
  }
}

}  // namespace depnet
