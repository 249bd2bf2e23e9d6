#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "cli_util.hpp"
#include "depnet/depnet.hpp"

namespace depnet::cli {

namespace {

std::string strip_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return s.substr(0, s.size() - suffix.size());
  }
  return s;
}

void write_joint_sidecar(std::ostringstream& os, const DenseDistribution& joint) {
  os << "  \"exact_joint\": [";
  for (std::size_t x = 0; x < joint.size(); ++x) {
    os << (x ? "," : "") << format_double(joint[x]);
  }
  os << "]\n";
}

std::string dataset_to_string(const Dataset& data, const std::vector<std::string>& comments) {
  std::ostringstream os;
  write_dataset_csv(os, data, {}, comments);
  return os.str();
}

LearnConfig make_config(const TrainOptions& opt) {
  LearnConfig config;
  if (opt.penalty == "mdl") {
    config.penalty = PenaltySpec::mdl();
  } else if (opt.penalty == "none") {
    config.penalty = PenaltySpec::none();
  } else {
    throw DomainError("unknown penalty '" + opt.penalty + "' (expected mdl or none)");
  }
  config.sampling_alpha = opt.alpha_s;
  config.merge_candidate_cap = opt.merge_cap;
  return config;
}

constexpr double kNatToBit = 1.4426950408889634;

struct ProtocolResult {
  std::string name;
  std::size_t n;
  double fc;
  double fc_limit;
  double ref_fc;
  double ref_fc_limit;

  double slack() const { return fc_limit - fc; }
  double relative_slack() const { return fc_limit > 0.0 ? slack() / fc_limit : 0.0; }
  bool bound_holds() const { return fc <= fc_limit + 1e-9; }
};

ProtocolResult run_protocol(const std::string& name, const DenseDistribution& truth,
                            std::size_t n, std::uint64_t data_seed, double ref_fc,
                            double ref_fc_limit) {
  const Dataset data = sample_exact(truth, n, data_seed);
  const DenseDistribution pd = empirical_distribution(data);
  const DependencyNetwork net = learn_network(data, LearnConfig{});
  const FcLimitReport rep = verify_fc_limit(pd, net, StationaryMethod::kDirect);
  return ProtocolResult{name, n, rep.fc.as_double(), rep.fc_limit.as_double(), ref_fc,
                        ref_fc_limit};
}

}  // namespace

int cmd_gen_ising(const GenIsingOptions& opt, const std::vector<std::string>& argv) {
  WallClock clock;
  const IsingSpec spec{opt.rows, opt.cols, opt.coupling, opt.field};
  const DenseDistribution joint = ising_distribution(spec);
  const Dataset data = sample_exact(joint, opt.n, opt.seed);

  const std::string stem = strip_suffix(opt.out, ".csv");
  const std::string csv_path = stem + ".csv";
  const std::string sidecar_path = stem + ".json";

  std::vector<std::string> comments = {
      "generator: ising",
      "rows: " + std::to_string(opt.rows),
      "cols: " + std::to_string(opt.cols),
      "coupling: " + format_double(opt.coupling),
      "field: " + format_double(opt.field),
      "seed: " + std::to_string(opt.seed),
  };
  write_file_atomic(csv_path, dataset_to_string(data, comments));

  std::ostringstream os;
  os << "{\n  \"kind\": \"ising\",\n  \"rows\": " << opt.rows << ",\n  \"cols\": " << opt.cols
     << ",\n  \"coupling\": " << format_double(opt.coupling)
     << ",\n  \"field\": " << format_double(opt.field) << ",\n  \"n\": " << opt.n
     << ",\n  \"seed\": " << opt.seed << ",\n";
  write_joint_sidecar(os, joint);
  os << "}\n";
  write_file_atomic(sidecar_path, os.str());

  RunManifest manifest{"gen ising", argv, {}, {csv_path, sidecar_path}, clock.seconds()};
  write_manifest(csv_path, manifest);
  std::cout << "wrote " << csv_path << " (" << data.size() << " rows, "
            << data.space().num_variables() << " columns) and " << sidecar_path << "\n";
  return kExitOk;
}

int cmd_gen_randbn(const GenRandbnOptions& opt, const std::vector<std::string>& argv) {
  WallClock clock;
  const RandomBayesNet bn = random_bayesnet(BayesNetSpec{opt.nodes, opt.edges, opt.seed});
  const Dataset data = sample_exact(bn.joint, opt.n, opt.seed + 1);

  const std::string stem = strip_suffix(opt.out, ".csv");
  const std::string csv_path = stem + ".csv";
  const std::string sidecar_path = stem + ".json";

  std::vector<std::string> comments = {
      "generator: randbn",
      "nodes: " + std::to_string(opt.nodes),
      "edges: " + std::to_string(opt.edges),
      "seed: " + std::to_string(opt.seed),
  };
  write_file_atomic(csv_path, dataset_to_string(data, comments));

  std::ostringstream os;
  os << "{\n  \"kind\": \"randbn\",\n  \"nodes\": " << opt.nodes
     << ",\n  \"edges_requested\": " << opt.edges << ",\n  \"n\": " << opt.n
     << ",\n  \"seed\": " << opt.seed << ",\n  \"edges\": [";
  for (std::size_t k = 0; k < bn.edges.size(); ++k) {
    os << (k ? "," : "") << "[" << bn.edges[k].first << "," << bn.edges[k].second << "]";
  }
  os << "],\n";
  write_joint_sidecar(os, bn.joint);
  os << "}\n";
  write_file_atomic(sidecar_path, os.str());

  RunManifest manifest{"gen randbn", argv, {}, {csv_path, sidecar_path}, clock.seconds()};
  write_manifest(csv_path, manifest);
  std::cout << "wrote " << csv_path << " (" << data.size() << " rows) and " << sidecar_path
            << "\n";
  return kExitOk;
}

int cmd_train(const TrainOptions& opt, const std::vector<std::string>& argv) {
  WallClock clock;
  const NamedDataset named = read_dataset_csv_file(opt.data);
  const LearnConfig config = make_config(opt);
  const LearnResult result = learn_network_detailed(named.data, config);

  const std::string model_path = opt.out;
  write_file_atomic(model_path, network_to_json(result.network));

  const std::string stem = strip_suffix(model_path, ".json");
  std::vector<std::string> outputs{model_path};
  for (int i = 0; i < result.network.num_nodes(); ++i) {
    std::ostringstream os;
    write_cost_trace_csv(os, result.nodes[i].trace);
    const std::string trace_path = stem + ".trace.node" + std::to_string(i) + ".csv";
    write_file_atomic(trace_path, os.str());
    outputs.push_back(trace_path);
  }

  std::vector<int> single_leaf;
  for (int i = 0; i < result.network.num_nodes(); ++i) {
    if (result.nodes[i].source.leaf_count() == 1) single_leaf.push_back(i);
  }
  if (!single_leaf.empty()) {
    std::cerr << "warning: node(s)";
    for (int i : single_leaf) std::cerr << " X" << i;
    std::cerr << " kept the trivial single-leaf source (no informative context found)\n";
  }

  RunManifest manifest{"train", argv, {opt.data}, outputs, clock.seconds()};
  write_manifest(model_path, manifest);
  std::cout << "wrote " << model_path << " (" << result.network.num_nodes() << " nodes, N = "
            << named.data.size() << ")\n";
  return kExitOk;
}

int cmd_sample(const SampleOptions& opt, const std::vector<std::string>& argv) {
  WallClock clock;
  const DependencyNetwork net = load_network(opt.model);
  const int n_nodes = net.num_nodes();

  const std::vector<ClampEntry> clamp_entries =
      opt.clamp.empty() ? std::vector<ClampEntry>{} : parse_clamp(opt.clamp, net.space());
  const ClampSet clamp(clamp_entries);

  std::vector<int> unclamped;
  for (int i = 0; i < n_nodes; ++i) {
    if (!clamp.is_clamped(i)) unclamped.push_back(i);
  }
  if (unclamped.empty()) throw DomainError("clamp fixes every variable; nothing to sample");

  ScanPolicy policy = ScanPolicy::random_uniform(n_nodes);
  if (opt.scan == "random") {
    policy = ScanPolicy::random(ScanWeights::uniform_over(n_nodes, unclamped));
  } else if (opt.scan == "sequential") {
    policy = ScanPolicy::sequential(unclamped);
  } else {
    throw DomainError("unknown scan '" + opt.scan + "' (expected random or sequential)");
  }

  std::int64_t largest_table = 0;
  for (int i = 0; i < n_nodes; ++i) {
    largest_table = std::max<std::int64_t>(
        largest_table,
        static_cast<std::int64_t>(net.node(i).table.leaf_count()) * net.space().cardinality(i));
  }
  const std::int64_t burn_in =
      opt.burn_in >= 0 ? opt.burn_in : 10 * static_cast<std::int64_t>(n_nodes) * largest_table;
  if (opt.thin < 1) throw DomainError("--thin must be >= 1");
  if (opt.n < 1) throw DomainError("--n must be >= 1");

  const std::size_t total_steps =
      static_cast<std::size_t>(burn_in) + opt.n * static_cast<std::size_t>(opt.thin);
  // every step is recorded before thinning; keep the run in memory bounds
  if (total_steps > (std::size_t{500'000'000} / static_cast<std::size_t>(n_nodes + 1))) {
    throw CapacityError("sample: burn-in " + std::to_string(burn_in) + " + n*thin " +
                        std::to_string(opt.n * static_cast<std::size_t>(opt.thin)) +
                        " records too many steps; lower --thin/--burn-in or split into "
                        "several seeded runs");
  }
  const SampleRun run = conditional_pseudo_gibbs(net, clamp, policy, total_steps, opt.seed);

  std::vector<std::int32_t> kept;
  kept.reserve(opt.n * static_cast<std::size_t>(n_nodes));
  for (std::size_t k = 0; k < opt.n; ++k) {
    const auto state = run.state(static_cast<std::size_t>(burn_in) + k * opt.thin);
    kept.insert(kept.end(), state.begin(), state.end());
  }
  const Dataset out_data(net.space(), std::move(kept));

  std::vector<std::string> comments = {
      "sampler: " + std::string(opt.scan) + " scan pseudo-Gibbs",
      "model: " + opt.model,
      "seed: " + std::to_string(opt.seed),
      "burn-in: " + std::to_string(burn_in),
      "thinning: " + std::to_string(opt.thin),
  };
  if (!opt.clamp.empty()) comments.push_back("clamp: " + opt.clamp);
  write_file_atomic(opt.out, dataset_to_string(out_data, comments));

  RunManifest manifest{"sample", argv, {opt.model}, {opt.out}, clock.seconds()};
  write_manifest(opt.out, manifest);
  std::cout << "wrote " << opt.out << " (" << opt.n << " samples, burn-in " << burn_in
            << ", thin " << opt.thin << ")\n";
  return kExitOk;
}

int cmd_eval(const EvalOptions& opt, const std::vector<std::string>& argv) {
  WallClock clock;
  const DependencyNetwork net = load_network(opt.model);
  const NamedDataset named = read_dataset_csv_file(opt.data);
  if (!(named.data.space() == net.space())) {
    throw DomainError("eval: data and model disagree on the variable space");
  }
  if (net.space().total_states() > kDenseStateCap) {
    throw CapacityError(
        "eval: state space too large for dense evaluation; use `depnet sample` to estimate "
        "frequencies instead");
  }
  const DenseDistribution pd = empirical_distribution(named.data);

  StationaryMethod method = StationaryMethod::kAuto;
  if (opt.method == "power") {
    method = StationaryMethod::kPower;
  } else if (opt.method == "direct") {
    method = StationaryMethod::kDirect;
  } else if (opt.method != "auto") {
    throw DomainError("unknown method '" + opt.method + "' (expected auto, direct, or power)");
  }

  std::vector<ExtReal> per_node;
  for (int i = 0; i < net.num_nodes(); ++i) {
    per_node.push_back(
        kl_to_full_conditional_manifold(pd, i, net.node(i).table, net.node(i).source));
  }
  ExtReal limit(0.0);
  for (int i = 0; i < net.num_nodes(); ++i) {
    limit += per_node[i].scaled_by(net.weights()[i]);
  }

  std::ostringstream human;
  std::ostringstream json;
  human << "eval: model " << opt.model << " vs data " << opt.data << "\n";
  human << "  variables: " << net.num_nodes() << ", states: " << net.space().total_states()
        << ", N = " << named.data.size() << "\n";
  human << "  FC_lim(p^D)        = " << format_ext(limit) << " nat\n";
  json << "{\n  \"model\": " << '"' << opt.model << '"' << ",\n  \"data\": " << '"' << opt.data
       << '"' << ",\n  \"n\": " << named.data.size() << ",\n  \"unit\": \"nat\",\n"
       << "  \"nat_to_bit\": " << format_double(kNatToBit) << ",\n"
       << "  \"fc_limit\": " << (limit.is_infinite() ? "\"inf\"" : format_double(limit.value()))
       << ",\n  \"per_node_kl\": [";
  for (int i = 0; i < net.num_nodes(); ++i) {
    json << (i ? "," : "")
         << (per_node[i].is_infinite() ? "\"inf\"" : format_double(per_node[i].value()));
  }
  json << "]";

  human << "  per-node KL(p^D || E(theta_i)):\n";
  for (int i = 0; i < net.num_nodes(); ++i) {
    human << "    X" << i << ": " << format_ext(per_node[i]) << "\n";
  }

  if (opt.exact) {
    const DenseDistribution pi = stationary_random_scan(net, method);
    const ExtReal fc = fc_divergence(pd, pi, net.weights());
    const ExtReal kl = kl_divergence(pd, pi);
    const double slack = limit.as_double() - fc.as_double();
    human << "  FC(p^D || pi)      = " << format_ext(fc) << " nat\n";
    human << "  slack              = " << format_double(slack) << " nat\n";
    human << "  KL(p^D || pi)      = " << format_ext(kl) << " nat\n";
    json << ",\n  \"exact\": {\n    \"method\": \"" << opt.method << "\",\n    \"fc\": "
         << (fc.is_infinite() ? "\"inf\"" : format_double(fc.value()))
         << ",\n    \"slack\": " << format_double(slack) << ",\n    \"kl\": "
         << (kl.is_infinite() ? "\"inf\"" : format_double(kl.value())) << "\n  }";
    if (!opt.stationary_out.empty()) {
      std::ostringstream os;
      write_stationary_csv(os, pi);
      write_file_atomic(opt.stationary_out, os.str());
      human << "  stationary distribution written to " << opt.stationary_out << "\n";
    }
  }

  if (!opt.clamp_vars.empty()) {
    const std::vector<int> cvars = parse_clamp_vars(opt.clamp_vars, net.space());
    human << "  clamp decomposition over {";
    for (std::size_t k = 0; k < cvars.size(); ++k) human << (k ? "," : "") << "X" << cvars[k];
    human << "}:\n";
    json << ",\n  \"clamp_decomposition\": [";
    bool first = true;
    for (int i = 0; i < net.num_nodes(); ++i) {
      if (std::find(cvars.begin(), cvars.end(), i) != cvars.end()) continue;
      const ExtReal decomposed =
          kl_to_manifold_by_clamp(pd, i, net.node(i).table, net.node(i).source, cvars);
      const double diff = std::abs(decomposed.as_double() - per_node[i].as_double());
      human << "    X" << i << ": direct " << format_ext(per_node[i]) << ", decomposed "
            << format_ext(decomposed) << ", |diff| "
            << (std::isnan(diff) ? "0" : format_double(diff)) << "\n";
      json << (first ? "" : ",") << "\n    {\"node\": " << i << ", \"direct\": "
           << (per_node[i].is_infinite() ? "\"inf\"" : format_double(per_node[i].value()))
           << ", \"decomposed\": "
           << (decomposed.is_infinite() ? "\"inf\"" : format_double(decomposed.value()))
           << ", \"abs_diff\": " << (std::isnan(diff) ? "0" : format_double(diff)) << "}";
      first = false;
    }
    json << "\n  ]";
  }

  human << "  (1 nat = " << kNatToBit << " bit)\n";
  json << "\n}\n";
  std::cout << human.str();

  if (!opt.report_out.empty()) {
    write_file_atomic(opt.report_out, json.str());
    RunManifest manifest{"eval", argv, {opt.model, opt.data}, {opt.report_out}, clock.seconds()};
    write_manifest(opt.report_out, manifest);
  }
  return kExitOk;
}

int cmd_reproduce_table1(const Table1Options& opt, const std::vector<std::string>& argv) {
  WallClock clock;
  const DenseDistribution ising = ising_distribution(IsingSpec{4, 3, opt.coupling, 0.0});
  const RandomBayesNet bn = random_bayesnet(BayesNetSpec{12, 21, opt.seed});

  auto ising_s = std::async(std::launch::async, run_protocol, "Ising4x3S", std::cref(ising),
                            std::size_t{1000}, opt.seed + 11, 4.0e-3, 5.3e-3);
  auto ising_l = std::async(std::launch::async, run_protocol, "Ising4x3L", std::cref(ising),
                            std::size_t{100000}, opt.seed + 12, 1.1e-3, 1.1e-3);
  auto rb_s = std::async(std::launch::async, run_protocol, "RB12-21S", std::cref(bn.joint),
                         std::size_t{1000}, opt.seed + 13, 1.5e-1, 1.6e-1);
  auto rb_l = std::async(std::launch::async, run_protocol, "RB12-21L", std::cref(bn.joint),
                         std::size_t{100000}, opt.seed + 14, 6.8e-3, 7.4e-3);
  const std::vector<ProtocolResult> rows{ising_s.get(), ising_l.get(), rb_s.get(), rb_l.get()};

  std::printf("%-10s %8s %12s %12s %12s %10s %10s %10s\n", "protocol", "N", "FC", "FC_lim",
              "slack", "rel.slack", "ref FC", "ref FC_lim");
  for (const ProtocolResult& r : rows) {
    std::printf("%-10s %8zu %12.4e %12.4e %12.4e %10.4f %10.1e %10.1e%s\n", r.name.c_str(), r.n,
                r.fc, r.fc_limit, r.slack(), r.relative_slack(), r.ref_fc, r.ref_fc_limit,
                r.bound_holds() ? "" : "  BOUND VIOLATED");
  }
  std::printf("(unit: nat = %.4f bit; reference values are the published protocol "
              "measurements; generator parameters are not pinned by the protocol, so "
              "agreement is order-of-magnitude)\n",
              kNatToBit);

  if (!opt.report_out.empty()) {
    std::ostringstream os;
    os << "{\n  \"seed\": " << opt.seed << ",\n  \"coupling\": " << format_double(opt.coupling)
       << ",\n  \"unit\": \"nat\",\n  \"rows\": [";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const ProtocolResult& r = rows[k];
      os << (k ? "," : "") << "\n    {\"name\": \"" << r.name << "\", \"n\": " << r.n
         << ", \"fc\": " << format_double(r.fc) << ", \"fc_limit\": " << format_double(r.fc_limit)
         << ", \"slack\": " << format_double(r.slack())
         << ", \"relative_slack\": " << format_double(r.relative_slack())
         << ", \"ref_fc\": " << format_double(r.ref_fc)
         << ", \"ref_fc_limit\": " << format_double(r.ref_fc_limit) << ", \"bound_holds\": "
         << (r.bound_holds() ? "true" : "false") << "}";
    }
    os << "\n  ]\n}\n";
    write_file_atomic(opt.report_out, os.str());
    RunManifest manifest{"reproduce-table1", argv, {}, {opt.report_out}, clock.seconds()};
    write_manifest(opt.report_out, manifest);
  }

  for (const ProtocolResult& r : rows) {
    if (!r.bound_holds()) return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace depnet::cli
