#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "symcanon/eig_canon.hpp"
#include "symcanon/graph.hpp"
#include "symcanon/graph_canon.hpp"
#include "symcanon/graph_gen.hpp"
#include "symcanon/lap_canon.hpp"
#include "symcanon/verify.hpp"

using namespace symcanon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitStrict = 2;
constexpr int kExitVerify = 3;

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string method = "oap-lap";
  std::string variant = "oap";
  int k = 0;  // 0 = all eigenvectors
  double c = kDefaultSummaryOffset;
  Tolerances tol;
  std::uint64_t seed = 0;
  int trials = 1000;
  double eps = 1e-6;
  std::uint64_t budget = 100000;
  std::uint64_t node_limit = kDefaultNodeLimit;
  int jobs = 1;
  bool strict = false;
  std::string out;
  std::string suite = "all";
  std::string canon = "method";
  int functions = 50;
};

// Options whose defaults may be overridden from the environment.
const std::vector<std::pair<std::string, std::string>> kEnvOverrides = {
    {"SYMCANON_SEED", "--seed"},         {"SYMCANON_TRIALS", "--trials"},
    {"SYMCANON_EPS_EIG", "--eps-eig"},   {"SYMCANON_EPS_RANK", "--eps-rank"},
    {"SYMCANON_EPS_ZERO", "--eps-zero"}, {"SYMCANON_TAU", "--tau"},
    {"SYMCANON_JOBS", "--jobs"},
};

void echo_config(std::ostream& out, const RunConfig& cfg) {
  out << std::setprecision(12);
  out << "config.subcommand=" << cfg.subcommand << '\n';
  for (std::size_t i = 0; i < cfg.inputs.size(); ++i) out << "config.input." << i << '=' << cfg.inputs[i] << '\n';
  if (cfg.subcommand == "canonicalize") {
    out << "config.method=" << cfg.method << '\n' << "config.k=" << cfg.k << '\n';
  }
  out << "config.variant=" << cfg.variant << '\n'
      << "config.c=" << cfg.c << '\n'
      << "config.eps_eig=" << cfg.tol.eps_eig << '\n'
      << "config.eps_rank=" << cfg.tol.eps_rank << '\n'
      << "config.eps_zero=" << cfg.tol.eps_zero << '\n'
      << "config.tau=" << cfg.tol.tau_quant << '\n'
      << "config.seed=" << cfg.seed << '\n';
  if (cfg.subcommand == "verify") {
    out << "config.suite=" << cfg.suite << '\n'
        << "config.canon=" << cfg.canon << '\n'
        << "config.trials=" << cfg.trials << '\n'
        << "config.eps=" << cfg.eps << '\n';
  }
  if (cfg.subcommand == "frame-size" || cfg.subcommand == "canonical-set") {
    out << "config.budget=" << cfg.budget << '\n' << "config.node_limit=" << cfg.node_limit << '\n';
  }
  if (cfg.subcommand == "counterexample") out << "config.functions=" << cfg.functions << '\n';
  out << "config.jobs=" << cfg.jobs << '\n' << "config.strict=" << (cfg.strict ? "true" : "false") << '\n';
  for (const auto& [env, flag] : kEnvOverrides) {
    if (const char* v = std::getenv(env.c_str())) out << "config.env." << env << '=' << v << '\n';
  }
  out << std::setprecision(6);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// .csv is read as a dense adjacency matrix, anything else as an edge list.
Graph load_graph(const std::string& path) {
  try {
    if (ends_with(path, ".csv")) {
      Graph g;
      g.adjacency = read_dense_csv_file(path);
      g.validate();
      return g;
    }
    return read_edge_list_file(path);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

// Runs work(i) for every input with up to `jobs` threads; results keep input order.
template <typename Work>
auto run_jobs(std::size_t count, int jobs, const Work& work) {
  std::vector<decltype(work(std::size_t{}))> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          out[i] = work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string witness_string(const std::vector<int>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? ";" : "") + std::to_string(w[i]);
  return s.empty() ? "-" : s;
}

int cmd_canonicalize(const RunConfig& cfg) {
  PePolicy policy;
  policy.method = parse_pe_method(cfg.method);
  policy.variant = parse_key_variant(cfg.variant);
  policy.c = cfg.c;

  std::vector<Graph> graphs;
  for (const auto& path : cfg.inputs) graphs.push_back(load_graph(path));

  const auto reports = run_jobs(graphs.size(), cfg.jobs, [&](std::size_t i) {
    const auto& g = graphs[i];
    const int k = cfg.k > 0 ? cfg.k : g.n();
    const auto result = canonicalize_pe(normalized_laplacian(g), k, policy, cfg.tol);
    std::ostringstream s;
    s << "graph=" << cfg.inputs[i] << '\n'
      << "n=" << g.n() << '\n'
      << "k=" << k << '\n'
      << "padded=" << (result.padded ? "true" : "false") << '\n'
      << "spaces=" << result.spaces.size() << '\n'
      << "single=" << result.single << '\n'
      << "fallback=" << result.fallback << '\n'
      << "failed=" << result.failed << '\n';
    for (std::size_t j = 0; j < result.spaces.size(); ++j) {
      const auto& sp = result.spaces[j];
      s << "space." << j << "=eigenvalue:" << std::setprecision(10) << sp.eigenvalue
        << " multiplicity:" << sp.multiplicity << " status:" << to_string(sp.kind)
        << " method:" << sp.method << " witness:" << witness_string(sp.witness)
        << " columns:" << sp.columns_used << '\n';
    }
    s << "#pe\n";
    write_csv(s, result.pe);
    return s.str();
  });

  Output out(cfg.out);
  echo_config(std::cout, cfg);
  bool any_failed = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const auto split = r.find("#pe\n");
    std::cout << r.substr(0, split);
    if (cfg.out.empty()) {
      std::cout << r.substr(split);
    } else {
      out.stream() << "# graph=" << cfg.inputs[i] << '\n' << r.substr(split + 4);
    }
    any_failed = any_failed || r.find("status:Failed") != std::string::npos;
  }
  return cfg.strict && any_failed ? kExitStrict : kExitOk;
}

std::string optional_str(const std::optional<BigInt>& v) { return v ? v->str() : "Unknown"; }

int cmd_frame_size(const RunConfig& cfg) {
  std::vector<Graph> graphs;
  for (const auto& path : cfg.inputs) graphs.push_back(load_graph(path));

  struct Row {
    std::string text;
    double frame[2] = {0, 0};
    std::optional<double> canon[2];
  };
  const auto rows = run_jobs(graphs.size(), cfg.jobs, [&](std::size_t i) {
    Row row;
    std::ostringstream s;
    s << "graph=" << cfg.inputs[i] << '\n' << "n=" << graphs[i].n() << '\n';
    int slot = 0;
    for (auto variant : {GraphVariant::Fa, GraphVariant::Oap}) {
      auto frame = frame_of_graph(graphs[i], variant, cfg.tol);
      attach_automorphisms(graphs[i], frame.summary, cfg.node_limit);
      const std::string v(to_string(variant));
      s << v << ".tie_groups=";
      for (std::size_t t = 0; t < frame.summary.tie_groups.size(); ++t) {
        s << (t ? "|" : "") << witness_string(frame.summary.tie_groups[t]);
      }
      s << '\n'
        << v << ".frame_size=" << frame.summary.frame_size << '\n'
        << v << ".aut_count=" << optional_str(frame.summary.aut_count) << '\n'
        << v << ".canon_size=" << optional_str(frame.summary.canon_size) << '\n';
      if (frame.summary.frame_size <= cfg.budget) {
        const auto set = canonical_set(graphs[i], frame.frame, cfg.budget, cfg.seed);
        s << v << ".canonical_set_enumerated=" << set.graphs.size() << '\n';
      }
      row.frame[slot] = frame.summary.frame_size.convert_to<double>();
      if (frame.summary.canon_size) row.canon[slot] = frame.summary.canon_size->convert_to<double>();
      ++slot;
    }
    row.text = s.str();
    return row;
  });

  Output out(cfg.out);
  auto& os = out.stream();
  echo_config(os, cfg);
  double sum_frame[2] = {0, 0}, sum_canon[2] = {0, 0};
  int canon_known[2] = {0, 0};
  for (const auto& row : rows) {
    os << row.text;
    for (int v = 0; v < 2; ++v) {
      sum_frame[v] += row.frame[v];
      if (row.canon[v]) {
        sum_canon[v] += *row.canon[v];
        ++canon_known[v];
      }
    }
  }
  const double count = static_cast<double>(graphs.size());
  for (int v = 0; v < 2; ++v) {
    const std::string name = v == 0 ? "fa" : "oap";
    os << "aggregate." << name << ".mean_frame_size=" << sum_frame[v] / count << '\n';
    os << "aggregate." << name << ".mean_canon_size=";
    if (canon_known[v]) {
      os << sum_canon[v] / canon_known[v] << '\n';
    } else {
      os << "Unknown\n";
    }
  }
  return kExitOk;
}

int cmd_canonical_set(const RunConfig& cfg) {
  Output out(cfg.out);
  auto& os = out.stream();
  echo_config(os, cfg);
  const auto variant = parse_graph_variant(cfg.variant == "fa" ? "fa" : "oap");
  for (const auto& path : cfg.inputs) {
    const Graph g = load_graph(path);
    const auto frame = frame_of_graph(g, variant, cfg.tol);
    const auto set = canonical_set(g, frame.frame, cfg.budget, cfg.seed);
    os << "graph=" << path << '\n'
       << "frame_size=" << set.frame_size << '\n'
       << "exhaustive=" << (set.exhaustive ? "true" : "false") << '\n'
       << "evaluated=" << set.evaluated << '\n'
       << "canonical_graphs=" << set.graphs.size() << '\n';
    for (std::size_t i = 0; i < set.graphs.size(); ++i) {
      os << "#form." << i << " hits=" << set.graphs[i].hits
         << " action=" << witness_string(set.graphs[i].action) << '\n';
      write_adjacency_block(os, set.graphs[i].form.adjacency);
    }
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const bool identity = cfg.canon == "identity";
  if (!identity && cfg.canon != "method") throw Error("unknown --canon '" + cfg.canon + "'");
  const bool all = cfg.suite == "all";
  if (!all && cfg.suite != "eig" && cfg.suite != "lap" && cfg.suite != "pca") {
    throw Error("unknown --suite '" + cfg.suite + "'");
  }
  const auto identity_canon = [](const Matrix& u) { return CanonOutcome::single(u, "identity"); };
  const auto tol = cfg.tol;

  std::vector<TrialReport> reports;
  if (all || cfg.suite == "eig") {
    CanonFn fn = identity ? CanonFn(identity_canon)
                          : CanonFn([tol](const Matrix& u) { return oap_eig(u, tol); });
    reports.push_back(verify_basis_invariance(fn, cfg.trials, cfg.eps, cfg.seed));
    reports.back().harness = "eig.basis_invariance";
  }
  if (all || cfg.suite == "lap") {
    std::vector<KeyVariant> variants{KeyVariant::Oap, KeyVariant::MapNorm, KeyVariant::FaDiag};
    if (!cfg.variant.empty() && cfg.variant != "all") variants = {parse_key_variant(cfg.variant)};
    for (auto v : variants) {
      const LapCanonConfig lc{v, cfg.c, tol};
      CanonFn fn = identity ? CanonFn(identity_canon)
                            : CanonFn([lc](const Matrix& u) { return oap_lap(u, lc); });
      reports.push_back(verify_perm_equivariance(fn, cfg.trials, cfg.eps, cfg.seed));
      reports.back().harness = "lap." + std::string(to_string(v)) + ".perm_equivariance";
    }
  }
  if (all || cfg.suite == "pca") {
    const auto model = identity ? plain_backbone_model(cfg.seed) : pca_frame_model(cfg.seed, tol);
    reports.push_back(verify_orthogonal_equivariance(model, cfg.trials, cfg.eps, cfg.seed));
    reports.back().harness = "pca.orthogonal_equivariance";
  }

  Output out(cfg.out);
  auto& os = out.stream();
  echo_config(os, cfg);
  bool ok = true;
  for (const auto& r : reports) {
    write_kv(os, r);
    ok = ok && r.all_passed();
  }
  os << "verdict=" << (ok ? "pass" : "fail") << '\n';
  return ok ? kExitOk : kExitVerify;
}

int cmd_compare(const RunConfig& cfg) {
  std::vector<gen::NamedGraph> corpus;
  if (cfg.inputs.empty()) {
    corpus = gen::symmetric_corpus(cfg.seed);
  } else {
    for (const auto& path : cfg.inputs) corpus.push_back({path, load_graph(path)});
  }
  const std::vector<KeyVariant> variants{KeyVariant::Oap, KeyVariant::MapNorm, KeyVariant::FaDiag};
  // One report per graph, merged in input order.
  const auto parts = run_jobs(corpus.size(), cfg.jobs, [&](std::size_t i) {
    return superiority_report({corpus[i]}, variants, cfg.c, cfg.tol);
  });

  SuperiorityReport total;
  for (auto v : variants) total.tallies.push_back({v, 0, 0, 0});
  for (const auto& r : parts) {
    total.instances += r.instances;
    for (std::size_t t = 0; t < variants.size(); ++t) {
      total.tallies[t].instances += r.tallies[t].instances;
      total.tallies[t].single += r.tallies[t].single;
      total.tallies[t].failed += r.tallies[t].failed;
    }
    total.dominance = total.dominance && r.dominance;
    total.dominance_violations += r.dominance_violations;
    total.strict_witnesses.insert(total.strict_witnesses.end(), r.strict_witnesses.begin(),
                                  r.strict_witnesses.end());
    total.fa_witnesses.insert(total.fa_witnesses.end(), r.fa_witnesses.begin(), r.fa_witnesses.end());
  }

  Output out(cfg.out);
  auto& os = out.stream();
  echo_config(os, cfg);
  os << "graphs=" << corpus.size() << '\n';
  write_kv(os, total);
  return total.dominance ? kExitOk : kExitVerify;
}

int cmd_counterexample(const RunConfig& cfg) {
  const auto r = signnet_counterexample(cfg.seed, cfg.functions);
  Output out(cfg.out);
  auto& os = out.stream();
  echo_config(os, cfg);
  write_kv(os, r);
  os << "verdict=" << (r.passed() ? "identical_outputs" : "outputs_differ") << '\n';
  return r.passed() ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symcanon: eigenvector and graph canonicalization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  app.add_option("--c", cfg.c, "summary-vector offset c")->capture_default_str();
  app.add_option("--eps-eig", cfg.tol.eps_eig, "eigenvalue grouping tolerance")
      ->capture_default_str()->envname("SYMCANON_EPS_EIG");
  app.add_option("--eps-rank", cfg.tol.eps_rank, "rank test residual threshold")
      ->capture_default_str()->envname("SYMCANON_EPS_RANK");
  app.add_option("--eps-zero", cfg.tol.eps_zero, "nonzero-entry threshold")
      ->capture_default_str()->envname("SYMCANON_EPS_ZERO");
  app.add_option("--tau", cfg.tol.tau_quant, "key quantization grid")
      ->capture_default_str()->envname("SYMCANON_TAU");
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str()->envname("SYMCANON_SEED");
  app.add_option("--jobs", cfg.jobs, "worker threads for corpus inputs")
      ->capture_default_str()->envname("SYMCANON_JOBS")->check(CLI::PositiveNumber);
  app.add_flag("--strict", cfg.strict, "exit 2 when any eigenspace is Failed");
  app.add_option("--out", cfg.out, "output file (default stdout)");

  auto* canon = app.add_subcommand("canonicalize", "canonical Laplacian PE for graph files");
  canon->add_option("inputs", cfg.inputs, "edge-list or dense .csv adjacency files")->required();
  canon->add_option("--method", cfg.method,
                    "sign-first, oap-eig, oap-lap (oap), map, fa-lap (fa), map-full")
      ->capture_default_str();
  canon->add_option("--variant", cfg.variant, "key variant for oap-lap/map-full: oap, map, fa")
      ->capture_default_str();
  canon->add_option("--k", cfg.k, "number of eigenvectors (0 = n)")->capture_default_str();

  auto* frame = app.add_subcommand("frame-size", "frame and canonicalization sizes per graph");
  frame->add_option("inputs", cfg.inputs, "graph files")->required();
  frame->add_option("--budget", cfg.budget, "enumerate canonical sets up to this frame size")
      ->capture_default_str();
  frame->add_option("--node-limit", cfg.node_limit, "automorphism search node limit")
      ->capture_default_str();

  auto* cset = app.add_subcommand("canonical-set", "list the canonical graphs of each input");
  cset->add_option("inputs", cfg.inputs, "graph files")->required();
  cset->add_option("--variant", cfg.variant, "oap or fa")->capture_default_str();
  cset->add_option("--budget", cfg.budget, "exhaustive up to this frame size, sampled beyond")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "randomized invariance/equivariance battery");
  verify->add_option("--suite", cfg.suite, "eig, lap, pca or all")->capture_default_str();
  verify->add_option("--canon", cfg.canon, "method or identity (control)")->capture_default_str();
  verify->add_option("--variant", cfg.variant, "lap key variant: oap, map, fa or all")
      ->default_str("all");
  verify->add_option("--trials", cfg.trials, "trials per harness")
      ->capture_default_str()->envname("SYMCANON_TRIALS")->check(CLI::PositiveNumber);
  verify->add_option("--eps", cfg.eps, "comparison tolerance")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "OAP vs MAP vs FA-lap success table");
  compare->add_option("inputs", cfg.inputs, "graph files (default: built-in corpus)");

  auto* counter = app.add_subcommand("counterexample", "two-branch sign-invariant network counterexample");
  counter->add_option("--functions", cfg.functions, "random functions to test")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  // verify defaults to every lap variant unless one is requested.
  if (verify->parsed() && verify->count("--variant") == 0) cfg.variant = "all";

  try {
    cfg.tol.validate();
    if (canon->parsed()) {
      cfg.subcommand = "canonicalize";
      return cmd_canonicalize(cfg);
    }
    if (frame->parsed()) {
      cfg.subcommand = "frame-size";
      return cmd_frame_size(cfg);
    }
    if (cset->parsed()) {
      cfg.subcommand = "canonical-set";
      return cmd_canonical_set(cfg);
    }
    if (verify->parsed()) {
      cfg.subcommand = "verify";
      return cmd_verify(cfg);
    }
    if (compare->parsed()) {
      cfg.subcommand = "compare";
      return cmd_compare(cfg);
    }
    cfg.subcommand = "counterexample";
    return cmd_counterexample(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
