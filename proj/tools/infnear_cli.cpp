#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infnear/cartier.hpp"
#include "infnear/dsl.hpp"
#include "infnear/properties.hpp"
#include "infnear/report_json.hpp"
#include "infnear/singularity.hpp"
#include "infnear/synthesis.hpp"

namespace {

using namespace infnear;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSingular = 2;
constexpr int kExitInternal = 3;

struct Options {
  std::string input;
  std::string output;
  std::string cluster;
  std::string format = "json";
  std::string view = "enriques";
  std::string at;
  std::string alpha;
  std::string emit_cluster;
  std::string seed_point;
  std::uint64_t seed = 1;
  std::size_t rounds = 200;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {}
  void finish() {
    if (path_.empty())
      std::cout << buf_.str();
    else
      write_file(path_, buf_.str());
  }
  std::ostream& out() { return buf_; }

 private:
  std::string path_;
  std::ostringstream buf_;
};

std::vector<ClusterDocument> load(const Options& o) {
  auto docs = parse_clusters(read_file(o.input));
  if (docs.empty()) throw InputError(o.input + " holds no cluster");
  return docs;
}

ClusterDocument pick(const Options& o) {
  auto docs = load(o);
  if (!o.cluster.empty()) {
    for (auto& d : docs)
      if (d.name == o.cluster) return d;
    throw InputError("no cluster named " + o.cluster);
  }
  if (docs.size() != 1) throw InputError("file holds several clusters; choose one with --cluster");
  return docs.front();
}

WeightedCluster base_cluster(const ClusterDocument& d) {
  d.skeleton.require_valid();
  auto k = d.cluster();
  if (!is_consistent(k)) throw InputError("cluster " + d.name + " is not consistent; run unload first");
  return k;
}

BoundaryPoint resolve_at(const WeightedCluster& k, const std::string& at) {
  if (at.size() > 1 && at[0] == 'c' && std::all_of(at.begin() + 1, at.end(), ::isdigit)) {
    const auto comps = zero_excess_components(k);
    const auto i = std::stoul(at.substr(1));
    if (i >= comps.size())
      throw InputError("component " + at + " does not exist; there are " + std::to_string(comps.size()));
    return BoundaryPoint::free_on(comps[i].front());
  }
  return parse_boundary_point(k.skeleton, at);
}

int cmd_validate(const Options& o) {
  Sink sink(o.output);
  bool bad = false;
  for (const auto& d : load(o)) {
    auto diags = d.skeleton.validate();
    if (!diags.empty()) {
      bad = true;
      for (const auto& g : diags)
        sink.out() << d.name << ": " << d.skeleton.label(g.point) << ": " << g.rule << ": " << g.message << "\n";
      continue;
    }
    const auto k = d.cluster();
    sink.out() << d.name << ": valid, " << k.size() << " points, "
               << (is_consistent(k) ? "consistent" : "not consistent") << "\n";
  }
  sink.finish();
  return bad ? kExitInput : kExitOk;
}

int cmd_unload(const Options& o) {
  Sink sink(o.output);
  for (const auto& d : load(o)) {
    d.skeleton.require_valid();
    auto res = unload(d.cluster());
    if (o.format == "json") {
      auto j = cluster_json(res.cluster, d.name);
      j["trace"] = trace_json(res.cluster.skeleton, res.trace);
      sink.out() << j.dump(2) << "\n";
    } else {
      sink.out() << serialize(res.cluster, d.name);
    }
  }
  sink.finish();
  return kExitOk;
}

int cmd_analyze(const Options& o) {
  const auto d = pick(o);
  const auto k = base_cluster(d);
  const auto rep = analyze(k, resolve_at(k, o.at));
  Sink sink(o.output);
  if (o.format == "dot") {
    if (rep.smooth) throw InputError("the point is smooth; there is no resolution graph");
    sink.out() << dual_dot(k.skeleton, rep.resolution_graph, d.name + "_Q");
  } else {
    sink.out() << report_json(k, rep).dump(2) << "\n";
  }
  sink.finish();
  return rep.smooth ? kExitOk : kExitSingular;
}

int cmd_singularities(const Options& o) {
  const auto d = pick(o);
  const auto k = base_cluster(d);
  const auto reports = enumerate_singularities(k);
  Sink sink(o.output);
  if (o.format == "dot") {
    for (std::size_t i = 0; i < reports.size(); ++i)
      sink.out() << dual_dot(k.skeleton, reports[i].resolution_graph, d.name + "_c" + std::to_string(i));
  } else {
    Json all = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      auto j = report_json(k, reports[i]);
      Json tagged;
      tagged["component"] = "c" + std::to_string(i);
      for (auto& [key, value] : j.items()) tagged[key] = value;
      all.push_back(tagged);
    }
    sink.out() << all.dump(2) << "\n";
  }
  sink.finish();
  return reports.empty() ? kExitOk : kExitSingular;
}

Alpha parse_alpha(const ClusterSkeleton& s, const std::string& text) {
  Alpha alpha;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("expected P=n in --alpha, got '" + item + "'");
    auto p = s.find(item.substr(0, eq));
    if (!p) throw InputError("unknown point '" + item.substr(0, eq) + "' in --alpha");
    std::int64_t n = 0;
    const auto value = item.substr(eq + 1);
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc{} || ptr != value.data() + value.size()) throw InputError("bad multiplicity '" + value + "'");
    if (!alpha.emplace(*p, n).second) throw InputError("point '" + item.substr(0, eq) + "' given twice in --alpha");
  }
  return alpha;
}

int cmd_cartier(const Options& o) {
  const auto d = pick(o);
  const auto k = base_cluster(d);
  const auto rep = analyze(k, resolve_at(k, o.at));
  if (rep.smooth) throw InputError("the point given by --at is smooth");
  CartierRequest req{k, rep, parse_alpha(k.skeleton, o.alpha), {}};
  if (!o.seed_point.empty()) {
    auto p = k.skeleton.find(o.seed_point);
    if (!p) throw InputError("unknown seed point '" + o.seed_point + "'");
    req.seed_point = *p;
  }
  const auto res = build_cartier(req);
  const auto dsl = serialize(res.t, d.name + "_T");
  if (!o.emit_cluster.empty()) write_file(o.emit_cluster, dsl);
  Sink sink(o.output);
  auto cert = certificate_json(k.skeleton, res.certificate);
  Json added = Json::array();
  for (auto a : res.added) added.push_back(res.t.skeleton.label(a));
  cert["added"] = added;
  cert["excess_history"] = res.dicritical_excess;
  cert["micro_steps"] = res.micro_steps;
  sink.out() << dsl << cert.dump(2) << "\n";
  sink.finish();
  return res.certificate.passed() ? kExitOk : kExitInternal;
}

int cmd_synthesize(const Options& o) {
  const auto spec = parse_graph_spec(read_file(o.input));
  const auto res = synthesize(spec);
  const auto dsl = serialize(res.cluster, "synth");
  if (!o.emit_cluster.empty()) write_file(o.emit_cluster, dsl);
  Sink sink(o.output);
  auto j = report_json(res.cluster, res.report);
  j["contracted_branches"] = count_contracted_branches(spec);
  sink.out() << dsl << j.dump(2) << "\n";
  sink.finish();
  return kExitOk;
}

int cmd_export(const Options& o) {
  Sink sink(o.output);
  for (const auto& d : load(o)) {
    d.skeleton.require_valid();
    const auto k = d.cluster();
    if (o.format == "dsl") {
      sink.out() << serialize(k, d.name);
    } else if (o.format == "json") {
      sink.out() << cluster_json(k, d.name).dump(2) << "\n";
    } else if (o.view == "dual") {
      sink.out() << dual_dot(k.skeleton, dual_graph(k.skeleton), d.name);
    } else {
      sink.out() << enriques_dot(k, d.name);
    }
  }
  sink.finish();
  return kExitOk;
}

int cmd_selftest(const Options& o) {
  using props::Outcome;
  std::mt19937_64 rng(o.seed);
  std::vector<Outcome> outcomes;
  auto named = [&](std::string n) -> Outcome& {
    for (auto& x : outcomes)
      if (x.name == n) return x;
    outcomes.push_back(Outcome{std::move(n)});
    return outcomes.back();
  };
  const auto clusters = props::corpus(o.seed, o.rounds);
  for (const auto& k : clusters) {
    props::proximity_inverse(k.skeleton, named("proximity matrix inverse"));
    props::dual_graph_tree(k.skeleton, named("dual graph is a tree"));
    props::serialization_round_trip(k, named("serialization round trip"));
    const auto raw = props::random_weights(rng, k.skeleton, -3, 5);
    props::unloading_order_independent(rng, raw, named("unloading order independence"));
    props::unloading_matches_brute_force(props::random_weights(rng, k.skeleton, 0, 4), named("unloading vs brute force"));
    props::same_component_same_report(k, named("reports per component"));
    for (const auto& w : boundary_points(k.skeleton)) {
      const auto rep = analyze(k, w);
      props::extension_invariants(k, rep, named("extension invariants"));
      props::formula_equivalences(k, rep, named("formula equivalences"));
      props::bound_chain(k, rep, named("bound chain"));
      props::minimality_triple(k, rep, named("minimality tests agree"));
      props::excess_in_chains(k, rep, named("excess in chains"));
    }
    for (const auto& rep : enumerate_singularities(k))
      props::cartier_certified(k, rep, props::random_alpha(rng, rep, 5), named("cartier certificate"));
  }
  for (std::size_t i = 0; i < o.rounds / 4 + 1; ++i)
    props::synthesis_round_trip(props::graph_spec(oracle::random_minimal_graph(rng, 8, 6)), named("synthesis round trip"));

  Sink sink(o.output);
  bool ok = true;
  for (const auto& x : outcomes) {
    const bool pass = x.violations == 0;
    ok = ok && pass;
    sink.out() << (pass ? "PASS " : "FAIL ") << x.name << " (" << x.checked << " checks, " << x.violations
               << " violations)\n";
    if (!pass) sink.out() << x.first_violation << "\n";
  }
  sink.finish();
  return ok ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted clusters of infinitely near points and the singularities of their blow-ups"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("file", o.input, what)->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", o.output, "Write the main output to this file");
  };
  auto cluster_choice = [&](CLI::App* sub) {
    sub->add_option("--cluster", o.cluster, "Cluster to use when the file holds several");
  };

  auto* validate = app.add_subcommand("validate", "Check the cluster axioms and report consistency");
  input(validate, "Cluster file");

  auto* unload_cmd = app.add_subcommand("unload", "Unload every cluster in the file");
  input(unload_cmd, "Cluster file");
  unload_cmd->add_option("--format", o.format, "dsl or json")->check(CLI::IsMember({"dsl", "json"}))->default_str("dsl");

  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze the point of the blow-up given by --at");
  input(analyze_cmd, "Cluster file");
  cluster_choice(analyze_cmd);
  analyze_cmd->add_option("--at", o.at, "free:P, sat:P,Q or a component id cN")->required();
  analyze_cmd->add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

  auto* sing = app.add_subcommand("singularities", "Report every singular point of the blow-up");
  input(sing, "Cluster file");
  cluster_choice(sing);
  sing->add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

  auto* cartier = app.add_subcommand("cartier", "Build a cluster with prescribed intersections at a singular point");
  input(cartier, "Cluster file");
  cluster_choice(cartier);
  cartier->add_option("--at", o.at, "free:P, sat:P,Q or a component id cN")->required();
  cartier->add_option("--alpha", o.alpha, "P=n,... for every component through the point")->required();
  cartier->add_option("--emit-cluster", o.emit_cluster, "Also write the resulting cluster to this file");
  cartier->add_option("--seed-point", o.seed_point, "Contracted point over which the first free point is taken");

  auto* synth = app.add_subcommand("synthesize", "Realize a minimal resolution graph by a cluster");
  input(synth, "Graph file");
  synth->add_option("--emit-cluster", o.emit_cluster, "Also write the cluster to this file");

  auto* exp = app.add_subcommand("export", "Write clusters as DSL, JSON or DOT");
  input(exp, "Cluster file");
  exp->add_option("--format", o.format, "dsl, json or dot")->check(CLI::IsMember({"dsl", "json", "dot"}))->required();
  exp->add_option("--view", o.view, "enriques or dual (DOT only)")->check(CLI::IsMember({"enriques", "dual"}));

  auto* self = app.add_subcommand("selftest", "Run the randomized property suites");
  self->add_option("--seed", o.seed, "Random seed");
  self->add_option("--rounds", o.rounds, "Number of random clusters")->check(CLI::PositiveNumber);
  self->add_option("-o,--output", o.output, "Write the summary to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  if (unload_cmd->parsed() && !unload_cmd->count("--format")) o.format = "dsl";

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (unload_cmd->parsed()) return cmd_unload(o);
    if (analyze_cmd->parsed()) return cmd_analyze(o);
    if (sing->parsed()) return cmd_singularities(o);
    if (cartier->parsed()) return cmd_cartier(o);
    if (synth->parsed()) return cmd_synthesize(o);
    if (exp->parsed()) return cmd_export(o);
    if (self->parsed()) return cmd_selftest(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
