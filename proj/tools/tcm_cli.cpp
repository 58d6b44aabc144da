// SPDX-License-Identifier: MIT
// Command-line front end: enumeration, sampling, moments, cumulants, Gram and
// Weingarten tables, low-degree reports, sweeps and the verification suite.
#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <regex>
#include <sstream>

#include "tcm/combinatorics.hpp"
#include "tcm/contraction.hpp"
#include "tcm/cumulants.hpp"
#include "tcm/error.hpp"
#include "tcm/io.hpp"
#include "tcm/lowdeg.hpp"
#include "tcm/matching.hpp"
#include "tcm/weingarten.hpp"
#include "tcm/wigner.hpp"

using json = nlohmann::json;
using namespace tcm;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSeedEnv = "TCM_SEED";

enum Exit { kPass = 0, kUsage = 1, kNumeric = 2, kCapacity = 3 };

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string format = "csv";
};

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw InputError(std::string(kSeedEnv) + " must be an unsigned integer");
  }
}

// Writes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// CSV preamble echoing the configuration.
void csv_header(std::ostream& os, const json& config) {
  os << "# tcm " << kVersion << "\n# config " << config.dump() << "\n";
}

void emit(const Common& c, const json& config, const json& body) {
  Sink sink(c.out);
  json doc = body;
  doc["config"] = config;
  doc["version"] = kVersion;
  sink.os() << doc.dump(2) << "\n";
}

Multigraph load_graph(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') return graph_from_json(spec);
  return read_graph_file(spec);
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

BasisKind parse_kind(const std::string& s) {
  if (s == "closed") return BasisKind::Closed;
  if (s == "pendant") return BasisKind::OpenPendant;
  if (s == "chopped") return BasisKind::OpenChopped;
  throw InputError("unknown basis kind " + s);
}

OpenIndexPolicy parse_policy(const std::string& s) {
  if (s == "distinct") return OpenIndexPolicy::Distinct;
  if (s == "free") return OpenIndexPolicy::Free;
  throw InputError("unknown open index policy " + s);
}

json advantage_json(const AdvantageReport& r) {
  json terms = json::array();
  for (const auto& t : r.degrees)
    terms.push_back({{"d", t.d},
                     {"keys", t.keys},
                     {"beta", vec_json(t.beta)},
                     {"exact", t.exact},
                     {"bound", t.bound},
                     {"min_eig", t.min_eig},
                     {"max_eig", t.max_eig},
                     {"singular", t.singular}});
  json out = {{"model", r.model},        {"p", r.p},
              {"n", r.n},                {"D", r.D},
              {"adv2", r.adv2},          {"bound", r.bound},
              {"lower_constant", r.lower_constant}, {"upper_constant", r.upper_constant},
              {"within_bounds", r.within_bounds()}, {"exact_available", r.exact_available},
              {"certified", r.certified}, {"degrees", terms}};
  if (r.model == "pca") out["lambda"] = r.lambda;
  if (r.model == "wishart") {
    out["r"] = r.r;
    out["a_spec"] = r.a_spec;
    out["xi"] = r.xi;
    out["dominant"] = r.dominant;
  }
  return out;
}

// One line per check of the verification suite.
struct Check {
  std::string group, name;
  bool pass = false;
  double observed = 0, expected = 0, z = 0;
};

std::vector<Check> verify_suite(int p, long n, int d_max, std::size_t trials, std::uint64_t seed) {
  std::vector<Check> out;
  const SeededRng rng(seed);
  // Weingarten at l = 4 against its closed form.
  {
    const WeingartenTable t(4, n, WeingartenOptions{true});
    const double dn = static_cast<double>(n);
    const double id = (dn + 1) / ((dn + 2) * dn * (dn - 1)), other = -1 / ((dn + 2) * dn * (dn - 1));
    const auto& v = t.values();
    const int i_id = t.class_index(partition_code({1, 1})), i_other = t.class_index(partition_code({2}));
    out.push_back({"weingarten", "l=4 identity class", std::abs(v[i_id] - id) <= 1e-12 * std::abs(id), v[i_id], id, 0});
    out.push_back(
        {"weingarten", "l=4 other class", std::abs(v[i_other] - other) <= 1e-12 * std::abs(other), v[i_other], other, 0});
  }
  for (int d = 1; d <= d_max; ++d) {
    if ((p * d) % 2) continue;
    const auto classes = enumerate_closed(d, p);
    double sum = 0.0;
    for (const auto& gc : classes)
      sum += std::pow(factorial_d(p), d) * factorial_d(d) / static_cast<double>(gc.eaut);
    const double expect = to_double(double_factorial(p * d - 1));
    out.push_back({"enumeration", "d=" + std::to_string(d), std::abs(sum - expect) <= 1e-9 * expect, sum, expect, 0});
  }
  CumulantEngine engine(p, n);
  Engine tensor_rng = rng.stream(1).engine(0);
  const SymmetricTensor t = sample_wigner(p, static_cast<int>(n), 1.0, tensor_rng);
  for (int d = 1; d <= d_max; ++d) {
    if ((p * d) % 2) continue;
    for (const auto& gc : enumerate_closed(d, p)) {
      const auto& g = gc.graph;
      // Centered moments have mean zero under the Wigner law.
      double s = 0, s2 = 0;
      const SeededRng wr = rng.stream(2);
      for (std::size_t k = 0; k < trials; ++k) {
        Engine e = wr.engine(k);
        const double m = centered_moment(g, sample_wigner(p, static_cast<int>(n), 1.0, e));
        s += m;
        s2 += m * m;
      }
      const double mean = s / trials, se = std::sqrt(std::max(s2 / trials - mean * mean, 0.0) / trials);
      const double zc = se > 0 ? mean / se : 0.0;
      out.push_back({"centered", g.key(), std::abs(zc) <= 4.0, mean, 0.0, zc});
      // Exact cumulant against the Haar average.
      const double exact = engine.kappa(g, t);
      const McEstimate mc = cumulant_mc(g, t, trials, rng.stream(3));
      out.push_back({"cumulant", g.key(), std::abs(mc.z(exact)) <= 4.0, mc.mean, exact, mc.z(exact)});
      // Spike closed form.
      Engine sr = rng.stream(4).engine(0);
      const Eigen::VectorXd v = sample_sphere(static_cast<int>(n), static_cast<double>(n), sr);
      const double spike = engine.kappa(g, rank_one(v, p));
      const double closed = spike_cumulant(g, n, static_cast<double>(n));
      out.push_back({"spike", g.key(), std::abs(spike - closed) <= 1e-9 * std::max(1.0, std::abs(closed)), spike, closed, 0});
    }
    // Additivity on the first connected and the first disconnected graph.
    bool seen_conn = false, seen_disc = false;
    for (const auto& gc : enumerate_closed(d, p)) {
      const bool conn = component_vertex_sets(gc.graph).size() == 1;
      if ((conn && seen_conn) || (!conn && seen_disc)) continue;
      (conn ? seen_conn : seen_disc) = true;
      Engine br = rng.stream(5).engine(static_cast<std::uint64_t>(d));
      const SymmetricTensor b = sample_wigner(p, static_cast<int>(n), 1.0, br);
      const AdditivityReport rep = verify_additivity(gc.graph, t, b, trials, rng.stream(6), engine);
      out.push_back({"additivity", gc.graph.key(), std::abs(rep.z) <= 5.0, rep.mc.mean, rep.predicted, rep.z});
    }
    // Gram conditioning where it is certified.
    if (certified_degree(p, n, d)) {
      const CumulantGram gram = build_gram(engine, d);
      const double lo = gram.eigenvalues.minCoeff(), hi = gram.eigenvalues.maxCoeff();
      out.push_back({"gram", "d=" + std::to_string(d), lo >= 0.5 && hi <= 2.0, lo, 0.5, hi});
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Tensor cumulants, Weingarten calculus and low-degree analysis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Master seed (default from " + std::string(kSeedEnv) + ")")
        ->each([&](const std::string&) { c.seed_given = true; });
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  int p = 3, d = 2, D = 2, ell = 4, r_bins = 1;
  long n = 10;
  std::vector<long> ns, rs;
  double lambda = 0.0, level = 2.0;
  std::vector<double> lambdas;
  std::size_t trials = 2000;
  bool open = false, exact = false, centered = false;
  std::string graph, tensor, kind = "closed", policy = "distinct", ensemble = "wigner", method = "formula",
              moment_kind = "plain";

  auto* graphs = app.add_subcommand("graphs", "Enumerate p-regular multigraphs up to isomorphism");
  graphs->add_option("--p", p)->required();
  graphs->add_option("--d", d)->required();
  graphs->add_flag("--open", open, "1-open graphs");

  auto* wein = app.add_subcommand("weingarten", "Class-collapsed orthogonal Weingarten table");
  wein->add_option("--ell", ell)->required();
  wein->add_option("--n", n)->required();
  wein->add_flag("--exact", exact, "Rational arithmetic");

  auto* sample = app.add_subcommand("sample", "Draw a tensor and write a snapshot");
  sample->add_option("--ensemble", ensemble)->check(CLI::IsMember({"wigner", "spike", "wishart"}));
  sample->add_option("--p", p)->required();
  sample->add_option("--n", n)->required();
  sample->add_option("--lambda", lambda);
  sample->add_option("--r", r_bins);

  auto* mom = app.add_subcommand("moment", "Graph moment of a tensor snapshot");
  mom->add_option("--graph", graph, "Graph JSON file or inline JSON")->required();
  mom->add_option("--tensor", tensor, "Tensor snapshot")->required();
  mom->add_option("--kind", moment_kind)->check(CLI::IsMember({"plain", "distinct", "centered"}));
  mom->add_option("--policy", policy)->check(CLI::IsMember({"distinct", "free"}));

  auto* cum = app.add_subcommand("cumulant", "Exact (and optionally Monte Carlo) tensor free cumulant");
  cum->add_option("--graph", graph)->required();
  cum->add_option("--tensor", tensor)->required();
  cum->add_flag("--centered", centered);
  cum->add_option("--policy", policy)->check(CLI::IsMember({"distinct", "free"}));
  cum->add_option("--trials", trials, "Monte Carlo trials (0 skips)");

  auto* gram = app.add_subcommand("gram", "Normalized cumulant Gram block");
  gram->add_option("--p", p)->required();
  gram->add_option("--n", n)->required();
  gram->add_option("--d", d)->required();
  gram->add_option("--kind", kind)->check(CLI::IsMember({"closed", "pendant", "chopped"}));

  auto* adv = app.add_subcommand("adv", "Low-degree advantage report");
  adv->require_subcommand(1);
  auto* adv_pca = adv->add_subcommand("pca", "Spiked tensor PCA against Wigner");
  auto* adv_wis = adv->add_subcommand("wishart", "Wishart-like mixture against Wigner");
  for (auto* s : {adv_pca, adv_wis}) {
    s->add_option("--p", p)->required();
    s->add_option("--n", n)->required();
    s->add_option("--D", D)->required();
  }
  adv_pca->add_option("--lambda", lambda)->required();
  adv_wis->add_option("--r", r_bins)->required();

  auto* corr = app.add_subcommand("corr", "Low-degree reconstruction bound");
  corr->require_subcommand(1);
  auto* corr_pca = corr->add_subcommand("pca", "Odd-p tensor PCA");
  corr_pca->add_option("--p", p)->required();
  corr_pca->add_option("--n", n)->required();
  corr_pca->add_option("--lambda", lambda)->required();
  corr_pca->add_option("--D", D)->required();

  auto* sweep = app.add_subcommand("sweep", "Grid sweeps as CSV");
  sweep->require_subcommand(1);
  auto* sweep_pca = sweep->add_subcommand("pca", "Adv^2 over (n, lambda)");
  sweep_pca->add_option("--p", p)->required();
  sweep_pca->add_option("--n", ns)->required()->delimiter(',');
  sweep_pca->add_option("--D", D)->required();
  sweep_pca->add_option("--lambda-grid", lambdas)->required()->delimiter(',');
  sweep_pca->add_option("--level", level, "Crossing level reported per n");
  auto* sweep_wis = sweep->add_subcommand("wishart", "Adv^2 over (n, r)");
  sweep_wis->add_option("--p", p)->required();
  sweep_wis->add_option("--n", ns)->required()->delimiter(',');
  sweep_wis->add_option("--r", rs)->required()->delimiter(',');
  sweep_wis->add_option("--D", D)->required();

  auto* cmax = app.add_subcommand("cmax", "Maximal even-coloring color count");
  cmax->add_option("--graph", graph)->required();
  cmax->add_option("--method", method)->check(CLI::IsMember({"coloring", "formula", "bfs"}));

  auto* wig = app.add_subcommand("wigmoment", "Exact Wigner graph moment");
  wig->add_option("--graph", graph)->required();
  wig->add_option("--n", n)->required();

  auto* verify = app.add_subcommand("verify", "Run the identity suite");
  verify->add_option("--p", p)->required();
  verify->add_option("--n", n)->required();
  verify->add_option("--d-max", d)->required();
  verify->add_option("--trials", trials);

  for (auto* s : {graphs, wein, sample, mom, cum, gram, adv_pca, adv_wis, corr_pca, sweep_pca, sweep_wis, cmax, wig,
                  verify})
    add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  }
  if (!c.seed_given) c.seed = default_seed();

  json config = {{"seed", c.seed}};
  for (const auto* s : app.get_subcommands()) {
    config["command"] = s->get_name();
    for (const auto* sub : s->get_subcommands()) config["model"] = sub->get_name();
  }
  auto record = [&](std::initializer_list<std::pair<const char*, json>> items) {
    for (const auto& [k, v] : items) config[k] = v;
  };

  if (*graphs) {
    record({{"p", p}, {"d", d}, {"open", open}});
    const auto classes = open ? enumerate_open(d, p) : enumerate_closed(d, p);
    if (c.format == "json") {
      json list = json::array();
      for (const auto& gc : classes)
        list.push_back({{"key", gc.graph.key()}, {"eaut", gc.eaut}, {"graph", json::parse(graph_to_json(gc.graph))}});
      emit(c, config, {{"graphs", list}});
    } else {
      Sink sink(c.out);
      csv_header(sink.os(), config);
      sink.os() << "key,eaut,components,graph_json\n";
      for (const auto& gc : classes)
        sink.os() << gc.graph.key() << "," << gc.eaut << "," << component_vertex_sets(gc.graph).size() << ",\""
                  << std::regex_replace(graph_to_json(gc.graph), std::regex("\""), "\"\"") << "\"\n";
    }
  } else if (*wein) {
    record({{"ell", ell}, {"n", n}, {"exact", exact}});
    WeingartenOptions opt;
    opt.exact = exact;
    const WeingartenTable table(ell, n, opt);
    Sink sink(c.out);
    csv_header(sink.os(), config);
    sink.os() << "cycle_type,value" << (table.is_exact() ? ",rational" : "") << "\n";
    for (std::size_t i = 0; i < table.classes().size(); ++i) {
      std::string part;
      for (int x : table.classes()[i]) part += (part.empty() ? "" : " ") + std::to_string(x);
      sink.os() << part << "," << std::setprecision(17) << table.values()[i];
      if (table.is_exact()) sink.os() << "," << rational_string((*table.exact_values())[i]);
      sink.os() << "\n";
    }
  } else if (*sample) {
    record({{"ensemble", ensemble}, {"p", p}, {"n", n}, {"lambda", lambda}, {"r", r_bins}});
    if (c.out.empty()) throw InputError("sample needs --out for the snapshot");
    Engine e = SeededRng(c.seed).engine(0);
    SymmetricTensor t;
    if (ensemble == "wigner") t = sample_wigner(p, static_cast<int>(n), 1.0, e);
    if (ensemble == "spike") t = spiked_sample(p, static_cast<int>(n), lambda, e).y;
    if (ensemble == "wishart") t = wishart_mixture_sample(wishart_like_A(p, static_cast<int>(n)), r_bins, e);
    write_tensor_file(c.out, t);
    std::cout << json{{"config", config}, {"written", c.out}, {"entries", t.size()}}.dump() << "\n";
  } else if (*mom) {
    const Multigraph g = load_graph(graph);
    const SymmetricTensor t = read_tensor_file(tensor);
    record({{"graph", g.key()}, {"tensor", tensor}, {"kind", moment_kind}, {"policy", policy}});
    json body;
    if (g.is_open()) {
      Eigen::VectorXd v;
      if (moment_kind == "plain") v = open_moment(g, t);
      if (moment_kind == "distinct") v = open_distinct_moment(g, t, parse_policy(policy));
      if (moment_kind == "centered") v = open_centered_moment(g, t, parse_policy(policy));
      body["value"] = vec_json(v);
    } else {
      double v = 0.0;
      if (moment_kind == "plain") v = moment(g, t);
      if (moment_kind == "distinct") v = distinct_moment(g, t);
      if (moment_kind == "centered") v = centered_moment(g, t);
      body["value"] = v;
    }
    emit(c, config, body);
  } else if (*cum) {
    const Multigraph g = load_graph(graph);
    const SymmetricTensor t = read_tensor_file(tensor);
    record({{"graph", g.key()}, {"tensor", tensor}, {"centered", centered}, {"policy", policy}, {"trials", trials}});
    CumulantEngine engine(g.p(), t.n());
    json body;
    const OpenIndexPolicy pol = parse_policy(policy);
    const CenterVector x = centered ? default_centers(g) : CenterVector(component_vertex_sets(g).size(), 0.0);
    if (g.is_open()) {
      body["exact"] = vec_json(engine.open_centered(g, t, x, pol));
      if (trials > 0) {
        const McVector mc = open_cumulant_mc(g, t, x, pol, trials, SeededRng(c.seed));
        body["mc_mean"] = vec_json(mc.mean);
        body["mc_se"] = vec_json(mc.se);
      }
    } else {
      const double value = engine.centered(g, t, x);
      body["exact"] = value;
      if (trials > 0) {
        const McEstimate mc = cumulant_mc(g, t, x, trials, SeededRng(c.seed));
        body["mc_mean"] = mc.mean;
        body["mc_se"] = mc.se;
        body["z"] = mc.z(value);
      }
    }
    emit(c, config, body);
  } else if (*gram) {
    record({{"p", p}, {"n", n}, {"d", d}, {"kind", kind}});
    CumulantEngine engine(p, n);
    const CumulantGram g = build_gram(engine, d, parse_kind(kind));
    if (c.format == "json") {
      emit(c, config, {{"keys", g.keys}, {"matrix", mat_json(g.matrix)}, {"eigenvalues", vec_json(g.eigenvalues)}});
    } else {
      Sink sink(c.out);
      csv_header(sink.os(), config);
      sink.os() << "key";
      for (const auto& k : g.keys) sink.os() << "," << k;
      sink.os() << "\n" << std::setprecision(17);
      for (std::size_t i = 0; i < g.keys.size(); ++i) {
        sink.os() << g.keys[i];
        for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) sink.os() << "," << g.matrix(static_cast<Eigen::Index>(i), j);
        sink.os() << "\n";
      }
      sink.os() << "# eigenvalues";
      for (Eigen::Index i = 0; i < g.eigenvalues.size(); ++i) sink.os() << " " << g.eigenvalues[i];
      sink.os() << "\n";
    }
  } else if (*adv_pca) {
    record({{"p", p}, {"n", n}, {"lambda", lambda}, {"D", D}});
    emit(c, config, advantage_json(pca_advantage(p, n, lambda, D)));
  } else if (*adv_wis) {
    record({{"p", p}, {"n", n}, {"r", r_bins}, {"D", D}});
    emit(c, config, advantage_json(wishart_advantage(r_bins, D, wishart_like_A(p, static_cast<int>(n)))));
  } else if (*corr_pca) {
    record({{"p", p}, {"n", n}, {"lambda", lambda}, {"D", D}});
    const CorrelationReport rep = pca_correlation_bound(p, n, lambda, D);
    emit(c, config,
         {{"keys", rep.keys},
          {"R", mat_json(rep.R)},
          {"beta", vec_json(rep.beta)},
          {"gamma", vec_json(rep.gamma)},
          {"corr2_bound", rep.corr2_bound},
          {"mmse_bound", rep.mmse_bound},
          {"certified", rep.certified}});
  } else if (*sweep_pca) {
    record({{"p", p}, {"n", ns}, {"D", D}, {"lambda_grid", lambdas}, {"level", level}});
    Sink sink(c.out);
    csv_header(sink.os(), config);
    sink.os() << "p,n,D,lambda,adv2,bound,exact_available";
    for (int k = 1; k <= D; ++k) sink.os() << ",term_d" << k;
    sink.os() << ",crossing\n" << std::setprecision(12);
    for (long nn : ns) {
      CumulantEngine engine(p, nn);
      const PcaAdvantageCurve curve = pca_advantage_curve(engine, D);
      std::optional<double> cross;
      if (!curve.degrees.empty()) cross = curve.crossing(level);
      for (double l : lambdas) {
        const AdvantageReport rep = pca_advantage(engine, l, D);
        sink.os() << p << "," << nn << "," << D << "," << l << "," << rep.adv2 << "," << rep.bound << ","
                  << rep.exact_available;
        for (int k = 1; k <= D; ++k) {
          double term = 0.0;
          for (const auto& t : rep.degrees)
            if (t.d == k) term = t.exact;
          sink.os() << "," << term;
        }
        sink.os() << "," << (cross ? std::to_string(*cross) : "") << "\n";
      }
    }
  } else if (*sweep_wis) {
    record({{"p", p}, {"n", ns}, {"r", rs}, {"D", D}});
    Sink sink(c.out);
    csv_header(sink.os(), config);
    sink.os() << "p,n,r,D,adv2,bound,dominant,exact_available\n" << std::setprecision(12);
    for (long nn : ns) {
      CumulantEngine engine(p, nn);
      const SymmetricTensor a = wishart_like_A(p, static_cast<int>(nn));
      for (long rr : rs) {
        const AdvantageReport rep = wishart_advantage(engine, rr, D, a);
        sink.os() << p << "," << nn << "," << rr << "," << D << "," << rep.adv2 << "," << rep.bound << ","
                  << rep.dominant << "," << rep.exact_available << "\n";
      }
    }
  } else if (*cmax) {
    const Multigraph g = load_graph(graph);
    record({{"graph", g.key()}, {"method", method}});
    int value = 0;
    if (method == "coloring") value = even_colorings(g).c_max;
    if (method == "formula") value = cmax_via_switching(g, SwitchMethod::Formula);
    if (method == "bfs") value = cmax_via_switching(g, SwitchMethod::Bfs);
    emit(c, config, {{"c_max", value}});
  } else if (*wig) {
    const Multigraph g = load_graph(graph);
    record({{"graph", g.key()}, {"n", n}});
    const EvenColoringReport rep = even_colorings(g);
    emit(c, config,
         {{"moment", exact_wigner_moment(g, n)},
          {"c_max", rep.c_max},
          {"w_max", rep.w_max},
          {"maximal_colorings", rep.maximal.size()},
          {"weight_by_colors", rep.weight_by_colors}});
  } else if (*verify) {
    record({{"p", p}, {"n", n}, {"d_max", d}, {"trials", trials}});
    const auto checks = verify_suite(p, n, d, trials, c.seed);
    Sink sink(c.out);
    csv_header(sink.os(), config);
    sink.os() << "status,group,check,observed,expected,z\n" << std::setprecision(12);
    bool all = true;
    for (const auto& k : checks) {
      all = all && k.pass;
      sink.os() << (k.pass ? "PASS" : "FAIL") << "," << k.group << "," << k.name << "," << k.observed << ","
                << k.expected << "," << k.z << "\n";
    }
    return all ? kPass : kNumeric;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  auto fail = [](const char* kind, const std::exception& e, int code) {
    std::cerr << json{{"error", kind}, {"message", e.what()}}.dump() << "\n";
    return code;
  };
  try {
    return run(argc, argv);
  } catch (const CapacityError& e) {
    return fail("capacity", e, kCapacity);
  } catch (const InputError& e) {
    return fail("input", e, kUsage);
  } catch (const NumericError& e) {
    return fail("numeric", e, kNumeric);
  } catch (const std::exception& e) {
    return fail("numeric", e, kNumeric);
  }
}
