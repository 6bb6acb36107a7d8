#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iepg/blocksolver.hpp"
#include "iepg/errors.hpp"
#include "iepg/graph.hpp"
#include "iepg/io.hpp"
#include "iepg/rng.hpp"
#include "iepg/spectrum.hpp"
#include "iepg/ssp.hpp"

using nlohmann::json;

namespace {

// exit codes: 0 success, 1 malformed input, 2 spectrum rejected by a proved
// bound, 3 no certificate (search or numerics failed)
constexpr int kExitOk = 0;
constexpr int kExitMalformed = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNotCertified = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& field) {
  std::vector<int> out;
  for (const std::string& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument("junk");
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(field + ": expected a comma-separated integer list, got '" +
                                  item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(field + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& field) {
  std::vector<double> out;
  for (const std::string& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument("junk");
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(field + ": expected a comma-separated number list, got '" +
                                  item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(field + ": empty list");
  return out;
}

/// Parsed --graph value. family/args stay set for the mini-language families
/// so the realize command can route family-specific feasibility bounds.
struct GraphChoice {
  iepg::Graph graph{0, {}};
  std::string family;
  std::vector<int> args;
};

GraphChoice parse_graph(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument(
        "graph: expected family:args or file:path, got '" + spec + "'");
  GraphChoice out;
  out.family = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);

  if (out.family == "file") {
    const std::string text = read_file(rest);
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{')
      out.graph = iepg::io::graph_from_json(json::parse(text));
    else
      out.graph = iepg::io::graph_from_text(text);
    return out;
  }

  out.args = parse_int_list(rest, "graph");
  const auto want = [&](std::size_t n, const char* shape) {
    if (out.args.size() != n)
      throw std::invalid_argument("graph: " + out.family + " takes " + shape);
  };
  if (out.family == "complete") {
    want(1, "one argument (order)");
    out.graph = iepg::complete(out.args[0]);
  } else if (out.family == "path") {
    want(1, "one argument (order)");
    out.graph = iepg::path(out.args[0]);
  } else if (out.family == "star") {
    want(1, "one argument (order)");
    out.graph = iepg::star(out.args[0]);
  } else if (out.family == "lollipop") {
    want(2, "two arguments (clique order, path length)");
    out.graph = iepg::lollipop(out.args[0], out.args[1]);
  } else if (out.family == "barbell") {
    want(3, "three arguments (clique, path length, clique)");
    out.graph = iepg::barbell(out.args[0], out.args[1], out.args[2]);
  } else if (out.family == "clique_path") {
    out.graph = iepg::clique_path(out.args);
  } else if (out.family == "clique_star") {
    out.graph = iepg::clique_star(out.args);
  } else if (out.family == "corona") {
    want(1, "one argument (clique order)");
    out.graph = iepg::corona_complete(out.args[0]);
  } else {
    throw std::invalid_argument("graph: unknown family '" + out.family + "'");
  }
  return out;
}

std::vector<double> parse_spectrum(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) {
    std::string text = read_file(spec.substr(5));
    for (char& c : text)
      if (c == ',' || c == '\n' || c == '\t' || c == '\r') c = ' ';
    std::istringstream in(text);
    std::vector<double> out;
    double v = 0.0;
    while (in >> v) out.push_back(v);
    std::string leftover;
    in.clear();
    if (in >> leftover)
      throw std::invalid_argument("spectrum: file holds non-numeric data");
    if (out.empty()) throw std::invalid_argument("spectrum: file holds no values");
    return out;
  }
  return parse_double_list(spec, "spectrum");
}

/// Shared state bound to CLI11 options.
struct Options {
  std::string graph_spec;
  std::string spectrum_spec;
  std::string matrix_spec = "adjacency";
  std::string supergraph_spec;
  std::string multiplicities_spec;
  std::string cert_path;
  std::string out_path;
  std::string demo_name;
  std::uint64_t seed = 0;
  bool trace = false;
  iepg::Tolerances tol;
};

void emit(const json& j, const Options& opt) {
  const std::string text = iepg::io::dump(j);
  std::fputs(text.c_str(), stdout);
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("out: cannot write file: " + opt.out_path);
    out << text;
  }
}

void emit_trace(const iepg::RealizationCertificate& cert, const Options& opt) {
  if (!opt.trace) return;
  for (const std::string& s : cert.stages) std::fprintf(stderr, "stage: %s\n", s.c_str());
}

int run_realize(const Options& opt) {
  const GraphChoice gc = parse_graph(opt.graph_spec);
  const std::vector<double> sigma = parse_spectrum(opt.spectrum_spec);
  if (static_cast<int>(sigma.size()) != gc.graph.order())
    throw std::invalid_argument("spectrum: needs exactly one value per vertex");
  iepg::Rng rng(opt.seed);

  const auto reject = [&](int threshold, const std::string& reason) {
    emit(json{{"infeasible", true}, {"threshold", threshold}, {"reason", reason}}, opt);
    std::fprintf(stderr, "infeasible: %s\n", reason.c_str());
    return kExitInfeasible;
  };

  try {
    iepg::RealizationCertificate cert;
    if (gc.family == "lollipop") {
      cert = iepg::realize_lollipop(gc.args[0], gc.args[1], sigma, rng, opt.tol);
    } else if (gc.family == "barbell") {
      cert = iepg::realize_barbell(gc.args[0], gc.args[1], gc.args[2], sigma, rng, opt.tol);
    } else if (gc.family == "clique_path" ||
               (gc.family == "complete" && gc.graph.order() >= 2)) {
      const std::vector<int> sizes =
          gc.family == "complete" ? std::vector<int>{gc.args[0]} : gc.args;
      const auto check = iepg::feasibility_check_clique_path(sizes, sigma, opt.tol);
      if (check.status == iepg::Feasibility::infeasible)
        return reject(check.threshold, check.reason);
      cert = iepg::realize_block_graph(gc.graph, sigma, rng, opt.tol);
    } else {
      cert = iepg::realize(gc.graph, sigma, rng, opt.tol);
    }
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
    return kExitOk;
  } catch (const iepg::InfeasibleError& e) {
    return reject(e.threshold, e.what());
  }
}

int run_ssp(const Options& opt) {
  const GraphChoice gc = parse_graph(opt.graph_spec);
  iepg::SymMatrix a{0};
  if (opt.matrix_spec == "adjacency") {
    a = iepg::SymMatrix(gc.graph.order());
    for (const auto& [i, j] : gc.graph.edges()) a.set(i, j, 1.0);
  } else if (opt.matrix_spec.rfind("file:", 0) == 0) {
    a = iepg::io::matrix_from_json(json::parse(read_file(opt.matrix_spec.substr(5))));
  } else {
    throw std::invalid_argument("matrix: expected 'adjacency' or 'file:path'");
  }
  iepg::Graph h = gc.graph;
  if (!opt.supergraph_spec.empty()) h = parse_graph(opt.supergraph_spec).graph;
  if (a.order() != h.order())
    throw std::invalid_argument("matrix: order differs from the pattern graph");
  if (!iepg::in_pattern_closed(a, h, opt.tol.zero_tol))
    std::fprintf(stderr,
                 "warning: matrix has support outside the pattern; the verdict "
                 "only applies to the pattern as given\n");
  emit(iepg::io::to_json(iepg::has_ssp(a, h, opt.tol)), opt);
  return kExitOk;
}

int run_feasible(const Options& opt) {
  const GraphChoice gc = parse_graph(opt.graph_spec);
  const std::vector<int> target =
      parse_int_list(opt.multiplicities_spec, "multiplicities");
  const iepg::FeasibilitySearch fs = iepg::feasible_multiplicity(gc.graph, target);
  json out{{"budget_exhausted", fs.budget_exhausted}};
  out["witness"] = fs.witness ? iepg::io::to_json(*fs.witness) : json(nullptr);
  emit(out, opt);
  return kExitOk;
}

int run_verify(const Options& opt) {
  const json cert = json::parse(read_file(opt.cert_path));
  for (const char* field : {"graph", "matrix", "target_spectrum"})
    if (!cert.contains(field))
      throw std::invalid_argument(std::string("certificate: missing field '") + field + "'");
  const iepg::Graph g = iepg::io::graph_from_json(cert["graph"]);
  const iepg::SymMatrix a = iepg::io::matrix_from_json(cert["matrix"]);
  if (!cert["target_spectrum"].is_array())
    throw std::invalid_argument("certificate: field 'target_spectrum' must be an array");
  std::vector<double> target;
  for (const auto& v : cert["target_spectrum"]) {
    if (!v.is_number())
      throw std::invalid_argument("certificate: field 'target_spectrum' must hold numbers");
    target.push_back(v.get<double>());
  }
  if (a.order() != g.order() || static_cast<int>(target.size()) != g.order())
    throw std::invalid_argument("certificate: graph, matrix and spectrum sizes disagree");

  double scale = 1.0;
  for (double v : target) scale = std::max(scale, 1.0 + std::abs(v));
  const double deviation = iepg::multiset_distance(iepg::eigvals(a), target);
  const bool pattern_ok = iepg::in_pattern_strict(a, g, opt.tol.zero_tol);
  const bool valid = pattern_ok && deviation <= 1e-6 * scale;
  emit(json{{"valid", valid},
            {"spectral_deviation", deviation},
            {"pattern_ok", pattern_ok}},
       opt);
  if (!valid) {
    std::fprintf(stderr, "verify: certificate checks failed\n");
    return kExitNotCertified;
  }
  return kExitOk;
}

int run_demo(Options opt) {
  iepg::Rng rng(opt.seed);
  const std::string& name = opt.demo_name;
  if (name == "g94") {
    const auto cert = iepg::realize_block_graph(iepg::corona_complete(3),
                                                {5, 5, 1, 2, 3, 4}, rng, opt.tol);
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
  } else if (name == "g117") {
    // block graph, realized through its pendant-clique blowup structure
    const iepg::BlowupSpec spec = iepg::blowup(iepg::star(4), {1, 2, 2, 1});
    const std::vector<double> sigma{-1, -1, -1, 0, 1, 2};
    const auto r = iepg::realize_blowup_of(spec, sigma, rng, opt.tol);
    iepg::RealizationCertificate cert;
    cert.graph = iepg::blowup_graph(spec);
    cert.target = sigma;
    std::sort(cert.target.begin(), cert.target.end());
    cert.matrix = r.matrix;
    cert.reduced_ssp = r.base_ssp;
    cert.spectral_deviation =
        iepg::multiset_distance(iepg::eigvals(r.matrix), cert.target);
    cert.pattern_ok = iepg::in_pattern_strict(r.matrix, cert.graph, opt.tol.zero_tol);
    cert.stages = {"blowup of a four-vertex star, multiplicities 1,2,2,1"};
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
  } else if (name == "g130") {
    const auto cert =
        iepg::realize_barbell(3, 0, 3, {1, 1, 2, 3, 4, 4}, rng, opt.tol);
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
  } else if (name == "g150") {
    const iepg::Graph g =
        iepg::blowup_graph(iepg::blowup(iepg::path(4), {1, 2, 2, 1}));
    const auto cert = iepg::realize(g, {-1, -1, -1, 0, 1, 2}, rng, opt.tol);
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
  } else if (name == "lollipop63") {
    const auto cert =
        iepg::realize_lollipop(6, 3, {1, 2, 3, 4, 5, 5, 5, 5, 5}, rng, opt.tol);
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
  } else if (name == "barbell623") {
    const auto cert = iepg::realize_barbell(
        6, 2, 3, {1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 6}, rng, opt.tol);
    emit_trace(cert, opt);
    emit(iepg::io::to_json(cert), opt);
  } else if (name == "star-ssp") {
    const iepg::Graph g = iepg::star(5);
    iepg::SymMatrix a(g.order());
    for (const auto& [i, j] : g.edges()) a.set(i, j, 1.0);
    emit(iepg::io::to_json(iepg::has_ssp(a, g, opt.tol)), opt);
  } else {
    throw std::invalid_argument(
        "demo: unknown name '" + name +
        "' (expected g94, g117, g130, g150, lollipop63, barbell623, star-ssp)");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realize spectra as symmetric matrices on graphs"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "random seed (default 0)");
    sub->add_option("--tol-eig", opt.tol.eig_tol, "eigenvalue residual tolerance");
    sub->add_option("--tol-zero", opt.tol.zero_tol, "structural zero threshold");
    sub->add_option("--tol-group", opt.tol.group_tol, "eigenvalue grouping width");
    sub->add_option("--out", opt.out_path, "also write the JSON output to this file");
    sub->add_flag("--trace", opt.trace, "log pipeline stages to stderr");
  };

  CLI::App* realize = app.add_subcommand("realize", "realize a spectrum on a graph");
  realize->add_option("--graph", opt.graph_spec, "family:args or file:path")->required();
  realize->add_option("--spectrum", opt.spectrum_spec, "comma list or file:path")->required();
  add_common(realize);

  CLI::App* ssp = app.add_subcommand("ssp", "strong spectral property verdict");
  ssp->add_option("--graph", opt.graph_spec, "family:args or file:path")->required();
  ssp->add_option("--matrix", opt.matrix_spec, "'adjacency' or file:path (default adjacency)");
  ssp->add_option("--supergraph", opt.supergraph_spec,
                  "test relative to this larger pattern instead of the graph itself");
  add_common(ssp);

  CLI::App* feasible =
      app.add_subcommand("feasible", "search for a multiplicity witness");
  feasible->add_option("--graph", opt.graph_spec, "family:args or file:path")->required();
  feasible->add_option("--multiplicities", opt.multiplicities_spec, "comma list of counts")
      ->required();
  add_common(feasible);

  CLI::App* verify = app.add_subcommand("verify", "re-check a saved certificate");
  verify->add_option("--cert", opt.cert_path, "certificate JSON file")->required();
  add_common(verify);

  CLI::App* demo = app.add_subcommand("demo", "run a named worked example");
  demo->add_option("name", opt.demo_name, "g94 g117 g130 g150 lollipop63 barbell623 star-ssp")
      ->required();
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformed;
  }

  try {
    if (realize->parsed()) return run_realize(opt);
    if (ssp->parsed()) return run_ssp(opt);
    if (feasible->parsed()) return run_feasible(opt);
    if (verify->parsed()) return run_verify(opt);
    if (demo->parsed()) return run_demo(opt);
    std::fprintf(stderr, "error: no subcommand\n");
    return kExitMalformed;
  } catch (const iepg::NotCertifiedError& e) {
    std::fprintf(stderr, "not certified: %s\n", e.what());
    return kExitNotCertified;
  } catch (const iepg::ConstructionError& e) {
    std::fprintf(stderr, "construction failed: %s\n", e.what());
    return kExitNotCertified;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformed;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMalformed;
  }
}
