#include "wpvol/cli.hpp"

#include "wpvol/errors.hpp"
#include "wpvol/verify.hpp"
#include "wpvol/volume.hpp"

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace wpvol {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Request {
  std::optional<int> g, n;
  std::string weights, chamber, wall;
  std::string format = "text";
  std::string form = "theta";
  bool numeric = false;
  int precision = 50;
  bool up_to_symmetry = false;
  int bound = 6;
  std::string cache;
  std::string suite = "all";
  int stress_g = 2, stress_n = 2;
  int phi_offset = 0;
};

int require_g(const Request& r) {
  if (!r.g) throw UsageError("--g is required");
  return *r.g;
}

std::vector<Rational> weights_of(const Request& r) {
  try {
    auto a = parse_weights(r.weights);
    if (r.n && *r.n != static_cast<int>(a.size())) throw UsageError("--n disagrees with the number of weights");
    return a;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad --weights: ") + e.what());
  }
}

Chamber chamber_of(const Request& r) {
  if (!r.weights.empty() && !r.chamber.empty()) throw UsageError("give either --weights or --chamber, not both");
  if (!r.weights.empty()) return classify({require_g(r), weights_of(r)});
  if (r.chamber.empty()) throw UsageError("--weights or --chamber is required");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(r.chamber);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad --chamber JSON: ") + e.what());
  }
  try {
    return chamber_from_json(j, r.g, r.n);
  } catch (const DomainError& e) {
    throw UsageError(std::string("bad --chamber: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad --chamber: ") + e.what());
  }
}

Subset wall_of(const Request& r, int n) {
  if (r.wall.empty()) throw UsageError("--wall is required");
  std::vector<int> labels;
  std::stringstream ss(r.wall);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size() || v < 1 || v > n) throw std::invalid_argument(item);
      labels.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad --wall entry '" + item + "'");
    }
  }
  return set_from_labels(labels);
}

std::string render(const Poly& p, const Request& r) {
  if (r.format == "latex") return to_latex(p);
  if (r.form == "a") return to_a_form(p);
  if (r.form == "L") return to_l_form(p);
  return to_text(p);
}

void print_chamber(std::ostream& out, const Chamber& c, const Request& r) {
  if (r.format == "json") out << to_json(c).dump() << '\n';
  else out << c.str() << '\n';
}

int cmd_classify(const Request& r, std::ostream& out) {
  print_chamber(out, classify({require_g(r), weights_of(r)}), r);
  return 0;
}

int cmd_enumerate(const Request& r, std::ostream& out) {
  if (!r.n) throw UsageError("--n is required");
  const auto list = enumerate_chambers({require_g(r), *r.n}, r.up_to_symmetry, r.bound);
  if (r.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : list) arr.push_back(to_json(c));
    out << nlohmann::json{{"count", list.size()}, {"chambers", arr}}.dump() << '\n';
  } else {
    out << list.size() << " chambers\n";
    for (const auto& c : list) out << c.str() << '\n';
  }
  return 0;
}

int cmd_volume(const Request& r, std::ostream& out) {
  const auto v = default_engine().chamber_volume(chamber_of(r));
  if (r.format == "json") out << to_json(v).dump() << '\n';
  else out << render(v.poly, r) << '\n';
  return 0;
}

int cmd_wallcross(const Request& r, std::ostream& out) {
  const Chamber c = chamber_of(r);
  const auto w = default_engine().wall_crossing_poly(c, wall_of(r, c.n()));
  if (r.format == "json") out << to_json(w).dump() << '\n';
  else out << render(w.poly, r) << '\n';
  return 0;
}

int cmd_eval(const Request& r, std::ostream& out) {
  if (r.weights.empty()) throw UsageError("--weights is required");
  const auto pv = piecewise_volume(default_engine(), {require_g(r), weights_of(r)});
  const std::string num = evaluate_numeric(pv.value, r.precision);
  if (r.format == "json") {
    nlohmann::json j{{"chamber", to_json(pv.chamber)}, {"volume", to_json(pv.volume.poly)}, {"value", to_json(pv.value)}};
    if (r.numeric) j["numeric"] = num;
    out << j.dump() << '\n';
  } else {
    out << (r.numeric ? num : render(pv.value, r)) << '\n';
  }
  return 0;
}

int cmd_verify(const Request& r, std::ostream& out) {
  VerifyOptions opt;
  opt.engine.phi_offset = r.phi_offset;
  opt.stress = {r.stress_g, r.stress_n};
  std::vector<CaseResult> cases;
  try {
    cases = run_verify(r.suite, opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bool ok = true;
  for (const auto& c : cases) ok = ok && c.pass;
  if (r.format == "json") {
    out << verify_report(r.suite, cases).dump(2) << '\n';
  } else {
    for (const auto& c : cases) {
      out << (c.pass ? "PASS " : "FAIL ") << c.id;
      if (!c.pass) out << "\n  expected: " << c.expected << "\n  computed: " << c.computed;
      out << '\n';
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weil-Petersson volumes of conical hyperbolic surfaces across Hassett chambers"};
  app.name("wpvol");
  app.require_subcommand(1);
  app.fallthrough();
  Request r;

  auto common = [&](CLI::App* s) {
    s->add_option("--g", r.g, "genus");
    s->add_option("--n", r.n, "number of marked points");
    s->add_option("--format", r.format, "output format")->check(CLI::IsMember({"text", "json", "latex"}));
  };
  auto chamber_in = [&](CLI::App* s) {
    s->add_option("--weights", r.weights, "comma-separated weights p/q, classified first");
    s->add_option("--chamber", r.chamber, R"(chamber JSON, e.g. '{"light_max":[[3,4]]}')");
    s->add_option("--form", r.form, "text variables: theta, a (a_j = 1 - theta_j/2pi) or L (L_j = i theta_j)")
        ->check(CLI::IsMember({"theta", "a", "L"}));
  };
  app.add_option("--cache", r.cache, "intersection-number cache file (default: $WPVOL_CACHE)");
  app.footer("Environment: WPVOL_CACHE names the intersection-number cache file when --cache is absent.\nExit codes: 0 success, 1 domain error or failed verification, 2 usage error.");

  auto* chamber = app.add_subcommand("chamber", "classify weights or enumerate chambers");
  chamber->require_subcommand(1);
  auto* classify_cmd = chamber->add_subcommand("classify", "chamber containing a weight vector");
  common(classify_cmd);
  classify_cmd->add_option("--weights", r.weights, "comma-separated weights p/q")->required();
  auto* enumerate_cmd = chamber->add_subcommand("enumerate", "all realizable chambers of D_{g,n}");
  common(enumerate_cmd);
  enumerate_cmd->add_flag("--up-to-symmetry", r.up_to_symmetry, "one chamber per permutation orbit");
  enumerate_cmd->add_option("--bound", r.bound, "largest n allowed (default 6)");

  auto* volume = app.add_subcommand("volume", "volume polynomial of a chamber");
  common(volume);
  chamber_in(volume);
  auto* wallcross = app.add_subcommand("wallcross", "wall-crossing polynomial across W_S from the chamber above");
  common(wallcross);
  chamber_in(wallcross);
  wallcross->add_option("--wall", r.wall, "wall set S, e.g. 1,2");
  auto* eval = app.add_subcommand("eval", "volume evaluated at a weight vector");
  common(eval);
  eval->add_option("--weights", r.weights, "comma-separated weights p/q")->required();
  eval->add_option("--form", r.form, "text variables")->check(CLI::IsMember({"theta", "a", "L"}));
  eval->add_flag("--numeric", r.numeric, "decimal value with pi numeric");
  eval->add_option("--precision", r.precision, "significant digits for --numeric (default 50)")
      ->check(CLI::Range(1, 100000));
  auto* verify = app.add_subcommand("verify", "run the fixture and invariant suites");
  verify->add_option("--format", r.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--suite", r.suite, "paper, invariants, stress or all")
      ->check(CLI::IsMember({"paper", "invariants", "stress", "all"}));
  verify->add_option("--stress-g", r.stress_g, "genus of the stress space (default 2)");
  verify->add_option("--stress-n", r.stress_n, "points of the stress space (default 2)");
  verify->add_option("--phi-offset", r.phi_offset, "testing hook: shift phi_S by k * 2 pi (should make checks fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string cache = r.cache;
  if (cache.empty()) {
    if (const char* env = std::getenv("WPVOL_CACHE")) cache = env;
  }
  try {
    if (!cache.empty()) default_intersection_cache().load(cache);
    int code = 0;
    if (*classify_cmd) code = cmd_classify(r, out);
    else if (*enumerate_cmd) code = cmd_enumerate(r, out);
    else if (*volume) code = cmd_volume(r, out);
    else if (*wallcross) code = cmd_wallcross(r, out);
    else if (*eval) code = cmd_eval(r, out);
    else if (*verify) code = cmd_verify(r, out);
    if (!cache.empty()) default_intersection_cache().save(cache);
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wpvol
